//! Arithmetic over the prime field `F_p` for small primes.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::poly::IntPolynomial;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo a prime.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p), "zero has no inverse");
    pow_mod(a, p - 2, p)
}

pub fn reduce(c: &BigInt, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p))
        .to_u64()
        .expect("residue fits in u64")
}

/// A polynomial with coefficients reduced modulo `p`, for fast evaluation.
#[derive(Clone, Debug)]
pub struct FpPoly {
    terms: Vec<(Vec<u32>, u64)>,
    p: u64,
}

impl FpPoly {
    pub fn new(poly: &IntPolynomial, p: u64) -> Self {
        FpPoly {
            terms: poly
                .terms()
                .iter()
                .map(|(m, c)| (m.clone(), reduce(c, p)))
                .filter(|(_, c)| *c != 0)
                .collect(),
            p,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, point: &[u64]) -> u64 {
        let p = self.p;
        self.terms.iter().fold(0, |acc, (m, c)| {
            let v = m
                .iter()
                .zip(point)
                .fold(*c, |t, (&e, &x)| mul_mod(t, pow_mod(x, e as u64, p), p));
            (acc + v) % p
        })
    }
}

/// Rank of a dense matrix over `F_p` (entries already reduced).
pub fn rank_mod(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = inv_mod(rows[rank][c], p);
        for x in rows[rank].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row[c..cols].iter_mut().zip(&pivot_row[c..cols]) {
                    *x = (*x + p - mul_mod(f, y, p)) % p;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Incremental row echelon basis over `F_p` for sparse rows.
#[derive(Debug)]
pub struct SparseEchelon {
    p: u64,
    /// leading column -> normalized row (sorted by column)
    pivots: HashMap<usize, Vec<(usize, u64)>>,
}

impl SparseEchelon {
    pub fn new(p: u64) -> Self {
        SparseEchelon {
            p,
            pivots: HashMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the basis and adds it if independent.
    pub fn insert(&mut self, row: Vec<(usize, u64)>) -> bool {
        let p = self.p;
        let mut row: std::collections::BTreeMap<usize, u64> = row
            .into_iter()
            .filter(|(_, v)| *v % p != 0)
            .map(|(c, v)| (c, v % p))
            .collect();
        loop {
            let Some((&lead, &val)) = row.iter().next() else {
                return false;
            };
            match self.pivots.get(&lead) {
                Some(pivot) => {
                    for &(c, v) in pivot {
                        let sub = mul_mod(val, v, p);
                        let e = row.entry(c).or_insert(0);
                        *e = (*e + p - sub) % p;
                        if *e == 0 {
                            row.remove(&c);
                        }
                    }
                }
                None => {
                    let inv = inv_mod(val, p);
                    let normalized = row
                        .into_iter()
                        .map(|(c, v)| (c, mul_mod(v, inv, p)))
                        .collect();
                    self.pivots.insert(lead, normalized);
                    return true;
                }
            }
        }
    }
}

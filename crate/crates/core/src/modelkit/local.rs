//! Length of a zero-dimensional local quotient `F_p[x]_m / I`.

use std::collections::HashMap;

use num_bigint::BigInt;

use super::fp::{is_prime, reduce, SparseEchelon};
use super::poly::{IntPolynomial, Monomial};
use crate::error::{Error, Result};

pub const DEFAULT_DEGREE_CAP: usize = 20;

/// All exponent vectors in `n` variables of total degree `< bound`.
fn monomials_below(n: usize, bound: u32) -> Vec<Monomial> {
    fn rec(n: usize, budget: u32, prefix: &mut Monomial, out: &mut Vec<Monomial>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for e in 0..=budget {
            prefix.push(e);
            rec(n, budget - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if bound > 0 {
        rec(n, bound - 1, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

fn degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

/// `dim F_p[x] / (I + m^bound)` for generators already centered at the origin
/// and reduced mod `p`.
fn truncated_colength(gens: &[Vec<(Monomial, u64)>], n: usize, bound: u32, p: u64) -> usize {
    let basis = monomials_below(n, bound);
    let index: HashMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut echelon = SparseEchelon::new(p);
    for g in gens {
        for mono in &basis {
            let shift = degree(mono);
            let row: Vec<(usize, u64)> = g
                .iter()
                .filter(|(m, _)| degree(m) + shift < bound)
                .map(|(m, c)| {
                    let prod: Monomial = m.iter().zip(mono).map(|(a, b)| a + b).collect();
                    (index[&prod], *c)
                })
                .collect();
            if !row.is_empty() {
                echelon.insert(row);
            }
        }
    }
    basis.len() - echelon.rank()
}

/// Dimension over `F_p` of the local ring at `point` modulo the ideal spanned
/// by `generators`.
///
/// The generators are recentred at the point and reduced mod `p`; the colength
/// of `I + m^N` is computed for `N = 1, 2, ...` until two consecutive values
/// agree. Equality at consecutive `N` forces `m^N ⊆ I` locally by Nakayama,
/// so the stabilized value is exact.
pub fn local_multiplicity(
    generators: &[IntPolynomial],
    point: &[BigInt],
    prime: u64,
    degree_cap: usize,
) -> Result<usize> {
    if !is_prime(prime) {
        return Err(Error::InvalidInput(format!("{prime} is not prime")));
    }
    let Some(first) = generators.first() else {
        return Err(Error::InvalidInput(
            "at least one generator is required".into(),
        ));
    };
    let n = first.nvars();
    if generators
        .iter()
        .any(|g| g.variables() != first.variables())
    {
        return Err(Error::InvalidInput(
            "generators live in different rings".into(),
        ));
    }
    if point.len() != n {
        return Err(Error::InvalidInput(format!(
            "point has {} coordinates, ring has {n} variables",
            point.len()
        )));
    }
    let centered: Vec<Vec<(Monomial, u64)>> = generators
        .iter()
        .map(|g| {
            let shifted = (0..n).fold(g.clone(), |acc, i| acc.translate(i, &point[i]));
            shifted
                .terms()
                .iter()
                .map(|(m, c)| (m.clone(), reduce(c, prime)))
                .filter(|(_, c)| *c != 0)
                .collect()
        })
        .collect();
    let mut previous = truncated_colength(&centered, n, 1, prime);
    for bound in 2..=degree_cap.max(1) as u32 {
        let current = truncated_colength(&centered, n, bound, prime);
        if current == previous {
            return Ok(current);
        }
        previous = current;
    }
    Err(Error::NotStabilized { cap: degree_cap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modelkit::parse::parse_polynomial;

    fn gens(texts: &[&str], vars: &[&str]) -> Vec<IntPolynomial> {
        texts
            .iter()
            .map(|t| parse_polynomial(t, vars).unwrap())
            .collect()
    }

    fn origin(n: usize) -> Vec<BigInt> {
        vec![BigInt::from(0); n]
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_below(3, 1).len(), 1);
        assert_eq!(monomials_below(3, 3).len(), 10);
        assert_eq!(monomials_below(2, 0).len(), 0);
    }

    #[test]
    fn known_lengths() {
        let xvw = ["x", "v", "w"];
        assert_eq!(
            local_multiplicity(&gens(&["x", "w", "v^2"], &xvw), &origin(3), 5, 20).unwrap(),
            2
        );
        let xy = ["x", "y"];
        assert_eq!(
            local_multiplicity(&gens(&["x", "y"], &xy), &origin(2), 5, 20).unwrap(),
            1
        );
        assert_eq!(
            local_multiplicity(&gens(&["x", "y^2 - x^3"], &xy), &origin(2), 5, 20).unwrap(),
            2
        );
        assert_eq!(
            local_multiplicity(&gens(&["x^2", "y^3"], &xy), &origin(2), 7, 20).unwrap(),
            6
        );
    }

    #[test]
    fn shifted_point() {
        let xvw = ["x", "v", "w"];
        let g = gens(&["x - 1", "w", "v^2 - 3*w"], &xvw);
        let pt = [1, 0, 0].map(BigInt::from);
        assert_eq!(local_multiplicity(&g, &pt, 5, 20).unwrap(), 2);
        // away from the point the ideal is the unit ideal locally
        assert_eq!(local_multiplicity(&g, &origin(3), 5, 20).unwrap(), 0);
    }

    #[test]
    fn positive_dimension_hits_cap() {
        let xy = ["x", "y"];
        assert_eq!(
            local_multiplicity(&gens(&["x"], &xy), &origin(2), 5, 8),
            Err(Error::NotStabilized { cap: 8 })
        );
    }
}

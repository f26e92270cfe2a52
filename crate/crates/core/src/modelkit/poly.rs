//! Sparse multivariate polynomials with arbitrary-precision integer
//! coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Exponent vector, one entry per variable.
pub type Monomial = Vec<u32>;

/// Polynomial over `Z` in an ordered list of named variables. Zero
/// coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    variables: Vec<String>,
    terms: BTreeMap<Monomial, BigInt>,
}

impl IntPolynomial {
    pub fn zero<S: AsRef<str>>(variables: &[S]) -> Self {
        IntPolynomial {
            variables: variables.iter().map(|v| v.as_ref().to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant<S: AsRef<str>>(variables: &[S], c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(variables);
        p.add_term(vec![0; variables.len()], c.into());
        p
    }

    /// The `i`-th variable as a polynomial.
    pub fn var<S: AsRef<str>>(variables: &[S], i: usize) -> Self {
        let mut exps = vec![0; variables.len()];
        exps[i] = 1;
        let mut p = Self::zero(variables);
        p.add_term(exps, BigInt::one());
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; repeated
    /// monomials are summed.
    pub fn from_terms<S: AsRef<str>>(
        variables: &[S],
        terms: impl IntoIterator<Item = (Monomial, BigInt)>,
    ) -> Self {
        let mut p = Self::zero(variables);
        for (m, c) in terms {
            assert_eq!(m.len(), variables.len(), "exponent vector length mismatch");
            p.add_term(m, c);
        }
        p
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m[i]).max().unwrap_or(0)
    }

    /// Largest `k` such that `x_i^k` divides every term.
    pub fn min_exponent(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m[i]).min().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_same_ring(&self, other: &Self) {
        assert_eq!(
            self.variables, other.variables,
            "polynomials live in different rings"
        );
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(&self.variables);
        }
        IntPolynomial {
            variables: self.variables.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(&self.variables, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Partial derivative with respect to the `i`-th variable.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.variables);
        for (m, c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[i] -= 1;
            out.add_term(m2, c * BigInt::from(m[i]));
        }
        out
    }

    pub fn evaluate(&self, point: &[BigInt]) -> BigInt {
        assert_eq!(point.len(), self.nvars(), "point dimension mismatch");
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&e, x)| acc * x.pow(e))
            })
            .sum()
    }

    /// Substitutes `images[i]` for the `i`-th variable; all images must live
    /// in the same ring, which becomes the ring of the result.
    pub fn substitute(&self, images: &[IntPolynomial]) -> Self {
        assert_eq!(images.len(), self.nvars(), "one image per variable");
        let target = images
            .first()
            .map(|p| p.variables.clone())
            .unwrap_or_default();
        for img in images {
            assert_eq!(img.variables, target, "images live in different rings");
        }
        // cache powers per variable
        let mut powers: Vec<Vec<IntPolynomial>> = images
            .iter()
            .map(|img| vec![IntPolynomial::constant(&target, 1), img.clone()])
            .collect();
        let mut out = IntPolynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut term = IntPolynomial::constant(&target, c.clone());
            for (i, &e) in m.iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                if e > 0 {
                    term = &term * &powers[i][e as usize];
                }
            }
            out = &out + &term;
        }
        out
    }

    /// Reinterprets the polynomial in a ring whose variable list contains all
    /// of this polynomial's variables (matched by name).
    pub fn embed<S: AsRef<str>>(&self, variables: &[S]) -> Option<Self> {
        let names: Vec<String> = variables.iter().map(|v| v.as_ref().to_string()).collect();
        let map: Vec<usize> = self
            .variables
            .iter()
            .map(|v| names.iter().position(|n| n == v))
            .collect::<Option<_>>()?;
        let terms = self.terms.iter().map(|(m, c)| {
            let mut m2 = vec![0; names.len()];
            for (i, &e) in m.iter().enumerate() {
                m2[map[i]] = e;
            }
            (m2, c.clone())
        });
        Some(Self::from_terms(&names, terms))
    }

    /// Same polynomial with variables renamed positionally.
    pub fn rename<S: AsRef<str>>(&self, variables: &[S]) -> Self {
        assert_eq!(variables.len(), self.nvars());
        IntPolynomial {
            variables: variables.iter().map(|v| v.as_ref().to_string()).collect(),
            terms: self.terms.clone(),
        }
    }

    /// `x_i -> x_i + shift`.
    pub fn translate(&self, i: usize, shift: &BigInt) -> Self {
        let images: Vec<IntPolynomial> = (0..self.nvars())
            .map(|j| {
                let v = IntPolynomial::var(&self.variables, j);
                if j == i {
                    &v + &IntPolynomial::constant(&self.variables, shift.clone())
                } else {
                    v
                }
            })
            .collect();
        self.substitute(&images)
    }

    /// Exact division by `x_i^k`; panics if some term has a smaller exponent.
    pub fn divide_by_var_power(&self, i: usize, k: u32) -> Self {
        IntPolynomial {
            variables: self.variables.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut m2 = m.clone();
                    m2[i] = m2[i]
                        .checked_sub(k)
                        .expect("not divisible by the variable power");
                    (m2, c.clone())
                })
                .collect(),
        }
    }

    /// Exact division of every coefficient by `d`; panics if not exact.
    pub fn divide_coefficients(&self, d: &BigInt) -> Self {
        IntPolynomial {
            variables: self.variables.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let (q, r) = c.div_rem(d);
                    assert!(r.is_zero(), "coefficient not divisible");
                    (m.clone(), q)
                })
                .collect(),
        }
    }

    /// Coefficients reduced into `[0, p)`.
    pub fn reduce_mod(&self, p: &BigInt) -> Self {
        let mut out = Self::zero(&self.variables);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.mod_floor(p));
        }
        out
    }

    /// Minimum `p`-adic valuation over the coefficients (`None` for zero).
    pub fn content_valuation(&self, p: &BigInt) -> Option<u32> {
        self.terms.values().map(|c| valuation(c, p)).min()
    }

    /// True when `self = ±other`.
    pub fn equals_up_to_sign(&self, other: &Self) -> bool {
        self == other || *self == -other
    }
}

/// `p`-adic valuation of a nonzero integer.
pub fn valuation(c: &BigInt, p: &BigInt) -> u32 {
    assert!(!c.is_zero(), "valuation of zero");
    let mut c = c.clone();
    let mut v = 0;
    loop {
        let (q, r) = c.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        c = q;
        v += 1;
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        self.check_same_ring(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        self.check_same_ring(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    // exponents add when monomials multiply
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        self.check_same_ring(rhs);
        let mut out = IntPolynomial::zero(&self.variables);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(m, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        IntPolynomial {
            variables: self.variables.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for IntPolynomial {
    /// Terms in descending lexicographic order of exponent vectors, written
    /// in the same grammar the parser accepts, e.g. `x^2*y - 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            match (k, sign) {
                (0, "-") => write!(f, "-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            let factors: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| match e {
                    1 => self.variables[i].clone(),
                    _ => format!("{}^{}", self.variables[i], e),
                })
                .collect();
            let abs = c.abs();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{abs}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial[{}]({self})", self.variables.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const XY: [&str; 2] = ["x", "y"];

    fn x() -> IntPolynomial {
        IntPolynomial::var(&XY, 0)
    }

    fn y() -> IntPolynomial {
        IntPolynomial::var(&XY, 1)
    }

    fn c(v: i64) -> IntPolynomial {
        IntPolynomial::constant(&XY, v)
    }

    #[test]
    fn arithmetic_and_display() {
        let p = &(&x().pow(2) * &y()) - &c(3);
        assert_eq!(p.to_string(), "x^2*y - 3");
        let q = &(&x() + &y()).pow(2) - &(&x() * &y()).scale(&BigInt::from(2));
        assert_eq!(q.to_string(), "x^2 + y^2");
        assert_eq!((&p - &p).to_string(), "0");
        assert_eq!((-&x()).to_string(), "-x");
        assert_eq!(
            (&x().scale(&BigInt::from(-5)) + &c(1)).to_string(),
            "-5*x + 1"
        );
    }

    #[test]
    fn derivative_and_evaluation() {
        let p = &(&x().pow(3) * &y().pow(2)) + &x().scale(&BigInt::from(7));
        let dx = p.derivative(0);
        assert_eq!(dx.to_string(), "3*x^2*y^2 + 7");
        assert_eq!(p.derivative(1).to_string(), "2*x^3*y");
        let pt = [BigInt::from(2), BigInt::from(-1)];
        assert_eq!(p.evaluate(&pt), BigInt::from(8 + 14));
    }

    #[test]
    fn substitution_and_translation() {
        // (x + 1)^2 evaluated through translate
        let p = x().pow(2);
        let t = p.translate(0, &BigInt::from(1));
        assert_eq!(t.to_string(), "x^2 + 2*x + 1");
        // y -> x*y
        let q = &y().pow(2) - &x();
        let images = vec![x(), &x() * &y()];
        assert_eq!(q.substitute(&images).to_string(), "x^2*y^2 - x");
    }

    #[test]
    fn embedding_and_division() {
        let p = &x().pow(3) * &y();
        let e = p.embed(&["w", "y", "x"]).unwrap();
        assert_eq!(e.coefficient(&[0, 1, 3]), BigInt::one());
        assert!(p.embed(&["x"]).is_none());
        assert_eq!(p.min_exponent(0), 3);
        assert_eq!(p.divide_by_var_power(0, 2).to_string(), "x*y");
    }

    #[test]
    fn valuations_and_reduction() {
        let p = BigInt::from(5);
        assert_eq!(valuation(&BigInt::from(250), &p), 3);
        assert_eq!(valuation(&BigInt::from(-7), &p), 0);
        let q = &x().scale(&BigInt::from(25)) - &c(10);
        assert_eq!(q.content_valuation(&p), Some(1));
        assert_eq!(q.reduce_mod(&p).to_string(), "0");
        assert_eq!(c(-1).reduce_mod(&p).to_string(), "4");
    }

    #[test]
    #[should_panic(expected = "different rings")]
    fn mixing_rings_panics() {
        let _ = &x() + &IntPolynomial::var(&["x"], 0);
    }
}

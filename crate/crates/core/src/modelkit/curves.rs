//! The hyperelliptic family `y^2 = x^(2p) - (1 + c^2) x^p + c^2` and its
//! chart at infinity.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::chart::AffineChart;
use super::fp::is_prime;
use super::poly::IntPolynomial;
use crate::error::{Error, Result};

/// `f(x) = x^(2p) - (1 + c^2) x^p + c^2` in the ring of `variables`, using
/// variable `index` as `x`.
pub fn family_polynomial<S: AsRef<str>>(
    p: u32,
    c: &BigInt,
    variables: &[S],
    index: usize,
) -> IntPolynomial {
    let x = IntPolynomial::var(variables, index);
    let c2 = c * c;
    let mid = IntPolynomial::constant(variables, BigInt::one() + &c2);
    let xp = x.pow(p);
    &(&xp.pow(2) - &(&mid * &xp)) + &IntPolynomial::constant(variables, c2)
}

/// `s^(2p) f(1/s) = 1 - (1 + c^2) s^p + c^2 s^(2p)`.
pub fn reversed_family_polynomial<S: AsRef<str>>(
    p: u32,
    c: &BigInt,
    variables: &[S],
    index: usize,
) -> IntPolynomial {
    let f = family_polynomial(p, c, variables, index);
    let d = 2 * p;
    let terms = f.terms().iter().map(|(m, coeff)| {
        let mut m2 = m.clone();
        m2[index] = d - m[index];
        (m2, coeff.clone())
    });
    IntPolynomial::from_terms(variables, terms)
}

/// Both affine charts of the smooth projective model, studied over `prime`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveCharts {
    /// `y^2 - f(x)` in `(x, y)`.
    pub affine: AffineChart,
    /// `t^2 - s^(2p) f(1/s)` in `(s, t)`.
    pub infinity: AffineChart,
}

/// Charts of the curve with parameters `(p, c)` as schemes over `Z`, with
/// `prime` the residue characteristic of interest.
pub fn curve_charts(p: u32, c: &BigInt, prime: u64) -> Result<CurveCharts> {
    if p.is_multiple_of(2) || !is_prime(u64::from(p)) {
        return Err(Error::InvalidInput(format!("{p} is not an odd prime")));
    }
    if c.abs().is_one() {
        return Err(Error::InvalidInput("c must differ from 1 and -1".into()));
    }
    let xy = ["x", "y"];
    let y2 = IntPolynomial::var(&xy, 1).pow(2);
    let affine = AffineChart::new(&xy, vec![&y2 - &family_polynomial(p, c, &xy, 0)], prime, 2)?;
    let st = ["s", "t"];
    let t2 = IntPolynomial::var(&st, 1).pow(2);
    let infinity = AffineChart::new(
        &st,
        vec![&t2 - &reversed_family_polynomial(p, c, &st, 0)],
        prime,
        2,
    )?;
    Ok(CurveCharts { affine, infinity })
}

//! Affine charts of arithmetic surfaces over `Z`, singular points of their
//! special fibers, and the `m/m²` regularity test.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::fp::{is_prime, rank_mod, reduce, FpPoly};
use super::parse::parse_equation;
use super::poly::IntPolynomial;
use crate::error::{Error, Result};

/// Default bound on `p^n` for exhaustive point searches.
pub const DEFAULT_POINT_CAP: u64 = 10_000_000;

/// Affine chart `Spec Z[x_1..x_n]/(f_1..f_k)` studied over the prime `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineChart {
    variables: Vec<String>,
    equations: Vec<IntPolynomial>,
    prime: u64,
    expected_dim: usize,
}

impl AffineChart {
    pub fn new<S: AsRef<str>>(
        variables: &[S],
        equations: Vec<IntPolynomial>,
        prime: u64,
        expected_dim: usize,
    ) -> Result<Self> {
        let variables: Vec<String> = variables.iter().map(|v| v.as_ref().to_string()).collect();
        if equations.is_empty() {
            return Err(Error::InvalidInput(
                "a chart needs at least one equation".into(),
            ));
        }
        let equations = equations
            .into_iter()
            .map(|e| {
                e.embed(&variables).ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "equation `{e}` uses variables outside {:?}",
                        variables
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if !is_prime(prime) {
            return Err(Error::InvalidInput(format!("{prime} is not prime")));
        }
        if expected_dim == 0 {
            return Err(Error::InvalidInput(
                "expected dimension must be positive".into(),
            ));
        }
        let mut seen = std::collections::BTreeSet::new();
        if !variables.iter().all(|v| seen.insert(v)) {
            return Err(Error::InvalidInput(
                "chart variables must be distinct".into(),
            ));
        }
        Ok(AffineChart {
            variables,
            equations,
            prime,
            expected_dim,
        })
    }

    /// Parses equations written as `lhs = rhs` or as bare expressions.
    pub fn parse<S: AsRef<str>, E: AsRef<str>>(
        variables: &[S],
        equations: &[E],
        prime: u64,
        expected_dim: usize,
    ) -> Result<Self> {
        let eqs = equations
            .iter()
            .map(|e| parse_equation(e.as_ref(), variables))
            .collect::<Result<Vec<_>>>()?;
        Self::new(variables, eqs, prime, expected_dim)
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn equations(&self) -> &[IntPolynomial] {
        &self.equations
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn expected_dim(&self) -> usize {
        self.expected_dim
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    /// Same chart studied over another prime.
    pub fn with_prime(&self, prime: u64) -> Result<Self> {
        Self::new(
            &self.variables,
            self.equations.clone(),
            prime,
            self.expected_dim,
        )
    }

    /// True when every equation vanishes modulo `p` at the point.
    pub fn contains_fp(&self, point: &[u64]) -> bool {
        self.equations
            .iter()
            .all(|e| FpPoly::new(e, self.prime).eval(point) == 0)
    }
}

impl fmt::Display for AffineChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let eqs: Vec<String> = self.equations.iter().map(|e| format!("{e} = 0")).collect();
        write!(
            f,
            "chart ({}) over {}: {}",
            self.variables.join(", "),
            self.prime,
            eqs.join(", ")
        )
    }
}

/// A point of `F_p^n`, coordinates in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FpPoint {
    pub coordinates: Vec<u64>,
}

impl FpPoint {
    pub fn lift(&self) -> Vec<BigInt> {
        self.coordinates.iter().map(|&c| BigInt::from(c)).collect()
    }
}

impl fmt::Display for FpPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coordinates.iter().map(u64::to_string).collect();
        write!(f, "({})", c.join(", "))
    }
}

/// Compiled equations and Jacobian of a chart modulo its prime.
struct ReducedChart {
    equations: Vec<FpPoly>,
    jacobian: Vec<Vec<FpPoly>>,
    p: u64,
}

impl ReducedChart {
    fn new(chart: &AffineChart) -> Self {
        let p = chart.prime;
        ReducedChart {
            equations: chart.equations.iter().map(|e| FpPoly::new(e, p)).collect(),
            jacobian: chart
                .equations
                .iter()
                .map(|e| {
                    (0..chart.nvars())
                        .map(|i| FpPoly::new(&e.derivative(i), p))
                        .collect()
                })
                .collect(),
            p,
        }
    }

    fn on_fiber(&self, pt: &[u64]) -> bool {
        self.equations.iter().all(|e| e.eval(pt) == 0)
    }

    fn jacobian_rank(&self, pt: &[u64]) -> usize {
        let rows = self
            .jacobian
            .iter()
            .map(|row| row.iter().map(|d| d.eval(pt)).collect())
            .collect();
        rank_mod(rows, self.p)
    }
}

fn for_each_point(n: usize, p: u64, cap: u64, mut visit: impl FnMut(&[u64])) -> Result<()> {
    let total = (p as u128).checked_pow(n as u32);
    if total.is_none_or(|t| t > cap as u128) {
        return Err(Error::CapExceeded {
            what: format!("point enumeration over F_{p}^{n}"),
            cap,
        });
    }
    let mut pt = vec![0u64; n];
    loop {
        visit(&pt);
        // odometer, last coordinate fastest
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            pt[i] += 1;
            if pt[i] < p {
                break;
            }
            pt[i] = 0;
        }
    }
}

/// All `F_p`-points of the special fiber, in lexicographic order.
pub fn fiber_points(chart: &AffineChart, cap: u64) -> Result<Vec<FpPoint>> {
    let reduced = ReducedChart::new(chart);
    let mut out = Vec::new();
    for_each_point(chart.nvars(), chart.prime, cap, |pt| {
        if reduced.on_fiber(pt) {
            out.push(FpPoint {
                coordinates: pt.to_vec(),
            });
        }
    })?;
    Ok(out)
}

/// Points of the special fiber where the Jacobian matrix of the equations has
/// rank below `#variables - 1`, in lexicographic order.
pub fn singular_points_mod_p(chart: &AffineChart, cap: u64) -> Result<Vec<FpPoint>> {
    let reduced = ReducedChart::new(chart);
    let smooth_rank = chart.nvars().saturating_sub(1);
    let mut out = Vec::new();
    for_each_point(chart.nvars(), chart.prime, cap, |pt| {
        if reduced.on_fiber(pt) && reduced.jacobian_rank(pt) < smooth_rank {
            out.push(FpPoint {
                coordinates: pt.to_vec(),
            });
        }
    })?;
    Ok(out)
}

/// Dimension of the cotangent space `m/m²` at a closed point of the fiber.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TangentSpace {
    pub dimension: usize,
    pub is_regular: bool,
}

/// Computes `dim m/m²` at the closed point `(x - a, p)` where `a` is lifted to
/// `[0, p)`: `(n + 1) - rank` of the matrix whose row for each equation `f`
/// is `(∂f/∂x_1(a), ..., ∂f/∂x_n(a), f(a)/p) mod p`.
pub fn tangent_dimension(chart: &AffineChart, point: &[BigInt]) -> Result<TangentSpace> {
    let n = chart.nvars();
    if point.len() != n {
        return Err(Error::InvalidInput(format!(
            "point has {} coordinates, chart has {n} variables",
            point.len()
        )));
    }
    let p = BigInt::from(chart.prime);
    let lift: Vec<BigInt> = point.iter().map(|c| c.mod_floor(&p)).collect();
    let mut rows = Vec::with_capacity(chart.equations.len());
    for f in &chart.equations {
        let (quotient, rem) = f.evaluate(&lift).div_rem(&p);
        if !rem.is_zero() {
            let coords: Vec<String> = lift.iter().map(ToString::to_string).collect();
            return Err(Error::PointNotOnFiber(format!("({})", coords.join(", "))));
        }
        let mut row: Vec<u64> = (0..n)
            .map(|i| reduce(&f.derivative(i).evaluate(&lift), chart.prime))
            .collect();
        row.push(reduce(&quotient, chart.prime));
        rows.push(row);
    }
    let dimension = n + 1 - rank_mod(rows, chart.prime);
    Ok(TangentSpace {
        dimension,
        is_regular: dimension == chart.expected_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[&[u64]]) -> Vec<FpPoint> {
        v.iter()
            .map(|c| FpPoint {
                coordinates: c.to_vec(),
            })
            .collect()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn singular_points_of_the_curves() {
        let c = AffineChart::parse(&["x", "y"], &["y^2 - (x^10 - 5*x^5 + 4)"], 5, 2).unwrap();
        assert_eq!(
            singular_points_mod_p(&c, DEFAULT_POINT_CAP).unwrap(),
            pts(&[&[1, 0], &[4, 0]])
        );
        let c = AffineChart::parse(&["x", "y"], &["y^2 - (x^6 - 26*x^3 + 25)"], 5, 2).unwrap();
        assert_eq!(
            singular_points_mod_p(&c, DEFAULT_POINT_CAP).unwrap(),
            pts(&[&[0, 0]])
        );
        let smooth = AffineChart::parse(&["x", "y"], &["y^2 - x"], 5, 2).unwrap();
        assert!(singular_points_mod_p(&smooth, DEFAULT_POINT_CAP)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn point_cap() {
        let c = AffineChart::parse(&["x", "y"], &["y^2 - x"], 5, 2).unwrap();
        assert!(matches!(
            singular_points_mod_p(&c, 24),
            Err(Error::CapExceeded { .. })
        ));
        assert!(singular_points_mod_p(&c, 25).is_ok());
    }

    #[test]
    fn tangent_dimensions() {
        let c = AffineChart::parse(&["x", "y"], &["y^2 - (x^10 - 5*x^5 + 4)"], 5, 2).unwrap();
        let t = tangent_dimension(&c, &big(&[1, 0])).unwrap();
        assert_eq!(
            t,
            TangentSpace {
                dimension: 3,
                is_regular: false
            }
        );
        let t = tangent_dimension(&c, &big(&[0, 2])).unwrap();
        assert_eq!(
            t,
            TangentSpace {
                dimension: 2,
                is_regular: true
            }
        );
        // lift-independent: 6 ≡ 1 mod 5
        assert_eq!(tangent_dimension(&c, &big(&[6, 0])).unwrap().dimension, 3);

        let chart1 = AffineChart::parse(
            &["x", "v", "w"],
            &["v^2 = x^4 - 26*x + w^2", "x*w = 5"],
            5,
            2,
        )
        .unwrap();
        let t = tangent_dimension(&chart1, &big(&[0, 0, 0])).unwrap();
        assert_eq!(
            t,
            TangentSpace {
                dimension: 2,
                is_regular: true
            }
        );
    }

    #[test]
    fn point_off_fiber() {
        let c = AffineChart::parse(&["x", "y"], &["y^2 - x"], 5, 2).unwrap();
        assert!(matches!(
            tangent_dimension(&c, &big(&[1, 0])),
            Err(Error::PointNotOnFiber(_))
        ));
        assert!(matches!(
            tangent_dimension(&c, &big(&[1])),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn chart_validation() {
        assert!(AffineChart::parse(&["x", "y"], &["y - z"], 5, 2).is_err());
        assert!(AffineChart::parse(&["x", "y"], &["y - x"], 6, 2).is_err());
        assert!(AffineChart::parse::<&str, &str>(&["x", "y"], &[], 5, 2).is_err());
    }

    #[test]
    fn fiber_point_listing() {
        let c = AffineChart::parse(&["x", "y"], &["y^2 - x"], 3, 2).unwrap();
        assert_eq!(
            fiber_points(&c, DEFAULT_POINT_CAP).unwrap(),
            pts(&[&[0, 0], &[1, 1], &[1, 2]])
        );
    }
}

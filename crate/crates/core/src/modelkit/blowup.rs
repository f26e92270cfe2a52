//! Blow-up of a two-variable arithmetic surface chart at a closed point
//! `<x - a, y - b, p>`.
//!
//! Each chart keeps the exceptional relation explicit. In the first chart
//! `y - b = (x - a) v` and `p = (x - a) w`; to form the strict transform every
//! integer coefficient `p^s u` (with `p` not dividing `u`) is rewritten as
//! `u ((x - a) w)^s` before the exceptional factor is divided out. The second
//! chart swaps the roles of the variables and the third sets
//! `x - a = p u`, `y - b = p v`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::chart::{fiber_points, AffineChart, FpPoint};
use super::poly::{valuation, IntPolynomial};
use crate::error::{Error, Result};

/// The three affine charts covering a point blow-up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupCharts {
    /// Variables `(x, v, w)`.
    pub chart1: AffineChart,
    /// Variables `(y, u, w)`.
    pub chart2: AffineChart,
    /// Variables `(u, v)`.
    pub chart3: AffineChart,
    center: (BigInt, BigInt),
}

impl BlowupCharts {
    pub fn charts(&self) -> [&AffineChart; 3] {
        [&self.chart1, &self.chart2, &self.chart3]
    }

    pub fn center(&self) -> (&BigInt, &BigInt) {
        (&self.center.0, &self.center.1)
    }

    /// True when an `F_p`-point of chart `index` (0, 1 or 2) maps to the
    /// blown-up point, i.e. lies on the exceptional divisor.
    pub fn is_above_center(&self, index: usize, point: &FpPoint) -> bool {
        let p = BigInt::from(self.chart1.prime());
        let hits =
            |coord: u64, target: &BigInt| (BigInt::from(coord) - target).mod_floor(&p).is_zero();
        match index {
            0 => hits(point.coordinates[0], &self.center.0),
            1 => hits(point.coordinates[0], &self.center.1),
            2 => true,
            _ => panic!("blow-up has three charts"),
        }
    }

    /// Special-fiber points of chart `index` lying above the center.
    pub fn points_above_center(&self, index: usize, cap: u64) -> Result<Vec<FpPoint>> {
        Ok(fiber_points(self.charts()[index], cap)?
            .into_iter()
            .filter(|pt| self.is_above_center(index, pt))
            .collect())
    }
}

fn fresh_name(base: &str, taken: &[&str]) -> String {
    let mut name = base.to_string();
    while taken.contains(&name.as_str()) {
        name.push('\'');
    }
    name
}

/// Replaces every coefficient `p^s u` by `u * t^s` where `t` is the given
/// polynomial (in the same ring).
pub fn extract_prime(poly: &IntPolynomial, p: &BigInt, t: &IntPolynomial) -> IntPolynomial {
    let vars = poly.variables().to_vec();
    let mut out = IntPolynomial::zero(&vars);
    for (m, c) in poly.terms() {
        let s = valuation(c, p);
        let unit = c / p.pow(s);
        let mono = IntPolynomial::from_terms(&vars, [(m.clone(), unit)]);
        out = &out + &(&mono * &t.pow(s));
    }
    out
}

/// Strict transform in a chart where `exc` is the exceptional coordinate
/// (shifted so that the center is at 0) and `other` is the ratio coordinate.
fn directional_chart(
    g: &IntPolynomial,
    center: (&BigInt, &BigInt),
    exc_is_first: bool,
    names: [String; 3],
    p: u64,
) -> Result<AffineChart> {
    let prime = BigInt::from(p);
    let (a, b) = center;
    let vars = names.clone();
    let e = IntPolynomial::var(&vars, 0);
    let ratio = IntPolynomial::var(&vars, 1);
    let w = IntPolynomial::var(&vars, 2);
    let scaled = &e * &ratio;
    // centered g(X + a, Y + b) with the exceptional coordinate at index 0
    let images = if exc_is_first {
        [
            &e + &IntPolynomial::constant(&vars, a.clone()),
            &scaled + &IntPolynomial::constant(&vars, b.clone()),
        ]
    } else {
        [
            &scaled + &IntPolynomial::constant(&vars, a.clone()),
            &e + &IntPolynomial::constant(&vars, b.clone()),
        ]
    };
    let total = g.substitute(&images);
    let extracted = extract_prime(&total, &prime, &(&e * &w));
    let k = extracted.min_exponent(0);
    let strict = extracted.divide_by_var_power(0, k);
    let shift = if exc_is_first { a } else { b };
    let strict = strict.translate(0, &-shift);
    let relation = &(&e - &IntPolynomial::constant(&vars, shift.clone())) * &w;
    let relation = &relation - &IntPolynomial::constant(&vars, prime);
    AffineChart::new(&names, vec![strict, relation], p, 2)
}

/// Blows up the hypersurface chart `g(x, y) = 0` at `<x - a, y - b, p>`.
pub fn blowup_point(chart: &AffineChart, center: (&BigInt, &BigInt)) -> Result<BlowupCharts> {
    if chart.nvars() != 2 || chart.equations().len() != 1 {
        return Err(Error::NotHypersurface {
            equations: chart.equations().len(),
            variables: chart.nvars(),
        });
    }
    let g = &chart.equations()[0];
    let p = chart.prime();
    let prime = BigInt::from(p);
    let (a, b) = center;
    if !g
        .evaluate(&[a.clone(), b.clone()])
        .mod_floor(&prime)
        .is_zero()
    {
        return Err(Error::CenterNotOnFiber(format!("({a}, {b})")));
    }
    let x = chart.variables()[0].as_str();
    let y = chart.variables()[1].as_str();

    let names1 = [x.to_string(), fresh_name("v", &[x]), fresh_name("w", &[x])];
    let chart1 = directional_chart(g, (a, b), true, names1, p)?;

    let names2 = [y.to_string(), fresh_name("u", &[y]), fresh_name("w", &[y])];
    let chart2 = directional_chart(g, (a, b), false, names2, p)?;

    let names3 = ["u", "v"];
    let u = IntPolynomial::var(&names3, 0);
    let v = IntPolynomial::var(&names3, 1);
    let total = g.substitute(&[
        &u.scale(&prime) + &IntPolynomial::constant(&names3, a.clone()),
        &v.scale(&prime) + &IntPolynomial::constant(&names3, b.clone()),
    ]);
    let strict = match total.content_valuation(&prime) {
        Some(k) => total.divide_coefficients(&prime.pow(k)),
        None => total,
    };
    let chart3 = AffineChart::new(&names3, vec![strict], p, 2)?;

    Ok(BlowupCharts {
        chart1,
        chart2,
        chart3,
        center: (a.clone(), b.clone()),
    })
}

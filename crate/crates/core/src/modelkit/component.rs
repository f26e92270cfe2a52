//! Checks that a claimed irreducible component, given by triangular
//! equations, lies on the special fiber of a chart.

use std::collections::BTreeMap;

use super::chart::AffineChart;
use super::fp::{inv_mod, mul_mod, reduce, FpPoly};
use super::poly::{IntPolynomial, Monomial};
use crate::error::{Error, Result};

type FpTerms = BTreeMap<Monomial, u64>;

fn to_fp(poly: &IntPolynomial, p: u64) -> FpTerms {
    poly.terms()
        .iter()
        .map(|(m, c)| (m.clone(), reduce(c, p)))
        .filter(|(_, c)| *c != 0)
        .collect()
}

fn add_term(poly: &mut FpTerms, m: Monomial, c: u64, p: u64) {
    let e = poly.entry(m.clone()).or_insert(0);
    *e = (*e + c) % p;
    if *e == 0 {
        poly.remove(&m);
    }
}

/// Rewrite rule `x_var^power -> tail`.
#[derive(Debug)]
struct Rule {
    var: usize,
    power: u32,
    tail: FpTerms,
}

/// Normal form modulo the rules. Leading terms are pure powers of distinct
/// variables and each tail only involves variables that are smaller in the
/// lex order given by rule order, so the rules form a Gröbner basis and the
/// normal form decides membership.
fn normal_form(poly: &FpTerms, rules: &[Rule], p: u64) -> FpTerms {
    let mut pending = poly.clone();
    let mut done = FpTerms::new();
    while let Some((m, c)) = pending.pop_last() {
        match rules.iter().find(|r| m[r.var] >= r.power) {
            None => add_term(&mut done, m, c, p),
            Some(rule) => {
                let mut rest = m.clone();
                rest[rule.var] -= rule.power;
                for (tm, tc) in &rule.tail {
                    let prod: Monomial = rest.iter().zip(tm).map(|(a, b)| a + b).collect();
                    add_term(&mut pending, prod, mul_mod(c, *tc, p), p);
                }
            }
        }
    }
    done
}

/// Turns a reduced component equation into a rule, picking the first
/// variable that occurs only in a single pure-power term with unit
/// coefficient and is not already eliminated.
fn make_rule(poly: &FpTerms, eliminated: &[usize], nvars: usize, p: u64) -> Option<Rule> {
    (0..nvars)
        .filter(|i| !eliminated.contains(i))
        .find_map(|var| {
            let mut lead = None;
            for (m, c) in poly {
                if m[var] == 0 {
                    continue;
                }
                let pure = m.iter().enumerate().all(|(j, &e)| j == var || e == 0);
                if lead.is_some() || !pure {
                    return None;
                }
                lead = Some((m[var], *c));
            }
            let (power, c) = lead?;
            let inv = inv_mod(c, p);
            let tail = poly
                .iter()
                .filter(|(m, _)| m[var] == 0)
                .map(|(m, tc)| (m.clone(), mul_mod(p - tc, inv, p)))
                .filter(|(_, c)| *c != 0)
                .collect();
            Some(Rule { var, power, tail })
        })
}

fn build_rules(chart: &AffineChart, component: &[IntPolynomial]) -> Result<Vec<Rule>> {
    let p = chart.prime();
    let n = chart.nvars();
    let mut rules: Vec<Rule> = Vec::new();
    for eq in component {
        let eq = eq.embed(chart.variables()).ok_or_else(|| {
            Error::InvalidInput(format!("component equation `{eq}` uses unknown variables"))
        })?;
        let reduced = normal_form(&to_fp(&eq, p), &rules, p);
        let eliminated: Vec<usize> = rules.iter().map(|r| r.var).collect();
        let leftover = reduced.keys().any(|m| eliminated.iter().any(|&v| m[v] > 0));
        let rule = (!leftover)
            .then(|| make_rule(&reduced, &eliminated, n, p))
            .flatten()
            .ok_or_else(|| {
                Error::NotTriangular(format!(
                    "`{eq}` has no variable to eliminate after earlier equations"
                ))
            })?;
        rules.push(rule);
    }
    Ok(rules)
}

/// True iff every chart equation lies in the ideal of the component over
/// `F_p`, i.e. the component is contained in the special fiber.
pub fn verify_component(chart: &AffineChart, component: &[IntPolynomial]) -> Result<bool> {
    let rules = build_rules(chart, component)?;
    let p = chart.prime();
    Ok(chart
        .equations()
        .iter()
        .all(|f| normal_form(&to_fp(f, p), &rules, p).is_empty()))
}

/// True when the `F_p`-point satisfies every component equation.
pub fn point_on_component(
    chart: &AffineChart,
    component: &[IntPolynomial],
    point: &[u64],
) -> Result<bool> {
    let mut ok = true;
    for eq in component {
        let eq = eq.embed(chart.variables()).ok_or_else(|| {
            Error::InvalidInput(format!("component equation `{eq}` uses unknown variables"))
        })?;
        ok &= FpPoly::new(&eq, chart.prime()).eval(point) == 0;
    }
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modelkit::parse::parse_equation;

    const VARS: [&str; 3] = ["x", "v", "w"];

    fn chart() -> AffineChart {
        AffineChart::parse(&VARS, &["v^2 = x^4 - 26*x + w^2", "x*w = 5"], 5, 2).unwrap()
    }

    fn comp(eqs: &[&str]) -> Vec<IntPolynomial> {
        eqs.iter()
            .map(|e| parse_equation(e, &VARS).unwrap())
            .collect()
    }

    #[test]
    fn l_example_components() {
        let c = chart();
        assert!(verify_component(&c, &comp(&["w = 0", "v^2 = x^4 - x"])).unwrap());
        assert!(verify_component(&c, &comp(&["x = 0", "v = w"])).unwrap());
        assert!(verify_component(&c, &comp(&["x = 0", "v = -w"])).unwrap());
        assert!(!verify_component(&c, &comp(&["x = 0", "v = w + 1"])).unwrap());
        // the whole fiber is not contained in a single branch
        assert!(!verify_component(&c, &comp(&["x = 0"])).unwrap());
    }

    #[test]
    fn order_of_equations_is_irrelevant_when_triangular() {
        let c = chart();
        assert!(verify_component(&c, &comp(&["v = w", "x = 0"])).unwrap());
    }

    #[test]
    fn non_triangular_is_rejected() {
        let c = chart();
        assert!(matches!(
            verify_component(&c, &comp(&["x*v + v*w = 1"])),
            Err(Error::NotTriangular(_))
        ));
        assert!(matches!(
            verify_component(&c, &comp(&["x = 0", "x = 0"])),
            Err(Error::NotTriangular(_))
        ));
    }

    #[test]
    fn points() {
        let c = chart();
        let g1 = comp(&["x = 0", "v = w"]);
        assert!(point_on_component(&c, &g1, &[0, 3, 3]).unwrap());
        assert!(!point_on_component(&c, &g1, &[0, 3, 2]).unwrap());
    }
}

//! Vertical parts of extended divisors, the obstruction vector and the
//! monodromy pairing.
//!
//! A degree-zero divisor on the generic fiber is described by its horizontal
//! incidence `b` (intersection numbers of its closure with each component).
//! Its rational extension `D = D_hor + Σ q_i E_i` meets every component
//! trivially, i.e. `M·q = -b`, and is normalized by `q_base = 0` where `base`
//! is the component the marked point reduces to. The torsor extends to an
//! fppf torsor exactly when every `q_i` is an integer.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fiber::{FiniteAbelianGroup, IntersectionData, PhiPresentation};
use crate::linalg::solve_affine_rational;

/// Intersection numbers of a closed horizontal divisor with each component,
/// together with the component where the marked point reduces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HorizontalIncidence {
    pub b: Vec<BigInt>,
    pub base_index: usize,
}

impl HorizontalIncidence {
    pub fn new(b: Vec<BigInt>, base_index: usize) -> Self {
        HorizontalIncidence { b, base_index }
    }

    pub fn from_small(b: &[i64], base_index: usize) -> Self {
        HorizontalIncidence {
            b: b.iter().map(|&x| BigInt::from(x)).collect(),
            base_index,
        }
    }

    /// Degree on the generic fiber, `Σ n_j b_j`.
    pub fn degree(&self, fiber: &IntersectionData) -> BigInt {
        self.b
            .iter()
            .zip(&fiber.multiplicities)
            .map(|(b, n)| b * n)
            .sum()
    }

    fn check_against(&self, fiber: &IntersectionData) -> Result<()> {
        fiber.ensure_valid()?;
        if self.b.len() != fiber.len() {
            return Err(Error::InvalidInput(format!(
                "incidence has length {}, fiber has {} components",
                self.b.len(),
                fiber.len()
            )));
        }
        if self.base_index >= fiber.len() {
            return Err(Error::InvalidInput(format!(
                "base component index {} out of range",
                self.base_index
            )));
        }
        let degree = self.degree(fiber);
        if !degree.is_zero() {
            return Err(Error::DegreeNotZero { degree });
        }
        Ok(())
    }
}

/// Rational vertical part `q` with `M·q = -b` and `q_base = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerticalPart {
    pub q: Vec<BigRational>,
    pub base_index: usize,
}

impl VerticalPart {
    pub fn is_integral(&self) -> bool {
        self.q.iter().all(BigRational::is_integer)
    }

    /// Smallest positive integer clearing all denominators.
    pub fn common_denominator(&self) -> BigInt {
        self.q
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum VerdictKind {
    /// The torsor extends as an fppf torsor.
    FppfExtension,
    /// Only a logarithmic extension exists.
    LogOnly,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerdictKind::FppfExtension => write!(f, "FppfExtension"),
            VerdictKind::LogOnly => write!(f, "LogOnly"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub kind: VerdictKind,
    /// `q mod Z`, each entry in `[0, 1)`.
    pub gamma: Vec<BigRational>,
}

/// Class of a degree-zero incidence vector in `Φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiClass {
    /// Coordinates in the nontrivial invariant factors, each in `[0, d_i)`.
    pub coordinates: Vec<BigInt>,
    pub moduli: Vec<BigInt>,
    pub order: BigInt,
}

impl PhiClass {
    pub fn is_identity(&self) -> bool {
        self.coordinates.iter().all(Zero::is_zero)
    }
}

/// Representative of `x mod Z` in `[0, 1)`.
pub fn fractional_part(x: &BigRational) -> BigRational {
    x - BigRational::from_integer(x.floor().to_integer())
}

/// Solves for the unique rational vertical part normalized at the base.
pub fn extend_divisor(fiber: &IntersectionData, h: &HorizontalIncidence) -> Result<VerticalPart> {
    h.check_against(fiber)?;
    let solution = solve_affine_rational(&fiber.matrix, &h.b)?.ok_or_else(|| {
        Error::InvalidFiber("no rational vertical part exists for this incidence".into())
    })?;
    // ker M is the line spanned by the multiplicity vector
    let kernel = solution
        .kernel_basis
        .first()
        .cloned()
        .ok_or_else(|| Error::InvalidFiber("intersection matrix has trivial kernel".into()))?;
    let base = h.base_index;
    let shift = &solution.particular[base] / &kernel[base];
    let q: Vec<BigRational> = solution
        .particular
        .iter()
        .zip(&kernel)
        .map(|(p, k)| p - &shift * k)
        .collect();

    let residual = fiber.matrix.mul_rational_vec(&q);
    debug_assert!(residual
        .iter()
        .zip(&h.b)
        .all(|(r, b)| (r + BigRational::from_integer(b.clone())).is_zero()));
    debug_assert!(q[base].is_zero());
    Ok(VerticalPart {
        q,
        base_index: base,
    })
}

/// Obstruction vector `q mod Z` and the resulting verdict.
pub fn gamma_and_verdict(fiber: &IntersectionData, h: &HorizontalIncidence) -> Result<Verdict> {
    let vertical = extend_divisor(fiber, h)?;
    let gamma: Vec<BigRational> = vertical.q.iter().map(fractional_part).collect();
    let kind = if gamma.iter().all(Zero::is_zero) {
        VerdictKind::FppfExtension
    } else {
        VerdictKind::LogOnly
    };
    Ok(Verdict { kind, gamma })
}

/// Class of `b` in `Φ` in invariant factor coordinates, with its order.
pub fn class_in_phi(fiber: &IntersectionData, h: &HorizontalIncidence) -> Result<PhiClass> {
    h.check_against(fiber)?;
    let pres = PhiPresentation::new(fiber)?;
    let coordinates = pres.class_of(&h.b);
    let order = pres.class_order(&coordinates);
    Ok(PhiClass {
        coordinates,
        moduli: pres.moduli(),
        order,
    })
}

/// `⟨s, t⟩ = Σ (b_s)_i (q_t)_i mod Z`, returned in `[0, 1)`.
///
/// The horizontal-horizontal intersection term of the full Néron symbol is
/// an integer and is dropped.
pub fn monodromy_pairing(
    fiber: &IntersectionData,
    s: &HorizontalIncidence,
    t: &HorizontalIncidence,
) -> Result<BigRational> {
    s.check_against(fiber)?;
    let q_t = extend_divisor(fiber, t)?;
    let value =
        s.b.iter()
            .zip(&q_t.q)
            .fold(BigRational::zero(), |acc, (b, q)| acc + q * b);
    Ok(fractional_part(&value))
}

/// True when the torsor's group order is prime to `#Φ`, which forces an
/// fppf extension regardless of the divisor data.
pub fn coprime_shortcut(group_order: &BigInt, phi: &FiniteAbelianGroup) -> bool {
    group_order.gcd(&phi.order()).is_one()
}

//! Intersection data of a special fiber and the component group of the
//! Néron model computed from it.
//!
//! For a fiber with components `E_1..E_r`, multiplicities `n` and
//! intersection matrix `M`, the component group is
//! `Φ = L / M·Z^r` with `L = {a in Z^r : Σ n_i a_i = 0}`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{integer_kernel, smith_normal_form, unimodular_inverse, IntMatrix};

/// Finite abelian group given by its invariant factors `d_1 | d_2 | ...`,
/// each at least 2. The empty list is the trivial group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FiniteAbelianGroup {
    invariant_factors: Vec<BigInt>,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Builds the group from an invariant factor list, dropping units.
    /// Fails if the list is not a divisibility chain or contains zero.
    pub fn from_invariant_factors<T: Into<BigInt> + Clone>(factors: &[T]) -> Result<Self> {
        let factors: Vec<BigInt> = factors
            .iter()
            .cloned()
            .map(|f| Into::<BigInt>::into(f).abs())
            .filter(|f| !f.is_one())
            .collect();
        if factors.iter().any(Zero::is_zero) {
            return Err(Error::InvalidInput(
                "invariant factor 0 gives an infinite group".into(),
            ));
        }
        if factors.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(Error::InvalidInput(
                "invariant factors must form a divisibility chain".into(),
            ));
        }
        Ok(FiniteAbelianGroup {
            invariant_factors: factors,
        })
    }

    /// The direct sum of cyclic groups of the given (nonzero) orders,
    /// brought into invariant factor form.
    pub fn from_cyclic_orders<T: Into<BigInt> + Clone>(orders: &[T]) -> Result<Self> {
        let n = orders.len();
        let mut diag = IntMatrix::zeros(n, n);
        for (i, o) in orders.iter().enumerate() {
            diag[(i, i)] = o.clone().into();
        }
        Self::from_invariant_factors(&smith_normal_form(&diag).diagonal())
    }

    /// `(Z/r)^k`.
    pub fn elementary(r: u64, k: usize) -> Self {
        Self::from_invariant_factors(&vec![BigInt::from(r); k]).expect("r >= 1")
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn exponent(&self) -> BigInt {
        self.invariant_factors
            .last()
            .cloned()
            .unwrap_or_else(BigInt::one)
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// The `r`-torsion subgroup `⊕ Z/gcd(d_i, r)`.
    pub fn torsion_subgroup(&self, r: u64) -> Self {
        let r = BigInt::from(r);
        FiniteAbelianGroup {
            invariant_factors: self
                .invariant_factors
                .iter()
                .map(|d| d.gcd(&r))
                .filter(|g| !g.is_one())
                .collect(),
        }
    }

    /// True iff the group is isomorphic to `(Z/r)^k`.
    pub fn is_elementary(&self, r: u64, k: usize) -> bool {
        *self == Self::elementary(r, k)
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Components, multiplicities and intersection matrix of a special fiber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionData {
    pub labels: Vec<String>,
    pub multiplicities: Vec<BigInt>,
    pub matrix: IntMatrix,
}

/// First violated invariant of an [`IntersectionData`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiberDefect {
    Empty,
    DimensionMismatch {
        labels: usize,
        multiplicities: usize,
        rows: usize,
        cols: usize,
    },
    DuplicateLabel(String),
    NonPositiveMultiplicity(usize),
    NotSymmetric {
        row: usize,
        col: usize,
    },
    NegativeOffDiagonal {
        row: usize,
        col: usize,
    },
    NonZeroFiberIntersection {
        row: usize,
        value: BigInt,
    },
    Disconnected,
    RankDeficient {
        rank: usize,
        expected: usize,
    },
}

impl fmt::Display for FiberDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberDefect::Empty => write!(f, "fiber has no components"),
            FiberDefect::DimensionMismatch { labels, multiplicities, rows, cols } => write!(
                f,
                "dimension mismatch: {labels} labels, {multiplicities} multiplicities, {rows}x{cols} matrix"
            ),
            FiberDefect::DuplicateLabel(l) => write!(f, "duplicate component label `{l}`"),
            FiberDefect::NonPositiveMultiplicity(i) => {
                write!(f, "multiplicity of component {i} is not positive")
            }
            FiberDefect::NotSymmetric { row, col } => {
                write!(f, "matrix is not symmetric at ({row}, {col})")
            }
            FiberDefect::NegativeOffDiagonal { row, col } => {
                write!(f, "off-diagonal entry ({row}, {col}) is negative")
            }
            FiberDefect::NonZeroFiberIntersection { row, value } => write!(
                f,
                "component {row} meets the full fiber with degree {value} (M·n must vanish)"
            ),
            FiberDefect::Disconnected => write!(f, "components do not form a connected fiber"),
            FiberDefect::RankDeficient { rank, expected } => write!(
                f,
                "matrix has rank {rank}, expected {expected}; the component group would be infinite"
            ),
        }
    }
}

impl IntersectionData {
    pub fn new(labels: Vec<String>, multiplicities: Vec<BigInt>, matrix: IntMatrix) -> Self {
        IntersectionData {
            labels,
            multiplicities,
            matrix,
        }
    }

    /// Convenience constructor from small integers.
    pub fn from_small(labels: &[&str], multiplicities: &[i64], rows: &[Vec<i64>]) -> Result<Self> {
        Ok(IntersectionData {
            labels: labels.iter().map(|s| s.to_string()).collect(),
            multiplicities: multiplicities.iter().map(|&m| BigInt::from(m)).collect(),
            matrix: IntMatrix::from_rows(rows)?,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn has_unit_multiplicities(&self) -> bool {
        self.multiplicities.iter().all(One::is_one)
    }

    /// Checks every invariant, reporting the first one violated.
    pub fn validate(&self) -> std::result::Result<(), FiberDefect> {
        let r = self.labels.len();
        if r == 0 {
            return Err(FiberDefect::Empty);
        }
        let m = &self.matrix;
        if self.multiplicities.len() != r || m.rows() != r || m.cols() != r {
            return Err(FiberDefect::DimensionMismatch {
                labels: r,
                multiplicities: self.multiplicities.len(),
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let mut seen = BTreeSet::new();
        for l in &self.labels {
            if !seen.insert(l) {
                return Err(FiberDefect::DuplicateLabel(l.clone()));
            }
        }
        if let Some(i) = self.multiplicities.iter().position(|n| !n.is_positive()) {
            return Err(FiberDefect::NonPositiveMultiplicity(i));
        }
        for i in 0..r {
            for j in 0..r {
                if m[(i, j)] != m[(j, i)] {
                    return Err(FiberDefect::NotSymmetric { row: i, col: j });
                }
                if i != j && m[(i, j)].is_negative() {
                    return Err(FiberDefect::NegativeOffDiagonal { row: i, col: j });
                }
            }
        }
        for (row, value) in m.mul_vec(&self.multiplicities).into_iter().enumerate() {
            if !value.is_zero() {
                return Err(FiberDefect::NonZeroFiberIntersection { row, value });
            }
        }
        if !support_connected(m) {
            return Err(FiberDefect::Disconnected);
        }
        let rank = m.rank();
        if rank != r - 1 {
            return Err(FiberDefect::RankDeficient {
                rank,
                expected: r - 1,
            });
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    pub(crate) fn ensure_valid(&self) -> Result<()> {
        self.validate()
            .map_err(|d| Error::InvalidFiber(d.to_string()))
    }

    /// Relabels components: the new component `i` is the old `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        IntersectionData {
            labels: perm.iter().map(|&i| self.labels[i].clone()).collect(),
            multiplicities: perm
                .iter()
                .map(|&i| self.multiplicities[i].clone())
                .collect(),
            matrix: self.matrix.permute_symmetric(perm),
        }
    }
}

fn support_connected(m: &IntMatrix) -> bool {
    let n = m.rows();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if !seen[j] && i != j && !m[(i, j)].is_zero() {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// An explicit presentation of `Φ = L / M·Z^r`, used to compute the group
/// and to locate classes of degree-zero vectors in it.
#[derive(Clone, Debug)]
pub struct PhiPresentation {
    /// Columns form a Z-basis of `L` (r x (r-1)).
    lattice_basis: IntMatrix,
    /// Maps a vector of `L` to its coordinates in `lattice_basis` ((r-1) x r).
    coordinates: IntMatrix,
    /// Left transform of the Smith form of the relation matrix.
    left: IntMatrix,
    /// Full Smith diagonal of the relation matrix, units included.
    diagonal: Vec<BigInt>,
}

impl PhiPresentation {
    pub fn new(fiber: &IntersectionData) -> Result<Self> {
        fiber.ensure_valid()?;
        let r = fiber.len();
        let degree_map = IntMatrix::from_rows(std::slice::from_ref(&fiber.multiplicities))?;
        let lattice_basis = integer_kernel(&degree_map);
        debug_assert_eq!(lattice_basis.cols(), r - 1);

        // complete the basis of L to a unimodular matrix: [w | basis]
        let snf_n = smith_normal_form(&degree_map);
        let v_inv = unimodular_inverse(&snf_n.v).expect("Smith transforms are unimodular");
        let mut coordinates = IntMatrix::zeros(r - 1, r);
        for i in 1..r {
            for j in 0..r {
                coordinates[(i - 1, j)] = v_inv[(i, j)].clone();
            }
        }

        let relations = &coordinates * &fiber.matrix;
        let snf = smith_normal_form(&relations);
        let diagonal = snf.diagonal();
        if diagonal.iter().any(Zero::is_zero) {
            return Err(Error::InvalidFiber("component group is infinite".into()));
        }
        Ok(PhiPresentation {
            lattice_basis,
            coordinates,
            left: snf.u,
            diagonal,
        })
    }

    pub fn group(&self) -> FiniteAbelianGroup {
        FiniteAbelianGroup::from_invariant_factors(&self.diagonal)
            .expect("Smith diagonal is a divisibility chain")
    }

    /// Moduli of the nontrivial cyclic factors, in invariant factor order.
    pub fn moduli(&self) -> Vec<BigInt> {
        self.diagonal
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }

    /// Coordinates of the class of `b` (a degree-zero vector) in the
    /// nontrivial cyclic factors, each reduced to `[0, d_i)`.
    pub fn class_of(&self, b: &[BigInt]) -> Vec<BigInt> {
        let y = self.coordinates.mul_vec(b);
        let z = self.left.mul_vec(&y);
        z.iter()
            .zip(&self.diagonal)
            .filter(|(_, d)| !d.is_one())
            .map(|(zi, d)| zi.mod_floor(d))
            .collect()
    }

    /// A degree-zero integer vector whose class has the given coordinates.
    pub fn representative(&self, class: &[BigInt]) -> Vec<BigInt> {
        let mut z = vec![BigInt::zero(); self.diagonal.len()];
        let mut it = class.iter();
        for (zi, d) in z.iter_mut().zip(&self.diagonal) {
            if !d.is_one() {
                *zi = it.next().cloned().unwrap_or_default();
            }
        }
        let left_inv = unimodular_inverse(&self.left).expect("Smith transforms are unimodular");
        let y = left_inv.mul_vec(&z);
        self.lattice_basis.mul_vec(&y)
    }

    /// Every element of the group, as coordinate vectors in lexicographic order.
    pub fn elements(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![Vec::new()];
        for d in self.moduli() {
            let mut next = Vec::new();
            for prefix in &out {
                let mut k = BigInt::zero();
                while k < d {
                    let mut e = prefix.clone();
                    e.push(k.clone());
                    next.push(e);
                    k += 1;
                }
            }
            out = next;
        }
        out
    }

    /// Order of the class with the given coordinates.
    pub fn class_order(&self, class: &[BigInt]) -> BigInt {
        self.moduli()
            .iter()
            .zip(class)
            .fold(BigInt::one(), |acc, (d, c)| acc.lcm(&(d / d.gcd(c))))
    }
}

/// Component group `Φ` of the Néron model, computed from the fiber.
pub fn component_group(fiber: &IntersectionData) -> Result<FiniteAbelianGroup> {
    Ok(PhiPresentation::new(fiber)?.group())
}

/// `⊕ Z/gcd(d_i, r)`.
pub fn torsion_subgroup(group: &FiniteAbelianGroup, r: u64) -> FiniteAbelianGroup {
    group.torsion_subgroup(r)
}

/// Whether `Φ[r] ≅ (Z/r)^{b1}`, the condition under which the `r`-torsion of
/// the Néron model is finite over a semistable fiber with Betti number `b1`.
pub fn jr_finiteness(fiber: &IntersectionData, b1: usize, r: u64) -> Result<bool> {
    if r < 2 {
        return Err(Error::InvalidInput("r must be at least 2".into()));
    }
    Ok(component_group(fiber)?
        .torsion_subgroup(r)
        .is_elementary(r, b1))
}

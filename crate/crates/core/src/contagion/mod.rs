//! Generated point sets of a finite sequence `x_1..x_J`: alternating sums,
//! nonnegative `dx`-descendants, and signed combinations with bounded partial sums.
//!
//! Indices are 1-based throughout, matching how the sets are usually written.

mod epsilon;
mod inclusion;
mod lacunary;

use num::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{self, CurveFamily, GeometryError, PlanePoint};
use crate::rational::{self, Rational};

pub use epsilon::{
    check_epsilon_equivalence, enumerate_s, epsilon_conditions, Discrepancy, EpsilonConditions,
    EquivalenceReport, SignedCombination,
};
pub use inclusion::{
    alt_first_generation_gap, check_inclusion, first_generation_gap, separation_threshold,
    GapReport, InclusionCheck, InclusionTarget,
};
pub use lacunary::{lacunary_gap_check, GapMode, LacunaryEntry, LacunaryReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContagionError {
    #[error("maxTerms must be odd and at least 3 (got {0})")]
    BadTermCount(usize),
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid index pair: {0}")]
    IndexOrder(String),
    #[error("the separation threshold needs a positive convexity modulus")]
    ZeroModulus,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("sequence violates x_(j+1) >= (1 + delta) x_j at position {position}")]
    SpacingViolated { position: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

pub type Result<T> = std::result::Result<T, ContagionError>;

/// Points `x_1..x_J` with strictly increasing abscissae.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointSequence {
    points: Vec<PlanePoint>,
}

impl PointSequence {
    pub fn new(points: Vec<PlanePoint>) -> Result<Self> {
        geometry::check_increasing(points.iter().map(|p| &p.u))?;
        Ok(PointSequence { points })
    }

    /// Points `(u, phi(u))` of a curve.
    pub fn on_curve(curve: &CurveFamily, us: &[Rational]) -> Result<Self> {
        Ok(PointSequence { points: geometry::graph_points(curve, us)? })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[PlanePoint] {
        &self.points
    }

    /// `x_j`, 1-based.
    pub fn get(&self, j: usize) -> Result<&PlanePoint> {
        self.check_index(j, self.len())?;
        Ok(&self.points[j - 1])
    }

    /// `dx_j = x_(j+1) - x_j` for `1 <= j < J`.
    pub fn delta(&self, j: usize) -> Result<PlanePoint> {
        self.check_index(j, self.len().saturating_sub(1))?;
        Ok(self.points[j].sub(&self.points[j - 1]))
    }

    fn check_index(&self, j: usize, len: usize) -> Result<()> {
        if j == 0 || j > len {
            return Err(ContagionError::IndexOutOfRange { index: j, len });
        }
        Ok(())
    }

    /// Evaluates integer coefficients against the points.
    pub fn combine(&self, epsilons: &[i64]) -> PlanePoint {
        combine(&self.points, epsilons)
    }
}

/// Values that can be combined with integer coefficients.
pub trait Lattice: Clone {
    fn zero() -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn times(&self, n: i64) -> Self;
}

impl Lattice for Rational {
    fn zero() -> Self {
        <Rational as Zero>::zero()
    }

    fn plus(&self, o: &Self) -> Self {
        self + o
    }

    fn times(&self, n: i64) -> Self {
        self * rational::int(n)
    }
}

impl Lattice for PlanePoint {
    fn zero() -> Self {
        PlanePoint::origin()
    }

    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }

    fn times(&self, n: i64) -> Self {
        self.scale(&rational::int(n))
    }
}

pub fn combine<T: Lattice>(xs: &[T], epsilons: &[i64]) -> T {
    xs.iter()
        .zip(epsilons)
        .filter(|(_, e)| **e != 0)
        .fold(T::zero(), |acc, (x, e)| acc.plus(&x.times(*e)))
}

/// How a generated point is built from the sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum Representation {
    /// `x_(j1) - x_(j2) + ... + x_(j_(2i+1))`.
    Alt { indices: Vec<usize> },
    /// `x_base - sum_(j' >= base) n_(j') dx_(j')`; `coefficients[j'-1] = n_(j')`.
    Schur { base: usize, coefficients: Vec<u32> },
    /// `x_top - sum_(j' < top) n_(j') dx_(j')`; `coefficients[j'-1] = n_(j')`.
    Delta { top: usize, coefficients: Vec<u32> },
}

impl Representation {
    /// Number of subtracted `dx` terms.
    pub fn generation(&self) -> u32 {
        match self {
            Representation::Alt { indices } => indices
                .chunks(2)
                .filter(|c| c.len() == 2)
                .map(|c| (c[1] - c[0]) as u32)
                .sum(),
            Representation::Schur { coefficients, .. } | Representation::Delta { coefficients, .. } => {
                coefficients.iter().sum()
            }
        }
    }

    /// Coefficient vector `eps` with `x = sum eps_i x_i`, by direct expansion.
    pub fn epsilons(&self, len: usize) -> Vec<i64> {
        let mut eps = vec![0i64; len];
        match self {
            Representation::Alt { indices } => {
                for (l, &j) in indices.iter().enumerate() {
                    eps[j - 1] += if l % 2 == 0 { 1 } else { -1 };
                }
            }
            Representation::Schur { base: start, coefficients }
            | Representation::Delta { top: start, coefficients } => {
                eps[start - 1] += 1;
                for (k, &n) in coefficients.iter().enumerate() {
                    // dx_(k+1) = x_(k+2) - x_(k+1)
                    eps[k + 1] -= n as i64;
                    eps[k] += n as i64;
                }
            }
        }
        eps
    }

    pub fn evaluate<T: Lattice>(&self, xs: &[T]) -> T {
        combine(xs, &self.epsilons(xs.len()))
    }
}

/// A point together with the representation that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratedPoint {
    pub point: PlanePoint,
    pub representation: Representation,
    pub generation: u32,
}

impl GeneratedPoint {
    fn from_rep(seq: &PointSequence, representation: Representation) -> Self {
        GeneratedPoint {
            point: representation.evaluate(seq.points()),
            generation: representation.generation(),
            representation,
        }
    }
}

/// Strictly increasing index lists of odd length in `3..=max_terms` drawn from `1..=len`.
pub fn alt_representations(len: usize, max_terms: usize) -> Vec<Representation> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn walk(start: usize, len: usize, max_terms: usize, current: &mut Vec<usize>, out: &mut Vec<Representation>) {
        if current.len() >= 3 && current.len() % 2 == 1 {
            out.push(Representation::Alt { indices: current.clone() });
        }
        if current.len() == max_terms {
            return;
        }
        for j in start..=len {
            current.push(j);
            walk(j + 1, len, max_terms, current, out);
            current.pop();
        }
    }
    walk(1, len, max_terms, &mut current, &mut out);
    out
}

/// Coefficient vectors of length `slots` that vanish before `from` and sum to `1..=max_total`.
fn coefficient_vectors(slots: usize, from: usize, max_total: u32, allow_zero: bool) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; slots];
    fn walk(pos: usize, left: u32, allow_zero: bool, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>, total: u32) {
        if pos == current.len() {
            if total > 0 || allow_zero {
                out.push(current.clone());
            }
            return;
        }
        for n in 0..=left {
            current[pos] = n;
            walk(pos + 1, left - n, allow_zero, current, out, total + n);
        }
        current[pos] = 0;
    }
    walk(from.min(slots), max_total, allow_zero, &mut current, &mut out, 0);
    out
}

/// Every `x_base - sum n dx` with `sum n` in `1..=max_generation`, in lexicographic order.
pub fn schur_representations(len: usize, max_generation: u32) -> Vec<Representation> {
    let slots = len.saturating_sub(1);
    let mut out = Vec::new();
    if max_generation == 0 {
        return out;
    }
    for base in 1..=len {
        for coefficients in coefficient_vectors(slots, base - 1, max_generation, false) {
            out.push(Representation::Schur { base, coefficients });
        }
    }
    out
}

/// Alternating sums with at least 3 and at most `max_terms` terms.
pub fn enumerate_alt(seq: &PointSequence, max_terms: usize) -> Result<Vec<GeneratedPoint>> {
    if max_terms < 3 || max_terms % 2 == 0 {
        return Err(ContagionError::BadTermCount(max_terms));
    }
    Ok(alt_representations(seq.len(), max_terms)
        .into_iter()
        .map(|r| GeneratedPoint::from_rep(seq, r))
        .collect())
}

/// Descendants `x_i - sum_(j' >= i) n_(j') dx_(j')` of generation `1..=max_generation`.
pub fn enumerate_schur(seq: &PointSequence, max_generation: u32) -> Vec<GeneratedPoint> {
    schur_representations(seq.len(), max_generation)
        .into_iter()
        .map(|r| GeneratedPoint::from_rep(seq, r))
        .collect()
}

/// Points `x_(j+1) - sum_(j' <= j) n_(j') dx_(j')` with `n` in `{0, 1}`, not all zero.
pub fn alt_delta_form(seq: &PointSequence, j: usize) -> Result<Vec<GeneratedPoint>> {
    if j == 0 || j >= seq.len() {
        return Err(ContagionError::IndexOutOfRange { index: j, len: seq.len().saturating_sub(1) });
    }
    let slots = seq.len() - 1;
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << j) {
        let coefficients: Vec<u32> = (0..slots)
            .map(|k| if k < j { ((mask >> k) & 1) as u32 } else { 0 })
            .collect();
        out.push(GeneratedPoint::from_rep(seq, Representation::Delta { top: j + 1, coefficients }));
    }
    out.sort_by(|a, b| a.representation.cmp(&b.representation));
    Ok(out)
}

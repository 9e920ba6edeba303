//! Finite-dimensional instances of the two nested-subspace lemmas and the
//! projection splitting `(g, A_j h) = a_j + b_j` behind them.
//!
//! Flavor `OldLemma`: increasing chain `M_1 ⊂ ... ⊂ M_J`, images `A_j M_j`
//! increasing, `A_j h ∈ A_(j+1) M_(j+1)` and `g ⊥ A_(j+1) M_j` for `j < J`.
//!
//! Flavor `NewLemma`: decreasing chain `L_1 ⊃ ... ⊃ L_J`, images
//! `A_2 L_1 ⊂ ... ⊂ A_J L_(J-1)`, `A_j h ∈ A_(j+1) L_j` for `j < J` and
//! `g ⊥ A_j L_j` for `j > 1`.

pub mod linalg;
mod random;
mod translation;

use num::complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use linalg::{inner, max_abs, op_norm_bound, orthonormalize, project, projector, CMatrix, CVector};

pub use random::random_instance;
pub use translation::{
    exact_delta_check, exterior_sets, forbidden_translates, interior_sets, translation_instance, ExactDeltaReport,
    LatticeFunction, TranslationFlavor, TranslationInstance, Window,
};

pub const UNITARY_TOL: f64 = 1e-12;
pub const ORTHONORMAL_TOL: f64 = 1e-12;
pub const IDENTITY_TOL: f64 = 1e-10;
pub const BOUND_REL_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HilbertError {
    #[error("malformed instance: {0}")]
    Malformed(String),
    #[error("infeasible: dimension {n} cannot carry a chain of length {len}")]
    Infeasible { n: usize, len: usize },
    #[error("hypotheses fail ({0} violations); refusing to certify")]
    HypothesesFailed(usize),
    #[error("translate {0} leaves the window")]
    WindowOverflow(String),
    #[error("point {0} is not a lattice point")]
    NonLattice(String),
    #[error("invalid instance JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, HilbertError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Flavor {
    OldLemma,
    NewLemma,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaInstance {
    pub flavor: Flavor,
    /// Orthonormal column bases of `M_1..M_J` (old) or `L_1..L_J` (new).
    pub chain: Vec<CMatrix>,
    pub unitaries: Vec<CMatrix>,
    pub g: CVector,
    pub h: CVector,
}

impl LemmaInstance {
    pub fn dimension(&self) -> usize {
        self.g.len()
    }

    pub fn len(&self) -> usize {
        self.unitaries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unitaries.is_empty()
    }

    fn check_shapes(&self) -> Result<()> {
        let n = self.dimension();
        if self.h.len() != n {
            return Err(HilbertError::Malformed(format!("h has length {}, g has {n}", self.h.len())));
        }
        if self.chain.len() != self.unitaries.len() {
            return Err(HilbertError::Malformed(format!(
                "{} chain bases for {} unitaries",
                self.chain.len(),
                self.unitaries.len()
            )));
        }
        for (j, a) in self.unitaries.iter().enumerate() {
            if a.nrows() != n || a.ncols() != n {
                return Err(HilbertError::Malformed(format!("A_{} is not {n}x{n}", j + 1)));
            }
        }
        for (j, b) in self.chain.iter().enumerate() {
            if b.nrows() != n {
                return Err(HilbertError::Malformed(format!("basis {} has {} rows", j + 1, b.nrows())));
            }
            let gram = b.adjoint() * b;
            let r = max_abs(&(gram - CMatrix::identity(b.ncols(), b.ncols())));
            if r > ORTHONORMAL_TOL {
                return Err(HilbertError::Malformed(format!(
                    "basis {} is not orthonormal (residual {r:.3e})",
                    j + 1
                )));
            }
        }
        Ok(())
    }

    /// Orthonormal basis of `A_j S_k` (1-based), robust to non-unitary `A_j`.
    fn image(&self, j: usize, k: usize) -> CMatrix {
        orthonormalize(&(&self.unitaries[j - 1] * &self.chain[k - 1]))
    }

    fn ah(&self, j: usize) -> CVector {
        &self.unitaries[j - 1] * &self.h
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(InstanceRepr::from(self)).expect("instance serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let repr: InstanceRepr =
            serde_json::from_value(v.clone()).map_err(|e| HilbertError::Json(e.to_string()))?;
        repr.try_into()
    }
}

/// Row-major matrix with `[re, im]` entries.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl From<&CMatrix> for MatrixRepr {
    fn from(m: &CMatrix) -> Self {
        let mut data = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                data.push([m[(i, j)].re, m[(i, j)].im]);
            }
        }
        MatrixRepr { rows: m.nrows(), cols: m.ncols(), data }
    }
}

impl TryFrom<MatrixRepr> for CMatrix {
    type Error = HilbertError;
    fn try_from(r: MatrixRepr) -> Result<CMatrix> {
        if r.data.len() != r.rows * r.cols {
            return Err(HilbertError::Json(format!(
                "matrix claims {}x{} but has {} entries",
                r.rows,
                r.cols,
                r.data.len()
            )));
        }
        Ok(CMatrix::from_fn(r.rows, r.cols, |i, j| {
            let [re, im] = r.data[i * r.cols + j];
            Complex64::new(re, im)
        }))
    }
}

pub(crate) fn complex_pairs(v: impl IntoIterator<Item = Complex64>) -> Vec<[f64; 2]> {
    v.into_iter().map(|z| [z.re, z.im]).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct InstanceRepr {
    flavor: Flavor,
    dimension: usize,
    chain_bases: Vec<MatrixRepr>,
    unitaries: Vec<MatrixRepr>,
    g: Vec<[f64; 2]>,
    h: Vec<[f64; 2]>,
}

impl From<&LemmaInstance> for InstanceRepr {
    fn from(i: &LemmaInstance) -> Self {
        InstanceRepr {
            flavor: i.flavor,
            dimension: i.dimension(),
            chain_bases: i.chain.iter().map(MatrixRepr::from).collect(),
            unitaries: i.unitaries.iter().map(MatrixRepr::from).collect(),
            g: complex_pairs(i.g.iter().copied()),
            h: complex_pairs(i.h.iter().copied()),
        }
    }
}

impl TryFrom<InstanceRepr> for LemmaInstance {
    type Error = HilbertError;
    fn try_from(r: InstanceRepr) -> Result<Self> {
        let vector = |v: Vec<[f64; 2]>| CVector::from_iterator(v.len(), v.into_iter().map(|[a, b]| Complex64::new(a, b)));
        let inst = LemmaInstance {
            flavor: r.flavor,
            chain: r.chain_bases.into_iter().map(CMatrix::try_from).collect::<Result<_>>()?,
            unitaries: r.unitaries.into_iter().map(CMatrix::try_from).collect::<Result<_>>()?,
            g: vector(r.g),
            h: vector(r.h),
        };
        if inst.dimension() != r.dimension {
            return Err(HilbertError::Json(format!(
                "dimension {} disagrees with vector length {}",
                r.dimension,
                inst.dimension()
            )));
        }
        Ok(inst)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Condition {
    Unitarity,
    ChainNesting,
    ImageNesting,
    Membership,
    Orthogonality,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub condition: Condition,
    /// 1-based index the condition is stated for.
    pub j: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HypothesisReport {
    pub pass: bool,
    pub max_residual: f64,
    pub violations: Vec<Violation>,
}

/// Largest column residual of `span(sub)` against `span(space)`.
fn containment_residual(sub: &CMatrix, space: &CMatrix) -> f64 {
    sub.column_iter()
        .map(|c| {
            let c = c.into_owned();
            (&c - project(space, &c)).norm()
        })
        .fold(0.0, f64::max)
}

pub fn verify_hypotheses(inst: &LemmaInstance) -> Result<HypothesisReport> {
    inst.check_shapes()?;
    let len = inst.len();
    let mut checks: Vec<(Condition, usize, f64, f64)> = Vec::new();
    let (gn, hn) = (inst.g.norm().max(1.0), inst.h.norm().max(1.0));

    for (j, a) in inst.unitaries.iter().enumerate() {
        checks.push((Condition::Unitarity, j + 1, linalg::unitarity_residual(a), UNITARY_TOL));
    }
    match inst.flavor {
        Flavor::OldLemma => {
            for j in 1..len {
                let r = containment_residual(&inst.chain[j - 1], &inst.chain[j]);
                checks.push((Condition::ChainNesting, j, r, IDENTITY_TOL));
                let r = containment_residual(&inst.image(j, j), &inst.image(j + 1, j + 1));
                checks.push((Condition::ImageNesting, j, r, IDENTITY_TOL));
                let target = inst.image(j + 1, j + 1);
                let ah = inst.ah(j);
                checks.push((Condition::Membership, j, (&ah - project(&target, &ah)).norm(), IDENTITY_TOL * hn));
                let forbidden = inst.image(j + 1, j);
                checks.push((Condition::Orthogonality, j, project(&forbidden, &inst.g).norm(), IDENTITY_TOL * gn));
            }
        }
        Flavor::NewLemma => {
            for j in 1..len {
                let r = containment_residual(&inst.chain[j], &inst.chain[j - 1]);
                checks.push((Condition::ChainNesting, j, r, IDENTITY_TOL));
                if j + 1 < len {
                    let r = containment_residual(&inst.image(j + 1, j), &inst.image(j + 2, j + 1));
                    checks.push((Condition::ImageNesting, j, r, IDENTITY_TOL));
                }
                let target = inst.image(j + 1, j);
                let ah = inst.ah(j);
                checks.push((Condition::Membership, j, (&ah - project(&target, &ah)).norm(), IDENTITY_TOL * hn));
            }
            for j in 2..=len {
                let forbidden = inst.image(j, j);
                checks.push((Condition::Orthogonality, j, project(&forbidden, &inst.g).norm(), IDENTITY_TOL * gn));
            }
        }
    }
    let max_residual = checks.iter().map(|c| c.2).fold(0.0, f64::max);
    let violations: Vec<Violation> = checks
        .into_iter()
        .filter(|(_, _, r, tol)| !(r <= tol))
        .map(|(condition, j, residual, _)| Violation { condition, j, residual })
        .collect();
    Ok(HypothesisReport { pass: violations.is_empty(), max_residual, violations })
}

fn require_hypotheses(inst: &LemmaInstance) -> Result<()> {
    let r = verify_hypotheses(inst)?;
    if !r.pass {
        return Err(HilbertError::HypothesesFailed(r.violations.len()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundReport {
    pub sum_squares: f64,
    pub bound: f64,
    pub ratio: f64,
    pub holds: bool,
}

pub fn inner_products(inst: &LemmaInstance) -> Vec<Complex64> {
    (1..=inst.len()).map(|j| inner(&inst.g, &inst.ah(j))).collect()
}

/// `sum_j |(g, A_j h)|^2` against `4 |g|^2 |h|^2`.
pub fn lemma_bound(inst: &LemmaInstance) -> Result<BoundReport> {
    require_hypotheses(inst)?;
    let sum_squares: f64 = inner_products(inst).iter().map(|z| z.norm_sqr()).sum();
    let bound = 4.0 * inst.g.norm_squared() * inst.h.norm_squared();
    let ratio = if bound > 0.0 { sum_squares / bound } else { 0.0 };
    let holds = sum_squares <= bound * (1.0 + BOUND_REL_TOL);
    Ok(BoundReport { sum_squares, bound, ratio, holds })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SplitResult {
    #[serde(serialize_with = "ser_complex")]
    pub a: Vec<Complex64>,
    #[serde(serialize_with = "ser_complex")]
    pub b: Vec<Complex64>,
    #[serde(serialize_with = "ser_complex")]
    pub inner_products: Vec<Complex64>,
    pub identity_residual: f64,
    pub a_norm: f64,
    pub b_norm: f64,
    /// `|g| |h|`, the Cauchy-Schwarz bound for each part.
    pub part_bound: f64,
    /// Largest `|D_i D_k|` over distinct projection differences.
    pub orthogonal_range_residual: f64,
    /// Largest `|P^2 - P|` or `|P^* - P|` over the projections used.
    pub projection_residual: f64,
    pub parts_bounded: bool,
}

fn ser_complex<S: serde::Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    complex_pairs(v.iter().copied()).serialize(s)
}

fn range_residual(diffs: &[CMatrix]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..diffs.len() {
        for k in 0..diffs.len() {
            if i != k {
                worst = worst.max(op_norm_bound(&(&diffs[i] * &diffs[k])));
            }
        }
    }
    worst
}

fn projection_residual(ps: &[&CMatrix]) -> f64 {
    ps.iter()
        .map(|p| max_abs(&(*p * *p - *p)).max(max_abs(&(p.adjoint() - *p))))
        .fold(0.0, f64::max)
}

/// The two-part splitting of `(g, A_j h)` with its orthogonality diagnostics.
pub fn split_sequence(inst: &LemmaInstance) -> Result<SplitResult> {
    require_hypotheses(inst)?;
    let n = inst.dimension();
    let len = inst.len();
    let identity = CMatrix::identity(n, n);
    let zero = CMatrix::zeros(n, n);
    let p: Vec<CMatrix> = inst.chain.iter().map(projector).collect();
    let ips = inner_products(inst);
    let (mut a, mut b) = (Vec::with_capacity(len), Vec::with_capacity(len));
    let (q_diffs, p_diffs, all_q): (Vec<CMatrix>, Vec<CMatrix>, Vec<CMatrix>);

    match inst.flavor {
        Flavor::OldLemma => {
            // q[j] = Q_j for j = 1..=J+1 (index 0 unused), Q_(J+1) = I
            let mut q = vec![zero.clone()];
            q.extend((1..=len).map(|j| projector(&inst.image(j, j))));
            q.push(identity.clone());
            let p_at = |j: usize| if j == 0 { &zero } else { &p[j - 1] };
            for j in 1..=len {
                let ah = inst.ah(j);
                a.push(inner(&((&q[j + 1] - &q[j]) * &inst.g), &ah));
                let part = &inst.unitaries[j - 1] * ((p_at(j) - p_at(j - 1)) * &inst.h);
                b.push(inner(&inst.g, &part));
            }
            q_diffs = (1..=len).map(|j| &q[j + 1] - &q[j]).collect();
            p_diffs = (1..=len).map(|j| p_at(j) - p_at(j - 1)).collect();
            all_q = q;
        }
        Flavor::NewLemma => {
            // q[j] = Q_j for j = 0..=J, Q_0 = 0, Q_J = I
            let mut q = vec![zero.clone()];
            q.extend((1..len).map(|j| projector(&inst.image(j + 1, j))));
            q.push(identity.clone());
            for j in 1..=len {
                let ah = inst.ah(j);
                a.push(inner(&((&q[j] - &q[j - 1]) * &inst.g), &ah));
                b.push(inner(&(&q[j - 1] * &inst.g), &ah));
            }
            q_diffs = (1..=len).map(|j| &q[j] - &q[j - 1]).collect();
            p_diffs = (2..=len).map(|j| &p[j - 2] - &p[j - 1]).collect();
            all_q = q;
        }
    }

    let identity_residual = a
        .iter()
        .zip(&b)
        .zip(&ips)
        .map(|((x, y), z)| (x + y - z).norm())
        .fold(0.0, f64::max);
    let norm = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let (a_norm, b_norm) = (norm(&a), norm(&b));
    let part_bound = inst.g.norm() * inst.h.norm();
    let slack = part_bound * BOUND_REL_TOL + IDENTITY_TOL;
    let mut projections: Vec<&CMatrix> = p.iter().collect();
    projections.extend(all_q.iter());
    let orthogonal_range_residual = range_residual(&q_diffs).max(range_residual(&p_diffs));
    Ok(SplitResult {
        identity_residual,
        a_norm,
        b_norm,
        part_bound,
        orthogonal_range_residual,
        projection_residual: projection_residual(&projections),
        parts_bounded: a_norm <= part_bound + slack && b_norm <= part_bound + slack,
        a,
        b,
        inner_products: ips,
    })
}

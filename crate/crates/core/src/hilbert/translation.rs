//! Lemma instances built from lattice translations on a finite window.
//!
//! With `A_j` the translation by `x_j` and `S_j` spanned by translates
//! `tau_y h`, the inner products `(g, A_j h)` are the values `w(x_j)` of
//! `w = g * h^*`.

use std::collections::{BTreeMap, BTreeSet};

use num::complex::Complex64;
use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::linalg::{inner, orthonormalize, CMatrix, CVector};
use super::{verify_hypotheses, Flavor, HilbertError, HypothesisReport, LemmaInstance, Result};
use crate::contagion::{alt_delta_form, schur_representations, PointSequence, Representation};
use crate::rational::{self, Rational};

pub type LatticeFunction = BTreeMap<(i64, i64), Complex64>;
type Cell = (i64, i64);

/// Inclusive integer box `[u_min, u_max] x [v_min, v_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Window {
    pub u_min: i64,
    pub u_max: i64,
    pub v_min: i64,
    pub v_max: i64,
}

impl Window {
    pub fn covering<'a>(cells: impl IntoIterator<Item = &'a Cell>) -> Option<Window> {
        let mut it = cells.into_iter();
        let &(u, v) = it.next()?;
        let mut w = Window { u_min: u, u_max: u, v_min: v, v_max: v };
        for &(u, v) in it {
            w.u_min = w.u_min.min(u);
            w.u_max = w.u_max.max(u);
            w.v_min = w.v_min.min(v);
            w.v_max = w.v_max.max(v);
        }
        Some(w)
    }

    pub fn width(&self) -> usize {
        (self.u_max - self.u_min + 1) as usize
    }

    pub fn height(&self) -> usize {
        (self.v_max - self.v_min + 1) as usize
    }

    pub fn dimension(&self) -> usize {
        self.width() * self.height()
    }

    pub fn contains(&self, (u, v): Cell) -> bool {
        (self.u_min..=self.u_max).contains(&u) && (self.v_min..=self.v_max).contains(&v)
    }

    pub fn index(&self, c: Cell) -> Option<usize> {
        self.contains(c)
            .then(|| (c.0 - self.u_min) as usize * self.height() + (c.1 - self.v_min) as usize)
    }

    /// Cyclic translation by `x` as a permutation matrix.
    fn shift(&self, x: Cell) -> CMatrix {
        let (w, h) = (self.width() as i64, self.height() as i64);
        let n = self.dimension();
        let mut m = CMatrix::zeros(n, n);
        for u in self.u_min..=self.u_max {
            for v in self.v_min..=self.v_max {
                let tu = (u - self.u_min + x.0).rem_euclid(w) + self.u_min;
                let tv = (v - self.v_min + x.1).rem_euclid(h) + self.v_min;
                let from = self.index((u, v)).expect("inside");
                let to = self.index((tu, tv)).expect("inside");
                m[(to, from)] = Complex64::new(1.0, 0.0);
            }
        }
        m
    }

    fn vector(&self, f: &LatticeFunction) -> CVector {
        let mut out = CVector::zeros(self.dimension());
        for (&c, &z) in f {
            if let Some(i) = self.index(c) {
                out[i] = z;
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum TranslationFlavor {
    /// Sets `F_1..F_J`; subspaces `V(F_j - x_j, h)` for the increasing-chain lemma.
    Interior,
    /// Sets `G_2..G_J`; subspaces `V(G_(j+1) - x_(j+1), h)` for the decreasing-chain lemma.
    Exterior,
}

fn lattice(seq: &PointSequence) -> Result<Vec<Cell>> {
    seq.points()
        .iter()
        .map(|p| p.lattice().ok_or_else(|| HilbertError::NonLattice(p.to_string())))
        .collect()
}

fn cells_of(points: impl IntoIterator<Item = crate::geometry::PlanePoint>) -> Result<Vec<Cell>> {
    let set: BTreeSet<Cell> = points
        .into_iter()
        .map(|p| p.lattice().ok_or_else(|| HilbertError::NonLattice(p.to_string())))
        .collect::<Result<_>>()?;
    Ok(set.into_iter().collect())
}

/// `F_1 = {}` and `F_(j+1) = {x_(j+1) - sum_(j' <= j) n_(j') dx_(j')}` with `n` in `{0, 1}`, not all zero.
pub fn interior_sets(seq: &PointSequence) -> Result<Vec<Vec<Cell>>> {
    lattice(seq)?;
    let mut sets = vec![Vec::new()];
    for j in 1..seq.len() {
        let pts = alt_delta_form(seq, j).expect("j < J").into_iter().map(|g| g.point);
        sets.push(cells_of(pts)?);
    }
    Ok(sets)
}

/// `G_(j+1)` for `j = 1..J-1`: descendants `x_i - sum n dx` with `i <= j + 1`, generation capped.
pub fn exterior_sets(seq: &PointSequence, max_generation: u32) -> Result<Vec<Vec<Cell>>> {
    lattice(seq)?;
    let len = seq.len();
    let mut reps: Vec<Representation> = schur_representations(len, max_generation);
    // generation zero: the points themselves
    reps.extend((1..=len).map(|base| Representation::Schur { base, coefficients: vec![0; len.saturating_sub(1)] }));
    let mut sets = Vec::new();
    for j in 1..len {
        let pts = reps.iter().filter_map(|r| match r {
            Representation::Schur { base, .. } if *base < j + 1 || (*base == j + 1 && r.generation() > 0) => {
                Some(r.evaluate(seq.points()))
            }
            _ => None,
        });
        sets.push(cells_of(pts)?);
    }
    Ok(sets)
}

fn add(a: Cell, b: Cell) -> Cell {
    (a.0 + b.0, a.1 + b.1)
}

fn sub(a: Cell, b: Cell) -> Cell {
    (a.0 - b.0, a.1 - b.1)
}

/// Offsets spanning each chain subspace, and the translate sets each offset is moved to.
fn offsets(flavor: TranslationFlavor, xs: &[Cell], sets: &[Vec<Cell>]) -> Result<Vec<Vec<Cell>>> {
    let len = xs.len();
    match flavor {
        TranslationFlavor::Interior => {
            if sets.len() != len {
                return Err(HilbertError::Malformed(format!("expected {len} interior sets, got {}", sets.len())));
            }
            Ok(sets.iter().zip(xs).map(|(s, &x)| s.iter().map(|&y| sub(y, x)).collect()).collect())
        }
        TranslationFlavor::Exterior => {
            if sets.len() + 1 != len.max(1) {
                return Err(HilbertError::Malformed(format!(
                    "expected {} exterior sets, got {}",
                    len.saturating_sub(1),
                    sets.len()
                )));
            }
            let mut out: Vec<Vec<Cell>> =
                sets.iter().zip(&xs[1..]).map(|(s, &x)| s.iter().map(|&y| sub(y, x)).collect()).collect();
            out.push(Vec::new());
            Ok(out)
        }
    }
}

/// Lattice points where `w = g * h^*` must vanish for the orthogonality hypothesis.
fn required_zero_set(flavor: TranslationFlavor, xs: &[Cell], offsets: &[Vec<Cell>]) -> BTreeSet<Cell> {
    let mut z = BTreeSet::new();
    match flavor {
        TranslationFlavor::Interior => {
            for j in 0..xs.len().saturating_sub(1) {
                z.extend(offsets[j].iter().map(|&y| add(y, xs[j + 1])));
            }
        }
        TranslationFlavor::Exterior => {
            for j in 1..xs.len() {
                z.extend(offsets[j].iter().map(|&y| add(y, xs[j])));
            }
        }
    }
    z
}

/// Points where `w = g * h^*` must vanish for the sets given.
pub fn forbidden_translates(
    seq: &PointSequence,
    flavor: TranslationFlavor,
    sets: &[Vec<Cell>],
) -> Result<BTreeSet<Cell>> {
    let xs = lattice(seq)?;
    let offs = offsets(flavor, &xs, sets)?;
    Ok(required_zero_set(flavor, &xs, &offs))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TranslationInstance {
    #[serde(skip)]
    pub instance: LemmaInstance,
    pub flavor: TranslationFlavor,
    pub window: Window,
    pub dimension: usize,
    pub hypotheses: HypothesisReport,
    /// Largest `|(g, A_j h) - w(x_j)|`.
    pub inner_product_residual: f64,
    /// Whether `w` vanishes on every translate the orthogonality hypothesis needs.
    pub w_vanishes_where_required: bool,
}

fn w_at(g: &LatticeFunction, h: &LatticeFunction, x: Cell) -> Complex64 {
    g.iter()
        .filter_map(|(&y, &gy)| h.get(&sub(y, x)).map(|&hy| gy * hy.conj()))
        .sum()
}

/// Builds the translation instance for the given sets and checks it.
pub fn translation_instance(
    seq: &PointSequence,
    flavor: TranslationFlavor,
    sets: &[Vec<Cell>],
    g: &LatticeFunction,
    h: &LatticeFunction,
    window: Option<Window>,
) -> Result<TranslationInstance> {
    let xs = lattice(seq)?;
    let offs = offsets(flavor, &xs, sets)?;
    let len = xs.len();

    let mut translates: BTreeSet<Cell> = xs.iter().copied().collect();
    translates.insert((0, 0));
    for (j, o) in offs.iter().enumerate() {
        for &y in o {
            translates.insert(y);
            translates.insert(add(y, xs[j]));
            if j + 1 < len {
                translates.insert(add(y, xs[j + 1]));
            }
            if j > 0 {
                translates.insert(add(y, xs[j - 1]));
            }
        }
    }
    let support: Vec<Cell> = h.keys().copied().collect();
    let mut needed: BTreeSet<Cell> = BTreeSet::new();
    for &t in &translates {
        needed.extend(support.iter().map(|&s| add(s, t)));
    }
    needed.extend(g.keys().copied());
    let window = match window {
        Some(w) => {
            if let Some(c) = needed.iter().find(|&&c| !w.contains(c)) {
                return Err(HilbertError::WindowOverflow(format!("{c:?}")));
            }
            w
        }
        None => Window::covering(&needed).unwrap_or(Window { u_min: 0, u_max: 0, v_min: 0, v_max: 0 }),
    };
    let n = window.dimension();

    let translate = |y: Cell| -> CVector {
        let shifted: LatticeFunction = h.iter().map(|(&c, &z)| (add(c, y), z)).collect();
        window.vector(&shifted)
    };
    let chain: Vec<CMatrix> = offs
        .iter()
        .map(|o| {
            if o.is_empty() {
                CMatrix::zeros(n, 0)
            } else {
                let cols: Vec<CVector> = o.iter().map(|&y| translate(y)).collect();
                orthonormalize(&CMatrix::from_columns(&cols))
            }
        })
        .collect();
    let unitaries: Vec<CMatrix> = xs.iter().map(|&x| window.shift(x)).collect();
    let instance = LemmaInstance {
        flavor: match flavor {
            TranslationFlavor::Interior => Flavor::OldLemma,
            TranslationFlavor::Exterior => Flavor::NewLemma,
        },
        chain,
        unitaries,
        g: window.vector(g),
        h: window.vector(h),
    };
    let hypotheses = verify_hypotheses(&instance)?;
    let inner_product_residual = xs
        .iter()
        .enumerate()
        .map(|(j, &x)| (inner(&instance.g, &(&instance.unitaries[j] * &instance.h)) - w_at(g, h, x)).norm())
        .fold(0.0, f64::max);
    let w_vanishes_where_required = required_zero_set(flavor, &xs, &offs)
        .into_iter()
        .all(|z| w_at(g, h, z).norm() <= 1e-12);
    Ok(TranslationInstance {
        instance,
        flavor,
        window,
        dimension: n,
        hypotheses,
        inner_product_residual,
        w_vanishes_where_required,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExactDeltaReport {
    /// `g` vanishes on every `F_j + dx_j`.
    pub vanishes: bool,
    pub offending: Option<Cell>,
    /// `sum_j g(x_j)^2`.
    #[serde(with = "rational::as_string")]
    pub restricted_sq: Rational,
    /// `sum_y g(y)^2`.
    #[serde(with = "rational::as_string")]
    pub total_sq: Rational,
    /// `restricted_sq <= 4 total_sq`.
    pub holds: bool,
}

/// With `h = delta_0` the bound reads `sum_j g(x_j)^2 <= 4 sum g^2`; checked exactly.
pub fn exact_delta_check(
    seq: &PointSequence,
    sets: &[Vec<Cell>],
    g: &BTreeMap<Cell, Rational>,
) -> Result<ExactDeltaReport> {
    let xs = lattice(seq)?;
    let offs = offsets(TranslationFlavor::Interior, &xs, sets)?;
    let offending = required_zero_set(TranslationFlavor::Interior, &xs, &offs)
        .into_iter()
        .find(|z| g.get(z).is_some_and(|v| !v.is_zero()));
    let restricted_sq: Rational = xs.iter().filter_map(|x| g.get(x)).map(|v| v * v).sum();
    let total_sq: Rational = g.values().map(|v| v * v).sum();
    let holds = !(restricted_sq.clone() - total_sq.clone() * rational::int(4)).is_positive();
    Ok(ExactDeltaReport { vanishes: offending.is_none(), offending, restricted_sq, total_sq, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::CurveFamily;
    use crate::rational::int;

    fn parabola(us: &[i64]) -> PointSequence {
        let us: Vec<Rational> = us.iter().map(|&u| int(u)).collect();
        PointSequence::on_curve(&CurveFamily::unit_parabola(), &us).unwrap()
    }

    fn delta() -> LatticeFunction {
        [((0, 0), Complex64::new(1.0, 0.0))].into_iter().collect()
    }

    #[test]
    fn delta_instance_reproduces_point_values() {
        let seq = parabola(&[0, 1, 2, 3]);
        let sets = interior_sets(&seq).unwrap();
        let xs = lattice(&seq).unwrap();
        let offs = offsets(TranslationFlavor::Interior, &xs, &sets).unwrap();
        let zeros = required_zero_set(TranslationFlavor::Interior, &xs, &offs);
        // the forbidden translates are alternating sums, strictly above the parabola
        for z in &zeros {
            assert!(z.1 > z.0 * z.0, "{z:?}");
        }
        let mut g = LatticeFunction::new();
        for (i, &x) in xs.iter().enumerate() {
            g.insert(x, Complex64::new(1.0 + i as f64, -0.5));
        }
        g.insert((-1, 2), Complex64::new(0.25, 0.0));
        let t = translation_instance(&seq, TranslationFlavor::Interior, &sets, &g, &delta(), None).unwrap();
        assert!(t.hypotheses.pass, "{:?}", t.hypotheses.violations);
        assert!(t.w_vanishes_where_required);
        assert!(t.inner_product_residual < 1e-14);
        let ips = super::super::inner_products(&t.instance);
        for (j, &x) in xs.iter().enumerate() {
            assert!((ips[j] - g[&x]).norm() < 1e-14);
        }
    }

    #[test]
    fn g_on_forbidden_set_breaks_orthogonality() {
        let seq = parabola(&[0, 1, 2, 3]);
        let sets = interior_sets(&seq).unwrap();
        let g: LatticeFunction = [((1, 3), Complex64::new(1.0, 0.0))].into_iter().collect();
        let t = translation_instance(&seq, TranslationFlavor::Interior, &sets, &g, &delta(), None).unwrap();
        assert!(!t.w_vanishes_where_required);
        assert!(!t.hypotheses.pass);
    }

    #[test]
    fn spread_h_still_satisfies_nesting() {
        let seq = parabola(&[0, 1, 2]);
        let sets = interior_sets(&seq).unwrap();
        let h: LatticeFunction = [((0, 0), Complex64::new(1.0, 0.0)), ((0, 1), Complex64::new(0.0, 0.5))]
            .into_iter()
            .collect();
        let g = LatticeFunction::new();
        let t = translation_instance(&seq, TranslationFlavor::Interior, &sets, &g, &h, None).unwrap();
        assert!(t.hypotheses.pass, "{:?}", t.hypotheses.violations);
    }

    #[test]
    fn small_window_overflows() {
        let seq = parabola(&[0, 1, 2]);
        let sets = interior_sets(&seq).unwrap();
        let w = Window { u_min: 0, u_max: 1, v_min: 0, v_max: 1 };
        assert!(matches!(
            translation_instance(&seq, TranslationFlavor::Interior, &sets, &LatticeFunction::new(), &delta(), Some(w)),
            Err(HilbertError::WindowOverflow(_))
        ));
    }

    #[test]
    fn exterior_sets_cannot_nest_finitely() {
        let seq = parabola(&[0, 1, 2, 3]);
        let sets = exterior_sets(&seq, 2).unwrap();
        assert_eq!(sets.len(), 3);
        let t = translation_instance(&seq, TranslationFlavor::Exterior, &sets, &LatticeFunction::new(), &delta(), None)
            .unwrap();
        assert!(!t.hypotheses.pass);
    }

    #[test]
    fn exact_check() {
        let seq = parabola(&[0, 1, 2, 3]);
        let sets = interior_sets(&seq).unwrap();
        let mut g = BTreeMap::new();
        g.insert((0, 0), rational::ratio(1, 2));
        g.insert((3, 9), int(-2));
        g.insert((5, -1), rational::ratio(1, 3));
        let r = exact_delta_check(&seq, &sets, &g).unwrap();
        assert!(r.vanishes && r.holds);
        assert_eq!(r.restricted_sq, rational::ratio(17, 4));
        g.insert((1, 3), int(1));
        let r = exact_delta_check(&seq, &sets, &g).unwrap();
        assert_eq!(r.offending, Some((1, 3)));
    }
}

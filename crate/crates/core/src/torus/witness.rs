//! Checks for the bounded functions whose transforms interpolate given values.

use std::collections::BTreeSet;

use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{sup_norm, Cell, Result, SupEstimate, TrigPoly2D};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DualWitness {
    pub polynomial: TrigPoly2D,
    /// Values `v` on the point set; omitted points carry zero.
    pub target_values: TrigPoly2D,
    pub constant: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum WitnessMode {
    /// `||G|| <= C`, `G^ = v` on `X`, support in `X` and the alternating sums.
    Gtype,
    /// `||H|| <= 1`, `Re(conj(v) H^) >= |v|^2 / C` on `X`, support in `X` and the descendants.
    Htype,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PointCheck {
    pub point: Cell,
    pub coefficient: [f64; 2],
    pub target: [f64; 2],
    /// `Gtype`: `|G^(x) - v(x)|`; `Htype`: `Re(conj(v(x)) H^(x))`.
    pub lhs: f64,
    /// `Gtype`: zero; `Htype`: `|v(x)|^2 / C`.
    pub rhs: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessReport {
    pub mode: WitnessMode,
    pub sup: SupEstimate,
    pub sup_bound: f64,
    /// Grid maximum within the bound.
    pub sup_ok: bool,
    /// Grid maximum plus error bar within the bound.
    pub sup_certified: bool,
    pub points: Vec<PointCheck>,
    /// Stored frequencies outside `X` and the contagion set.
    pub stray: Vec<Cell>,
    pub pass: bool,
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn verify_dual_witness(
    w: &DualWitness,
    xs: &[Cell],
    contagion: &BTreeSet<Cell>,
    mode: WitnessMode,
    grid: usize,
) -> Result<WitnessReport> {
    let sup = sup_norm(&w.polynomial, grid)?;
    let sup_bound = match mode {
        WitnessMode::Gtype => w.constant,
        WitnessMode::Htype => 1.0,
    };
    let sup_ok = sup.grid_max <= sup_bound * (1.0 + 1e-12);
    let sup_certified = sup.grid_max + sup.error_bar <= sup_bound;

    let xset: BTreeSet<Cell> = xs.iter().copied().collect();
    let points: Vec<PointCheck> = xset
        .iter()
        .map(|&x| {
            let c = w.polynomial.coefficient(x);
            let v = w.target_values.coefficient(x);
            let (lhs, rhs, ok) = match mode {
                WitnessMode::Gtype => ((c - v).norm(), 0.0, c == v),
                WitnessMode::Htype => {
                    let lhs = (v.conj() * c).re;
                    let rhs = v.norm_sqr() / w.constant;
                    (lhs, rhs, lhs >= rhs - 1e-12 * rhs.max(1.0))
                }
            };
            PointCheck { point: x, coefficient: pair(c), target: pair(v), lhs, rhs, ok }
        })
        .collect();
    let stray: Vec<Cell> = w
        .polynomial
        .coefficients()
        .keys()
        .filter(|n| !xset.contains(n) && !contagion.contains(n))
        .copied()
        .collect();
    let pass = sup_ok && stray.is_empty() && points.iter().all(|p| p.ok);
    Ok(WitnessReport { mode, sup, sup_bound, sup_ok, sup_certified, points, stray, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn unit_mass_is_a_g_witness() {
        let w = DualWitness {
            polynomial: TrigPoly2D::monomial((1, 1)),
            target_values: TrigPoly2D::monomial((1, 1)),
            constant: 1.0,
        };
        let r = verify_dual_witness(&w, &[(1, 1), (2, 4)], &BTreeSet::new(), WitnessMode::Gtype, 16).unwrap();
        assert!(r.pass, "{r:?}");
        assert!((r.sup.grid_max - 1.0).abs() < 1e-12);
    }

    #[test]
    fn stray_coefficient_is_named() {
        let w = DualWitness {
            polynomial: TrigPoly2D::new([((1, 1), one()), ((5, 0), Complex64::new(0.1, 0.0))]),
            target_values: TrigPoly2D::monomial((1, 1)),
            constant: 2.0,
        };
        let contagion: BTreeSet<Cell> = [(1, 3)].into_iter().collect();
        let r = verify_dual_witness(&w, &[(1, 1)], &contagion, WitnessMode::Gtype, 64).unwrap();
        assert!(!r.pass);
        assert_eq!(r.stray, vec![(5, 0)]);
    }

    #[test]
    fn half_value_h_witness_meets_the_bound_with_equality() {
        let v = Complex64::new(0.6, -0.8);
        let w = DualWitness {
            polynomial: TrigPoly2D::new([((0, 0), v / 2.0)]),
            target_values: TrigPoly2D::new([((0, 0), v)]),
            constant: 2.0,
        };
        let r = verify_dual_witness(&w, &[(0, 0)], &BTreeSet::new(), WitnessMode::Htype, 16).unwrap();
        assert!(r.pass);
        assert!((r.points[0].lhs - r.points[0].rhs).abs() < 1e-15);
        let wrong = DualWitness { polynomial: TrigPoly2D::new([((0, 0), -v)]), ..w };
        assert!(!verify_dual_witness(&wrong, &[(0, 0)], &BTreeSet::new(), WitnessMode::Htype, 16).unwrap().pass);
    }
}

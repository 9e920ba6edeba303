//! Inclusion of generated points in open regions, and the first-generation gap bounds.

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{ContagionError, GeneratedPoint, PointSequence, Result};
use crate::geometry::{classify_point, CurveFamily, PlanePoint, Region, RegionClass};
use crate::rational::{self, Certified, Rational, DEFAULT_PRECISION_BITS};

/// Open target sets: `Int(D)`, `Int(D^c)`, `Int(D) + (0, k)` and `Int(D^c) - (0, k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum InclusionTarget {
    InteriorOfD,
    InteriorOfDc,
    InteriorShiftedUp {
        #[serde(with = "rational::as_string")]
        k: Rational,
    },
    InteriorShiftedDown {
        #[serde(with = "rational::as_string")]
        k: Rational,
    },
}

impl InclusionTarget {
    /// The point to classify and the class it must have.
    fn probe(&self, p: &PlanePoint) -> (PlanePoint, RegionClass) {
        match self {
            InclusionTarget::InteriorOfD => (p.clone(), RegionClass::Interior),
            InclusionTarget::InteriorOfDc => (p.clone(), RegionClass::ExteriorInterior),
            InclusionTarget::InteriorShiftedUp { k } => {
                (PlanePoint::new(p.u.clone(), &p.v - k), RegionClass::Interior)
            }
            InclusionTarget::InteriorShiftedDown { k } => {
                (PlanePoint::new(p.u.clone(), &p.v + k), RegionClass::ExteriorInterior)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase", tag = "status")]
pub enum InclusionCheck {
    Pass {
        checked: usize,
    },
    Witness {
        witness: GeneratedPoint,
        /// Class of the probed point (after undoing the shift).
        class: RegionClass,
        /// `phi(u) - v` at the witness, for graph regions.
        gap: Option<Certified>,
    },
}

impl InclusionCheck {
    pub fn passed(&self) -> bool {
        matches!(self, InclusionCheck::Pass { .. })
    }
}

/// Checks that every generated point lies in the open target; the first failure is returned.
pub fn check_inclusion(
    points: &[GeneratedPoint],
    region: &Region,
    target: &InclusionTarget,
) -> Result<InclusionCheck> {
    for g in points {
        let (probe, wanted) = target.probe(&g.point);
        let class = classify_point(region, &probe)?;
        if class != wanted {
            let gap = match region {
                Region::Curve(curve) => {
                    Some(curve.vertical_gap(&g.point, DEFAULT_PRECISION_BITS)?.neg())
                }
                Region::Body(_) => None,
            };
            return Ok(InclusionCheck::Witness { witness: g.clone(), class, gap });
        }
    }
    Ok(InclusionCheck::Pass { checked: points.len() })
}

/// `sqrt(k / c)`: spacing beyond which first-generation points clear a vertical shift `k`.
pub fn separation_threshold(curve: &CurveFamily, k: &Rational) -> Result<Certified> {
    if k.is_negative() {
        return Err(ContagionError::InvalidParameter("k must be >= 0".into()));
    }
    let c = &curve.convexity_modulus;
    if c.is_zero() {
        return Err(ContagionError::ZeroModulus);
    }
    Ok(rational::sqrt(&(k / c), DEFAULT_PRECISION_BITS))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GapReport {
    pub point: PlanePoint,
    pub gap: Certified,
    #[serde(with = "rational::as_string")]
    pub bound: Rational,
    /// The certified gap is at least the bound.
    pub holds: bool,
}

fn report(point: PlanePoint, gap: Certified, bound: Rational) -> GapReport {
    let holds = gap.lo() >= &bound;
    GapReport { point, gap, bound, holds }
}

/// `phi(u) - v` at `x_i - dx_j` (`i <= j < J`), against `c (du_j)^2`.
pub fn first_generation_gap(curve: &CurveFamily, seq: &PointSequence, i: usize, j: usize) -> Result<GapReport> {
    if i == 0 || i > j {
        return Err(ContagionError::IndexOrder(format!("need 1 <= i <= j, got i = {i}, j = {j}")));
    }
    let dx = seq.delta(j)?;
    let point = seq.get(i)?.sub(&dx);
    let gap = curve.vertical_gap(&point, DEFAULT_PRECISION_BITS)?.neg();
    let bound = &curve.convexity_modulus * &dx.u * &dx.u;
    Ok(report(point, gap, bound))
}

/// `v' - phi(u')` at `x_(j+1) - dx_(j')` (`j' < j < J`), against `c du_(j') du_j`.
pub fn alt_first_generation_gap(
    curve: &CurveFamily,
    seq: &PointSequence,
    j: usize,
    j_prime: usize,
) -> Result<GapReport> {
    if j_prime == 0 || j_prime >= j {
        return Err(ContagionError::IndexOrder(format!(
            "need 1 <= j' < j, got j = {j}, j' = {j_prime}"
        )));
    }
    let dxj = seq.delta(j)?;
    let dxp = seq.delta(j_prime)?;
    let point = seq.get(j + 1)?.sub(&dxp);
    let gap = curve.vertical_gap(&point, DEFAULT_PRECISION_BITS)?;
    let bound = &curve.convexity_modulus * &dxp.u * &dxj.u;
    Ok(report(point, gap, bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contagion::{enumerate_alt, enumerate_schur};
    use crate::rational::{int, ratio};

    fn seq(us: &[Rational]) -> PointSequence {
        PointSequence::on_curve(&CurveFamily::unit_parabola(), us).unwrap()
    }

    fn ints(us: &[i64]) -> Vec<Rational> {
        us.iter().map(|&u| int(u)).collect()
    }

    #[test]
    fn alt_and_schur_on_the_right_sides() {
        let region = Region::Curve(CurveFamily::unit_parabola());
        let s = seq(&ints(&[0, 1, 2]));
        let alt = enumerate_alt(&s, 3).unwrap();
        assert!(check_inclusion(&alt, &region, &InclusionTarget::InteriorOfD).unwrap().passed());
        let schur = enumerate_schur(&s, 3);
        assert!(check_inclusion(&schur, &region, &InclusionTarget::InteriorOfDc).unwrap().passed());
        assert!(!check_inclusion(&schur, &region, &InclusionTarget::InteriorOfD).unwrap().passed());
    }

    #[test]
    fn close_points_give_the_shifted_witness() {
        let region = Region::Curve(CurveFamily::unit_parabola());
        let s = seq(&[int(0), ratio(1, 2)]);
        let schur = enumerate_schur(&s, 3);
        let target = InclusionTarget::InteriorShiftedDown { k: int(2) };
        match check_inclusion(&schur, &region, &target).unwrap() {
            InclusionCheck::Witness { witness, gap, .. } => {
                assert_eq!(witness.point, PlanePoint::new(ratio(-1, 2), ratio(-1, 4)));
                assert_eq!(gap.unwrap(), Certified::Exact(ratio(1, 2)));
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn thresholds() {
        let p = CurveFamily::unit_parabola();
        assert_eq!(separation_threshold(&p, &int(2)).unwrap(), Certified::Exact(int(1)));
        assert_eq!(separation_threshold(&p, &int(0)).unwrap(), Certified::Exact(int(0)));
        assert_eq!(separation_threshold(&p, &int(8)).unwrap(), Certified::Exact(int(2)));
        let t = separation_threshold(&p, &int(1)).unwrap();
        assert!(t.exact().is_none() && (t.midpoint_f64() - 0.5f64.sqrt()).abs() < 1e-15);
        let tail = CurveFamily::power_hyperbola(int(1), int(0), int(0)).unwrap();
        assert_eq!(separation_threshold(&tail, &int(1)), Err(ContagionError::ZeroModulus));
    }

    #[test]
    fn gap_examples() {
        let p = CurveFamily::unit_parabola();
        let r = first_generation_gap(&p, &seq(&ints(&[0, 2])), 1, 1).unwrap();
        assert_eq!(r.point, PlanePoint::from_ints(-2, -4));
        assert_eq!(r.gap, Certified::Exact(int(8)));
        assert_eq!(r.bound, int(8));
        assert!(r.holds);

        let r = first_generation_gap(&p, &seq(&ints(&[0, 1])), 1, 1).unwrap();
        assert_eq!(r.gap, Certified::Exact(int(2)));

        let r = alt_first_generation_gap(&p, &seq(&ints(&[0, 1, 2])), 2, 1).unwrap();
        assert_eq!(r.point, PlanePoint::from_ints(1, 3));
        assert!(r.holds);
        assert_eq!(r.bound, int(2));

        let s = seq(&ints(&[0, 1, 2]));
        assert!(first_generation_gap(&p, &s, 2, 1).is_err());
        assert!(first_generation_gap(&p, &s, 1, 3).is_err());
        assert!(alt_first_generation_gap(&p, &s, 1, 1).is_err());
    }

    #[test]
    fn gaps_match_brute_force() {
        let p = CurveFamily::unit_parabola();
        let us = ints(&[-2, 0, 1, 4, 5, 9]);
        let s = seq(&us);
        for i in 1..s.len() {
            for j in i..s.len() {
                let r = first_generation_gap(&p, &s, i, j).unwrap();
                let u = &us[i - 1] - (&us[j] - &us[j - 1]);
                let v = &us[i - 1] * &us[i - 1] - (&us[j] * &us[j] - &us[j - 1] * &us[j - 1]);
                assert_eq!(r.gap, Certified::Exact(&u * &u - v));
                assert!(r.holds);
            }
        }
    }
}

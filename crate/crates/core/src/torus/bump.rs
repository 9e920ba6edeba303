//! Lattice surrogates for bumps on parallelograms, and the dyadic-block probe
//! built from them.

use num::bigint::BigInt;
use num::integer::Integer;
use num::traits::Pow;
use num::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{Result, TorusError, TrigPoly2D};
use crate::geometry::PlanePoint;
use crate::rational::{self, int, ratio, Rational};
use num::complex::Complex64;

/// `{origin + s e_1 + t e_2 : 0 <= s, t <= 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parallelogram {
    pub origin: PlanePoint,
    pub edges: [PlanePoint; 2],
}

impl Parallelogram {
    pub fn axis_box(origin: PlanePoint, width: Rational, height: Rational) -> Self {
        let zero = Rational::zero();
        Parallelogram {
            origin,
            edges: [PlanePoint::new(width, zero.clone()), PlanePoint::new(zero, height)],
        }
    }

    fn det(&self) -> Rational {
        let [a, b] = &self.edges;
        &a.u * &b.v - &a.v * &b.u
    }

    /// Coordinates `(s, t)` of `p` in the edge basis.
    pub fn coordinates(&self, p: &PlanePoint) -> (Rational, Rational) {
        let d = p.sub(&self.origin);
        let [a, b] = &self.edges;
        let det = self.det();
        ((&d.u * &b.v - &d.v * &b.u) / &det, (&a.u * &d.v - &a.v * &d.u) / &det)
    }

    pub fn contains(&self, p: &PlanePoint) -> bool {
        let (s, t) = self.coordinates(p);
        let unit = |x: &Rational| !x.is_negative() && *x <= Rational::one();
        unit(&s) && unit(&t)
    }

    fn in_central_half(&self, p: &PlanePoint) -> bool {
        let (s, t) = self.coordinates(p);
        let mid = |x: &Rational| *x >= ratio(1, 4) && *x <= ratio(3, 4);
        mid(&s) && mid(&t)
    }

    fn scaled(&self, m: i64) -> Parallelogram {
        let s = int(m);
        Parallelogram { origin: self.origin.scale(&s), edges: [self.edges[0].scale(&s), self.edges[1].scale(&s)] }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BumpReport {
    pub scale: i64,
    /// Multiplicities `(a, b)` of the primitive edge vectors at this scale.
    pub steps: (i64, i64),
    pub lattice_points: usize,
    /// Mean of the product kernel, equal to its L1 norm since both profiles are Fejer triangles.
    #[serde(with = "rational::as_string")]
    pub a_norm: Rational,
    pub a_norm_ok: bool,
    pub support_ok: bool,
    pub high_points: usize,
    #[serde(with = "rational::as_string")]
    pub high_fraction: Rational,
    pub high_ok: bool,
    #[serde(with = "rational::as_string")]
    pub center_value: Rational,
    /// Smallest value over lattice points with both edge coordinates in `[1/4, 3/4]`.
    #[serde(with = "rational::as_string")]
    pub central_half_min: Rational,
    pub pass: bool,
}

fn lattice_vector(p: &PlanePoint) -> Option<(i64, i64)> {
    p.lattice()
}

/// Triangle `1 - |i - c| / (r + 1)` on `[c - r, c + r]` with `c = r = floor(a / 2)`.
fn triangle(a: i64, i: i64) -> Rational {
    let c = a / 2;
    let d = (i - c).abs();
    if d > c {
        Rational::zero()
    } else {
        Rational::one() - ratio(d, c + 1)
    }
}

/// Product of two Fejer triangle profiles carried onto the lattice image of `m B`.
pub fn fejer_bump(b: &Parallelogram, m: i64) -> Result<(TrigPoly2D, BumpReport)> {
    if m < 1 {
        return Err(TorusError::InvalidParameter("scale must be positive".into()));
    }
    if b.det().is_zero() {
        return Err(TorusError::Degenerate("edges are parallel".into()));
    }
    let mb = b.scaled(m);
    let not_lattice = || TorusError::InvalidParameter(format!("vertices of B are not lattice points at scale {m}"));
    let origin = lattice_vector(&mb.origin).ok_or_else(not_lattice)?;
    let e1 = lattice_vector(&mb.edges[0]).ok_or_else(not_lattice)?;
    let e2 = lattice_vector(&mb.edges[1]).ok_or_else(not_lattice)?;
    let (a1, a2) = (e1.0.gcd(&e1.1), e2.0.gcd(&e2.1));
    let (v1, v2) = ((e1.0 / a1, e1.1 / a1), (e2.0 / a2, e2.1 / a2));
    if (v1.0 * v2.1 - v1.1 * v2.0).abs() != 1 {
        return Err(TorusError::InvalidParameter("edge directions do not form a lattice basis".into()));
    }

    let mut terms = Vec::new();
    for i in 0..=a1 {
        for j in 0..=a2 {
            let value = triangle(a1, i) * triangle(a2, j);
            if value.is_positive() {
                let z = (origin.0 + i * v1.0 + j * v2.0, origin.1 + i * v1.1 + j * v2.1);
                terms.push((z, value));
            }
        }
    }
    let exact: std::collections::BTreeMap<(i64, i64), Rational> = terms.iter().cloned().collect();
    let poly = TrigPoly2D::new(terms.iter().map(|(z, v)| (*z, Complex64::new(rational::to_f64(v), 0.0))));

    let fejer = |a: i64| {
        let c = a / 2;
        (0..=a).all(|i| triangle(a, i) == if (i - c).abs() <= c { Rational::one() - ratio((i - c).abs(), c + 1) } else { Rational::zero() })
    };
    let a_norm = triangle(a1, a1 / 2) * triangle(a2, a2 / 2);
    let a_norm_ok = fejer(a1) && fejer(a2) && a_norm <= Rational::one();

    let support_ok = exact.keys().all(|&(u, v)| mb.contains(&PlanePoint::from_ints(u, v)));

    // lattice points of m B by brute force over its bounding box
    let corners = [
        mb.origin.clone(),
        mb.origin.add(&mb.edges[0]),
        mb.origin.add(&mb.edges[1]),
        mb.origin.add(&mb.edges[0]).add(&mb.edges[1]),
    ];
    let lo_u = corners.iter().map(|c| c.u.floor().to_integer()).min().expect("corners");
    let hi_u = corners.iter().map(|c| c.u.ceil().to_integer()).max().expect("corners");
    let lo_v = corners.iter().map(|c| c.v.floor().to_integer()).min().expect("corners");
    let hi_v = corners.iter().map(|c| c.v.ceil().to_integer()).max().expect("corners");
    let quarter = ratio(1, 4);
    let (mut total, mut high) = (0usize, 0usize);
    let mut central_half_min: Option<Rational> = None;
    let mut u = lo_u.clone();
    while u <= hi_u {
        let mut v = lo_v.clone();
        while v <= hi_v {
            let p = PlanePoint::new(Rational::from_integer(u.clone()), Rational::from_integer(v.clone()));
            if mb.contains(&p) {
                total += 1;
                let cell = (u.to_i64().expect("small"), v.to_i64().expect("small"));
                let value = exact.get(&cell).cloned().unwrap_or_default();
                if value >= quarter {
                    high += 1;
                }
                if mb.in_central_half(&p) && central_half_min.as_ref().is_none_or(|m| value < *m) {
                    central_half_min = Some(value);
                }
            }
            v += BigInt::one();
        }
        u += BigInt::one();
    }
    let high_fraction = ratio(high as i64, total as i64);
    let high_ok = high_fraction >= quarter;
    let center = (origin.0 + (a1 / 2) * v1.0 + (a2 / 2) * v2.0, origin.1 + (a1 / 2) * v1.1 + (a2 / 2) * v2.1);
    let report = BumpReport {
        scale: m,
        steps: (a1, a2),
        lattice_points: total,
        a_norm_ok,
        a_norm,
        support_ok,
        high_points: high,
        high_fraction,
        high_ok,
        center_value: exact.get(&center).cloned().unwrap_or_default(),
        central_half_min: central_half_min.unwrap_or_default(),
        pass: a_norm_ok && support_ok && high_ok,
    };
    Ok((poly, report))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BlockReport {
    pub j: i64,
    pub weight: f64,
    /// Box `[u_0, u_1] x [v_0, v_1]` whose central half covers the curve over `(2^j, 2^(j+1)]`.
    pub parallelogram: Parallelogram,
    pub segment_centered: bool,
    /// The box lies in the closed region above `v = u^(-alpha)`.
    pub box_in_region: bool,
    /// `(central minimum)^2 * weight`.
    pub lower_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DyadicReport {
    #[serde(with = "rational::as_string")]
    pub alpha: Rational,
    #[serde(with = "rational::as_string")]
    pub k: Rational,
    pub bump: Option<BumpReport>,
    pub blocks: Vec<BlockReport>,
    pub max_lower_bound: f64,
}

fn pow2(e: i64) -> Rational {
    let p = BigInt::one() << e.unsigned_abs() as usize;
    if e >= 0 { Rational::from_integer(p) } else { Rational::new(BigInt::one(), p) }
}

/// Sign of `x - 2^(-alpha e)` for `alpha = p / q`.
fn cmp_power(x: &Rational, p: i64, q: i64, e: i64) -> std::cmp::Ordering {
    if !x.is_positive() {
        return std::cmp::Ordering::Less;
    }
    Pow::pow(x, q as u32).cmp(&pow2(-p * e))
}

/// For each dyadic block, a unit-norm bump whose squared values along the
/// shifted curve `v = u^(-alpha) + k` are at least `(central minimum)^2` on the whole block.
pub fn dyadic_mass_probe(
    weights: &[f64],
    j_range: (i64, i64),
    alpha: &Rational,
    k: &Rational,
    m: i64,
) -> Result<DyadicReport> {
    if !alpha.is_positive() || !k.is_positive() {
        return Err(TorusError::InvalidParameter("alpha and k must be positive".into()));
    }
    let (j0, j1) = j_range;
    let empty = DyadicReport { alpha: alpha.clone(), k: k.clone(), bump: None, blocks: vec![], max_lower_bound: 0.0 };
    if j0 > j1 {
        return Ok(empty);
    }
    let count = (j1 - j0 + 1) as usize;
    if weights.len() != count {
        return Err(TorusError::InvalidParameter(format!("expected {count} weights, got {}", weights.len())));
    }
    let (p, q) = (
        alpha.numer().to_i64().ok_or_else(|| TorusError::InvalidParameter("alpha too large".into()))?,
        alpha.denom().to_i64().ok_or_else(|| TorusError::InvalidParameter("alpha too large".into()))?,
    );
    let unit = Parallelogram::axis_box(PlanePoint::origin(), int(1), int(1));
    let (_, bump) = fejer_bump(&unit, m)?;
    let floor = rational::to_f64(&bump.central_half_min).powi(2);
    let af = rational::to_f64(alpha);
    let kf = rational::to_f64(k);

    let mut blocks = Vec::with_capacity(count);
    for (j, &weight) in (j0..=j1).zip(weights) {
        let u0 = pow2(j - 1);
        let width = pow2(j + 1);
        let s0 = kf + (-(af * (j + 1) as f64)).exp2();
        let s1 = kf + (-(af * j as f64)).exp2();
        let w = (s1 - s0).max(f64::EPSILON * s1);
        let v0 = rational::from_f64(s0 - w).unwrap_or_default();
        let v1 = rational::from_f64(s1 + w).unwrap_or_default();
        let height = &v1 - &v0;
        // central half in v is [v0 + height/4, v1 - height/4]; check it contains the curve over the block
        let c0 = &v0 + &height / int(4) - k;
        let c1 = &v1 - &height / int(4) - k;
        let segment_centered = cmp_power(&c0, p, q, j + 1).is_le() && cmp_power(&c1, p, q, j).is_ge();
        let box_in_region = cmp_power(&v0, p, q, j - 1).is_ge();
        blocks.push(BlockReport {
            j,
            weight,
            parallelogram: Parallelogram::axis_box(PlanePoint::new(u0, v0), width, height),
            segment_centered,
            box_in_region,
            lower_bound: floor * weight,
        });
    }
    let max_lower_bound = blocks.iter().map(|b| b.lower_bound).fold(0.0, f64::max);
    Ok(DyadicReport { alpha: alpha.clone(), k: k.clone(), bump: Some(bump), blocks, max_lower_bound })
}

#[cfg(test)]
mod tests {
    use super::super::l1_norm;
    use super::*;

    fn sheared() -> Parallelogram {
        Parallelogram { origin: PlanePoint::origin(), edges: [PlanePoint::from_ints(1, 0), PlanePoint::from_ints(1, 1)] }
    }

    #[test]
    fn axis_aligned_and_sheared_boxes_pass() {
        let boxes = [Parallelogram::axis_box(PlanePoint::new(ratio(1, 2), int(-1)), int(1), int(2)), sheared()];
        for b in boxes {
            let (f, r) = fejer_bump(&b, 64).unwrap();
            assert!(r.pass, "{r:?}");
            assert_eq!(r.center_value, int(1));
            assert!(r.central_half_min >= ratio(1, 4));
            let q = l1_norm(&f, 512).unwrap();
            assert!((q.value - 1.0).abs() < 1e-9, "{}", q.value);
        }
    }

    #[test]
    fn sheared_count_is_exact() {
        let (_, r) = fejer_bump(&sheared(), 64).unwrap();
        assert_eq!(r.lattice_points, 65 * 65);
        assert_eq!(r.steps, (64, 64));
    }

    #[test]
    fn tiny_and_odd_scales() {
        for m in [1, 2, 3, 7] {
            let (_, r) = fejer_bump(&sheared(), m).unwrap();
            assert!(r.pass, "m = {m}: {r:?}");
        }
    }

    #[test]
    fn degenerate_inputs() {
        let flat = Parallelogram { origin: PlanePoint::origin(), edges: [PlanePoint::from_ints(1, 1), PlanePoint::from_ints(2, 2)] };
        assert!(matches!(fejer_bump(&flat, 8), Err(TorusError::Degenerate(_))));
        let thin = Parallelogram { origin: PlanePoint::origin(), edges: [PlanePoint::from_ints(2, 0), PlanePoint::from_ints(1, 2)] };
        assert!(fejer_bump(&thin, 1).is_err());
        let half = Parallelogram::axis_box(PlanePoint::origin(), ratio(1, 3), int(1));
        assert!(fejer_bump(&half, 4).is_err());
    }

    #[test]
    fn dyadic_probe_examples() {
        let (alpha, k) = (int(1), int(1));
        let flat = dyadic_mass_probe(&[1.0; 6], (1, 6), &alpha, &k, 64).unwrap();
        let first = flat.blocks[0].lower_bound;
        assert!(first >= 1.0 / 16.0);
        assert!(flat.blocks.iter().all(|b| b.lower_bound == first && b.segment_centered));
        let weights: Vec<f64> = (1..=6).map(|j| (j as f64).exp2()).collect();
        let grow = dyadic_mass_probe(&weights, (1, 6), &alpha, &k, 64).unwrap();
        for w in grow.blocks.windows(2) {
            assert_eq!(w[1].lower_bound, 2.0 * w[0].lower_bound);
        }
        assert!(grow.blocks.iter().all(|b| b.box_in_region));
        let empty = dyadic_mass_probe(&[], (3, 2), &alpha, &k, 64).unwrap();
        assert!(empty.blocks.is_empty());
        assert!(dyadic_mass_probe(&[1.0], (1, 1), &int(0), &k, 64).is_err());
    }

    #[test]
    fn small_shift_leaves_region_for_early_blocks() {
        let r = dyadic_mass_probe(&[1.0, 1.0], (0, 1), &int(1), &ratio(1, 100), 16).unwrap();
        assert!(!r.blocks[0].box_in_region);
        assert!(r.blocks.iter().all(|b| b.segment_centered));
    }
}

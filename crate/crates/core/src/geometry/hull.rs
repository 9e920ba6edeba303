//! Lens-shaped sets for the bounded interior case, and their exact inclusion checks.
//!
//! After normalizing a lattice circle so that its center is the origin (the
//! extremes `x_0`, `x_inf` then sit on the u-axis and no shear is required),
//! the set `F_j` for a point `x_j` on the upper-left arc is the convex hull of
//! the arc `x_0 -> x_j` and its half-turn about the chord midpoint. That hull is
//! the closed intersection of two disks of radius `sqrt N`, centered at the
//! origin and at `x_0 + x_j`, with the two vertices `x_0`, `x_j` removed.
//!
//! Containment of such a lens in a disk of the same radius reduces to the two
//! lens vertices: each boundary arc is shorter than a half circle, and so is
//! the part of its circle inside the target disk.

use std::cmp::Ordering;

use num::{One, Signed, Zero};
use serde::Serialize;

use super::{boundary_lattice_points, ConvexBody, GeometryError, PlanePoint, Result};
use crate::rational::{self, Rational};
use crate::surd::{Surd, SurdPoint};

/// Affine map `(u, v) -> (u - c_u, v - c_v + shear (u - c_u))` placing the extremes on the u-axis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Normalization {
    #[serde(with = "rational::as_string")]
    pub shear: Rational,
    pub center: PlanePoint,
}

impl Normalization {
    pub fn for_body(body: &ConvexBody) -> Self {
        // A circle's vertical support points share the center's ordinate.
        Normalization { shear: Rational::zero(), center: body.center.clone() }
    }

    pub fn apply(&self, p: &PlanePoint) -> PlanePoint {
        let du = &p.u - &self.center.u;
        let dv = &p.v - &self.center.v + &self.shear * &du;
        PlanePoint::new(du, dv)
    }

    pub fn invert(&self, p: &PlanePoint) -> PlanePoint {
        let u = &p.u + &self.center.u;
        let v = &p.v - &self.shear * &p.u + &self.center.v;
        PlanePoint::new(u, v)
    }
}

/// Closed intersection of two disks of equal radius, minus the two vertices.
#[derive(Debug, Clone)]
struct Lens {
    a: SurdPoint,
    b: SurdPoint,
    r2: Surd,
    vertices: [SurdPoint; 2],
}

impl Lens {
    fn contains(&self, p: &SurdPoint) -> bool {
        if self.vertices.iter().any(|v| v == p) {
            return false;
        }
        le(&p.dist_sq(&self.a), &self.r2) && le(&p.dist_sq(&self.b), &self.r2)
    }

    fn translate(&self, d: &SurdPoint) -> Lens {
        Lens {
            a: self.a.add(d),
            b: self.b.add(d),
            r2: self.r2.clone(),
            vertices: [self.vertices[0].add(d), self.vertices[1].add(d)],
        }
    }

    fn chord_midpoint(&self) -> SurdPoint {
        self.vertices[0].add(&self.vertices[1]).scale(&rational::ratio(1, 2))
    }
}

fn le(x: &Surd, y: &Surd) -> bool {
    (x.clone() - y.clone()).signum() != Ordering::Greater
}

fn lt(x: &Surd, y: &Surd) -> bool {
    (x.clone() - y.clone()).signum() == Ordering::Less
}

/// The set `F_j` of the bounded interior case.
#[derive(Debug, Clone)]
pub struct HullSet {
    normalization: Normalization,
    lens: Lens,
}

impl HullSet {
    pub fn normalization(&self) -> &Normalization {
        &self.normalization
    }

    /// Membership of a point given in the body's original coordinates.
    pub fn contains(&self, p: &PlanePoint) -> bool {
        let q = self.normalization.apply(p);
        self.lens.contains(&SurdPoint::from_point(&q, self.lens.r2.root))
    }

    /// Membership of a point given in normalized coordinates, possibly irrational.
    pub fn contains_normalized(&self, p: &SurdPoint) -> bool {
        self.lens.contains(p)
    }

    /// The reflected disk center `x_0 + x_j` in normalized coordinates.
    pub fn reflected_center(&self) -> (f64, f64) {
        self.lens.b.to_f64()
    }
}

struct ArcSetup {
    normalization: Normalization,
    root: u64,
    x0: SurdPoint,
    r2: Surd,
    points: Vec<SurdPoint>,
}

fn setup(body: &ConvexBody, points: &[PlanePoint]) -> Result<ArcSetup> {
    let normalization = Normalization::for_body(body);
    let root = body.radius_squared;
    let r2 = Surd::rational(body.n(), root);
    let (x0_original, _) = body.support_extremes();
    let c = SurdPoint::from_point(&body.center, root);
    let x0 = x0_original.sub(&c);
    let mut out = Vec::with_capacity(points.len());
    for p in points {
        let q = normalization.apply(p);
        let on_circle = &q.u * &q.u + &q.v * &q.v == body.n();
        if !on_circle || !q.v.is_positive() || q.u.is_positive() {
            return Err(GeometryError::NotOnBoundary { point: p.to_string() });
        }
        out.push(SurdPoint::from_point(&q, root));
    }
    Ok(ArcSetup { normalization, root, x0, r2, points: out })
}

fn lens_for(s: &ArcSetup, xj: &SurdPoint) -> Result<Lens> {
    if xj == &s.x0 {
        return Err(GeometryError::DegenerateChord);
    }
    let origin = SurdPoint::from_point(&PlanePoint::origin(), s.root);
    Ok(Lens {
        a: origin,
        b: s.x0.add(xj),
        r2: s.r2.clone(),
        vertices: [s.x0.clone(), xj.clone()],
    })
}

/// `F_j` for points on the upper-left arc of a lattice circle; `j` is 1-based.
pub fn interior_hull_set(body: &ConvexBody, points: &[PlanePoint], j: usize) -> Result<HullSet> {
    if j == 0 || j > points.len() {
        return Err(GeometryError::IndexOutOfRange { index: j, len: points.len() });
    }
    let s = setup(body, points)?;
    let lens = lens_for(&s, &s.points[j - 1])?;
    Ok(HullSet { normalization: s.normalization, lens })
}

/// Which inclusion a witness violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum InclusionKind {
    /// `F_j + dx_j` inside `Int(D)`.
    ShiftedIntoInterior,
    /// `F_j + dx_j` inside `F_{j+1}`.
    ShiftedIntoNext,
    /// `F_j` inside `F_{j+1}`.
    UnshiftedNesting,
    /// `x_j` in `F_{j+1}`.
    PointMembership,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HullWitness {
    /// 1-based index of the failing step `j -> j+1`.
    pub j: usize,
    pub inclusion: InclusionKind,
    /// Counterexample in the body's original coordinates.
    pub point: PlanePoint,
    /// False only when no rational counterexample was found and `point` approximates one.
    pub exact: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase", tag = "status")]
pub enum HullCheck {
    Pass { steps: usize },
    Witness(HullWitness),
}

impl HullCheck {
    pub fn passed(&self) -> bool {
        matches!(self, HullCheck::Pass { .. })
    }
}

/// Target of a containment check: a disk (open or closed) or a lens.
enum Target<'a> {
    Disk { center: &'a SurdPoint, r2: &'a Surd, open: bool },
    Lens(&'a Lens),
}

impl Target<'_> {
    fn contains(&self, p: &SurdPoint) -> bool {
        match self {
            Target::Disk { center, r2, open } => {
                let d = p.dist_sq(center);
                if *open { lt(&d, r2) } else { le(&d, r2) }
            }
            Target::Lens(l) => l.contains(p),
        }
    }
}

enum Failure {
    /// A lens vertex escapes a target disk: counterexamples cluster near it.
    Vertex(SurdPoint),
    /// A lens arc lies on the boundary of an open target disk.
    Arc { center: SurdPoint },
    /// A point excluded from the target belongs to the region.
    Point(SurdPoint),
}

/// `region` (a lens minus its vertices) inside a disk of the lens radius.
fn lens_in_disk(region: &Lens, center: &SurdPoint, open: bool) -> Option<Failure> {
    if center == &region.a || center == &region.b {
        return open.then(|| Failure::Arc { center: center.clone() });
    }
    region
        .vertices
        .iter()
        .find(|v| !le(&v.dist_sq(center), &region.r2))
        .map(|v| Failure::Vertex(v.clone()))
}

fn lens_in_lens(region: &Lens, target: &Lens) -> Option<Failure> {
    lens_in_disk(region, &target.a, false)
        .or_else(|| lens_in_disk(region, &target.b, false))
        .or_else(|| {
            target
                .vertices
                .iter()
                .find(|v| region.contains(v))
                .map(|v| Failure::Point(v.clone()))
        })
}

/// Searches for a rational point of `region` outside `target`.
fn find_witness(region: &Lens, target: &Target<'_>, failure: &Failure) -> (PlanePoint, bool) {
    let accept = |p: &PlanePoint| {
        let sp = SurdPoint::from_point(p, region.r2.root);
        region.contains(&sp) && !target.contains(&sp)
    };
    let toward = region.chord_midpoint();
    let seed = match failure {
        Failure::Point(p) => {
            if let Some(q) = p.to_plane_point() {
                if accept(&q) {
                    return (q, true);
                }
            }
            p.clone()
        }
        Failure::Vertex(v) => v.clone(),
        Failure::Arc { center } => {
            // Arc midpoint: push the chord midpoint away from `center` to radius.
            let (cu, cv) = center.to_f64();
            let (mu, mv) = toward.to_f64();
            let (du, dv) = (mu - cu, mv - cv);
            let len = (du * du + dv * dv).sqrt().max(f64::MIN_POSITIVE);
            let r = rational::to_f64(&region.r2.a).sqrt();
            let root = region.r2.root;
            SurdPoint {
                u: Surd::rational(rational::round_dyadic(cu + r * du / len, 52), root),
                v: Surd::rational(rational::round_dyadic(cv + r * dv / len, 52), root),
            }
        }
    };
    for k in 1..=60u32 {
        let t = Rational::new(One::one(), num::BigInt::one() << k as usize);
        let p = seed.add(&toward.sub(&seed).scale(&t));
        let candidate = p.approximate(k + 40);
        if accept(&candidate) {
            return (candidate, true);
        }
    }
    // Coarse-to-fine grid over the lens bounding box.
    let (au, av) = region.a.to_f64();
    let r = rational::to_f64(&region.r2.a).sqrt();
    for level in 2..=9u32 {
        let steps = 1i64 << level;
        for iu in 0..=steps {
            for iv in 0..=steps {
                let u = au - r + 2.0 * r * iu as f64 / steps as f64;
                let v = av - r + 2.0 * r * iv as f64 / steps as f64;
                let candidate =
                    PlanePoint::new(rational::round_dyadic(u, 20), rational::round_dyadic(v, 20));
                if accept(&candidate) {
                    return (candidate, true);
                }
            }
        }
    }
    (seed.approximate(52), false)
}

/// Boundary lattice points with `u <= u_c` and `v > v_c`, ordered left to right.
pub fn second_quadrant_arc(body: &ConvexBody) -> Result<Vec<PlanePoint>> {
    let mut pts: Vec<PlanePoint> = boundary_lattice_points(body)?
        .into_iter()
        .filter(|p| p.u <= body.center.u && p.v > body.center.v)
        .collect();
    pts.sort();
    Ok(pts)
}

/// Checks the shifted and unshifted inclusions for every step `j -> j+1`.
pub fn verify_hull_inclusions(body: &ConvexBody, points: &[PlanePoint]) -> Result<HullCheck> {
    let s = setup(body, points)?;
    let origin = SurdPoint::from_point(&PlanePoint::origin(), s.root);
    let steps = s.points.len().saturating_sub(1);
    for j in 0..steps {
        let (xj, xn) = (&s.points[j], &s.points[j + 1]);
        let fj = lens_for(&s, xj)?;
        let fnext = lens_for(&s, xn)?;
        let shifted = fj.translate(&xn.sub(xj));
        let interior = Target::Disk { center: &origin, r2: &s.r2, open: true };

        let checks: [(InclusionKind, &Lens, Target<'_>, Option<Failure>); 3] = [
            (
                InclusionKind::ShiftedIntoInterior,
                &shifted,
                interior,
                lens_in_disk(&shifted, &origin, true),
            ),
            (
                InclusionKind::ShiftedIntoNext,
                &shifted,
                Target::Lens(&fnext),
                lens_in_lens(&shifted, &fnext),
            ),
            (InclusionKind::UnshiftedNesting, &fj, Target::Lens(&fnext), lens_in_lens(&fj, &fnext)),
        ];
        for (kind, region, target, failure) in checks {
            if let Some(failure) = failure {
                let (point, exact) = find_witness(region, &target, &failure);
                let detail = match &failure {
                    Failure::Vertex(v) => format!("lens vertex {:?} escapes the target disk", v.to_f64()),
                    Failure::Arc { .. } => "lens arc lies on the open target's boundary".to_string(),
                    Failure::Point(p) => format!("excluded point {:?} lies in the region", p.to_f64()),
                };
                return Ok(HullCheck::Witness(HullWitness {
                    j: j + 1,
                    inclusion: kind,
                    point: s.normalization.invert(&point),
                    exact,
                    detail,
                }));
            }
        }
        if !fnext.contains(xj) {
            let point = xj.to_plane_point().expect("input points are rational");
            return Ok(HullCheck::Witness(HullWitness {
                j: j + 1,
                inclusion: InclusionKind::PointMembership,
                point: s.normalization.invert(&point),
                exact: true,
                detail: "x_j is not in F_{j+1}".to_string(),
            }));
        }
    }
    Ok(HullCheck::Pass { steps })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(u: i64, v: i64) -> PlanePoint {
        PlanePoint::from_ints(u, v)
    }

    fn upper_left_arc(n: u64) -> Vec<PlanePoint> {
        second_quadrant_arc(&ConvexBody::centered(n).unwrap()).unwrap()
    }

    #[test]
    fn hull_set_membership() {
        let body = ConvexBody::centered(25).unwrap();
        let pts = vec![pt(-4, 3), pt(-3, 4)];
        let f2 = interior_hull_set(&body, &pts, 2).unwrap();
        // chord midpoint of x_0 = (-5, 0) and x_2 = (-3, 4)
        assert!(f2.contains(&pt(-4, 2)));
        assert!(!f2.contains(&pt(-5, 0)));
        assert!(!f2.contains(&pt(-3, 4)));
        assert!(f2.contains(&pt(-4, 3)), "arc points belong to the hull");
        assert!(!f2.contains(&pt(20, 20)));
    }

    #[test]
    fn irrational_extreme_is_excluded() {
        let body = ConvexBody::centered(5).unwrap();
        let f = interior_hull_set(&body, &[pt(-2, 1), pt(-1, 2)], 1).unwrap();
        let (x0, _) = body.support_extremes();
        assert!(!f.contains_normalized(&x0));
        assert!(f.contains(&PlanePoint::new(rational::ratio(-21, 10), rational::ratio(1, 2))));
    }

    #[test]
    fn rejects_points_off_the_upper_left_arc() {
        let body = ConvexBody::centered(25).unwrap();
        assert!(matches!(
            interior_hull_set(&body, &[pt(3, 4)], 1),
            Err(GeometryError::NotOnBoundary { .. })
        ));
        assert!(matches!(
            interior_hull_set(&body, &[pt(-1, 1)], 1),
            Err(GeometryError::NotOnBoundary { .. })
        ));
        assert!(matches!(
            interior_hull_set(&body, &[pt(-4, 3)], 2),
            Err(GeometryError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn ordered_arcs_pass() {
        let body = ConvexBody::centered(25).unwrap();
        assert!(verify_hull_inclusions(&body, &[pt(-4, 3), pt(-3, 4)]).unwrap().passed());
        assert_eq!(
            verify_hull_inclusions(&body, &[pt(-4, 3)]).unwrap(),
            HullCheck::Pass { steps: 0 }
        );
        for n in [5u64, 25, 65, 325, 1105] {
            let arc = upper_left_arc(n);
            assert!(verify_hull_inclusions(&ConvexBody::centered(n).unwrap(), &arc).unwrap().passed());
        }
    }

    #[test]
    fn shuffled_order_yields_a_verified_witness() {
        let body = ConvexBody::centered(25).unwrap();
        let pts = vec![pt(-3, 4), pt(-4, 3)];
        let HullCheck::Witness(w) = verify_hull_inclusions(&body, &pts).unwrap() else {
            panic!("shuffled order must fail");
        };
        assert!(w.exact);
        assert_eq!(w.j, 1);
        assert_eq!(w.inclusion, InclusionKind::ShiftedIntoInterior);
        // The witness lies in F_1 + dx_1 but not strictly inside the circle.
        let f1 = interior_hull_set(&body, &pts, 1).unwrap();
        let dx = pts[1].sub(&pts[0]);
        assert!(f1.contains(&w.point.sub(&dx)));
        let d2 = &w.point.u * &w.point.u + &w.point.v * &w.point.v;
        assert!(d2 >= body.n());
    }
}

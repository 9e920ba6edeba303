//! Exact plane geometry for strictly convex regions.
//!
//! Parabolas, lattice circles and tabulated convex graphs are decided in exact
//! rational arithmetic. Power hyperbolas `u^-alpha + k` with rational `alpha`
//! use certified brackets first and fall back on exact power comparisons.

mod hull;

use std::cmp::Ordering;
use std::fmt;

use num::{BigInt, One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};
use thiserror::Error;

use crate::rational::{self, Certified, Rational, DEFAULT_PRECISION_BITS};
use crate::surd::SurdPoint;

pub use hull::{
    interior_hull_set, second_quadrant_arc, verify_hull_inclusions, HullCheck, HullSet, HullWitness, InclusionKind,
    Normalization,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("u = {u} is outside the curve's domain")]
    Domain { u: String },
    #[error("classification undecided at {bits} bits of precision")]
    Undecided { bits: u32 },
    #[error("curve value at u = {u} is not rational")]
    IrrationalValue { u: String },
    #[error("abscissae must be strictly increasing (violated at position {position})")]
    NotIncreasing { position: usize },
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("point {point} does not lie on the boundary")]
    NotOnBoundary { point: String },
    #[error("lattice enumeration needs an integer center")]
    NonIntegerCenter,
    #[error("degenerate chord: point coincides with the left extreme")]
    DegenerateChord,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("tabulated graph is not strictly convex")]
    NotConvex,
}

pub type Result<T> = std::result::Result<T, GeometryError>;

/// A point of the plane with exact rational coordinates; ordered by `(u, v)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlanePoint {
    pub u: Rational,
    pub v: Rational,
}

impl PlanePoint {
    pub fn new(u: Rational, v: Rational) -> Self {
        PlanePoint { u, v }
    }

    pub fn from_ints(u: i64, v: i64) -> Self {
        PlanePoint::new(rational::int(u), rational::int(v))
    }

    pub fn origin() -> Self {
        PlanePoint::from_ints(0, 0)
    }

    pub fn add(&self, o: &PlanePoint) -> PlanePoint {
        PlanePoint::new(&self.u + &o.u, &self.v + &o.v)
    }

    pub fn sub(&self, o: &PlanePoint) -> PlanePoint {
        PlanePoint::new(&self.u - &o.u, &self.v - &o.v)
    }

    pub fn scale(&self, s: &Rational) -> PlanePoint {
        PlanePoint::new(&self.u * s, &self.v * s)
    }

    pub fn neg(&self) -> PlanePoint {
        PlanePoint::new(-&self.u, -&self.v)
    }

    pub fn is_lattice(&self) -> bool {
        rational::is_integer(&self.u) && rational::is_integer(&self.v)
    }

    /// Integer coordinates, if this is a lattice point that fits in `i64`.
    pub fn lattice(&self) -> Option<(i64, i64)> {
        if !self.is_lattice() {
            return None;
        }
        Some((self.u.to_integer().to_i64()?, self.v.to_integer().to_i64()?))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (rational::to_f64(&self.u), rational::to_f64(&self.v))
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

impl Serialize for PlanePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [rational::format_rational(&self.u), rational::format_rational(&self.v)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for PlanePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Pair(
            #[serde(with = "rational::as_string")] Rational,
            #[serde(with = "rational::as_string")] Rational,
        );
        let Pair(u, v) = Pair::deserialize(d)?;
        Ok(PlanePoint::new(u, v))
    }
}

/// Which side of the graph the region `D` occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Orientation {
    AboveGraph,
    BelowGraph,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurveKind {
    /// `phi(u) = a u^2 + k`.
    Parabola { a: Rational, k: Rational },
    /// `phi(u) = u^-alpha + k` on `u > 0`.
    PowerHyperbola { alpha: Rational, k: Rational },
    /// Piecewise-linear interpolation of strictly convex samples.
    GraphTable { samples: Vec<PlanePoint> },
}

/// A graph `v = phi(u)` bounding `D` from one side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveFamily {
    pub kind: CurveKind,
    pub orientation: Orientation,
    /// Certified lower bound for `phi''` on the working window.
    pub convexity_modulus: Rational,
}

impl CurveFamily {
    /// `D = {v >= a u^2 + k}`; the convexity modulus is `2a`.
    pub fn parabola(a: Rational, k: Rational) -> Result<Self> {
        if !a.is_positive() {
            return Err(GeometryError::InvalidParameter("parabola needs a > 0".into()));
        }
        let c = &a * rational::int(2);
        Ok(CurveFamily {
            kind: CurveKind::Parabola { a, k },
            orientation: Orientation::AboveGraph,
            convexity_modulus: c,
        })
    }

    pub fn unit_parabola() -> Self {
        Self::parabola(rational::int(1), rational::int(0)).expect("a = 1 is valid")
    }

    /// `D = {u > 0, v >= u^-alpha + k}` with a caller-certified modulus `c >= 0`.
    pub fn power_hyperbola(alpha: Rational, k: Rational, c: Rational) -> Result<Self> {
        if !alpha.is_positive() {
            return Err(GeometryError::InvalidParameter("hyperbola needs alpha > 0".into()));
        }
        if c.is_negative() {
            return Err(GeometryError::InvalidParameter("convexity modulus must be >= 0".into()));
        }
        Ok(CurveFamily {
            kind: CurveKind::PowerHyperbola { alpha, k },
            orientation: Orientation::AboveGraph,
            convexity_modulus: c,
        })
    }

    /// Tabulated graph; samples must have strictly increasing `u` and strictly increasing slopes.
    pub fn graph_table(mut samples: Vec<PlanePoint>, c: Rational) -> Result<Self> {
        if samples.len() < 2 {
            return Err(GeometryError::InvalidParameter("need at least two samples".into()));
        }
        check_increasing(samples.iter().map(|p| &p.u))?;
        let slopes: Vec<Rational> = samples
            .windows(2)
            .map(|w| (&w[1].v - &w[0].v) / (&w[1].u - &w[0].u))
            .collect();
        if slopes.windows(2).any(|s| s[1] <= s[0]) {
            return Err(GeometryError::NotConvex);
        }
        if c.is_negative() {
            return Err(GeometryError::InvalidParameter("convexity modulus must be >= 0".into()));
        }
        samples.shrink_to_fit();
        Ok(CurveFamily {
            kind: CurveKind::GraphTable { samples },
            orientation: Orientation::AboveGraph,
            convexity_modulus: c,
        })
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    /// Certified value of `phi(u)`.
    pub fn value(&self, u: &Rational, bits: u32) -> Result<Certified> {
        match &self.kind {
            CurveKind::Parabola { a, k } => Ok(Certified::Exact(a * u * u + k)),
            CurveKind::PowerHyperbola { alpha, k } => {
                if !u.is_positive() {
                    return Err(GeometryError::Domain { u: u.to_string() });
                }
                Ok(power_neg_alpha(u, alpha, bits).add(k))
            }
            CurveKind::GraphTable { samples } => {
                let first = &samples[0];
                let last = &samples[samples.len() - 1];
                if u < &first.u || u > &last.u {
                    return Err(GeometryError::Domain { u: u.to_string() });
                }
                let i = samples.partition_point(|s| &s.u <= u).min(samples.len() - 1).max(1);
                let (p, q) = (&samples[i - 1], &samples[i]);
                let t = (u - &p.u) / (&q.u - &p.u);
                Ok(Certified::Exact(&p.v + t * (&q.v - &p.v)))
            }
        }
    }

    /// Exact `phi(u)`; errors when the value is irrational.
    pub fn value_exact(&self, u: &Rational) -> Result<Rational> {
        match self.value(u, DEFAULT_PRECISION_BITS)? {
            Certified::Exact(r) => Ok(r),
            Certified::Bracket { .. } => Err(GeometryError::IrrationalValue { u: u.to_string() }),
        }
    }

    /// Sign of `v - phi(u)`: `Greater` when `p` lies strictly above the graph.
    pub fn side_of(&self, p: &PlanePoint, bits: u32) -> Result<Ordering> {
        match &self.kind {
            CurveKind::PowerHyperbola { alpha, k } => {
                if !p.u.is_positive() {
                    return Err(GeometryError::Domain { u: p.u.to_string() });
                }
                let phi = power_neg_alpha(&p.u, alpha, bits).add(k);
                if let Some(ord) = phi.compare(&p.v) {
                    return Ok(ord.reverse());
                }
                exact_hyperbola_side(&p.u, &p.v, alpha, k).ok_or(GeometryError::Undecided { bits })
            }
            _ => {
                let phi = self.value(&p.u, bits)?;
                Ok(phi.compare(&p.v).ok_or(GeometryError::Undecided { bits })?.reverse())
            }
        }
    }

    /// Certified `v - phi(u)`.
    pub fn vertical_gap(&self, p: &PlanePoint, bits: u32) -> Result<Certified> {
        Ok(self.value(&p.u, bits)?.neg().add(&p.v))
    }

    pub fn describe(&self) -> Value {
        let orientation = serde_json::to_value(self.orientation).expect("orientation serializes");
        let (kind, parameters) = match &self.kind {
            CurveKind::Parabola { a, k } => ("parabola", json!({ "a": a.to_string(), "k": k.to_string() })),
            CurveKind::PowerHyperbola { alpha, k } => (
                "powerHyperbola",
                json!({ "alpha": alpha.to_string(), "k": k.to_string() }),
            ),
            CurveKind::GraphTable { samples } => ("graphTable", json!({ "samples": samples })),
        };
        let mut parameters = parameters;
        parameters["convexityModulus"] = json!(self.convexity_modulus.to_string());
        json!({ "kind": kind, "parameters": parameters, "orientation": orientation })
    }
}

/// Certified `u^(-alpha)` for rational `alpha = p/q` and `u > 0`.
fn power_neg_alpha(u: &Rational, alpha: &Rational, bits: u32) -> Certified {
    let p = alpha.numer().to_u32().expect("alpha numerator fits in u32");
    let q = alpha.denom().to_u32().expect("alpha denominator fits in u32");
    let base = num::pow(u.recip(), p as usize);
    rational::nth_root(&base, q, bits)
}

/// Exact sign of `v - (u^-alpha + k)` via `t^q u^p` against 1, for moderate exponents.
fn exact_hyperbola_side(u: &Rational, v: &Rational, alpha: &Rational, k: &Rational) -> Option<Ordering> {
    const MAX_EXPONENT: u32 = 256;
    let p = alpha.numer().to_u32()?;
    let q = alpha.denom().to_u32()?;
    if p > MAX_EXPONENT || q > MAX_EXPONENT {
        return None;
    }
    let t = v - k;
    if !t.is_positive() {
        return Some(Ordering::Less);
    }
    let lhs = num::pow(t, q as usize) * num::pow(u.clone(), p as usize);
    Some(lhs.cmp(&Rational::one()))
}

/// A lattice circle `|p - center|^2 = N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexBody {
    pub radius_squared: u64,
    pub center: PlanePoint,
}

impl ConvexBody {
    pub fn lattice_circle(radius_squared: u64, center: PlanePoint) -> Result<Self> {
        if radius_squared == 0 {
            return Err(GeometryError::InvalidParameter("radius squared must be positive".into()));
        }
        Ok(ConvexBody { radius_squared, center })
    }

    pub fn centered(radius_squared: u64) -> Result<Self> {
        Self::lattice_circle(radius_squared, PlanePoint::origin())
    }

    pub fn n(&self) -> Rational {
        rational::int(self.radius_squared as i64)
    }

    /// Leftmost and rightmost boundary points, `center -+ (sqrt N, 0)`.
    pub fn support_extremes(&self) -> (SurdPoint, SurdPoint) {
        let c = SurdPoint::from_point(&self.center, self.radius_squared);
        let r = SurdPoint {
            u: crate::surd::Surd::new(Rational::zero(), Rational::one(), self.radius_squared),
            v: crate::surd::Surd::rational(Rational::zero(), self.radius_squared),
        };
        (c.sub(&r), c.add(&r))
    }

    pub fn describe(&self) -> Value {
        json!({
            "kind": "latticeCircle",
            "parameters": { "radiusSquared": self.radius_squared, "center": self.center },
            "orientation": null,
        })
    }
}

/// Anything that supports exact point classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Region {
    Curve(CurveFamily),
    Body(ConvexBody),
}

impl From<CurveFamily> for Region {
    fn from(c: CurveFamily) -> Self {
        Region::Curve(c)
    }
}

impl From<ConvexBody> for Region {
    fn from(b: ConvexBody) -> Self {
        Region::Body(b)
    }
}

impl Region {
    pub fn describe(&self) -> Value {
        match self {
            Region::Curve(c) => c.describe(),
            Region::Body(b) => b.describe(),
        }
    }

    /// Parses the `{kind, parameters, orientation}` JSON description.
    pub fn from_description(v: &Value) -> std::result::Result<Region, String> {
        let kind = v.get("kind").and_then(Value::as_str).ok_or("region needs a string `kind`")?;
        let params = v.get("parameters").cloned().unwrap_or(Value::Null);
        let rat = |name: &str, default: Option<i64>| -> std::result::Result<Rational, String> {
            match params.get(name) {
                Some(Value::String(s)) => rational::parse_rational(s).map_err(|e| e.to_string()),
                Some(Value::Number(n)) => n
                    .as_i64()
                    .map(rational::int)
                    .ok_or_else(|| format!("parameter `{name}` must be an integer or \"p/q\"")),
                None => default
                    .map(rational::int)
                    .ok_or_else(|| format!("missing parameter `{name}`")),
                _ => Err(format!("parameter `{name}` must be an integer or \"p/q\"")),
            }
        };
        let orientation = match v.get("orientation") {
            None | Some(Value::Null) => Orientation::AboveGraph,
            Some(o) => serde_json::from_value(o.clone()).map_err(|e| format!("orientation: {e}"))?,
        };
        let region = match kind {
            "parabola" => {
                let c = CurveFamily::parabola(rat("a", Some(1))?, rat("k", Some(0))?)
                    .map_err(|e| e.to_string())?;
                Region::Curve(c.with_orientation(orientation))
            }
            "powerHyperbola" => {
                let c = CurveFamily::power_hyperbola(
                    rat("alpha", None)?,
                    rat("k", Some(0))?,
                    rat("convexityModulus", Some(0))?,
                )
                .map_err(|e| e.to_string())?;
                Region::Curve(c.with_orientation(orientation))
            }
            "graphTable" => {
                let samples: Vec<PlanePoint> = serde_json::from_value(
                    params.get("samples").cloned().ok_or("missing parameter `samples`")?,
                )
                .map_err(|e| format!("samples: {e}"))?;
                let c = CurveFamily::graph_table(samples, rat("convexityModulus", Some(0))?)
                    .map_err(|e| e.to_string())?;
                Region::Curve(c.with_orientation(orientation))
            }
            "latticeCircle" => {
                let n = params
                    .get("radiusSquared")
                    .and_then(Value::as_u64)
                    .ok_or("missing integer parameter `radiusSquared`")?;
                let center = match params.get("center") {
                    Some(c) => serde_json::from_value(c.clone()).map_err(|e| format!("center: {e}"))?,
                    None => PlanePoint::origin(),
                };
                Region::Body(ConvexBody::lattice_circle(n, center).map_err(|e| e.to_string())?)
            }
            other => return Err(format!("unknown region kind `{other}`")),
        };
        Ok(region)
    }
}

impl Serialize for Region {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.describe().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Region {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Region::from_description(&v).map_err(D::Error::custom)
    }
}

/// Trichotomy: `Int(D)`, the boundary, or `Int(D^c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum RegionClass {
    Interior,
    Boundary,
    ExteriorInterior,
}

pub fn classify_point(region: &Region, p: &PlanePoint) -> Result<RegionClass> {
    classify_point_with_precision(region, p, DEFAULT_PRECISION_BITS)
}

pub fn classify_point_with_precision(region: &Region, p: &PlanePoint, bits: u32) -> Result<RegionClass> {
    match region {
        Region::Curve(curve) => {
            let side = curve.side_of(p, bits)?;
            let inside_side = match curve.orientation {
                Orientation::AboveGraph => Ordering::Greater,
                Orientation::BelowGraph => Ordering::Less,
            };
            Ok(if side == Ordering::Equal {
                RegionClass::Boundary
            } else if side == inside_side {
                RegionClass::Interior
            } else {
                RegionClass::ExteriorInterior
            })
        }
        Region::Body(body) => {
            let d = p.sub(&body.center);
            let dist = &d.u * &d.u + &d.v * &d.v;
            Ok(match dist.cmp(&body.n()) {
                Ordering::Less => RegionClass::Interior,
                Ordering::Equal => RegionClass::Boundary,
                Ordering::Greater => RegionClass::ExteriorInterior,
            })
        }
    }
}

pub(crate) fn check_increasing<'a>(us: impl Iterator<Item = &'a Rational>) -> Result<()> {
    let mut prev: Option<&Rational> = None;
    for (i, u) in us.enumerate() {
        if let Some(p) = prev {
            if u <= p {
                return Err(GeometryError::NotIncreasing { position: i });
            }
        }
        prev = Some(u);
    }
    Ok(())
}

/// Points `(u, phi(u))` for strictly increasing `us`.
pub fn graph_points(curve: &CurveFamily, us: &[Rational]) -> Result<Vec<PlanePoint>> {
    check_increasing(us.iter())?;
    us.iter()
        .map(|u| Ok(PlanePoint::new(u.clone(), curve.value_exact(u)?)))
        .collect()
}

/// Integer points with `|p - center|^2 = N`, sorted counterclockwise from the positive u-axis.
pub fn boundary_lattice_points(body: &ConvexBody) -> Result<Vec<PlanePoint>> {
    let (cu, cv) = body.center.lattice().ok_or(GeometryError::NonIntegerCenter)?;
    let n = BigInt::from(body.radius_squared);
    let bound = {
        let s = n.sqrt();
        if &s * &s == n { s } else { s + 1 }
    }
    .to_i64()
    .expect("radius fits in i64");
    let mut offsets = Vec::new();
    for du in -bound..=bound {
        let rem = &n - BigInt::from(du) * BigInt::from(du);
        if rem.is_negative() {
            continue;
        }
        let s = rem.sqrt();
        if &s * &s != rem {
            continue;
        }
        let dv = s.to_i64().expect("fits");
        offsets.push((du, dv));
        if dv != 0 {
            offsets.push((du, -dv));
        }
    }
    offsets.sort_by(|a, b| angle_order(*a, *b));
    Ok(offsets
        .into_iter()
        .map(|(du, dv)| PlanePoint::from_ints(cu + du, cv + dv))
        .collect())
}

/// Counterclockwise angular order starting at angle 0 (inclusive).
fn angle_order(a: (i64, i64), b: (i64, i64)) -> Ordering {
    let half = |(x, y): (i64, i64)| if y > 0 || (y == 0 && x > 0) { 0 } else { 1 };
    half(a).cmp(&half(b)).then_with(|| {
        let cross = (a.0 as i128) * (b.1 as i128) - (a.1 as i128) * (b.0 as i128);
        0.cmp(&cross)
    })
}

/// Which of the two graph sets to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GraphSide {
    /// `u < u_j` on the `D` side of the graph, graph included.
    F,
    /// `u < u_j` on the `D^c` side of the graph, graph included.
    G,
}

/// Membership predicate for an `F_j` or `G_j` set of a graph curve.
#[derive(Debug, Clone)]
pub struct GraphSet {
    curve: CurveFamily,
    u_bound: Rational,
    side: GraphSide,
}

impl GraphSet {
    pub fn u_bound(&self) -> &Rational {
        &self.u_bound
    }

    pub fn contains(&self, p: &PlanePoint) -> Result<bool> {
        if p.u >= self.u_bound {
            return Ok(false);
        }
        let side = self.curve.side_of(p, DEFAULT_PRECISION_BITS)?;
        if side == Ordering::Equal {
            return Ok(true);
        }
        let d_side = match self.curve.orientation {
            Orientation::AboveGraph => Ordering::Greater,
            Orientation::BelowGraph => Ordering::Less,
        };
        Ok(match self.side {
            GraphSide::F => side == d_side,
            GraphSide::G => side != d_side,
        })
    }
}

/// The set `F_j` (or `G_j`) for points `x_1..x_J` on the graph; `j` is 1-based.
pub fn graph_half_plane_sets(
    curve: &CurveFamily,
    points: &[PlanePoint],
    side: GraphSide,
    j: usize,
) -> Result<GraphSet> {
    if j == 0 || j > points.len() {
        return Err(GeometryError::IndexOutOfRange { index: j, len: points.len() });
    }
    check_increasing(points.iter().map(|p| &p.u))?;
    for p in points {
        if curve.side_of(p, DEFAULT_PRECISION_BITS)? != Ordering::Equal {
            return Err(GeometryError::NotOnBoundary { point: p.to_string() });
        }
    }
    Ok(GraphSet { curve: curve.clone(), u_bound: points[j - 1].u.clone(), side })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, parse_rational, ratio};

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn pt(u: &str, v: &str) -> PlanePoint {
        PlanePoint::new(q(u), q(v))
    }

    #[test]
    fn classifies_unit_parabola() {
        let r = Region::Curve(CurveFamily::unit_parabola());
        assert_eq!(classify_point(&r, &pt("1", "3")).unwrap(), RegionClass::Interior);
        assert_eq!(classify_point(&r, &pt("2", "4")).unwrap(), RegionClass::Boundary);
        assert_eq!(classify_point(&r, &pt("-1", "-1")).unwrap(), RegionClass::ExteriorInterior);
    }

    #[test]
    fn below_graph_orientation_swaps_sides() {
        let r = Region::Curve(CurveFamily::unit_parabola().with_orientation(Orientation::BelowGraph));
        assert_eq!(classify_point(&r, &pt("1", "3")).unwrap(), RegionClass::ExteriorInterior);
        assert_eq!(classify_point(&r, &pt("0", "-1")).unwrap(), RegionClass::Interior);
    }

    #[test]
    fn classifies_lattice_circle() {
        let r = Region::Body(ConvexBody::centered(25).unwrap());
        assert_eq!(classify_point(&r, &pt("0", "0")).unwrap(), RegionClass::Interior);
        assert_eq!(classify_point(&r, &pt("3", "-4")).unwrap(), RegionClass::Boundary);
        assert_eq!(classify_point(&r, &pt("10", "0")).unwrap(), RegionClass::ExteriorInterior);
    }

    #[test]
    fn hyperbola_classification_is_certified() {
        // v = u^(-1/2): at u = 2 the value is irrational.
        let c = CurveFamily::power_hyperbola(ratio(1, 2), int(0), int(0)).unwrap();
        let r = Region::Curve(c.clone());
        assert_eq!(classify_point(&r, &pt("2", "1")).unwrap(), RegionClass::Interior);
        assert_eq!(classify_point(&r, &pt("2", "7/10")).unwrap(), RegionClass::ExteriorInterior);
        assert_eq!(classify_point(&r, &pt("4", "1/2")).unwrap(), RegionClass::Boundary);
        assert!(matches!(classify_point(&r, &pt("0", "1")), Err(GeometryError::Domain { .. })));
        // A rational point closer to the graph than the bracket width still resolves exactly.
        let near = pt("2", "7071067811865476/10000000000000000");
        assert_eq!(
            classify_point_with_precision(&r, &near, 8).unwrap(),
            RegionClass::Interior
        );
        assert!(matches!(c.value_exact(&int(2)), Err(GeometryError::IrrationalValue { .. })));
    }

    #[test]
    fn graph_points_examples() {
        let c = CurveFamily::unit_parabola();
        let us = [int(0), int(1), int(2)];
        assert_eq!(
            graph_points(&c, &us).unwrap(),
            vec![pt("0", "0"), pt("1", "1"), pt("2", "4")]
        );
        assert!(graph_points(&c, &[]).unwrap().is_empty());
        let c2 = CurveFamily::parabola(int(2), int(0)).unwrap();
        assert_eq!(graph_points(&c2, &[int(1)]).unwrap(), vec![pt("1", "2")]);
        assert!(matches!(
            graph_points(&c, &[int(1), int(1)]),
            Err(GeometryError::NotIncreasing { position: 1 })
        ));
        let h = CurveFamily::power_hyperbola(int(1), int(0), int(0)).unwrap();
        assert!(matches!(graph_points(&h, &[int(-1)]), Err(GeometryError::Domain { .. })));
        assert_eq!(graph_points(&h, &[int(2)]).unwrap(), vec![pt("2", "1/2")]);
    }

    #[test]
    fn graph_table_interpolates_and_rejects_nonconvex() {
        let samples = vec![pt("-1", "1"), pt("0", "0"), pt("1", "1"), pt("2", "4")];
        let c = CurveFamily::graph_table(samples, int(0)).unwrap();
        assert_eq!(c.value_exact(&ratio(1, 2)).unwrap(), ratio(1, 2));
        assert_eq!(c.value_exact(&int(2)).unwrap(), int(4));
        assert!(c.value_exact(&int(3)).is_err());
        let bad = vec![pt("0", "0"), pt("1", "1"), pt("2", "2")];
        assert_eq!(CurveFamily::graph_table(bad, int(0)), Err(GeometryError::NotConvex));
    }

    #[test]
    fn graph_sets_follow_orientation() {
        let curve = CurveFamily::unit_parabola().with_orientation(Orientation::BelowGraph);
        let pts = vec![pt("0", "0"), pt("1", "1"), pt("2", "4")];
        let f2 = graph_half_plane_sets(&curve, &pts, GraphSide::F, 2).unwrap();
        assert!(f2.contains(&pt("1/2", "0")).unwrap());
        assert!(!f2.contains(&pt("1", "0")).unwrap());
        let g2 = graph_half_plane_sets(&curve, &pts, GraphSide::G, 2).unwrap();
        assert!(g2.contains(&pt("1/2", "10")).unwrap());
        assert!(!g2.contains(&pt("1/2", "0")).unwrap());
        assert!(matches!(
            graph_half_plane_sets(&curve, &pts, GraphSide::F, 4),
            Err(GeometryError::IndexOutOfRange { index: 4, len: 3 })
        ));
        // Above-graph orientation puts F on the epigraph side.
        let up = CurveFamily::unit_parabola();
        let f2 = graph_half_plane_sets(&up, &pts, GraphSide::F, 2).unwrap();
        assert!(f2.contains(&pt("1/2", "10")).unwrap());
    }

    #[test]
    fn lattice_circle_examples() {
        let n5 = boundary_lattice_points(&ConvexBody::centered(5).unwrap()).unwrap();
        assert_eq!(n5.len(), 8);
        assert_eq!(n5[0], pt("2", "1"));
        let n25 = boundary_lattice_points(&ConvexBody::centered(25).unwrap()).unwrap();
        assert_eq!(n25.len(), 12);
        assert_eq!(n25[0], pt("5", "0"));
        assert_eq!(n25[3], pt("0", "5"));
        assert!(boundary_lattice_points(&ConvexBody::centered(3).unwrap()).unwrap().is_empty());
        let off = ConvexBody::lattice_circle(1, pt("1/2", "0")).unwrap();
        assert_eq!(boundary_lattice_points(&off), Err(GeometryError::NonIntegerCenter));
    }

    #[test]
    fn region_descriptions_round_trip() {
        let regions = vec![
            Region::Curve(CurveFamily::parabola(ratio(1, 2), int(3)).unwrap()),
            Region::Curve(
                CurveFamily::power_hyperbola(ratio(3, 2), int(1), int(0))
                    .unwrap()
                    .with_orientation(Orientation::AboveGraph),
            ),
            Region::Body(ConvexBody::lattice_circle(25, pt("1", "-2")).unwrap()),
        ];
        for r in regions {
            let json = serde_json::to_string(&r).unwrap();
            let back: Region = serde_json::from_str(&json).unwrap();
            assert_eq!(back, r, "{json}");
        }
    }
}

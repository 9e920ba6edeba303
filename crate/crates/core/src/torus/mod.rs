//! Trigonometric polynomials on the two-torus.
//!
//! Coefficients live on `Z^2`; norms use the normalized measure
//! `(1/2pi)^2 dt_1 dt_2`, so `||e^(i n.t)||_1 = 1`.

mod bump;
mod search;
mod witness;

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use num::complex::Complex64;
use num::Zero;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::geometry::{classify_point, GeometryError, PlanePoint, Region, RegionClass};

pub use bump::{dyadic_mass_probe, fejer_bump, BlockReport, BumpReport, DyadicReport, Parallelogram};
pub use search::{ap_blowup, ratio_search, ApBlowupReport, SearchMethod, SearchResult};
pub use witness::{verify_dual_witness, DualWitness, WitnessMode, WitnessReport};

pub type Cell = (i64, i64);

/// Constant in the weak-signal inequality.
pub const WEAK_SIGNAL_C: f64 = 4.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TorusError {
    #[error("grid size {grid} is not a power of two")]
    GridNotPowerOfTwo { grid: usize },
    #[error("grid size {grid} too small; need at least {needed}")]
    GridTooSmall { grid: usize, needed: usize },
    #[error("coefficient at {frequency:?} lies in the forbidden region")]
    Certificate { frequency: Cell },
    #[error("degenerate parallelogram: {0}")]
    Degenerate(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid polynomial JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

pub type Result<T> = std::result::Result<T, TorusError>;

/// Finitely supported coefficient map; zero amplitudes are never stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrigPoly2D {
    coeffs: BTreeMap<Cell, Complex64>,
}

impl TrigPoly2D {
    pub fn new(terms: impl IntoIterator<Item = (Cell, Complex64)>) -> Self {
        let mut coeffs: BTreeMap<Cell, Complex64> = BTreeMap::new();
        for (n, c) in terms {
            *coeffs.entry(n).or_default() += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        TrigPoly2D { coeffs }
    }

    pub fn monomial(n: Cell) -> Self {
        Self::new([(n, Complex64::new(1.0, 0.0))])
    }

    /// Product Fejer kernel of order `m`: coefficients `(1 - |n_1|/(m+1)) (1 - |n_2|/(m+1))`.
    pub fn fejer(m: i64) -> Self {
        let tri = |k: i64| 1.0 - k.abs() as f64 / (m + 1) as f64;
        Self::new((-m..=m).flat_map(|a| (-m..=m).map(move |b| ((a, b), Complex64::new(tri(a) * tri(b), 0.0)))))
    }

    pub fn coefficient(&self, n: Cell) -> Complex64 {
        self.coeffs.get(&n).copied().unwrap_or_default()
    }

    pub fn coefficients(&self) -> &BTreeMap<Cell, Complex64> {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest `|n_i|` over the support.
    pub fn max_frequency(&self) -> i64 {
        self.coeffs.keys().map(|&(a, b)| a.abs().max(b.abs())).max().unwrap_or(0)
    }

    pub fn coefficient_l2(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn coefficient_sup(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn evaluate(&self, t1: f64, t2: f64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(&(a, b), &c)| c * Complex64::from_polar(1.0, a as f64 * t1 + b as f64 * t2))
            .sum()
    }

    pub fn to_json(&self) -> Value {
        let map: Map<String, Value> =
            self.coeffs.iter().map(|(&(a, b), c)| (format!("{a},{b}"), json!([c.re, c.im]))).collect();
        Value::Object(map)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let map = v.as_object().ok_or_else(|| TorusError::Json("expected an object".into()))?;
        let mut terms = Vec::with_capacity(map.len());
        for (k, val) in map {
            terms.push((parse_cell(k)?, parse_complex(val).ok_or_else(|| TorusError::Json(format!("bad amplitude at {k}")))?));
        }
        Ok(Self::new(terms))
    }
}

impl Serialize for TrigPoly2D {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for TrigPoly2D {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        TrigPoly2D::from_json(&v).map_err(serde::de::Error::custom)
    }
}

pub fn parse_cell(key: &str) -> Result<Cell> {
    let bad = || TorusError::Json(format!("bad frequency key {key:?}"));
    let (a, b) = key.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn parse_complex(v: &Value) -> Option<Complex64> {
    match v {
        Value::Number(n) => Some(Complex64::new(n.as_f64()?, 0.0)),
        Value::Array(a) if a.len() == 2 => Some(Complex64::new(a[0].as_f64()?, a[1].as_f64()?)),
        _ => None,
    }
}

/// `w = g * h^*`, i.e. `w(x) = sum_y g(y) conj(h(y - x))`.
pub fn convolve(g: &BTreeMap<Cell, Complex64>, h: &BTreeMap<Cell, Complex64>) -> TrigPoly2D {
    TrigPoly2D::new(
        g.iter()
            .flat_map(|(&y, &gy)| h.iter().map(move |(&z, &hz)| ((y.0 - z.0, y.1 - z.1), gy * hz.conj()))),
    )
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FactoredSequence {
    pub g: BTreeMap<Cell, Complex64>,
    pub h: BTreeMap<Cell, Complex64>,
}

impl FactoredSequence {
    pub fn w(&self) -> TrigPoly2D {
        convolve(&self.g, &self.h)
    }

    /// `||g||_2 ||h||_2`, an upper bound for the algebra norm of `w`.
    pub fn norm_upper_bound(&self) -> f64 {
        let n = |m: &BTreeMap<Cell, Complex64>| m.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        n(&self.g) * n(&self.h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct QuadratureReport {
    pub value: f64,
    pub grid_size: usize,
    /// `|value(grid) - value(grid / 2)|`.
    pub error_estimate: f64,
}

fn check_grid(f: &TrigPoly2D, grid: usize) -> Result<()> {
    if !grid.is_power_of_two() || grid < 2 {
        return Err(TorusError::GridNotPowerOfTwo { grid });
    }
    let needed = 4 * f.max_frequency().max(1) as usize;
    if grid < needed {
        return Err(TorusError::GridTooSmall { grid, needed });
    }
    Ok(())
}

/// Calls `visit(|f|, multiplicity)` for the values of `f` on the uniform `grid x grid` mesh.
fn sample_moduli(f: &TrigPoly2D, grid: usize, mut visit: impl FnMut(f64, usize)) {
    if f.is_empty() {
        visit(0.0, grid * grid);
        return;
    }
    let g = grid as i64;
    let d1: BTreeSet<i64> = f.coeffs.keys().map(|n| n.0).collect();
    let d2: BTreeSet<i64> = f.coeffs.keys().map(|n| n.1).collect();
    // outer axis: the one with fewer distinct frequencies
    let swap = d2.len() < d1.len();
    let mut groups: BTreeMap<i64, Vec<(i64, Complex64)>> = BTreeMap::new();
    for (&(a, b), &c) in &f.coeffs {
        let (outer, inner) = if swap { (b, a) } else { (a, b) };
        groups.entry(outer).or_default().push((inner, c));
    }
    let mut planner = FftPlanner::<f64>::new();
    let ifft = planner.plan_fft_inverse(grid);
    let rows: Vec<(i64, Vec<Complex64>)> = groups
        .into_iter()
        .map(|(a, terms)| {
            let mut buf = vec![Complex64::zero(); grid];
            for (b, c) in terms {
                buf[b.rem_euclid(g) as usize] += c;
            }
            ifft.process(&mut buf);
            (a, buf)
        })
        .collect();

    if rows.len() == 1 {
        for z in &rows[0].1 {
            visit(z.norm(), grid);
        }
        return;
    }
    if rows.len() <= 24 {
        let roots: Vec<Complex64> = (0..grid).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / grid as f64)).collect();
        let shifts: Vec<usize> = rows.iter().map(|(a, _)| a.rem_euclid(g) as usize).collect();
        let mut acc = vec![Complex64::zero(); grid];
        for k in 0..grid {
            acc.iter_mut().for_each(|z| *z = Complex64::zero());
            for ((_, row), &s) in rows.iter().zip(&shifts) {
                let phase = roots[(s * k) % grid];
                for (z, r) in acc.iter_mut().zip(row) {
                    *z += phase * r;
                }
            }
            for z in &acc {
                visit(z.norm(), 1);
            }
        }
        return;
    }
    let mut col = vec![Complex64::zero(); grid];
    for k in 0..grid {
        col.iter_mut().for_each(|z| *z = Complex64::zero());
        for (a, row) in &rows {
            col[a.rem_euclid(g) as usize] += row[k];
        }
        ifft.process(&mut col);
        for z in &col {
            visit(z.norm(), 1);
        }
    }
}

fn grid_mean(f: &TrigPoly2D, grid: usize, phi: impl Fn(f64) -> f64) -> f64 {
    let mut sum = 0.0;
    sample_moduli(f, grid, |m, k| sum += phi(m) * k as f64);
    sum / (grid * grid) as f64
}

fn quadrature(f: &TrigPoly2D, grid: usize, phi: impl Fn(f64) -> f64 + Copy) -> Result<QuadratureReport> {
    check_grid(f, grid)?;
    let value = grid_mean(f, grid, phi);
    let coarse = grid_mean(f, grid / 2, phi);
    Ok(QuadratureReport { value, grid_size: grid, error_estimate: (value - coarse).abs() })
}

/// `||f||_1`, which is also the algebra norm of the coefficient sequence.
pub fn l1_norm(f: &TrigPoly2D, grid: usize) -> Result<QuadratureReport> {
    quadrature(f, grid, |m| m)
}

/// `||f||_2^2` by quadrature, for comparison with the coefficient sum.
pub fn l2_norm_squared(f: &TrigPoly2D, grid: usize) -> Result<QuadratureReport> {
    quadrature(f, grid, |m| m * m)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SupEstimate {
    pub grid_max: f64,
    pub grid_size: usize,
    /// Mesh width times the coefficient bound on `|grad f|`.
    pub error_bar: f64,
}

/// Grid maximum of `|f|` on a mesh of `grid` points per axis (at least eight times the spectrum).
pub fn sup_norm(f: &TrigPoly2D, grid: usize) -> Result<SupEstimate> {
    if !grid.is_power_of_two() {
        return Err(TorusError::GridNotPowerOfTwo { grid });
    }
    let needed = 8 * f.max_frequency().max(1) as usize;
    if grid < needed {
        return Err(TorusError::GridTooSmall { grid, needed });
    }
    let mut grid_max: f64 = 0.0;
    sample_moduli(f, grid, |m, _| grid_max = grid_max.max(m));
    let gradient: f64 = f.coeffs.iter().map(|(&(a, b), c)| c.norm() * (a.abs() + b.abs()) as f64).sum();
    Ok(SupEstimate { grid_max, grid_size: grid, error_bar: PI / grid as f64 * gradient })
}

/// `(sum_(x in X) |f^(x)|^2)^(1/2)` over the distinct points of `X`.
pub fn restriction_l2(f: &TrigPoly2D, xs: &[Cell]) -> f64 {
    let set: BTreeSet<Cell> = xs.iter().copied().collect();
    set.iter().map(|&x| f.coefficient(x).norm_sqr()).sum::<f64>().sqrt()
}

/// Which open region the coefficients must avoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum VanishingMode {
    /// Coefficients vanish on `Int(D)`.
    Interior,
    /// Coefficients vanish on `Int(D^c)`.
    Exterior,
}

impl VanishingMode {
    fn forbidden(self) -> RegionClass {
        match self {
            VanishingMode::Interior => RegionClass::Interior,
            VanishingMode::Exterior => RegionClass::ExteriorInterior,
        }
    }
}

/// Classification that treats points off a curve's domain as outside the region.
pub fn classify_frequency(region: &Region, n: Cell) -> Result<RegionClass> {
    match classify_point(region, &PlanePoint::from_ints(n.0, n.1)) {
        Ok(c) => Ok(c),
        Err(GeometryError::Domain { .. }) => Ok(RegionClass::ExteriorInterior),
        Err(e) => Err(e.into()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase", tag = "status")]
pub enum Certificate {
    Pass { checked: usize, boundary: usize, band_radius: i64 },
    Violation { frequency: Cell, class: RegionClass },
}

impl Certificate {
    pub fn passed(&self) -> bool {
        matches!(self, Certificate::Pass { .. })
    }
}

/// Checks that no stored frequency lies in the forbidden open region.
pub fn vanishing_certificate(
    f: &TrigPoly2D,
    region: &Region,
    mode: VanishingMode,
    band_radius: Option<i64>,
) -> Result<Certificate> {
    let mut boundary = 0;
    for &n in f.coeffs.keys() {
        let class = classify_frequency(region, n)?;
        if class == mode.forbidden() {
            return Ok(Certificate::Violation { frequency: n, class });
        }
        if class == RegionClass::Boundary {
            boundary += 1;
        }
    }
    Ok(Certificate::Pass {
        checked: f.len(),
        boundary,
        band_radius: band_radius.unwrap_or_else(|| f.max_frequency()),
    })
}

/// Constant in the restriction inequality for the region shape and vanishing mode.
pub fn restriction_constant(region: &Region, mode: VanishingMode) -> f64 {
    match (region, mode) {
        (Region::Curve(_), _) => 2.0,
        (Region::Body(_), VanishingMode::Exterior) => 2.0 * 2f64.sqrt(),
        (Region::Body(_), VanishingMode::Interior) => 4.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RatioReport {
    pub ratio: f64,
    pub restriction: f64,
    pub l1: QuadratureReport,
    /// Propagated from the quadrature error estimate.
    pub error_bar: f64,
    pub constant: f64,
    /// `ratio - errorBar > constant`.
    pub exceeds_constant: bool,
}

pub(crate) fn ratio_from(restriction: f64, l1: QuadratureReport, constant: f64) -> RatioReport {
    let ratio = if l1.value > 0.0 { restriction / l1.value } else { 0.0 };
    let error_bar = if l1.value > l1.error_estimate {
        restriction / (l1.value - l1.error_estimate) - ratio
    } else {
        f64::INFINITY
    };
    RatioReport { ratio, restriction, l1, error_bar, constant, exceeds_constant: ratio - error_bar > constant }
}

/// `restriction_l2(f, X) / ||f||_1` after certifying the vanishing condition.
pub fn restriction_ratio(
    f: &TrigPoly2D,
    xs: &[Cell],
    grid: usize,
    region: &Region,
    mode: VanishingMode,
) -> Result<RatioReport> {
    if let Certificate::Violation { frequency, .. } = vanishing_certificate(f, region, mode, None)? {
        return Err(TorusError::Certificate { frequency });
    }
    let l1 = l1_norm(f, grid)?;
    Ok(ratio_from(restriction_l2(f, xs), l1, restriction_constant(region, mode)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WeakSignalReport {
    pub lhs: f64,
    pub rhs: f64,
    pub error_bar: f64,
    pub l1: QuadratureReport,
    /// l2 norm of the coefficients in the forbidden open region.
    pub forbidden_mass: f64,
    pub constant: f64,
    pub pass: bool,
}

/// `||f^|boundary||_2 <= C ||f||_1 + C ||f^|forbidden||_2` with `C = 4`.
pub fn weak_signal_check(f: &TrigPoly2D, region: &Region, mode: VanishingMode, grid: usize) -> Result<WeakSignalReport> {
    let mut boundary = 0.0;
    let mut forbidden = 0.0;
    for (&n, c) in &f.coeffs {
        let class = classify_frequency(region, n)?;
        if class == RegionClass::Boundary {
            boundary += c.norm_sqr();
        } else if class == mode.forbidden() {
            forbidden += c.norm_sqr();
        }
    }
    let l1 = l1_norm(f, grid)?;
    let (lhs, forbidden_mass) = (f64::sqrt(boundary), f64::sqrt(forbidden));
    let rhs = WEAK_SIGNAL_C * (l1.value + forbidden_mass);
    let error_bar = WEAK_SIGNAL_C * l1.error_estimate;
    Ok(WeakSignalReport {
        lhs,
        rhs,
        error_bar,
        l1,
        forbidden_mass,
        constant: WEAK_SIGNAL_C,
        pass: lhs <= rhs + error_bar,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{boundary_lattice_points, ConvexBody};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn circle(n: u64) -> (Region, Vec<Cell>) {
        let body = ConvexBody::centered(n).unwrap();
        let pts = boundary_lattice_points(&body).unwrap().iter().map(|p| p.lattice().unwrap()).collect();
        (Region::Body(body), pts)
    }

    fn random_poly(rng: &mut ChaCha8Rng, size: usize, radius: i64) -> TrigPoly2D {
        TrigPoly2D::new((0..size).map(|_| {
            (
                (rng.random_range(-radius..=radius), rng.random_range(-radius..=radius)),
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            )
        }))
    }

    #[test]
    fn monomial_has_unit_norm() {
        for n in [(0, 0), (3, -2), (7, 7)] {
            let r = l1_norm(&TrigPoly2D::monomial(n), 64).unwrap();
            assert!((r.value - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn one_plus_exponential_matches_one_dimensional_oracle() {
        let f = TrigPoly2D::new([((0, 0), Complex64::new(1.0, 0.0)), ((1, 0), Complex64::new(1.0, 0.0))]);
        let r = l1_norm(&f, 4096).unwrap();
        // midpoint rule on |2 cos(t/2)| over [0, 2pi], independent of the grid code
        let m = 200_000;
        let oracle: f64 =
            (0..m).map(|k| (2.0 * ((k as f64 + 0.5) * PI / m as f64).cos()).abs()).sum::<f64>() / m as f64;
        assert!((r.value - 4.0 / PI).abs() < 1e-6, "{}", r.value);
        assert!((oracle - 4.0 / PI).abs() < 1e-8);
    }

    #[test]
    fn fejer_kernel_has_unit_norm() {
        for m in [1, 4, 10] {
            let r = l1_norm(&TrigPoly2D::fejer(m), 64).unwrap();
            assert!((r.value - 1.0).abs() < 1e-10, "{m}: {}", r.value);
        }
    }

    #[test]
    fn grid_preconditions() {
        let f = TrigPoly2D::monomial((5, 0));
        assert_eq!(l1_norm(&f, 48), Err(TorusError::GridNotPowerOfTwo { grid: 48 }));
        assert_eq!(l1_norm(&f, 16), Err(TorusError::GridTooSmall { grid: 16, needed: 20 }));
    }

    #[test]
    fn parseval_and_coefficient_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let f = random_poly(&mut rng, 30, 6);
            let q = l2_norm_squared(&f, 32).unwrap();
            assert!((q.value - f.coefficient_l2().powi(2)).abs() < 1e-9);
            let l1 = l1_norm(&f, 256).unwrap();
            assert!(f.coefficient_sup() <= l1.value + l1.error_estimate + 1e-12);
        }
    }

    #[test]
    fn all_sampling_paths_agree() {
        // many distinct frequencies on both axes exercises the two-pass FFT
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let f = random_poly(&mut rng, 200, 12);
        let q = l1_norm(&f, 64).unwrap().value;
        let direct: f64 = (0..64)
            .flat_map(|a| (0..64).map(move |b| (a, b)))
            .map(|(a, b)| f.evaluate(2.0 * PI * a as f64 / 64.0, 2.0 * PI * b as f64 / 64.0).norm())
            .sum::<f64>()
            / 4096.0;
        assert!((q - direct).abs() < 1e-10);
    }

    #[test]
    fn convolution_matches_naive_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..5 {
            let g = random_poly(&mut rng, 10, 4).coeffs;
            let h = random_poly(&mut rng, 10, 4).coeffs;
            let w = convolve(&g, &h);
            for a in -8..=8 {
                for b in -8..=8 {
                    let naive: Complex64 = g
                        .iter()
                        .map(|(&y, &gy)| gy * h.get(&(y.0 - a, y.1 - b)).map(|z| z.conj()).unwrap_or_default())
                        .sum();
                    assert!((w.coefficient((a, b)) - naive).norm() < 1e-12);
                }
            }
            let fs = FactoredSequence { g, h };
            let l1 = l1_norm(&fs.w(), 64).unwrap();
            assert!(l1.value <= fs.norm_upper_bound() + l1.error_estimate + 1e-12);
        }
    }

    #[test]
    fn restriction_examples() {
        let (_, x) = circle(25);
        assert_eq!(x.len(), 12);
        let ind = TrigPoly2D::new(x.iter().take(8).map(|&n| (n, Complex64::new(1.0, 0.0))));
        assert!((restriction_l2(&ind, &x[..8]) - 8f64.sqrt()).abs() < 1e-15);
        assert_eq!(restriction_l2(&TrigPoly2D::monomial((0, 0)), &x), 0.0);
    }

    #[test]
    fn certificates() {
        let (region, x) = circle(25);
        let f = TrigPoly2D::new(x.iter().map(|&n| (n, Complex64::new(1.0, 0.0))));
        for mode in [VanishingMode::Interior, VanishingMode::Exterior] {
            assert!(vanishing_certificate(&f, &region, mode, None).unwrap().passed());
        }
        let inside = TrigPoly2D::monomial((0, 0));
        assert_eq!(
            vanishing_certificate(&inside, &region, VanishingMode::Interior, None).unwrap(),
            Certificate::Violation { frequency: (0, 0), class: RegionClass::Interior }
        );
        let outside = TrigPoly2D::monomial((10, 0));
        assert!(!vanishing_certificate(&outside, &region, VanishingMode::Exterior, None).unwrap().passed());
        assert!(matches!(
            restriction_ratio(&outside, &x, 64, &region, VanishingMode::Exterior),
            Err(TorusError::Certificate { frequency: (10, 0) })
        ));
    }

    #[test]
    fn single_mass_has_ratio_one() {
        let (region, x) = circle(5);
        let f = TrigPoly2D::monomial(x[3]);
        let r = restriction_ratio(&f, &x, 64, &region, VanishingMode::Exterior).unwrap();
        assert!((r.ratio - 1.0).abs() < 1e-12);
        assert!(!r.exceeds_constant);
    }

    #[test]
    fn weak_signal_examples() {
        let (region, x) = circle(25);
        let zero = weak_signal_check(&TrigPoly2D::default(), &region, VanishingMode::Interior, 64).unwrap();
        assert!(zero.pass && zero.lhs == 0.0 && zero.rhs == 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let mut terms: Vec<(Cell, Complex64)> =
            x.iter().map(|&n| (n, Complex64::new(rng.random_range(-1.0..1.0), 0.0))).collect();
        let base = weak_signal_check(&TrigPoly2D::new(terms.clone()), &region, VanishingMode::Interior, 64).unwrap();
        terms.push(((1, 1), Complex64::new(0.01, 0.0)));
        let perturbed = weak_signal_check(&TrigPoly2D::new(terms), &region, VanishingMode::Interior, 64).unwrap();
        assert!(perturbed.pass);
        assert!((perturbed.forbidden_mass - 0.01).abs() < 1e-15);
        assert_eq!(base.lhs, perturbed.lhs);
    }

    #[test]
    fn json_round_trip() {
        let f = TrigPoly2D::new([((1, -2), Complex64::new(0.5, -1.0)), ((0, 0), Complex64::new(2.0, 0.0))]);
        let v = f.to_json();
        assert_eq!(v["1,-2"], json!([0.5, -1.0]));
        assert_eq!(TrigPoly2D::from_json(&v).unwrap(), f);
        assert!(TrigPoly2D::from_json(&json!({"1;2": [1, 0]})).is_err());
        let zero = TrigPoly2D::new([((0, 0), Complex64::zero())]);
        assert!(zero.is_empty());
    }
}

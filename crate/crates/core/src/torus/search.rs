//! Extremal search for restriction ratios and the arithmetic-progression family.

use std::f64::consts::PI;

use num::complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{l1_norm, Cell, QuadratureReport, Result, TorusError, TrigPoly2D};
use crate::hilbert::linalg::gaussian;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SearchMethod {
    Random,
    CoordinateDescent,
}

/// Phases tried per coordinate move.
const PHASES: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchResult {
    pub method: SearchMethod,
    pub seed: u64,
    pub coefficients: TrigPoly2D,
    /// `||f^||_2 / ||f||_1` for the best polynomial found.
    pub ratio: f64,
    pub l1: QuadratureReport,
    pub evaluations: usize,
}

fn evaluate(xs: &[Cell], c: &[Complex64], grid: usize) -> Result<(f64, QuadratureReport, TrigPoly2D)> {
    let f = TrigPoly2D::new(xs.iter().copied().zip(c.iter().copied()));
    let l1 = l1_norm(&f, grid)?;
    let l2 = f.coefficient_l2();
    Ok((if l1.value > 0.0 { l2 / l1.value } else { 0.0 }, l1, f))
}

/// Best ratio over polynomials supported on `xs`.
///
/// `trials` counts quadrature evaluations. Coordinate descent starts from the
/// all-ones vector and rotates one coefficient at a time through a grid of phases.
pub fn ratio_search(xs: &[Cell], trials: usize, seed: u64, method: SearchMethod, grid: usize) -> Result<SearchResult> {
    let mut xs = xs.to_vec();
    xs.sort_unstable();
    xs.dedup();
    if xs.is_empty() {
        return Err(TorusError::InvalidParameter("empty point set".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trials = trials.max(1);
    let mut evaluations = 0;
    let mut best: Option<(f64, QuadratureReport, TrigPoly2D, Vec<Complex64>)> = None;
    let mut consider = |c: Vec<Complex64>, evaluations: &mut usize| -> Result<bool> {
        *evaluations += 1;
        let (r, l1, f) = evaluate(&xs, &c, grid)?;
        if best.as_ref().is_none_or(|b| r > b.0 + 1e-13) {
            best = Some((r, l1, f, c));
            return Ok(true);
        }
        Ok(false)
    };

    match method {
        SearchMethod::Random => {
            for _ in 0..trials {
                let c: Vec<Complex64> = xs.iter().map(|_| gaussian(&mut rng)).collect();
                consider(c, &mut evaluations)?;
            }
        }
        SearchMethod::CoordinateDescent => {
            let mut current = vec![Complex64::new(1.0, 0.0); xs.len()];
            consider(current.clone(), &mut evaluations)?;
            let mut order: Vec<usize> = (0..xs.len()).collect();
            'sweeps: loop {
                let mut improved = false;
                order.shuffle(&mut rng);
                for &i in &order {
                    for p in 1..PHASES {
                        if evaluations >= trials {
                            break 'sweeps;
                        }
                        let mut c = current.clone();
                        c[i] *= Complex64::from_polar(1.0, 2.0 * PI * p as f64 / PHASES as f64);
                        if consider(c.clone(), &mut evaluations)? {
                            current = c;
                            improved = true;
                        }
                    }
                }
                if !improved {
                    break;
                }
            }
        }
    }
    let (ratio, l1, coefficients, _) = best.expect("at least one evaluation");
    Ok(SearchResult { method, seed, coefficients, ratio, l1, evaluations })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ApBlowupReport {
    pub length: usize,
    /// `sqrt(L) / ||D_L||_1`.
    pub ratio: f64,
    pub l1: QuadratureReport,
    pub ratio_error: f64,
}

/// Dirichlet kernel on the progression `{(j, 0) : 0 <= j < L}`.
pub fn dirichlet(len: usize) -> TrigPoly2D {
    TrigPoly2D::new((0..len as i64).map(|j| ((j, 0), Complex64::new(1.0, 0.0))))
}

pub fn ap_blowup(len: usize, grid: usize) -> Result<ApBlowupReport> {
    if len == 0 {
        return Err(TorusError::InvalidParameter("progression length must be positive".into()));
    }
    let l1 = l1_norm(&dirichlet(len), grid)?;
    let root = (len as f64).sqrt();
    let ratio = root / l1.value;
    let ratio_error = if l1.value > l1.error_estimate {
        root / (l1.value - l1.error_estimate) - ratio
    } else {
        f64::INFINITY
    };
    Ok(ApBlowupReport { length: len, ratio, l1, ratio_error })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_has_ratio_one() {
        for method in [SearchMethod::Random, SearchMethod::CoordinateDescent] {
            let r = ratio_search(&[(2, 3)], 10, 1, method, 16).unwrap();
            assert!((r.ratio - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn search_is_reproducible() {
        let xs = [(1, 0), (0, 1), (-1, 0), (0, -1), (2, 1)];
        for method in [SearchMethod::Random, SearchMethod::CoordinateDescent] {
            let a = ratio_search(&xs, 60, 9, method, 32).unwrap();
            let b = ratio_search(&xs, 60, 9, method, 32).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn progression_search_finds_the_dirichlet_ratio() {
        let xs: Vec<Cell> = (0..4).map(|j| (j, 0)).collect();
        let d = ap_blowup(4, 1024).unwrap();
        let r = ratio_search(&xs, 400, 3, SearchMethod::CoordinateDescent, 1024).unwrap();
        assert!((r.ratio - d.ratio).abs() < 1e-3, "{} vs {}", r.ratio, d.ratio);
    }

    #[test]
    fn length_one_and_growth() {
        assert!((ap_blowup(1, 16).unwrap().ratio - 1.0).abs() < 1e-12);
        let rs: Vec<f64> = [4, 16, 64].iter().map(|&l| ap_blowup(l, 4096).unwrap().ratio).collect();
        assert!(rs[0] < rs[1] && rs[1] < rs[2], "{rs:?}");
    }

    #[test]
    fn dirichlet_norm_matches_one_dimensional_midpoint_rule() {
        // |D_L(t)| = |sin(L t / 2) / sin(t / 2)|
        let len = 16.0;
        let m = 1_000_000;
        let oracle: f64 = (0..m)
            .map(|k| {
                let t = 2.0 * PI * (k as f64 + 0.5) / m as f64;
                ((len * t / 2.0).sin() / (t / 2.0).sin()).abs()
            })
            .sum::<f64>()
            / m as f64;
        let r = ap_blowup(16, 4096).unwrap();
        assert!((r.l1.value - oracle).abs() <= r.l1.error_estimate, "{} vs {oracle} ({})", r.l1.value, r.l1.error_estimate);
    }
}

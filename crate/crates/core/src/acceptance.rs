//! The acceptance battery: one outcome per numbered criterion.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num::complex::Complex64;
use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::contagion::{
    check_epsilon_equivalence, check_inclusion, enumerate_alt, enumerate_schur, separation_threshold,
    InclusionCheck, InclusionTarget, PointSequence,
};
use crate::geometry::{
    boundary_lattice_points, second_quadrant_arc, verify_hull_inclusions, ConvexBody, CurveFamily, PlanePoint,
    Region,
};
use crate::hilbert::{
    exact_delta_check, forbidden_translates, interior_sets, lemma_bound, random_instance, split_sequence,
    translation_instance, Flavor, LatticeFunction, TranslationFlavor,
};
use crate::rational::{self, int, ratio, Certified, Rational};
use crate::torus::{
    ap_blowup, fejer_bump, ratio_search, restriction_ratio, weak_signal_check, Cell, Parallelogram, SearchMethod,
    TrigPoly2D, VanishingMode,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteOptions {
    /// Caps: J <= 4, generation <= 3, grid <= 1024, trials <= 50.
    pub quick: bool,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { quick: false, seed: 1 }
    }
}

impl SuiteOptions {
    fn trials(&self, n: usize) -> usize {
        if self.quick { n.min(50) } else { n }
    }

    fn grid(&self, g: usize) -> usize {
        if self.quick { g.min(1024) } else { g }
    }

    fn len(&self, j: usize) -> usize {
        if self.quick { j.min(4) } else { j }
    }

    fn generation(&self, g: u32) -> u32 {
        if self.quick { g.min(3) } else { g }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub seconds: f64,
    pub budget_seconds: f64,
    pub detail: Value,
}

pub const CRITERIA: [(u8, &str, f64); 8] = [
    (1, "lemma bound", 30.0),
    (2, "set equivalence", 10.0),
    (3, "geometric inclusions", 20.0),
    (4, "separation criterion", 1.0),
    (5, "restriction ratios", 60.0),
    (6, "progression blow-up", 10.0),
    (7, "bump on parallelograms", 5.0),
    (8, "translation instances", 5.0),
];

pub fn run_criterion(id: u8, opts: &SuiteOptions) -> Option<CriterionOutcome> {
    let &(id, name, budget) = CRITERIA.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let (checks, detail) = match id {
        1 => lemma_bound_criterion(opts),
        2 => equivalence_criterion(opts),
        3 => inclusion_criterion(opts),
        4 => separation_criterion(),
        5 => ratio_criterion(opts),
        6 => blowup_criterion(opts),
        7 => bump_criterion(),
        _ => translation_criterion(opts),
    };
    let seconds = start.elapsed().as_secs_f64();
    Some(CriterionOutcome { id, name, pass: checks && seconds < budget, seconds, budget_seconds: budget, detail })
}

pub fn run_suite(opts: &SuiteOptions) -> Vec<CriterionOutcome> {
    CRITERIA.iter().filter_map(|c| run_criterion(c.0, opts)).collect()
}

fn lemma_bound_criterion(opts: &SuiteOptions) -> (bool, Value) {
    let count = opts.trials(1000);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (mut max_ratio, mut max_residual, mut max_b1): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut failures = Vec::new();
    for i in 0..count {
        let flavor = if i % 2 == 0 { Flavor::OldLemma } else { Flavor::NewLemma };
        let n = rng.random_range(1..=32);
        let len = rng.random_range(1..=n.min(8));
        let seed = rng.random::<u64>();
        let outcome = random_instance(flavor, n, len, seed)
            .map_err(|e| e.to_string())
            .and_then(|inst| {
                let bound = lemma_bound(&inst).map_err(|e| e.to_string())?;
                let split = split_sequence(&inst).map_err(|e| e.to_string())?;
                Ok((bound, split))
            });
        match outcome {
            Ok((bound, split)) => {
                max_ratio = max_ratio.max(bound.ratio);
                max_residual = max_residual.max(split.identity_residual);
                let b1 = if flavor == Flavor::NewLemma { split.b[0].norm() } else { 0.0 };
                max_b1 = max_b1.max(b1);
                if !bound.holds || split.identity_residual >= 1e-10 || b1 != 0.0 {
                    failures.push(json!({ "flavor": flavor, "n": n, "J": len, "seed": seed }));
                }
            }
            Err(e) => failures.push(json!({ "flavor": flavor, "n": n, "J": len, "seed": seed, "error": e })),
        }
    }
    failures.truncate(10);
    (
        failures.is_empty(),
        json!({
            "instances": count,
            "maxRatio": max_ratio,
            "maxIdentityResidual": max_residual,
            "maxFirstB": max_b1,
            "failures": failures,
        }),
    )
}

fn increasing_subsets(values: &[i64], max_len: usize) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for &v in values {
        let extended: Vec<Vec<i64>> =
            out.iter().filter(|s| s.len() < max_len).map(|s| [s.as_slice(), &[v]].concat()).collect();
        out.extend(extended);
    }
    out.retain(|s| !s.is_empty());
    out
}

fn parabola_sequence(us: &[Rational]) -> PointSequence {
    PointSequence::on_curve(&CurveFamily::unit_parabola(), us).expect("increasing parameters")
}

fn equivalence_criterion(opts: &SuiteOptions) -> (bool, Value) {
    let subsets = increasing_subsets(&(0..=6).collect::<Vec<_>>(), opts.len(4));
    let mut failures = Vec::new();
    let (mut reps, mut eps) = (0, 0);
    for us in &subsets {
        let seq = parabola_sequence(&us.iter().map(|&u| int(u)).collect::<Vec<_>>());
        let r = check_epsilon_equivalence(&seq, 3, 3);
        reps += r.representations_checked;
        eps += r.epsilons_checked;
        if !r.pass || !r.discrepancies.is_empty() {
            failures.push(json!({ "u": us, "discrepancies": r.discrepancies.len() }));
        }
    }
    failures.truncate(10);
    (
        failures.is_empty(),
        json!({ "sequences": subsets.len(), "representationsChecked": reps, "epsilonsChecked": eps, "failures": failures }),
    )
}

fn random_rational(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Rational {
    ratio(rng.random_range(-num..=num), rng.random_range(1..=den))
}

fn inclusion_criterion(opts: &SuiteOptions) -> (bool, Value) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(3));
    let generation = opts.generation(4);
    let mut failures = Vec::new();
    let (mut alt_checked, mut schur_checked) = (0, 0);
    for trial in 0..100 {
        let a = ratio(rng.random_range(1..=6), rng.random_range(1..=4));
        let k = random_rational(&mut rng, 6, 3);
        let curve = CurveFamily::parabola(a.clone(), k.clone()).expect("a > 0");
        let len = rng.random_range(1..=opts.len(6));
        let mut us: BTreeSet<Rational> = BTreeSet::new();
        while us.len() < len {
            us.insert(random_rational(&mut rng, 12, 3));
        }
        let us: Vec<Rational> = us.into_iter().collect();
        let seq = PointSequence::on_curve(&curve, &us).expect("increasing parameters");
        let region = Region::Curve(curve);
        let schur = enumerate_schur(&seq, generation);
        schur_checked += schur.len();
        let mut ok = check_inclusion(&schur, &region, &InclusionTarget::InteriorOfDc).map(|c| c.passed()).unwrap_or(false);
        if len >= 3 {
            let terms = if len % 2 == 1 { len } else { len - 1 };
            let alt = enumerate_alt(&seq, terms).expect("odd term count");
            alt_checked += alt.len();
            ok &= check_inclusion(&alt, &region, &InclusionTarget::InteriorOfD).map(|c| c.passed()).unwrap_or(false);
        }
        if !ok {
            failures.push(json!({
                "trial": trial,
                "a": rational::format_rational(&a),
                "k": rational::format_rational(&k),
                "u": us.iter().map(rational::format_rational).collect::<Vec<_>>(),
            }));
        }
    }
    let mut circles = Vec::new();
    for n in [5u64, 25, 65, 325] {
        let body = ConvexBody::centered(n).expect("positive radius");
        let pass = second_quadrant_arc(&body)
            .and_then(|arc| verify_hull_inclusions(&body, &arc))
            .map(|c| c.passed())
            .unwrap_or(false);
        circles.push(json!({ "N": n, "pass": pass }));
    }
    let circles_ok = circles.iter().all(|c| c["pass"] == json!(true));
    (
        failures.is_empty() && circles_ok,
        json!({
            "instances": 100,
            "generation": generation,
            "altChecked": alt_checked,
            "schurChecked": schur_checked,
            "failures": failures,
            "circles": circles,
        }),
    )
}

fn separation_criterion() -> (bool, Value) {
    let curve = CurveFamily::unit_parabola();
    let region = Region::Curve(curve.clone());
    let k = int(2);
    let threshold = separation_threshold(&curve, &k).ok();
    let threshold_ok = threshold == Some(Certified::Exact(int(1)));

    let spaced = parabola_sequence(&[int(0), int(2), int(4), int(6)]);
    let down = InclusionTarget::InteriorShiftedDown { k: k.clone() };
    let up = InclusionTarget::InteriorShiftedUp { k: k.clone() };
    let spaced_schur = check_inclusion(&enumerate_schur(&spaced, 3), &region, &down).map(|c| c.passed()).unwrap_or(false);
    let spaced_alt =
        check_inclusion(&enumerate_alt(&spaced, 3).expect("odd"), &region, &up).map(|c| c.passed()).unwrap_or(false);

    let close = parabola_sequence(&[int(0), ratio(1, 2)]);
    let (witness, gap) = match check_inclusion(&enumerate_schur(&close, 3), &region, &down) {
        Ok(InclusionCheck::Witness { witness, gap, .. }) => (Some(witness.point), gap),
        _ => (None, None),
    };
    let witness_ok = witness == Some(PlanePoint::new(ratio(-1, 2), ratio(-1, 4)))
        && gap.as_ref().and_then(|g| g.exact().cloned()) == Some(ratio(1, 2));
    (
        threshold_ok && spaced_schur && spaced_alt && witness_ok,
        json!({
            "threshold": threshold,
            "spacedDescendants": spaced_schur,
            "spacedAlternating": spaced_alt,
            "witness": witness,
            "gap": gap,
        }),
    )
}

fn unit_coefficients(rng: &mut ChaCha8Rng, xs: &[Cell]) -> TrigPoly2D {
    let c: Vec<Complex64> = xs.iter().map(|_| crate::hilbert::linalg::gaussian(rng)).collect();
    let norm = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    TrigPoly2D::new(xs.iter().copied().zip(c.into_iter().map(|z| z / norm)))
}

fn ratio_criterion(opts: &SuiteOptions) -> (bool, Value) {
    let grid = opts.grid(2048);
    let trials = opts.trials(200);
    let limit = 2.0 * 2f64.sqrt() + 1e-2;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(5));
    let mut circles = Vec::new();
    let mut ok = true;
    for n in [5u64, 25] {
        let body = ConvexBody::centered(n).expect("positive radius");
        let region = Region::Body(body.clone());
        let xs: Vec<Cell> = boundary_lattice_points(&body)
            .expect("lattice circle")
            .iter()
            .map(|p| p.lattice().expect("lattice point"))
            .collect();
        let (mut max_random, mut worst_bar): (f64, f64) = (0.0, 0.0);
        let mut errors = 0;
        for _ in 0..trials {
            let f = unit_coefficients(&mut rng, &xs);
            match restriction_ratio(&f, &xs, grid, &region, VanishingMode::Exterior) {
                Ok(r) => {
                    if r.ratio + r.error_bar > limit {
                        ok = false;
                    }
                    max_random = max_random.max(r.ratio);
                    worst_bar = worst_bar.max(r.error_bar);
                }
                Err(_) => errors += 1,
            }
        }
        let evaluations = opts.trials(300);
        let searched = ratio_search(&xs, evaluations, opts.seed, SearchMethod::CoordinateDescent, 256)
            .ok()
            .and_then(|s| restriction_ratio(&s.coefficients, &xs, grid, &region, VanishingMode::Exterior).ok());
        match &searched {
            Some(r) if r.ratio + r.error_bar <= limit => {}
            _ => ok = false,
        }
        ok &= errors == 0;
        circles.push(json!({
            "N": n,
            "points": xs.len(),
            "trials": trials,
            "maxRandomRatio": max_random,
            "maxErrorBar": worst_bar,
            "searchRatio": searched.as_ref().map(|r| r.ratio),
            "searchErrorBar": searched.as_ref().map(|r| r.error_bar),
            "errors": errors,
        }));
    }

    // weak signal: boundary polynomial plus a small perturbation in the forbidden open region
    let body = ConvexBody::centered(25).expect("positive radius");
    let region = Region::Body(body.clone());
    let xs: Vec<Cell> =
        boundary_lattice_points(&body).expect("lattice circle").iter().map(|p| p.lattice().expect("lattice")).collect();
    let weak_trials = opts.trials(50);
    let mut weak_pass = 0;
    let mut min_slack = f64::INFINITY;
    for t in 0..weak_trials {
        let mode = if t % 2 == 0 { VanishingMode::Interior } else { VanishingMode::Exterior };
        let mut terms: Vec<(Cell, Complex64)> = unit_coefficients(&mut rng, &xs).coefficients().clone().into_iter().collect();
        for _ in 0..3 {
            let p = loop {
                let p: Cell = (rng.random_range(-8..=8), rng.random_range(-8..=8));
                let d = p.0 * p.0 + p.1 * p.1;
                if (mode == VanishingMode::Interior && d < 25) || (mode == VanishingMode::Exterior && d > 25) {
                    break p;
                }
            };
            terms.push((p, crate::hilbert::linalg::gaussian(&mut rng) * 0.05));
        }
        if let Ok(r) = weak_signal_check(&TrigPoly2D::new(terms), &region, mode, opts.grid(1024)) {
            if r.pass {
                weak_pass += 1;
            }
            min_slack = min_slack.min(r.rhs + r.error_bar - r.lhs);
        }
    }
    ok &= weak_pass == weak_trials;
    (
        ok,
        json!({
            "grid": grid,
            "limit": limit,
            "circles": circles,
            "weakSignal": { "trials": weak_trials, "passed": weak_pass, "minSlack": min_slack, "constant": 4.0 },
        }),
    )
}

fn blowup_criterion(opts: &SuiteOptions) -> (bool, Value) {
    let grid = opts.grid(4096);
    let reports: Vec<_> = [4usize, 8, 16, 32, 64].iter().filter_map(|&l| ap_blowup(l, grid).ok()).collect();
    let increasing = reports.len() == 5
        && reports.windows(2).all(|w| w[1].ratio - w[1].ratio_error > w[0].ratio + w[0].ratio_error);
    let last = reports.last().map(|r| r.ratio).unwrap_or(f64::NAN);
    let bound = 2.0 * 2f64.sqrt();
    (
        increasing,
        json!({
            "grid": grid,
            "ratios": reports,
            "ratio64": last,
            "exceedsTwoRootTwo": last > bound,
        }),
    )
}

fn bump_criterion() -> (bool, Value) {
    let boxes = [
        ("axisAligned", Parallelogram::axis_box(PlanePoint::origin(), int(1), int(1))),
        (
            "sheared",
            Parallelogram { origin: PlanePoint::origin(), edges: [PlanePoint::from_ints(1, 0), PlanePoint::from_ints(1, 1)] },
        ),
    ];
    let mut ok = true;
    let mut detail = serde_json::Map::new();
    for (name, b) in boxes {
        match fejer_bump(&b, 64) {
            Ok((_, r)) => {
                ok &= r.pass && r.center_value == int(1);
                detail.insert(name.into(), serde_json::to_value(&r).unwrap_or(Value::Null));
            }
            Err(e) => {
                ok = false;
                detail.insert(name.into(), json!({ "error": e.to_string() }));
            }
        }
    }
    (ok, Value::Object(detail))
}

fn translation_criterion(opts: &SuiteOptions) -> (bool, Value) {
    let seq = parabola_sequence(&[int(0), int(1), int(2), int(3)]);
    let sets = interior_sets(&seq).expect("lattice points");
    let zero = forbidden_translates(&seq, TranslationFlavor::Interior, &sets).expect("lattice points");
    let xs: Vec<Cell> = seq.points().iter().map(|p| p.lattice().expect("lattice")).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(8));
    let trials = opts.trials(100);
    let mut failures = Vec::new();
    let mut max_ratio = Rational::zero();
    let mut numeric_ok = true;
    for t in 0..trials {
        let mut g: BTreeMap<Cell, Rational> = BTreeMap::new();
        for u in -2..=5 {
            for v in -2..=11 {
                if !zero.contains(&(u, v)) && (xs.contains(&(u, v)) || rng.random_range(0..3) == 0) {
                    let value = random_rational(&mut rng, 9, 9);
                    if !value.is_zero() {
                        g.insert((u, v), value);
                    }
                }
            }
        }
        match exact_delta_check(&seq, &sets, &g) {
            Ok(r) => {
                if !r.total_sq.is_zero() {
                    max_ratio = max_ratio.max(&r.restricted_sq / &r.total_sq);
                }
                if !(r.vanishes && r.holds) {
                    failures.push(json!({ "trial": t, "report": r }));
                }
            }
            Err(e) => failures.push(json!({ "trial": t, "error": e.to_string() })),
        }
        if t < 3 {
            let gc: LatticeFunction = g.iter().map(|(&c, v)| (c, Complex64::new(rational::to_f64(v), 0.0))).collect();
            let h: LatticeFunction = [((0, 0), Complex64::new(1.0, 0.0))].into_iter().collect();
            numeric_ok &= translation_instance(&seq, TranslationFlavor::Interior, &sets, &gc, &h, None)
                .map(|i| i.hypotheses.pass && i.w_vanishes_where_required && i.inner_product_residual < 1e-12)
                .unwrap_or(false);
        }
    }
    failures.truncate(10);
    (
        failures.is_empty() && numeric_ok,
        json!({
            "trials": trials,
            "forbidden": zero,
            "maxRestrictedShare": rational::format_rational(&max_ratio),
            "numericInstancesOk": numeric_ok,
            "failures": failures,
        }),
    )
}

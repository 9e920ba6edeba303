use std::collections::{BTreeMap, BTreeSet};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, ValueEnum};
use num::complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use restriction_core::acceptance::{run_criterion, SuiteOptions, CRITERIA};
use restriction_core::contagion::{
    check_epsilon_equivalence, check_inclusion, enumerate_alt, enumerate_s, enumerate_schur, first_generation_gap,
    lacunary_gap_check, separation_threshold, GapMode, GeneratedPoint, InclusionTarget, PointSequence,
};
use restriction_core::geometry::{
    boundary_lattice_points, classify_point, second_quadrant_arc, verify_hull_inclusions, ConvexBody, PlanePoint,
    Region, RegionClass,
};
use restriction_core::hilbert::{
    exact_delta_check, exterior_sets, forbidden_translates, interior_sets, lemma_bound, random_instance,
    split_sequence, translation_instance, verify_hypotheses, Flavor, LemmaInstance, TranslationFlavor,
    IDENTITY_TOL,
};
use restriction_core::rational::{self, format_rational, Rational};
use restriction_core::torus::{
    ap_blowup, classify_frequency, dyadic_mass_probe, fejer_bump, l1_norm, l2_norm_squared, ratio_search,
    restriction_constant, restriction_l2, vanishing_certificate, verify_dual_witness, weak_signal_check, Cell,
    Certificate, DualWitness, Parallelogram, SearchMethod, VanishingMode, WitnessMode,
};

use crate::specs;

/// Caps applied by the global `--quick` flag.
#[derive(Debug, Clone, Copy)]
pub struct Caps {
    pub quick: bool,
}

impl Caps {
    fn grid(&self, g: usize) -> usize {
        if self.quick { g.min(1024) } else { g }
    }

    fn trials(&self, t: usize) -> usize {
        if self.quick { t.min(50) } else { t }
    }

    fn generation(&self, g: u32) -> u32 {
        if self.quick { g.min(3) } else { g }
    }

    fn len(&self, j: usize) -> usize {
        if self.quick { j.min(4) } else { j }
    }

    fn points(&self, seq: PointSequence) -> Result<PointSequence> {
        let keep = self.len(seq.len());
        if keep == seq.len() {
            return Ok(seq);
        }
        Ok(PointSequence::new(seq.points()[..keep].to_vec())?)
    }
}

pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub struct Outcome {
    pub pass: bool,
    pub result: Value,
    pub table: Option<Table>,
    /// Wall-clock figures kept out of `result` so reports stay reproducible.
    pub timing: Option<Value>,
}

impl Outcome {
    fn new(pass: bool, result: Value) -> Self {
        Outcome { pass, result, table: None, timing: None }
    }

    fn with_table(mut self, headers: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        self.table = Some(Table { headers, rows });
        self
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn point_row(p: &PlanePoint) -> Vec<String> {
    vec![format_rational(&p.u), format_rational(&p.v)]
}

fn lattice(points: &[PlanePoint]) -> Result<Vec<Cell>> {
    points
        .iter()
        .map(|p| p.lattice().ok_or_else(|| anyhow!("point {p} is not a lattice point")))
        .collect()
}

fn generated_table(points: &[GeneratedPoint]) -> (Vec<&'static str>, Vec<Vec<String>>) {
    let rows = points
        .iter()
        .map(|g| {
            let mut r = point_row(&g.point);
            r.push(g.generation.to_string());
            r.push(serde_json::to_string(&g.representation).unwrap_or_default());
            r
        })
        .collect();
    (vec!["u", "v", "generation", "representation"], rows)
}

fn points_and_region(points: &str, region: Option<&str>) -> Result<(PointSequence, Region)> {
    let (seq, implied) = specs::points(points).context("--points")?;
    let region = match region {
        Some(r) => specs::region(r).context("--region")?,
        None => implied.ok_or_else(|| anyhow!("--region is required for explicit point lists"))?,
    };
    Ok((seq, region))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    Interior,
    Exterior,
}

impl From<ModeArg> for VanishingMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Interior => VanishingMode::Interior,
            ModeArg::Exterior => VanishingMode::Exterior,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlavorArg {
    Old,
    New,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Self {
        match f {
            FlavorArg::Old => Flavor::OldLemma,
            FlavorArg::New => Flavor::NewLemma,
        }
    }
}

// ---------------------------------------------------------------- geometry

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct ClassifyArgs {
    /// Region, e.g. `parabola`, `hyperbola(alpha=1,k=1)`, `circle(25)`.
    #[arg(long, default_value = "parabola")]
    pub region: String,
    /// Points as `u,v;u,v;...`.
    #[arg(long)]
    pub points: String,
}

pub fn classify(a: &ClassifyArgs) -> Result<Outcome> {
    let region = specs::region(&a.region).context("--region")?;
    let mut rows = Vec::new();
    let mut out = Vec::new();
    for s in a.points.split(';').filter(|s| !s.trim().is_empty()) {
        let p = specs::point(s).context("--points")?;
        let class = classify_point(&region, &p)?;
        let mut row = point_row(&p);
        row.push(to_value(&class)?.as_str().unwrap_or_default().to_string());
        rows.push(row);
        out.push(json!({ "point": p, "class": class }));
    }
    Ok(Outcome::new(true, json!({ "region": region, "points": out })).with_table(vec!["u", "v", "class"], rows))
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct LatticeCircleArgs {
    /// Squared radius N.
    #[arg(long)]
    pub n: u64,
    /// Lattice centre `u,v`.
    #[arg(long, default_value = "0,0")]
    pub center: String,
}

pub fn lattice_circle(a: &LatticeCircleArgs) -> Result<Outcome> {
    let center = specs::point(&a.center).context("--center")?;
    let body = ConvexBody::lattice_circle(a.n, center)?;
    let region = Region::Body(body.clone());
    let points = boundary_lattice_points(&body)?;
    let off: Vec<&PlanePoint> = points
        .iter()
        .filter(|p| !matches!(classify_point(&region, p), Ok(RegionClass::Boundary)))
        .collect();
    let arc = second_quadrant_arc(&body)?;
    let rows = points.iter().map(point_row).collect();
    Ok(Outcome::new(
        off.is_empty(),
        json!({
            "body": body.describe(),
            "count": points.len(),
            "points": points,
            "secondQuadrantArc": arc,
            "offBoundary": off,
        }),
    )
    .with_table(vec!["u", "v"], rows))
}

// ---------------------------------------------------------------- contagion

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct GenAltArgs {
    /// Point sequence, e.g. `parabola:0,1,2` or `pts:(0,0);(1,1)`.
    #[arg(long)]
    pub points: String,
    /// Largest odd number of terms in an alternating sum.
    #[arg(long, default_value_t = 3)]
    pub max_terms: usize,
}

pub fn gen_alt(a: &GenAltArgs, caps: Caps) -> Result<Outcome> {
    let (seq, _) = specs::points(&a.points).context("--points")?;
    let seq = caps.points(seq)?;
    let pts = enumerate_alt(&seq, a.max_terms)?;
    let (h, rows) = generated_table(&pts);
    Ok(Outcome::new(true, json!({ "sequence": seq.points(), "count": pts.len(), "points": pts })).with_table(h, rows))
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct GenSchurArgs {
    #[arg(long)]
    pub points: String,
    #[arg(long, default_value_t = 2)]
    pub max_generation: u32,
}

pub fn gen_schur(a: &GenSchurArgs, caps: Caps) -> Result<Outcome> {
    let (seq, _) = specs::points(&a.points).context("--points")?;
    let seq = caps.points(seq)?;
    let pts = enumerate_schur(&seq, caps.generation(a.max_generation));
    let (h, rows) = generated_table(&pts);
    Ok(Outcome::new(true, json!({ "sequence": seq.points(), "count": pts.len(), "points": pts })).with_table(h, rows))
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct GenSArgs {
    #[arg(long)]
    pub points: String,
}

pub fn gen_s(a: &GenSArgs, caps: Caps) -> Result<Outcome> {
    let (seq, _) = specs::points(&a.points).context("--points")?;
    let seq = caps.points(seq)?;
    let combos = enumerate_s(&seq);
    let rows = combos
        .iter()
        .map(|c| {
            let mut r = point_row(&c.value);
            r.push(c.epsilons.iter().map(i64::to_string).collect::<Vec<_>>().join(" "));
            r
        })
        .collect();
    Ok(Outcome::new(true, json!({ "sequence": seq.points(), "count": combos.len(), "combinations": combos }))
        .with_table(vec!["u", "v", "epsilons"], rows))
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct InclusionArgs {
    #[arg(long)]
    pub points: String,
    /// Defaults to the curve or circle named in `--points`.
    #[arg(long)]
    pub region: Option<String>,
    /// Defaults to the largest odd count not above the sequence length.
    #[arg(long)]
    pub max_terms: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub max_generation: u32,
    /// Vertical shift k; checks `Int(D) + (0,k)` and `Int(D^c) - (0,k)` instead.
    #[arg(long)]
    pub shift: Option<String>,
}

fn odd_terms(len: usize) -> usize {
    if len % 2 == 1 { len } else { len.saturating_sub(1) }
}

fn curve_inclusions(
    seq: &PointSequence,
    region: &Region,
    max_terms: usize,
    generation: u32,
    shift: Option<&Rational>,
) -> Result<(bool, Value)> {
    let (alt_target, schur_target) = match shift {
        Some(k) => (
            InclusionTarget::InteriorShiftedUp { k: k.clone() },
            InclusionTarget::InteriorShiftedDown { k: k.clone() },
        ),
        None => (InclusionTarget::InteriorOfD, InclusionTarget::InteriorOfDc),
    };
    let alt = if max_terms >= 3 { Some(check_inclusion(&enumerate_alt(seq, max_terms)?, region, &alt_target)?) } else { None };
    let schur = check_inclusion(&enumerate_schur(seq, generation), region, &schur_target)?;
    let pass = alt.as_ref().is_none_or(|c| c.passed()) && schur.passed();
    Ok((
        pass,
        json!({
            "alternating": { "target": alt_target, "maxTerms": max_terms, "check": alt },
            "descendants": { "target": schur_target, "maxGeneration": generation, "check": schur },
        }),
    ))
}

pub fn check_inclusions(a: &InclusionArgs, caps: Caps) -> Result<Outcome> {
    let (seq, region) = points_and_region(&a.points, a.region.as_deref())?;
    let seq = caps.points(seq)?;
    match &region {
        Region::Body(body) => {
            if a.shift.is_some() {
                bail!("--shift applies to curve regions only");
            }
            let check = verify_hull_inclusions(body, seq.points())?;
            Ok(Outcome::new(check.passed(), json!({ "region": region, "sequence": seq.points(), "hull": check })))
        }
        Region::Curve(_) => {
            let shift = a.shift.as_deref().map(specs::rational).transpose().context("--shift")?;
            let terms = a.max_terms.unwrap_or_else(|| odd_terms(seq.len()));
            let (pass, detail) =
                curve_inclusions(&seq, &region, terms, caps.generation(a.max_generation), shift.as_ref())?;
            Ok(Outcome::new(pass, json!({ "region": region, "sequence": seq.points(), "inclusions": detail })))
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct EpsilonArgs {
    #[arg(long)]
    pub points: String,
    /// Bound B on |eps_i|.
    #[arg(long, default_value_t = 3)]
    pub bound: i64,
    #[arg(long, default_value_t = 3)]
    pub max_generation: u32,
}

pub fn epsilon_equiv(a: &EpsilonArgs, caps: Caps) -> Result<Outcome> {
    let (seq, _) = specs::points(&a.points).context("--points")?;
    let seq = caps.points(seq)?;
    if a.bound < 1 {
        bail!("--bound must be at least 1");
    }
    let r = check_epsilon_equivalence(&seq, a.bound, caps.generation(a.max_generation));
    Ok(Outcome::new(r.pass, json!({ "sequence": seq.points(), "report": r })))
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct SeparationArgs {
    /// A curve region.
    #[arg(long, default_value = "parabola")]
    pub region: String,
    /// Vertical shift k > 0.
    #[arg(long)]
    pub k: String,
    /// Optional abscissae `u1,u2,...` on the curve to test against the threshold.
    #[arg(long)]
    pub us: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub max_generation: u32,
}

pub fn separation(a: &SeparationArgs, caps: Caps) -> Result<Outcome> {
    let Region::Curve(curve) = specs::region(&a.region).context("--region")? else {
        bail!("--region must be a curve");
    };
    let k = specs::rational(&a.k).context("--k")?;
    let threshold = separation_threshold(&curve, &k)?;
    let mut result = json!({ "curve": curve.describe(), "k": format_rational(&k), "threshold": threshold });
    let mut pass = true;
    if let Some(us) = &a.us {
        let us = specs::rationals(us).context("--us")?;
        let seq = caps.points(PointSequence::on_curve(&curve, &us)?)?;
        let region = Region::Curve(curve.clone());
        let (ok, detail) =
            curve_inclusions(&seq, &region, odd_terms(seq.len()), caps.generation(a.max_generation), Some(&k))?;
        let mut gaps = Vec::new();
        for j in 1..seq.len() {
            for i in 1..=j {
                gaps.push(first_generation_gap(&curve, &seq, i, j)?);
            }
        }
        let spacing: Vec<String> = (1..seq.len()).map(|j| seq.delta(j).map(|d| format_rational(&d.u))).collect::<Result<_, _>>()?;
        pass = ok;
        result["sequence"] = to_value(&seq.points())?;
        result["spacing"] = to_value(&spacing)?;
        result["shiftedInclusions"] = detail;
        result["firstGenerationGaps"] = to_value(&gaps)?;
    }
    Ok(Outcome::new(pass, result))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapArg {
    Before,
    After,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct LacunaryArgs {
    /// Positive increasing reals `x1,x2,...` with `x_(j+1) >= (1+delta) x_j`.
    #[arg(long)]
    pub xs: String,
    #[arg(long)]
    pub delta: String,
    #[arg(long, value_enum, default_value_t = GapArg::Before)]
    pub mode: GapArg,
    #[arg(long, default_value_t = 3)]
    pub max_generation: u32,
}

pub fn lacunary(a: &LacunaryArgs, caps: Caps) -> Result<Outcome> {
    let xs = specs::rationals(&a.xs).context("--xs")?;
    let xs = xs[..caps.len(xs.len())].to_vec();
    let delta = specs::rational(&a.delta).context("--delta")?;
    let mode = match a.mode {
        GapArg::Before => GapMode::BeforeGaps,
        GapArg::After => GapMode::AfterGaps,
    };
    let r = lacunary_gap_check(&xs, &delta, mode, caps.generation(a.max_generation))?;
    let rows = r
        .entries
        .iter()
        .map(|e| vec![format_rational(&e.value), e.generation.to_string(), e.gap.map(|g| g.to_string()).unwrap_or_default()])
        .collect();
    Ok(Outcome::new(r.pass, to_value(&r)?).with_table(vec!["value", "generation", "gap"], rows))
}

// ---------------------------------------------------------------- hilbert

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct LemmaVerifyArgs {
    /// Instance JSON, inline or a file path.
    #[arg(long)]
    pub instance: String,
}

fn lemma_report(inst: &LemmaInstance) -> Result<Outcome> {
    let hyp = verify_hypotheses(inst)?;
    let mut result = json!({ "flavor": inst.flavor, "dimension": inst.dimension(), "length": inst.len(), "hypotheses": hyp });
    if !hyp.pass {
        return Ok(Outcome::new(false, result));
    }
    let bound = lemma_bound(inst)?;
    let split = split_sequence(inst)?;
    let pass = bound.holds && split.identity_residual < IDENTITY_TOL && split.parts_bounded;
    result["bound"] = to_value(&bound)?;
    result["split"] = to_value(&split)?;
    Ok(Outcome::new(pass, result))
}

pub fn lemma_verify(a: &LemmaVerifyArgs) -> Result<Outcome> {
    let inst = LemmaInstance::from_json(&specs::json(&a.instance).context("--instance")?)?;
    lemma_report(&inst)
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct LemmaRandomArgs {
    #[arg(long, value_enum, default_value_t = FlavorArg::Old)]
    pub flavor: FlavorArg,
    /// Ambient dimension.
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    /// Chain length J.
    #[arg(long, default_value_t = 4)]
    pub len: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Also write the generated instance to this file.
    #[arg(long)]
    pub save: Option<String>,
}

pub fn lemma_random(a: &LemmaRandomArgs, caps: Caps) -> Result<Outcome> {
    let inst = random_instance(a.flavor.into(), a.n, caps.len(a.len), a.seed)?;
    if let Some(path) = &a.save {
        std::fs::write(path, serde_json::to_string_pretty(&inst.to_json())?).with_context(|| format!("writing {path}"))?;
    }
    let mut out = lemma_report(&inst)?;
    out.result["seed"] = json!(a.seed);
    Ok(out)
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct SplitArgs {
    /// Instance JSON, inline or a file path; a seeded random instance otherwise.
    #[arg(long)]
    pub instance: Option<String>,
    #[arg(long, value_enum, default_value_t = FlavorArg::New)]
    pub flavor: FlavorArg,
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long, default_value_t = 4)]
    pub len: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

pub fn split(a: &SplitArgs, caps: Caps) -> Result<Outcome> {
    let inst = match &a.instance {
        Some(s) => LemmaInstance::from_json(&specs::json(s).context("--instance")?)?,
        None => random_instance(a.flavor.into(), a.n, caps.len(a.len), a.seed)?,
    };
    let hyp = verify_hypotheses(&inst)?;
    if !hyp.pass {
        return Ok(Outcome::new(false, json!({ "hypotheses": hyp })));
    }
    let s = split_sequence(&inst)?;
    let first_b = s.b.first().map(|z| z.norm()).unwrap_or(0.0);
    let pass = s.identity_residual < IDENTITY_TOL
        && s.parts_bounded
        && (inst.flavor == Flavor::OldLemma || first_b == 0.0);
    Ok(Outcome::new(pass, json!({ "flavor": inst.flavor, "hypotheses": hyp, "split": s, "firstB": first_b })))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TranslationArg {
    Interior,
    Exterior,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct TranslationArgs {
    /// Lattice points on a curve.
    #[arg(long, default_value = "parabola:0,1,2,3")]
    pub points: String,
    #[arg(long, value_enum, default_value_t = TranslationArg::Interior)]
    pub flavor: TranslationArg,
    /// Generation bound for the exterior sets.
    #[arg(long, default_value_t = 2)]
    pub max_generation: u32,
    /// `g` as `{"u,v": [re, im]}`, inline or a file; defaults to 1 on the allowed cells near the points.
    #[arg(long)]
    pub g: Option<String>,
    /// `h` in the same format; defaults to the unit mass at the origin.
    #[arg(long)]
    pub h: Option<String>,
}

pub fn lemma_translation(a: &TranslationArgs, caps: Caps) -> Result<Outcome> {
    let (seq, _) = specs::points(&a.points).context("--points")?;
    let seq = caps.points(seq)?;
    let xs = lattice(seq.points())?;
    let (flavor, sets) = match a.flavor {
        TranslationArg::Interior => (TranslationFlavor::Interior, interior_sets(&seq)?),
        TranslationArg::Exterior => {
            (TranslationFlavor::Exterior, exterior_sets(&seq, caps.generation(a.max_generation))?)
        }
    };
    let zero = forbidden_translates(&seq, flavor, &sets)?;
    let g: BTreeMap<Cell, Complex64> = match &a.g {
        Some(s) => specs::lattice_function(s).context("--g")?,
        None => {
            let (u0, u1) = (xs.iter().map(|c| c.0).min().unwrap_or(0), xs.iter().map(|c| c.0).max().unwrap_or(0));
            let (v0, v1) = (xs.iter().map(|c| c.1).min().unwrap_or(0), xs.iter().map(|c| c.1).max().unwrap_or(0));
            (u0 - 1..=u1 + 1)
                .flat_map(|u| (v0 - 1..=v1 + 1).map(move |v| (u, v)))
                .filter(|c| !zero.contains(c))
                .map(|c| (c, Complex64::new(1.0, 0.0)))
                .collect()
        }
    };
    let h: BTreeMap<Cell, Complex64> = match &a.h {
        Some(s) => specs::lattice_function(s).context("--h")?,
        None => [((0, 0), Complex64::new(1.0, 0.0))].into_iter().collect(),
    };
    let inst = translation_instance(&seq, flavor, &sets, &g, &h, None)?;
    let mut pass = inst.hypotheses.pass && inst.w_vanishes_where_required && inst.inner_product_residual < 1e-12;
    let mut result = json!({ "sequence": seq.points(), "sets": sets, "forbidden": zero, "instance": inst });
    if inst.hypotheses.pass {
        let bound = lemma_bound(&inst.instance)?;
        pass &= bound.holds;
        result["bound"] = to_value(&bound)?;
    }
    let delta_h = h.len() == 1 && h.get(&(0, 0)) == Some(&Complex64::new(1.0, 0.0));
    let real_g = g.values().all(|z| z.im == 0.0);
    if flavor == TranslationFlavor::Interior && delta_h && real_g {
        let exact: BTreeMap<Cell, Rational> = g
            .iter()
            .map(|(&c, z)| rational::from_f64(z.re).map(|r| (c, r)).ok_or_else(|| anyhow!("g({c:?}) is not finite")))
            .collect::<Result<_>>()?;
        let r = exact_delta_check(&seq, &sets, &exact)?;
        pass &= r.vanishes && r.holds;
        result["exactDelta"] = to_value(&r)?;
    }
    Ok(Outcome::new(pass, result))
}

// ---------------------------------------------------------------- torus

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct L1Args {
    /// Polynomial `{"n1,n2": [re, im]}`, inline or a file path.
    #[arg(long)]
    pub poly: String,
    #[arg(long, default_value_t = 256)]
    pub grid: usize,
}

pub fn l1(a: &L1Args, caps: Caps) -> Result<Outcome> {
    let f = specs::polynomial(&a.poly).context("--poly")?;
    let grid = caps.grid(a.grid);
    let q1 = l1_norm(&f, grid)?;
    let q2 = l2_norm_squared(&f, grid)?;
    let parseval_residual = (q2.value - f.coefficient_l2().powi(2)).abs();
    let bounded = f.coefficient_sup() <= q1.value + q1.error_estimate + 1e-12;
    Ok(Outcome::new(
        parseval_residual < 1e-9 && bounded,
        json!({
            "terms": f.len(),
            "l1": q1,
            "l2Squared": q2,
            "coefficientL2": f.coefficient_l2(),
            "parsevalResidual": parseval_residual,
            "coefficientSup": f.coefficient_sup(),
            "coefficientsBoundedByL1": bounded,
        }),
    ))
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct RatioArgs {
    #[arg(long)]
    pub poly: String,
    #[arg(long)]
    pub region: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Exterior)]
    pub mode: ModeArg,
    /// Restriction set `u,v;u,v`; defaults to the stored frequencies on the boundary.
    #[arg(long)]
    pub frequencies: Option<String>,
    #[arg(long, default_value_t = 1024)]
    pub grid: usize,
}

pub fn ratio(a: &RatioArgs, caps: Caps) -> Result<Outcome> {
    let f = specs::polynomial(&a.poly).context("--poly")?;
    let region = specs::region(&a.region).context("--region")?;
    let mode: VanishingMode = a.mode.into();
    let xs: Vec<Cell> = match &a.frequencies {
        Some(s) => specs::cells(s).context("--frequencies")?,
        None => {
            let mut v = Vec::new();
            for &n in f.coefficients().keys() {
                if classify_frequency(&region, n)? == RegionClass::Boundary {
                    v.push(n);
                }
            }
            v
        }
    };
    let cert = vanishing_certificate(&f, &region, mode, None)?;
    if let Certificate::Violation { .. } = cert {
        return Ok(Outcome::new(false, json!({ "region": region, "mode": mode, "certificate": cert })));
    }
    let l1 = l1_norm(&f, caps.grid(a.grid))?;
    let restriction = restriction_l2(&f, &xs);
    let constant = restriction_constant(&region, mode);
    let ratio = if l1.value > 0.0 { restriction / l1.value } else { 0.0 };
    let error_bar = if l1.value > l1.error_estimate { restriction / (l1.value - l1.error_estimate) - ratio } else { f64::INFINITY };
    let exceeds = ratio - error_bar > constant;
    Ok(Outcome::new(
        !exceeds,
        json!({
            "region": region,
            "mode": mode,
            "certificate": cert,
            "frequencies": xs,
            "ratio": ratio,
            "restriction": restriction,
            "l1": l1,
            "errorBar": error_bar,
            "constant": constant,
            "exceedsConstant": exceeds,
        }),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    Random,
    CoordinateDescent,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct RatioSearchArgs {
    /// A circle region; its boundary lattice points are the support.
    #[arg(long, default_value = "circle(5)")]
    pub region: String,
    /// Explicit support `u,v;u,v`, required for curve regions.
    #[arg(long)]
    pub frequencies: Option<String>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exterior)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = MethodArg::Random)]
    pub method: MethodArg,
    #[arg(long, default_value_t = 1024)]
    pub grid: usize,
}

pub fn ratio_search_cmd(a: &RatioSearchArgs, caps: Caps) -> Result<Outcome> {
    let region = specs::region(&a.region).context("--region")?;
    let xs: Vec<Cell> = match (&a.frequencies, &region) {
        (Some(s), _) => specs::cells(s).context("--frequencies")?,
        (None, Region::Body(b)) => lattice(&boundary_lattice_points(b)?)?,
        (None, Region::Curve(_)) => bail!("--frequencies is required for curve regions"),
    };
    let method = match a.method {
        MethodArg::Random => SearchMethod::Random,
        MethodArg::CoordinateDescent => SearchMethod::CoordinateDescent,
    };
    let mode: VanishingMode = a.mode.into();
    let r = ratio_search(&xs, caps.trials(a.trials), a.seed, method, caps.grid(a.grid))?;
    let constant = restriction_constant(&region, mode);
    let restriction = r.coefficients.coefficient_l2();
    let error_bar = if r.l1.value > r.l1.error_estimate {
        restriction / (r.l1.value - r.l1.error_estimate) - r.ratio
    } else {
        f64::INFINITY
    };
    let limit = constant + 1e-2;
    let pass = r.ratio + error_bar <= limit;
    let row = vec![
        to_value(&r.method)?.as_str().unwrap_or_default().to_string(),
        r.seed.to_string(),
        xs.len().to_string(),
        r.ratio.to_string(),
        error_bar.to_string(),
        r.evaluations.to_string(),
    ];
    Ok(Outcome::new(
        pass,
        json!({ "region": region, "support": xs, "search": r, "errorBar": error_bar, "constant": constant, "limit": limit }),
    )
    .with_table(vec!["method", "seed", "support", "ratio", "error_bar", "evaluations"], vec![row]))
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct ApBlowupArgs {
    /// Progression lengths.
    #[arg(long = "L", default_value = "4,8,16,32,64")]
    #[serde(rename = "L")]
    pub lengths: String,
    #[arg(long, default_value_t = 4096)]
    pub grid: usize,
}

pub fn ap_blowup_cmd(a: &ApBlowupArgs, caps: Caps) -> Result<Outcome> {
    let lengths: Vec<usize> = a
        .lengths
        .split(',')
        .map(|s| s.trim().parse::<usize>().with_context(|| format!("--L: `{s}` is not a length")))
        .collect::<Result<_>>()?;
    let grid = caps.grid(a.grid);
    let reports = lengths.iter().map(|&l| ap_blowup(l, grid)).collect::<Result<Vec<_>, _>>()?;
    let increasing = reports.windows(2).all(|w| w[1].ratio > w[0].ratio);
    let rows = reports
        .iter()
        .map(|r| vec![r.length.to_string(), r.ratio.to_string(), r.l1.value.to_string(), r.ratio_error.to_string()])
        .collect();
    let threshold = 2.0 * 2f64.sqrt();
    let last = reports.last().map(|r| json!({ "length": r.length, "ratio": r.ratio, "exceeds": r.ratio - r.ratio_error > threshold }));
    Ok(Outcome::new(
        increasing,
        json!({ "grid": grid, "rows": reports, "strictlyIncreasing": increasing, "comparison": threshold, "largest": last }),
    )
    .with_table(vec!["L", "ratio", "l1", "ratio_error"], rows))
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct BumpArgs {
    #[arg(long, default_value = "0,0")]
    pub origin: String,
    #[arg(long, default_value = "1,0")]
    pub edge1: String,
    #[arg(long, default_value = "0,1")]
    pub edge2: String,
    /// Scale m.
    #[arg(long, default_value_t = 64)]
    pub scale: i64,
}

pub fn bump(a: &BumpArgs) -> Result<Outcome> {
    let b = Parallelogram {
        origin: specs::point(&a.origin).context("--origin")?,
        edges: [specs::point(&a.edge1).context("--edge1")?, specs::point(&a.edge2).context("--edge2")?],
    };
    let (f, r) = fejer_bump(&b, a.scale)?;
    Ok(Outcome::new(r.pass, json!({ "parallelogram": b, "terms": f.len(), "report": r })))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessArg {
    G,
    H,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct DualArgs {
    /// `{polynomial, targetValues, constant}`, inline or a file path.
    #[arg(long)]
    pub witness: String,
    /// Lattice point sequence X.
    #[arg(long)]
    pub points: String,
    #[arg(long, value_enum, default_value_t = WitnessArg::G)]
    pub mode: WitnessArg,
    /// Alternating sums allowed in the support (G mode).
    #[arg(long)]
    pub max_terms: Option<usize>,
    /// Descendants allowed in the support (H mode).
    #[arg(long, default_value_t = 3)]
    pub max_generation: u32,
    #[arg(long, default_value_t = 1024)]
    pub grid: usize,
}

pub fn dual_verify(a: &DualArgs, caps: Caps) -> Result<Outcome> {
    let w: DualWitness = serde_json::from_value(specs::json(&a.witness).context("--witness")?).context("--witness")?;
    let (seq, _) = specs::points(&a.points).context("--points")?;
    let seq = caps.points(seq)?;
    let xs = lattice(seq.points())?;
    let (mode, generated) = match a.mode {
        WitnessArg::G => {
            let terms = a.max_terms.unwrap_or_else(|| odd_terms(seq.len()));
            (WitnessMode::Gtype, if terms >= 3 { enumerate_alt(&seq, terms)? } else { vec![] })
        }
        WitnessArg::H => (WitnessMode::Htype, enumerate_schur(&seq, caps.generation(a.max_generation))),
    };
    let contagion: BTreeSet<Cell> = generated.iter().filter_map(|g| g.point.lattice()).collect();
    let r = verify_dual_witness(&w, &xs, &contagion, mode, caps.grid(a.grid))?;
    Ok(Outcome::new(r.pass, json!({ "sequence": xs, "contagionSize": contagion.len(), "report": r })))
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct WeakSignalArgs {
    #[arg(long)]
    pub poly: String,
    #[arg(long)]
    pub region: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Exterior)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 1024)]
    pub grid: usize,
}

pub fn weak_signal(a: &WeakSignalArgs, caps: Caps) -> Result<Outcome> {
    let f = specs::polynomial(&a.poly).context("--poly")?;
    let region = specs::region(&a.region).context("--region")?;
    let r = weak_signal_check(&f, &region, a.mode.into(), caps.grid(a.grid))?;
    Ok(Outcome::new(r.pass, json!({ "region": region, "report": r })))
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct DyadicArgs {
    /// Block weights, one per j in the range.
    #[arg(long)]
    pub weights: String,
    #[arg(long)]
    pub j_min: i64,
    #[arg(long)]
    pub j_max: i64,
    #[arg(long, default_value = "1")]
    pub alpha: String,
    #[arg(long, default_value = "1")]
    pub k: String,
    #[arg(long, default_value_t = 64)]
    pub scale: i64,
}

pub fn dyadic_probe(a: &DyadicArgs) -> Result<Outcome> {
    let weights: Vec<f64> = a
        .weights
        .split(',')
        .map(|s| s.trim().parse::<f64>().with_context(|| format!("--weights: `{s}` is not a number")))
        .collect::<Result<_>>()?;
    let alpha = specs::rational(&a.alpha).context("--alpha")?;
    let k = specs::rational(&a.k).context("--k")?;
    let r = dyadic_mass_probe(&weights, (a.j_min, a.j_max), &alpha, &k, a.scale)?;
    let pass = r.bump.as_ref().is_none_or(|b| b.pass) && r.blocks.iter().all(|b| b.segment_centered && b.box_in_region);
    let rows = r
        .blocks
        .iter()
        .map(|b| vec![b.j.to_string(), b.weight.to_string(), b.lower_bound.to_string()])
        .collect();
    Ok(Outcome::new(pass, to_value(&r)?).with_table(vec!["j", "weight", "lower_bound"], rows))
}

// ---------------------------------------------------------------- suite

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct SuiteArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Run only these criteria, e.g. `1,4`.
    #[arg(long)]
    pub only: Option<String>,
}

pub fn suite(a: &SuiteArgs, caps: Caps) -> Result<Outcome> {
    let ids: Vec<u8> = match &a.only {
        Some(s) => s
            .split(',')
            .map(|t| {
                let id: u8 = t.trim().parse().with_context(|| format!("--only: `{t}` is not a criterion number"))?;
                if CRITERIA.iter().any(|c| c.0 == id) { Ok(id) } else { Err(anyhow!("--only: no criterion {id}")) }
            })
            .collect::<Result<_>>()?,
        None => CRITERIA.iter().map(|c| c.0).collect(),
    };
    let opts = SuiteOptions { quick: caps.quick, seed: a.seed };
    let mut criteria = Vec::new();
    let mut seconds = Vec::new();
    let mut rows = Vec::new();
    for id in ids {
        let Some(o) = run_criterion(id, &opts) else { continue };
        rows.push(vec![o.id.to_string(), o.name.to_string(), o.pass.to_string()]);
        seconds.push(json!({ "id": o.id, "seconds": o.seconds, "budgetSeconds": o.budget_seconds }));
        criteria.push(json!({ "id": o.id, "name": o.name, "pass": o.pass, "budgetSeconds": o.budget_seconds, "detail": o.detail }));
    }
    let pass = criteria.iter().all(|c| c["pass"] == json!(true));
    let mut out = Outcome::new(pass, json!({ "quick": caps.quick, "seed": a.seed, "criteria": criteria }))
        .with_table(vec!["id", "name", "pass"], rows);
    out.timing = Some(json!({ "criteria": seconds }));
    Ok(out)
}

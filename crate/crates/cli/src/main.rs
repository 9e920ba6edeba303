//! `restrict`: batch runner for the restriction-core checks.
//!
//! Every run prints one JSON report (or a CSV projection) and exits with
//! 0 when all checks pass, 1 when a check fails and 2 on usage or config errors.

mod commands;
mod specs;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use commands::*;

#[derive(Debug, Parser)]
#[command(name = "restrict", version, about = "Run restriction-estimate checks and emit JSON reports")]
struct Cli {
    /// JSON scenario file: `{"scenario": "<subcommand>", "<flag>": value, ...}`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output format on stdout [default: json].
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Also write `<scenario>.json` (and `.csv` where available) here.
    #[arg(long, global = true, env = "RESTRICT_OUTPUT_DIR")]
    out_dir: Option<PathBuf>,

    /// Cap sizes: J <= 4, generation <= 3, grid <= 1024, trials <= 50.
    #[arg(long, global = true)]
    quick: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify points against a region.
    Classify(ClassifyArgs),
    /// Lattice points on a circle of squared radius N.
    LatticeCircle(LatticeCircleArgs),
    /// Alternating sums of a point sequence.
    GenAlt(GenAltArgs),
    /// Descendants of a point sequence.
    GenSchur(GenSchurArgs),
    /// Signed combinations meeting the partial-sum conditions.
    GenS(GenSArgs),
    /// Check that alternating sums and descendants land on the right sides.
    CheckInclusions(InclusionArgs),
    /// Cross-check descendants against coefficient vectors.
    EpsilonEquiv(EpsilonArgs),
    /// Separation threshold for a shift k, optionally tested on points.
    Separation(SeparationArgs),
    /// Gap membership for lacunary sequences.
    Lacunary(LacunaryArgs),
    /// Verify a Hilbert-space lemma instance.
    LemmaVerify(LemmaVerifyArgs),
    /// Generate and verify a seeded random lemma instance.
    LemmaRandom(LemmaRandomArgs),
    /// Lemma instance built from lattice translations.
    LemmaTranslation(TranslationArgs),
    /// Two-part splitting of the inner products.
    Split(SplitArgs),
    /// L1 norm of a trigonometric polynomial.
    L1(L1Args),
    /// Restriction ratio of a polynomial.
    Ratio(RatioArgs),
    /// Search for large restriction ratios.
    RatioSearch(RatioSearchArgs),
    /// Ratios for Dirichlet kernels of arithmetic progressions.
    ApBlowup(ApBlowupArgs),
    /// Fejer bump on a parallelogram.
    Bump(BumpArgs),
    /// Verify a dual witness polynomial.
    DualVerify(DualArgs),
    /// Boundary mass against L1 norm plus forbidden mass.
    WeakSignal(WeakSignalArgs),
    /// Bump lower bounds over dyadic blocks of a hyperbola.
    DyadicProbe(DyadicArgs),
    /// Run the acceptance battery.
    Suite(SuiteArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify(_) => "classify",
            Command::LatticeCircle(_) => "lattice-circle",
            Command::GenAlt(_) => "gen-alt",
            Command::GenSchur(_) => "gen-schur",
            Command::GenS(_) => "gen-s",
            Command::CheckInclusions(_) => "check-inclusions",
            Command::EpsilonEquiv(_) => "epsilon-equiv",
            Command::Separation(_) => "separation",
            Command::Lacunary(_) => "lacunary",
            Command::LemmaVerify(_) => "lemma-verify",
            Command::LemmaRandom(_) => "lemma-random",
            Command::LemmaTranslation(_) => "lemma-translation",
            Command::Split(_) => "split",
            Command::L1(_) => "l1",
            Command::Ratio(_) => "ratio",
            Command::RatioSearch(_) => "ratio-search",
            Command::ApBlowup(_) => "ap-blowup",
            Command::Bump(_) => "bump",
            Command::DualVerify(_) => "dual-verify",
            Command::WeakSignal(_) => "weak-signal",
            Command::DyadicProbe(_) => "dyadic-probe",
            Command::Suite(_) => "suite",
        }
    }

    fn echo(&self) -> Result<Value> {
        let v = match self {
            Command::Classify(a) => serde_json::to_value(a),
            Command::LatticeCircle(a) => serde_json::to_value(a),
            Command::GenAlt(a) => serde_json::to_value(a),
            Command::GenSchur(a) => serde_json::to_value(a),
            Command::GenS(a) => serde_json::to_value(a),
            Command::CheckInclusions(a) => serde_json::to_value(a),
            Command::EpsilonEquiv(a) => serde_json::to_value(a),
            Command::Separation(a) => serde_json::to_value(a),
            Command::Lacunary(a) => serde_json::to_value(a),
            Command::LemmaVerify(a) => serde_json::to_value(a),
            Command::LemmaRandom(a) => serde_json::to_value(a),
            Command::LemmaTranslation(a) => serde_json::to_value(a),
            Command::Split(a) => serde_json::to_value(a),
            Command::L1(a) => serde_json::to_value(a),
            Command::Ratio(a) => serde_json::to_value(a),
            Command::RatioSearch(a) => serde_json::to_value(a),
            Command::ApBlowup(a) => serde_json::to_value(a),
            Command::Bump(a) => serde_json::to_value(a),
            Command::DualVerify(a) => serde_json::to_value(a),
            Command::WeakSignal(a) => serde_json::to_value(a),
            Command::DyadicProbe(a) => serde_json::to_value(a),
            Command::Suite(a) => serde_json::to_value(a),
        };
        Ok(v?)
    }

    fn run(&self, caps: Caps) -> Result<Outcome> {
        match self {
            Command::Classify(a) => classify(a),
            Command::LatticeCircle(a) => lattice_circle(a),
            Command::GenAlt(a) => gen_alt(a, caps),
            Command::GenSchur(a) => gen_schur(a, caps),
            Command::GenS(a) => gen_s(a, caps),
            Command::CheckInclusions(a) => check_inclusions(a, caps),
            Command::EpsilonEquiv(a) => epsilon_equiv(a, caps),
            Command::Separation(a) => separation(a, caps),
            Command::Lacunary(a) => lacunary(a, caps),
            Command::LemmaVerify(a) => lemma_verify(a),
            Command::LemmaRandom(a) => lemma_random(a, caps),
            Command::LemmaTranslation(a) => lemma_translation(a, caps),
            Command::Split(a) => split(a, caps),
            Command::L1(a) => l1(a, caps),
            Command::Ratio(a) => ratio(a, caps),
            Command::RatioSearch(a) => ratio_search_cmd(a, caps),
            Command::ApBlowup(a) => ap_blowup_cmd(a, caps),
            Command::Bump(a) => bump(a),
            Command::DualVerify(a) => dual_verify(a, caps),
            Command::WeakSignal(a) => weak_signal(a, caps),
            Command::DyadicProbe(a) => dyadic_probe(a),
            Command::Suite(a) => suite(a, caps),
        }
    }
}

/// `maxTerms` and `max-terms` both name `--max-terms`; one-letter keys are kept.
fn flag_name(key: &str) -> String {
    if key.chars().count() == 1 {
        return key.to_string();
    }
    let mut out = String::new();
    for c in key.chars() {
        if c.is_ascii_uppercase() {
            out.push('-');
            out.push(c.to_ascii_lowercase());
        } else {
            out.push(c);
        }
    }
    out
}

/// Turns a scenario file into the argument list it stands for.
fn config_argv(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let v: Value = serde_json::from_str(&text).with_context(|| format!("config {} is not valid JSON", path.display()))?;
    let Value::Object(map) = v else {
        return Err(anyhow!("config {}: top level must be an object", path.display()));
    };
    let scenario = match map.get("scenario") {
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(anyhow!("config field `scenario` must be a string")),
        None => return Err(anyhow!("config field `scenario` is missing")),
    };
    let mut argv = vec!["restrict".to_string(), scenario];
    for (key, value) in &map {
        if key == "scenario" {
            continue;
        }
        let flag = format!("--{}", flag_name(key));
        match value {
            Value::Null | Value::Bool(false) => {}
            Value::Bool(true) => argv.push(flag),
            Value::String(s) => argv.extend([flag, s.clone()]),
            Value::Number(n) => argv.extend([flag, n.to_string()]),
            Value::Array(items) => {
                let parts: Vec<String> = items
                    .iter()
                    .map(|i| match i {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    })
                    .collect();
                argv.extend([flag, parts.join(",")]);
            }
            Value::Object(_) => argv.extend([flag, value.to_string()]),
        }
    }
    Ok(argv)
}

fn csv_text(table: &Table) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.headers)?;
    for row in &table.rows {
        w.write_record(row)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| anyhow!("{e}"))?)?)
}

struct Rendered {
    json: String,
    csv: Option<String>,
    pass: bool,
}

fn execute(cli: &Cli, command: &Command) -> Result<Rendered> {
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let clock = Instant::now();
    let caps = Caps { quick: cli.quick };
    let outcome = command.run(caps)?;

    let mut config = Map::new();
    config.insert("scenario".into(), json!(command.name()));
    config.insert("format".into(), serde_json::to_value(cli.format.unwrap_or(Format::Json))?);
    config.insert("quick".into(), json!(cli.quick));
    if let Value::Object(args) = command.echo()? {
        config.extend(args);
    }
    let mut timestamp = json!({ "startedAtUnix": started, "wallSeconds": clock.elapsed().as_secs_f64() });
    if let Some(t) = outcome.timing {
        timestamp["detail"] = t;
    }
    let report = json!({
        "tool": "restrict",
        "version": env!("CARGO_PKG_VERSION"),
        "scenario": command.name(),
        "config": config,
        "pass": outcome.pass,
        "result": outcome.result,
        "timestamp": timestamp,
    });
    let csv = outcome.table.as_ref().map(csv_text).transpose()?;
    Ok(Rendered { json: serde_json::to_string_pretty(&report)? + "\n", csv, pass: outcome.pass })
}

fn write_outputs(dir: &Path, scenario: &str, r: &Rendered) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let json_path = dir.join(format!("{scenario}.json"));
    std::fs::write(&json_path, &r.json).with_context(|| format!("writing {}", json_path.display()))?;
    if let Some(csv) = &r.csv {
        let csv_path = dir.join(format!("{scenario}.csv"));
        std::fs::write(&csv_path, csv).with_context(|| format!("writing {}", csv_path.display()))?;
    }
    Ok(())
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let mut cli = Cli::parse();
    if let Some(path) = cli.config.clone() {
        if cli.command.is_some() {
            return usage_error("--config cannot be combined with a subcommand");
        }
        let argv = match config_argv(&path) {
            Ok(a) => a,
            Err(e) => return usage_error(format!("{e:#}")),
        };
        let parsed = match Cli::try_parse_from(&argv) {
            Ok(p) => p,
            Err(e) => return usage_error(format!("config {}: {}", path.display(), e.to_string().trim_start_matches("error: ").trim_end())),
        };
        cli.command = parsed.command;
        cli.quick |= parsed.quick;
        cli.format = cli.format.or(parsed.format);
    }
    let Some(command) = cli.command.as_ref() else {
        return usage_error("no subcommand given; try --help");
    };
    let rendered = match execute(&cli, command) {
        Ok(r) => r,
        Err(e) => return usage_error(format!("{e:#}")),
    };
    if let Some(dir) = &cli.out_dir {
        if let Err(e) = write_outputs(dir, command.name(), &rendered) {
            return usage_error(format!("{e:#}"));
        }
    }
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => print!("{}", rendered.json),
        Format::Csv => match &rendered.csv {
            Some(c) => print!("{c}"),
            None => return usage_error(format!("{} has no CSV projection; use --format json", command.name())),
        },
    }
    if rendered.pass { ExitCode::SUCCESS } else { ExitCode::from(1) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_names() {
        assert_eq!(flag_name("maxTerms"), "max-terms");
        assert_eq!(flag_name("max-terms"), "max-terms");
        assert_eq!(flag_name("L"), "L");
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}

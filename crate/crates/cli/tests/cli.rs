use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn restrict(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_restrict"))
        .args(args)
        .env_remove("RESTRICT_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("restrict-test-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn without_timestamp(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timestamp");
    v
}

#[test]
fn gen_alt_lists_the_alternating_sum() {
    let out = restrict(&["gen-alt", "--points", "parabola:0,1,2", "--max-terms", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["scenario"], "gen-alt");
    assert_eq!(r["pass"], true);
    let points: Vec<&Value> = r["result"]["points"].as_array().unwrap().iter().map(|p| &p["point"]).collect();
    assert!(points.contains(&&serde_json::json!(["1", "3"])));
}

#[test]
fn ap_blowup_csv_has_increasing_ratios() {
    let out = restrict(&["ap-blowup", "--L", "4,16,64", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rows.headers().unwrap().iter().take(2).collect::<Vec<_>>(), ["L", "ratio"]);
    let pairs: Vec<(usize, f64)> = rows
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].parse().unwrap(), r[1].parse().unwrap())
        })
        .collect();
    assert_eq!(pairs.iter().map(|p| p.0).collect::<Vec<_>>(), [4, 16, 64]);
    assert!(pairs.windows(2).all(|w| w[1].1 > w[0].1), "{pairs:?}");
}

#[test]
fn quick_suite_passes() {
    let out = restrict(&["suite", "--quick", "--seed", "1"]);
    let r = report(&out);
    assert_eq!(out.status.code(), Some(0), "{r:#}");
    let criteria = r["result"]["criteria"].as_array().unwrap();
    assert_eq!(criteria.len(), 8);
    assert!(criteria.iter().all(|c| c["pass"] == true));
}

#[test]
fn reports_are_reproducible_apart_from_the_timestamp() {
    let args = ["ratio-search", "--region", "circle(25)", "--trials", "20", "--seed", "7", "--grid", "256"];
    let a = report(&restrict(&args));
    let b = report(&restrict(&args));
    assert!(a.get("timestamp").is_some());
    assert_eq!(
        serde_json::to_string(&without_timestamp(a)).unwrap(),
        serde_json::to_string(&without_timestamp(b)).unwrap()
    );
}

#[test]
fn failed_checks_exit_with_one_and_carry_a_witness() {
    let out = restrict(&["separation", "--k", "2", "--us", "0,1/2"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["pass"], false);
    let check = &r["result"]["shiftedInclusions"]["descendants"]["check"];
    assert_eq!(check["status"], "witness");
    assert_eq!(check["witness"]["point"], serde_json::json!(["-1/2", "-1/4"]));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(restrict(&["gen-alt", "--bogus", "1"]).status.code(), Some(2));
    assert_eq!(restrict(&["gen-alt", "--points", "parabola:1,0"]).status.code(), Some(2));
    assert_eq!(restrict(&["ratio", "--poly", "{not json", "--region", "circle(5)"]).status.code(), Some(2));
    assert_eq!(restrict(&[]).status.code(), Some(2));
}

#[test]
fn echoed_config_runs_the_same_scenario() {
    let dir = scratch("config");
    let first = report(&restrict(&["gen-schur", "--points", "parabola:0,1,2", "--max-generation", "2"]));
    let path = dir.join("scenario.json");
    std::fs::write(&path, serde_json::to_string(&first["config"]).unwrap()).unwrap();
    let out = restrict(&["--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(without_timestamp(report(&out)), without_timestamp(first));

    std::fs::write(&path, r#"{"scenario": "gen-schur", "points": "parabola:0,1", "maxGeneration": 1}"#).unwrap();
    let camel = report(&restrict(&["--config", path.to_str().unwrap()]));
    assert_eq!(camel["config"]["max-generation"], 1);
}

#[test]
fn config_errors_name_the_field() {
    let dir = scratch("bad-config");
    let path = dir.join("bad.json");
    let run = |text: &str| {
        std::fs::write(&path, text).unwrap();
        let out = restrict(&["--config", path.to_str().unwrap()]);
        (out.status.code(), String::from_utf8(out.stderr).unwrap())
    };
    let (code, err) = run(r#"{"scenario": "gen-alt", "points": "parabola:0,1,2", "maxTerms": "three"}"#);
    assert_eq!(code, Some(2));
    assert!(err.contains("--max-terms"), "{err}");
    let (code, err) = run(r#"{"scenario": "gen-alt", "points": "parabola:0,1,2", "colour": 1}"#);
    assert_eq!(code, Some(2));
    assert!(err.contains("--colour"), "{err}");
    let (code, err) = run(r#"{"points": "parabola:0,1,2"}"#);
    assert_eq!(code, Some(2));
    assert!(err.contains("scenario"), "{err}");
}

#[test]
fn output_directory_comes_from_the_environment() {
    let dir = scratch("env-out");
    let out = Command::new(env!("CARGO_BIN_EXE_restrict"))
        .args(["ap-blowup", "--L", "4,8", "--grid", "512"])
        .env("RESTRICT_OUTPUT_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("ap-blowup.json")).unwrap()).unwrap();
    assert_eq!(written, report(&out));
    assert!(std::fs::read_to_string(dir.join("ap-blowup.csv")).unwrap().starts_with("L,ratio"));
}

#[test]
fn lemma_instances_round_trip_through_files() {
    let dir = scratch("lemma");
    let path = dir.join("instance.json");
    let p = path.to_str().unwrap();
    let generated = report(&restrict(&["lemma-random", "--flavor", "new", "--n", "9", "--len", "4", "--seed", "5", "--save", p]));
    assert_eq!(generated["pass"], true);
    let verified = report(&restrict(&["lemma-verify", "--instance", p]));
    assert_eq!(verified["pass"], true);
    assert_eq!(verified["result"]["bound"], generated["result"]["bound"]);
}

#[test]
fn every_scenario_produces_a_report() {
    let cases: &[&[&str]] = &[
        &["classify", "--region", "circle(25)", "--points", "3,4;0,0"],
        &["lattice-circle", "--n", "65"],
        &["gen-s", "--points", "parabola:0,1,2"],
        &["check-inclusions", "--points", "parabola:0,1,3,7"],
        &["check-inclusions", "--points", "circle(65):arc"],
        &["epsilon-equiv", "--points", "parabola:0,1,3"],
        &["lacunary", "--xs", "1,4,16", "--delta", "1"],
        &["split"],
        &["lemma-translation"],
        &["l1", "--poly", r#"{"0,0": 1, "1,2": [0, 1]}"#],
        &["ratio", "--poly", r#"{"3,4": 1, "-4,3": [0, 1]}"#, "--region", "circle(25)"],
        &["bump", "--edge2", "1,1", "--scale", "16"],
        &["weak-signal", "--poly", r#"{"3,4": 1, "1,1": 0.5}"#, "--region", "circle(25)"],
        &["dyadic-probe", "--weights", "1,1", "--j-min", "1", "--j-max", "2", "--scale", "16"],
        &[
            "dual-verify",
            "--witness",
            r#"{"polynomial": {"0,0": 1}, "targetValues": {"0,0": 1}, "constant": 1}"#,
            "--points",
            "pts:(0,0);(1,1);(2,4)",
        ],
    ];
    for args in cases {
        let out = restrict(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let r = report(&out);
        assert_eq!(r["scenario"], args[0]);
        assert_eq!(r["tool"], "restrict");
    }
}

//! End-to-end runs of the `staircase` binary checking exit codes and output formats.

use std::path::Path;
use std::process::{Command, Output};

const COARSE: &str = "\
# coarse staircase for quick runs
samples = 4
staircase.quad.nodes = 8
staircase.tail.nodes = 16
staircase.line.nodes_per_unit = 1
staircase.line.min_nodes = 4
staircase.table_nodes = 12
";

fn staircase(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_staircase")).args(args).current_dir(dir).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn zero_samples_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "zero.cfg", "samples = 0\n");
    let out = staircase(&["primitive", "or_cup_or", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = staircase(&["verify", "group", "--samples", "0"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_names_and_bad_threads_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(staircase(&["verify", "nonsense"], dir.path()).status.code(), Some(2));
    assert_eq!(staircase(&["primitive", "or"], dir.path()).status.code(), Some(2));
    assert_eq!(staircase(&["convergence", "nothing"], dir.path()).status.code(), Some(2));
    let cfg = write(dir.path(), "bad.cfg", "unknown.key = 3\n");
    assert_eq!(staircase(&["verify", "group", "--config", &cfg], dir.path()).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_staircase"))
        .args(["verify", "group", "--samples", "5"])
        .env("STAIRCASE_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn commutators_pass_at_the_coarse_step() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "h.cfg", "fd.h = 1e-3\nsamples = 100\n");
    let out_path = dir.path().join("report.json");
    let out = staircase(&["verify", "commutators", "--config", &cfg, "--out", out_path.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out_path);
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["command"], "verify commutators");
    assert_eq!(doc["config_echo"]["fd.h"], "1e-3");
    assert_eq!(doc["reports"].as_array().unwrap().len(), 4);
}

#[test]
fn contraction_suite_reports_the_identity() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let out = staircase(&["verify", "contraction", "--samples", "100", "--out", out_path.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out_path);
    let names: Vec<&str> = doc["reports"].as_array().unwrap().iter().map(|r| r["identity_name"].as_str().unwrap()).collect();
    assert!(names.contains(&"contraction_identity_smooth"));
    assert_eq!(doc["config_echo"]["quad.nodes"], "256");
}

#[test]
fn absurd_step_fails_verify_all() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "absurd.cfg", &format!("{COARSE}fd.h = 0.5\n"));
    let out_path = dir.path().join("report.json");
    let out = staircase(&["verify", "all", "--config", &cfg, "--out", out_path.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out_path);
    assert!(doc["reports"].as_array().unwrap().iter().any(|r| r["sup_residual"].as_f64() > r["budget"].as_f64()));
}

#[test]
fn identical_runs_give_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "coarse.cfg", COARSE);
    let mut outputs = Vec::new();
    for (i, threads) in ["1", "2"].iter().enumerate() {
        let path = dir.path().join(format!("run{i}.json"));
        let out = Command::new(env!("CARGO_BIN_EXE_staircase"))
            .args(["primitive", "or_cup_or", "--config", &cfg, "--seed", "5", "--out", path.to_str().unwrap()])
            .env("STAIRCASE_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.code().is_some_and(|c| c <= 1), "{}", String::from_utf8_lossy(&out.stderr));
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn primitive_csv_has_one_row_per_sample() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "coarse.cfg", COARSE);
    let csv_path = dir.path().join("p.csv");
    let out_path = dir.path().join("report.json");
    let out = staircase(
        &[
            "primitive",
            "or_cup_or",
            "--config",
            &cfg,
            "--csv",
            csv_path.to_str().unwrap(),
            "--out",
            out_path.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["z0", "z1", "z2", "z3", "z4", "p", "residual"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 4);
    for row in rows {
        assert!(row[6].parse::<f64>().unwrap() < 0.05);
    }
    let doc = json(&out_path);
    assert_eq!(doc["command"], "primitive or_cup_or");
    assert_eq!(doc["config_echo"]["staircase.quad.nodes"], "8");
}

#[test]
fn convergence_ladder_is_written_as_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "ladder.cfg", "samples = 20\nconvergence.nodes = 64, 128, 256\n");
    let out_path = dir.path().join("ladder.csv");
    let out = staircase(&["convergence", "contraction", "--config", &cfg, "--out", out_path.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut reader = csv::Reader::from_path(&out_path).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["circle_nodes", "sup_residual", "mean_residual", "order", "identity_sup"]);
    let sups: Vec<f64> = reader.records().map(|r| r.unwrap()[1].parse().unwrap()).collect();
    assert_eq!(sups.len(), 3);
    assert!(sups.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn ili_or_reports_the_value_at_one() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("ili.json");
    let out = staircase(&["ili-or", "--samples", "8", "--out", out_path.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out_path);
    let report = &doc["reports"][0];
    assert_eq!(report["identity_name"], "ili_or_closed_form");
    let im = report["details"]["value_at_zero_im"].as_f64().unwrap();
    assert!((im - 1.0 / std::f64::consts::PI).abs() < 5e-3);
}

use std::path::PathBuf;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_cogmimo");

fn scenario_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cogmimo-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn small_scenario(name: &str) -> PathBuf {
    scenario_file(
        name,
        "n_rx = 4\nm1 = 2\nm2 = 1\ndistances_km = 0.05, 0.08, 0.1\nalpha = 0.9\ntrials = 3000\nseed = 5\n",
    )
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

#[test]
fn plan_defaults_cover_grid() {
    let out = run(&["plan"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "n,alpha,m2_star,lambda,objective,iterations");
    assert_eq!(lines.count(), 18);
}

#[test]
fn plan_json_mirror() {
    let out = run(&["plan", "--n-list", "32", "--alpha-list", "0.8", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["columns"][2], "m2_star");
    assert_eq!(v["rows"][0][2].as_f64().unwrap(), 13.0);
}

#[test]
fn coherence_spot_value() {
    let out = run(&["coherence", "--m-list", "10", "--n-list", "128", "--alpha-list", "0.9999"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[4], "12746");
}

#[test]
fn analyze_rows_match_grid_and_rerun_identically() {
    let cfg = small_scenario("analyze.cfg");
    let args = ["analyze", "--config", cfg.to_str().unwrap(), "--gamma-min-db", "-5", "--gamma-max-db", "15", "--points", "9"];
    let first = run(&args);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    assert_eq!(String::from_utf8_lossy(&first.stdout).lines().count(), 10);
    assert_eq!(first.stdout, run(&args).stdout);
}

#[test]
fn simulate_is_byte_identical() {
    let cfg = small_scenario("simulate.cfg");
    let args = ["simulate", "--config", cfg.to_str().unwrap(), "--points", "5"];
    let a = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, run(&args).stdout);
    assert!(String::from_utf8_lossy(&a.stdout).lines().next().unwrap().ends_with("trial_count"));
}

#[test]
fn validate_exit_status_follows_tolerance() {
    let cfg = small_scenario("validate.cfg");
    let path = cfg.to_str().unwrap();
    assert_eq!(run(&["validate", "--config", path, "--tolerance", "1.0"]).status.code(), Some(0));
    assert_eq!(run(&["validate", "--config", path, "--tolerance", "0.0"]).status.code(), Some(1));
}

#[test]
fn output_file_written() {
    let cfg = small_scenario("out.cfg");
    let target = cfg.with_extension("csv");
    let out = run(&["analyze", "--config", cfg.to_str().unwrap(), "--points", "3", "--out", target.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(target).unwrap().lines().count(), 4);
}

#[test]
fn input_errors_exit_with_two() {
    let missing = run(&["analyze", "--config", "/nonexistent/scenario.cfg"]);
    assert_eq!(missing.status.code(), Some(2));
    let bad = scenario_file("bad.cfg", "n_rx = 4\ncolour = blue\n");
    let out = run(&["analyze", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    let conflict = scenario_file(
        "conflict.cfg",
        "n_rx = 4\nm1 = 1\nm2 = 1\ndistances_km = 0.1, 0.1\nalpha = 0.9\nfd_ts = 0.1\n",
    );
    assert_eq!(run(&["analyze", "--config", conflict.to_str().unwrap()]).status.code(), Some(2));
}

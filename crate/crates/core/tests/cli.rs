use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sgdm_lab::harness::{Experiment, ExperimentConfig};

fn tool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sgdm-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, json: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, json).unwrap();
    path.display().to_string()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

const SMALL_SIMULATE: &str = r#"{"ensemble_size": 8, "horizon": 1.0, "record_every": 5}"#;

#[test]
fn simulate_writes_snapshots_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "cfg.json", SMALL_SIMULATE);
    let out = tmp.path().join("run");
    let o = tool(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap(), "--seed", "5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let csv = fs::read_to_string(out.join("results.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "time,trajectory_id,m_1,m_2,x_1,x_2");
    // t = 0, 0.5, 1.0 for 8 trajectories
    assert_eq!(csv.lines().count(), 1 + 3 * 8);

    let manifest = read_json(&out.join("manifest.json"));
    assert_eq!(manifest["seed"], 5);
    assert_eq!(manifest["blowup_count"], 0);
    let expected = ExperimentConfig::from_json(
        Experiment::Simulate,
        r#"{"ensemble_size": 8, "horizon": 1.0, "record_every": 5, "seed": 5}"#,
    )
    .unwrap()
    .hash();
    assert_eq!(manifest["config_hash"], expected.as_str());

    let verdict = read_json(&out.join("verdict.json"));
    assert_eq!(verdict["all_pass"], true);
}

#[test]
fn rerun_is_bitwise_identical_and_changed_config_is_refused() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "cfg.json", SMALL_SIMULATE);
    let out = tmp.path().join("run");
    let out_s = out.to_str().unwrap();
    assert!(tool(&["simulate", "--config", &cfg, "--out", out_s]).status.success());
    let first = fs::read(out.join("results.csv")).unwrap();
    assert!(tool(&["simulate", "--config", &cfg, "--out", out_s]).status.success());
    assert_eq!(first, fs::read(out.join("results.csv")).unwrap());

    let o = tool(&["simulate", "--config", &cfg, "--out", out_s, "--seed", "99"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("refusing"));
    assert_eq!(first, fs::read(out.join("results.csv")).unwrap());
}

#[test]
fn drift_check_writes_report() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "cfg.json", r#"{"checks": {"points": 500}}"#);
    let out = tmp.path().join("drift");
    let o = tool(&["drift-check", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let report = read_json(&out.join("drift_report.json"));
    assert_eq!(report["points"], 500);
    assert!(report["worst_margin"].as_f64().unwrap() >= -1e-9);
    assert_eq!(report["violating_points"].as_array().unwrap().len(), 0);
}

#[test]
fn blowups_fail_with_exit_one() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "cfg.json",
        r#"{"ensemble_size": 4, "horizon": 50.0, "schedule": {"kind": "constant", "eta": 1.0}}"#,
    );
    let out = tmp.path().join("run");
    let o = tool(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let manifest = read_json(&out.join("manifest.json"));
    assert_eq!(manifest["blowup_count"], 4);
}

#[test]
fn distance_rows_follow_the_report_layout() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "cfg.json",
        r#"{"ensemble_size": 300, "horizon": 2.0, "ladder": {"eta": [0.1, 0.05, 0.025]},
            "estimator": {"kind": "exact"}}"#,
    );
    let out = tmp.path().join("w1");
    let _ = tool(&["rate-w1", "--config", &cfg, "--out", out.to_str().unwrap()]);
    let csv = fs::read_to_string(out.join("results.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "time,eta_n,estimator,value,noise_floor,n_samples,seed"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 7);
    assert_eq!(row[5], "300");
}

#[test]
fn argument_errors_exit_two() {
    assert_eq!(tool(&["no-such-experiment", "--out", "/tmp/x"]).status.code(), Some(2));
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "cfg.json", r#"{"experiment": "rate_w1"}"#);
    let o = tool(&["simulate", "--config", &cfg, "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(tool(&["simulate"]).status.code(), Some(2));
}

#[test]
fn print_config_shows_preset() {
    let o = tool(&["contraction", "--print-config"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["experiment"], "contraction");
    assert_eq!(v["objective"]["dim"], 1);
}

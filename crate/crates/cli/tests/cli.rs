//! End-to-end checks of the binary: every exit-code path, report artifacts,
//! and byte-identical reruns.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_emproc"))
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

const FAST_RATE: &str = r#"{
  "experiment": {
    "generator": { "kind": "iid", "model": { "kind": "uniform01" } },
    "weight": { "kind": "uniform" },
    "r_exponent": 0.0,
    "n_grid": [64, 128, 256, 512],
    "replications": 40,
    "master_seed": 123,
    "sup_resolution": 4
  },
  "expect": { "slope_range": [-0.9, -0.2], "require_scaled_decreasing": true }
}"#;

#[test]
fn rate_success_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    write(&cfg, FAST_RATE);
    let out_dir = dir.path().join("out");
    let out = run(&[
        "rate",
        "--config",
        cfg.to_str().unwrap(),
        "--output-dir",
        out_dir.to_str().unwrap(),
        "--svg",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out_dir.join("report.json").exists());
    assert!(out_dir.join("report.csv").exists());
    assert!(out_dir.join("plot.svg").exists());
    assert!(out_dir.join("run_meta.json").exists());
    let csv = std::fs::read_to_string(out_dir.join("report.csv")).unwrap();
    assert!(csv.starts_with("n,metric,value,replication_stat\n"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    write(&cfg, FAST_RATE);
    let mut bytes = Vec::new();
    for name in ["a", "b"] {
        let out_dir = dir.path().join(name);
        let out = run(&[
            "rate",
            "--config",
            cfg.to_str().unwrap(),
            "--output-dir",
            out_dir.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        bytes.push(std::fs::read(out_dir.join("report.json")).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
}

#[test]
fn verdict_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    write(&cfg, FAST_RATE);
    // an impossible slope expectation
    let out = run(&[
        "rate",
        "--config",
        cfg.to_str().unwrap(),
        "--output-dir",
        dir.path().join("out").to_str().unwrap(),
        "--set",
        "expect.slope_range=[0.4,0.6]",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("[FAIL] slope_in_range"), "{stdout}");
}

#[test]
fn malformed_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    write(&cfg, "{ not json");
    let out = run(&["rate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line"), "diagnostic should carry a position: {err}");
}

#[test]
fn missing_section_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    write(&cfg, "{}");
    let out = run(&["holder", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_exits_two() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn conditions_feasibility_example() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    write(
        &cfg,
        r#"{ "conditions": { "feasibility": { "alpha": 4.0, "beta_prime": 0.25, "r": 0.25 } } }"#,
    );
    let out_dir = dir.path().join("out");
    let out = run(&[
        "conditions",
        "--config",
        cfg.to_str().unwrap(),
        "--output-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("(0.5, 0.75)"), "{stdout}");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["feasibility"]["mz_window"][0], serde_json::json!(0.5));
}

#[test]
fn conditions_failing_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    // empty window: beta' + 1/alpha = 1.5 >= 1 - r
    write(
        &cfg,
        r#"{ "conditions": { "feasibility": { "alpha": 1.0, "beta_prime": 0.5, "r": 0.4 } } }"#,
    );
    let out = run(&["conditions", "--config", cfg.to_str().unwrap(), "--output-dir",
        dir.path().join("out").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn override_changes_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    write(&cfg, FAST_RATE);
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    run(&["rate", "--config", cfg.to_str().unwrap(), "--output-dir", out_a.to_str().unwrap()]);
    run(&[
        "rate",
        "--config",
        cfg.to_str().unwrap(),
        "--output-dir",
        out_b.to_str().unwrap(),
        "--set",
        "experiment.master_seed=999",
    ]);
    let a = std::fs::read(out_a.join("report.json")).unwrap();
    let b = std::fs::read(out_b.join("report.json")).unwrap();
    assert_ne!(a, b);
}

#[test]
fn bad_threads_env_exits_two() {
    let out = bin()
        .args(["rate", "--config", "/nonexistent.json"])
        .env("EMPROC_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn infinity_serializes_as_string() {
    // a sup-norm that is genuinely infinite: Pareto alpha=1 with poly
    // lambda=2 deviations
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    write(
        &cfg,
        r#"{
  "experiment": {
    "generator": { "kind": "iid",
      "model": { "kind": "pareto_two_sided", "alpha": 1.0, "x0": 1.0, "c1": 0.25, "c2": 0.25 } },
    "weight": { "kind": "poly", "lambda": 2.0 },
    "r_exponent": 0.0,
    "n_grid": [16, 32],
    "replications": 3,
    "master_seed": 1,
    "sup_resolution": 2
  }
}"#,
    );
    let out_dir = dir.path().join("out");
    let out = run(&[
        "rate",
        "--config",
        cfg.to_str().unwrap(),
        "--output-dir",
        out_dir.to_str().unwrap(),
    ]);
    // no expectations: exit 0 regardless of values
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(out_dir.join("report.json")).unwrap();
    assert!(text.contains("\"inf\""), "{text}");
}

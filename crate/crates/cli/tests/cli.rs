use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

use qpoc_cli::config::SimConfig;
use qpoc_cli::simulate::{run_simulation, CSV_HEADER};

fn qpoc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpoc")).args(args).output().expect("spawn qpoc")
}

fn qubit_json() -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/qubit.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn write_config(dir: &Path, cfg: &Value) -> PathBuf {
    let p = dir.join("config.json");
    std::fs::write(&p, serde_json::to_string_pretty(cfg).unwrap()).unwrap();
    p
}

fn csv_column(text: &str, name: &str) -> Vec<f64> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

fn final_h(cfg: &Value, n: usize) -> f64 {
    let v = SimConfig::from_json(&cfg.to_string()).unwrap().validate().unwrap();
    run_simulation(&v, n).unwrap().final_entropy()
}

#[test]
fn simulate_writes_the_csv_contract() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = qubit_json();
    cfg["n_list"] = Value::Null;
    cfg["n"] = json!(2);
    let path = write_config(dir.path(), &cfg);
    let out = dir.path().join("run");
    let o = qpoc(&["simulate", "--config", path.to_str().unwrap(), "--out", out.to_str().unwrap(), "--record-stride", "50"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("trajectory_N2.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), CSV_HEADER);
    assert_eq!(
        CSV_HEADER,
        "t,h_n,bound_rhs_log,lambda_min_m,floor,trace_dist_k1,trace_dist_k2,exp_moment"
    );
    // 0, 0.05, ..., 0.5
    assert_eq!(csv.lines().count(), 12);
    let summary: Value = serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["n"], json!(2));
    assert!(summary["violations"].as_array().unwrap().is_empty());
}

#[test]
fn no_interaction_no_dissipation_stays_tensorized() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = qubit_json();
    let zero4 = vec![vec![json!([0, 0]); 4]; 4];
    let zero2 = vec![vec![json!([0, 0]); 2]; 2];
    cfg["a_int"] = json!(zero4);
    cfg["l_jump"] = json!(zero2);
    cfg["h_tilde"] = json!([[[0.3, 0], [0.2, -0.7]], [[0.2, 0.7], [-1.1, 0]]]);
    cfg["m0"] = json!([[[0.6, 0], [0.1, 0.2]], [[0.1, -0.2], [0.4, 0]]]);
    cfg["n_list"] = Value::Null;
    cfg["n"] = json!(3);
    let path = write_config(dir.path(), &cfg);
    let out = dir.path().join("run");
    let o = qpoc(&["simulate", "--config", path.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("trajectory_N3.csv")).unwrap();
    let h = csv_column(&csv, "h_n");
    assert!(!h.is_empty());
    assert!(h.iter().all(|x| x.abs() <= 1e-9), "{h:?}");
}

#[test]
fn larger_n_is_closer_to_chaos() {
    let cfg = qubit_json();
    let (h2, h4) = (final_h(&cfg, 2), final_h(&cfg, 4));
    assert!(h4 < h2, "H_4(T) = {h4}, H_2(T) = {h2}");
}

#[test]
fn doubling_dt_changes_finals_by_under_one_percent() {
    let fine = qubit_json();
    let mut coarse = fine.clone();
    coarse["dt"] = json!(0.002);
    for n in 2..=5 {
        let (a, b) = (final_h(&fine, n), final_h(&coarse, n));
        assert!(((a - b) / a).abs() < 0.01, "N = {n}: {a} vs {b}");
    }
}

#[test]
fn single_n_sweep_reports_null_slope() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), &qubit_json());
    let out = dir.path().join("sweep");
    let o = qpoc(&["sweep", "--config", path.to_str().unwrap(), "--n-list", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let summary: Value = serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert!(summary["slope"].is_null());
    assert!(summary["per_n_final_entropy"]["2"].as_f64().unwrap() > 0.0);
    assert!(out.join("sweep.csv").exists());
}

#[test]
fn sweep_output_is_sorted_by_n() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), &qubit_json());
    let out = dir.path().join("sweep");
    let o = qpoc(&["sweep", "--config", path.to_str().unwrap(), "--n-list", "4,2,3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let summary: Value = serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    let keys: Vec<&String> = summary["per_n_final_entropy"].as_object().unwrap().keys().collect();
    assert_eq!(keys, ["2", "3", "4"]);
    assert!(summary["slope"].as_f64().unwrap() < 0.0);
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json");
    assert_eq!(qpoc(&["simulate", "--config", missing.to_str().unwrap()]).status.code(), Some(2));

    let mut cfg = qubit_json();
    cfg["h_tilde"] = json!([[[1, 0], [1, 0]], [[0, 0], [-1, 0]]]);
    let path = write_config(dir.path(), &cfg);
    assert_eq!(qpoc(&["simulate", "--config", path.to_str().unwrap()]).status.code(), Some(2));

    let mut cfg = qubit_json();
    cfg["m0"] = json!([[[1, 0], [0, 0]], [[0, 0], [0, 0]]]);
    let path = write_config(dir.path(), &cfg);
    assert_eq!(qpoc(&["simulate", "--config", path.to_str().unwrap()]).status.code(), Some(2));

    let mut cfg = qubit_json();
    cfg["unknown_field"] = json!(1);
    let path = write_config(dir.path(), &cfg);
    assert_eq!(qpoc(&["sweep", "--config", path.to_str().unwrap()]).status.code(), Some(2));

    assert_eq!(qpoc(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
}

#[test]
fn verify_is_deterministic_and_lists_checks() {
    let a = qpoc(&["verify", "--suite", "combinatorics", "--seed", "42"]);
    let b = qpoc(&["verify", "--suite", "combinatorics", "--seed", "42"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("PASS") && l.contains("admissible_counts")));
    assert!(text.contains("summary passed="));

    let pre = String::from_utf8(qpoc(&["verify", "--suite", "preliminaries", "--seed", "7"]).stdout).unwrap();
    for name in ["pinsker", "golden_thompson", "variational", "superadditivity", "frechet_commutator", "frechet_trace"] {
        assert!(pre.lines().any(|l| l.split_whitespace().nth(2) == Some(name)), "missing {name}");
    }
}

#[test]
fn verify_all_covers_every_anchor() {
    let o = qpoc(&["verify", "--suite", "all", "--seed", "1"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(!text.contains("UNCOVERED"));
    assert!(!text.lines().any(|l| l.starts_with("FAIL")));
}

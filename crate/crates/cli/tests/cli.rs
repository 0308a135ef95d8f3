use std::process::{Command, Output};

use serde_json::Value;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stability-lab")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = lab(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json report")
}

const WU: [&str; 6] = ["--family", "wu", "--d", "1", "--weights", "1,3"];

fn with_wu<'a>(cmd: &'a str, rest: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![cmd];
    v.extend_from_slice(&WU);
    v.extend_from_slice(rest);
    v
}

#[test]
fn analyze_j_table_row() {
    let r = json(&with_wu("analyze-j", &["--alpha", "1,1", "--beta", "1,1/5"]));
    assert_eq!(r["result"]["verdict"]["dest"], serde_json::json!(["C"]));
    assert_eq!(r["result"]["verdict"]["status"], "unstable");
    assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(r["completeness"], "certified");
    assert_eq!(r["presentation_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn sweep_walls() {
    let r = json(&with_wu("sweep", &["--alpha", "1,1", "--beta0", "1,1/20", "--beta1", "1,1/2", "--var", "beta"]));
    assert_eq!(r["result"]["walls"], serde_json::json!(["5/26", "2/9"]));
    let hyp = r["result"]["report"]["hypothesis_walls"].as_array().unwrap();
    assert!(hyp.iter().any(|w| w["parameter"] == "1/15"));
}

#[test]
fn gma_sweep_on_j_path() {
    let r = json(&with_wu("sweep", &["--alpha", "1,1", "--beta0", "1,1/20", "--beta1", "1,1/2", "--j-gma"]));
    assert_eq!(r["result"]["walls"], serde_json::json!(["5/26", "2/9"]));
}

#[test]
fn factorize_zero() {
    let r = json(&["factorize", "--n", "3", "--coeffs", "0,0"]);
    for e in r["result"]["entries"].as_array().unwrap() {
        assert_eq!(e["root"]["exact"], "0");
    }
    assert!(r["presentation_hash"].is_null());
}

#[test]
fn deterministic_bytes() {
    let args = with_wu("sweep", &["--alpha", "1,1", "--alpha", "2,1", "--beta0", "1,1/20", "--beta1", "1,3"]);
    assert_eq!(lab(&args).stdout, lab(&args).stdout);
    let args = with_wu("analyze-dhym", &["--alpha", "1,1", "--beta", "1,1/10"]);
    assert_eq!(lab(&args).stdout, lab(&args).stdout);
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(lab(&with_wu("analyze-j", &["--alpha", "1,1/0", "--beta", "1,1"])).status.code(), Some(2));
    assert_eq!(lab(&with_wu("analyze-j", &["--alpha", "1,x", "--beta", "1,1"])).status.code(), Some(2));
    assert_eq!(lab(&with_wu("analyze-j", &["--alpha", "1,1,1", "--beta", "1,1"])).status.code(), Some(2));
    assert_eq!(lab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(lab(&["factorize", "--n", "3", "--coeffs", "-1,0"]).status.code(), Some(2));
    assert_eq!(lab(&["analyze-j", "--alpha", "1,1", "--beta", "1,1"]).status.code(), Some(2));
}

#[test]
fn strict_hypothesis_failure_exits_3() {
    let args = with_wu("analyze-j", &["--alpha", "1,1", "--beta", "1,1/20", "--strict"]);
    assert_eq!(lab(&args).status.code(), Some(3));
    let args = with_wu("analyze-j", &["--alpha", "1,1", "--beta", "1,1/10", "--strict"]);
    assert_eq!(lab(&args).status.code(), Some(0));
}

#[test]
fn csv_to_file_and_manifold_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let args = with_wu(
        "sweep",
        &["--alpha", "1,1", "--beta0", "1,1/20", "--beta1", "1,1/2", "--candidates", "S,C", "--format", "csv", "--out", csv.to_str().unwrap()],
    );
    assert!(lab(&args).status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t_lo,t_hi,wall_source,status_0,dest_0"));
    assert_eq!(lines.count(), 3);

    let path = dir.path().join("wu.json");
    let mut export = vec!["export-manifold"];
    export.extend_from_slice(&WU);
    export.extend_from_slice(&["--out", path.to_str().unwrap()]);
    assert!(lab(&export).status.success());
    let a = json(&with_wu("analyze-j", &["--alpha", "1,1", "--beta", "1,1/5"]));
    let b = json(&["analyze-j", "--manifold", path.to_str().unwrap(), "--alpha", "1,1", "--beta", "1,1/5"]);
    assert_eq!(a["presentation_hash"], b["presentation_hash"]);
    assert_eq!(a["result"], b["result"]);
}

#[test]
fn dhym_and_gma_reports() {
    let r = json(&with_wu("analyze-dhym", &["--alpha", "1,1", "--beta", "1,1"]));
    let phi = r["result"]["verdict"]["angle"]["phi_hat"].as_f64().unwrap();
    assert!((phi - 3.0 * std::f64::consts::FRAC_PI_4).abs() < 1e-12);
    assert_eq!(r["result"]["central_charge"]["re"], "-14");
    let r = json(&with_wu("analyze-dhym", &["--alpha", "1,1", "--beta", "1,1", "--phi-hat", "1.5707963267948966"]));
    assert!(r["result"]["verdict"]["angle"]["marginal"].as_bool().unwrap());
    let r = json(&with_wu("analyze-gma", &["--alpha", "1,1", "--beta", "1,1/5", "--coeffs", "1/3,1/5"]));
    assert!(r["result"]["verdict"]["factor_cones"].is_array());
    let r = json(&with_wu("analyze-gma", &["--alpha", "1,1", "--beta", "1,1/5", "--inverse-hessian", "2"]));
    assert!(r["result"]["inverse_hessian"]["kappa"].is_string());
}

#[test]
fn blowup_cones() {
    let r = json(&["cones", "--family", "blowup", "--n", "3", "--alpha", "1,-1/4", "--beta", "1,-1/2"]);
    assert_eq!(r["result"]["projection"]["eta"], serde_json::json!(["1", "0"]));
    let csv = lab(&["cones", "--family", "blowup", "--n", "3", "--alpha", "1,-1/4", "--format", "csv"]);
    assert!(String::from_utf8(csv.stdout).unwrap().starts_with("cone,alpha"));
}

#[test]
fn oracle_sweep_grid() {
    let r = json(&with_wu("oracle-sweep", &["--alpha", "1,1", "--beta0", "1,1/20", "--beta1", "1,1/2", "--grid", "10"]));
    assert_eq!(r["result"].as_array().unwrap().len(), 11);
    assert_eq!(lab(&with_wu("oracle-sweep", &["--alpha", "1,1", "--beta0", "1,1/20", "--beta1", "1,1/2", "--grid", "1"])).status.code(), Some(2));
}

use std::process::{Command, Output};

use serde_json::Value;

fn hgm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hgm")).args(args).env("RUST_LOG", "off").output().expect("run hgm")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("json line"))
        .collect()
}

#[test]
fn count_reports_all_pieces() {
    let out = hgm(&["count", "--a", "1,0", "--b", "3,2", "--m", "4", "--p", "7", "--t", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert_eq!(recs.len(), 1);
    let o = &recs[0]["outputs"];
    assert_eq!(o["count_X"], 6);
    assert_eq!(o["count_X_direct"], 6);
    let total: i64 = o["q_factors"].as_array().unwrap().iter().map(|f| f["snapped"].as_i64().unwrap()).sum();
    assert_eq!(total, 6);
}

#[test]
fn count_over_extension_field() {
    let out = hgm(&["count", "--a", "1", "--b", "2", "--m", "2", "--p", "3", "--r", "2", "--t", "[2,1]"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let o = &records(&out)[0]["outputs"];
    assert_eq!(o["field"]["q"], 9);
    assert_eq!(o["count_X"], o["count_X_direct"]);
}

#[test]
fn zeta_matches_point_counts() {
    let out = hgm(&["zeta", "--a", "1,0", "--b", "1,1", "--m", "2", "--p", "5", "--t", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let o = &records(&out)[0]["outputs"];
    assert_eq!(o["series_check"], true);
    assert_eq!(o["count_series"], o["factor_series"]);
    assert!(o["first_mismatch"].is_null());
}

#[test]
fn zeta_honours_series_order() {
    let out = hgm(&["zeta", "--a", "1", "--b", "2", "--m", "2", "--p", "7", "--t", "3", "--series-order", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let o = &records(&out)[0]["outputs"];
    assert_eq!(o["count_series"].as_array().unwrap().len(), 7);
}

#[test]
fn bad_prime_is_an_error() {
    // p = 2 divides m
    let out = hgm(&["count", "--a", "1", "--b", "2", "--m", "2", "--p", "2", "--t", "1/3"]);
    assert_eq!(out.status.code(), Some(2));
    let recs = records(&out);
    assert!(recs[0]["error"]["message"].is_string());
}

#[test]
fn unsupported_precision_is_rejected() {
    let out = hgm(&["hsum", "--alpha", "1/2", "--beta", "0", "--p", "5", "--t", "2", "--precision-bits", "128"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gauss_and_jacobi_values() {
    let out = hgm(&["gauss", "--alpha", "1/2,0", "--p", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(text.contains("\"command\":\"gauss\""));
    let out = hgm(&["jacobi", "--alpha", "1/4", "--beta", "1/4", "--p", "5"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_runs_selected_suites() {
    let out = hgm(&["verify", "--q-max", "9", "--suite", "gauss-sum-basics,jacobi-mobius"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert_eq!(recs.len(), 2);
    assert!(recs.iter().all(|r| r["outputs"]["passed"] == true));
}

#[test]
fn verify_failure_sets_exit_code() {
    let out = hgm(&["verify", "--q-max", "9", "--suite", "h-shift-literal"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(records(&out)[0]["outputs"]["passed"], false);
}

#[test]
fn unknown_suite_is_an_error() {
    let out = hgm(&["verify", "--q-max", "7", "--suite", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn series_check_annihilates() {
    let out = hgm(&["series-check", "--alpha", "1/2,1/2", "--beta", "1,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(records(&out)[0]["outputs"]["passed"], true);
}

#[test]
fn output_is_reproducible() {
    let args = ["hsum", "--alpha", "1/3,2/3", "--beta", "0,1/2", "--q-max", "13", "--t", "2"];
    let a = hgm(&args);
    let b = hgm(&args);
    assert_eq!(a.status.code(), Some(0));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn writes_to_out_file() {
    let path = std::env::temp_dir().join(format!("hgm-cli-test-{}.jsonl", std::process::id()));
    let p = path.to_str().unwrap();
    let out = hgm(&["gauss", "--alpha", "1/2", "--p", "7", "--out", p]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let v: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(v["command"], "gauss");
}

//! End-to-end tests that drive the compiled binary.

use std::path::Path;
use std::process::{Command, Output};

fn multex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multex"))
        .args(args)
        .env_remove("MULTEX_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 output")
}

#[test]
fn pi_json_has_schema_and_decimal_value() {
    let out = multex(&["pi", "3", "2", "2", "5", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["schema"], "multex/1");
    assert_eq!(v["value"], "186624");
    assert_eq!(v["sizes"], serde_json::json!([1, 4]));
}

#[test]
fn bounds_text_reports_both_caps() {
    let out = multex(&["bounds", "6", "5", "34"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("edge_cap: 51"));
    assert!(text.contains("product_cap: 80621568"));
}

#[test]
fn conjecture_refuted_exits_zero() {
    let out = multex(&["conjecture", "3", "2", "2", "5", "6"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("verdict: refuted"));
    assert!(text.contains("construction_value: 60466176"));
    assert!(text.contains("extremal_lower: 80621568"));
}

#[test]
fn q_expression_matches_literal() {
    let expr = multex(&["bounds", "7", "5", "a*10+4", "--a", "3"]);
    let lit = multex(&["bounds", "7", "5", "34"]);
    assert!(expr.status.success());
    assert_eq!(stdout(&expr), stdout(&lit));
}

#[test]
fn q_expression_without_a_is_invalid() {
    let out = multex(&["bounds", "7", "5", "a*10+4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("needs --a"));
}

#[test]
fn invalid_parameters_exit_two_with_reason() {
    let out = multex(&["search", "4", "5", "10", "--no-cache"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unbounded"));

    let out = multex(&["bounds", "5", "1", "10"]);
    assert_eq!(out.status.code(), Some(2));

    let out = multex(&["bounds", "5", "5", "10", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn construct_rejects_part_count_mismatch() {
    let out = multex(&["construct", "3", "2", "2", "2", "4", "6"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("invalid parameter r"));
}

#[test]
fn sigma_matches_family_worst_case() {
    let out = multex(&["sigma", "3", "2", "2", "5"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("value: 34"));
}

#[test]
fn optimal_x_spot_value() {
    let out = multex(&["optimal-x", "3", "6"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("x_star: 1"));
    assert!(text.contains("value: 60466176"));
}

#[test]
fn csv_quotes_large_decimals() {
    let out = multex(&["pi", "3", "2", "2", "5", "--format", "csv"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("\"186624\""));
}

#[test]
fn ratio_grid_starts_at_exact_fraction() {
    let out = multex(&["ratio", "7", "3", "10", "100", "1000"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("a=3: 1.50000000"));
    assert!(text.contains("a=1000: 1.00000200"));
}

#[test]
fn claim_counts_are_exact() {
    let out = multex(&["claim-c4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("supports_examined: 203490"));
    assert!(text.contains("valid_supports: 0"));
}

#[test]
fn search_caches_and_reuses_results() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let first = multex(&["--cache-dir", d, "search", "5", "5", "34", "--format", "json"]);
    assert!(first.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&first)).unwrap();
    assert_eq!(v["schema"], "multex/1");
    assert_eq!(v["cached"], false);
    assert_eq!(v["lower"], "186624");
    assert_eq!(v["status"], "closed");
    assert_eq!(entry_count(dir.path()), 1);

    let second = multex(&["--cache-dir", d, "search", "5", "5", "34", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&second)).unwrap();
    assert_eq!(v["cached"], true);
    assert_eq!(v["lower"], "186624");
}

#[test]
fn cache_env_var_sets_the_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_multex"))
        .args(["search", "5", "5", "34"])
        .env("MULTEX_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(entry_count(dir.path()), 1);
}

#[test]
fn no_cache_leaves_no_trace() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = multex(&["--cache-dir", d, "--no-cache", "search", "5", "5", "34"]);
    assert!(out.status.success());
    assert_eq!(entry_count(dir.path()), 0);
}

#[test]
fn suite_single_criterion_exit_codes() {
    let ok = multex(&["suite", "--only", "2", "--budget-nodes", "10000"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("criterion  2: pass"));

    let broken = multex(&[
        "suite",
        "--only",
        "2",
        "--q-offset",
        "-1",
        "--budget-nodes",
        "10000",
    ]);
    assert_eq!(broken.status.code(), Some(1));
    assert!(stdout(&broken).contains("criterion  2: FAIL"));
}

fn entry_count(dir: &Path) -> usize {
    match std::fs::read_dir(dir) {
        Ok(rd) => rd.count(),
        Err(_) => 0,
    }
}

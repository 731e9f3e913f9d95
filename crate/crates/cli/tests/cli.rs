use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sumset_cli::run::{execute, ClaimedCertificate};

fn sumset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumset"))
        .args(args)
        .env_remove("SUMSET_THREADS")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write_evens(dir: &Path) -> String {
    let path = dir.join("evens.set");
    let out = sumset(&["gen", "--gen", "periodic:2:0", "--n", "1000", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    path.to_str().unwrap().to_string()
}

#[test]
fn gen_then_density() {
    let dir = tempfile::tempdir().unwrap();
    let set = write_evens(dir.path());
    assert!(fs::read_to_string(&set).unwrap().starts_with("N=1000\n2 4 6"));
    let out = sumset(&["density", "--input", &set]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "sumset/1");
    assert_eq!(v["config"]["subcommand"], "density");
    assert_eq!(v["result"]["banach_estimate"]["density"]["exact"], "1/2");
    assert_eq!(v["result"]["status"], "estimate");
}

#[test]
fn verify_valid_and_corrupted() {
    let dir = tempfile::tempdir().unwrap();
    let set = write_evens(dir.path());
    let good = dir.path().join("good.json");
    fs::write(&good, r#"{"b": [2, 4], "c": [2], "k": 0}"#).unwrap();
    let out = sumset(&["verify", "--input", &set, "--certificate", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["verified"], true);

    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"b": [2, 5], "c": [2], "k": 0}"#).unwrap();
    let out = sumset(&["verify", "--input", &set, "--certificate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["result"]["verified"], false);
    assert_eq!(v["result"]["violations"].as_array().unwrap().len(), 1);
}

#[test]
fn find_bc_output_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let out = sumset(&[
        "find-bc", "--gen", "bernoulli:0.8", "--n", "100000", "--seed", "3", "--size", "6",
        "-o", cert.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = sumset(&[
        "verify", "--gen", "bernoulli:0.8", "--n", "100000", "--seed", "3",
        "--certificate", cert.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    // Same certificate against a different set is a negative, not an error.
    let out = sumset(&[
        "verify", "--gen", "bernoulli:0.8", "--n", "100000", "--seed", "4",
        "--certificate", cert.to_str().unwrap(),
    ]);
    assert!(matches!(out.status.code(), Some(0 | 1)));
}

#[test]
fn structured_negatives_exit_one() {
    let out = sumset(&["fatten", "--gen", "periodic:100:0", "--n", "10000", "--n-schedule", "1,2,3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["result"]["outcome"], "not_found");
}

#[test]
fn usage_and_io_errors_exit_two() {
    assert_eq!(sumset(&["density"]).status.code(), Some(2));
    assert_eq!(sumset(&["density", "--input", "/nonexistent/a.set"]).status.code(), Some(2));
    assert_eq!(sumset(&["fatten", "--gen", "bernoulli:0.5", "--epsilon", "2"]).status.code(), Some(2));
    assert_eq!(sumset(&["frobnicate"]).status.code(), Some(2));
    let out = sumset(&["density", "--gen", "bernoulli:1.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn one_shift_reports_shift_and_table() {
    let out = sumset(&["one-shift", "--gen", "periodic:2:0", "--n", "100000", "--size", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["k"], 0);
    assert_eq!(v["result"]["dichotomy"].as_array().unwrap().len(), 9);
    assert!(v["result"]["j"].is_array());
}

#[test]
fn mixing_evens_is_structured() {
    let out = sumset(&["mixing", "--gen", "periodic:2:0", "--n", "10000", "--n-max", "50", "--eps", "0.3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["classification"], "structured");
    assert_eq!(v["result"]["cesaro"][49]["exact"], "1/4");
    assert_eq!(v["result"]["thresholds"]["theta_mix"], 0.02);
}

#[test]
fn thread_count_does_not_change_bytes() {
    let args = ["find-bc", "--gen", "bernoulli:0.8", "--n", "200000", "--seed", "9", "--size", "8"];
    let one = execute(args, Some(1)).unwrap();
    let many = execute(args, Some(8)).unwrap();
    assert_eq!(one.body, many.body);
    let env_run = Command::new(env!("CARGO_BIN_EXE_sumset"))
        .args(args)
        .env("SUMSET_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(env_run.stdout).unwrap(), one.body);
}

#[test]
fn harness_quick_and_oracle_pass() {
    for suite in ["quick", "oracle"] {
        let out = sumset(&["harness", "--suite", suite]);
        assert_eq!(out.status.code(), Some(0), "{suite}");
        let v = json(&out);
        assert_eq!(v["result"]["passed"], v["result"]["total"]);
    }
}

#[test]
fn claimed_certificate_accepts_bare_and_wrapped() {
    let bare = ClaimedCertificate::parse(r#"{"b":[1],"c":[2],"k":-1,"window_len":10}"#).unwrap();
    let wrapped = ClaimedCertificate::parse(
        r#"{"schema":"sumset/1","config":{},"result":{"b":[1],"c":[2],"k":-1,"window_len":10}}"#,
    )
    .unwrap();
    assert_eq!(bare, wrapped);
    assert!(ClaimedCertificate::parse(r#"{"schema":"sumset/9","b":[],"c":[]}"#).is_err());
    assert!(ClaimedCertificate::parse(r#"{"b":[1]}"#).is_err());
}

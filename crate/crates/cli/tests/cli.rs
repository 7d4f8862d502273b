use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use serde_json::Value;
use tstruct_cli::{run, Outcome};

fn fixture(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tstruct-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join(name);
    std::fs::write(&path, body).expect("write fixture");
    path
}

fn call(args: &[&str], stdin: &str) -> Outcome {
    let argv = std::iter::once("tstruct").chain(args.iter().copied());
    run(argv, &mut stdin.as_bytes())
}

fn json(out: &Outcome) -> Value {
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    serde_json::from_str(&out.stdout).expect("stdout is JSON")
}

const TWO_AT_TWO: &str =
    r#"{"spectrum":"Z","tail":{"kind":"whole"},"window":{"start":0,"end":1},"levels":[[2],[2]],"head":[]}"#;
const KOSZUL_TWO: &str = r#"{"minDeg":-1,"ranks":[1,1],"diffs":[[[2]]]}"#;

#[test]
fn check_cousin_reports_the_witness() {
    let out = call(&["check-cousin", "-f", "-"], TWO_AT_TWO);
    let v = json(&out);
    assert_eq!(v["schema"], "tstruct/1");
    assert_eq!(v["weak"], false);
    assert_eq!(v["witnesses"], serde_json::json!([[1, "(2)", "0"]]));
    assert_eq!(v["stabilization"]["weakCousin"], false);
}

#[test]
fn check_cousin_accepts_a_weak_cousin_filtration() {
    let f = r#"{"tail":{"kind":"whole"},"window":{"start":0,"end":0},"levels":[[2,3]],"head":[]}"#;
    let v = json(&call(&["check-cousin", "-f", "-"], f));
    assert_eq!(v["weak"], true);
    assert_eq!(v["witnesses"], serde_json::json!([]));
}

#[test]
fn truncate_engines_agree() {
    let f = fixture("two.json", TWO_AT_TWO);
    let x = fixture("k2.json", KOSZUL_TWO);
    let out = call(&["truncate", "-f", f.to_str().unwrap(), "-x", x.to_str().unwrap(), "--engine", "both"], "");
    let v = json(&out);
    assert_eq!(v["agree"], true);
    assert_eq!(v["determinate"], true);
    assert_eq!(v["upper"], serde_json::json!([]));
    assert_eq!(v["lower"][0]["degree"], 0);
}

#[test]
fn truncation_of_z_is_not_finitely_generated() {
    let f = fixture("two-c.json", TWO_AT_TWO);
    let out = call(&["truncate", "-f", f.to_str().unwrap(), "-x", "-", "--engine", "both"], r#"{"minDeg":0,"ranks":[1]}"#);
    let v = json(&out);
    assert_eq!(v["agree"], true);
    assert_eq!(v["fg"]["lower"], false);
    assert_eq!(v["lower"][0]["degree"], 1);
    assert_eq!(v["lower"][0]["atoms"][0]["kind"], "prufer");
    assert_eq!(v["oracle"]["lower"][0]["prufer"], serde_json::json!([[2, 1]]));
    assert_eq!(v["upper"][0]["atoms"][0]["kind"], "localized");
}

#[test]
fn cech_engine_needs_a_complex() {
    let f = fixture("two-b.json", TWO_AT_TWO);
    let obj = r#"{"0":[{"kind":"torsion","prime":2,"exponent":1,"mult":1}]}"#;
    let out = call(&["truncate", "-f", f.to_str().unwrap(), "-x", "-", "--engine", "cech"], obj);
    assert_eq!(out.code, 2, "stdout: {} stderr: {}", out.stdout, out.stderr);
}

#[test]
fn membership_and_cm_check() {
    let f = fixture("f2.json", r#"{"tail":{"kind":"whole"},"window":{"start":0,"end":0},"levels":[[2,3]],"head":[]}"#);
    let x = fixture("k2-b.json", KOSZUL_TWO);
    let aisle = json(&call(&["member", "-f", f.to_str().unwrap(), "-x", x.to_str().unwrap(), "--side", "aisle"], ""));
    assert_eq!(aisle["member"], true);
    let coaisle =
        json(&call(&["member", "-f", f.to_str().unwrap(), "-x", x.to_str().unwrap(), "--side", "coaisle"], ""));
    assert_eq!(coaisle["member"], false);
    let cm = json(&call(&["cm-check", "-x", "-"], KOSZUL_TWO));
    assert_eq!(cm["agree"], true);
}

#[test]
fn dual_is_validated() {
    let f = r#"{"tail":{"kind":"whole"},"window":{"start":0,"end":0},"levels":[[2,3]],"head":[]}"#;
    let v = json(&call(&["dual", "-f", "-"], f));
    assert_eq!(v["validation"]["passed"], true);
    assert_eq!(v["dual"]["levels"][0], serde_json::json!({"kind":"cofinite","primes":[2,3]}));
}

#[test]
fn census_count_matches_hand_count() {
    // Up-sets of a two-point chain: empty, the closed point, everything.
    // Decreasing pairs number 6; the two nonempty constants are new.
    let v = json(&call(&["census", "--count-only", "--spectrum", "two-chain", "--window", "0..1"], ""));
    assert_eq!(v["count"], 8);
}

#[test]
fn census_lists_filtrations() {
    let v = json(&call(&["census", "--spectrum", "two-chain", "--window", "0..0"], ""));
    let n = v["count"].as_u64().unwrap();
    assert_eq!(v["filtrations"].as_array().unwrap().len() as u64, n);
}

#[test]
fn census_window_too_large() {
    let out = call(&["census", "--window", "-40..40", "--cap", "1000"], "");
    assert_eq!(out.code, 2);
    let e: Value = serde_json::from_str(&out.stderr).expect("error JSON");
    assert!(e["error"]["kind"].is_string());
}

#[test]
fn malformed_input_exits_two() {
    let out = call(&["check-cousin", "-f", "-"], "{bad");
    assert_eq!(out.code, 2);
    let e: Value = serde_json::from_str(&out.stderr).expect("error JSON");
    assert_eq!(e["error"]["kind"], "parse");
}

#[test]
fn unknown_suite_is_a_usage_error() {
    assert_eq!(call(&["verify", "--suite", "nope"], "").code, 2);
}

#[test]
fn verify_single_suite() {
    let v = json(&call(&["-q", "verify", "--suite", "criterion9"], ""));
    assert_eq!(v["passed"], true);
    assert_eq!(v["suites"][0]["id"], "criterion9");
}

#[test]
fn output_is_deterministic() {
    let args = ["--seed", "7", "census", "--spectrum", "vee", "--window", "0..1"];
    assert_eq!(call(&args, "").stdout, call(&args, "").stdout);
}

#[test]
fn binary_reads_stdin_and_honours_seed_variable() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tstruct"))
        .args(["-q", "verify", "--suite", "9"])
        .env("TSTRUCT_SEED", "11")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn tstruct");
    child.stdin.take().unwrap().write_all(b"").unwrap();
    let out = child.wait_with_output().expect("run tstruct");
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).expect("JSON");
    assert_eq!(v["seed"], 11);

    let mut child = Command::new(env!("CARGO_BIN_EXE_tstruct"))
        .args(["check-cousin"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .expect("spawn tstruct");
    child.stdin.take().unwrap().write_all(TWO_AT_TWO.as_bytes()).unwrap();
    let out = child.wait_with_output().expect("run tstruct");
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).expect("JSON");
    assert_eq!(v["weak"], false);
}

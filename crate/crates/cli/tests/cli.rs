use std::process::{Command, Output};

use serde_json::Value;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lcs-lab"))
        .args(["--workers", "2"])
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.retain(|k, _| !(k.contains("elapsed") || k == "wall_clock_secs" || k == "started_unix_secs"));
            m.values_mut().for_each(strip_timing);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

fn csv_body(out: &Output) -> String {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with("# started_unix_secs"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn gen_reports_lengths() {
    let out = lab(&["gen", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["tool"], "lcs-lab");
    assert_eq!(v["command"], "gen");
    assert_eq!(v["workers"], 2);
    assert!(v["wall_clock_secs"].is_number());
    assert_eq!(v["config"]["command"]["n"], 2);
    assert_eq!(v["result"]["len"], 14);
    assert_eq!(v["result"]["b_word"].as_str().unwrap().len(), 14);
}

#[test]
fn depth_of_commutator() {
    let v = json(&lab(&["depth", "--word", "abAB", "--max-degree", "4"]));
    assert_eq!(v["result"]["depth"]["value"], 2);
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(lab(&["nonsense"]).status.code(), Some(3));
    assert_eq!(lab(&["gen"]).status.code(), Some(3));
    assert_eq!(lab(&["depth", "--word", "axb"]).status.code(), Some(3));
    assert_eq!(lab(&["girth", "--quotient", "bogus", "--max-len", "3"]).status.code(), Some(3));
    assert_eq!(lab(&["--help"]).status.code(), Some(0));
}

#[test]
fn exhausted_search_is_inconclusive() {
    let out = lab(&["girth", "--quotient", "z2", "--max-len", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["status"], "inconclusive");
}

#[test]
fn false_assumption_is_a_failure() {
    let out = lab(&[
        "almostlaw", "--seed-a", "aabaBAAbAB", "--seed-b", "abaaBAAb", "--assume-seed-bound", "0.2",
        "--n-max", "2", "--samples", "100", "--polish-steps", "10",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn girth_matches_known_values() {
    let v = json(&lab(&["girth", "--quotient", "derived2", "--max-len", "14"]));
    assert_eq!(v["result"]["girth"], 14);
    assert_eq!(v["result"]["exact"], true);
    let v = json(&lab(&["girth", "--quotient", "derived:perm:a=(1 2);b=(2 3)", "--max-len", "10"]));
    assert_eq!(v["result"]["girth"], 8);
    let v = json(&lab(&["girth", "--quotient", "lcs:3", "--max-len", "10", "--no-prune"]));
    assert_eq!(v["result"]["girth"], 8);
}

#[test]
fn alpha_and_beta() {
    let v = json(&lab(&["alpha", "--n", "3", "--max-len", "10"]));
    assert_eq!(v["result"]["value"], 8);
    let v = json(&lab(&["beta", "--n", "2"]));
    assert_eq!(v["result"]["exact"], 14);
}

#[test]
fn json_is_reproducible_modulo_timing() {
    let args = ["girth", "--quotient", "derived2", "--max-len", "14", "--shards", "16"];
    let mut a = json(&lab(&args));
    let mut b = json(&lab(&args));
    assert_ne!(a["started_unix_secs"], Value::Null);
    strip_timing(&mut a);
    strip_timing(&mut b);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn almostlaw_csv_is_reproducible() {
    let args = [
        "almostlaw", "--seed-a", "aabaBAAbAB", "--seed-b", "abaaBAAb", "--assume-seed-bound", "0.2",
        "--n-max", "2", "--samples", "200", "--polish-steps", "20", "--seed", "7",
    ];
    let a = csv_body(&lab(&args));
    let b = csv_body(&lab(&args));
    assert_eq!(a, b);
    assert!(a.contains("\nn,len,upper,lower,minus_log_2upper,"));
    assert!(a.contains("# config={"));
}

#[test]
fn report_table_has_constants() {
    let out = lab(&[
        "report", "--alpha-n-max", "3", "--alpha-max-len", "10", "--beta-max-len", "10", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let body = csv_body(&out);
    assert!(body.contains("name,closed_form,value"));
    assert!(body.contains("alpha(3),exact,8"));
    assert!(body.contains("mu,"));
}

#[test]
fn verify_subset() {
    let out = lab(&["verify", "--only", "2,4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["checks"].as_array().unwrap().len(), 2);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gen.csv");
    let out = lab(&["gen", "--n", "1", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# tool=lcs-lab"));
    assert!(text.contains("n,len_a,len_b\n0,1,1\n1,4,4\n"));
}

use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_spets");

fn spets(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("spawn spets")
}

fn report(args: &[&str]) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.json");
    let mut a: Vec<&str> = args.to_vec();
    a.extend(["--quiet", "--out", p.to_str().unwrap()]);
    let out = spets(&a);
    let v = serde_json::from_slice(&std::fs::read(&p).unwrap()).unwrap();
    (out.status.code().unwrap(), v)
}

#[test]
fn dimb0_a1() {
    let (code, r) = report(&["dimb0", "--group", "A1", "--l", "3", "--a", "1", "--q", "4"]);
    assert_eq!(code, 0);
    assert_eq!(r["schema"], "spets-report");
    assert_eq!(r["version"], 1);
    let d = &r["runs"][0]["data"];
    assert_eq!(d["conj12"][0]["dim"]["input"], "42");
    assert_eq!(d["conj12"][0]["dim"]["v"], 1);
    assert!(r["runs"][0]["verdicts"].as_array().unwrap().iter().all(|v| v["pass"] == true));
}

#[test]
fn census_a2() {
    let (code, r) = report(&["census", "--group", "A2", "--l", "5"]);
    assert_eq!(code, 0);
    let d = &r["runs"][0]["data"];
    assert_eq!(d["census"][0]["entries"][0]["orbits"], 2);
    assert_eq!(d["os_polynomials"][0]["roots"], serde_json::json!([1, 2]));
}

#[test]
fn group_c3() {
    let (code, r) = report(&["group", "--group", "C(3)"]);
    assert_eq!(code, 0);
    assert_eq!(r["runs"][0]["data"]["order"], 3);
    assert_eq!(r["runs"][0]["data"]["degrees"], serde_json::json!([3]));
}

#[test]
fn batch_order_is_stable() {
    let (code, r) = report(&["dimb0", "--group", "A1", "--group", "C(3)", "--l", "7,13", "--jobs", "2"]);
    assert_eq!(code, 0);
    let keys: Vec<&str> = r["runs"].as_array().unwrap().iter().map(|x| x["key"].as_str().unwrap()).collect();
    assert_eq!(keys, ["A1 l=7 a=1", "A1 l=13 a=1", "C(3) l=7 a=1", "C(3) l=13 a=1"]);
}

#[test]
fn usage_and_config_errors_exit_one() {
    assert_eq!(spets(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(spets(&["dimb0", "--group", "A1"]).status.code(), Some(1));
    // ℓ divides |W|
    let out = spets(&["dimb0", "--group", "A2", "--l", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("divides"));
    // ℓ^a does not exactly divide q - 1
    assert_eq!(spets(&["dimb0", "--group", "A1", "--l", "3", "--q", "10"]).status.code(), Some(1));
    assert_eq!(spets(&["group", "--group", "G(4,2,2)"]).status.code(), Some(1));
    assert_eq!(spets(&["--help"]).status.code(), Some(0));
}

#[test]
fn failed_verdict_exits_two_after_writing() {
    // odd q: the classical relation does not hold in 𝒴′
    let (code, r) = report(&["classical", "--q", "7", "--l", "3"]);
    assert_eq!(code, 2);
    assert_eq!(r["pass"], false);
    assert_eq!(r["runs"][0]["data"]["classical_relation"], false);
    assert_eq!(r["runs"][0]["data"]["products_ok"], true);
}

#[test]
fn csv_summary() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("s.csv");
    let out = spets(&["schur", "--group", "B2", "--group", "C(4)", "--quiet", "--csv", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&p).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("criterion,command,config,check,pass"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2 * (1 + 2 * 3));
    assert!(rows.iter().all(|r| r.ends_with(",PASS")));
}

#[test]
fn cache_dir_does_not_change_reports() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().to_str().unwrap();
    let (_, cold) = report(&["dimb0", "--group", "B2", "--l", "5", "--cache-dir", c]);
    let (_, warm) = report(&["dimb0", "--group", "B2", "--l", "5", "--cache-dir", c]);
    let (_, none) = report(&["dimb0", "--group", "B2", "--l", "5"]);
    assert_eq!(cold, warm);
    assert_eq!(cold, none);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn yokonuma_dump() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("m.json");
    let out = spets(&["yokonuma", "--group", "C(3)", "--l", "7", "--quiet", "--dump", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let d: Value = serde_json::from_slice(&std::fs::read(&p).unwrap()).unwrap();
    assert_eq!(d["schema"], "spets-yokonuma-model");
    assert_eq!(d["q"], 8);
    assert_eq!(d["basis"].as_array().unwrap().len(), 21);
    assert_eq!(d["trace"][0], "7");
}

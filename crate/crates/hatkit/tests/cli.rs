use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hatkit(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hatkit"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn construct_then_analyze_doyle_holt() {
    let dir = tempfile::tempdir().unwrap();
    let out = hatkit(&["construct", "xo", "--m", "3", "--r", "9", "--q", "2", "-o", "dh.json"], dir.path());
    assert!(out.status.success());
    let out = hatkit(&["analyze", "dh.json", "--dot", "dots"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["r"], 9);
    assert_eq!(v["a"], 9);
    assert_eq!(v["jum"], 2);
    assert_eq!(v["kernel"], "D18");
    assert_eq!(v["case"], "tight");
    for f in ["graph.dot", "orientation.dot", "alt.dot"] {
        assert!(dir.path().join("dots").join(f).exists(), "{f}");
    }
}

#[test]
fn analyze_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    hatkit(&["construct", "catalog", "cay-r6-a3", "-o", "c.json"], dir.path());
    let a = hatkit(&["analyze", "c.json"], dir.path());
    let b = hatkit(&["analyze", "c.json"], dir.path());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn no_group_mode() {
    let dir = tempfile::tempdir().unwrap();
    hatkit(&["construct", "xo", "--m", "3", "--r", "9", "--q", "2", "--format", "graph6", "-o", "dh.g6"], dir.path());
    let out = hatkit(&["analyze", "dh.g6"], dir.path());
    assert_eq!(out.status.code(), Some(6));
    let out = hatkit(&["analyze", "dh.g6", "--no-group"], dir.path());
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["tag"], "orientation_only");
    assert_eq!(v["a"], 9);
    assert!(v["kernels"].is_null());
}

#[test]
fn generators_file_supplies_group() {
    let dir = tempfile::tempdir().unwrap();
    hatkit(&["construct", "wreath", "--n", "5", "--format", "edgelist", "-o", "w.txt"], dir.path());
    hatkit(&["construct", "wreath", "--n", "5", "-o", "w.json"], dir.path());
    let bundle: Value = serde_json::from_slice(&std::fs::read(dir.path().join("w.json")).unwrap()).unwrap();
    let gens: String = bundle["generators"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g.to_string() + "\n")
        .collect();
    std::fs::write(dir.path().join("w.gens"), gens).unwrap();
    let out = hatkit(&["kernels", "w.txt", "--generators", "w.gens"], dir.path());
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["classification"]["case_id"], "ii");
}

#[test]
fn iso_and_aut() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    hatkit(&["construct", "xo", "--m", "6", "--r", "13", "--q", "2", "--format", "sparse6", "-o", "a.s6"], p);
    hatkit(&["construct", "xo", "--m", "6", "--r", "13", "--q", "3", "--format", "sparse6", "-o", "b.s6"], p);
    assert_eq!(json_of(&hatkit(&["iso", "a.s6", "b.s6"], p))["isomorphic"], false);
    hatkit(&["construct", "xo", "--m", "6", "--r", "13", "--q", "11", "-o", "c.json"], p);
    let v = json_of(&hatkit(&["iso", "a.s6", "c.json"], p));
    assert_eq!(v["isomorphic"], true);
    assert_eq!(v["witness"].as_array().unwrap().len(), 78);
    hatkit(&["construct", "circ", "--n", "5", "--jumps", "1,2", "--format", "edgelist", "-o", "k5.txt"], p);
    let v = json_of(&hatkit(&["aut", "k5.txt"], p));
    assert_eq!(v["order"], 120);
    assert_eq!(v["arc_transitive"], true);
}

#[test]
fn quotient_and_altgraph() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    hatkit(&["construct", "catalog", "cay-r10-a5", "-o", "c.json"], p);
    let out = hatkit(&["quotient", "c.json"], p);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["passes"], true);
    assert_eq!(v["kernel_structure"], "C5");
    let out = hatkit(&["altgraph", "c.json"], p);
    assert!(out.status.success());
    let first = String::from_utf8(out.stdout).unwrap();
    assert!(first.lines().next().unwrap().split_whitespace().count() == 2);
}

#[test]
fn verify_reports_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let a = hatkit(&["verify", "allkernels", "--no-timing"], p);
    assert!(a.status.success());
    let b = hatkit(&["verify", "allkernels", "--no-timing"], p);
    assert_eq!(a.stdout, b.stdout);
    let v = json_of(&a);
    assert_eq!(v[0]["failed"], 0);
    assert_eq!(hatkit(&["verify", "nonsense"], p).status.code(), Some(2));
}

#[test]
fn verify_ingested_instance() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    hatkit(&["construct", "catalog", "cay-r9-a6", "-o", "x.json"], p);
    let out = hatkit(&["verify", "andivr-props", "--only-instances", "--instance", "x.json"], p);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v[0]["passed"], 1);
    assert_eq!(v[0]["instances"][0]["invariants"]["rho_order"], 6);
}

#[test]
fn error_classes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(hatkit(&["construct", "xo", "--m", "3", "--r", "9", "--q", "3"], p).status.code(), Some(5));
    assert_eq!(hatkit(&["ingest", "missing.txt"], p).status.code(), Some(3));
    std::fs::write(p.join("bad.txt"), "4 4\n0 1\n1 2\n").unwrap();
    assert_eq!(hatkit(&["ingest", "bad.txt"], p).status.code(), Some(4));
    std::fs::write(p.join("bad.json"), "{\"graph\": {\"n\": 3,").unwrap();
    let out = hatkit(&["ingest", "bad.json"], p);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
}

#[test]
fn ingest_summary() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    std::fs::write(p.join("c4.txt"), "4 4\n0 1\n1 2\n2 3\n3 0\n").unwrap();
    let v = json_of(&hatkit(&["ingest", "c4.txt"], p));
    assert_eq!(v["n"], 4);
    assert_eq!(v["regular_degree"], 2);
    assert_eq!(v["graph6"], "Cl");
}

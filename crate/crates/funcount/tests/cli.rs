use std::path::PathBuf;
use std::process::{Command, Output};

use funcount::report::without_timing;
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_funcount")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is a report")
}

#[test]
fn l1_fixture_counts_eight() {
    let r = report(&["count", "--structure", &fixture("l1.structure"), "--formula", &fixture("l1.formula"), "--mode", "skolem"]);
    assert_eq!(r["outputs"]["count"], "8");
    assert_eq!(r["budget"]["used"], "19683");
    assert_eq!(r["inputs"].as_array().unwrap().len(), 2);
    assert_eq!(r["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn trivially_true_sentence_counts_one_in_every_mode() {
    for mode in ["rel", "func", "skolem"] {
        let r = report(&["count", "--structure", &fixture("graph.structure"), "--formula", &fixture("true.formula"), "--mode", mode]);
        assert_eq!(r["outputs"]["count"], "1", "{mode}");
    }
}

#[test]
fn rel_and_func_agree_after_rel2func() {
    let rel = report(&["count", "--structure", &fixture("graph.structure"), "--formula", &fixture("rel.formula"), "--mode", "rel"]);
    let dir = tempfile::tempdir().unwrap();
    let t = report(&["transform", "--formula", &fixture("rel.formula"), "--pass", "rel2func"]);
    let translated = dir.path().join("func.formula");
    std::fs::write(&translated, t["outputs"]["output"].as_str().unwrap()).unwrap();
    let func = report(&["count", "--structure", &fixture("graph.structure"), "--formula", translated.to_str().unwrap(), "--mode", "func"]);
    assert_eq!(rel["outputs"]["count"], func["outputs"]["count"]);
    assert_eq!(rel["outputs"]["count"], "5");
}

#[test]
fn to_pi1_on_sigma2_fixture() {
    let r = report(&["transform", "--formula", &fixture("sigma2.formula"), "--pass", "to-pi1", "--structure", &fixture("graph.structure")]);
    let out = funcount_core::parse_query(r["outputs"]["output"].as_str().unwrap(), None).unwrap();
    assert!(funcount_core::formula::classify_fragment(&out.body).alternation.within_pi(1));
    assert_eq!(r["outputs"]["claim"], "equal (functional = functional)");
    assert_eq!(r["outputs"]["check"]["holds"], true);
}

#[test]
fn skolemize_gives_prefix_restricted_output() {
    let r = report(&["transform", "--formula", &fixture("pi1_exists.formula"), "--pass", "skolemize"]);
    let out = funcount_core::parse_query(r["outputs"]["output"].as_str().unwrap(), None).unwrap();
    assert!(funcount_core::formula::classify_fragment(&out.body).prefix_restricted);
    assert_eq!(r["outputs"]["fresh"][0], "sk_y/1");
}

#[test]
fn denest_leaves_flat_formulas_alone() {
    let r = report(&["transform", "--formula", &fixture("flat.formula"), "--pass", "denest"]);
    assert_eq!(r["outputs"]["input"], r["outputs"]["output"]);
}

#[test]
fn circuit_commands() {
    assert_eq!(report(&["circuit", "count", "--circuit", &fixture("two_ors.circuit")])["outputs"]["proof_trees"], "4");
    assert_eq!(report(&["circuit", "eval", "--circuit", &fixture("two_ors.circuit")])["outputs"]["value"], true);

    let dir = tempfile::tempdir().unwrap();
    let emitted = dir.path().join("l1.circuit");
    let r = report(&[
        "circuit",
        "from-formula",
        "--structure",
        &fixture("l1.structure"),
        "--formula",
        &fixture("l1.formula"),
        "--emit",
        emitted.to_str().unwrap(),
    ]);
    assert_eq!(r["outputs"]["proof_trees"], "8");
    assert_eq!(r["outputs"]["depth"], 3);
    assert_eq!(report(&["circuit", "count", "--circuit", emitted.to_str().unwrap()])["outputs"]["proof_trees"], "8");
}

#[test]
fn identity_interpretation_reproduces_the_structure() {
    let dir = tempfile::tempdir().unwrap();
    let emitted = dir.path().join("b.structure");
    report(&[
        "circuit",
        "interpret",
        "--interpretation",
        &fixture("identity.interp"),
        "--structure",
        &fixture("graph.structure"),
        "--emit",
        emitted.to_str().unwrap(),
    ]);
    let a = funcount::formats::parse_structure(&std::fs::read_to_string(fixture("graph.structure")).unwrap()).unwrap();
    let b = funcount::formats::parse_structure(&std::fs::read_to_string(&emitted).unwrap()).unwrap();
    assert_eq!(a.size(), b.size());
    for r in ["E", "P"] {
        assert_eq!(a.tuples(r).unwrap(), b.tuples(r).unwrap());
    }
}

#[test]
fn parity_interpretation_builds_a_circuit() {
    let r = report(&["circuit", "interpret", "--interpretation", &fixture("parity.interp"), "--structure", &fixture("word_0110.structure")]);
    assert_eq!(r["outputs"]["circuit"]["proof_trees"], "1");
}

#[test]
fn propositional_files() {
    let d = report(&["prop", "--dnf", &fixture("sample.dnf")]);
    assert_eq!(d["outputs"]["truth_table"], "12");
    assert_eq!(d["outputs"]["first_order"], "12");
    let c = report(&["prop", "--cnf", &fixture("sample.cnf")]);
    assert_eq!(c["outputs"]["first_order"], "6");
}

#[test]
fn verify_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let args = ["verify", "--suite", "succ-unique", "--sizes", "1..4", "--seed", "3"];
    let one = run(&[&args[..], &["--threads", "1", "--out", out.to_str().unwrap()]].concat());
    assert!(one.status.success());
    let many = run(&[&args[..], &["--threads", "4"]].concat());
    let (one, many) = (String::from_utf8(one.stdout).unwrap(), String::from_utf8(many.stdout).unwrap());
    assert_eq!(without_timing(&one), without_timing(&many));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), one);
    let r: Value = serde_json::from_str(&one).unwrap();
    assert_eq!(r["outputs"]["checked"], 4);
    assert_eq!(r["command"].as_array().unwrap().len(), args.len());
}

#[test]
fn exit_codes() {
    let bad = run(&["count", "--structure", &fixture("l1.structure"), "--formula", &fixture("sample.dnf"), "--mode", "rel"]);
    assert_eq!(bad.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&bad.stderr);
    assert!(stderr.contains("line 1, column"), "{stderr}");

    let missing = run(&["circuit", "count", "--circuit", "/nonexistent/c.circuit"]);
    assert_eq!(missing.status.code(), Some(2));

    let budget = run(&["--budget", "10", "count", "--structure", &fixture("l1.structure"), "--formula", &fixture("l1.formula"), "--mode", "skolem"]);
    assert_eq!(budget.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&budget.stderr).contains("rerun with --budget 19683"));

    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "parity", "--sizes", "0..2"]).status.code(), Some(2));
}

#[test]
fn collapsed_constants_break_the_doubling() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("collapsed.structure");
    std::fs::write(&s, "universe 2\nbuiltins LEQ BIT MIN\nrelation E/2 (0,0) (0,1)\nconstant c = 0\nconstant d = 0\n").unwrap();
    let r = report(&["count", "--structure", s.to_str().unwrap(), "--formula", &fixture("l1.formula"), "--mode", "skolem"]);
    assert_eq!(r["outputs"]["count"], "1");
}

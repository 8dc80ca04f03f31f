//! End-to-end runs of the `swb` binary: exit codes, outputs and determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

use switchboard::format::{parse_labeled, write_labeled, write_switchboard};
use switchboard::order::chain_switchboard;
use switchboard::{label_canonical, Switchboard};

fn swb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swb")).args(args).output().expect("binary runs")
}

fn file(name: &str, text: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn validate_chain_exits_zero() {
    let f = file("chain2.sb", &write_switchboard(&chain_switchboard(2)));
    assert_eq!(swb(&["validate", &f]).status.code(), Some(0));
}

#[test]
fn height_of_three_chain_is_three() {
    let f = file("chain3.sb", &write_switchboard(&chain_switchboard(3)));
    let out = swb(&["height", "--edges", &f]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "3");
}

#[test]
fn three_points_have_eight_labelings() {
    let f = file("empty3.sb", &write_switchboard(&Switchboard::empty(3)));
    let out = swb(&["labelings", &f]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "8");
}

#[test]
fn exit_code_contract() {
    // Violation: {0,1} < {2,3} with 0 disfavoring {2,3}.
    let bad = file("bad.lsb", "%lsb 1\nn 4\nlt 0 1 2 3\nup 1 2 3\n");
    let out = swb(&["validate", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("downward"));
    let garbled = file("garbled.lsb", "%lsb 1\nn four\n");
    assert_eq!(swb(&["validate", &garbled]).status.code(), Some(2));
    assert_eq!(swb(&["validate", "/nonexistent/file"]).status.code(), Some(2));
    assert_eq!(swb(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(swb(&["gen", "--n", "4", "--bogus"]).status.code(), Some(2));
    assert_eq!(swb(&["gen", "--n", "4", "--density", "3/2"]).status.code(), Some(2));
    let good = file("good.lsb", "%lsb 1\nn 4\n");
    assert_eq!(swb(&["eval", "--formula", "lt(x,y", "--obj", "x", &good]).status.code(), Some(2));
}

#[test]
fn gen_is_deterministic_and_valid() {
    let a = swb(&["gen", "--n", "7", "--seed", "42", "--density", "1/2"]);
    let b = swb(&["gen", "--n", "7", "--seed", "42", "--density", "0.5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let l = parse_labeled(&stdout(&a)).unwrap();
    assert!(l.is_valid());
    let f = file("gen7.lsb", &stdout(&a));
    assert_eq!(swb(&["validate", &f]).status.code(), Some(0));
}

#[test]
fn label_matches_library() {
    let s = chain_switchboard(3);
    let f = file("chain3-label.sb", &write_switchboard(&s));
    let out = swb(&["label", &f]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), write_labeled(&label_canonical(&s).unwrap()));
}

#[test]
fn witness_adds_a_point() {
    let f = file("chain2.lsb", &write_labeled(&label_canonical(&chain_switchboard(2)).unwrap()));
    let out = swb(&["witness", "--dir", "up", "--x", "0", "--edge", "2,3", &f]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("point 4"));
    let l = parse_labeled(&text).unwrap();
    assert!(l.is_valid() && l.n() == 5);
}

#[test]
fn eval_prints_poset_and_height() {
    let f = file("chain2-eval.lsb", &write_labeled(&label_canonical(&chain_switchboard(2)).unwrap()));
    let out = swb(&["eval", "--formula", "lt(x1,x2,y1,y2)", "--obj", "x1,x2", "--param", "y1,y2", &f]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).lines().any(|l| l == "height 2"));
}

#[test]
fn ap_failure_certificate_replays() {
    let out = swb(&["ap-failure", "--max-n", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let cert = file("cert.txt", &stdout(&out));
    assert_eq!(swb(&["ap-replay", &cert]).status.code(), Some(0));
    assert_eq!(swb(&["ap-failure", "--max-n", "4"]).status.code(), Some(1));
    // Output is byte-identical across runs.
    assert_eq!(swb(&["ap-failure", "--max-n", "6"]).stdout, out.stdout);
}

#[test]
fn sequence_and_two_stage_on_a_free_type() {
    // Base {0}, s = 1, t = 2, no order facts.
    let q = file("q.lsb", "%lsb 1\nn 3\npair 1 2\n");
    let out = swb(&["sequence", "--q", &q, "--length", "4", "--check"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).lines().all(|l| !l.ends_with("FAIL")));
    assert_eq!(swb(&["two-stage", "--q", &q, "--k1", "1", "--k2", "2"]).status.code(), Some(0));
}

#[test]
fn check_suites_pass() {
    let out = swb(&["check", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert_eq!(stdout(&out).lines().count(), 9);
}

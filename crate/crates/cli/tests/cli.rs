use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use lts_refine::fixtures;
use lts_refine::formats::{parse_lts, write_lts};
use tempfile::TempDir;

const CANON_COND: &str = "condliveness {\n  C { @contains c }\n  G { @contains g }\n}\n";

fn workspace() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("L1.aut"), write_lts(&fixtures::cond_pair_left())).unwrap();
    fs::write(dir.path().join("R1.aut"), write_lts(&fixtures::cond_pair_right())).unwrap();
    fs::write(dir.path().join("PL.aut"), write_lts(&fixtures::refusal_pair_left())).unwrap();
    fs::write(dir.path().join("PR.aut"), write_lts(&fixtures::refusal_pair_right())).unwrap();
    fs::write(dir.path().join("canon-cond-liveness.prop"), CANON_COND).unwrap();
    dir
}

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ltsrefine"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Report text without the timing fields.
fn stable(text: &str) -> String {
    text.lines().filter(|l| !l.contains("elapsed-us")).collect::<Vec<_>>().join("\n")
}

#[test]
fn cond_pair_liveness_equivalence_holds() {
    let dir = workspace();
    let o = run(dir.path(), &["check", "L1", "R1", "--preorder", "liveness"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("holds: true"));
    let o = run(dir.path(), &["check", "L1", "R1", "--preorder", "liveness", "--both"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("equivalent: true"));
}

#[test]
fn cond_pair_cond_liveness_refutation_prints_witness() {
    let dir = workspace();
    let o = run(dir.path(), &["check", "L1", "R1", "--preorder", "cond-liveness", "--witness"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("holds: false"), "{out}");
    assert!(out.contains("component: failures"), "{out}");
    assert!(out.contains("witness: failure <c, {c,g}>"), "{out}");
    let quiet = run(dir.path(), &["check", "L1", "R1", "--preorder", "cond-liveness"]);
    assert_eq!(quiet.status.code(), Some(1));
    assert!(!stdout(&quiet).contains("witness:"));
}

#[test]
fn refusal_pair_pair_is_not_liveness_equivalent() {
    let dir = workspace();
    let o = run(dir.path(), &["check", "PL", "PR", "--preorder", "liveness", "--both", "--witness"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("equivalent: false"), "{out}");
    assert!(out.contains("component: failures"), "{out}");
}

#[test]
fn property_violation_names_the_trace() {
    let dir = workspace();
    let o = run(dir.path(), &["prop", "R1", "canon-cond-liveness.prop"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "property: cond-liveness\nsatisfied: false\nviolation: deadlock c\n");
    let o = run(dir.path(), &["prop", "L1", "canon-cond-liveness.prop"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn property_labels_extend_the_alphabet() {
    let dir = workspace();
    fs::write(dir.path().join("never-x.prop"), "safety {\n  x\n}\n").unwrap();
    let o = run(dir.path(), &["prop", "L1", "never-x.prop"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn dfa_escape_resolves_relative_to_the_property() {
    let dir = workspace();
    fs::create_dir(dir.path().join("props")).unwrap();
    fs::write(
        dir.path().join("props/cg.dfa"),
        "states: 3\nalphabet: c g\ninitial: 0\naccepting: 2\n0 c 1\n1 g 2\n",
    )
    .unwrap();
    fs::write(dir.path().join("props/no-cg.prop"), "safety {\n  @dfa cg.dfa\n}\n").unwrap();
    let o = run(dir.path(), &["prop", "L1", "props/no-cg.prop"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stdout(&o).contains("violation: trace c g"));
}

#[test]
fn compose_writes_a_parseable_file() {
    let dir = workspace();
    let o = run(dir.path(), &["compose", "hide { c } in (L1 |[ c ]| R1)", "--out", "out.aut"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let p = parse_lts(&fs::read_to_string(dir.path().join("out.aut")).unwrap()).unwrap();
    assert!(stdout(&o).contains(&format!("states: {}", p.num_states())));
    let again = run(dir.path(), &["compose", "hide { c } in (L1 |[ c ]| R1)"]);
    assert_eq!(stdout(&again), write_lts(&p));
}

#[test]
fn state_operator_and_renaming_files_resolve() {
    let dir = workspace();
    fs::write(dir.path().join("A.aut"), "des (0, 2, 3)\n(0, \"a\", 1)\n(1, \"a\", 2)\n").unwrap();
    fs::write(dir.path().join("M.iface"), "states: s0 s1\ns0, a -> a1, s1\ns1, a -> a2, *\n").unwrap();
    fs::write(dir.path().join("Swap.ren"), "a1 -> b\n").unwrap();
    let o = run(dir.path(), &["explore", "rename Swap in state M @ s0 in A", "--depth", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("deadlock: b a2\n"), "{out}");
    assert!(out.contains("partial-traces: 3\n"), "{out}");
}

#[test]
fn include_directories_are_searched() {
    let dir = workspace();
    let elsewhere = tempfile::tempdir().unwrap();
    let o = run(elsewhere.path(), &["-I", dir.path().to_str().unwrap(), "check", "L1", "R1", "--preorder", "safety"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn explore_lists_bounded_complete_traces() {
    let dir = workspace();
    let o = run(dir.path(), &["explore", "R1", "--depth", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for line in ["depth: 2\n", "trace: ε\n", "trace: c\n", "deadlock: c\n", "divergence: ε\n"] {
        assert!(out.contains(line), "missing {line:?} in {out}");
    }
}

#[test]
fn errors_exit_with_two_and_a_position() {
    let dir = workspace();
    let o = run(dir.path(), &["explore", "L1 |[ c ]| Missing"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("expression:1:12: unknown process `Missing`"), "{}", stderr(&o));

    fs::write(dir.path().join("Bad.aut"), "des (0, 1, 2)\n(0, \"a\", 5)\n").unwrap();
    let o = run(dir.path(), &["explore", "Bad"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Bad.aut:2:"), "{}", stderr(&o));

    let o = run(dir.path(), &["check", "L1", "R1", "--preorder", "fast"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(dir.path(), &["prop", "L1", "absent.prop"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(dir.path(), &["explore", "hide { z } in L1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reports_are_reproducible() {
    let dir = workspace();
    let args = ["check", "PL", "PR", "--preorder", "lt", "--both", "--witness"];
    let first = run(dir.path(), &args);
    let second = run(dir.path(), &args);
    assert_eq!(stable(&stdout(&first)), stable(&stdout(&second)));
}

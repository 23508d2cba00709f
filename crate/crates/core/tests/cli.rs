// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn igl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_igl"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn records(o: &Output) -> Vec<Value> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn parse_prints_canonical_form() {
    let o = igl(&["parse", "p->p"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "p -> p\n");
}

#[test]
fn parse_reports_column() {
    let o = igl(&["parse", "p ->"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("column 5"), "{}", stderr(&o));
}

#[test]
fn parse_rejects_undeclared_character() {
    let o = igl(&["--alphabet", "a", "parse", "<b>p"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("undeclared character `b`"));
    let o = igl(&[
        "--grammar",
        "tests/fixtures/transitive.grammar",
        "parse",
        "<b>p",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn audit_reflexive_world() {
    let o = igl(&["audit", "--model", "tests/fixtures/reflexive.model"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "ok\n");
}

#[test]
fn audit_reports_f1_witnesses() {
    let o = igl(&[
        "--machine",
        "audit",
        "--model",
        "tests/fixtures/f1_violation.model",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let recs = records(&o);
    let f1: Vec<&Value> = recs.iter().filter(|r| r["condition"] == "F1").collect();
    assert_eq!(f1.len(), 1);
    assert_eq!(f1[0]["character"], "a");
    assert_eq!(
        (&f1[0]["w"], &f1[0]["v"], &f1[0]["v_prime"]),
        (&"w".into(), &"v".into(), &"v2".into())
    );
    assert_eq!(recs.last().unwrap()["status"], "violations");
}

#[test]
fn audit_saturates_transitive_chain() {
    let g = "tests/fixtures/transitive.grammar";
    let o = igl(&[
        "--grammar",
        g,
        "audit",
        "--model",
        "tests/fixtures/chain.model",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("path(a -> a a)"));
    let o = igl(&[
        "--grammar",
        g,
        "audit",
        "--saturate",
        "--model",
        "tests/fixtures/chain.model",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "ok\n");
}

#[test]
fn saturate_emits_loadable_model() {
    let g = "tests/fixtures/transitive.grammar";
    let o = igl(&[
        "--grammar",
        g,
        "saturate",
        "--model",
        "tests/fixtures/chain.model",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).contains("rel a: w0 w1, w0 w2, w1 w2"),
        "{}",
        stdout(&o)
    );
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("closed.model");
    std::fs::write(&path, stdout(&o)).unwrap();
    let o = igl(&["--grammar", g, "audit", "--model", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn check_truth_values() {
    let m = "tests/fixtures/reflexive.model";
    let o = igl(&["check", "--model", m, "--world", "w", "false"]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "false\n".into()));
    let o = igl(&["check", "--model", m, "--world", "w", "p -> p"]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "true\n".into()));
    let o = igl(&["check", "--model", m, "--world", "nowhere", "p"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_refuses_non_models() {
    let o = igl(&[
        "check",
        "--model",
        "tests/fixtures/f1_violation.model",
        "--world",
        "w",
        "p",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn prove_accepts_a1_instance() {
    let o = igl(&["prove", "tests/corpus/a1.proof"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "accepted: [a](p -> q) -> ([a]p -> [a]q)\n");
}

#[test]
fn prove_rejects_swapped_operands() {
    let text = std::fs::read_to_string("tests/corpus/box_projection.proof").unwrap();
    let text = text.replace("; mp 1 2", "; mp 2 1");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("swapped.proof");
    std::fs::write(&path, text).unwrap();
    let o = igl(&["--machine", "prove", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let r = &records(&o)[0];
    assert_eq!(r["line"], 3);
    assert_eq!(r["detail"]["reason"], "mp-shape");
}

#[test]
fn prove_names_unavailable_schema() {
    let proof = "tests/corpus/reflexive_t.proof";
    let o = igl(&["prove", proof]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stdout(&o).contains("rejected at line 1: axiom `T_a` is not available"),
        "{}",
        stdout(&o)
    );
    let o = igl(&[
        "--grammar",
        "tests/corpus/reflexive.grammar",
        "prove",
        proof,
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn refute_peirce_and_reload() {
    let o = igl(&["refute", "((p -> q) -> p) -> p"]);
    assert_eq!(o.status.code(), Some(1));
    let dump = stdout(&o);
    assert!(dump.starts_with("# countermodel"));
    let m = igl::model::parse_model(&dump, None).unwrap();
    assert_eq!(m.world_count(), 2);
}

#[test]
fn refute_valid_formulas() {
    let o = igl(&["refute", "~<a>false", "--max-worlds", "3"]);
    assert_eq!(
        (o.status.code(), stdout(&o)),
        (Some(0), "valid-up-to 3\n".into())
    );
    let o = igl(&[
        "--grammar",
        "tests/corpus/reflexive.grammar",
        "refute",
        "p -> <a>p",
    ]);
    assert_eq!(
        (o.status.code(), stdout(&o)),
        (Some(0), "valid-up-to 3\n".into())
    );
}

#[test]
fn harness_default_is_clean() {
    let o = igl(&["harness"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with(" 0 failures\n"), "{}", stdout(&o));
}

#[test]
fn harness_detects_injected_fault() {
    let o = igl(&["harness", "--inject-fault", "local-box"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn harness_is_deterministic() {
    let args = ["--machine", "harness", "--depth", "3", "--seed", "7"];
    let first = igl(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, igl(&args).stdout);
    let summary = &records(&first)[0];
    assert_eq!(
        (&summary["seed"], &summary["depth"]),
        (&7.into(), &3.into())
    );
}

#[test]
fn missing_file_is_input_error() {
    let missing: PathBuf = ["tests", "fixtures", "absent.model"].iter().collect();
    let o = igl(&["audit", "--model", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

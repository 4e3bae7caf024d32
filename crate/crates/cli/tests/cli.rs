use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn qbcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qbcat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_fixtures() {
    for f in [
        "terminal.json",
        "arrow.json",
        "e_ac.json",
        "e_ch.json",
        "e_x.json",
    ] {
        let out = qbcat(&["validate", path(&fixture(f))]);
        assert_eq!(code(&out), 0, "{f}: {}", stdout(&out));
    }
}

#[test]
fn validate_reports_violations() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::copy(fixture("terminal.json"), dir.path().join("terminal.json")).unwrap();
    std::fs::write(
        &bad,
        r#"{"base": "terminal.json", "objects": [{"id": "a", "extent": "*"}], "homs": {}}"#,
    )
    .unwrap();
    let out = qbcat(&["--json", "validate", path(&bad)]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["violations"].as_array().unwrap().len(), 1);
}

#[test]
fn antichain_is_not_topological() {
    let out = qbcat(&["check", "topological", path(&fixture("e_ac.json"))]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("sieve without a final lifting"));
    let out = qbcat(&["--json", "check", "total", path(&fixture("e_ac.json"))]);
    assert_eq!(code(&out), 1);
    let cx = &json(&out)["counterexample"];
    assert_eq!(cx["extent"], "*");
    assert_eq!(cx["components"]["a"], serde_json::json!([]));
}

#[test]
fn chain_checks() {
    for prop in ["topological", "total", "cototal"] {
        assert_eq!(
            code(&qbcat(&["check", prop, path(&fixture("e_ch.json"))])),
            0,
            "{prop}"
        );
    }
    let out = qbcat(&["--json", "check", "cuts", path(&fixture("e_ch.json"))]);
    assert_eq!(json(&out).as_array().unwrap().len(), 2);
}

#[test]
fn completion_is_total() {
    let dir = tempfile::tempdir().unwrap();
    let out_file = dir.path().join("out.json");
    let out = qbcat(&[
        "complete",
        path(&fixture("e_ac.json")),
        "-o",
        path(&out_file),
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert_eq!(code(&qbcat(&["check", "total", path(&out_file)])), 0);
    let embedding = dir.path().join("out.embedding.json");
    assert_eq!(code(&qbcat(&["validate", path(&embedding)])), 0);
    let out = qbcat(&["--json", "dense", path(&embedding)]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["codense"], true);
    let completion: Value =
        serde_json::from_str(&std::fs::read_to_string(&out_file).unwrap()).unwrap();
    assert_eq!(completion["objects"].as_array().unwrap().len(), 4);
}

#[test]
fn explicit_embedding_path() {
    let dir = tempfile::tempdir().unwrap();
    let (r, j) = (dir.path().join("r.json"), dir.path().join("j.json"));
    let out = qbcat(&[
        "complete",
        path(&fixture("e_ch.json")),
        "-o",
        path(&r),
        "--embedding",
        path(&j),
    ]);
    assert_eq!(code(&out), 0);
    // The chain is total, so J is an equivalence and has both adjoints.
    assert_eq!(code(&qbcat(&["adjoint", "right", path(&j)])), 0);
    assert_eq!(code(&qbcat(&["adjoint", "left", path(&j)])), 0);
}

#[test]
fn embedding_of_antichain_has_no_right_adjoint() {
    let dir = tempfile::tempdir().unwrap();
    let r = dir.path().join("r.json");
    qbcat(&["complete", path(&fixture("e_ac.json")), "-o", path(&r)]);
    let out = qbcat(&[
        "adjoint",
        "right",
        path(&dir.path().join("r.embedding.json")),
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn lifting() {
    let ch = fixture("e_ch.json");
    let out = qbcat(&[
        "--json",
        "lift",
        "final",
        path(&ch),
        "--apex",
        "*",
        "--leg",
        "0:id",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["liftings"], serde_json::json!(["0"]));
    let out = qbcat(&["lift", "final", path(&fixture("e_x.json")), "--apex", "Y"]);
    assert_eq!(code(&out), 1);
    let out = qbcat(&["lift", "final", path(&ch), "--apex", "*", "--leg", "0"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn presheaves_and_isbell_from_stdin() {
    let ch = fixture("e_ch.json");
    let out = qbcat(&["--json", "presheaves", path(&ch), "--extent", "*"]);
    assert_eq!(code(&out), 0);
    let list = json(&out);
    assert_eq!(list.as_array().unwrap().len(), 3);
    assert!(list[0]["id"].as_str().unwrap().starts_with("ps_"));

    let mut child = Command::new(env!("CARGO_BIN_EXE_qbcat"))
        .args(["--json", "isbell", "up", path(&ch), "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"extent": "*", "components": {"0": ["id"]}}"#)
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(code(&out), 0);
    let up = json(&out);
    assert_eq!(up["components"]["0"], serde_json::json!(["id"]));
    assert_eq!(up["components"]["1"], serde_json::json!(["id"]));
}

#[test]
fn main_theorem_agrees_on_fixtures() {
    for (f, total) in [
        ("e_ac.json", false),
        ("e_ch.json", true),
        ("e_x.json", false),
    ] {
        let out = qbcat(&["--json", "main-theorem", path(&fixture(f))]);
        assert_eq!(code(&out), 0, "{f}");
        let v = json(&out);
        assert_eq!(v["agree"], true);
        assert_eq!(v["total"], total);
    }
}

#[test]
fn json_output_is_stable() {
    let ex = fixture("e_x.json");
    let args = ["--json", "presheaves", path(&ex)];
    assert_eq!(qbcat(&args).stdout, qbcat(&args).stdout);
}

#[test]
fn exit_codes_for_errors() {
    assert_eq!(
        code(&qbcat(&["check", "total", "/nonexistent/file.json"])),
        2
    );
    assert_eq!(
        code(&qbcat(&[
            "validate",
            path(&fixture("e_ch.json")),
            "--bogus"
        ])),
        2
    );
    assert_eq!(
        code(&qbcat(&[
            "--cap",
            "1",
            "check",
            "total",
            path(&fixture("e_ch.json"))
        ])),
        3
    );
}

#[test]
fn fuzz_runs_clean() {
    let dir = tempfile::tempdir().unwrap();
    let out = qbcat(&[
        "--json",
        "--parallel",
        "2",
        "fuzz",
        "--seed",
        "7",
        "--cases",
        "10",
        "--max-base-morphisms",
        "6",
        "--out-dir",
        path(dir.path()),
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let v = json(&out);
    assert_eq!(v["cases"], 10);
    assert_eq!(v["failures"], serde_json::json!([]));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

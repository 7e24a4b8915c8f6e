//! Integration tests for the binary: flags, diagnostics, and the shape of
//! emitted documents and reports.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_sofic")
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sofic-cli-{name}"));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run_in(dir: &Path, args: &[&str]) -> (i32, String, String) {
    let out = Command::new(bin())
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn examples_lists_the_bundle() {
    let dir = tmpdir("examples");
    let (code, stdout, _) = run_in(&dir, &["examples"]);
    assert_eq!(code, 0);
    for name in [
        "shift:golden-mean",
        "shift:even-shift",
        "code:no-retract",
        "code:min",
        "code:xor",
    ] {
        assert!(stdout.contains(name), "missing {name} in: {stdout}");
    }
}

#[test]
fn emitted_documents_parse_back() {
    let dir = tmpdir("emit");
    for name in ["golden-mean", "min", "xor", "no-retract"] {
        let (code, _, _) = run_in(&dir, &["examples", "--emit", name, "--dir", "."]);
        assert_eq!(code, 0, "emitting {name}");
        assert!(dir.join(format!("{name}.json")).exists());
    }
    // the emitted shift validates
    let (code, stdout, _) = run_in(
        &dir,
        &["--json", "check", "--property", "sft", "--shift", "golden-mean.json"],
    );
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["verdicts"][0]["step"], serde_json::json!(1));
}

#[test]
fn parse_errors_carry_position_information() {
    let dir = tmpdir("diag");
    std::fs::write(dir.join("broken.json"), "{\"alphabet\": [\"0\"],\n  \"kind\": }").unwrap();
    let (code, _, stderr) = run_in(
        &dir,
        &["check", "--property", "sft", "--shift", "broken.json"],
    );
    assert_eq!(code, 2);
    assert!(
        stderr.contains("line") || stderr.contains("column"),
        "diagnostics lack position info: {stderr}"
    );
}

#[test]
fn unknown_property_is_an_error() {
    let dir = tmpdir("prop");
    let (code, _, stderr) = run_in(&dir, &["check", "--property", "bogus"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("unknown property"));
}

#[test]
fn gen_is_seed_deterministic() {
    let dir = tmpdir("gen");
    let (c1, _, _) = run_in(
        &dir,
        &["gen", "--kind", "sft", "--symbols", "3", "--seed", "1", "--to", "a.json"],
    );
    let (c2, _, _) = run_in(
        &dir,
        &["gen", "--kind", "sft", "--symbols", "3", "--seed", "1", "--to", "b.json"],
    );
    assert_eq!((c1, c2), (0, 0));
    let a = std::fs::read(dir.join("a.json")).unwrap();
    let b = std::fs::read(dir.join("b.json")).unwrap();
    assert_eq!(a, b);
    // generated documents are valid inputs
    let (code, _, _) = run_in(&dir, &["check", "--property", "sft", "--shift", "a.json"]);
    assert_eq!(code, 0, "generated vertex shifts are SFTs");
    let (code, _, _) = run_in(
        &dir,
        &[
            "gen", "--kind", "code", "--shift", "a.json", "--symbols", "2", "--seed", "4",
            "--to", "c.json",
        ],
    );
    assert_eq!(code, 0);
    let (code, _, _) = run_in(
        &dir,
        &["check", "--property", "minimal-retract", "--code", "c.json"],
    );
    assert!(code == 0 || code == 1, "decider must run on generated codes");
}

#[test]
fn language_equal_via_files() {
    let dir = tmpdir("lang");
    run_in(&dir, &["examples", "--emit", "full-3", "--dir", "."]);
    run_in(&dir, &["construct", "--kind", "example-sec3", "--dir", "."]);
    let (code, _, _) = run_in(
        &dir,
        &[
            "check",
            "--property",
            "language-equal",
            "--shift",
            "example-sec3-image.json",
            "--other",
            "full-3.json",
        ],
    );
    assert_eq!(code, 0);
}

#[test]
fn eresolving_properties_via_files() {
    let dir = tmpdir("eres");
    // interleaved bundled codes are always right eresolving
    run_in(&dir, &["examples", "--emit", "sqrt-no-retract", "--dir", "."]);
    let (code, _, _) = run_in(
        &dir,
        &["check", "--property", "eresolving", "--code", "sqrt-no-retract.json"],
    );
    assert_eq!(code, 0);
    run_in(&dir, &["examples", "--emit", "eresolving-failure", "--dir", "."]);
    let (code, stdout, _) = run_in(
        &dir,
        &[
            "--json",
            "check",
            "--property",
            "eresolving",
            "--code",
            "eresolving-failure.json",
        ],
    );
    assert_eq!(code, 1);
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["verdicts"][0]["failure"][0], serde_json::json!("1"));
    let (code, _, _) = run_in(
        &dir,
        &[
            "check",
            "--property",
            "left-eresolving",
            "--code",
            "eresolving-failure.json",
        ],
    );
    assert!(code == 0 || code == 1);
}

#[test]
fn construct_outputs_are_loadable() {
    let dir = tmpdir("construct");
    run_in(&dir, &["examples", "--emit", "min", "--dir", "."]);
    let (code, _, _) = run_in(
        &dir,
        &["construct", "--kind", "retract-zero", "--code", "min.json", "--dir", "rz"],
    );
    assert_eq!(code, 0);
    let (code, _, _) = run_in(
        &dir,
        &[
            "check",
            "--property",
            "retract",
            "--n",
            "0",
            "--code",
            "rz/retract-zero-code.json",
        ],
    );
    assert_eq!(code, 0, "recoded code has retract zero");
    let (code, _, _) = run_in(
        &dir,
        &["construct", "--kind", "sqrt", "--code", "min.json", "--dir", "sq"],
    );
    assert_eq!(code, 0);
    let (code, _, _) = run_in(
        &dir,
        &["check", "--property", "eresolving", "--code", "sq/sqrt-code.json"],
    );
    assert_eq!(code, 0);
}

#[test]
fn caps_reject_oversized_documents() {
    let dir = tmpdir("caps");
    run_in(&dir, &["examples", "--emit", "golden-mean", "--dir", "."]);
    let (code, _, stderr) = run_in(
        &dir,
        &[
            "--max-states",
            "1",
            "check",
            "--property",
            "sft",
            "--shift",
            "golden-mean.json",
        ],
    );
    assert_eq!(code, 2);
    assert!(stderr.contains("max-states"), "cap diagnostics: {stderr}");
}

#[test]
fn experiment_violation_free_and_reproducible() {
    let dir = tmpdir("exp");
    let (c1, out1, _) = run_in(
        &dir,
        &["--json", "experiment-kbound", "--count", "15", "--seed", "21"],
    );
    let (c2, out2, _) = run_in(
        &dir,
        &["--json", "experiment-kbound", "--count", "15", "--seed", "21"],
    );
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(out1, out2);
    let report: serde_json::Value = serde_json::from_str(&out1).unwrap();
    assert_eq!(report["verdicts"][0]["violations"], serde_json::json!(0));
    assert_eq!(report["seed"], serde_json::json!(21));
}

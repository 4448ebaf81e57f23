//! End-to-end checks of the `sectorial` binary: exit codes, output
//! formats, and file side effects.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sectorial"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary launches")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write_matrix(dir: &Path, name: &str, json: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path
}

const WORKED: &str = r#"{"n":2,"entries":[[[3,2],[0,0]],[[0,0],[1,0]]]}"#;
const NILPOTENT: &str = r#"{"n":2,"entries":[[[0,0],[1,0]],[[0,0],[0,0]]]}"#;

#[test]
fn radius_reports_the_spectral_value_for_normal_input() {
    let dir = TempDir::new().unwrap();
    let m = write_matrix(dir.path(), "a.json", WORKED);
    let out = run(&["radius", m.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let w: f64 = text
        .lines()
        .find(|l| l.starts_with("w(A)"))
        .and_then(|l| l.split('=').nth(1))
        .and_then(|v| v.trim().split(' ').next())
        .unwrap()
        .parse()
        .unwrap();
    assert!((w - 13f64.sqrt()).abs() <= 1e-9, "w = {w}");
    assert!(text.contains("gamma"), "{text}");
}

#[test]
fn radius_handles_the_nonnormal_shift() {
    let dir = TempDir::new().unwrap();
    let m = write_matrix(dir.path(), "n.json", NILPOTENT);
    let out = run(&["radius", m.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let w: f64 = text
        .lines()
        .find(|l| l.starts_with("w(A)"))
        .and_then(|l| l.split('=').nth(1))
        .and_then(|v| v.trim().split(' ').next())
        .unwrap()
        .parse()
        .unwrap();
    assert!((w - 0.5).abs() <= 1e-9, "w = {w}");
    assert!(text.contains("not accretive"), "{text}");
}

#[test]
fn check_confirms_the_sector_bound_on_the_reference_matrix() {
    let dir = TempDir::new().unwrap();
    let m = write_matrix(dir.path(), "a.json", WORKED);
    let out = run(&["check", "thm-2.2", m.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("holds"), "{}", stdout(&out));

    let json = run(&["check", "thm-2.2", m.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&json), 0);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(parsed["bound_id"], "thm-2.2");
    assert_eq!(parsed["holds"], true);
}

#[test]
fn check_signals_inapplicable_hypotheses_with_exit_3() {
    let dir = TempDir::new().unwrap();
    let a = write_matrix(dir.path(), "a.json", NILPOTENT);
    let b = write_matrix(dir.path(), "b.json", r#"{"n":2,"entries":[[[1,0],[0,0]],[[0,0],[2,0]]]}"#);
    let out = run(&["check", "cor-2.17", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
}

#[test]
fn unknown_ids_and_wrong_arity_exit_2() {
    let dir = TempDir::new().unwrap();
    let m = write_matrix(dir.path(), "a.json", WORKED);
    let out = run(&["check", "thm-9.9", m.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("thm-9.9"), "{}", stderr(&out));

    let two = run(&["check", "thm-2.2", m.to_str().unwrap(), m.to_str().unwrap()]);
    assert_eq!(code(&two), 2, "{}", stderr(&two));

    let falsify = run(&["falsify", "nope", "--trials", "1"]);
    assert_eq!(code(&falsify), 2);
}

#[test]
fn malformed_matrix_files_exit_2() {
    let dir = TempDir::new().unwrap();
    let m = write_matrix(dir.path(), "bad.json", r#"{"n":2,"entries":[[[1,0]]]}"#);
    let out = run(&["radius", m.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let missing = run(&["radius", dir.path().join("absent.json").to_str().unwrap()]);
    assert_eq!(code(&missing), 2);
}

#[test]
fn falsify_sweep_is_clean_and_writes_the_report() {
    let dir = TempDir::new().unwrap();
    let report_path = dir.path().join("report.json");
    let out = run(&[
        "falsify",
        "lem-2.9",
        "--trials",
        "25",
        "--seed",
        "9",
        "--format",
        "json",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["violations"], 0);
    assert_eq!(parsed["trials"], 25);
    assert!(parsed["min_slack"].as_f64().unwrap() >= 0.0);
    assert!(parsed["min_slack_witness"].is_object());
    let on_disk: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(on_disk["trials"], 25);
}

#[test]
fn zero_trials_prints_the_infinite_sentinel() {
    let out = run(&["falsify", "thm-2.2", "--trials", "0"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("+inf"), "{}", stdout(&out));

    let json = run(&["falsify", "thm-2.2", "--trials", "0", "--format", "json"]);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert!(parsed["min_slack"].is_null());
}

#[test]
fn range_exports_the_boundary_scan() {
    let dir = TempDir::new().unwrap();
    let m = write_matrix(dir.path(), "i.json", r#"{"n":1,"entries":[[[1,0]]]}"#);
    let csv_path = dir.path().join("scan.csv");
    let out = run(&[
        "range",
        m.to_str().unwrap(),
        "--angles",
        "16",
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = std::fs::read_to_string(&csv_path).unwrap();
    assert!(text.starts_with("theta,p,re,im\n"));
    assert_eq!(text.lines().count(), 17);
    for line in text.lines().skip(1) {
        let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!((cells[2] - 1.0).abs() <= 1e-12 && cells[3].abs() <= 1e-12);
    }
}

#[test]
fn gen_materializes_ensemble_samples() {
    let dir = TempDir::new().unwrap();
    let config = write_matrix(
        dir.path(),
        "spec.json",
        r#"{"kind":"sectorial","n":3,"gamma_target":0.6,"modulus_range":[1.0,2.0],"seed":5}"#,
    );
    let out_dir = dir.path().join("samples");
    let out = run(&[
        "gen",
        config.to_str().unwrap(),
        "--index",
        "4",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let written = out_dir.join("sample_4_0.json");
    assert!(written.is_file());
    let radius = run(&["radius", written.to_str().unwrap()]);
    assert_eq!(code(&radius), 0);
    assert!(stdout(&out).contains("sector index"), "{}", stdout(&out));
}

#[test]
fn reproduce_passes_and_is_byte_stable() {
    let first = run(&["reproduce"]);
    assert_eq!(code(&first), 0, "{}", stderr(&first));
    assert!(stdout(&first).contains("within 1.0e-9"), "{}", stdout(&first));
    let second = run(&["reproduce"]);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn report_compares_matched_rows_and_rejects_mismatches() {
    let out = run(&[
        "report", "thm-2.2", "base-quarter", "--trials", "60", "--seed", "3", "--format", "csv",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("condition,samples,dominant,fraction"), "{text}");
    assert_eq!(text.lines().count(), 4);

    let mismatch = run(&["report", "thm-2.2", "eq-1.1-lower", "--trials", "5"]);
    assert_eq!(code(&mismatch), 2, "{}", stderr(&mismatch));
}

#[test]
fn catalog_lists_every_bound() {
    let out = run(&["catalog"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 39);
    assert!(text.contains("thm-2.2"));
    assert!(text.contains("base-kitt-comm"));
}

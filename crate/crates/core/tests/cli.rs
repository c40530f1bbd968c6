//! End-to-end runs of the `tenseig` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn tenseig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tenseig")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn generate(dir: &TempDir, example: u8, n: usize, seed: u64) -> PathBuf {
    let path = dir.path().join(format!("ex{example}_{n}_{seed}.tns"));
    let o = tenseig(&[
        "gen",
        "--example",
        &example.to_string(),
        "--n",
        &n.to_string(),
        "--seed",
        &seed.to_string(),
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "gen failed: {}", stderr(&o));
    path
}

fn field(out: &str, key: &str) -> String {
    out.lines()
        .find_map(|l| l.strip_prefix(key))
        .unwrap_or_else(|| panic!("no `{key}` line in:\n{out}"))
        .trim()
        .to_string()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_is_deterministic_per_seed() {
    let a = tenseig(&["gen", "--example", "3", "--n", "5", "--seed", "7"]);
    let b = tenseig(&["gen", "--example", "3", "--n", "5", "--seed", "7"]);
    let c = tenseig(&["gen", "--example", "3", "--n", "5", "--seed", "8"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    assert!(stdout(&a).starts_with("TNS 1\norder 4 dim 5 layout dense\n"));
}

#[test]
fn gen_rejects_unsupported_size() {
    let o = tenseig(&["gen", "--example", "5", "--n", "9"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error:"));
}

#[test]
fn eig_finds_example1_z_eigenvalue() {
    let dir = TempDir::new().unwrap();
    let t = generate(&dir, 1, 4, 0);
    let report = dir.path().join("report.json");
    let o = tenseig(&["eig", "--tensor", path_str(&t), "--starts", "5", "--report", path_str(&report)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let lambda: f64 = field(&out, "best lambda:").parse().unwrap();
    let residual: f64 = field(&out, "residual:").parse().unwrap();
    assert!((lambda + 0.9345).abs() <= 1e-3, "lambda {lambda}");
    assert!(residual <= 1e-6);
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert!(json.is_object());
}

#[test]
fn eig_largest_on_example7() {
    let dir = TempDir::new().unwrap();
    let t = generate(&dir, 7, 30, 0);
    let o = tenseig(&["eig", "--tensor", path_str(&t), "--objective", "f2", "--starts", "60", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let lambda: f64 = field(&stdout(&o), "best lambda:").parse().unwrap();
    assert!((lambda - 300.0).abs() <= 1e-6, "lambda {lambda}");
}

#[test]
fn eig_with_negative_shift_reports_zero_on_example6() {
    let dir = TempDir::new().unwrap();
    let t = generate(&dir, 6, 10, 3);
    let o = tenseig(&["eig", "--tensor", path_str(&t), "--b", "unit", "--shift", "-1", "--starts", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let lambda: f64 = field(&stdout(&o), "best lambda:").parse().unwrap();
    assert!(lambda.abs() <= 1e-6, "lambda {lambda}");
}

#[test]
fn psd_verdicts() {
    let dir = TempDir::new().unwrap();
    let ex7 = generate(&dir, 7, 30, 0);
    let o = tenseig(&["psd", "--tensor", path_str(&ex7), "--trials", "20"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(field(&stdout(&o), "verdict:").starts_with("positive definite"));

    let ex4 = generate(&dir, 4, 10, 0);
    let json = dir.path().join("psd.json");
    let o = tenseig(&["psd", "--tensor", path_str(&ex4), "--trials", "20", "--json", path_str(&json)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(field(&stdout(&o), "verdict:"), "NOT positive semidefinite");
    assert!(std::fs::metadata(&json).unwrap().len() > 0);

    let zero = dir.path().join("zero.tns");
    std::fs::write(&zero, format!("TNS 1\norder 4 dim 2 layout dense\n{}\n", ["0"; 16].join(" "))).unwrap();
    let o = tenseig(&["psd", "--tensor", path_str(&zero), "--trials", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(field(&stdout(&o), "verdict:").starts_with("positive semidefinite"));
}

#[test]
fn malformed_tensor_reports_byte_offset() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.tns");
    std::fs::write(&bad, "TNS 1\norder 2 dim 2 layout dense\n1 2 x 4\n").unwrap();
    let o = tenseig(&["psd", "--tensor", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("parse error at byte 37"), "{}", stderr(&o));
}

#[test]
fn non_spd_matrix_metric_is_rejected() {
    let dir = TempDir::new().unwrap();
    let t = generate(&dir, 1, 2, 0);
    let m = dir.path().join("m.tns");
    std::fs::write(&m, "TNS 1\norder 2 dim 2 layout dense\n1 2\n2 1\n").unwrap();
    let spec = format!("matrix:{}", path_str(&m));
    let o = tenseig(&["eig", "--tensor", path_str(&t), "--b", &spec]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error:"));
}

#[test]
fn unknown_suite_lists_the_available_ones() {
    let dir = TempDir::new().unwrap();
    let o = tenseig(&["bench", "--suite", "table9", "--out", path_str(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("table1"), "{}", stderr(&o));
}

#[test]
fn bench_writes_all_outputs() {
    let dir = TempDir::new().unwrap();
    let o = tenseig(&["bench", "--suite", "table7", "--trials", "3", "--seed", "5", "--out", path_str(dir.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for name in ["table7.csv", "table7.md", "table7_trials.csv"] {
        assert!(dir.path().join(name).is_file(), "{name} missing");
    }
}

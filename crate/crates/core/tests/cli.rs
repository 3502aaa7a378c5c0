//! The binary end to end: file formats and exit codes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin(args: &[&Path]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curve-recon")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("curve-recon-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(name: &str, v: &Value) -> PathBuf {
    let path = scratch(name);
    fs::write(&path, serde_json::to_string(v).unwrap()).unwrap();
    path
}

fn sextic_spec(b: i64) -> Value {
    json!({
        "model": {"type": "hyp_poly", "f": ["-2", "0", "0", "0", "0", "0", "1"]},
        "x0": {"field": ["-2", "0", "0", "1"], "coords": ["0", "1", "0"]},
        "B": b
    })
}

fn generate(name: &str, b: i64) -> PathBuf {
    let spec = write(&format!("{name}.spec.json"), &sextic_spec(b));
    let out = Command::new(env!("CARGO_BIN_EXE_curve-recon")).arg("generate").arg(&spec).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let path = scratch(&format!("{name}.input.json"));
    fs::write(&path, &out.stdout).unwrap();
    path
}

#[test]
fn reconstruct_then_verify_and_reject_a_perturbed_model() {
    let input = generate("sextic", 86);
    let out = bin(&[Path::new("reconstruct"), &input]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["branch"], "hyperelliptic_poly");

    let again = bin(&[Path::new("reconstruct"), &input]);
    assert_eq!(again.stdout, out.stdout, "output is not reproducible");

    let report_path = scratch("sextic.report.json");
    fs::write(&report_path, &out.stdout).unwrap();
    let ok = bin(&[Path::new("verify"), &input, &report_path]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));

    let mut bad = report;
    let f = bad["model"]["f"].as_array_mut().expect("f coefficients");
    f[0] = json!("12345");
    let bad_path = write("sextic.bad.json", &bad);
    assert_eq!(bin(&[Path::new("verify"), &input, &bad_path]).status.code(), Some(4));
}

#[test]
fn low_precision_exits_with_code_3() {
    let input = generate("low", 50);
    let out = bin(&[Path::new("reconstruct"), &input]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("86"));
}

#[test]
fn malformed_input_exits_with_code_2() {
    let path = scratch("broken.json");
    fs::write(&path, "{ not json").unwrap();
    assert_eq!(bin(&[Path::new("reconstruct"), &path]).status.code(), Some(2));
    assert_eq!(
        bin(&[Path::new("reconstruct"), Path::new("--rational-point"), Path::new("1:x:2"), &path]).status.code(),
        Some(2)
    );
}

use std::process::{Command, Output};

use serde_json::Value;

fn dimers(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dimers"))
        .args(args)
        .env_remove("DIMERS_THREADS")
        .output()
        .expect("binary runs")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("json line"))
        .collect()
}

fn single_value(args: &[&str]) -> String {
    let out = dimers(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let recs = records(&out);
    assert_eq!(recs.len(), 1);
    recs[0]["value"].as_str().unwrap().to_string()
}

fn error_kind(out: &Output) -> String {
    let line = String::from_utf8_lossy(&out.stderr);
    let rec: Value = serde_json::from_str(line.lines().last().unwrap()).unwrap();
    rec["error"].as_str().unwrap().to_string()
}

#[test]
fn count_methods() {
    assert_eq!(single_value(&["count", "--rows", "8", "--cols", "8", "--method", "spectral"]), "12988816");
    assert_eq!(single_value(&["count", "--rows", "3", "--cols", "2", "--method", "determinant"]), "3");
    assert_eq!(single_value(&["count", "--rows", "4", "--cols", "4", "--method", "all"]), "36");
    let out = dimers(&["count", "--rows", "2", "--cols", "5"]);
    let rec = &records(&out)[0];
    assert_eq!(rec["command"], "count");
    assert_eq!(rec["parameters"]["rows"], 2);
    assert_eq!(rec["parameters"]["cols"], 5);
    assert!(rec["elapsed_ms"].is_u64());
}

#[test]
fn torus_and_overtilings() {
    assert_eq!(single_value(&["torus", "--rows", "4", "--cols", "4", "--method", "all"]), "272");
    assert_eq!(single_value(&["torus", "--rows", "4", "--cols", "8", "--method", "determinant"]), "39952");
    assert_eq!(
        single_value(&["torus", "--rows", "4", "--cols", "6", "--experimental", "--method", "all"]),
        "3108"
    );
    assert_eq!(single_value(&["overtilings", "--rows", "4", "--cols", "4"]), "10724");
    assert_eq!(single_value(&["boundary", "--rows", "2", "--cols", "2"]), "2");
    assert_eq!(single_value(&["boundary", "--rows", "2", "--cols", "2", "1,1,left"]), "0");
}

#[test]
fn input_errors_exit_one() {
    let out = dimers(&["count", "--rows", "3", "--cols", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_kind(&out), "invalid-dimensions");

    let out = dimers(&["torus", "--rows", "4", "--cols", "6"]);
    assert_eq!(out.status.code(), Some(1));

    let out = dimers(&["boundary", "--rows", "2", "--cols", "2", "1,1,sideways"]);
    assert_eq!(out.status.code(), Some(1));

    let out = dimers(&["count", "--rows", "2"]);
    assert_eq!(out.status.code(), Some(1));

    assert_eq!(dimers(&["--help"]).status.code(), Some(0));
}

#[test]
fn precision_failure_exits_two() {
    let out = dimers(&["count", "--rows", "8", "--cols", "8", "--method", "spectral", "--precision-bits", "20"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_kind(&out), "precision-exhausted");
    assert!(out.stdout.is_empty());
}

#[test]
fn encode_decode_files() {
    let dir = tempfile::tempdir().unwrap();
    let text = dir.path().join("t.txt");
    let bin = dir.path().join("t.bin");
    let back = dir.path().join("back.txt");
    std::fs::write(&text, "RLDRL\nRLURL\n").unwrap();

    let code = single_value(&["encode", "-i", text.to_str().unwrap(), "-o", bin.to_str().unwrap()]);
    assert_eq!(code.len(), 5);
    let bytes = std::fs::read(&bin).unwrap();
    assert_eq!(&bytes[..4], &[0, 2, 0, 5]);

    single_value(&["decode", "-i", bin.to_str().unwrap(), "-o", back.to_str().unwrap()]);
    assert_eq!(std::fs::read_to_string(&back).unwrap(), "RLDRL\nRLURL\n");

    std::fs::write(&bin, [0u8, 2, 0]).unwrap();
    let out = dimers(&["decode", "-i", bin.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn catalan_and_entropy() {
    assert!(single_value(&["catalan", "--precision-bits", "64"]).starts_with("0.915965594177219015"));
    let out = dimers(&["entropy", "--max-n", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert_eq!(recs.len(), 4);
    let values: Vec<f64> = recs.iter().map(|r| r["value"].as_str().unwrap().parse().unwrap()).collect();
    assert!(values.windows(2).all(|w| w[0] < w[1]));
    assert!((values[3] - 12988816f64.ln() / 64.0).abs() < 1e-12);
}

#[test]
fn verify_reports_every_invariant() {
    let out = dimers(&["verify", "--max-cells", "24"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let recs = records(&out);
    assert_eq!(recs.len(), 12);
    assert!(recs.iter().all(|r| r["command"] == "verify"));
}

#[test]
fn pretty_table() {
    let out = dimers(&["--pretty", "count", "--rows", "2", "--cols", "4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("command"));
    assert!(lines[1].trim_end().ends_with(" 5"));
}

use std::fs;

use nanoheat::cli::{run_command_with, EXIT_CONFIG, EXIT_OK, SWEEP_HEADER};

fn run(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut argv = vec!["nanoheat"];
    argv.extend_from_slice(args);
    let code = run_command_with(argv, None, &mut out);
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn sweep_writes_header_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e.csv");
    let (code, _) = run(&["sweep", "--lo", "10", "--hi", "40", "--steps", "7", "--out", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), SWEEP_HEADER.join(","));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 7);
    assert!(rows.iter().all(|r| r.len() == SWEEP_HEADER.len() && r[10] == "ok"));
    assert_eq!(rows[0][4], "CASE_LT2");
}

#[test]
fn invalid_temperatures_leave_blank_cells() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let args = ["sweep", "--mode", "tcold", "--t-hot", "20", "--lo", "5", "--hi", "30", "--steps", "6"];
    let (code, _) = run(&[&args[..], &["--out", out.to_str().unwrap()]].concat());
    assert_eq!(code, EXIT_OK);
    let text = fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    let invalid: Vec<&&str> = rows.iter().filter(|r| r.ends_with("invalid")).collect();
    assert_eq!(invalid.len(), 3);
    assert!(invalid.iter().all(|r| r.split(',').filter(|c| c.is_empty()).count() == 8));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("c.csv");
    fs::write(&cfg, format!("steps = 3\nlo = 2\nhi = 4\nout = {}\n", out.display())).unwrap();
    let (code, _) = run(&["--config", cfg.to_str().unwrap(), "sweep", "--steps", "5"]);
    assert_eq!(code, EXIT_OK);
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text.lines().nth(1).unwrap().starts_with("2,"));
}

#[test]
fn bad_input_exits_with_config_code() {
    assert_eq!(run(&["sweep", "--steps", "1"]).0, EXIT_CONFIG);
    assert_eq!(run(&["sweep", "--lo", "5", "--hi", "2"]).0, EXIT_CONFIG);
    assert_eq!(run(&["--config", "/nonexistent/run.cfg", "classify"]).0, EXIT_CONFIG);
    assert_eq!(run(&["frobnicate"]).0, EXIT_CONFIG);
}

#[test]
fn classify_reports_reduced_regime() {
    let (code, text) = run(&["classify", "--e", "45"]);
    assert_eq!(code, EXIT_OK);
    assert!(text.contains("case=CASE_LT2") && text.contains("carnot_achievable=false"), "{text}");
    let (_, text) = run(&["classify", "--e", "65"]);
    assert!(text.contains("case=CASE_GT2"), "{text}");
}

#[test]
fn work_and_multicycle_run() {
    assert_eq!(run(&["work", "--e", "15"]).0, EXIT_OK);
    assert_eq!(run(&["multicycle", "--schedule", "10,100"]).0, EXIT_OK);
}

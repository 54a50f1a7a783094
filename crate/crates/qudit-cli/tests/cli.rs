//! End-to-end tests driving the `quditsim` binary: report shapes, exit
//! codes, determinism, and the documented input formats.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quditsim"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .as_mut()
        .expect("stdin piped")
        .write_all(input.as_bytes())
        .expect("stdin writes");
    child.wait_with_output().expect("binary finishes")
}

fn stdout_json(output: &Output) -> Value {
    let text = String::from_utf8_lossy(&output.stdout);
    let last = text.trim_end().lines().last().expect("stdout has a report line");
    serde_json::from_str(last).expect("report line is JSON")
}

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn dj_affine_chart_recovers_coefficients() {
    let out = run(&["dj", "--chart", &data("ternary_affine.chart")]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["status"], "ok");
    assert_eq!(report["subcommand"], "dj");
    assert_eq!(report["payload"]["decision"], "BalancedAffine");
    assert_eq!(report["payload"]["coefficients"], serde_json::json!([2, 1]));
    assert_eq!(report["payload"]["phase_constant_c"], 2);
    assert_eq!(report["payload"]["a0_simulation_only"], 1);
    assert_eq!(report["payload"]["input_affine"], serde_json::json!([1, 2, 1]));
}

#[test]
fn dj_inline_constant_affine() {
    let out = run(&["dj", "--affine", "3:0,0,0"]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["payload"]["decision"], "Constant");
    assert_eq!(report["payload"]["a0_simulation_only"], 0);
}

#[test]
fn dj_nonaffine_chart_with_sampling() {
    let out = run(&[
        "dj",
        "--chart",
        &data("ternary_nonaffine.chart"),
        "--runs",
        "20",
        "--seed",
        "7",
    ]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["payload"]["decision"], "BalancedOrNonAffine");
    let sampling = &report["payload"]["sampling"];
    assert_eq!(sampling["decision"], "NonAffineBalanced");
    assert_eq!(sampling["runs"], 20);
    assert!(sampling["outcomes"].as_array().unwrap().len() >= 2);
}

#[test]
fn dj_full_circuit_reports_y_register() {
    let out = run(&["dj", "--chart", &data("ternary_affine.chart"), "--full"]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["payload"]["circuit"], "full");
    assert_eq!(report["payload"]["y_register"], serde_json::json!([2]));
    assert_eq!(report["payload"]["coefficients"], serde_json::json!([2, 1]));
}

#[test]
fn dj_reads_function_json_from_stdin() {
    let json = std::fs::read_to_string(data("nonaffine.json")).unwrap();
    let out = run_with_stdin(&["dj", "--function", "-"], &json);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["payload"]["decision"], "BalancedOrNonAffine");
}

#[test]
fn dj_rejects_bad_chart_with_position() {
    let out = run(&["dj", "--chart", &data("bad_cell.chart")]);
    assert_eq!(out.status.code(), Some(2));
    let report = stdout_json(&out);
    let message = report["status"]["error"]["message"].as_str().unwrap();
    assert!(message.contains("line 3"), "message: {message}");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("error"));
}

#[test]
fn dj_requires_exactly_one_input() {
    let out = run(&["dj"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn classify_reports_affine_form() {
    let out = run(&["classify", "--chart", &data("ternary_affine.chart")]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["payload"]["class"], "Balanced");
    assert_eq!(report["payload"]["histogram"], serde_json::json!([3, 3, 3]));
    assert_eq!(report["payload"]["affine"], serde_json::json!([1, 2, 1]));

    let out = run(&["classify", "--function", &data("nonaffine.json")]);
    let report = stdout_json(&out);
    assert_eq!(report["payload"]["class"], "Balanced");
    assert_eq!(report["payload"]["affine"], Value::Null);
}

#[test]
fn grover_trace_emits_jsonl_and_summary() {
    let out = run(&["grover", "-n", "3", "-r", "4", "--target", "7", "--iterations", "10"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    // 11 trace rows (k = 0..=10) plus the final report.
    assert_eq!(lines.len(), 12);
    for (k, line) in lines[..11].iter().enumerate() {
        let step: Value = serde_json::from_str(line).unwrap();
        assert_eq!(step["iteration"], k as u64);
        assert!(step["norm_deviation"].as_f64().unwrap() <= 1e-10);
    }
    let report: Value = serde_json::from_str(lines[11]).unwrap();
    assert_eq!(report["payload"]["mode"], "run");
    assert_eq!(report["payload"]["iterations"], 10);
}

#[test]
fn grover_accepts_digit_targets() {
    let a = run(&["grover", "-n", "3", "-r", "2", "--target", "2,1", "--scan"]);
    let b = run(&["grover", "-n", "3", "-r", "2", "--target", "7", "--scan"]);
    assert!(a.status.success());
    assert_eq!(stdout_json(&a)["payload"]["target"], stdout_json(&b)["payload"]["target"]);
}

#[test]
fn grover_scan_small_binary_case() {
    let out = run(&["grover", "-n", "2", "-r", "2", "--target", "3", "--scan"]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["payload"]["k_opt"], 1);
    assert_eq!(report["payload"]["p_max"], 1.0);
}

#[test]
fn grover_rejects_out_of_range_target() {
    let out = run(&["grover", "-n", "2", "-r", "1", "--target", "2", "--scan"]);
    assert_eq!(out.status.code(), Some(2));
    let report = stdout_json(&out);
    assert!(report["status"]["error"]["message"]
        .as_str()
        .unwrap()
        .contains("out of range"));
}

#[test]
fn radix_study_emits_csv() {
    let out = run(&["radix-study", "--nmin", "4", "--radices", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines[0], "n,r,N,k_opt,p_max");
    assert_eq!(lines[1], "2,2,4,1,1");
}

#[test]
fn radix_study_empty_radices_is_ok() {
    let out = run(&["radix-study", "--nmin", "4", "--radices", ""]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.trim_end(), "n,r,N,k_opt,p_max");
}

#[test]
fn radix_study_json_embeds_rows_and_csv() {
    let out = run(&["radix-study", "--nmin", "4", "--radices", "2,3", "--json"]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    let rows = report["payload"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["radix"], 2);
    assert_eq!(rows[1]["radix"], 3);
    assert!(report["payload"]["csv"].as_str().unwrap().starts_with("n,r,N,k_opt,p_max"));
}

#[test]
fn radix_study_respects_dim_cap() {
    let out = run(&["radix-study", "--nmin", "64", "--radices", "2,3", "--dim-cap", "70", "--json"]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    let rows = report["payload"]["rows"].as_array().unwrap();
    assert_eq!(rows[0]["skipped"], false); // 2^6 = 64 fits
    assert_eq!(rows[1]["skipped"], true); // 3^4 = 81 does not
}

#[test]
fn verify_small_battery_passes() {
    let out = run(&["verify", "--radix-max", "8"]);
    assert!(out.status.success(), "verify failed: {}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["payload"]["all_passed"], true);
    let checks = report["payload"]["checks"].as_array().unwrap();
    assert!(checks.len() >= 20);
    let power = report["payload"]["qft_power_structure"].as_array().unwrap();
    assert_eq!(power.len(), 7); // n = 2..=8
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.lines().filter(|l| l.starts_with("PASS")).count() >= 20);
}

#[test]
fn verify_rejects_radix_max_below_two() {
    let out = run(&["verify", "--radix-max", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = [
        "dj",
        "--chart",
        &data("ternary_nonaffine.chart"),
        "--runs",
        "10",
        "--seed",
        "5",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);

    let args = ["grover", "-n", "3", "-r", "3", "--target", "5", "--iterations", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn quiet_suppresses_stderr_summary() {
    let out = run(&["dj", "--affine", "2:0,1", "--quiet"]);
    assert!(out.status.success());
    assert!(out.stderr.is_empty());
}

#[test]
fn max_dim_env_var_overrides_guard() {
    let out = bin()
        .args(["grover", "-n", "2", "-r", "12", "--target", "0", "--scan"])
        .env("QUDITSIM_MAX_DIM", "1024")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
    let report = stdout_json(&out);
    assert!(report["status"]["error"]["message"]
        .as_str()
        .unwrap()
        .contains("maximum 1024"));
}

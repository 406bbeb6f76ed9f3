use std::process::{Command, Output};

use detrace_cli::{render_report, Format};
use detrace_core::families::SignFlip;
use detrace_core::verify::Verifier;

fn detrace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_detrace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Drops the timing field so runs can be compared byte for byte.
fn without_timing(json: &str) -> String {
    json.lines().filter(|l| !l.trim_start().starts_with("\"millis\"")).collect::<Vec<_>>().join("\n")
}

#[test]
fn single_passing_check_exits_zero() {
    let out = detrace(&["verify", "thm1", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("PASS thm1 n=4 ("), "{text}");
    assert!(text.trim_end().ends_with(" ms)"));
}

#[test]
fn exhaustive_sign_sweep_passes() {
    let out = detrace(&["verify", "thm2", "--n", "5", "--eps", "exhaustive", "--seed", "1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let reports: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let reports = reports.as_array().unwrap();
    assert_eq!(reports.len(), 2);
    for r in reports {
        assert_eq!(r["status"], "pass");
        assert_eq!(r["params"]["trials"], 32);
        assert_eq!(r["params"]["eps_mode"], "exhaustive");
    }
}

#[test]
fn json_is_deterministic_modulo_timing() {
    let args = ["verify", "magnus", "--n", "4", "--trials", "20", "--seed", "7", "--format", "json"];
    let a = stdout(&detrace(&args));
    let b = stdout(&detrace(&args));
    assert_eq!(without_timing(&a), without_timing(&b));
}

#[test]
fn json_reports_follow_schema() {
    let out = detrace(&["verify", "cor5", "--max-n", "4", "--format", "json"]);
    let reports: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for r in reports.as_array().unwrap() {
        assert_eq!(r["identity"], "cor5");
        assert!(r["n"].is_u64());
        assert!(r["params"].is_object());
        assert!(r["millis"].is_u64());
        assert_eq!(r["status"], "pass");
    }
}

#[test]
fn usage_errors_exit_two_before_running() {
    for args in [
        &["verify", "thm1", "--bogus"][..],
        &["verify", "cor6", "--n", "3"],
        &["verify", "thm7", "--n", "5"],
        &["verify", "nonsense"],
        &["verify", "thm1", "--n", "2", "--max-n", "4"],
        &["verify", "thm1", "--generator", "sl2z"],
        &["verify", "thm3", "--n", "0"],
        &["verify", "trace", "--n", "3"],
        &["verify", "thm1", "--n", "9"],
        &["verify", "thm1", "--format", "yaml"],
        &["verify", "magnus", "--trials", "0"],
    ] {
        let out = detrace(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn injected_fault_exits_one_with_residual() {
    let out = detrace(&["verify", "thm1", "--n", "3", "--inject-flip", "1,2"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.starts_with("FAIL thm1 n=3"));
    assert!(text.contains("  residual: "));
}

#[test]
fn stated_magnus_form_fails_at_odd_sizes() {
    let out = detrace(&["verify", "magnus", "--n", "1", "--generator", "sl2z", "--trials", "10"]);
    assert_eq!(out.status.code(), Some(1));
    let out = detrace(&["verify", "magnus", "--n", "1", "--generator", "sl2z", "--trials", "10", "--magnus-form", "first-family"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn full_sweep_with_first_family_reading_passes() {
    let out = detrace(&[
        "verify", "all", "--max-n", "5", "--trials", "50", "--seed", "7", "--magnus-form", "first-family", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let reports: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(reports.as_array().unwrap().len() > 20);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("detrace-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = detrace(&["verify", "thm1", "--n", "2", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written[0]["identity"], "thm1");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn empty_report_list_renders_as_empty_array() {
    assert_eq!(render_report(&[], Format::Json), "[]");
    assert_eq!(render_report(&[], Format::Text), "");
}

#[test]
fn failing_report_text_includes_residual() {
    let r = Verifier::default().verify_thm1_mutated(2, Some(SignFlip { row: 1, col: 2 })).unwrap();
    let text = render_report(std::slice::from_ref(&r), Format::Text);
    assert!(text.starts_with("FAIL thm1 n=2 ("));
    assert!(text.contains(&format!("  residual: {}", r.residual.unwrap())));
}

//! Exit codes and report shape of the command-line tool.

mod common;

use std::path::Path;
use std::process::Command;

use common::*;
use serde_json::Value;

fn run(args: &[&str], input: &Path) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_gsc"))
        .args(args)
        .args(["--format", "json", "--deterministic", "--input"])
        .arg(input)
        .output()
        .expect("binary runs");
    let report = serde_json::from_slice(&out.stdout).expect("json report");
    (out.status.code().expect("exit code"), report)
}

#[test]
fn validate_exit_codes() {
    let (code, report) = run(&["validate"], &corpus_path("classical"));
    assert_eq!((code, report["status"].as_str()), (0, Some("ok")));

    let (code, report) = run(&["validate"], &fixture_path("unfolded"));
    assert_eq!((code, report["status"].as_str()), (1, Some("fail")));
    assert!(!report["payload"]["folding_witness"].is_null());

    let (code, report) = run(&["validate"], &fixture_path("duplicate"));
    assert_eq!(code, 2);
    assert_eq!(report["error"]["kind"], "duplicate-component");
}

#[test]
fn usage_and_resource_errors() {
    let (code, report) = run(&["validate", "--lambda", "2/3"], &corpus_path("classical"));
    assert_eq!((code, report["error"]["kind"].as_str()), (2, Some("invalid-lambda")));

    let (code, report) = run(&["ball", "--radius", "4", "--cap-ball", "10"], &corpus_path("classical"));
    assert_eq!((code, report["error"]["kind"].as_str()), (3, Some("ball-too-large")));

    let (code, report) = run(&["validate"], Path::new("/nonexistent/graph.json"));
    assert_eq!((code, report["error"]["kind"].as_str()), (2, Some("io")));
}

#[test]
fn deterministic_reports_omit_timing() {
    let (code, report) = run(&["fineness"], &corpus_path("theta"));
    assert_eq!(code, 0);
    assert!(report.get("timing_ms").is_none());
    assert_eq!(report["command"], "fineness");
}

//! End-to-end runs of the binary.

use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_siegel-theta"));
    cmd.env_remove("SIEGEL_THETA_WORKERS");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", stdout(o)))
}

#[test]
fn genus2_suite_passes() {
    let o = run(&["verify", "all", "--genus", "2", "--samples", "20", "--seed", "7", "--json", "-"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let checks = json(&o);
    let checks = checks.as_array().unwrap();
    assert!(checks.len() >= 12, "only {} checks", checks.len());
    for c in checks {
        assert_eq!(c["genus"], 2);
    }
}

#[test]
fn gopel_lists_fifteen_systems() {
    let o = run(&["gopel"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 15);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["verify", "no-such-identity"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--char", "(0;0)", "--tau", "0+1i", "--z", "0", "--eps=-1"]).status.code(), Some(2));
    assert_eq!(run(&["fourier", "--char", "(0,0;0,0)", "--order", "100000"]).status.code(), Some(2));
    let o = bin().env("SIEGEL_THETA_WORKERS", "many").arg("gopel").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn report_is_reproducible_apart_from_timing() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for k in 0..2 {
        let path = dir.path().join(format!("report{k}.json"));
        let o = run(&["report", "--samples", "4", "--seed", "3", "--no-formal", "--json", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert!(v["timing"]["total_seconds"].as_f64().unwrap() >= 0.0);
        v.as_object_mut().unwrap().remove("timing");
        reports.push(v);
    }
    assert_eq!(reports[0], reports[1]);
    assert_eq!(reports[0]["overall_status"], "pass");
}

#[test]
fn worker_count_does_not_change_results() {
    let mut outputs = Vec::new();
    for workers in ["1", "3"] {
        let o = bin()
            .env("SIEGEL_THETA_WORKERS", workers)
            .args(["verify", "heat-equation", "--samples", "6", "--json", "-"])
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        outputs.push(json(&o));
    }
    assert_eq!(outputs[0], outputs[1]);
    // The flag overrides the environment; zero is not a usage error.
    let o = bin().env("SIEGEL_THETA_WORKERS", "2").args(["--workers", "1", "gopel"]).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn halphen_integration_json() {
    let o = run(&["halphen", "integrate", "--steps", "2000", "--json", "-"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["steps"], 2000);
    assert!(v["max_error"].as_f64().unwrap() < 1e-6);
}

#[test]
fn formal_identities_hold_and_controls_fail() {
    let o = run(&["formal", "all", "--json", "-"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    let ids = v["identities"].as_array().unwrap();
    assert!(ids.len() >= 3);
    assert!(ids.iter().all(|o| o["holds"] == true));
    let controls = v["controls"].as_array().unwrap();
    assert!(!controls.is_empty());
    assert!(controls.iter().all(|o| o["holds"] == false));
}

#[test]
fn eval_reports_value_and_bound() {
    let o = run(&["eval", "--char", "(0;0)", "--tau", "0+1i", "--z", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let text = v.to_string();
    assert!(text.contains("1.0864348112133"), "{text}");
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn radar_eval(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radar-eval"))
        .args(args)
        .current_dir(cwd)
        .output()
        .unwrap()
}

fn demo(dir: &Path) -> PathBuf {
    let out = radar_eval(&["demo", "--out", "d"], dir);
    assert!(out.status.success());
    dir.join("d/config.json")
}

fn error_json(out: &Output) -> serde_json::Value {
    let stderr = String::from_utf8_lossy(&out.stderr);
    let line = stderr.lines().last().unwrap_or_default();
    serde_json::from_str(line).unwrap_or_else(|e| panic!("not JSON ({e}): {stderr}"))
}

#[test]
fn run_succeeds_and_honours_overrides() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = demo(tmp.path());
    let out = radar_eval(
        &[
            "run",
            "--config",
            cfg.to_str().unwrap(),
            "--rope",
            "0",
            "--alpha",
            "0.2",
            "--out",
            "o",
        ],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let wdl = fs::read_to_string(tmp.path().join("o/win_draw_loss.csv")).unwrap();
    assert!(wdl.lines().skip(1).all(|l| l.ends_with(",0")), "{wdl}");
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("o/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["alpha"], 0.2);
}

#[test]
fn invalid_override_is_a_validation_failure() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = demo(tmp.path());
    let out = radar_eval(&["run", "--config", cfg.to_str().unwrap(), "--alpha", "0"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    let err = error_json(&out);
    assert_eq!(err["error"]["kind"], "validation");
    assert!(err["error"]["message"].as_str().unwrap().contains("alpha"));
    assert!(!tmp.path().join("d/out").exists());
}

#[test]
fn validate_checks_without_writing() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = demo(tmp.path());
    let ok = radar_eval(&["validate", "--config", cfg.to_str().unwrap()], tmp.path());
    assert_eq!(ok.status.code(), Some(0));
    assert!(!tmp.path().join("d/out").exists());

    fs::write(tmp.path().join("bad.json"), r#"{"actuals": [], "unknown": 1}"#).unwrap();
    let bad = radar_eval(&["validate", "--config", "bad.json"], tmp.path());
    assert_eq!(bad.status.code(), Some(2));
    assert_eq!(error_json(&bad)["error"]["kind"], "validation");
}

#[test]
fn malformed_input_is_a_runtime_failure_with_stage() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = demo(tmp.path());
    let actuals = tmp.path().join("d/actuals.csv");
    let text = fs::read_to_string(&actuals).unwrap().replacen("146.068", "oops", 1);
    fs::write(&actuals, text).unwrap();
    let out = radar_eval(&["run", "--config", cfg.to_str().unwrap()], tmp.path());
    assert_eq!(out.status.code(), Some(3));
    let err = error_json(&out);
    assert_eq!(err["error"]["kind"], "runtime");
    assert_eq!(err["error"]["stage"], "ingest");
    assert!(!tmp.path().join("d/out").exists());
}

#[test]
fn annotate_needs_no_forecasts() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = demo(tmp.path());
    fs::remove_file(tmp.path().join("d/forecasts.csv")).unwrap();
    let out = radar_eval(&["annotate", "--config", cfg.to_str().unwrap()], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(tmp.path().join("d/out/annotations_series.csv").exists());
    assert!(!tmp.path().join("d/out/scores.csv").exists());
}

use std::path::Path;
use std::process::{Command, Output};

fn nue(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_nue"));
    cmd.args(args).env_remove("NUE_THREADS");
    if let Some(t) = threads {
        cmd.env("NUE_THREADS", t);
    }
    cmd.output().unwrap()
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(format!("{name}.json"));
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn error_record(out: &Output) -> serde_json::Value {
    let v: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    v["error"].clone()
}

#[test]
fn orbit_writes_n_plus_one_points() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "orbit",
        r#"{"experiment":"orbit","map":{"family":"doubling"},"mc":{"N":10},"analysis":{"x0":0.1}}"#,
    );
    let prefix = dir.path().join("o").display().to_string();
    let out = nue(&["run", "--config", &cfg, "--seed", "4", "--out", &prefix], None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(format!("{prefix}.csv")).unwrap();
    assert_eq!(csv.lines().count(), 12);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(format!("{prefix}.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 4);
}

#[test]
fn missing_config_is_a_config_error() {
    let out = nue(&["run", "--config", "/nonexistent/cfg.json"], None);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["exit_code"], 2);
}

#[test]
fn unknown_family_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad", r#"{"experiment":"orbit","map":{"family":"tent"}}"#);
    let out = nue(&["run", "--config", &cfg], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(error_record(&out)["message"].as_str().unwrap().contains("tent"));
}

#[test]
fn failed_calibration_exits_with_3() {
    let out = nue(&["calibrate", "--map", r#"{"family":"prv"}"#], None);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_record(&out)["exit_code"], 3);
}

#[test]
fn stability_writes_one_row_per_epsilon() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "stab",
        r#"{"experiment":"stability","map":{"family":"doubling"},"mc":{"N":500,"samples":20,"bins":32,"burn_in":10}}"#,
    );
    let prefix = dir.path().join("s").display().to_string();
    let out = nue(&["run", "--config", &cfg, "--seed", "2", "--out", &prefix], None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(format!("{prefix}.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("epsilon,w1,mc_error"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn output_is_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "stat",
        r#"{"experiment":"stationary","map":{"family":"intermittent"},"mc":{"N":800,"samples":30,"bins":32,"burn_in":20}}"#,
    );
    let mut files = Vec::new();
    for t in ["1", "2"] {
        let prefix = dir.path().join(format!("t{t}")).display().to_string();
        let out = nue(&["run", "--config", &cfg, "--seed", "8", "--out", &prefix], Some(t));
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        files.push(std::fs::read(format!("{prefix}.csv")).unwrap());
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn list_maps_names_every_family() {
    let out = nue(&["list-maps"], None);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["doubling", "intermittent", "quadratic", "prv"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing from {text}");
    }
}

use std::path::Path;
use std::process::Command;

use clustergrid_cli::commands::{cmd_gate, cmd_run, RunArgs};

const BIN: &str = env!("CARGO_BIN_EXE_clustergrid");

fn write_fixture(dir: &Path) -> std::path::PathBuf {
    let mut csv = String::from("a,b\n");
    for i in 0..30 {
        let base = if i < 15 { 0.0 } else { 10.0 };
        csv.push_str(&format!("{},{}\n", base + (i % 5) as f64 * 0.1, base - (i % 3) as f64 * 0.2));
    }
    std::fs::write(dir.join("data.csv"), csv).unwrap();
    let config = dir.join("config.json");
    std::fs::write(
        &config,
        r#"{"seed": 9, "dataset": {"path": "data.csv"}, "algorithms": {"kmeans": {"k": [2, 3]}, "nmf": {"rank": [2]}}}"#,
    )
    .unwrap();
    config
}

fn args(config: &Path, out: &Path) -> RunArgs {
    RunArgs { config: config.to_path_buf(), out: out.to_path_buf(), jobs: Some(1), seed: None, force: false }
}

#[test]
fn run_then_gate() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_fixture(dir.path());
    let out = dir.path().join("run");
    let mut log = Vec::new();
    let result = cmd_run(&args(&config, &out), &mut log).unwrap();
    assert_eq!(result.candidates.len(), 3);
    let log = String::from_utf8(log).unwrap();
    assert!(log.ends_with(&format!("3 candidates, {} ruled out by meta-criteria\n", result.ruled_out_count())));

    let mut table = Vec::new();
    cmd_gate(&out, &mut table).unwrap();
    let table = String::from_utf8(table).unwrap();
    assert!(table.lines().any(|l| l.starts_with("kmeans_v0") && l.contains("pass")), "{table}");
}

#[test]
fn existing_output_needs_force() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_fixture(dir.path());
    let out = dir.path().join("run");
    cmd_run(&args(&config, &out), &mut Vec::new()).unwrap();

    let err = cmd_run(&args(&config, &out), &mut Vec::new()).unwrap_err();
    assert_eq!(err.code, 2);
    let forced = RunArgs { force: true, ..args(&config, &out) };
    cmd_run(&forced, &mut Vec::new()).unwrap();

    let stranger = dir.path().join("other");
    std::fs::create_dir(&stranger).unwrap();
    std::fs::write(stranger.join("keep.txt"), "x").unwrap();
    let err = cmd_run(&RunArgs { force: true, ..args(&config, &stranger) }, &mut Vec::new()).unwrap_err();
    assert_eq!(err.code, 2);
    assert!(stranger.join("keep.txt").exists());
}

#[test]
fn missing_config_exits_with_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.json");
    let output = Command::new(BIN)
        .args(["run", "--config"])
        .arg(&missing)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("absent.json"), "{stderr}");
}

#[test]
fn corrupt_manifest_exits_with_input_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("manifest.json"), "{ truncated").unwrap();
    let output = Command::new(BIN).args(["gate", "--run"]).arg(dir.path()).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("manifest"));
}

#[test]
fn zero_jobs_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_fixture(dir.path());
    let err = cmd_run(&RunArgs { jobs: Some(0), ..args(&config, &dir.path().join("o")) }, &mut Vec::new()).unwrap_err();
    assert_eq!(err.code, 2);
}

#[test]
fn seed_override_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_fixture(dir.path());
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let mut log = Vec::new();
    for out in [&a, &b] {
        log.clear();
        cmd_run(&RunArgs { seed: Some(7), ..args(&config, out) }, &mut log).unwrap();
    }
    assert_eq!(String::from_utf8(log).unwrap().lines().count(), 4);
    for rel in ["summary/metrics.csv", "candidates/kmeans_v1/profile.csv", "plots/nmf_v0.svg"] {
        assert_eq!(std::fs::read(a.join(rel)).unwrap(), std::fs::read(b.join(rel)).unwrap(), "{rel}");
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(a.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["settings"]["seed"], 7);
}

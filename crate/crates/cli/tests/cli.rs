use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const CONFIG: &str = r#"{
  "scenario": {
    "dim": 3,
    "geometry": { "kind": "random_sphere", "m": 4, "scale": 1.0 },
    "target": { "kind": "additive", "t0": { "member": 1 }, "noise": { "kind": "student_t", "df": 3.0, "scale": 0.5 } },
    "seed": 2
  },
  "epsilon": 0.25,
  "delta": 0.1,
  "n_samples": 60,
  "trials": 20,
  "procedures": ["tournament", "erm"],
  "seed": 4
}"#;

fn tournament(args: &[&str], workers: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tournament"));
    cmd.args(args).env_remove("TOURNAMENT_WORKERS");
    if let Some(w) = workers {
        cmd.env("TOURNAMENT_WORKERS", w);
    }
    cmd.output().unwrap()
}

fn write_config(dir: &Path) -> String {
    let path = dir.join("config.json");
    fs::write(&path, CONFIG).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn run_writes_results() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path());
    let out = dir.path().join("out");
    let status = tournament(
        &["run", "--config", &config, "--out", out.to_str().unwrap()],
        None,
    );
    assert!(
        status.status.success(),
        "{}",
        String::from_utf8_lossy(&status.stderr)
    );
    let trials = fs::read_to_string(out.join("trials.csv")).unwrap();
    assert_eq!(trials.lines().count(), 41);
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert!(summary.starts_with("procedure,trials,failures"));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 4);
}

#[test]
fn worker_env_and_flag_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path());
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert!(tournament(
        &[
            "run",
            "--config",
            &config,
            "--out",
            a.to_str().unwrap(),
            "--workers",
            "1"
        ],
        None
    )
    .status
    .success());
    assert!(tournament(
        &["run", "--config", &config, "--out", b.to_str().unwrap()],
        Some("4")
    )
    .status
    .success());
    for name in ["trials.csv", "summary.csv", "manifest.json"] {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path());
    let out = dir.path().join("out");
    assert!(tournament(
        &[
            "run",
            "--config",
            &config,
            "--seed",
            "99",
            "--out",
            out.to_str().unwrap()
        ],
        None
    )
    .status
    .success());
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 99);
}

#[test]
fn verify_reports_no_violations() {
    let out = tournament(&["verify", "--cases", "100", "--seed", "3"], None);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.contains("100 cases, 200 checks, 0 violations"),
        "{text}"
    );
    assert!(!tournament(&["verify", "--rho", "0.5"], None)
        .status
        .success());
}

#[test]
fn diagnose_lists_every_member() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path());
    let out = tournament(&["diagnose", "--config", &config], None);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text.lines()
            .filter(|l| l.starts_with(char::is_numeric))
            .count(),
        4
    );
    assert!(text.contains("all pass:"));
}

#[test]
fn adversarial_study_from_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("adv.json");
    fs::write(
        &path,
        r#"{"gap": 10.0, "bias_scale": 0.5, "sigma": 1.0, "n_samples": 200, "epsilon": 0.25, "delta": 0.1, "trials": 50, "seed": 1}"#,
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = tournament(
        &[
            "adversarial",
            "--config",
            path.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ],
        None,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("adversarial.json")).unwrap())
            .unwrap();
    assert_eq!(report["trials"], 50);
}

#[test]
fn bad_config_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, CONFIG.replace("\"trials\": 20", "\"trials\": 0")).unwrap();
    let out = tournament(&["run", "--config", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trials"));
    let missing = tournament(&["run", "--config", "/nonexistent.json"], None);
    assert_eq!(missing.status.code(), Some(1));
}

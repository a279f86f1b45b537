use std::path::PathBuf;
use std::process::{Command, Output};

use drwlog_core::engine::VerificationReport;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn drwlog(args: &[&str], seed: Option<&str>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_drwlog"));
    c.args(args).current_dir(root()).env_remove("DRWLOG_SEED");
    if let Some(s) = seed {
        c.env("DRWLOG_SEED", s);
    }
    c.output().expect("run drwlog")
}

fn reports(o: &Output) -> Vec<VerificationReport> {
    serde_json::from_slice(&o.stdout).expect("json report")
}

#[test]
fn smoke_config_passes_and_is_deterministic() {
    let a = drwlog(&["verify", "--config", "configs/smoke.toml", "--no-timing"], None);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let b = drwlog(&["verify", "--config", "configs/smoke.toml", "--no-timing", "--jobs", "1"], None);
    assert_eq!(a.stdout, b.stdout);
    let reps = reports(&a);
    assert!(reps.iter().all(|r| r.schema == 1 && r.passed()));
    assert!(reps.iter().any(|r| r.suite == "cor1"));
}

#[test]
fn seed_override() {
    let o = drwlog(&["verify", "--config", "configs/smoke.toml", "--no-timing"], Some("99"));
    assert_eq!(o.status.code(), Some(0));
    for r in reports(&o).iter().filter(|r| r.suite == "decompose" || r.suite == "appendixB") {
        assert_eq!(r.seed, Some(99));
    }
    let o = drwlog(&["verify", "--config", "configs/smoke.toml"], Some("x"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn negative_control_fails_with_witness() {
    let o = drwlog(&["verify", "--config", "configs/negative_control.toml"], None);
    assert_eq!(o.status.code(), Some(1));
    let reps = reports(&o);
    assert!(!reps[0].passed());
    assert!(!reps[0].witnesses.is_empty());
}

#[test]
fn malformed_config() {
    let o = drwlog(&["verify", "--config", "configs/malformed.toml"], None);
    assert_eq!(o.status.code(), Some(2));
    let o = drwlog(&["verify", "--config", "configs/does-not-exist.toml"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn size_clamp() {
    let dir = std::env::temp_dir().join(format!("drwlog-clamp-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("clamp.toml");
    std::fs::write(
        &path,
        "[[scenario]]\np = 2\nn = 2\nd = 3\ne = 0\nf = 1\ng = 1\nr = [1, 0, 0]\nq = 1\nN = 4\nsuites = [\"thm2\"]\n",
    )
    .unwrap();
    let o = drwlog(&["verify", "--config", path.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn out_file() {
    let path = std::env::temp_dir().join(format!("drwlog-out-{}.json", std::process::id()));
    let o = drwlog(&["verify", "--config", "configs/negative_control.toml", "--out", path.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    let reps: Vec<VerificationReport> = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(reps.len(), 1);
}

#[test]
fn decompose_command() {
    let model = "p=3, e=1, f=1, g=1, r=[1], N=5";
    let o = drwlog(&["decompose", "--model", model, "--form", "dlog(1+T1^2) ^ dlog(T1)"], None);
    assert_eq!(o.status.code(), Some(2), "a 2-form on one variable");
    let o = drwlog(&["decompose", "--model", model, "--form", "dlog(1+T1^2+T1^4)"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.trim().starts_with("dlog("));
    let o = drwlog(&["decompose", "--model", model, "--form", "dlog(T1)"], None);
    assert_eq!(o.status.code(), Some(1));
    let o = drwlog(&["decompose", "--model", "p=3, r=[1]", "--form", "dlog(T1)"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn explore_command() {
    let o = drwlog(&["explore", "--config", "configs/explore.toml", "--no-timing"], None);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    let row = rows.iter().find(|r| r["r"] == serde_json::json!([1, 1, 3]) && r["q"] == 2).unwrap();
    assert_eq!(row["gk_ours_strict"], true);
    assert_eq!(row["ours_jsz_log_strict"], true);
    assert!(rows.iter().all(|r| r["violations"].as_array().unwrap().is_empty()));
}

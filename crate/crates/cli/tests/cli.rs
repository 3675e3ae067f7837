use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_nonisoflow");

fn shipped(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn small_config(dir: &Path, edit: impl Fn(&str) -> String) -> PathBuf {
    let text = std::fs::read_to_string(shipped("nc4_isolated.cfg")).unwrap();
    let text = text.replace("grid.nx = 40", "grid.nx = 10").replace("grid.ny = 40", "grid.ny = 10");
    let path = dir.join("case.cfg");
    std::fs::write(&path, edit(&text)).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

#[test]
fn run_writes_outputs_and_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), str::to_string);
    let out = dir.path().join("out");
    let o = run(&["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--steps", "3", "--snapshot-every", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("completed 3 steps"), "{stdout}");
    let diag = std::fs::read_to_string(out.join("diagnostics.csv")).unwrap();
    assert_eq!(diag.lines().count(), 5);
    for k in [0, 2, 3] {
        assert!(out.join(format!("fields_{k:06}.csv")).exists());
    }
}

#[test]
fn convection_override_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), str::to_string);
    let out = dir.path().join("o");
    let o = run(&["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--steps", "1", "--convection", "upwind"]);
    assert_eq!(o.status.code(), Some(0));
    let bad = run(&["run", cfg.to_str().unwrap(), "--convection", "central"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn missing_file_exits_with_config_code() {
    let o = run(&["run", "/nonexistent/case.cfg"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot read"));
}

#[test]
fn invalid_config_names_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), |t| t.lines().filter(|l| !l.starts_with("substance.T_crit")).collect::<Vec<_>>().join("\n"));
    let o = run(&["run", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("substance.T_crit"));
}

#[test]
fn solver_abort_keeps_partial_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), |t| {
        t.replace("scheme.dt = 3e-13", "scheme.dt = 1e-8").replace("scheme.max_retries = 3", "scheme.max_retries = 1")
    });
    let out = dir.path().join("out");
    let o = run(&["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--steps", "2"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("diagnostics.csv").exists());
    assert!(out.join("fields_000000.csv").exists());
}

#[test]
fn shipped_configs_parse_through_the_cli() {
    for name in ["nc4_isolated.cfg", "nc4_bubble.cfg"] {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("o");
        let o = run(&["run", shipped(name).to_str().unwrap(), "--out", out.to_str().unwrap(), "--steps", "1"]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

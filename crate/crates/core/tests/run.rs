mod common;

use common::isolated_cfg;
use nonisoflow::config::ScenarioConfig;
use nonisoflow::diagnostics::CSV_HEADER;
use nonisoflow::run::{run_simulation, snapshot_name, SNAPSHOT_HEADER};
use nonisoflow::Error;

fn small(steps: usize, every: usize) -> ScenarioConfig {
    let mut c = isolated_cfg();
    c.grid.nx = 12;
    c.grid.ny = 12;
    c.run.n_steps = steps;
    c.run.snapshot_every = every;
    c
}

#[test]
fn writes_one_row_per_step_and_periodic_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let s = run_simulation(&small(7, 3), Some(dir.path())).unwrap();
    assert_eq!(s.steps, 7);
    let diag = std::fs::read_to_string(dir.path().join("diagnostics.csv")).unwrap();
    let lines: Vec<&str> = diag.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 1 + 8);
    let names: Vec<String> = s.snapshots.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect();
    let expect: Vec<String> = [0, 3, 6, 7].iter().map(|&k| snapshot_name(k)).collect();
    assert_eq!(names, expect);
    let snap = std::fs::read_to_string(&s.snapshots[1]).unwrap();
    assert_eq!(snap.lines().next().unwrap(), SNAPSHOT_HEADER);
    assert_eq!(snap.lines().count(), 1 + 144);
    assert!(s.max_relative_residual <= 1e-9);
}

#[test]
fn zero_period_writes_first_and_last_only() {
    let dir = tempfile::tempdir().unwrap();
    let s = run_simulation(&small(4, 0), Some(dir.path())).unwrap();
    assert_eq!(s.snapshots.len(), 2);
    assert!(s.snapshots[1].ends_with(snapshot_name(4)));
}

#[test]
fn runs_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_simulation(&small(3, 0), Some(a.path())).unwrap();
    run_simulation(&small(3, 0), Some(b.path())).unwrap();
    for name in ["diagnostics.csv".to_string(), snapshot_name(3)] {
        let x = std::fs::read(a.path().join(&name)).unwrap();
        let y = std::fs::read(b.path().join(&name)).unwrap();
        assert_eq!(x, y, "{name} differs");
    }
}

#[test]
fn rejected_step_keeps_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = small(5, 0);
    c.scheme.dt = 1e-8;
    c.scheme.max_retries = 1;
    match run_simulation(&c, Some(dir.path())) {
        Err(Error::StepRejected { .. }) => {
            let diag = std::fs::read_to_string(dir.path().join("diagnostics.csv")).unwrap();
            assert_eq!(diag.lines().count(), 2);
            assert!(dir.path().join(snapshot_name(0)).exists());
        }
        other => panic!("expected a rejection, got {other:?}"),
    }
}

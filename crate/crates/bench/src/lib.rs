//! Shared fixtures for the benchmarks.

use nonisoflow::config::{ScenarioConfig, ScenarioKind, SquareParams};
use nonisoflow::linalg::SolverKind;
use nonisoflow::{scenario, SimState, Stepper};

const ISOLATED: &str = include_str!("../../../configs/nc4_isolated.cfg");

/// The isolated square droplet on an `n x n` grid with the given linear solver.
pub fn isolated(n: usize, solver: SolverKind) -> (Stepper, SimState) {
    let mut cfg = ScenarioConfig::parse(ISOLATED).expect("shipped config parses");
    cfg.grid.nx = n;
    cfg.grid.ny = n;
    cfg.scheme.linear.kind = solver;
    cfg.scenario = ScenarioKind::IsolatedSquare(SquareParams::default());
    scenario::build(&cfg).expect("valid setup")
}

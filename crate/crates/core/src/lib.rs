//! Nonisothermal diffuse-interface two-phase flow of a pure substance.
//!
//! The fluid is described by the Peng-Robinson equation of state with a
//! temperature-dependent gradient (influence) parameter. Time stepping uses
//! a convex-concave split of the bulk free energy, an auxiliary velocity
//! that decouples mass, momentum and energy, and a linearized outer
//! iteration. The discrete first and second laws are monitored every step.
//!
//! ```no_run
//! use nonisoflow::{config::ScenarioConfig, run::run_simulation};
//!
//! let text = std::fs::read_to_string("configs/nc4_isolated.cfg").unwrap();
//! let cfg = ScenarioConfig::parse(&text).unwrap();
//! let summary = run_simulation(&cfg, None).unwrap();
//! println!("{} steps", summary.steps);
//! ```

pub mod config;
pub mod diagnostics;
pub mod eos;
pub mod error;
pub mod grid;
pub mod integrator;
pub mod linalg;
pub mod run;
pub mod scenario;

pub use diagnostics::{DiagnosticsRecord, ShapeMetrics};
pub use eos::{EosCoeffs, PengRobinson, Substance, ThermoPoint};
pub use error::{Error, Result};
pub use grid::{BoundarySpec, CellField, ConvectionMode, FaceField, Grid, ThermalBc};
pub use integrator::{IterationReport, SchemeConfig, SimState, Stepper};
pub use linalg::{SolverKind, SolverOptions};

//! Semi-implicit time stepping.
//!
//! Each step runs an outer iteration of four linear sub-solves:
//! density and chemical potential (coupled), auxiliary velocity (explicit),
//! momentum, and internal energy. The same face force drives the auxiliary
//! velocity and the momentum equation, which makes the discrete total energy
//! balance close up to linear-solver error.

mod scheme;
mod state;
mod stepper;

pub use scheme::{ForceTemperature, SchemeConfig};
pub use state::{SimState, ThermoCache};
pub use stepper::{
    AuxVelocity, ConductivityFn, DensitySolve, EnergySolve, IterationReport, StepContext, StepLedger, StepOutcome,
    Stepper,
};

use crate::error::{Error, Result};
use crate::grid::ConvectionMode;
use crate::linalg::SolverOptions;

/// Which temperature drives the `gamma grad T` forces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForceTemperature {
    /// Previous outer iterate of the new time level.
    Iterate,
    /// Temperature at the old time level.
    OldStep,
}

impl std::str::FromStr for ForceTemperature {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "iterate" => Ok(ForceTemperature::Iterate),
            "old_step" => Ok(ForceTemperature::OldStep),
            other => Err(format!("unknown force temperature '{other}' (expected iterate or old_step)")),
        }
    }
}

impl std::fmt::Display for ForceTemperature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ForceTemperature::Iterate => "iterate",
            ForceTemperature::OldStep => "old_step",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeConfig {
    /// Time step, s.
    pub dt: f64,
    /// Stop when the relative change of every field is at most this.
    pub outer_tol: f64,
    pub max_outer_iters: usize,
    pub linear: SolverOptions,
    pub convection: ConvectionMode,
    /// Shear viscosity, Pa s.
    pub shear_viscosity: f64,
    /// Volumetric viscosity, Pa s.
    pub bulk_viscosity: f64,
    /// Heat conduction coefficient, W/m/K.
    pub conductivity: f64,
    pub force_temperature: ForceTemperature,
    /// Halvings of `dt` allowed when a step leaves the thermodynamic domain.
    pub max_retries: usize,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        Self {
            dt: 3e-13,
            outer_tol: 1e-3,
            max_outer_iters: 10,
            linear: SolverOptions::default(),
            convection: ConvectionMode::Skew,
            shear_viscosity: 1e-4,
            bulk_viscosity: 1e-4,
            conductivity: 0.1,
            force_temperature: ForceTemperature::Iterate,
            max_retries: 3,
        }
    }
}

impl SchemeConfig {
    /// `lambda = xi - 2/3 eta`.
    pub fn second_viscosity(&self) -> f64 {
        self.bulk_viscosity - 2.0 / 3.0 * self.shear_viscosity
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Scheme(msg));
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.outer_tol > 0.0) {
            return bad(format!("outer_tol must be positive, got {}", self.outer_tol));
        }
        if self.max_outer_iters < 1 {
            return bad("max_outer_iters must be at least 1".into());
        }
        if !(self.linear.tol > 0.0) || self.linear.max_iter < 1 {
            return bad("linear solver tolerance and iteration cap must be positive".into());
        }
        if !(self.shear_viscosity > 0.0) {
            return bad(format!("shear viscosity must be positive, got {}", self.shear_viscosity));
        }
        if !(self.bulk_viscosity > 2.0 / 3.0 * self.shear_viscosity) {
            return bad(format!(
                "bulk viscosity {} must exceed 2/3 of the shear viscosity {}",
                self.bulk_viscosity, self.shear_viscosity
            ));
        }
        if !(self.conductivity > 0.0) {
            return bad(format!("conductivity must be positive, got {}", self.conductivity));
        }
        Ok(())
    }
}

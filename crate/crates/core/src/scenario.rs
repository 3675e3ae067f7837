//! Initial and boundary data of the shipped scenarios.

use crate::config::{BubbleParams, CustomParams, ScenarioConfig, ScenarioKind, SquareParams};
use crate::eos::PengRobinson;
use crate::error::{Error, Result};
use crate::grid::{BoundarySpec, CellField, Grid, ThermalBc};
use crate::integrator::{SimState, Stepper};

/// Initial fields (fluid at rest) and thermal walls.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    pub n: CellField,
    pub t: CellField,
    pub boundary: BoundarySpec,
}

fn check_radius(r_frac: f64) -> Result<()> {
    if r_frac > 0.0 && r_frac < 1.0 {
        Ok(())
    } else {
        Err(Error::ConfigInvalid(format!(
            "`scenario.r_frac` must lie in (0, 1) so that r < L, got {r_frac}"
        )))
    }
}

/// Half width `L` of a centered grid (half of the shorter side).
fn half_width(g: &Grid) -> f64 {
    0.5 * g.lx.min(g.ly)
}

/// Square of liquid with half side `r = r_frac L` centered in gas; a cell is
/// liquid when its center satisfies `|x| <= r` and `|y| <= r`. All walls
/// are adiabatic.
pub fn init_isolated_square(g: &Grid, p: &SquareParams) -> Result<InitialData> {
    check_radius(p.r_frac)?;
    let r = p.r_frac * half_width(g);
    let n = g.cell_field_from_fn(|x, y| {
        if x.abs() <= r && y.abs() <= r {
            p.n_liquid
        } else {
            p.n_gas
        }
    });
    Ok(InitialData {
        n,
        t: g.cell_field(p.t_init),
        boundary: BoundarySpec::adiabatic(),
    })
}

/// Gas bubble `n = (nL + nG)/2 + (nL - nG)/2 tanh(w (d - r)/L)` with
/// `d` the distance to the center. Side walls adiabatic, top and bottom held at fixed
/// temperatures.
pub fn init_bubble_tanh(g: &Grid, p: &BubbleParams) -> Result<InitialData> {
    check_radius(p.r_frac)?;
    let l = half_width(g);
    let r = p.r_frac * l;
    let mid = 0.5 * (p.n_liquid + p.n_gas);
    let amp = 0.5 * (p.n_liquid - p.n_gas);
    let n = g.cell_field_from_fn(|x, y| {
        let d = (x * x + y * y).sqrt();
        mid + amp * (p.w * (d - r) / l).tanh()
    });
    Ok(InitialData {
        n,
        t: g.cell_field(p.t_init),
        boundary: BoundarySpec {
            left: ThermalBc::ADIABATIC,
            right: ThermalBc::ADIABATIC,
            bottom: ThermalBc::Dirichlet(p.t_bottom),
            top: ThermalBc::Dirichlet(p.t_top),
        },
    })
}

pub fn init_custom(g: &Grid, p: &CustomParams) -> Result<InitialData> {
    Ok(InitialData {
        n: g.cell_field(p.n_init),
        t: g.cell_field(p.t_init),
        boundary: BoundarySpec {
            left: p.left,
            right: p.right,
            bottom: p.bottom,
            top: p.top,
        },
    })
}

pub fn initial_data(g: &Grid, kind: &ScenarioKind) -> Result<InitialData> {
    match kind {
        ScenarioKind::IsolatedSquare(p) => init_isolated_square(g, p),
        ScenarioKind::BubbleTanh(p) => init_bubble_tanh(g, p),
        ScenarioKind::Custom(p) => init_custom(g, p),
    }
}

/// Builds the stepper and the initial state of a configuration.
pub fn build(cfg: &ScenarioConfig) -> Result<(Stepper, SimState)> {
    let g = cfg.grid.build()?;
    let eos = PengRobinson::new(cfg.substance.clone())?;
    let data = initial_data(&g, &cfg.scenario)?;
    let stepper = Stepper::new(g, eos, data.boundary, cfg.scheme.clone())?;
    let state = stepper.initial_state(data.n, data.t)?;
    Ok((stepper, state))
}

//! The run loop and its CSV outputs.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::config::ScenarioConfig;
use crate::diagnostics::{self, DiagnosticsRecord, CSV_HEADER};
use crate::error::{Error, Result};
use crate::integrator::{IterationReport, SimState, Stepper};
use crate::scenario;

/// Header of the snapshot CSV.
pub const SNAPSHOT_HEADER: &str = "i,j,x,y,n,T,ux,uy,p";

/// A stepper, its current state and the diagnostics so far.
pub struct Simulation {
    pub stepper: Stepper,
    state: SimState,
    records: Vec<DiagnosticsRecord>,
    last_report: Option<IterationReport>,
}

impl Simulation {
    pub fn new(cfg: &ScenarioConfig) -> Result<Self> {
        let (stepper, state) = scenario::build(cfg)?;
        Ok(Self::from_parts(stepper, state))
    }

    pub fn from_parts(stepper: Stepper, state: SimState) -> Self {
        let first = DiagnosticsRecord::initial(&stepper.grid, &state);
        Self {
            stepper,
            state,
            records: vec![first],
            last_report: None,
        }
    }

    pub fn state(&self) -> &SimState {
        &self.state
    }

    /// One record per completed step, plus the initial one.
    pub fn records(&self) -> &[DiagnosticsRecord] {
        &self.records
    }

    pub fn last_report(&self) -> Option<&IterationReport> {
        self.last_report.as_ref()
    }

    /// Advances one step; on failure the state is left unchanged.
    pub fn advance(&mut self) -> Result<&DiagnosticsRecord> {
        let outcome = self.stepper.step(&self.state)?;
        let prev = self.records.last().expect("initial record");
        let rec = DiagnosticsRecord::after_step(&self.stepper.grid, prev, &outcome);
        self.records.push(rec);
        self.state = outcome.state;
        self.last_report = Some(outcome.report);
        Ok(self.records.last().expect("just pushed"))
    }
}

/// Writes the cell fields of a state.
pub fn write_snapshot(path: &Path, stepper: &Stepper, state: &SimState) -> Result<()> {
    let g = &stepper.grid;
    let p = diagnostics::pressure_field(g, &stepper.eos, state)?;
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{SNAPSHOT_HEADER}")?;
    for j in 0..g.ny {
        for i in 0..g.nx {
            let (x, y) = g.cell_center(i, j);
            let ux = 0.5 * (state.u.x(i, j) + state.u.x(i + 1, j));
            let uy = 0.5 * (state.u.y(i, j) + state.u.y(i, j + 1));
            writeln!(
                w,
                "{i},{j},{x:.16e},{y:.16e},{:.16e},{:.16e},{ux:.16e},{uy:.16e},{:.16e}",
                state.n[(i, j)],
                state.t[(i, j)],
                p[(i, j)]
            )?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn snapshot_name(step: usize) -> String {
    format!("fields_{step:06}.csv")
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    /// Completed steps.
    pub steps: usize,
    pub output_dir: PathBuf,
    pub snapshots: Vec<PathBuf>,
    pub unconverged_steps: usize,
    /// Largest `|first_law_residual| / |E^0|` over the run.
    pub max_relative_residual: f64,
    pub final_record: DiagnosticsRecord,
}

/// Runs a configuration, writing `diagnostics.csv` (one row per step, plus
/// the initial row) and `fields_XXXXXX.csv` snapshots into `out_dir` (or the
/// configured `run.output_dir`).
///
/// With `snapshot_every = 0` only the initial and final fields are written;
/// otherwise every multiple of the period and the final step. If a step is
/// rejected the files written so far, including the diagnostics of every
/// completed step and a snapshot of the last accepted state, are kept and
/// the rejection is returned.
pub fn run_simulation(cfg: &ScenarioConfig, out_dir: Option<&Path>) -> Result<RunSummary> {
    let dir = out_dir.map(Path::to_path_buf).unwrap_or_else(|| cfg.run.output_dir.clone());
    fs::create_dir_all(&dir)?;
    let mut sim = Simulation::new(cfg)?;

    let mut diag = BufWriter::new(File::create(dir.join("diagnostics.csv"))?);
    writeln!(diag, "{CSV_HEADER}")?;
    writeln!(diag, "{}", sim.records()[0].csv_row())?;

    let mut snapshots = Vec::new();
    let snap = |sim: &Simulation, snapshots: &mut Vec<PathBuf>| -> Result<()> {
        let path = dir.join(snapshot_name(sim.state().step));
        write_snapshot(&path, &sim.stepper, sim.state())?;
        snapshots.push(path);
        Ok(())
    };
    snap(&sim, &mut snapshots)?;

    let e0 = sim.records()[0].total_energy.abs().max(f64::MIN_POSITIVE);
    let every = cfg.run.snapshot_every;
    let n_steps = cfg.run.n_steps;
    let mut unconverged = 0;
    let mut max_rel: f64 = 0.0;

    for _ in 0..n_steps {
        let rec = match sim.advance() {
            Ok(rec) => *rec,
            Err(e) => {
                diag.flush()?;
                if snapshots.last().map(|p| p.ends_with(snapshot_name(sim.state().step))) != Some(true) {
                    snap(&sim, &mut snapshots)?;
                }
                return Err(e);
            }
        };
        writeln!(diag, "{}", rec.csv_row())?;
        if !rec.converged {
            unconverged += 1;
        }
        max_rel = max_rel.max(rec.first_law_residual.abs() / e0);
        let step = rec.step;
        if (every > 0 && step % every == 0) || step == n_steps {
            diag.flush()?;
            snap(&sim, &mut snapshots)?;
        }
    }
    diag.flush()?;

    Ok(RunSummary {
        steps: sim.state().step,
        output_dir: dir,
        snapshots,
        unconverged_steps: unconverged,
        max_relative_residual: max_rel,
        final_record: *sim.records().last().expect("initial record"),
    })
}

/// True for errors caused by the configuration rather than the solver.
pub fn is_config_error(e: &Error) -> bool {
    matches!(
        e,
        Error::ConfigSyntax { .. }
            | Error::ConfigInvalid(_)
            | Error::Substance(_)
            | Error::Grid(_)
            | Error::Scheme(_)
    )
}

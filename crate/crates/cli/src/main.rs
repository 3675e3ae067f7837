use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nonisoflow::config::ScenarioConfig;
use nonisoflow::run::{is_config_error, run_simulation};
use nonisoflow::{ConvectionMode, Error};

const EXIT_IO: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_SOLVER: u8 = 3;

/// Nonisothermal diffuse-interface two-phase flow simulator.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write snapshot and diagnostics CSVs.
    Run {
        /// Scenario configuration file.
        config: PathBuf,
        /// Output directory (overrides run.output_dir).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Number of time steps (overrides run.n_steps).
        #[arg(long)]
        steps: Option<usize>,
        /// Snapshot period in steps, 0 for first and last only (overrides run.snapshot_every).
        #[arg(long = "snapshot-every")]
        snapshot_every: Option<usize>,
        /// Convection discretization (overrides scheme.convection).
        #[arg(long, value_parser = ["upwind", "skew"])]
        convection: Option<String>,
    },
}

fn load(path: &PathBuf) -> Result<ScenarioConfig, (u8, String)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| (EXIT_CONFIG, format!("cannot read {}: {e}", path.display())))?;
    ScenarioConfig::parse(&text).map_err(|e| (EXIT_CONFIG, format!("{}: {e}", path.display())))
}

fn run(cmd: Command) -> Result<(), (u8, String)> {
    let Command::Run {
        config,
        out,
        steps,
        snapshot_every,
        convection,
    } = cmd;
    let mut cfg = load(&config)?;
    if let Some(n) = steps {
        cfg.run.n_steps = n;
    }
    if let Some(n) = snapshot_every {
        cfg.run.snapshot_every = n;
    }
    if let Some(c) = convection {
        cfg.scheme.convection = c.parse::<ConvectionMode>().map_err(|e| (EXIT_CONFIG, e))?;
    }

    match run_simulation(&cfg, out.as_deref()) {
        Ok(summary) => {
            let f = &summary.final_record;
            println!(
                "completed {} steps in {} (t = {:.6e} s, mass = {:.12e} mol/m, E = {:.12e} J/m, S = {:.12e} J/K/m)",
                summary.steps,
                summary.output_dir.display(),
                f.time,
                f.mass,
                f.total_energy,
                f.entropy
            );
            println!(
                "max |first-law residual| / |E0| = {:.3e}; unconverged steps: {}",
                summary.max_relative_residual, summary.unconverged_steps
            );
            Ok(())
        }
        Err(e @ Error::StepRejected { .. }) => Err((EXIT_SOLVER, format!("solver aborted: {e}; partial outputs kept"))),
        Err(e @ Error::Io(_)) => Err((EXIT_IO, format!("i/o error: {e}"))),
        Err(e) if is_config_error(&e) => Err((EXIT_CONFIG, format!("invalid configuration: {e}"))),
        Err(e) => Err((EXIT_CONFIG, format!("invalid initial state: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.
//!
//! Runs the full-size scenarios (500 isolated steps twice, 5000 bubble
//! steps), so it takes a few minutes.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{bubble_cfg, convexity_sweep, isolated_cfg, refinement_orders, thermo_oracle_suite};
use nonisoflow::config::{ScenarioConfig, ScenarioKind};
use nonisoflow::diagnostics::{shape_metrics, Phase};
use nonisoflow::run::Simulation;
use nonisoflow::{ConvectionMode, DiagnosticsRecord};

struct Suite {
    failed: usize,
}

impl Suite {
    fn check(&mut self, name: &str, pass: bool, detail: String) {
        println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        if !pass {
            self.failed += 1;
        }
    }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

/// Per-step samples of a run.
struct Trace {
    records: Vec<DiagnosticsRecord>,
    /// `(circularity, T range, max |u|)` at each step.
    shape: Vec<(f64, f64, f64)>,
    /// Centroid height of the light phase at each step.
    centroid_y: Vec<f64>,
    elapsed: Duration,
    error: Option<String>,
}

fn trace(cfg: &ScenarioConfig) -> Trace {
    let start = Instant::now();
    let (n_gas, n_liquid, phase) = match cfg.scenario {
        ScenarioKind::IsolatedSquare(p) => (p.n_gas, p.n_liquid, Phase::Dense),
        ScenarioKind::BubbleTanh(p) => (p.n_gas, p.n_liquid, Phase::Light),
        ScenarioKind::Custom(_) => unreachable!(),
    };
    let mut sim = Simulation::new(cfg).expect("shipped configuration builds");
    let sample = |sim: &Simulation| {
        let s = sim.state();
        let m = shape_metrics(&sim.stepper.grid, &s.n, n_gas, n_liquid, phase).ok();
        let circ = m.map_or(f64::NAN, |m| m.circularity);
        let cy = m.map_or(f64::NAN, |m| m.centroid.1);
        ((circ, s.t.max() - s.t.min(), s.u.max_abs()), cy)
    };
    let (first, cy) = sample(&sim);
    let mut shape = vec![first];
    let mut centroid_y = vec![cy];
    let mut error = None;
    for _ in 0..cfg.run.n_steps {
        if let Err(e) = sim.advance() {
            error = Some(e.to_string());
            break;
        }
        let (sh, cy) = sample(&sim);
        shape.push(sh);
        centroid_y.push(cy);
    }
    Trace {
        records: sim.records().to_vec(),
        shape,
        centroid_y,
        elapsed: start.elapsed(),
        error,
    }
}

fn completed(t: &Trace, steps: usize) -> Result<(), String> {
    match &t.error {
        Some(e) => Err(format!("run stopped after {} steps: {e}", t.records.len() - 1)),
        None if t.records.len() != steps + 1 => Err(format!("{} records", t.records.len())),
        None => Ok(()),
    }
}

fn mass_drift(t: &Trace) -> f64 {
    let m0 = t.records[0].mass;
    t.records.iter().map(|r| (r.mass - m0).abs() / m0.abs()).fold(0.0, f64::max)
}

fn converged_fraction(t: &Trace) -> f64 {
    let steps = &t.records[1..];
    let ok = steps.iter().filter(|r| r.converged && r.outer_iters <= 10).count();
    ok as f64 / steps.len().max(1) as f64
}

fn main() -> ExitCode {
    let mut suite = Suite { failed: 0 };

    let start = Instant::now();
    let fd = thermo_oracle_suite(1000, 20240601);
    let took = start.elapsed();
    suite.check(
        "thermo oracle",
        fd.max_derivative() <= 1e-6 && fd.max_identity() <= 1e-10 && took < Duration::from_secs(10),
        format!(
            "1000 points, worst derivative rel. error {:.2e} (<= 1e-6), worst identity rel. error {:.2e} (<= 1e-10), {:.2} s (< 10 s)",
            fd.max_derivative(),
            fd.max_identity(),
            secs(took)
        ),
    );

    let start = Instant::now();
    let sweep = convexity_sweep();
    let took = start.elapsed();
    suite.check(
        "convexity sweep",
        sweep.total() == 0 && took < Duration::from_secs(10),
        format!(
            "{} grid points, violations convex {} concave {} d2f/dT2 {} c'' {} condition {}, {:.2} s (< 10 s)",
            sweep.points,
            sweep.convex,
            sweep.concave,
            sweep.temperature,
            sweep.influence,
            sweep.condition,
            secs(took)
        ),
    );

    let start = Instant::now();
    let uniform = refinement_orders(false);
    let heated = refinement_orders(true);
    let took = start.elapsed();
    let worst = uniform.iter().chain(&heated).copied().fold(f64::INFINITY, f64::min);
    suite.check(
        "force balance refinement",
        worst >= 1.9 && took < Duration::from_secs(30),
        format!("orders 32->64->128 uniform T {uniform:.3?}, heated {heated:.3?} (>= 1.9), {:.2} s (< 30 s)", secs(took)),
    );

    let iso_cfg = isolated_cfg();
    let iso = trace(&iso_cfg);
    let iso_ok = completed(&iso, 500);
    let e0 = iso.records[0].total_energy.abs();
    let worst_residual = iso.records[1..].iter().map(|r| r.first_law_residual.abs()).fold(0.0, f64::max);
    suite.check(
        "first law (skew, direct)",
        iso_ok.is_ok() && worst_residual <= 1e-9 * e0,
        format!(
            "{}max per-step |E^(k+1) - E^k| / |E0| = {:.3e} (<= 1e-9), {:.1} s",
            iso_ok.clone().err().map(|e| e + "; ").unwrap_or_default(),
            worst_residual / e0,
            secs(iso.elapsed)
        ),
    );

    let mut up_cfg = isolated_cfg();
    up_cfg.scheme.convection = ConvectionMode::Upwind;
    let up = trace(&up_cfg);
    let up_ok = completed(&up, 500);
    let drift = (up.records.last().unwrap().total_energy - up.records[0].total_energy).abs() / up.records[0].total_energy.abs();
    suite.check(
        "first law (upwind drift)",
        up_ok.is_ok() && drift <= 1e-2,
        format!(
            "{}|E^500 - E^0| / |E0| = {:.3e} (<= 1e-2), {:.1} s",
            up_ok.clone().err().map(|e| e + "; ").unwrap_or_default(),
            drift,
            secs(up.elapsed)
        ),
    );

    let worst_drop = iso
        .records
        .windows(2)
        .map(|w| (w[0].entropy - w[1].entropy) / w[0].entropy.abs())
        .fold(f64::NEG_INFINITY, f64::max);
    suite.check(
        "second law",
        iso_ok.is_ok() && worst_drop <= 1e-6,
        format!("max (S^k - S^(k+1)) / |S^k| = {worst_drop:.3e} (<= 1e-6)"),
    );

    let bub_cfg = {
        let mut c = bubble_cfg();
        c.run.n_steps = 5000;
        c
    };
    let bub = trace(&bub_cfg);
    let bub_ok = completed(&bub, 5000);

    let (m_iso, m_bub) = (mass_drift(&iso), mass_drift(&bub));
    suite.check(
        "mass conservation",
        iso_ok.is_ok() && bub_ok.is_ok() && m_iso <= 1e-10 && m_bub <= 1e-10,
        format!("max relative drift isolated {m_iso:.3e}, bubble {m_bub:.3e} (<= 1e-10)"),
    );

    let (c0, _, _) = iso.shape[0];
    let (_, dt50, u50) = iso.shape[50.min(iso.shape.len() - 1)];
    let (c500, dt500, u500) = *iso.shape.last().unwrap();
    suite.check(
        "isolated droplet relaxation",
        iso_ok.is_ok() && c500 > c0 && dt500 < dt50 && u500 < u50,
        format!(
            "circularity {c0:.4} -> {c500:.4}; T range step 50 {dt50:.4e} K -> step 500 {dt500:.4e} K; max |u| step 50 {u50:.4e} -> step 500 {u500:.4e} m/s"
        ),
    );

    let tail = &bub.centroid_y[500.min(bub.centroid_y.len())..];
    let rises = tail.windows(2).filter(|w| !(w[1] < w[0])).count();
    suite.check(
        "bubble sinks",
        bub_ok.is_ok() && rises == 0 && tail.len() == 4501,
        format!(
            "{}centroid y {:.4e} m at step 500 -> {:.4e} m at step 5000, {rises} non-decreasing steps, {:.1} s",
            bub_ok.clone().err().map(|e| e + "; ").unwrap_or_default(),
            tail.first().copied().unwrap_or(f64::NAN),
            tail.last().copied().unwrap_or(f64::NAN),
            secs(bub.elapsed)
        ),
    );

    let (f_iso, f_bub) = (converged_fraction(&iso), converged_fraction(&bub));
    suite.check(
        "outer iteration",
        iso_ok.is_ok() && bub_ok.is_ok() && f_iso >= 0.99 && f_bub >= 0.99,
        format!(
            "steps converged within 10 iterations at tol 1e-3: isolated {:.2}%, bubble {:.2}% (>= 99%)",
            100.0 * f_iso,
            100.0 * f_bub
        ),
    );

    println!("{} criteria failed", suite.failed);
    if suite.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

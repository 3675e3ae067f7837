mod common;

use common::{isolated_cfg, nc4, refinement_orders};
use nonisoflow::diagnostics::{pressure_field, shape_metrics, Phase, CSV_HEADER};
use nonisoflow::grid::Grid;
use nonisoflow::run::Simulation;
use nonisoflow::{DiagnosticsRecord, Error, SimState, ThermoPoint};

const L: f64 = 1e-8;

fn grid40() -> Grid {
    Grid::centered(40, 40, 2.0 * L, 2.0 * L).unwrap()
}

#[test]
fn sharp_square_contour_is_a_chamfered_square() {
    let g = grid40();
    let h = g.dx;
    let n = g.cell_field_from_fn(|x, y| if x.abs() < 0.5 * L && y.abs() < 0.5 * L { 9000.0 } else { 400.0 });
    let m = shape_metrics(&g, &n, 400.0, 9000.0, Phase::Dense).unwrap();
    assert_eq!(m.cells, 400);
    // The level set passes through the cell faces and cuts each corner by a half-cell diagonal.
    assert!((m.area - 399.5 * h * h).abs() < 1e-12 * L * L);
    assert!((m.perimeter - (76.0 + 2.0 * 2f64.sqrt()) * h).abs() < 1e-12 * L);
    assert!(m.circularity > std::f64::consts::FRAC_PI_4 && m.circularity < 0.81);
    assert!(m.centroid.0.abs() < 1e-22 && m.centroid.1.abs() < 1e-22);
}

#[test]
fn diffuse_disk_is_nearly_circular() {
    let g = grid40();
    let r = 0.6 * L;
    let n = g.cell_field_from_fn(|x, y| 4708.336 - 4300.0 * (((x * x + y * y).sqrt() - r) / (0.1 * L)).tanh());
    let disk = shape_metrics(&g, &n, 408.336, 9008.336, Phase::Dense).unwrap();
    assert!((disk.perimeter - 2.0 * std::f64::consts::PI * r).abs() < 5e-3 * r, "{}", disk.perimeter);
    assert!((disk.area - std::f64::consts::PI * r * r).abs() < 5e-3 * r * r, "{}", disk.area);
    assert!(disk.circularity > 0.99 && disk.circularity <= 1.0 + 1e-9);
    let n_sq = g.cell_field_from_fn(|x, y| if x.abs() < 0.3 * L && y.abs() < 0.8 * L { 400.0 } else { 9000.0 });
    let rect = shape_metrics(&g, &n_sq, 400.0, 9000.0, Phase::Light).unwrap();
    assert!(rect.circularity < std::f64::consts::FRAC_PI_4);
}

#[test]
fn centroid_tracks_a_shifted_phase() {
    let g = grid40();
    let n = g.cell_field_from_fn(|x, y| if (x * x + (y + 0.3 * L).powi(2)) < (0.3 * L).powi(2) { 400.0 } else { 9000.0 });
    let m = shape_metrics(&g, &n, 400.0, 9000.0, Phase::Light).unwrap();
    assert!(m.centroid.0.abs() < 1e-3 * L);
    assert!((m.centroid.1 + 0.3 * L).abs() < 0.05 * L);
}

#[test]
fn perimeter_ignores_walls() {
    let g = grid40();
    let n = g.cell_field_from_fn(|_, y| if y < 0.0 { 9000.0 } else { 400.0 });
    let m = shape_metrics(&g, &n, 400.0, 9000.0, Phase::Dense).unwrap();
    // The contour runs between the first and last cell centers.
    assert!((m.perimeter - (2.0 * L - g.dx)).abs() < 1e-12 * L);
}

#[test]
fn missing_phase_is_an_error() {
    let g = grid40();
    let n = g.cell_field(400.0);
    assert!(matches!(shape_metrics(&g, &n, 400.0, 9000.0, Phase::Dense), Err(Error::EmptyPhase(_))));
}

#[test]
fn pressure_of_uniform_state_is_bulk_pressure() {
    let g = grid40();
    let eos = nc4();
    let s = SimState::new(&g, &eos, g.cell_field(6000.0), g.cell_field(350.0), g.face_field(0.0)).unwrap();
    let p = pressure_field(&g, &eos, &s).unwrap();
    let pb = eos.p_bulk(ThermoPoint::new(6000.0, 350.0)).unwrap();
    assert!(p.iter().all(|&v| (v - pb).abs() <= 1e-12 * pb.abs()));
}

#[test]
fn pressure_departs_from_bulk_at_an_interface() {
    let (g, eos, s) = common::manufactured_state(64, false);
    let p = pressure_field(&g, &eos, &s).unwrap();
    let pb = eos.p_bulk(ThermoPoint::new(s.n[(32, 2)], s.t[(32, 2)])).unwrap();
    assert!((p[(32, 2)] - pb).abs() > 1e-3 * pb.abs());
}

#[test]
fn force_balance_converges_at_second_order() {
    for heated in [false, true] {
        let orders = refinement_orders(heated);
        assert!(orders.iter().all(|&o| o >= 1.9), "heated={heated}: {orders:?}");
    }
}

#[test]
fn records_follow_the_energy_ledger() {
    let mut cfg = isolated_cfg();
    cfg.grid.nx = 16;
    cfg.grid.ny = 16;
    let mut sim = Simulation::new(&cfg).unwrap();
    for _ in 0..3 {
        sim.advance().unwrap();
    }
    let r: &[DiagnosticsRecord] = sim.records();
    assert_eq!(r.len(), 4);
    assert_eq!(r[0].first_law_residual, 0.0);
    assert_eq!(r[0].internal_scheme, r[0].internal_physical);
    for w in r.windows(2) {
        let manual = w[1].total_energy - (w[0].kinetic + w[0].internal_physical) + w[1].boundary_heat;
        assert_eq!(manual, w[1].first_law_residual);
        assert_eq!(w[1].entropy_increment, w[1].entropy - w[0].entropy);
        assert_eq!(w[1].total_energy, w[1].kinetic + w[1].internal_scheme);
        assert_eq!(w[1].boundary_heat, 0.0);
        assert_eq!(w[1].step, w[0].step + 1);
    }
    let cols = CSV_HEADER.split(',').count();
    assert!(r.iter().all(|x| x.csv_row().split(',').count() == cols));
}

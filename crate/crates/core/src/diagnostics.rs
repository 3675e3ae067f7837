//! Per-step energy, entropy and mass ledgers, the pressure field, and
//! shape metrics of the dense or light phase.

use crate::eos::{PengRobinson, ThermoPoint};
use crate::error::{Error, Result};
use crate::grid::{self, CellField, EdgeBcs, Grid};
use crate::integrator::{SimState, StepOutcome};

/// Column names of the time-series CSV.
pub const CSV_HEADER: &str =
    "step,time,mass,H,U_scheme,U_physical,E,S,first_law_residual,entropy_increment,boundary_heat,outer_iters";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Energies {
    /// `1/2 int rho |u|^2`.
    pub kinetic: f64,
    /// Integral of the scheme's linearized internal energy.
    pub internal_scheme: f64,
    /// Integral of `theta(n, T)`.
    pub internal_physical: f64,
    /// `kinetic + internal_scheme`.
    pub total: f64,
}

/// One row of the time series. Extensive quantities are per unit depth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRecord {
    pub step: usize,
    pub time: f64,
    /// Total moles, mol/m.
    pub mass: f64,
    pub kinetic: f64,
    pub internal_scheme: f64,
    pub internal_physical: f64,
    pub total_energy: f64,
    pub entropy: f64,
    /// `E^{k+1} - E^k + boundary_heat`; zero for the initial record.
    pub first_law_residual: f64,
    pub entropy_increment: f64,
    /// Heat that left through the boundary during the step, J.
    pub boundary_heat: f64,
    /// Entropy that left with the boundary heat during the step, J/K.
    pub boundary_entropy: f64,
    pub outer_iters: usize,
    pub converged: bool,
    pub dt: f64,
}

/// Energies of a state. `internal_scheme` defaults to the physical value
/// (the case at the initial time).
pub fn energies(g: &Grid, state: &SimState, internal_scheme: Option<f64>) -> Energies {
    let kinetic = grid::kinetic_energy(g, &state.cache.rho, &state.u);
    let internal_physical = grid::domain_integral(g, &state.cache.theta);
    let internal_scheme = internal_scheme.unwrap_or(internal_physical);
    Energies {
        kinetic,
        internal_scheme,
        internal_physical,
        total: kinetic + internal_scheme,
    }
}

/// `int (s_b - 1/2 c'(T) |grad n|^2)`.
pub fn entropy_total(g: &Grid, state: &SimState) -> f64 {
    grid::domain_integral(g, &state.cache.s)
}

/// Residual of the discrete energy balance between consecutive records.
///
/// The old level enters with its physical internal energy, which is what the
/// internal-energy equation is differenced against; the new level enters with
/// the linearized energy of the accepted iterate.
pub fn first_law_residual(prev: &DiagnosticsRecord, cur: &DiagnosticsRecord) -> f64 {
    cur.total_energy - (prev.kinetic + prev.internal_physical) + cur.boundary_heat
}

impl DiagnosticsRecord {
    pub fn initial(g: &Grid, state: &SimState) -> Self {
        let e = energies(g, state, None);
        Self {
            step: state.step,
            time: state.time,
            mass: grid::domain_integral(g, &state.n),
            kinetic: e.kinetic,
            internal_scheme: e.internal_scheme,
            internal_physical: e.internal_physical,
            total_energy: e.total,
            entropy: entropy_total(g, state),
            first_law_residual: 0.0,
            entropy_increment: 0.0,
            boundary_heat: 0.0,
            boundary_entropy: 0.0,
            outer_iters: 0,
            converged: true,
            dt: 0.0,
        }
    }

    pub fn after_step(g: &Grid, prev: &DiagnosticsRecord, outcome: &StepOutcome) -> Self {
        let state = &outcome.state;
        let ledger = &outcome.ledger;
        let e = energies(g, state, Some(ledger.internal_scheme));
        let entropy = entropy_total(g, state);
        let mut rec = Self {
            step: state.step,
            time: state.time,
            mass: grid::domain_integral(g, &state.n),
            kinetic: e.kinetic,
            internal_scheme: e.internal_scheme,
            internal_physical: e.internal_physical,
            total_energy: e.total,
            entropy,
            first_law_residual: 0.0,
            entropy_increment: entropy - prev.entropy,
            boundary_heat: ledger.dt * ledger.boundary_heat_rate,
            boundary_entropy: ledger.dt * ledger.boundary_entropy_rate,
            outer_iters: outcome.report.outer_iters,
            converged: outcome.report.converged,
            dt: ledger.dt,
        };
        rec.first_law_residual = first_law_residual(prev, &rec);
        rec
    }

    /// CSV row matching [`CSV_HEADER`], 17 significant digits.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}",
            self.step,
            self.time,
            self.mass,
            self.kinetic,
            self.internal_scheme,
            self.internal_physical,
            self.total_energy,
            self.entropy,
            self.first_law_residual,
            self.entropy_increment,
            self.boundary_heat,
            self.outer_iters
        )
    }
}

/// General pressure `p_b - n div(c grad n) - 1/2 c |grad n|^2`.
pub fn pressure_field(g: &Grid, eos: &PengRobinson, state: &SimState) -> Result<CellField> {
    let zero_grad = EdgeBcs::zero_gradient();
    let c = influence_cells(eos, &state.t)?;
    let lap = grid::varcoef_diffusion(g, &grid::cell_to_face(g, &c), &state.n, &zero_grad);
    let mut out = g.cell_field(0.0);
    for k in 0..g.num_cells() {
        let p = ThermoPoint::new(state.n.as_slice()[k], state.t.as_slice()[k]);
        out.as_mut_slice()[k] = eos.p_bulk(p)? - p.n * lap.as_slice()[k]
            - 0.5 * c.as_slice()[k] * state.cache.grad_n_sq.as_slice()[k];
    }
    Ok(out)
}

fn influence_cells(eos: &PengRobinson, t: &CellField) -> Result<CellField> {
    let (nx, ny) = t.shape();
    let vals = t.iter().map(|&tv| eos.influence_param(tv).map(|ip| ip.c)).collect::<Result<Vec<_>>>()?;
    Ok(CellField::from_vec(nx, ny, vals))
}

/// Pointwise residual of `n grad mu - gamma grad T - grad p - div(c grad n (x) grad n)`
/// with centered differences at cells. Cells within two of a wall are zero.
pub fn force_balance_residual(g: &Grid, eos: &PengRobinson, state: &SimState) -> Result<(CellField, CellField)> {
    let (nx, ny) = (g.nx, g.ny);
    let p = pressure_field(g, eos, state)?;
    let c = influence_cells(eos, &state.t)?;
    let gamma = state.cache.s.map(|s| -s);
    let mu = &state.cache.mu;

    let ddx = |f: &CellField, i: usize, j: usize| (f[(i + 1, j)] - f[(i - 1, j)]) / (2.0 * g.dx);
    let ddy = |f: &CellField, i: usize, j: usize| (f[(i, j + 1)] - f[(i, j - 1)]) / (2.0 * g.dy);

    // Korteweg tensor components c n_x n_x, c n_x n_y, c n_y n_y.
    let mut kxx = g.cell_field(0.0);
    let mut kxy = g.cell_field(0.0);
    let mut kyy = g.cell_field(0.0);
    for j in 1..ny - 1 {
        for i in 1..nx - 1 {
            let (gx, gy) = (ddx(&state.n, i, j), ddy(&state.n, i, j));
            kxx[(i, j)] = c[(i, j)] * gx * gx;
            kxy[(i, j)] = c[(i, j)] * gx * gy;
            kyy[(i, j)] = c[(i, j)] * gy * gy;
        }
    }

    let mut rx = g.cell_field(0.0);
    let mut ry = g.cell_field(0.0);
    for j in 2..ny.saturating_sub(2) {
        for i in 2..nx.saturating_sub(2) {
            let n = state.n[(i, j)];
            let gm = gamma[(i, j)];
            rx[(i, j)] = n * ddx(mu, i, j) - gm * ddx(&state.t, i, j) - ddx(&p, i, j) - ddx(&kxx, i, j) - ddy(&kxy, i, j);
            ry[(i, j)] = n * ddy(mu, i, j) - gm * ddy(&state.t, i, j) - ddy(&p, i, j) - ddx(&kxy, i, j) - ddy(&kyy, i, j);
        }
    }
    Ok((rx, ry))
}

/// Which phase a shape metric describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// Cells denser than the threshold (a droplet).
    Dense,
    /// Cells lighter than the threshold (a bubble).
    Light,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeMetrics {
    /// Length of the interface contour, m. Walls are not part of it.
    pub perimeter: f64,
    /// Area enclosed by the contour, m^2.
    pub area: f64,
    /// `4 pi area / perimeter^2`.
    pub circularity: f64,
    /// Phase-fraction-weighted mean position, m.
    pub centroid: (f64, f64),
    pub cells: usize,
}

/// Shape of the phase region for densities between `n_gas` and `n_liquid`.
///
/// The interface is the `(n_gas + n_liquid)/2` level set, traced by linear
/// interpolation between cell centers (marching squares), so the half-cell
/// band next to the walls is not covered. `cells` counts cells past the
/// threshold. The centroid weights
/// every cell by its phase fraction (the density rescaled linearly so the
/// pure phase maps to one and the other phase to zero, clipped to `[0, 1]`),
/// which moves continuously as the interface moves.
pub fn shape_metrics(g: &Grid, n: &CellField, n_gas: f64, n_liquid: f64, phase: Phase) -> Result<ShapeMetrics> {
    let threshold = 0.5 * (n_gas + n_liquid);
    let inside = |v: f64| match phase {
        Phase::Dense => v > threshold,
        Phase::Light => v < threshold,
    };
    let fraction = |v: f64| {
        let f = (v - n_gas) / (n_liquid - n_gas);
        let f = match phase {
            Phase::Dense => f,
            Phase::Light => 1.0 - f,
        };
        f.clamp(0.0, 1.0)
    };

    let (nx, ny) = (g.nx, g.ny);
    let mut cells = 0;
    let (mut w, mut wx, mut wy) = (0.0, 0.0, 0.0);
    for j in 0..ny {
        for i in 0..nx {
            let v = n[(i, j)];
            let f = fraction(v);
            let (x, y) = g.cell_center(i, j);
            w += f;
            wx += f * x;
            wy += f * y;
            if inside(v) {
                cells += 1;
            }
        }
    }
    if cells == 0 || w == 0.0 {
        return Err(Error::EmptyPhase(threshold));
    }

    // Signed level with the phase positive, contoured cell by cell on the
    // lattice of cell centers.
    let level = |i: usize, j: usize| match phase {
        Phase::Dense => n[(i, j)] - threshold,
        Phase::Light => threshold - n[(i, j)],
    };
    let mut perimeter = 0.0;
    let mut area = 0.0;
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let pts = corners.map(|(a, b)| (g.cell_center(a, b), level(a, b)));
            let (poly, segs) = clip_square(&pts);
            area += shoelace(&poly);
            perimeter += segs;
        }
    }
    let circularity = if perimeter > 0.0 {
        4.0 * std::f64::consts::PI * area / (perimeter * perimeter)
    } else {
        0.0
    };
    Ok(ShapeMetrics {
        perimeter,
        area,
        circularity,
        centroid: (wx / w, wy / w),
        cells,
    })
}

type Point = (f64, f64);

/// Part of a lattice square where the interpolated level is positive, and
/// the length of the contour crossing it. Corners go counterclockwise.
fn clip_square(pts: &[(Point, f64); 4]) -> (Vec<Point>, f64) {
    let inside = |v: f64| v > 0.0;
    let mut poly = Vec::with_capacity(8);
    let mut exit: Option<Point> = None;
    let mut first_entry: Option<Point> = None;
    let mut length = 0.0;
    for k in 0..4 {
        let (p, a) = pts[k];
        let (q, b) = pts[(k + 1) % 4];
        if inside(a) {
            poly.push(p);
        }
        if inside(a) != inside(b) {
            let t = a / (a - b);
            let c = (p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1));
            poly.push(c);
            if inside(a) {
                exit = Some(c);
            } else {
                match exit.take() {
                    Some(e) => length += dist(e, c),
                    None => first_entry = Some(c),
                }
            }
        }
    }
    if let (Some(e), Some(c)) = (exit, first_entry) {
        length += dist(e, c);
    }
    (poly, length)
}

fn dist(a: Point, b: Point) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

fn shoelace(poly: &[Point]) -> f64 {
    let m = poly.len();
    if m < 3 {
        return 0.0;
    }
    0.5 * (0..m)
        .map(|k| {
            let (a, b) = (poly[k], poly[(k + 1) % m]);
            a.0 * b.1 - b.0 * a.1
        })
        .sum::<f64>()
        .abs()
}

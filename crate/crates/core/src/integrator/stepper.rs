use std::sync::Arc;

use super::scheme::{ForceTemperature, SchemeConfig};
use super::state::{influence_cells, map_points, SimState, ThermoCache};
use crate::eos::{PengRobinson, ThermoPoint};
use crate::error::{Error, Result};
use crate::grid::{self, BoundarySpec, CellField, EdgeBcs, FaceField, Grid, StencilSink};
use crate::linalg::{self, CsrMatrix, TripletSink};

/// Heat conduction coefficient as a function of the local state.
pub type ConductivityFn = dyn Fn(ThermoPoint) -> f64 + Send + Sync;

/// Convergence history of one outer iteration.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IterationReport {
    pub outer_iters: usize,
    /// Relative changes `[n, u, T]` per iteration.
    pub changes: Vec<[f64; 3]>,
    /// Krylov iterations `[density, momentum, energy]` per iteration.
    pub linear_iters: Vec<[usize; 3]>,
    pub converged: bool,
    /// Set when the largest relative change grew between two iterations.
    pub non_monotone: bool,
}

/// Energy bookkeeping of an accepted step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepLedger {
    /// Step size actually used, s.
    pub dt: f64,
    /// Kinetic energy at the new level, J (per unit depth).
    pub kinetic: f64,
    /// Integral of the linearized internal energy, J.
    pub internal_scheme: f64,
    /// Outward boundary heat flow rate, W.
    pub boundary_heat_rate: f64,
    /// Outward boundary entropy flow rate `int q.nu / T`, W/K.
    pub boundary_entropy_rate: f64,
    /// Kinetic energy at the old level, J.
    pub kinetic_old: f64,
    /// Internal energy at the old level, J.
    pub internal_old: f64,
}

impl StepLedger {
    /// `E^{k+1} - E^k + dt * Q_boundary`.
    pub fn first_law_residual(&self) -> f64 {
        (self.kinetic + self.internal_scheme) - (self.kinetic_old + self.internal_old)
            + self.dt * self.boundary_heat_rate
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub state: SimState,
    pub report: IterationReport,
    pub ledger: StepLedger,
    /// 1 when the first attempt was accepted.
    pub attempts: usize,
}

/// Quantities frozen at the old time level for one step.
pub struct StepContext {
    pub dt: f64,
    pub n_face: FaceField,
    pub rho_face: FaceField,
    pub s_face: FaceField,
    pub rho: CellField,
    pub eta: CellField,
    pub lambda: CellField,
    pub conductivity: CellField,
    pub conductivity_face: FaceField,
}

/// Result of the coupled density / chemical-potential solve.
#[derive(Debug, Clone, PartialEq)]
pub struct DensitySolve {
    pub n: CellField,
    pub mu: CellField,
    pub linear_iters: usize,
}

/// Auxiliary velocity and the quantities derived from it.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxVelocity {
    pub u_star: FaceField,
    /// Face force density `n grad mu + s grad T`, N/m^3.
    pub force: FaceField,
    /// Molar flux `n_f u_star`, mol/m^2/s.
    pub molar_flux: FaceField,
    /// Density after the mass update with this flux.
    pub n_new: CellField,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergySolve {
    pub t: CellField,
    /// Linearized internal energy at the new iterate.
    pub theta_lin: CellField,
    pub linear_iters: usize,
}

/// Advances a simulation with the decoupled, linearized scheme.
#[derive(Clone)]
pub struct Stepper {
    pub grid: Grid,
    pub eos: PengRobinson,
    pub boundary: BoundarySpec,
    pub cfg: SchemeConfig,
    conductivity: Arc<ConductivityFn>,
}

impl std::fmt::Debug for Stepper {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Stepper")
            .field("grid", &self.grid)
            .field("boundary", &self.boundary)
            .field("cfg", &self.cfg)
            .finish_non_exhaustive()
    }
}

/// RMS velocity, m/s, below which velocity changes count as round-off.
const VELOCITY_FLOOR: f64 = 1e-8;

fn rel_change(new: &[f64], old: &[f64]) -> f64 {
    rel_change_floored(new, old, 0.0)
}

/// Relative 2-norm change with the scale bounded below by an RMS `floor`.
fn rel_change_floored(new: &[f64], old: &[f64], floor: f64) -> f64 {
    let diff = new.iter().zip(old).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    let scale = new
        .iter()
        .map(|a| a * a)
        .sum::<f64>()
        .sqrt()
        .max(old.iter().map(|a| a * a).sum::<f64>().sqrt())
        .max(floor * (new.len() as f64).sqrt());
    if scale > 0.0 {
        diff / scale
    } else {
        0.0
    }
}

fn is_domain_error(e: &Error) -> bool {
    matches!(
        e,
        Error::DensityOutOfDomain { .. }
            | Error::NonPositiveTemperature(_)
            | Error::HeatCapacity { .. }
            | Error::InfluenceParameter { .. }
    )
}

impl Stepper {
    pub fn new(grid: Grid, eos: PengRobinson, boundary: BoundarySpec, cfg: SchemeConfig) -> Result<Self> {
        cfg.validate()?;
        let theta = cfg.conductivity;
        Ok(Self {
            grid,
            eos,
            boundary,
            cfg,
            conductivity: Arc::new(move |_| theta),
        })
    }

    /// Replaces the constant conduction coefficient by a state-dependent one.
    pub fn with_conductivity(mut self, f: impl Fn(ThermoPoint) -> f64 + Send + Sync + 'static) -> Self {
        self.conductivity = Arc::new(f);
        self
    }

    pub fn temperature_bcs(&self) -> EdgeBcs {
        self.boundary.temperature_bcs()
    }

    /// Conduction coefficient at cells.
    pub fn conductivity_cells(&self, n: &CellField, t: &CellField) -> CellField {
        let (nx, ny) = n.shape();
        let vals = n.iter().zip(t.iter()).map(|(&nv, &tv)| (self.conductivity)(ThermoPoint::new(nv, tv))).collect();
        CellField::from_vec(nx, ny, vals)
    }

    /// Builds an initial state with caches evaluated directly.
    pub fn initial_state(&self, n: CellField, t: CellField) -> Result<SimState> {
        let u = self.grid.face_field(0.0);
        SimState::new(&self.grid, &self.eos, n, t, u)
    }

    pub fn context(&self, state: &SimState, dt: f64) -> StepContext {
        let g = &self.grid;
        let mw = self.eos.substance().molar_weight;
        let n_face = grid::cell_to_face(g, &state.n);
        let rho_face = n_face.map(|v| v * mw);
        let conductivity = self.conductivity_cells(&state.n, &state.t);
        StepContext {
            dt,
            s_face: grid::cell_to_face(g, &state.cache.s),
            rho: state.cache.rho.clone(),
            eta: g.cell_field(self.cfg.shear_viscosity),
            lambda: g.cell_field(self.cfg.second_viscosity()),
            conductivity_face: grid::cell_to_face(g, &conductivity),
            conductivity,
            n_face,
            rho_face,
        }
    }

    fn check_density(&self, n: &CellField) -> Result<()> {
        let max = self.eos.max_density();
        for &v in n.iter() {
            if !(v > 0.0 && v < max) {
                return Err(Error::DensityOutOfDomain { n: v, max });
            }
        }
        Ok(())
    }

    fn check_temperature(t: &CellField) -> Result<()> {
        for &v in t.iter() {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::NonPositiveTemperature(v));
            }
        }
        Ok(())
    }

    fn solve(&self, a: &CsrMatrix, b: &[f64], guess: Option<&[f64]>) -> Result<(Vec<f64>, usize)> {
        let sol = linalg::solve(a, b, guess, &self.cfg.linear)?;
        Ok((sol.x, sol.iterations))
    }

    /// Linearized chemical potential at the new iterate `n_new`:
    /// convex part expanded about `(n_prev, t_prev)`, concave part at
    /// `(n_old, t_prev)`, gradient term with `c(t_prev)`. Affine in `n_new`.
    pub fn mu_linearized(
        &self,
        n_old: &CellField,
        n_new: &CellField,
        n_prev: &CellField,
        t_prev: &CellField,
    ) -> Result<CellField> {
        let g = &self.grid;
        let mut out = map_points(n_prev, t_prev, |k, p| {
            let m = self.eos.mu_bulk(p)?;
            let concave = self.eos.mu_bulk(ThermoPoint::new(n_old.as_slice()[k], p.t))?.concave;
            Ok(m.convex + m.convex_derivative * (n_new.as_slice()[k] - p.n) + concave)
        })?;
        let c_face = grid::cell_to_face(g, &influence_cells(&self.eos, t_prev)?);
        let lap = grid::varcoef_diffusion(g, &c_face, n_new, &EdgeBcs::zero_gradient());
        for (o, l) in out.as_mut_slice().iter_mut().zip(lap.iter()) {
            *o -= l;
        }
        Ok(out)
    }

    /// Temperature entering the `s grad T` forces.
    fn force_temperature<'a>(&self, state_k: &'a SimState, t_prev: &'a CellField) -> &'a CellField {
        match self.cfg.force_temperature {
            ForceTemperature::Iterate => t_prev,
            ForceTemperature::OldStep => &state_k.t,
        }
    }

    /// Solves the mass balance with the auxiliary velocity eliminated,
    /// coupled to the linearized chemical potential. Unknowns are
    /// interleaved per cell as `(n, mu)`.
    pub fn density_chemical_solve(
        &self,
        state_k: &SimState,
        ctx: &StepContext,
        n_prev: &CellField,
        t_prev: &CellField,
        mu_guess: Option<&CellField>,
    ) -> Result<DensitySolve> {
        let g = &self.grid;
        let nc = g.num_cells();
        let dt = ctx.dt;
        let mw = self.eos.substance().molar_weight;
        let zero_grad = EdgeBcs::zero_gradient();

        // n_f^2 / rho_f and n_f s_f / rho_f on faces.
        let kappa = ctx.n_face.map(|v| v / mw);
        let kappa_s = ctx.s_face.map(|v| v / mw);
        let c_face = grid::cell_to_face(g, &influence_cells(&self.eos, t_prev)?);

        let mut sink = TripletSink::new(2 * nc);
        for c in 0..nc {
            sink.coef(2 * c, 2 * c, 1.0);
            sink.coef(2 * c + 1, 2 * c + 1, 1.0);
        }
        grid::diffusion_stencil(g, &kappa, &zero_grad, -dt * dt, |c| 2 * c, |c| 2 * c + 1, &mut sink);
        grid::diffusion_stencil(g, &c_face, &zero_grad, 1.0, |c| 2 * c + 1, |c| 2 * c, &mut sink);

        let mut rhs = vec![0.0; 2 * nc];
        let mut flux_old = ctx.n_face.zip_map(&state_k.u, |a, b| a * b);
        flux_old.zero_boundary_normals();
        let div_old = grid::div_face_to_cell(g, &flux_old);
        let t_force = self.force_temperature(state_k, t_prev);
        let thermal = grid::varcoef_diffusion(g, &kappa_s, t_force, &zero_grad);
        for c in 0..nc {
            rhs[2 * c] = state_k.n.as_slice()[c] - dt * div_old.as_slice()[c] + dt * dt * thermal.as_slice()[c];
        }
        for c in 0..nc {
            let p = ThermoPoint::new(n_prev.as_slice()[c], t_prev.as_slice()[c]);
            let m = self.eos.mu_bulk(p)?;
            let concave = self.eos.mu_bulk(ThermoPoint::new(state_k.n.as_slice()[c], p.t))?.concave;
            sink.coef(2 * c + 1, 2 * c, -m.convex_derivative);
            rhs[2 * c + 1] = m.convex - m.convex_derivative * p.n + concave;
        }

        let (a, _) = sink.into_csr();
        let guess: Option<Vec<f64>> = mu_guess.map(|mu| {
            (0..2 * nc)
                .map(|k| if k % 2 == 0 { n_prev.as_slice()[k / 2] } else { mu.as_slice()[k / 2] })
                .collect()
        });
        let (x, iters) = self.solve(&a, &rhs, guess.as_deref())?;
        let n = CellField::from_vec(g.nx, g.ny, (0..nc).map(|c| x[2 * c]).collect());
        let mu = CellField::from_vec(g.nx, g.ny, (0..nc).map(|c| x[2 * c + 1]).collect());
        Ok(DensitySolve {
            n,
            mu,
            linear_iters: iters,
        })
    }

    /// `u_star = u^k - dt/rho_f (n_f grad mu + s_f grad T)`, zero on the
    /// boundary, followed by the conservative mass update.
    pub fn compute_u_star(
        &self,
        state_k: &SimState,
        ctx: &StepContext,
        mu: &CellField,
        t_force: &CellField,
    ) -> AuxVelocity {
        let g = &self.grid;
        let grad_mu = grid::grad_cell_to_face(g, mu, &EdgeBcs::zero_gradient());
        let grad_t = grid::grad_cell_to_face(g, t_force, &EdgeBcs::zero_gradient());
        let mut force = g.face_field(0.0);
        let mut u_star = g.face_field(0.0);
        let mut molar_flux = g.face_field(0.0);
        for (k, f) in force.x.iter_mut().enumerate() {
            *f = ctx.n_face.x[k] * grad_mu.x[k] + ctx.s_face.x[k] * grad_t.x[k];
        }
        for (k, f) in force.y.iter_mut().enumerate() {
            *f = ctx.n_face.y[k] * grad_mu.y[k] + ctx.s_face.y[k] * grad_t.y[k];
        }
        force.zero_boundary_normals();
        for k in 0..u_star.x.len() {
            u_star.x[k] = state_k.u.x[k] - ctx.dt / ctx.rho_face.x[k] * force.x[k];
            molar_flux.x[k] = ctx.n_face.x[k] * u_star.x[k];
        }
        for k in 0..u_star.y.len() {
            u_star.y[k] = state_k.u.y[k] - ctx.dt / ctx.rho_face.y[k] * force.y[k];
            molar_flux.y[k] = ctx.n_face.y[k] * u_star.y[k];
        }
        u_star.zero_boundary_normals();
        molar_flux.zero_boundary_normals();
        let div = grid::div_face_to_cell(g, &molar_flux);
        let n_new = state_k.n.zip_map(&div, |n, d| n - ctx.dt * d);
        AuxVelocity {
            u_star,
            force,
            molar_flux,
            n_new,
        }
    }

    /// Implicit momentum step with frozen `rho^k` and convecting flux.
    pub fn momentum_solve(
        &self,
        state_k: &SimState,
        ctx: &StepContext,
        aux: &AuxVelocity,
        guess: Option<&FaceField>,
    ) -> Result<(FaceField, usize)> {
        let g = &self.grid;
        let nf = g.num_faces();
        let dt = ctx.dt;
        let mw = self.eos.substance().molar_weight;
        let rho_f = ctx.rho_face.to_vec();
        let u_old = state_k.u.to_vec();
        let force = aux.force.to_vec();
        let mass_flux = aux.molar_flux.map(|v| v * mw);

        let mut interior = vec![false; nf];
        for j in 0..g.ny {
            for i in 1..g.nx {
                interior[g.x_face(i, j)] = true;
            }
        }
        for j in 1..g.ny {
            for i in 0..g.nx {
                interior[g.num_x_faces() + g.y_face(i, j)] = true;
            }
        }

        let mut sink = TripletSink::new(nf);
        let mut rhs = vec![0.0; nf];
        for f in 0..nf {
            if interior[f] {
                sink.coef(f, f, rho_f[f] / dt);
                rhs[f] = rho_f[f] * u_old[f] / dt - force[f];
            } else {
                sink.coef(f, f, 1.0);
            }
        }
        grid::convective_stencil(g, &mass_flux, self.cfg.convection, 1.0, &mut sink);
        grid::viscous_stencil(g, &ctx.eta, &ctx.lambda, -1.0, &mut sink);
        let (a, _) = sink.into_csr();
        let guess = guess.map(FaceField::to_vec);
        let (x, iters) = self.solve(&a, &rhs, guess.as_deref())?;
        let mut u = FaceField::from_vec(g.nx, g.ny, &x);
        u.zero_boundary_normals();
        Ok((u, iters))
    }

    /// Linearized internal-energy step for the temperature.
    #[allow(clippy::too_many_arguments)]
    pub fn energy_solve(
        &self,
        state_k: &SimState,
        ctx: &StepContext,
        aux: &AuxVelocity,
        u_new: &FaceField,
        mu: &CellField,
        t_prev: &CellField,
    ) -> Result<EnergySolve> {
        let g = &self.grid;
        let nc = g.num_cells();
        let dt = ctx.dt;
        let tbcs = self.temperature_bcs();
        let zero_grad = EdgeBcs::zero_gradient();
        let n_new = &aux.n_new;

        let g2 = grid::cell_grad_sq(g, n_new, &zero_grad);
        let theta_lag = map_points(n_new, t_prev, |k, p| self.eos.internal_energy(p, g2.as_slice()[k]))?;
        let cv = map_points(n_new, t_prev, |k, p| self.eos.volumetric_heat_capacity(p, g2.as_slice()[k]))?;

        let src = self.energy_sources(state_k, ctx, aux, u_new, mu, t_prev)?;

        let mut sink = TripletSink::new(nc);
        let mut rhs = vec![0.0; nc];
        for c in 0..nc {
            let cvc = cv.as_slice()[c];
            sink.coef(c, c, cvc / dt);
            rhs[c] = cvc * t_prev.as_slice()[c] / dt
                - (theta_lag.as_slice()[c] - state_k.cache.theta.as_slice()[c]) / dt
                + src.as_slice()[c];
        }
        grid::diffusion_stencil(g, &ctx.conductivity_face, &tbcs, -1.0, |c| c, |c| c, &mut sink);
        let (a, constants) = sink.into_csr();
        for (r, k) in rhs.iter_mut().zip(&constants) {
            *r -= k;
        }
        let (x, iters) = self.solve(&a, &rhs, Some(t_prev.as_slice()))?;
        let t = CellField::from_vec(g.nx, g.ny, x);
        Self::check_temperature(&t)?;
        let mut theta_lin = theta_lag;
        for c in 0..nc {
            theta_lin.as_mut_slice()[c] += cv.as_slice()[c] * (t.as_slice()[c] - t_prev.as_slice()[c]);
        }
        Ok(EnergySolve {
            t,
            theta_lin,
            linear_iters: iters,
        })
    }

    /// Explicit cell sources of the internal-energy equation.
    fn energy_sources(
        &self,
        state_k: &SimState,
        ctx: &StepContext,
        aux: &AuxVelocity,
        u_new: &FaceField,
        mu: &CellField,
        t_prev: &CellField,
    ) -> Result<CellField> {
        let g = &self.grid;
        let dt = ctx.dt;
        let zero_grad = EdgeBcs::zero_gradient();

        // Entropy transport -div(u_star s^k T^l), upwinded.
        let st = state_k.cache.s.zip_map(t_prev, |s, t| s * t);
        let transport = grid::upwind_div(g, &st, &aux.u_star);

        // -div((div N) c grad n_new), zero flux through the walls.
        let div_n = grid::div_face_to_cell(g, &aux.molar_flux);
        let c_face = grid::cell_to_face(g, &influence_cells(&self.eos, t_prev)?);
        let grad_n = grid::grad_cell_to_face(g, &aux.n_new, &zero_grad);
        let mut composite = grid::cell_to_face(g, &div_n).zip_map(&c_face, |a, b| a * b).zip_map(&grad_n, |a, b| a * b);
        composite.zero_boundary_normals();
        let composite_div = grid::div_face_to_cell(g, &composite);

        // u_star . s grad T on faces, shared by the two neighbours.
        let t_force = self.force_temperature(state_k, t_prev);
        let grad_t = grid::grad_cell_to_face(g, t_force, &zero_grad);
        let mut work = g.cell_field(0.0);
        for j in 0..g.ny {
            for i in 1..g.nx {
                let k = g.x_face(i, j);
                let w = 0.5 * aux.u_star.x[k] * ctx.s_face.x[k] * grad_t.x[k];
                work[(i - 1, j)] += w;
                work[(i, j)] += w;
            }
        }
        for j in 1..g.ny {
            for i in 0..g.nx {
                let k = g.y_face(i, j);
                let w = 0.5 * aux.u_star.y[k] * ctx.s_face.y[k] * grad_t.y[k];
                work[(i, j - 1)] += w;
                work[(i, j)] += w;
            }
        }

        let heating = grid::viscous_dissipation(g, &ctx.eta, &ctx.lambda, u_new);
        let d1 = grid::face_kinetic_to_cells(g, &u_new.zip_map(&aux.u_star, |a, b| a - b));
        let d2 = grid::face_kinetic_to_cells(g, &aux.u_star.zip_map(&state_k.u, |a, b| a - b));

        let mut out = g.cell_field(0.0);
        for c in 0..g.num_cells() {
            out.as_mut_slice()[c] = -transport.as_slice()[c] - composite_div.as_slice()[c]
                - mu.as_slice()[c] * div_n.as_slice()[c]
                + work.as_slice()[c]
                + heating.as_slice()[c]
                + ctx.rho.as_slice()[c] * (d1.as_slice()[c] + d2.as_slice()[c]) / (2.0 * dt);
        }
        Ok(out)
    }

    /// One time step of size `dt` by the outer iteration.
    pub fn outer_iterate(&self, state_k: &SimState, dt: f64) -> Result<StepOutcome> {
        let g = &self.grid;
        let ctx = self.context(state_k, dt);
        let mut n_prev = state_k.n.clone();
        let mut t_prev = state_k.t.clone();
        let mut u_prev = state_k.u.clone();
        let mut mu_prev = state_k.cache.mu.clone();
        let mut report = IterationReport::default();
        let mut last: Option<EnergySolve> = None;
        let mut prev_max = f64::INFINITY;

        for _ in 0..self.cfg.max_outer_iters {
            let dens = self.density_chemical_solve(state_k, &ctx, &n_prev, &t_prev, Some(&mu_prev))?;
            let t_force = self.force_temperature(state_k, &t_prev).clone();
            let aux = self.compute_u_star(state_k, &ctx, &dens.mu, &t_force);
            self.check_density(&aux.n_new)?;
            let (u_new, mom_iters) = self.momentum_solve(state_k, &ctx, &aux, Some(&u_prev))?;
            let energy = self.energy_solve(state_k, &ctx, &aux, &u_new, &dens.mu, &t_prev)?;

            let change = [
                rel_change(aux.n_new.as_slice(), n_prev.as_slice()),
                rel_change_floored(&u_new.to_vec(), &u_prev.to_vec(), VELOCITY_FLOOR),
                rel_change(energy.t.as_slice(), t_prev.as_slice()),
            ];
            let max_change = change.iter().copied().fold(0.0, f64::max);
            if max_change > prev_max {
                report.non_monotone = true;
            }
            prev_max = max_change;
            report.changes.push(change);
            report.linear_iters.push([dens.linear_iters, mom_iters, energy.linear_iters]);
            report.outer_iters += 1;

            n_prev = aux.n_new.clone();
            t_prev = energy.t.clone();
            u_prev = u_new;
            mu_prev = dens.mu;
            last = Some(energy);
            if max_change <= self.cfg.outer_tol {
                report.converged = true;
                break;
            }
        }

        let energy = last.expect("at least one outer iteration");
        let n_new = n_prev;
        let t_new = t_prev;
        let u_new = u_prev;

        let tbcs = self.temperature_bcs();
        let inv_t = t_new.map(|t| 1.0 / t);
        let ledger = StepLedger {
            dt,
            kinetic: grid::kinetic_energy(g, &n_new.map(|v| v * self.eos.substance().molar_weight), &u_new),
            internal_scheme: grid::domain_integral(g, &energy.theta_lin),
            boundary_heat_rate: grid::boundary_heat_flux(g, &t_new, &ctx.conductivity, &tbcs, None),
            boundary_entropy_rate: grid::boundary_heat_flux(g, &t_new, &ctx.conductivity, &tbcs, Some(&inv_t)),
            kinetic_old: grid::kinetic_energy(g, &state_k.cache.rho, &state_k.u),
            internal_old: grid::domain_integral(g, &state_k.cache.theta),
        };

        let cache = ThermoCache::evaluate(g, &self.eos, &n_new, &t_new)?;
        let state = SimState {
            n: n_new,
            t: t_new,
            u: u_new,
            time: state_k.time + dt,
            step: state_k.step + 1,
            cache,
        };
        Ok(StepOutcome {
            state,
            report,
            ledger,
            attempts: 1,
        })
    }

    /// Advances one step with the configured `dt`, halving it on
    /// thermodynamic-domain failures up to `max_retries` times.
    pub fn step(&self, state_k: &SimState) -> Result<StepOutcome> {
        let mut dt = self.cfg.dt;
        let mut attempts = 0;
        loop {
            attempts += 1;
            match self.outer_iterate(state_k, dt) {
                Ok(mut out) => {
                    out.attempts = attempts;
                    return Ok(out);
                }
                Err(e) if is_domain_error(&e) && attempts <= self.cfg.max_retries => dt *= 0.5,
                Err(e) => {
                    return Err(Error::StepRejected {
                        step: state_k.step + 1,
                        attempts,
                        reason: e.to_string(),
                    })
                }
            }
        }
    }
}

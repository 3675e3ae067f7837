//! Checks shared by the property tests and the acceptance suite.
#![allow(dead_code)]

use nonisoflow::config::ScenarioConfig;
use nonisoflow::eos::{PengRobinson, Substance, ThermoPoint};
use nonisoflow::grid::Grid;
use nonisoflow::SimState;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ISOLATED_CFG: &str = include_str!("../../../../configs/nc4_isolated.cfg");
pub const BUBBLE_CFG: &str = include_str!("../../../../configs/nc4_bubble.cfg");

pub fn nc4() -> PengRobinson {
    PengRobinson::new(Substance::n_butane()).unwrap()
}

pub fn isolated_cfg() -> ScenarioConfig {
    ScenarioConfig::parse(ISOLATED_CFG).unwrap()
}

pub fn bubble_cfg() -> ScenarioConfig {
    ScenarioConfig::parse(BUBBLE_CFG).unwrap()
}

/// Fourth-order central difference.
pub fn d1(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

/// Second-order second difference.
pub fn d2(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Random point with `n` log-uniform in `[1, 0.95/b]` and `T` uniform in `[250, 500]`.
pub fn random_point(eos: &PengRobinson, rng: &mut impl Rng) -> ThermoPoint {
    let n_max = 0.95 / eos.coeffs().b;
    let n = (rng.gen::<f64>() * n_max.ln()).exp();
    let t = rng.gen_range(250.0..500.0);
    ThermoPoint::new(n, t)
}

/// Largest relative errors of analytic derivatives against finite differences.
#[derive(Debug, Default, Clone, Copy)]
pub struct FdErrors {
    pub mu: f64,
    pub gamma: f64,
    pub da: f64,
    pub d2a: f64,
    pub dc: f64,
    pub d2c: f64,
    pub dtheta_dt: f64,
    /// `theta_b = f_b + T s_b`.
    pub energy_identity: f64,
    /// `n mu_b - f_b` against the closed-form pressure.
    pub pressure_identity: f64,
}

impl FdErrors {
    pub fn max_derivative(&self) -> f64 {
        [self.mu, self.gamma, self.da, self.d2a, self.dc, self.d2c, self.dtheta_dt]
            .into_iter()
            .fold(0.0, f64::max)
    }

    pub fn max_identity(&self) -> f64 {
        self.energy_identity.max(self.pressure_identity)
    }

    fn absorb(&mut self, o: &FdErrors) {
        self.mu = self.mu.max(o.mu);
        self.gamma = self.gamma.max(o.gamma);
        self.da = self.da.max(o.da);
        self.d2a = self.d2a.max(o.d2a);
        self.dc = self.dc.max(o.dc);
        self.d2c = self.d2c.max(o.d2c);
        self.dtheta_dt = self.dtheta_dt.max(o.dtheta_dt);
        self.energy_identity = self.energy_identity.max(o.energy_identity);
        self.pressure_identity = self.pressure_identity.max(o.pressure_identity);
    }
}

/// All derivative and identity checks at one point. `g2` is `|grad n|^2`.
pub fn fd_errors_at(eos: &PengRobinson, p: ThermoPoint, g2: f64) -> FdErrors {
    let ThermoPoint { n, t } = p;
    let hn = 1e-3 * n;
    let ht = 1e-3 * t;
    let f = |nn: f64, tt: f64| eos.f_bulk(ThermoPoint::new(nn, tt)).unwrap().total;

    let mu = eos.mu_bulk(p).unwrap().total;
    let gamma = eos.gamma_s_bulk(p).unwrap().gamma;
    let ep = eos.energy_param(t).unwrap();
    let ip = eos.influence_param(t).unwrap();
    let cv = eos.volumetric_heat_capacity(p, g2).unwrap();
    let s_b = eos.gamma_s_bulk(p).unwrap().entropy;

    FdErrors {
        mu: rel(mu, d1(|x| f(x, t), n, hn)),
        gamma: rel(gamma, d1(|x| f(n, x), t, ht)),
        da: rel(ep.da, d1(|x| eos.energy_param(x).unwrap().a, t, ht)),
        d2a: rel(ep.d2a, d1(|x| eos.energy_param(x).unwrap().da, t, ht)),
        dc: rel(ip.dc, d1(|x| eos.influence_param(x).unwrap().c, t, ht)),
        d2c: rel(ip.d2c, d1(|x| eos.influence_param(x).unwrap().dc, t, ht)),
        dtheta_dt: rel(cv, d1(|x| eos.internal_energy(ThermoPoint::new(n, x), g2).unwrap(), t, ht)),
        energy_identity: rel(eos.internal_energy_bulk(p).unwrap(), f(n, t) + t * s_b),
        pressure_identity: rel(eos.p_bulk(p).unwrap(), eos.p_direct(p).unwrap()),
    }
}

/// Runs [`fd_errors_at`] over `count` seeded random points.
pub fn thermo_oracle_suite(count: usize, seed: u64) -> FdErrors {
    let eos = nc4();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = FdErrors::default();
    for _ in 0..count {
        let p = random_point(&eos, &mut rng);
        let g2 = rng.gen_range(0.0..1e20);
        worst.absorb(&fd_errors_at(&eos, p, g2));
    }
    worst
}

/// Counts of sign violations on the 50 x 50 `(n, T)` sweep.
#[derive(Debug, Default, Clone, Copy)]
pub struct SweepViolations {
    /// `d2(f_ideal + f_rep)/dn2 < 0` or analytic `d mu_convex/dn <= 0`.
    pub convex: usize,
    /// `d2 f_attr/dn2 > 0`.
    pub concave: usize,
    /// `d2 f_b/dT2 > 0`.
    pub temperature: usize,
    /// `c'' > 0` where the concavity condition holds.
    pub influence: usize,
    /// Temperatures in `[0.1 Tc, 3 Tc]` where the condition fails.
    pub condition: usize,
    pub points: usize,
}

impl SweepViolations {
    pub fn total(&self) -> usize {
        self.convex + self.concave + self.temperature + self.influence + self.condition
    }
}

pub fn convexity_sweep() -> SweepViolations {
    let eos = nc4();
    let n_max = 0.95 / eos.coeffs().b;
    let tc = eos.substance().critical_temperature;
    let mut v = SweepViolations::default();
    for i in 0..50 {
        let n = n_max * (i as f64 + 1.0) / 51.0;
        for k in 0..50 {
            let t = 250.0 + 250.0 * k as f64 / 49.0;
            v.points += 1;
            let hn = 1e-3 * n;
            let ht = 1e-2 * t;
            let split = |x: f64| {
                let fb = eos.f_bulk(ThermoPoint::new(x, t)).unwrap();
                (fb.ideal + fb.repulsion, fb.attraction)
            };
            let convex = d2(|x| split(x).0, n, hn);
            let concave = d2(|x| split(x).1, n, hn);
            let dmu = eos.mu_bulk(ThermoPoint::new(n, t)).unwrap().convex_derivative;
            if convex < 0.0 || dmu <= 0.0 {
                v.convex += 1;
            }
            if concave > 0.0 {
                v.concave += 1;
            }
            let ftt = d2(|x| eos.f_bulk(ThermoPoint::new(n, x)).unwrap().total, t, ht);
            if ftt > 0.0 {
                v.temperature += 1;
            }
        }
    }
    for k in 0..50 {
        let t = 250.0 + 250.0 * k as f64 / 49.0;
        if eos.concavity_condition(t).unwrap() {
            let c2 = d2(|x| eos.influence_param(x).unwrap().c, t, 1e-2 * t);
            if c2 > 0.0 || eos.influence_param(t).unwrap().d2c > 0.0 {
                v.influence += 1;
            }
        }
    }
    for k in 0..=1000 {
        let t = tc * (0.1 + 2.9 * k as f64 / 1000.0);
        if !eos.concavity_condition(t).unwrap() {
            v.condition += 1;
        }
    }
    v
}

/// Smooth 1D state on an `nx x 5` grid over `(-L, L) x (-L/8, L/8)`: a tanh
/// density step of width `L/3` and, if `heated`, a sinusoidal temperature.
pub fn manufactured_state(nx: usize, heated: bool) -> (Grid, PengRobinson, SimState) {
    let l = 1e-8;
    let g = Grid::new(nx, 5, 2.0 * l, 0.25 * l, (-l, -l / 8.0)).unwrap();
    let eos = nc4();
    let n = g.cell_field_from_fn(|x, _| 4708.336 + 4350.0 * (3.0 * x / l).tanh());
    let t = g.cell_field_from_fn(|x, _| {
        if heated {
            345.0 + 3.0 * (std::f64::consts::PI * x / l).sin()
        } else {
            345.0
        }
    });
    let u = g.face_field(0.0);
    let s = SimState::new(&g, &eos, n, t, u).unwrap();
    (g, eos, s)
}

/// Max-norm of the force-balance residual on a manufactured state.
pub fn force_residual(nx: usize, heated: bool) -> f64 {
    let (g, eos, s) = manufactured_state(nx, heated);
    let (rx, ry) = nonisoflow::diagnostics::force_balance_residual(&g, &eos, &s).unwrap();
    rx.iter().chain(ry.iter()).fold(0.0, |m, v| m.max(v.abs()))
}

/// Observed orders between successive refinements.
pub fn refinement_orders(heated: bool) -> Vec<f64> {
    let r: Vec<f64> = [32, 64, 128].iter().map(|&n| force_residual(n, heated)).collect();
    r.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

use crate::eos::{PengRobinson, ThermoPoint};
use crate::error::Result;
use crate::grid::{self, CellField, EdgeBcs, FaceField, Grid};

/// Thermodynamic fields derived from `(n, T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermoCache {
    /// Mass density, kg/m^3.
    pub rho: CellField,
    /// Entropy density `s = -gamma`, J/m^3/K.
    pub s: CellField,
    /// Bulk part of `gamma = df/dT`.
    pub gamma_bulk: CellField,
    /// Gradient part of `gamma`.
    pub gamma_grad: CellField,
    /// Chemical potential including the gradient term, J/mol.
    pub mu: CellField,
    /// Internal energy density, J/m^3.
    pub theta: CellField,
    /// Discrete `|grad n|^2` at cells.
    pub grad_n_sq: CellField,
}

/// Solution at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    /// Molar density, mol/m^3.
    pub n: CellField,
    /// Temperature, K.
    pub t: CellField,
    /// Face-normal velocity, m/s.
    pub u: FaceField,
    pub time: f64,
    pub step: usize,
    pub cache: ThermoCache,
}

/// Applies a fallible pointwise thermodynamic evaluation over the cells.
pub(crate) fn map_points(
    n: &CellField,
    t: &CellField,
    mut f: impl FnMut(usize, ThermoPoint) -> Result<f64>,
) -> Result<CellField> {
    let (nx, ny) = n.shape();
    let mut out = Vec::with_capacity(nx * ny);
    for (k, (&nv, &tv)) in n.iter().zip(t.iter()).enumerate() {
        out.push(f(k, ThermoPoint::new(nv, tv))?);
    }
    Ok(CellField::from_vec(nx, ny, out))
}

/// Influence parameter `c(T)` at cells.
pub(crate) fn influence_cells(eos: &PengRobinson, t: &CellField) -> Result<CellField> {
    let (nx, ny) = t.shape();
    let vals = t
        .iter()
        .map(|&tv| eos.influence_param(tv).map(|ip| ip.c))
        .collect::<Result<Vec<_>>>()?;
    Ok(CellField::from_vec(nx, ny, vals))
}

impl SimState {
    /// Builds a state and evaluates its caches. Fails if any cell is outside
    /// the thermodynamic domain.
    pub fn new(g: &Grid, eos: &PengRobinson, n: CellField, t: CellField, u: FaceField) -> Result<Self> {
        let cache = ThermoCache::evaluate(g, eos, &n, &t)?;
        Ok(Self {
            n,
            t,
            u,
            time: 0.0,
            step: 0,
            cache,
        })
    }
}

impl ThermoCache {
    pub fn evaluate(g: &Grid, eos: &PengRobinson, n: &CellField, t: &CellField) -> Result<Self> {
        let zero_grad = EdgeBcs::zero_gradient();
        let grad_n_sq = grid::cell_grad_sq(g, n, &zero_grad);
        let mw = eos.substance().molar_weight;
        let rho = n.map(|v| v * mw);

        let gamma_bulk = map_points(n, t, |_, p| eos.gamma_s_bulk(p).map(|e| e.gamma))?;
        let gamma_grad = map_points(n, t, |k, p| {
            let ip = eos.influence_param(p.t)?;
            Ok(0.5 * ip.dc * grad_n_sq.as_slice()[k])
        })?;
        let s = gamma_bulk.zip_map(&gamma_grad, |a, b| -(a + b));
        let theta = map_points(n, t, |k, p| eos.internal_energy(p, grad_n_sq.as_slice()[k]))?;

        let c = influence_cells(eos, t)?;
        let lap = grid::varcoef_diffusion(g, &grid::cell_to_face(g, &c), n, &zero_grad);
        let mu_b = map_points(n, t, |_, p| eos.mu_bulk(p).map(|m| m.total))?;
        let mu = mu_b.zip_map(&lap, |m, l| m - l);

        Ok(Self {
            rho,
            s,
            gamma_bulk,
            gamma_grad,
            mu,
            theta,
            grad_n_sq,
        })
    }
}

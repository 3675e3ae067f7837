//! Scenario configuration files.
//!
//! The format is line oriented: `section.key = value`, `#` starts a comment,
//! blank lines are ignored. Sections are `substance`, `grid`, `scheme`,
//! `scenario` and `run`. Every value is in SI units. Unknown or repeated keys
//! are errors.
//!
//! ```text
//! substance.T_crit = 425.2        # K
//! grid.nx = 40
//! grid.Lx = 2e-8                  # full side length, m; domain is centered
//! scheme.dt = 3e-13               # s
//! scenario.kind = isolated_square
//! run.n_steps = 500
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use crate::eos::Substance;
use crate::error::{Error, Result};
use crate::grid::{Grid, ThermalBc};
use crate::integrator::SchemeConfig;
use crate::linalg::SolverKind;

/// Liquid and gas densities of nC4 at 345 K, mol/m^3.
pub const NC4_LIQUID_DENSITY: f64 = 9058.3724;
pub const NC4_GAS_DENSITY: f64 = 358.2996;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    pub nx: usize,
    pub ny: usize,
    /// Side lengths, m. The domain is `(-lx/2, lx/2) x (-ly/2, ly/2)`.
    pub lx: f64,
    pub ly: f64,
}

impl GridConfig {
    pub fn build(&self) -> Result<Grid> {
        Grid::centered(self.nx, self.ny, self.lx, self.ly)
    }

    /// Half of the shorter side.
    pub fn half_width(&self) -> f64 {
        0.5 * self.lx.min(self.ly)
    }
}

/// Square droplet in an isolated box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareParams {
    /// Half side of the square as a fraction of the half width.
    pub r_frac: f64,
    pub n_gas: f64,
    pub n_liquid: f64,
    pub t_init: f64,
}

impl Default for SquareParams {
    fn default() -> Self {
        Self {
            r_frac: 0.35,
            n_gas: NC4_GAS_DENSITY,
            n_liquid: NC4_LIQUID_DENSITY,
            t_init: 345.0,
        }
    }
}

/// Round bubble with a tanh interface in a box heated from below.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BubbleParams {
    /// Interface sharpness; the profile is `tanh(w (d - r) / L)`.
    pub w: f64,
    pub r_frac: f64,
    pub n_gas: f64,
    pub n_liquid: f64,
    pub t_init: f64,
    pub t_top: f64,
    pub t_bottom: f64,
}

impl Default for BubbleParams {
    fn default() -> Self {
        Self {
            w: 1e5,
            r_frac: 0.45,
            n_gas: NC4_GAS_DENSITY,
            n_liquid: NC4_LIQUID_DENSITY,
            t_init: 345.0,
            t_top: 345.0,
            t_bottom: 348.0,
        }
    }
}

/// Uniform fluid at rest with arbitrary thermal walls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CustomParams {
    pub n_init: f64,
    pub t_init: f64,
    pub left: ThermalBc,
    pub right: ThermalBc,
    pub bottom: ThermalBc,
    pub top: ThermalBc,
}

impl Default for CustomParams {
    fn default() -> Self {
        Self {
            n_init: NC4_GAS_DENSITY,
            t_init: 345.0,
            left: ThermalBc::ADIABATIC,
            right: ThermalBc::ADIABATIC,
            bottom: ThermalBc::ADIABATIC,
            top: ThermalBc::ADIABATIC,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScenarioKind {
    IsolatedSquare(SquareParams),
    BubbleTanh(BubbleParams),
    Custom(CustomParams),
}

impl ScenarioKind {
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::IsolatedSquare(_) => "isolated_square",
            ScenarioKind::BubbleTanh(_) => "bubble_tanh",
            ScenarioKind::Custom(_) => "custom",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n_steps: usize,
    /// Snapshot period in steps; 0 writes only the initial and final fields.
    pub snapshot_every: usize,
    pub output_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub substance: Substance,
    pub grid: GridConfig,
    pub scheme: SchemeConfig,
    pub scenario: ScenarioKind,
    pub run: RunConfig,
}

#[derive(Debug)]
struct Entry {
    value: String,
    line: usize,
}

/// Key-value table with consumption tracking.
struct Table {
    entries: BTreeMap<String, Entry>,
}

impl Table {
    fn parse(text: &str) -> Result<Self> {
        const SECTIONS: [&str; 5] = ["substance", "grid", "scheme", "scenario", "run"];
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let syntax = |message: String| Error::ConfigSyntax { line, message };
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| syntax(format!("expected `section.key = value`, got `{content}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let (section, name) = key
                .split_once('.')
                .ok_or_else(|| syntax(format!("key `{key}` has no section prefix")))?;
            if !SECTIONS.contains(&section) {
                return Err(syntax(format!("unknown section `{section}`")));
            }
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(syntax(format!("malformed key `{key}`")));
            }
            if value.is_empty() {
                return Err(syntax(format!("missing value for `{key}`")));
            }
            let entry = Entry {
                value: value.to_string(),
                line,
            };
            if let Some(prev) = entries.insert(key.to_string(), entry) {
                return Err(syntax(format!("`{key}` already set on line {}", prev.line)));
            }
        }
        Ok(Self { entries })
    }

    fn take_raw(&mut self, key: &str) -> Option<Entry> {
        self.entries.remove(key)
    }

    fn opt<T: FromStr>(&mut self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.take_raw(key) {
            None => Ok(None),
            Some(e) => e.value.parse::<T>().map(Some).map_err(|err| Error::ConfigSyntax {
                line: e.line,
                message: format!("invalid value `{}` for `{key}`: {err}", e.value),
            }),
        }
    }

    fn req<T: FromStr>(&mut self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.opt(key)?
            .ok_or_else(|| Error::ConfigInvalid(format!("missing required key `{key}`")))
    }

    fn or<T: FromStr>(&mut self, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.opt(key)?.unwrap_or(default))
    }

    fn finish(self) -> Result<()> {
        match self.entries.iter().min_by_key(|(_, e)| e.line) {
            None => Ok(()),
            Some((key, e)) => Err(Error::ConfigInvalid(format!("unknown key `{key}` on line {}", e.line))),
        }
    }
}

/// Four comma-separated heat capacity coefficients.
struct Coeffs([f64; 4]);

impl FromStr for Coeffs {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(format!("expected 4 comma-separated numbers, got {}", parts.len()));
        }
        let mut out = [0.0; 4];
        for (o, p) in out.iter_mut().zip(parts) {
            *o = p.parse::<f64>().map_err(|e| format!("`{p}`: {e}"))?;
        }
        Ok(Coeffs(out))
    }
}

/// `neumann:<q>` (outward flux, W/m^2) or `dirichlet:<T>` (K).
struct Wall(ThermalBc);

impl FromStr for Wall {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (kind, v) = s
            .split_once(':')
            .ok_or_else(|| "expected `neumann:<q>` or `dirichlet:<T>`".to_string())?;
        let v: f64 = v.trim().parse().map_err(|e| format!("{e}"))?;
        match kind.trim() {
            "neumann" => Ok(Wall(ThermalBc::Neumann(v))),
            "dirichlet" => Ok(Wall(ThermalBc::Dirichlet(v))),
            other => Err(format!("unknown wall condition `{other}`")),
        }
    }
}

fn wall_str(bc: ThermalBc) -> String {
    match bc {
        ThermalBc::Neumann(q) => format!("neumann:{q:?}"),
        ThermalBc::Dirichlet(t) => format!("dirichlet:{t:?}"),
    }
}

fn invalid(key: &str, msg: impl std::fmt::Display) -> Error {
    Error::ConfigInvalid(format!("`{key}` {msg}"))
}

impl ScenarioConfig {
    /// Parses and validates a configuration.
    pub fn parse(text: &str) -> Result<Self> {
        let mut t = Table::parse(text)?;

        let substance = Substance {
            molar_weight: t.req("substance.molar_weight")?,
            critical_temperature: t.req("substance.T_crit")?,
            critical_pressure: t.req("substance.P_crit")?,
            acentric_factor: t.req("substance.acentric")?,
            heat_capacity: t.req::<Coeffs>("substance.cp_coeffs")?.0,
            reference_energy: t.req("substance.theta0")?,
            reference_temperature: t.req("substance.T0")?,
            reference_pressure: t.req("substance.P0")?,
        };

        let grid = GridConfig {
            nx: t.req("grid.nx")?,
            ny: t.req("grid.ny")?,
            lx: t.req("grid.Lx")?,
            ly: t.req("grid.Ly")?,
        };

        let d = SchemeConfig::default();
        let mut scheme = SchemeConfig {
            dt: t.req("scheme.dt")?,
            outer_tol: t.or("scheme.outer_tol", d.outer_tol)?,
            max_outer_iters: t.or("scheme.max_outer_iters", d.max_outer_iters)?,
            linear: d.linear,
            convection: t.or("scheme.convection", d.convection)?,
            shear_viscosity: t.or("scheme.eta", d.shear_viscosity)?,
            bulk_viscosity: t.or("scheme.xi", d.bulk_viscosity)?,
            conductivity: t.or("scheme.heat_coeff", d.conductivity)?,
            force_temperature: t.or("scheme.force_temperature", d.force_temperature)?,
            max_retries: t.or("scheme.max_retries", d.max_retries)?,
        };
        scheme.linear.kind = t.or::<SolverKind>("scheme.linear_solver", d.linear.kind)?;
        scheme.linear.tol = t.or("scheme.linear_tol", d.linear.tol)?;
        scheme.linear.max_iter = t.or("scheme.linear_max_iter", d.linear.max_iter)?;

        let kind: String = t.req("scenario.kind")?;
        let scenario = match kind.as_str() {
            "isolated_square" => {
                let d = SquareParams::default();
                ScenarioKind::IsolatedSquare(SquareParams {
                    r_frac: t.or("scenario.r_frac", d.r_frac)?,
                    n_gas: t.or("scenario.n_gas", d.n_gas)?,
                    n_liquid: t.or("scenario.n_liquid", d.n_liquid)?,
                    t_init: t.or("scenario.T_init", d.t_init)?,
                })
            }
            "bubble_tanh" => {
                let d = BubbleParams::default();
                ScenarioKind::BubbleTanh(BubbleParams {
                    w: t.or("scenario.w", d.w)?,
                    r_frac: t.or("scenario.r_frac", d.r_frac)?,
                    n_gas: t.or("scenario.n_gas", d.n_gas)?,
                    n_liquid: t.or("scenario.n_liquid", d.n_liquid)?,
                    t_init: t.or("scenario.T_init", d.t_init)?,
                    t_top: t.or("scenario.T_top", d.t_top)?,
                    t_bottom: t.or("scenario.T_bottom", d.t_bottom)?,
                })
            }
            "custom" => {
                let d = CustomParams::default();
                ScenarioKind::Custom(CustomParams {
                    n_init: t.or("scenario.n_init", d.n_init)?,
                    t_init: t.or("scenario.T_init", d.t_init)?,
                    left: t.or("scenario.bc_left", Wall(d.left))?.0,
                    right: t.or("scenario.bc_right", Wall(d.right))?.0,
                    bottom: t.or("scenario.bc_bottom", Wall(d.bottom))?.0,
                    top: t.or("scenario.bc_top", Wall(d.top))?.0,
                })
            }
            other => {
                return Err(invalid(
                    "scenario.kind",
                    format!("must be isolated_square, bubble_tanh or custom, got `{other}`"),
                ))
            }
        };

        let run = RunConfig {
            n_steps: t.req("run.n_steps")?,
            snapshot_every: t.or("run.snapshot_every", 0)?,
            output_dir: PathBuf::from(t.or("run.output_dir", "out".to_string())?),
        };

        t.finish()?;
        let cfg = Self {
            substance,
            grid,
            scheme,
            scenario,
            run,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks every invariant; error messages name the offending key.
    pub fn validate(&self) -> Result<()> {
        let s = &self.substance;
        for (key, v) in [
            ("substance.molar_weight", s.molar_weight),
            ("substance.T_crit", s.critical_temperature),
            ("substance.P_crit", s.critical_pressure),
            ("substance.T0", s.reference_temperature),
            ("substance.P0", s.reference_pressure),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(key, format!("must be positive, got {v}")));
            }
        }
        s.validate()
            .map_err(|e| Error::ConfigInvalid(format!("substance: {e}")))?;

        let g = &self.grid;
        if g.nx < 4 || g.ny < 4 {
            return Err(invalid("grid.nx", format!("and grid.ny must be at least 4, got {}x{}", g.nx, g.ny)));
        }
        for (key, v) in [("grid.Lx", g.lx), ("grid.Ly", g.ly)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(key, format!("must be positive, got {v}")));
            }
        }

        let c = &self.scheme;
        let pos = |key: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(invalid(key, format!("must be positive, got {v}")))
            }
        };
        pos("scheme.dt", c.dt)?;
        pos("scheme.outer_tol", c.outer_tol)?;
        pos("scheme.linear_tol", c.linear.tol)?;
        pos("scheme.eta", c.shear_viscosity)?;
        pos("scheme.heat_coeff", c.conductivity)?;
        if c.max_outer_iters < 1 {
            return Err(invalid("scheme.max_outer_iters", "must be at least 1"));
        }
        if c.linear.max_iter < 1 {
            return Err(invalid("scheme.linear_max_iter", "must be at least 1"));
        }
        if !(c.bulk_viscosity > 2.0 / 3.0 * c.shear_viscosity) {
            return Err(invalid(
                "scheme.xi",
                format!("must exceed 2/3 of scheme.eta, got {} vs eta {}", c.bulk_viscosity, c.shear_viscosity),
            ));
        }

        let densities = |n_gas: f64, n_liquid: f64| {
            pos("scenario.n_gas", n_gas)?;
            pos("scenario.n_liquid", n_liquid)?;
            if n_liquid <= n_gas {
                return Err(invalid("scenario.n_liquid", format!("must exceed scenario.n_gas ({n_liquid} <= {n_gas})")));
            }
            Ok(())
        };
        let r_frac = |r: f64| {
            if r.is_finite() && r > 0.0 && r < 1.0 {
                Ok(())
            } else {
                Err(invalid("scenario.r_frac", format!("must lie in (0, 1) so that r < L, got {r}")))
            }
        };
        match &self.scenario {
            ScenarioKind::IsolatedSquare(p) => {
                r_frac(p.r_frac)?;
                densities(p.n_gas, p.n_liquid)?;
                pos("scenario.T_init", p.t_init)?;
            }
            ScenarioKind::BubbleTanh(p) => {
                r_frac(p.r_frac)?;
                densities(p.n_gas, p.n_liquid)?;
                pos("scenario.w", p.w)?;
                pos("scenario.T_init", p.t_init)?;
                pos("scenario.T_top", p.t_top)?;
                pos("scenario.T_bottom", p.t_bottom)?;
            }
            ScenarioKind::Custom(p) => {
                pos("scenario.n_init", p.n_init)?;
                pos("scenario.T_init", p.t_init)?;
                for (key, bc) in [
                    ("scenario.bc_left", p.left),
                    ("scenario.bc_right", p.right),
                    ("scenario.bc_bottom", p.bottom),
                    ("scenario.bc_top", p.top),
                ] {
                    match bc {
                        ThermalBc::Dirichlet(t) => pos(key, t)?,
                        ThermalBc::Neumann(q) if !q.is_finite() => return Err(invalid(key, "flux must be finite")),
                        ThermalBc::Neumann(_) => {}
                    }
                }
            }
        }
        Ok(())
    }

    /// Writes every field back in the file format. Floats use the shortest
    /// representation that parses back to the same value.
    pub fn serialize(&self) -> String {
        let mut o = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(o, "{k} = {v}");
        };
        let s = &self.substance;
        kv("substance.molar_weight", format!("{:?}", s.molar_weight));
        kv("substance.T_crit", format!("{:?}", s.critical_temperature));
        kv("substance.P_crit", format!("{:?}", s.critical_pressure));
        kv("substance.acentric", format!("{:?}", s.acentric_factor));
        let cp = s.heat_capacity;
        kv("substance.cp_coeffs", format!("{:?}, {:?}, {:?}, {:?}", cp[0], cp[1], cp[2], cp[3]));
        kv("substance.theta0", format!("{:?}", s.reference_energy));
        kv("substance.T0", format!("{:?}", s.reference_temperature));
        kv("substance.P0", format!("{:?}", s.reference_pressure));

        let g = &self.grid;
        kv("grid.nx", g.nx.to_string());
        kv("grid.ny", g.ny.to_string());
        kv("grid.Lx", format!("{:?}", g.lx));
        kv("grid.Ly", format!("{:?}", g.ly));

        let c = &self.scheme;
        kv("scheme.dt", format!("{:?}", c.dt));
        kv("scheme.outer_tol", format!("{:?}", c.outer_tol));
        kv("scheme.max_outer_iters", c.max_outer_iters.to_string());
        kv("scheme.linear_solver", c.linear.kind.to_string());
        kv("scheme.linear_tol", format!("{:?}", c.linear.tol));
        kv("scheme.linear_max_iter", c.linear.max_iter.to_string());
        kv("scheme.convection", c.convection.to_string());
        kv("scheme.eta", format!("{:?}", c.shear_viscosity));
        kv("scheme.xi", format!("{:?}", c.bulk_viscosity));
        kv("scheme.heat_coeff", format!("{:?}", c.conductivity));
        kv("scheme.force_temperature", c.force_temperature.to_string());
        kv("scheme.max_retries", c.max_retries.to_string());

        kv("scenario.kind", self.scenario.name().to_string());
        match &self.scenario {
            ScenarioKind::IsolatedSquare(p) => {
                kv("scenario.r_frac", format!("{:?}", p.r_frac));
                kv("scenario.n_gas", format!("{:?}", p.n_gas));
                kv("scenario.n_liquid", format!("{:?}", p.n_liquid));
                kv("scenario.T_init", format!("{:?}", p.t_init));
            }
            ScenarioKind::BubbleTanh(p) => {
                kv("scenario.w", format!("{:?}", p.w));
                kv("scenario.r_frac", format!("{:?}", p.r_frac));
                kv("scenario.n_gas", format!("{:?}", p.n_gas));
                kv("scenario.n_liquid", format!("{:?}", p.n_liquid));
                kv("scenario.T_init", format!("{:?}", p.t_init));
                kv("scenario.T_top", format!("{:?}", p.t_top));
                kv("scenario.T_bottom", format!("{:?}", p.t_bottom));
            }
            ScenarioKind::Custom(p) => {
                kv("scenario.n_init", format!("{:?}", p.n_init));
                kv("scenario.T_init", format!("{:?}", p.t_init));
                kv("scenario.bc_left", wall_str(p.left));
                kv("scenario.bc_right", wall_str(p.right));
                kv("scenario.bc_bottom", wall_str(p.bottom));
                kv("scenario.bc_top", wall_str(p.top));
            }
        }

        kv("run.n_steps", self.run.n_steps.to_string());
        kv("run.snapshot_every", self.run.snapshot_every.to_string());
        kv("run.output_dir", self.run.output_dir.display().to_string());
        o
    }
}

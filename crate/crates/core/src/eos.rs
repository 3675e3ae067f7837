//! Peng-Robinson thermodynamics for a pure substance.
//!
//! All quantities are SI. Densities are molar (mol/m^3) and energy-like
//! quantities are per unit volume (J/m^3), so `f_bulk` returns a Helmholtz
//! free energy density and `mu_bulk` its derivative with respect to the
//! molar density.
//!
//! The bulk free energy is split as `ideal + repulsion` (convex in `n`) and
//! `attraction` (concave in `n`). The gradient contribution `c(T)/2 |grad n|^2`
//! uses a temperature dependent influence parameter.

use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};

/// Universal gas constant, J/mol/K.
pub const GAS_CONSTANT: f64 = 8.314462618;

/// Relative margin kept away from `n = 0` and `n = 1/b`.
pub const DENSITY_MARGIN: f64 = 1e-12;

/// Physical constants of the simulated fluid.
#[derive(Debug, Clone, PartialEq)]
pub struct Substance {
    /// kg/mol
    pub molar_weight: f64,
    /// K
    pub critical_temperature: f64,
    /// Pa
    pub critical_pressure: f64,
    pub acentric_factor: f64,
    /// Coefficients of the ideal-gas heat capacity `cp(T) = sum a_i T^i`, J/mol/K.
    pub heat_capacity: [f64; 4],
    /// Reference molar internal energy, J/mol.
    pub reference_energy: f64,
    /// K
    pub reference_temperature: f64,
    /// Pa
    pub reference_pressure: f64,
}

impl Substance {
    /// n-butane (nC4).
    pub fn n_butane() -> Self {
        Self {
            molar_weight: 58.12e-3,
            critical_temperature: 425.2,
            critical_pressure: 38.0e5,
            acentric_factor: 0.199,
            heat_capacity: [9.487, 3.313e-1, -1.108e-4, -2.822e-9],
            reference_energy: -2478.95687512,
            reference_temperature: 298.15,
            reference_pressure: 1.0e5,
        }
    }

    /// Checks the constants and that `cv = cp - R` stays positive on [200 K, 600 K].
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("molar_weight", self.molar_weight),
            ("critical_temperature", self.critical_temperature),
            ("critical_pressure", self.critical_pressure),
            ("reference_temperature", self.reference_temperature),
            ("reference_pressure", self.reference_pressure),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::Substance(format!("{name} must be positive, got {value}")));
            }
        }
        if !self.acentric_factor.is_finite() || !self.reference_energy.is_finite() {
            return Err(Error::Substance("non-finite acentric factor or reference energy".into()));
        }
        for k in 0..=40 {
            let t = 200.0 + 10.0 * k as f64;
            let cv = self.cp(t) - GAS_CONSTANT;
            if !(cv > 0.0) {
                return Err(Error::Substance(format!(
                    "ideal-gas cv = {cv} J/mol/K is not positive at T = {t} K"
                )));
            }
        }
        Ok(())
    }

    fn cp(&self, t: f64) -> f64 {
        let [a0, a1, a2, a3] = self.heat_capacity;
        a0 + t * (a1 + t * (a2 + t * a3))
    }
}

/// Constants derived once from a [`Substance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EosCoeffs {
    pub m: f64,
    /// Covolume, m^3/mol.
    pub b: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub gas_constant: f64,
}

pub fn derive_coefficients(substance: &Substance) -> Result<EosCoeffs> {
    let tc = substance.critical_temperature;
    let pc = substance.critical_pressure;
    if !(tc > 0.0) || !(pc > 0.0) {
        return Err(Error::Substance(format!(
            "critical temperature and pressure must be positive (Tc = {tc}, Pc = {pc})"
        )));
    }
    let w = substance.acentric_factor;
    let m = if w <= 0.49 {
        0.37464 + 1.54226 * w - 0.26992 * w * w
    } else {
        0.379642 + 1.485030 * w - 0.164423 * w * w + 0.016666 * w * w * w
    };
    let r = GAS_CONSTANT;
    Ok(EosCoeffs {
        m,
        b: 0.07780 * r * tc / pc,
        beta1: -1e-16 / (1.2326 + 1.3757 * w),
        beta2: 1e-16 / (0.9051 + 1.5410 * w),
        gas_constant: r,
    })
}

/// A (molar density, temperature) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoPoint {
    /// mol/m^3
    pub n: f64,
    /// K
    pub t: f64,
}

impl ThermoPoint {
    pub fn new(n: f64, t: f64) -> Self {
        Self { n, t }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyParam {
    pub a: f64,
    pub da: f64,
    pub d2a: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatCapacity {
    pub cp: f64,
    pub cv: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BulkFreeEnergy {
    pub ideal: f64,
    pub repulsion: f64,
    pub attraction: f64,
    pub total: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BulkChemicalPotential {
    pub total: f64,
    /// Derivative of `ideal + repulsion`.
    pub convex: f64,
    /// Derivative of `attraction`.
    pub concave: f64,
    /// Second derivative of `ideal + repulsion` in `n`.
    pub convex_derivative: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BulkEntropy {
    /// `df_b/dT`
    pub gamma: f64,
    pub entropy: f64,
}

/// Influence parameter `c(T)` with its first two temperature derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfluenceParam {
    pub c: f64,
    pub dc: f64,
    pub d2c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientContributions {
    pub free_energy: f64,
    pub gamma: f64,
    pub internal_energy: f64,
    /// Temperature derivative of `internal_energy`.
    pub internal_energy_dt: f64,
}

/// A substance together with its cached Peng-Robinson constants.
#[derive(Debug, Clone, PartialEq)]
pub struct PengRobinson {
    substance: Substance,
    coeffs: EosCoeffs,
    /// `0.45724 R^2 Tc^2 / Pc`
    a_crit: f64,
    b_two_thirds: f64,
}

impl PengRobinson {
    pub fn new(substance: Substance) -> Result<Self> {
        substance.validate()?;
        let coeffs = derive_coefficients(&substance)?;
        let r = coeffs.gas_constant;
        let tc = substance.critical_temperature;
        let a_crit = 0.45724 * r * r * tc * tc / substance.critical_pressure;
        let b_two_thirds = coeffs.b.powf(2.0 / 3.0);
        Ok(Self {
            substance,
            coeffs,
            a_crit,
            b_two_thirds,
        })
    }

    pub fn substance(&self) -> &Substance {
        &self.substance
    }

    pub fn coeffs(&self) -> &EosCoeffs {
        &self.coeffs
    }

    /// Upper bound `1/b` of the molar density, mol/m^3.
    pub fn max_density(&self) -> f64 {
        1.0 / self.coeffs.b
    }

    pub fn check_temperature(&self, t: f64) -> Result<()> {
        if t > 0.0 && t.is_finite() {
            Ok(())
        } else {
            Err(Error::NonPositiveTemperature(t))
        }
    }

    pub fn check_point(&self, p: ThermoPoint) -> Result<()> {
        self.check_temperature(p.t)?;
        let bn = self.coeffs.b * p.n;
        if bn > DENSITY_MARGIN && bn < 1.0 - DENSITY_MARGIN {
            Ok(())
        } else {
            Err(Error::DensityOutOfDomain {
                n: p.n,
                max: self.max_density(),
            })
        }
    }

    pub fn energy_param(&self, t: f64) -> Result<EnergyParam> {
        self.check_temperature(t)?;
        Ok(self.energy_param_unchecked(t))
    }

    fn energy_param_unchecked(&self, t: f64) -> EnergyParam {
        let m = self.coeffs.m;
        let tc = self.substance.critical_temperature;
        let x = 1.0 + m * (1.0 - (t / tc).sqrt());
        let a = self.a_crit * x * x;
        let sqrt_ttc = (t * tc).sqrt();
        EnergyParam {
            a,
            da: -a * m / (x * sqrt_ttc),
            d2a: m * a * (1.0 + m) / (2.0 * t * sqrt_ttc * x * x),
        }
    }

    pub fn ideal_heat_capacity(&self, t: f64) -> Result<HeatCapacity> {
        self.check_temperature(t)?;
        let cp = self.substance.cp(t);
        let cv = cp - self.coeffs.gas_constant;
        if !(cv > 0.0) {
            return Err(Error::Substance(format!(
                "ideal-gas cv = {cv} J/mol/K is not positive at T = {t} K"
            )));
        }
        Ok(HeatCapacity { cp, cv })
    }

    /// `int_{T0}^{T} cp` and `int_{T0}^{T} cp/xi`, both in closed form.
    fn heat_capacity_integrals(&self, t: f64) -> (f64, f64) {
        let [a0, a1, a2, a3] = self.substance.heat_capacity;
        let t0 = self.substance.reference_temperature;
        let (t2, t02) = (t * t, t0 * t0);
        let (t3, t03) = (t2 * t, t02 * t0);
        let (t4, t04) = (t3 * t, t03 * t0);
        let cp_int = a0 * (t - t0) + a1 * (t2 - t02) / 2.0 + a2 * (t3 - t03) / 3.0 + a3 * (t4 - t04) / 4.0;
        let cp_over_t_int =
            a0 * (t / t0).ln() + a1 * (t - t0) + a2 * (t2 - t02) / 2.0 + a3 * (t3 - t03) / 3.0;
        (cp_int, cp_over_t_int)
    }

    /// `ln((1 + (1 - sqrt2) b n) / (1 + (1 + sqrt2) b n))`, always negative for `n > 0`.
    fn attraction_log(&self, n: f64) -> f64 {
        let bn = self.coeffs.b * n;
        ((1.0 + (1.0 - SQRT_2) * bn) / (1.0 + (1.0 + SQRT_2) * bn)).ln()
    }

    pub fn f_bulk(&self, p: ThermoPoint) -> Result<BulkFreeEnergy> {
        self.check_point(p)?;
        let ThermoPoint { n, t } = p;
        let r = self.coeffs.gas_constant;
        let b = self.coeffs.b;
        let s = &self.substance;
        let (cp_int, cp_over_t_int) = self.heat_capacity_integrals(t);
        let ideal = n * s.reference_energy + n * cp_int
            - n * r * (t - s.reference_temperature)
            - n * r * t * (s.reference_pressure / (n * r * t)).ln()
            - n * t * cp_over_t_int;
        let repulsion = -n * r * t * (-b * n).ln_1p();
        let a = self.energy_param_unchecked(t).a;
        let attraction = a * n / (2.0 * SQRT_2 * b) * self.attraction_log(n);
        Ok(BulkFreeEnergy {
            ideal,
            repulsion,
            attraction,
            total: ideal + repulsion + attraction,
        })
    }

    pub fn mu_bulk(&self, p: ThermoPoint) -> Result<BulkChemicalPotential> {
        self.check_point(p)?;
        let ThermoPoint { n, t } = p;
        let r = self.coeffs.gas_constant;
        let b = self.coeffs.b;
        let s = &self.substance;
        let (cp_int, cp_over_t_int) = self.heat_capacity_integrals(t);
        let rt = r * t;
        let bn = b * n;
        let one_minus_bn = 1.0 - bn;

        let ideal = s.reference_energy + cp_int - r * (t - s.reference_temperature) - t * cp_over_t_int
            + rt
            - rt * (s.reference_pressure / (n * rt)).ln();
        let repulsion = -rt * (-bn).ln_1p() + rt * bn / one_minus_bn;
        let convex = ideal + repulsion;

        let a = self.energy_param_unchecked(t).a;
        let den = 1.0 + 2.0 * bn - bn * bn;
        let concave = a / (2.0 * SQRT_2 * b) * self.attraction_log(n) - a * n / den;

        let convex_derivative =
            rt / n + 2.0 * rt * b / one_minus_bn + rt * bn * b / (one_minus_bn * one_minus_bn);

        Ok(BulkChemicalPotential {
            total: convex + concave,
            convex,
            concave,
            convex_derivative,
        })
    }

    pub fn gamma_s_bulk(&self, p: ThermoPoint) -> Result<BulkEntropy> {
        self.check_point(p)?;
        let ThermoPoint { n, t } = p;
        let r = self.coeffs.gas_constant;
        let b = self.coeffs.b;
        let s = &self.substance;
        let (_, cp_over_t_int) = self.heat_capacity_integrals(t);
        let da = self.energy_param_unchecked(t).da;
        let entropy = n * r * (-b * n).ln_1p()
            + n * r * (s.reference_pressure / (n * r * t)).ln()
            + n * cp_over_t_int
            - n * da / (2.0 * SQRT_2 * b) * self.attraction_log(n);
        Ok(BulkEntropy {
            gamma: -entropy,
            entropy,
        })
    }

    pub fn internal_energy_bulk(&self, p: ThermoPoint) -> Result<f64> {
        self.check_point(p)?;
        let ThermoPoint { n, t } = p;
        let r = self.coeffs.gas_constant;
        let b = self.coeffs.b;
        let s = &self.substance;
        let (cp_int, _) = self.heat_capacity_integrals(t);
        let EnergyParam { a, da, .. } = self.energy_param_unchecked(t);
        Ok(n * s.reference_energy + n * cp_int - n * r * (t - s.reference_temperature)
            + n * (a - t * da) / (2.0 * SQRT_2 * b) * self.attraction_log(n))
    }

    /// Bulk pressure `n mu_b - f_b`, Pa.
    pub fn p_bulk(&self, p: ThermoPoint) -> Result<f64> {
        let mu = self.mu_bulk(p)?;
        let f = self.f_bulk(p)?;
        Ok(p.n * mu.total - f.total)
    }

    /// The textbook form `nRT/(1-bn) - a n^2/(1+2bn-b^2n^2)`.
    pub fn p_direct(&self, p: ThermoPoint) -> Result<f64> {
        self.check_point(p)?;
        let ThermoPoint { n, t } = p;
        let bn = self.coeffs.b * n;
        let a = self.energy_param_unchecked(t).a;
        Ok(n * self.coeffs.gas_constant * t / (1.0 - bn) - a * n * n / (1.0 + 2.0 * bn - bn * bn))
    }

    pub fn influence_param(&self, t: f64) -> Result<InfluenceParam> {
        self.check_temperature(t)?;
        let ip = self.influence_param_unchecked(t);
        if !(ip.c > 0.0) {
            return Err(Error::InfluenceParameter {
                temperature: t,
                value: ip.c,
            });
        }
        Ok(ip)
    }

    fn influence_param_unchecked(&self, t: f64) -> InfluenceParam {
        let EosCoeffs { beta1, beta2, .. } = self.coeffs;
        let tc = self.substance.critical_temperature;
        let EnergyParam { a, da, d2a } = self.energy_param_unchecked(t);
        let bracket = beta1 * (1.0 - t / tc) + beta2;
        let k = self.b_two_thirds;
        InfluenceParam {
            c: a * k * bracket,
            dc: da * k * bracket - a * k * beta1 / tc,
            d2c: d2a * k * bracket - 2.0 * da * k * beta1 / tc,
        }
    }

    /// Value of the bracket whose sign decides the concavity of `c(T)`;
    /// `c''(T)` equals this times a positive factor.
    pub fn concavity_bracket(&self, t: f64) -> Result<f64> {
        self.check_temperature(t)?;
        let EosCoeffs { m, beta1, beta2, .. } = self.coeffs;
        let tr = t / self.substance.critical_temperature;
        Ok((1.0 + m) * (beta1 * (1.0 - tr) + beta2) + 4.0 * beta1 * tr * (1.0 + m * (1.0 - tr.sqrt())))
    }

    /// True when the gradient free energy is concave in temperature at `t`.
    pub fn concavity_condition(&self, t: f64) -> Result<bool> {
        Ok(self.concavity_bracket(t)? <= 0.0)
    }

    /// `d theta/dT` of the full internal energy density at fixed `n` and `|grad n|^2`.
    pub fn volumetric_heat_capacity(&self, p: ThermoPoint, grad_n_sq: f64) -> Result<f64> {
        self.check_point(p)?;
        let ThermoPoint { n, t } = p;
        let cv = self.ideal_heat_capacity(t)?.cv;
        let d2a = self.energy_param_unchecked(t).d2a;
        let bulk = n * cv - n * t * d2a / (2.0 * SQRT_2 * self.coeffs.b) * self.attraction_log(n);
        let ip = self.influence_param_unchecked(t);
        let value = bulk + grad_contributions(ip, grad_n_sq, t).internal_energy_dt;
        if !(value > 0.0) {
            return Err(Error::HeatCapacity {
                n,
                temperature: t,
                value,
            });
        }
        Ok(value)
    }

    /// Full internal energy density `theta_b + theta_grad` at a cell.
    pub fn internal_energy(&self, p: ThermoPoint, grad_n_sq: f64) -> Result<f64> {
        let bulk = self.internal_energy_bulk(p)?;
        let ip = self.influence_param(p.t)?;
        Ok(bulk + grad_contributions(ip, grad_n_sq, p.t).internal_energy)
    }

    /// Full entropy density `s_b - c'(T)/2 |grad n|^2`.
    pub fn entropy(&self, p: ThermoPoint, grad_n_sq: f64) -> Result<f64> {
        let bulk = self.gamma_s_bulk(p)?.entropy;
        let ip = self.influence_param(p.t)?;
        Ok(bulk - grad_contributions(ip, grad_n_sq, p.t).gamma)
    }
}

pub fn grad_contributions(ip: InfluenceParam, grad_n_sq: f64, t: f64) -> GradientContributions {
    let half = 0.5 * grad_n_sq;
    let free_energy = half * ip.c;
    let gamma = half * ip.dc;
    GradientContributions {
        free_energy,
        gamma,
        internal_energy: free_energy - t * gamma,
        internal_energy_dt: -half * t * ip.d2c,
    }
}

use num_complex::Complex64;

use crate::cp::{lifetime_inequalities, DecayRates};
use crate::error::{Error, Result};

/// Parameters of the optical Bloch equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochParams {
    /// Rabi frequency Ω.
    pub rabi: f64,
    /// Detuning Δ.
    pub detuning: f64,
    pub rates: DecayRates,
    /// Equilibrium inversion approached at rate `1/T_w`.
    pub w_eq: f64,
}

impl BlochParams {
    pub fn new(rabi: f64, detuning: f64, rates: DecayRates, w_eq: f64) -> Result<Self> {
        let p = BlochParams {
            rabi,
            detuning,
            rates,
            w_eq,
        };
        p.validate()?;
        Ok(p)
    }

    /// Pure damping, no drive, `w_eq = 0`.
    pub fn damping(rates: DecayRates) -> Result<Self> {
        Self::new(0.0, 0.0, rates, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        self.rates.validate()?;
        if !(self.w_eq.abs() <= 1.0) {
            return Err(Error::Input(format!("|w_eq| = {} must be ≤ 1", self.w_eq.abs())));
        }
        if !self.rabi.is_finite() || !self.detuning.is_finite() {
            return Err(Error::Input("Rabi frequency and detuning must be finite".into()));
        }
        Ok(())
    }

    /// True when the dynamics has no translation part.
    pub fn is_unital(&self) -> bool {
        self.w_eq == 0.0 || self.rates.w == 0.0
    }
}

/// Physical origin of the decay constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    /// `1/T_u = 1/T_v = 1/T₂`, `1/T_w = 1/T₁`.
    Standard { t1: f64, t2: f64 },
    /// Squeezed vacuum reservoir with Einstein coefficient `a`, mean photon
    /// number `n` and squeezing parameter `m`.
    SqueezedVacuum { a: f64, n: f64, m: Complex64 },
    /// Three independent Gaussian white noises on `σ_x, σ_y, σ_z`.
    TripleGaussian { gamma_a: f64, gamma_b: f64, gamma_c: f64 },
}

/// Rates produced by a [`Preset`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PresetRates {
    /// `(1/T_u, 1/T_v, 1/T_w)`; `1/T_v` is negative for over-squeezed input.
    pub rates: [f64; 3],
    pub w_eq: f64,
    /// Complete-positivity verdict implied by the preset's own condition.
    pub completely_positive: bool,
}

impl PresetRates {
    pub fn decay_rates(&self) -> DecayRates {
        DecayRates::from_array(self.rates)
    }

    pub fn bloch_params(&self, rabi: f64, detuning: f64) -> Result<BlochParams> {
        BlochParams::new(rabi, detuning, self.decay_rates(), self.w_eq)
    }
}

fn nonneg(name: &str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Input(format!("{name} = {x} must be finite and ≥ 0")))
    }
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Input(format!("{name} = {x} must be finite and > 0")))
    }
}

/// Maps physical reservoir parameters to Bloch decay rates.
pub fn preset_rates(preset: Preset) -> Result<PresetRates> {
    match preset {
        Preset::Standard { t1, t2 } => {
            positive("T₁", t1)?;
            positive("T₂", t2)?;
            let rates = [1.0 / t2, 1.0 / t2, 1.0 / t1];
            Ok(PresetRates {
                rates,
                w_eq: 0.0,
                completely_positive: lifetime_inequalities(DecayRates::from_array(rates))?,
            })
        }
        Preset::SqueezedVacuum { a, n, m } => {
            nonneg("A", a)?;
            nonneg("N", n)?;
            let m_abs = m.norm();
            if !m_abs.is_finite() {
                return Err(Error::Input("squeezing parameter M must be finite".into()));
            }
            let base = n + 0.5;
            Ok(PresetRates {
                rates: [a * (base + m_abs), a * (base - m_abs), 2.0 * a * base],
                w_eq: -1.0 / (2.0 * n + 1.0),
                completely_positive: base >= m_abs,
            })
        }
        Preset::TripleGaussian {
            gamma_a,
            gamma_b,
            gamma_c,
        } => {
            nonneg("Γ_a", gamma_a)?;
            nonneg("Γ_b", gamma_b)?;
            nonneg("Γ_c", gamma_c)?;
            let rates = [gamma_b + gamma_c, gamma_a + gamma_c, gamma_a + gamma_b];
            Ok(PresetRates {
                rates,
                w_eq: 0.0,
                completely_positive: lifetime_inequalities(DecayRates::from_array(rates))?,
            })
        }
    }
}

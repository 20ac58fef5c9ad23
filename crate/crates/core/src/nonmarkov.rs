//! Dephasing by random telegraph noise: closed-form channel eigenvalue,
//! regime classification, ODE reduction, white-noise limit and Kraus form.

use crate::bloch::AffineBlochMap;
use crate::cp::{bloch_inequalities, CpVerdict, KrausSet};
use crate::error::{require, Result};
use crate::linalg::pauli_basis;
use crate::ode;

/// Telegraph amplitude `a` and correlation time `τ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RtsParams {
    pub a: f64,
    pub tau: f64,
}

impl RtsParams {
    pub fn new(a: f64, tau: f64) -> Result<Self> {
        require(a > 0.0 && a.is_finite(), || format!("amplitude a must be > 0, got {a}"))?;
        require(tau > 0.0 && tau.is_finite(), || format!("correlation time τ must be > 0, got {tau}"))?;
        Ok(RtsParams { a, tau })
    }

    /// Parameters with white-noise rate `γ = 4a²τ`.
    pub fn with_white_noise_rate(gamma: f64, tau: f64) -> Result<Self> {
        require(gamma > 0.0 && gamma.is_finite(), || format!("γ must be > 0, got {gamma}"))?;
        require(tau > 0.0 && tau.is_finite(), || format!("correlation time τ must be > 0, got {tau}"))?;
        Self::new((gamma / (4.0 * tau)).sqrt(), tau)
    }

    /// The fluctuation parameter `aτ`.
    pub fn a_tau(&self) -> f64 {
        self.a * self.tau
    }

    pub fn white_noise_rate(&self) -> f64 {
        4.0 * self.a * self.a * self.tau
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Damped,
    Critical,
    Oscillatory,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Damped => "damped",
            Regime::Critical => "critical",
            Regime::Oscillatory => "oscillatory",
        })
    }
}

const REGIME_BAND: f64 = 1e-12;

pub fn regime(p: &RtsParams) -> Regime {
    let x = p.a_tau();
    if x < 0.25 - REGIME_BAND {
        Regime::Damped
    } else if x <= 0.25 + REGIME_BAND {
        Regime::Critical
    } else {
        Regime::Oscillatory
    }
}

/// Closed-form solution of `c̈ + ċ/τ + 4a²c = 0`, `c(0) = 1`, `ċ(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RtsSolution {
    pub params: RtsParams,
    pub regime: Regime,
    /// `Ω = √(4a² − 1/4τ²)` when real; `−|Ω|` when imaginary; 0 at the
    /// critical point.
    pub frequency: f64,
}

impl RtsSolution {
    pub fn new(params: RtsParams) -> Self {
        let regime = regime(&params);
        let mu = dimensionless_frequency(&params);
        let frequency = match regime {
            Regime::Oscillatory => mu / (2.0 * params.tau),
            Regime::Damped => -mu / (2.0 * params.tau),
            Regime::Critical => 0.0,
        };
        RtsSolution {
            params,
            regime,
            frequency,
        }
    }

    /// `Λ(t)`; `t` must be nonnegative.
    pub fn lambda(&self, t: f64) -> f64 {
        let nu = t / (2.0 * self.params.tau);
        let mu = self.frequency.abs() * 2.0 * self.params.tau;
        match self.regime {
            Regime::Oscillatory => {
                let x = mu * nu;
                (-nu).exp() * (x.cos() + nu * sinc(x))
            }
            Regime::Critical => (-nu).exp() * (1.0 + nu),
            Regime::Damped => {
                let x = mu * nu;
                if x <= 30.0 {
                    (-nu).exp() * (x.cosh() + nu * sinhc(x))
                } else {
                    // cosh and sinh overflow long before the product decays.
                    0.5 * ((1.0 + 1.0 / mu) * (-(1.0 - mu) * nu).exp()
                        + (1.0 - 1.0 / mu) * (-(1.0 + mu) * nu).exp())
                }
            }
        }
    }
}

/// `|μ|` with `μ² = (4aτ)² − 1`.
fn dimensionless_frequency(p: &RtsParams) -> f64 {
    let x = 4.0 * p.a_tau();
    ((x - 1.0) * (x + 1.0)).abs().sqrt()
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

fn sinhc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 + x * x / 6.0
    } else {
        x.sinh() / x
    }
}

/// Channel eigenvalue `Λ(t) = c(t)` of the telegraph dephasing channel.
pub fn rts_lambda(p: &RtsParams, t: f64) -> Result<f64> {
    require(t >= 0.0 && t.is_finite(), || format!("t must be ≥ 0, got {t}"))?;
    Ok(RtsSolution::new(*p).lambda(t))
}

/// One sample of a channel time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSample {
    pub t: f64,
    pub map: AffineBlochMap,
    pub verdict: CpVerdict,
}

/// Time series of channel maps with their complete-positivity verdicts.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ChannelTrace {
    pub samples: Vec<ChannelSample>,
}

impl ChannelTrace {
    pub fn from_lambdas(times: &[f64], lambda: impl Fn(f64) -> [f64; 3]) -> Self {
        let samples = times
            .iter()
            .map(|&t| {
                let l = lambda(t);
                ChannelSample {
                    t,
                    map: AffineBlochMap::unital(l),
                    verdict: bloch_inequalities(l),
                }
            })
            .collect();
        ChannelTrace { samples }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    /// The `u`-damping `Λ₁(t)` of every sample.
    pub fn lambda1(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.map.lambda[0]).collect()
    }
}

/// RK4 solution of `c̈ + ċ/τ + 4a²c = 0` from `c(0) = 1`, `ċ(0) = 0`.
pub fn rts_solve_ode(p: &RtsParams, t_end: f64, dt: f64) -> Result<ChannelTrace> {
    require(dt > 0.0 && dt.is_finite(), || format!("time step must be > 0, got {dt}"))?;
    require(t_end >= 0.0 && t_end.is_finite(), || format!("t_end must be ≥ 0, got {t_end}"))?;
    let (k, w2) = (1.0 / p.tau, 4.0 * p.a * p.a);
    let rhs = |_t: f64, y: &[f64; 2]| [y[1], -k * y[1] - w2 * y[0]];
    let samples = ode::integrate(rhs, [1.0, 0.0], t_end, dt)
        .into_iter()
        .map(|(t, y)| {
            let l = [y[0], y[0], 1.0];
            ChannelSample {
                t,
                map: AffineBlochMap::unital(l),
                verdict: bloch_inequalities(l),
            }
        })
        .collect();
    Ok(ChannelTrace { samples })
}

/// `Λ_wn(t) = e^{−γt}`.
pub fn white_noise_limit(gamma: f64, t: f64) -> Result<f64> {
    require(gamma > 0.0 && gamma.is_finite(), || format!("γ must be > 0, got {gamma}"))?;
    require(t >= 0.0 && t.is_finite(), || format!("t must be ≥ 0, got {t}"))?;
    Ok((-gamma * t).exp())
}

/// `|Λ_rts(t) − e^{−γt}|` for telegraph noise with `4a²τ = γ` held fixed.
pub fn white_noise_gap(gamma: f64, tau: f64, t: f64) -> Result<f64> {
    let p = RtsParams::with_white_noise_rate(gamma, tau)?;
    Ok((rts_lambda(&p, t)? - white_noise_limit(gamma, t)?).abs())
}

/// Dephasing map `diag(Λ, Λ, 1)` with Kraus pair
/// `{√((1+Λ)/2) I, √((1−Λ)/2) σ₃}`; zero-weight operators are dropped.
pub fn dephasing_map(lambda: f64) -> Result<(AffineBlochMap, KrausSet)> {
    require(lambda.abs() <= 1.0 + 1e-12, || format!("|Λ| = {} exceeds 1", lambda.abs()))?;
    let l = lambda.clamp(-1.0, 1.0);
    let s = pauli_basis();
    let ops = [(0.5 * (1.0 + l), s[0]), (0.5 * (1.0 - l), s[3])]
        .into_iter()
        .filter(|(w, _)| *w > 0.0)
        .map(|(w, m)| m.scale_re(w.sqrt()))
        .collect();
    Ok((AffineBlochMap::unital([lambda, lambda, 1.0]), KrausSet::new(ops)?))
}

/// Telegraph dephasing channel at time `t`.
pub fn rts_map(p: &RtsParams, t: f64) -> Result<(AffineBlochMap, KrausSet)> {
    dephasing_map(rts_lambda(p, t)?)
}

/// Dephasing channels with a scalar equatorial damping `Λ(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DephasingChannel {
    Rts(RtsParams),
    WhiteNoise { gamma: f64 },
}

impl DephasingChannel {
    pub fn lambda(&self, t: f64) -> Result<f64> {
        match self {
            DephasingChannel::Rts(p) => rts_lambda(p, t),
            DephasingChannel::WhiteNoise { gamma } => white_noise_limit(*gamma, t),
        }
    }

    pub fn map(&self, t: f64) -> Result<AffineBlochMap> {
        let l = self.lambda(t)?;
        Ok(AffineBlochMap::unital([l, l, 1.0]))
    }
}

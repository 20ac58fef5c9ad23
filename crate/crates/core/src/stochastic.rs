//! Monte Carlo oracle: random Hamiltonians `H = x σ₁ + y σ₂ + z σ₃` rotate
//! the Bloch vector of each realization; ensemble means give the channel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Normal};
use rayon::prelude::*;

use crate::bloch::BlochVector;
use crate::error::{require, Result};
use crate::markov::BlochTrace;
use crate::ode::time_grid;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseKind {
    /// Independent white noises with `⟨x(t)x(s)⟩ = (Γ_a/2) δ(t−s)` etc.
    GaussianWhite { gammas: [f64; 3] },
    /// `z(t) = ±a` flipping at rate `1/2τ`; `τ = ∞` never flips.
    Telegraph { a: f64, tau: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<()> {
        match self.kind {
            NoiseKind::GaussianWhite { gammas } => {
                require(gammas.iter().all(|g| *g >= 0.0 && g.is_finite()), || {
                    format!("noise rates must be finite and ≥ 0, got {gammas:?}")
                })
            }
            NoiseKind::Telegraph { a, tau } => {
                require(a >= 0.0 && a.is_finite(), || format!("amplitude a must be ≥ 0, got {a}"))?;
                require(tau > 0.0, || format!("correlation time τ must be > 0, got {tau}"))
            }
        }
    }

    /// Spec of trajectory `i` of an ensemble.
    pub fn for_trajectory(&self, i: u64) -> NoiseSpec {
        NoiseSpec {
            kind: self.kind,
            seed: self.seed ^ splitmix64(i),
        }
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A telegraph level change: from `time` on, `z = value`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TelegraphEvent {
    pub time: f64,
    pub value: f64,
}

/// Infinite stream of telegraph events; the first is the initial level at
/// `t = 0`, drawn as `±a` with equal probability.
pub struct TelegraphSampler {
    rng: ChaCha8Rng,
    waiting: Option<Exp<f64>>,
    next: Option<TelegraphEvent>,
}

impl Iterator for TelegraphSampler {
    type Item = TelegraphEvent;

    fn next(&mut self) -> Option<TelegraphEvent> {
        let current = self.next?;
        self.next = self.waiting.as_ref().map(|exp| TelegraphEvent {
            time: current.time + exp.sample(&mut self.rng),
            value: -current.value,
        });
        Some(current)
    }
}

pub fn telegraph_sampler(a: f64, tau: f64, seed: u64) -> Result<TelegraphSampler> {
    require(a >= 0.0 && a.is_finite(), || format!("amplitude a must be ≥ 0, got {a}"))?;
    require(tau > 0.0, || format!("correlation time τ must be > 0, got {tau}"))?;
    Ok(make_sampler(a, tau, ChaCha8Rng::seed_from_u64(seed)))
}

fn make_sampler(a: f64, tau: f64, mut rng: ChaCha8Rng) -> TelegraphSampler {
    let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
    let waiting = tau.is_finite().then(|| Exp::new(0.5 / tau).expect("positive flip rate"));
    TelegraphSampler {
        rng,
        waiting,
        next: Some(TelegraphEvent { time: 0.0, value: sign * a }),
    }
}

/// Rotates `b` by the rotation vector `theta` (Rodrigues).
fn rotate(b: [f64; 3], theta: [f64; 3]) -> [f64; 3] {
    let angle = (theta[0] * theta[0] + theta[1] * theta[1] + theta[2] * theta[2]).sqrt();
    if angle == 0.0 {
        return b;
    }
    let k = theta.map(|x| x / angle);
    let (s, c) = angle.sin_cos();
    let kxb = [k[1] * b[2] - k[2] * b[1], k[2] * b[0] - k[0] * b[2], k[0] * b[1] - k[1] * b[0]];
    let kdb = k[0] * b[0] + k[1] * b[1] + k[2] * b[2];
    [0, 1, 2].map(|i| b[i] * c + kxb[i] * s + k[i] * kdb * (1.0 - c))
}

/// Evolves `b0` under one noise realization, one exact rotation per step.
///
/// `H = z σ₃` turns the Bloch vector about `z` at angular rate `2z`.
pub fn simulate_trajectory(spec: &NoiseSpec, b0: BlochVector, t_end: f64, dt: f64) -> Result<BlochTrace> {
    require(dt > 0.0 && dt.is_finite(), || format!("time step must be > 0, got {dt}"))?;
    require(t_end >= 0.0 && t_end.is_finite(), || format!("t_end must be ≥ 0, got {t_end}"))?;
    spec.validate()?;
    let times = time_grid(t_end, dt);
    let states = trajectory_states(spec, b0.to_array(), &times)
        .into_iter()
        .map(BlochVector::from_array)
        .collect();
    Ok(BlochTrace { times, states })
}

fn trajectory_states(spec: &NoiseSpec, b0: [f64; 3], times: &[f64]) -> Vec<[f64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(times.len());
    let mut b = b0;
    out.push(b);
    match spec.kind {
        NoiseKind::GaussianWhite { gammas } => {
            // Angle increment 2W with W ~ N(0, 2D dt), D = Γ/4.
            for w in times.windows(2) {
                let h = w[1] - w[0];
                let theta = gammas.map(|g| {
                    if g == 0.0 {
                        0.0
                    } else {
                        let sd = (2.0 * (g / 4.0) * h).sqrt();
                        2.0 * Normal::new(0.0, sd).expect("finite variance").sample(&mut rng)
                    }
                });
                b = rotate(b, theta);
                out.push(b);
            }
        }
        NoiseKind::Telegraph { a, tau } => {
            let mut events = make_sampler(a, tau, rng).peekable();
            let mut level = events.next().expect("initial level").value;
            for w in times.windows(2) {
                // Exact ∫z dt over the step, splitting at every flip.
                let mut phase = 0.0;
                let mut t = w[0];
                while let Some(ev) = events.next_if(|ev| ev.time < w[1]) {
                    phase += level * (ev.time - t);
                    t = ev.time;
                    level = ev.value;
                }
                phase += level * (w[1] - t);
                b = rotate(b, [0.0, 0.0, 2.0 * phase]);
                out.push(b);
            }
        }
    }
    out
}

/// Ensemble statistics on the simulation grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleResult {
    pub times: Vec<f64>,
    pub mean: Vec<BlochVector>,
    /// Standard error of each mean component.
    pub se: Vec<[f64; 3]>,
    pub n_traj: usize,
}

impl EnsembleResult {
    /// Exponential decay rate `−ln(m)/t` of component `k` at sample `i` with
    /// its delta-method standard error, for a component starting at 1.
    pub fn decay_rate(&self, k: usize, i: usize) -> Option<(f64, f64)> {
        let t = self.times[i];
        let m = self.mean[i][k];
        if t <= 0.0 || m <= 0.0 {
            return None;
        }
        Some((-m.ln() / t, self.se[i][k] / (m * t)))
    }
}

const CHUNK: usize = 64;

/// Per-time sums and sums of squares of the three components.
type Moments = (Vec<[f64; 3]>, Vec<[f64; 3]>);

pub const MIN_TRAJECTORIES: usize = 100;

/// Mean and standard error over `n_traj` trajectories; trajectory `i` is
/// seeded with `seed ⊕ splitmix64(i)`. The result is independent of the
/// thread count.
pub fn ensemble_average(
    spec: &NoiseSpec,
    b0: BlochVector,
    t_end: f64,
    dt: f64,
    n_traj: usize,
) -> Result<EnsembleResult> {
    require(n_traj >= MIN_TRAJECTORIES, || {
        format!("ensemble needs ≥ {MIN_TRAJECTORIES} trajectories, got {n_traj}")
    })?;
    require(dt > 0.0 && dt.is_finite(), || format!("time step must be > 0, got {dt}"))?;
    require(t_end >= 0.0 && t_end.is_finite(), || format!("t_end must be ≥ 0, got {t_end}"))?;
    spec.validate()?;
    let times = time_grid(t_end, dt);
    let n_t = times.len();
    let b0 = b0.to_array();

    // Fixed chunks summed in index order, then reduced sequentially.
    let chunks: Vec<Moments> = (0..n_traj.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut sum = vec![[0.0; 3]; n_t];
            let mut sq = vec![[0.0; 3]; n_t];
            for i in c * CHUNK..((c + 1) * CHUNK).min(n_traj) {
                let states = trajectory_states(&spec.for_trajectory(i as u64), b0, &times);
                for (j, s) in states.iter().enumerate() {
                    for k in 0..3 {
                        sum[j][k] += s[k];
                        sq[j][k] += s[k] * s[k];
                    }
                }
            }
            (sum, sq)
        })
        .collect();

    let mut sum = vec![[0.0; 3]; n_t];
    let mut sq = vec![[0.0; 3]; n_t];
    for (cs, cq) in &chunks {
        for j in 0..n_t {
            for k in 0..3 {
                sum[j][k] += cs[j][k];
                sq[j][k] += cq[j][k];
            }
        }
    }
    let n = n_traj as f64;
    let mut mean = Vec::with_capacity(n_t);
    let mut se = Vec::with_capacity(n_t);
    for j in 0..n_t {
        let m = sum[j].map(|x| x / n);
        let var = [0, 1, 2].map(|k| ((sq[j][k] - n * m[k] * m[k]) / (n - 1.0)).max(0.0));
        mean.push(BlochVector::from_array(m));
        se.push(var.map(|v| (v / n).sqrt()));
    }
    Ok(EnsembleResult {
        times,
        mean,
        se,
        n_traj,
    })
}

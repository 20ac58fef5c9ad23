//! Peres partial-transpose test for a Bell pair whose second qubit passes
//! through a channel.

use crate::bloch::AffineBlochMap;
use crate::cp::choi_test;
use crate::error::{require, Error, Result};
use crate::linalg::{hermitian_eigen4, hermitian_eigenvalues4, kron, pauli_basis, CMat4, C64};
use crate::nonmarkov::{DephasingChannel, RtsSolution};
use crate::tolerances;

/// Density operator of two qubits, ordered `|ab⟩ = |00⟩, |01⟩, |10⟩, |11⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState(CMat4);

impl TwoQubitState {
    /// Validates hermiticity, unit trace and positivity within `1e-10`.
    pub fn new(m: CMat4) -> Result<Self> {
        if (m.trace() - 1.0).norm() > tolerances::HERMITICITY {
            return Err(Error::Contract(format!("trace is {}, expected 1", m.trace())));
        }
        let eig = hermitian_eigen4(&m)?;
        if eig.values[0] < -tolerances::CHOI_FLOOR {
            return Err(Error::Contract(format!(
                "state has negative eigenvalue {}",
                eig.values[0]
            )));
        }
        Ok(TwoQubitState(m))
    }

    pub fn matrix(&self) -> &CMat4 {
        &self.0
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        hermitian_eigenvalues4(&self.0).expect("state is Hermitian")
    }
}

/// `|Φ⁺⟩⟨Φ⁺|` with `|Φ⁺⟩ = (|00⟩ + |11⟩)/√2`.
pub fn bell_state() -> TwoQubitState {
    let mut m = CMat4::zeros();
    for i in [0, 3] {
        for j in [0, 3] {
            m.0[i][j] = C64::new(0.5, 0.0);
        }
    }
    TwoQubitState(m)
}

/// `(I ⊗ Φ)(ρ)` computed through the Pauli product expansion
/// `ρ = ¼ Σ r_αβ σ_α ⊗ σ_β`. Logs a warning when `Φ` is not CP; the output
/// then need not be a valid state and is returned unvalidated.
pub fn one_sided_channel(m: &AffineBlochMap, s: &TwoQubitState) -> TwoQubitState {
    let verdict = choi_test(m);
    if !verdict.is_completely_positive {
        log::warn!(
            "applying a map that is not completely positive (Choi minimum {:.3e}); output may be unphysical",
            verdict.choi_min_eigenvalue
        );
    }
    let t = m.superoperator();
    let sig = pauli_basis();
    let mut out = CMat4::zeros();
    for a in 0..4 {
        for b in 0..4 {
            let r = (kron(&sig[a], &sig[b]) * s.0).trace();
            if r.norm() == 0.0 {
                continue;
            }
            for g in 0..4 {
                let w = t.0[g][b];
                if w != 0.0 {
                    out = out + kron(&sig[a], &sig[g]).scale(r * (0.25 * w));
                }
            }
        }
    }
    TwoQubitState(out)
}

/// Transposes the second qubit: `(2i+k, 2j+l) → (2i+l, 2j+k)`.
pub fn partial_transpose_b(m: &CMat4) -> CMat4 {
    let mut out = CMat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out.0[2 * i + l][2 * j + k] = m.0[2 * i + k][2 * j + l];
                }
            }
        }
    }
    out
}

/// Partial-transpose spectrum of the one-sided noisy Bell pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeresSpectrum {
    /// Numerical eigenvalues, ascending.
    pub values: [f64; 4],
    /// `(½, ½, −Λ/2, Λ/2)` when the map is `diag(Λ, Λ, 1)` without translation.
    pub closed_form: Option<[f64; 4]>,
}

impl PeresSpectrum {
    pub fn in_dephasing_family(&self) -> bool {
        self.closed_form.is_some()
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    /// Negative partial transpose, i.e. entangled for two qubits.
    pub fn is_entangled(&self) -> bool {
        self.min() < -tolerances::CHOI_FLOOR
    }

    /// Note for maps outside the dephasing family, where only the numerical
    /// spectrum is available.
    pub fn family_note(&self) -> Option<&'static str> {
        (!self.in_dephasing_family()).then_some("map is not of the form diag(Λ, Λ, 1); closed form unavailable")
    }
}

pub fn peres_eigenvalues(m: &AffineBlochMap) -> PeresSpectrum {
    let state = one_sided_channel(m, &bell_state());
    let pt = partial_transpose_b(state.matrix());
    let values = hermitian_eigenvalues4(&pt).expect("partial transpose of a Hermitian matrix is Hermitian");
    let [l1, l2, l3] = m.lambda;
    let family = m.is_unital() && (l1 - l2).abs() <= tolerances::EQUALITY && (l3 - 1.0).abs() <= tolerances::EQUALITY;
    PeresSpectrum {
        values,
        closed_form: family.then_some([0.5, 0.5, -0.5 * l1, 0.5 * l1]),
    }
}

/// Zeros of `Λ(t)` in `(0, t_max]`, where the noisy Bell pair is separable.
///
/// Sign changes are bracketed on a grid of step `min(τ/50, π/(10Ω))` and
/// refined by bisection. White noise has no finite zero.
pub fn separability_times(channel: &DephasingChannel, t_max: f64) -> Result<Vec<f64>> {
    require(t_max > 0.0 && t_max.is_finite(), || format!("t_max must be > 0, got {t_max}"))?;
    let p = match channel {
        DephasingChannel::WhiteNoise { gamma } => {
            require(*gamma > 0.0, || format!("γ must be > 0, got {gamma}"))?;
            return Ok(Vec::new());
        }
        DephasingChannel::Rts(p) => *p,
    };
    let sol = RtsSolution::new(p);
    let mut step = p.tau / 50.0;
    if sol.frequency > 0.0 {
        step = step.min(std::f64::consts::PI / (10.0 * sol.frequency));
    }
    let n = (t_max / step).ceil() as usize;
    let at = |k: usize| (k as f64 * step).min(t_max);
    let mut roots = Vec::new();
    let mut prev = (0.0, sol.lambda(0.0));
    for k in 1..=n {
        let t = at(k);
        let v = sol.lambda(t);
        if v == 0.0 {
            roots.push(t);
        } else if prev.1 != 0.0 && prev.1.signum() != v.signum() {
            roots.push(bisect(|x| sol.lambda(x), prev.0, t, prev.1));
        }
        prev = (t, v);
    }
    Ok(roots)
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, f_lo: f64) -> f64 {
    let sign_lo = f_lo.signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-13 * hi.abs() || mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if v.signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

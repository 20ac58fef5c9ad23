use crate::bloch::BlochVector;
use crate::error::{require, Result};
use crate::ode;

use super::BlochParams;

/// Sampled Bloch trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochTrace {
    pub times: Vec<f64>,
    pub states: Vec<BlochVector>,
}

impl BlochTrace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, BlochVector)> + '_ {
        self.times.iter().copied().zip(self.states.iter().copied())
    }

    pub fn last(&self) -> Option<(f64, BlochVector)> {
        self.iter().last()
    }
}

/// Right-hand side of the optical Bloch equations:
///
/// ```text
/// u̇ = −u/T_u − Δv
/// v̇ = −v/T_v + Δu + Ωw
/// ẇ = −(w − w_eq)/T_w − Ωv
/// ```
pub fn bloch_rhs(p: &BlochParams, b: BlochVector) -> [f64; 3] {
    let r = p.rates;
    [
        -r.u * b.u - p.detuning * b.v,
        -r.v * b.v + p.detuning * b.u + p.rabi * b.w,
        -r.w * (b.w - p.w_eq) - p.rabi * b.v,
    ]
}

/// Fixed-step RK4 integration of the Bloch equations from `b0`.
pub fn integrate_bloch(p: &BlochParams, b0: BlochVector, t_end: f64, dt: f64) -> Result<BlochTrace> {
    require(dt > 0.0 && dt.is_finite(), || format!("time step must be > 0, got {dt}"))?;
    require(t_end >= 0.0 && t_end.is_finite(), || format!("t_end must be ≥ 0, got {t_end}"))?;
    p.validate()?;
    let rhs = |_t: f64, y: &[f64; 3]| bloch_rhs(p, BlochVector::from_array(*y));
    let samples = ode::integrate(rhs, b0.to_array(), t_end, dt);
    let (times, states) = samples
        .into_iter()
        .map(|(t, y)| (t, BlochVector::from_array(y)))
        .unzip();
    Ok(BlochTrace { times, states })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cp::DecayRates;

    #[test]
    fn rhs_examples() {
        let zero = BlochParams::damping(DecayRates::new(0.0, 0.0, 0.0)).unwrap();
        assert_eq!(bloch_rhs(&zero, BlochVector::new(0.3, 0.2, 0.1)), [0.0; 3]);

        let p = BlochParams::damping(DecayRates::new(6.0, 3.0, 1.0)).unwrap();
        assert_eq!(bloch_rhs(&p, BlochVector::new(1.0, 1.0, 1.0)), [-6.0, -3.0, -1.0]);

        let p = BlochParams::new(0.0, 2.5, DecayRates::new(0.0, 0.0, 0.0), 0.0).unwrap();
        assert_eq!(bloch_rhs(&p, BlochVector::new(1.0, 0.0, 0.0)), [0.0, 2.5, 0.0]);
    }

    #[test]
    fn rabi_oscillation() {
        let omega = 2.0;
        let p = BlochParams::new(omega, 0.0, DecayRates::new(0.0, 0.0, 0.0), 0.0).unwrap();
        let tr = integrate_bloch(&p, BlochVector::new(0.0, 0.0, 1.0), 5.0, 1e-3).unwrap();
        for (t, b) in tr.iter() {
            assert!((b.w - (omega * t).cos()).abs() < 1e-8, "t={t}");
        }
    }

    #[test]
    fn exponential_decay() {
        let p = BlochParams::damping(DecayRates::new(6.0, 3.0, 1.0)).unwrap();
        let dt = 1e-3 * (1.0 / 6.0);
        let tr = integrate_bloch(&p, BlochVector::new(1.0, 0.0, 0.0), 1.0, dt).unwrap();
        for (t, b) in tr.iter() {
            assert!((b.u - (-6.0 * t).exp()).abs() < 1e-8);
        }
    }

    #[test]
    fn relaxation_to_equilibrium() {
        let p = BlochParams::new(0.0, 0.0, DecayRates::new(1.0, 1.0, 2.0), -1.0).unwrap();
        let tr = integrate_bloch(&p, BlochVector::new(0.0, 0.0, 1.0), 1.0, 1e-3).unwrap();
        let (t, b) = tr.last().unwrap();
        assert!((b.w - (-1.0 + 2.0 * (-2.0 * t).exp())).abs() < 1e-10);
    }

    #[test]
    fn degenerate_inputs() {
        let p = BlochParams::damping(DecayRates::new(1.0, 1.0, 1.0)).unwrap();
        let b0 = BlochVector::new(0.1, 0.2, 0.3);
        let tr = integrate_bloch(&p, b0, 0.0, 0.1).unwrap();
        assert_eq!(tr.states, vec![b0]);
        assert!(integrate_bloch(&p, b0, 1.0, 0.0).is_err());
        assert!(integrate_bloch(&p, b0, 1.0, -0.1).is_err());
    }
}

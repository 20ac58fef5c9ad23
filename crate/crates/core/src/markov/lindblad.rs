use crate::bloch::Superoperator;
use crate::cp::lifetime_violations;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues4, pauli_basis, CMat2, CMat4, C64, ZERO};
use crate::tolerances;

use super::BlochParams;

/// GKS generator `Lρ = −i[H, ρ] + ½ Σ c_ij ([F_i, ρF_j†] + [F_iρ, F_j†])`
/// over the traceless basis `F_i = σ_i/√2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LindbladGenerator {
    hamiltonian: CMat2,
    coefficients: [[C64; 3]; 3],
}

impl LindbladGenerator {
    /// Validates `H = H†`, `tr H = 0` and `c ⪰ 0`.
    pub fn new(hamiltonian: CMat2, coefficients: [[C64; 3]; 3]) -> Result<Self> {
        if !hamiltonian.is_hermitian() {
            return Err(Error::Contract("Hamiltonian must be Hermitian".into()));
        }
        if hamiltonian.trace().norm() > tolerances::HERMITICITY {
            return Err(Error::Contract("Hamiltonian must be traceless".into()));
        }
        // Embed c in a 4×4 Hermitian matrix; the extra zero eigenvalue is harmless.
        let mut embed = CMat4::zeros();
        for i in 0..3 {
            for j in 0..3 {
                embed.0[i][j] = coefficients[i][j];
            }
        }
        let eig = hermitian_eigenvalues4(&embed)
            .map_err(|_| Error::Contract("coefficient matrix c must be Hermitian".into()))?;
        if eig[0] < -tolerances::HERMITICITY {
            return Err(Error::Contract(format!(
                "coefficient matrix c is not positive semidefinite (min eigenvalue {})",
                eig[0]
            )));
        }
        Ok(LindbladGenerator {
            hamiltonian,
            coefficients,
        })
    }

    pub fn zero() -> Self {
        LindbladGenerator {
            hamiltonian: CMat2::zeros(),
            coefficients: [[ZERO; 3]; 3],
        }
    }

    /// Pauli-diagonal dissipator with `c = diag(Γ_a, Γ_b, Γ_c)`; the `u, v, w`
    /// components then decay at `Γ_b+Γ_c, Γ_a+Γ_c, Γ_a+Γ_b`.
    pub fn pauli_diagonal(gammas: [f64; 3]) -> Result<Self> {
        let mut c = [[ZERO; 3]; 3];
        for i in 0..3 {
            c[i][i] = C64::new(gammas[i], 0.0);
        }
        Self::new(CMat2::zeros(), c)
    }

    /// `𝓛ρ = −D[σ₃, [σ₃, ρ]]`, i.e. `c₃₃ = 4D`.
    pub fn dephasing(d: f64) -> Result<Self> {
        Self::pauli_diagonal([0.0, 0.0, 4.0 * d])
    }

    /// Generator of the unital Bloch equations: `H = (−Ωσ_x + Δσ_z)/2`
    /// with Pauli-diagonal dissipation reproducing the three decay rates.
    pub fn from_bloch_params(p: &BlochParams) -> Result<Self> {
        p.validate()?;
        if !p.is_unital() {
            return Err(Error::Unsupported(format!(
                "w_eq = {} with 1/T_w = {} is an affine fixed point outside the generator",
                p.w_eq, p.rates.w
            )));
        }
        let [ru, rv, rw] = p.rates.to_array();
        let gammas = [0.5 * (rv + rw - ru), 0.5 * (ru + rw - rv), 0.5 * (ru + rv - rw)];
        let s = pauli_basis();
        let h = (s[1].scale_re(-p.rabi) + s[3].scale_re(p.detuning)).scale_re(0.5);
        let mut c = [[ZERO; 3]; 3];
        for i in 0..3 {
            c[i][i] = C64::new(gammas[i], 0.0);
        }
        let violated = lifetime_violations(p.rates)?;
        if !violated.is_empty() {
            return Err(Error::Contract(format!(
                "decay rates {:?} violate lifetime inequalities {violated:?}; no GKS generator exists",
                p.rates.to_array()
            )));
        }
        Self::new(h, c)
    }

    pub fn hamiltonian(&self) -> &CMat2 {
        &self.hamiltonian
    }

    pub fn coefficients(&self) -> &[[C64; 3]; 3] {
        &self.coefficients
    }
}

/// Applies the generator to an arbitrary 2×2 operator.
pub fn lindblad_apply(g: &LindbladGenerator, rho: &CMat2) -> CMat2 {
    let i = C64::new(0.0, 1.0);
    let mut out = g.hamiltonian.commutator(rho).scale(-i);
    let s = pauli_basis();
    let f = |k: usize| s[k + 1].scale_re(std::f64::consts::FRAC_1_SQRT_2);
    for a in 0..3 {
        for b in 0..3 {
            let c = g.coefficients[a][b];
            if c == ZERO {
                continue;
            }
            let fa = f(a);
            let fb_dag = f(b).adjoint();
            let term = (fa * *rho * fb_dag).scale_re(2.0) - fb_dag * fa * *rho - *rho * fb_dag * fa;
            out = out + term.scale(c * 0.5);
        }
    }
    out
}

/// Real 4×4 matrix of the generator on Pauli coefficients,
/// `G_αβ = ½ tr(σ_α 𝓛σ_β)`.
pub fn generator_matrix(g: &LindbladGenerator) -> Superoperator {
    let s = pauli_basis();
    let mut m = [[0.0; 4]; 4];
    for (beta, sb) in s.iter().enumerate() {
        let image = lindblad_apply(g, sb);
        for (alpha, sa) in s.iter().enumerate() {
            let z = (*sa * image).trace() * 0.5;
            debug_assert!(z.im.abs() < 1e-9, "generator must preserve hermiticity");
            m[alpha][beta] = z.re;
        }
    }
    Superoperator(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cp::DecayRates;
    use crate::linalg::CMat;

    #[test]
    fn dephasing_fixes_maximally_mixed_state() {
        let g = LindbladGenerator::dephasing(0.7).unwrap();
        let out = lindblad_apply(&g, &CMat2::identity().scale_re(0.5));
        assert!(out.max_abs() < 1e-15);
    }

    #[test]
    fn dephasing_matches_double_commutator() {
        let d = 0.3;
        let g = LindbladGenerator::dephasing(d).unwrap();
        let s = pauli_basis();
        // [σ₃, [σ₃, σ₁]] = 4σ₁.
        let dc = s[3].commutator(&s[3].commutator(&s[1]));
        assert!(dc.max_diff(&s[1].scale_re(4.0)) < 1e-15);
        assert!(lindblad_apply(&g, &s[1]).max_diff(&s[1].scale_re(-4.0 * d)) < 1e-15);
        assert!(lindblad_apply(&g, &s[2]).max_diff(&s[2].scale_re(-4.0 * d)) < 1e-15);
        assert!(lindblad_apply(&g, &s[3]).max_abs() < 1e-15);
        let rho = CMat2::from_real([[0.7, 0.2], [0.2, 0.3]]);
        let want = dc_apply(d, &rho);
        assert!(lindblad_apply(&g, &rho).max_diff(&want) < 1e-15);
    }

    fn dc_apply(d: f64, rho: &CMat2) -> CMat2 {
        let z = pauli_basis()[3];
        z.commutator(&z.commutator(rho)).scale_re(-d)
    }

    #[test]
    fn trace_and_hermiticity_preserved() {
        let mut c = [[ZERO; 3]; 3];
        c[0][0] = C64::new(0.5, 0.0);
        c[1][1] = C64::new(0.5, 0.0);
        c[0][1] = C64::new(0.0, 0.4);
        c[1][0] = C64::new(0.0, -0.4);
        let h = pauli_basis()[1].scale_re(0.3);
        let g = LindbladGenerator::new(h, c).unwrap();
        let rho = CMat([[C64::new(0.6, 0.0), C64::new(0.1, 0.2)], [C64::new(0.1, -0.2), C64::new(0.4, 0.0)]]);
        let out = lindblad_apply(&g, &rho);
        assert!(out.trace().norm() < 1e-15);
        assert!(out.is_hermitian());
        // Off-diagonal imaginary c produces a translation (amplitude damping).
        let m = generator_matrix(&g);
        assert!(m.0[3][0].abs() > 0.1);
        assert_eq!(m.0[0], [0.0; 4]);
    }

    #[test]
    fn rejects_invalid_generators() {
        let bad_h = CMat2::diag([1.0, 0.0]);
        assert!(LindbladGenerator::new(bad_h, [[ZERO; 3]; 3]).is_err());
        assert!(LindbladGenerator::pauli_diagonal([1.0, -0.5, 1.0]).is_err());
    }

    #[test]
    fn bloch_params_round_trip() {
        let p = BlochParams::new(1.5, -0.4, DecayRates::new(2.0, 3.0, 1.5), 0.0).unwrap();
        let g = LindbladGenerator::from_bloch_params(&p).unwrap();
        let m = generator_matrix(&g);
        let want = [
            [0.0, 0.0, 0.0, 0.0],
            [0.0, -2.0, 0.4, 0.0],
            [0.0, -0.4, -3.0, 1.5],
            [0.0, 0.0, -1.5, -1.5],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert!((m.0[i][j] - want[i][j]).abs() < 1e-15, "({i},{j})");
            }
        }
        let bad = BlochParams::damping(DecayRates::new(6.0, 3.0, 1.0)).unwrap();
        assert!(matches!(
            LindbladGenerator::from_bloch_params(&bad),
            Err(Error::Contract(_))
        ));
        let affine = BlochParams::new(0.0, 0.0, DecayRates::new(1.0, 1.0, 2.0), -1.0).unwrap();
        assert!(matches!(LindbladGenerator::from_bloch_params(&affine), Err(Error::Unsupported(_))));
    }
}

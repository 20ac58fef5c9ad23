//! Complete positivity of Bloch maps: the four Bloch inequalities, the
//! lifetime (triangle) inequalities, the Choi spectrum, and Kraus sets.

use rayon::prelude::*;

use crate::bloch::{is_positive_map, AffineBlochMap, Superoperator};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen4, hermitian_eigenvalues4, kron, pauli_basis, CMat2, CMat4};
use crate::tolerances;

/// Sign patterns `(s₁, s₂, s₃)` of the inequalities `s·Λ ≤ 1`, in order.
pub const BLOCH_SIGNS: [[f64; 3]; 4] = [
    [1.0, 1.0, -1.0],
    [1.0, -1.0, 1.0],
    [-1.0, 1.0, 1.0],
    [-1.0, -1.0, -1.0],
];

/// Human-readable form of each Bloch inequality.
pub const BLOCH_INEQUALITY_TEXT: [&str; 4] = [
    "Λ₁ + Λ₂ − Λ₃ ≤ 1",
    "Λ₁ − Λ₂ + Λ₃ ≤ 1",
    "−Λ₁ + Λ₂ + Λ₃ ≤ 1",
    "−Λ₁ − Λ₂ − Λ₃ ≤ 1",
];

/// Human-readable form of each lifetime inequality, indexed like
/// [`lifetime_violations`].
pub const LIFETIME_INEQUALITY_TEXT: [&str; 3] = [
    "1/T_u ≤ 1/T_v + 1/T_w",
    "1/T_w ≤ 1/T_u + 1/T_v",
    "1/T_v ≤ 1/T_w + 1/T_u",
];

/// Left-hand sides of the four Bloch inequalities.
pub fn bloch_lhs(lambda: [f64; 3]) -> [f64; 4] {
    BLOCH_SIGNS.map(|s| s[0] * lambda[0] + s[1] * lambda[1] + s[2] * lambda[2])
}

/// Verdict of a complete-positivity test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpVerdict {
    pub is_positive: bool,
    pub is_completely_positive: bool,
    /// 1-based index of the first violated Bloch inequality, if any.
    pub violated_inequality: Option<usize>,
    /// Smallest eigenvalue of the trace-normalized Choi matrix.
    pub choi_min_eigenvalue: f64,
}

fn clamp_boundary(x: f64) -> f64 {
    if x.abs() <= tolerances::BOUNDARY {
        0.0
    } else {
        x
    }
}

/// Evaluates the four Bloch inequalities for a unital diagonal map.
///
/// The Choi spectrum of such a map is `¼(1 − lhs_k)`, so the reported
/// minimum eigenvalue is exact rather than computed numerically.
pub fn bloch_inequalities(lambda: [f64; 3]) -> CpVerdict {
    let lhs = bloch_lhs(lambda);
    let weights = lhs.map(|c| clamp_boundary(0.25 * (1.0 - c)));
    let violated = weights
        .iter()
        .position(|&q| q < -tolerances::CHOI_FLOOR)
        .map(|k| k + 1);
    let choi_min = weights.iter().cloned().fold(f64::INFINITY, f64::min);
    let is_positive = lambda.iter().all(|l| l.abs() <= 1.0 + tolerances::EQUALITY);
    CpVerdict {
        is_positive,
        is_completely_positive: violated.is_none(),
        violated_inequality: violated,
        choi_min_eigenvalue: choi_min,
    }
}

/// Like [`bloch_inequalities`] but rejects maps with a translation.
pub fn bloch_inequalities_for(m: &AffineBlochMap) -> Result<CpVerdict> {
    if !m.is_unital() {
        return Err(Error::NotUnital {
            translation: m.translation,
        });
    }
    Ok(bloch_inequalities(m.lambda))
}

/// Decay rates `(1/T_u, 1/T_v, 1/T_w)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRates {
    pub u: f64,
    pub v: f64,
    pub w: f64,
}

impl DecayRates {
    pub fn new(u: f64, v: f64, w: f64) -> Self {
        DecayRates { u, v, w }
    }

    pub fn from_array(r: [f64; 3]) -> Self {
        DecayRates::new(r[0], r[1], r[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.u, self.v, self.w]
    }

    /// `Λ_i = e^{−t/T_i}`.
    pub fn lambda_at(self, t: f64) -> [f64; 3] {
        self.to_array().map(|r| (-r * t).exp())
    }

    pub fn validate(self) -> Result<()> {
        for (name, r) in [("1/T_u", self.u), ("1/T_v", self.v), ("1/T_w", self.w)] {
            if !(r >= 0.0) || !r.is_finite() {
                return Err(Error::Input(format!("decay rate {name} = {r} must be finite and ≥ 0")));
            }
        }
        Ok(())
    }
}

/// Indices (0-based, ordered as [`LIFETIME_INEQUALITY_TEXT`]) of violated
/// lifetime inequalities.
pub fn lifetime_violations(rates: DecayRates) -> Result<Vec<usize>> {
    rates.validate()?;
    let DecayRates { u, v, w } = rates;
    let scale = (u + v + w).max(1.0);
    let tol = tolerances::EQUALITY * scale;
    let checks = [u <= v + w + tol, w <= u + v + tol, v <= w + u + tol];
    Ok((0..3).filter(|&k| !checks[k]).collect())
}

/// True iff the three lifetime inequalities hold; then the exponential map
/// `Λ_i = e^{−t/T_i}` is completely positive at every `t ≥ 0`.
pub fn lifetime_inequalities(rates: DecayRates) -> Result<bool> {
    lifetime_violations(rates).map(|v| v.is_empty())
}

/// Trace-one Choi matrix `(I ⊗ Φ)(|Φ⁺⟩⟨Φ⁺|)` with `|Φ⁺⟩ = (|00⟩ + |11⟩)/√2`.
pub fn choi_matrix(s: &Superoperator) -> CMat4 {
    // |Φ⁺⟩⟨Φ⁺| = ¼ Σ_α c_α σ_α ⊗ σ_α with c = (1, 1, −1, 1).
    let signs = [1.0, 1.0, -1.0, 1.0];
    let basis = pauli_basis();
    let mut out = CMat4::zeros();
    for (alpha, sigma) in basis.iter().enumerate() {
        let image = s.apply(sigma);
        out = out + kron(sigma, &image).scale_re(0.25 * signs[alpha]);
    }
    out
}

/// Choi test for any affine map: CP iff the smallest Choi eigenvalue is
/// at least `−1e-10`.
pub fn choi_test(m: &AffineBlochMap) -> CpVerdict {
    let choi = choi_matrix(&m.superoperator());
    let eig = hermitian_eigenvalues4(&choi).expect("Choi matrix of a real superoperator is Hermitian");
    let choi_min = clamp_boundary(eig[0]);
    let is_cp = choi_min >= -tolerances::CHOI_FLOOR;
    let violated = if m.is_unital() {
        bloch_inequalities(m.lambda).violated_inequality
    } else {
        None
    };
    CpVerdict {
        is_positive: is_positive_map(m).is_positive,
        is_completely_positive: is_cp,
        violated_inequality: if is_cp { None } else { violated },
        choi_min_eigenvalue: choi_min,
    }
}

/// Kraus operators with `Φ(ρ) = Σ K ρ K†`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    pub operators: Vec<CMat2>,
}

impl KrausSet {
    pub fn new(operators: Vec<CMat2>) -> Result<Self> {
        if operators.is_empty() || operators.len() > 4 {
            return Err(Error::Input(format!(
                "a qubit Kraus set has 1 to 4 operators, got {}",
                operators.len()
            )));
        }
        Ok(KrausSet { operators })
    }

    pub fn apply(&self, rho: &CMat2) -> CMat2 {
        self.operators
            .iter()
            .fold(CMat2::zeros(), |acc, k| acc + *k * *rho * k.adjoint())
    }

    /// `max |Σ K†K − I|`.
    pub fn completeness_defect(&self) -> f64 {
        self.operators
            .iter()
            .fold(CMat2::zeros(), |acc, k| acc + k.adjoint() * *k)
            .max_diff(&CMat2::identity())
    }

    /// The superoperator implemented by this Kraus set.
    pub fn superoperator(&self) -> Superoperator {
        let basis = pauli_basis();
        let mut m = [[0.0; 4]; 4];
        for (beta, sb) in basis.iter().enumerate() {
            let image = self.apply(sb);
            for (alpha, sa) in basis.iter().enumerate() {
                m[alpha][beta] = 0.5 * (*sa * image).trace().re;
            }
        }
        Superoperator(m)
    }
}

/// A Kraus operator `√weight · σ_α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliKraus {
    pub pauli: usize,
    pub weight: f64,
}

/// Pauli-diagonal Kraus weights `¼(1 ± Λ₁ ± Λ₂ ± Λ₃)` for `I, σ₁, σ₂, σ₃`.
pub fn unital_kraus_weights(lambda: [f64; 3]) -> [f64; 4] {
    let [l1, l2, l3] = lambda;
    [
        0.25 * (1.0 + l1 + l2 + l3),
        0.25 * (1.0 + l1 - l2 - l3),
        0.25 * (1.0 - l1 + l2 - l3),
        0.25 * (1.0 - l1 - l2 + l3),
    ]
}

/// Kraus operators of a unital diagonal map, as Pauli/weight pairs with the
/// zero-weight terms dropped.
pub fn unital_kraus_terms(lambda: [f64; 3]) -> Result<Vec<PauliKraus>> {
    let weights = unital_kraus_weights(lambda);
    // Radicand 4q_k; the matching inequality index is 4 − k.
    for (k, &q) in weights.iter().enumerate() {
        if 4.0 * q < -tolerances::BOUNDARY {
            let inequality = 4 - k;
            return Err(Error::NotCompletelyPositive {
                inequality,
                lhs: bloch_lhs(lambda)[inequality - 1],
            });
        }
    }
    Ok(weights
        .iter()
        .enumerate()
        .map(|(pauli, &q)| PauliKraus {
            pauli,
            weight: if 4.0 * q <= tolerances::BOUNDARY { 0.0 } else { q },
        })
        .filter(|t| t.weight > 0.0)
        .collect())
}

/// `K_α = ½ √(1 ± Λ₁ ± Λ₂ ± Λ₃) σ_α`.
pub fn unital_kraus(lambda: [f64; 3]) -> Result<KrausSet> {
    let basis = pauli_basis();
    let ops = unital_kraus_terms(lambda)?
        .into_iter()
        .map(|t| basis[t.pauli].scale_re(t.weight.sqrt()))
        .collect();
    KrausSet::new(ops)
}

/// Kraus set of any CP affine map from the eigen-decomposition of its Choi
/// matrix: `K_k|i⟩ = √(2μ_k) (v_k)_{2i+·}`. Eigenvalues below `1e-12` are
/// dropped.
pub fn kraus_from_choi(m: &AffineBlochMap) -> Result<KrausSet> {
    let choi = choi_matrix(&m.superoperator());
    let eig = hermitian_eigen4(&choi)?;
    if eig.values[0] < -tolerances::CHOI_FLOOR {
        return Err(Error::NotCompletelyPositive {
            inequality: if m.is_unital() {
                bloch_inequalities(m.lambda).violated_inequality.unwrap_or(0)
            } else {
                0
            },
            lhs: eig.values[0],
        });
    }
    let mut ops = Vec::new();
    for k in (0..4).rev() {
        let mu = eig.values[k];
        if mu <= tolerances::BOUNDARY {
            continue;
        }
        let v = eig.vector(k);
        let s = (2.0 * mu).sqrt();
        let mut op = CMat2::zeros();
        for i in 0..2 {
            for a in 0..2 {
                op.0[a][i] = v[2 * i + a] * s;
            }
        }
        ops.push(op);
    }
    KrausSet::new(ops)
}

/// Result of [`verify_kraus`].
#[derive(Debug, Clone, PartialEq)]
pub struct KrausCheck {
    pub completeness_defect: f64,
    pub action_defect: f64,
    pub diagnostic: Option<String>,
}

impl KrausCheck {
    pub fn passed(&self) -> bool {
        self.diagnostic.is_none()
    }
}

/// Checks completeness and that the Kraus set reproduces `m` on the Pauli
/// basis.
pub fn verify_kraus(k: &KrausSet, m: &AffineBlochMap) -> KrausCheck {
    let completeness_defect = k.completeness_defect();
    let target = m.superoperator();
    let basis = pauli_basis();
    let mut action_defect: f64 = 0.0;
    let mut worst = 0;
    for (alpha, s) in basis.iter().enumerate() {
        let d = k.apply(s).max_diff(&target.apply(s));
        if d > action_defect {
            action_defect = d;
            worst = alpha;
        }
    }
    let diagnostic = if completeness_defect > tolerances::KRAUS {
        Some(format!("completeness fails: max |Σ K†K − I| = {completeness_defect:e}"))
    } else if action_defect > tolerances::KRAUS {
        Some(format!("action mismatch on σ_{worst}: max deviation {action_defect:e}"))
    } else {
        None
    };
    KrausCheck {
        completeness_defect,
        action_defect,
        diagnostic,
    }
}

/// One sample of the `[−1, 1]³` cube.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetrahedronPoint {
    pub lambda: [f64; 3],
    pub verdict: CpVerdict,
}

/// Classifies an `n³` grid over `[−1, 1]³`; the CP points fill the
/// tetrahedron spanned by (1,1,1), (1,−1,−1), (−1,1,−1), (−1,−1,1).
pub fn tetrahedron_sample(n: usize) -> Result<Vec<TetrahedronPoint>> {
    if n < 2 {
        return Err(Error::Input(format!("grid resolution must be ≥ 2, got {n}")));
    }
    let coord = |i: usize| -1.0 + 2.0 * i as f64 / (n - 1) as f64;
    Ok((0..n * n * n)
        .into_par_iter()
        .map(|idx| {
            let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
            let lambda = [coord(i), coord(j), coord(k)];
            TetrahedronPoint {
                lambda,
                verdict: bloch_inequalities(lambda),
            }
        })
        .collect())
}

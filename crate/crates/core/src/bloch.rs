//! Bloch vectors, qubit density operators and affine Bloch maps
//! `b ↦ Λ b + t` with a diagonal damping matrix.

use crate::error::{Error, Result};
use crate::linalg::{from_pauli_coefficients, pauli_coefficients, CMat2, C64};
use crate::tolerances;

/// Bloch coordinates `(u, v, w)` of a qubit state.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlochVector {
    pub u: f64,
    pub v: f64,
    pub w: f64,
}

impl BlochVector {
    pub const ORIGIN: BlochVector = BlochVector::new(0.0, 0.0, 0.0);

    pub const fn new(u: f64, v: f64, w: f64) -> Self {
        BlochVector { u, v, w }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        BlochVector::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.u, self.v, self.w]
    }

    pub fn norm_sqr(self) -> f64 {
        self.u * self.u + self.v * self.v + self.w * self.w
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_physical(self) -> bool {
        self.norm() <= 1.0 + tolerances::EQUALITY
    }

    /// `B = b·σ = [[w, u − iv], [u + iv, −w]]`.
    pub fn pauli_matrix(self) -> CMat2 {
        from_pauli_coefficients(&[
            C64::new(0.0, 0.0),
            C64::new(2.0 * self.u, 0.0),
            C64::new(2.0 * self.v, 0.0),
            C64::new(2.0 * self.w, 0.0),
        ])
    }
}

impl std::ops::Index<usize> for BlochVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.u,
            1 => &self.v,
            2 => &self.w,
            _ => panic!("Bloch component {i} out of range"),
        }
    }
}

/// Hermitian, unit-trace, positive semidefinite 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityOperator(CMat2);

impl DensityOperator {
    /// Validates hermiticity, unit trace and positivity.
    pub fn new(m: CMat2) -> Result<Self> {
        if !m.is_hermitian() {
            return Err(Error::Contract("density operator must be Hermitian".into()));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > tolerances::EQUALITY || tr.im.abs() > tolerances::EQUALITY {
            return Err(Error::Contract(format!("density operator trace {tr} ≠ 1")));
        }
        let rho = DensityOperator(m);
        let [lo, _] = rho.eigenvalues();
        if lo < -tolerances::EQUALITY {
            return Err(Error::Contract(format!(
                "density operator has negative eigenvalue {lo}"
            )));
        }
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(m: CMat2) -> Self {
        DensityOperator(m)
    }

    pub fn matrix(&self) -> &CMat2 {
        &self.0
    }

    /// Ascending eigenvalues `(1 ∓ |b|)/2`.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let a = self.0 .0[0][0].re;
        let d = self.0 .0[1][1].re;
        let off = self.0 .0[0][1].norm();
        let mean = 0.5 * (a + d);
        let rad = (0.25 * (a - d) * (a - d) + off * off).sqrt();
        [mean - rad, mean + rad]
    }
}

/// `ρ = ½(I + b·σ)`.
pub fn to_density(b: BlochVector) -> Result<DensityOperator> {
    if !b.is_physical() {
        return Err(Error::UnphysicalState { norm: b.norm() });
    }
    let rho = (CMat2::identity() + b.pauli_matrix()).scale_re(0.5);
    Ok(DensityOperator(rho))
}

/// Reads `(u, v, w) = (tr ρσ_x, tr ρσ_y, tr ρσ_z)`.
pub fn from_density(rho: &DensityOperator) -> Result<BlochVector> {
    bloch_components(rho.matrix())
}

/// Bloch components of any unit-trace 2×2 matrix.
pub(crate) fn bloch_components(m: &CMat2) -> Result<BlochVector> {
    let x = pauli_coefficients(m);
    if (x[0].re - 1.0).abs() > tolerances::EQUALITY {
        return Err(Error::Contract(format!("trace {} ≠ 1", x[0])));
    }
    Ok(BlochVector::new(x[1].re, x[2].re, x[3].re))
}

/// Real 4×4 matrix acting on Pauli coefficients `(x₀, x₁, x₂, x₃)`;
/// column `β` holds the coefficients of `Φ(σ_β)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Superoperator(pub [[f64; 4]; 4]);

impl Superoperator {
    pub fn identity() -> Self {
        let mut m = [[0.0; 4]; 4];
        (0..4).for_each(|i| m[i][i] = 1.0);
        Superoperator(m)
    }

    pub fn compose(&self, inner: &Superoperator) -> Superoperator {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, out) in row.iter_mut().enumerate() {
                *out = (0..4).map(|k| self.0[i][k] * inner.0[k][j]).sum();
            }
        }
        Superoperator(m)
    }

    pub fn apply_coefficients(&self, x: &[C64; 4]) -> [C64; 4] {
        let mut out = [C64::new(0.0, 0.0); 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|k| x[k] * self.0[i][k]).sum();
        }
        out
    }

    /// Action on an arbitrary 2×2 operator.
    pub fn apply(&self, a: &CMat2) -> CMat2 {
        from_pauli_coefficients(&self.apply_coefficients(&pauli_coefficients(a)))
    }

    pub fn max_diff(&self, other: &Superoperator) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                d = d.max((self.0[i][j] - other.0[i][j]).abs());
            }
        }
        d
    }
}

/// Affine Bloch map `b ↦ Λ b + t` with diagonal damping `Λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineBlochMap {
    pub lambda: [f64; 3],
    pub translation: [f64; 3],
}

impl AffineBlochMap {
    pub const IDENTITY: AffineBlochMap = AffineBlochMap {
        lambda: [1.0, 1.0, 1.0],
        translation: [0.0, 0.0, 0.0],
    };

    pub fn new(lambda: [f64; 3], translation: [f64; 3]) -> Self {
        AffineBlochMap { lambda, translation }
    }

    pub fn unital(lambda: [f64; 3]) -> Self {
        AffineBlochMap::new(lambda, [0.0; 3])
    }

    /// Transpose map `ρ ↦ ρᵀ`, which flips the sign of `v`.
    pub fn transpose() -> Self {
        AffineBlochMap::unital([1.0, -1.0, 1.0])
    }

    pub fn is_unital(&self) -> bool {
        self.translation.iter().all(|t| t.abs() <= tolerances::EQUALITY)
    }

    /// Recovers the map from a 4×4 matrix with layout `[[1, 0], [t, Λ]]`.
    pub fn from_superoperator(m: &Superoperator) -> Result<Self> {
        let row0 = m.0[0];
        if (row0[0] - 1.0).abs() > tolerances::EQUALITY
            || row0[1..].iter().any(|x| x.abs() > tolerances::EQUALITY)
        {
            return Err(Error::Input(format!(
                "first row must be (1, 0, 0, 0) for a trace-preserving map, got {row0:?}"
            )));
        }
        for i in 1..4 {
            for j in 1..4 {
                if i != j && m.0[i][j].abs() > tolerances::EQUALITY {
                    return Err(Error::Unsupported(format!(
                        "non-diagonal damping entry ({i}, {j}) = {}",
                        m.0[i][j]
                    )));
                }
            }
        }
        Ok(AffineBlochMap::new(
            [m.0[1][1], m.0[2][2], m.0[3][3]],
            [m.0[1][0], m.0[2][0], m.0[3][0]],
        ))
    }

    pub fn superoperator(&self) -> Superoperator {
        superoperator_matrix(self)
    }
}

/// Componentwise `b'_i = Λ_i b_i + t_i`.
pub fn apply_map(m: &AffineBlochMap, b: BlochVector) -> BlochVector {
    let b = b.to_array();
    BlochVector::from_array([0, 1, 2].map(|i| m.lambda[i] * b[i] + m.translation[i]))
}

/// The matrix `𝒯 = [[1, 0], [t, Λ]]` acting on `(1, u, v, w)`.
pub fn superoperator_matrix(m: &AffineBlochMap) -> Superoperator {
    let mut s = Superoperator::identity();
    for i in 0..3 {
        s.0[i + 1][0] = m.translation[i];
        s.0[i + 1][i + 1] = m.lambda[i];
    }
    s
}

/// Image of the Bloch sphere: `Σ ((x_i − t_i)/Λ_i)² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipsoid {
    pub center: [f64; 3],
    pub semi_axes: [f64; 3],
    /// Axes with `Λ_i = 0` collapse to zero thickness.
    pub flattened: [bool; 3],
}

impl Ellipsoid {
    /// Left-hand side of the ellipsoid equation over non-flattened axes;
    /// flattened axes must sit exactly at the center.
    pub fn level(&self, p: BlochVector) -> f64 {
        let p = p.to_array();
        (0..3)
            .filter(|&i| !self.flattened[i])
            .map(|i| ((p[i] - self.center[i]) / self.semi_axes[i]).powi(2))
            .sum()
    }
}

pub fn image_ellipsoid(m: &AffineBlochMap) -> Ellipsoid {
    let flattened = m.lambda.map(|l| l.abs() <= tolerances::EQUALITY);
    Ellipsoid {
        center: m.translation,
        semi_axes: m.lambda.map(f64::abs),
        flattened,
    }
}

/// Outcome of the positivity decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositivityReport {
    pub is_positive: bool,
    /// Largest `‖Λb + t‖` over unit `b`.
    pub max_image_norm: f64,
    /// Unit vector achieving the maximum; a violating input when not positive.
    pub witness: BlochVector,
}

/// Decides whether every unit Bloch vector is mapped into the closed unit
/// ball, by maximizing `‖Λb + t‖²` over the sphere.
pub fn is_positive_map(m: &AffineBlochMap) -> PositivityReport {
    let (witness, max_sq) = maximize_image_norm(m);
    let max_image_norm = max_sq.max(0.0).sqrt();
    PositivityReport {
        is_positive: max_image_norm <= 1.0 + tolerances::EQUALITY,
        max_image_norm,
        witness,
    }
}

/// Maximizes `f(b) = Σ (Λ_i b_i + t_i)²` on the unit sphere.
///
/// Stationary points satisfy `b_i = Λ_i t_i / (μ − Λ_i²)`; the global maximum
/// has `μ ≥ max Λ_i²`, found from the secular equation `Σ b_i² = 1` by
/// bisection. When that equation has no root above `max Λ_i²` the remaining
/// weight goes onto the dominant axis.
fn maximize_image_norm(m: &AffineBlochMap) -> (BlochVector, f64) {
    let l = m.lambda;
    let t = m.translation;
    let l2 = l.map(|x| x * x);
    let top = l2.iter().cloned().fold(f64::MIN, f64::max);
    let eval = |b: [f64; 3]| -> f64 { (0..3).map(|i| (l[i] * b[i] + t[i]).powi(2)).sum() };

    let g = [0, 1, 2].map(|i| l[i] * t[i]);
    let secular = |mu: f64| -> f64 {
        (0..3)
            .filter(|&i| g[i] != 0.0)
            .map(|i| (g[i] / (mu - l2[i])).powi(2))
            .sum::<f64>()
    };
    let dominant: Vec<usize> = (0..3).filter(|&i| l2[i] >= top - 1e-14).collect();
    let g_dom = dominant.iter().map(|&i| g[i].abs()).fold(0.0, f64::max);
    let gnorm = g.iter().map(|x| x * x).sum::<f64>().sqrt();

    let mut candidates: Vec<[f64; 3]> = Vec::new();
    if gnorm == 0.0 {
        // Pure contraction: any dominant axis works.
        let mut b = [0.0; 3];
        b[dominant[0]] = 1.0;
        candidates.push(b);
    } else if g_dom > 0.0 || secular(top) >= 1.0 {
        // secular(μ) decreases monotonically to 0 on (max Λ², ∞).
        let mut lo = top;
        let mut hi = top + gnorm + 1.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if secular(mid) > 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mu = 0.5 * (lo + hi);
        let mut b = [0, 1, 2].map(|i| if g[i] == 0.0 { 0.0 } else { g[i] / (mu - l2[i]) });
        normalize(&mut b);
        candidates.push(b);
    } else {
        // Hard case: μ = max Λ², leftover weight on the dominant axis.
        let mut b = [0.0; 3];
        for i in 0..3 {
            if !dominant.contains(&i) && g[i] != 0.0 {
                b[i] = g[i] / (top - l2[i]);
            }
        }
        let rest = (1.0 - b.iter().map(|x| x * x).sum::<f64>()).max(0.0).sqrt();
        for sign in [1.0, -1.0] {
            let mut c = b;
            c[dominant[0]] = sign * rest;
            normalize(&mut c);
            candidates.push(c);
        }
    }
    // Axis-aligned extremes guard the degenerate branches.
    for i in 0..3 {
        for sign in [1.0, -1.0] {
            let mut b = [0.0; 3];
            b[i] = sign;
            candidates.push(b);
        }
    }
    let (best, val) = candidates
        .into_iter()
        .map(|b| (b, eval(b)))
        .fold(([0.0, 0.0, 1.0], f64::MIN), |acc, c| if c.1 > acc.1 { c } else { acc });
    (BlochVector::from_array(best), val)
}

fn normalize(b: &mut [f64; 3]) {
    let n = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > 0.0 {
        b.iter_mut().for_each(|x| *x /= n);
    }
}

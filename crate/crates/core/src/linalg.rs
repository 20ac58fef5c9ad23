//! Fixed-size complex matrices (2×2 and 4×4), Pauli matrices, Kronecker
//! products and a cyclic Jacobi solver for Hermitian 4×4 spectra.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Dense `N×N` complex matrix stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct CMat<const N: usize>(pub [[C64; N]; N]);

pub type CMat2 = CMat<2>;
pub type CMat4 = CMat<4>;

impl<const N: usize> CMat<N> {
    pub fn zeros() -> Self {
        CMat([[ZERO; N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn from_real(rows: [[f64; N]; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = C64::new(rows[i][j], 0.0);
            }
        }
        m
    }

    pub fn diag(d: [f64; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = C64::new(d[i], 0.0);
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = self.0[j][i];
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|z| *z *= s);
        m
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from another matrix.
    pub fn max_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.max_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_defect() < tolerances::HERMITICITY
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    /// Inverse by Gauss–Jordan elimination with partial pivoting; `None`
    /// when a pivot falls below `1e-14` times the largest entry.
    pub fn try_inverse(&self) -> Option<Self> {
        let mut a = *self;
        let mut inv = Self::identity();
        let tol = 1e-14 * a.max_abs().max(f64::MIN_POSITIVE);
        for col in 0..N {
            let piv = (col..N).max_by(|&x, &y| a.0[x][col].norm().total_cmp(&a.0[y][col].norm()))?;
            if a.0[piv][col].norm() <= tol {
                return None;
            }
            a.0.swap(col, piv);
            inv.0.swap(col, piv);
            let d = a.0[col][col];
            for j in 0..N {
                a.0[col][j] /= d;
                inv.0[col][j] /= d;
            }
            for r in 0..N {
                if r == col {
                    continue;
                }
                let f = a.0[r][col];
                if f == ZERO {
                    continue;
                }
                for j in 0..N {
                    let (ac, ic) = (a.0[col][j], inv.0[col][j]);
                    a.0[r][j] -= f * ac;
                    inv.0[r][j] -= f * ic;
                }
            }
        }
        Some(inv)
    }

    pub fn mul_vec(&self, v: &[C64; N]) -> [C64; N] {
        let mut out = [ZERO; N];
        for i in 0..N {
            out[i] = (0..N).map(|j| self.0[i][j] * v[j]).sum();
        }
        out
    }
}

impl<const N: usize> Default for CMat<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> Index<(usize, usize)> for CMat<N> {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for CMat<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl<const N: usize> Add for CMat<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for i in 0..N {
            for j in 0..N {
                self.0[i][j] += rhs.0[i][j];
            }
        }
        self
    }
}

impl<const N: usize> Sub for CMat<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for i in 0..N {
            for j in 0..N {
                self.0[i][j] -= rhs.0[i][j];
            }
        }
        self
    }
}

impl<const N: usize> Neg for CMat<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale_re(-1.0)
    }
}

impl<const N: usize> Mul for CMat<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..N {
                    m.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        m
    }
}

impl<const N: usize> Mul<CMat<N>> for f64 {
    type Output = CMat<N>;
    fn mul(self, rhs: CMat<N>) -> CMat<N> {
        rhs.scale_re(self)
    }
}

impl<const N: usize> Mul<CMat<N>> for C64 {
    type Output = CMat<N>;
    fn mul(self, rhs: CMat<N>) -> CMat<N> {
        rhs.scale(self)
    }
}

impl<const N: usize> fmt::Debug for CMat<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for row in &self.0 {
            write!(f, "  ")?;
            for z in row {
                write!(f, "({:+.6e}{:+.6e}i) ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Label of a Pauli matrix `σ_α = {I, σ_x, σ_y, σ_z}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliIndex(u8);

impl PauliIndex {
    pub const I: PauliIndex = PauliIndex(0);
    pub const X: PauliIndex = PauliIndex(1);
    pub const Y: PauliIndex = PauliIndex(2);
    pub const Z: PauliIndex = PauliIndex(3);
    pub const ALL: [PauliIndex; 4] = [Self::I, Self::X, Self::Y, Self::Z];

    pub fn new(alpha: usize) -> Result<Self> {
        if alpha < 4 {
            Ok(PauliIndex(alpha as u8))
        } else {
            Err(Error::Input(format!("Pauli index {alpha} outside 0..=3")))
        }
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn matrix(self) -> CMat2 {
        match self.0 {
            0 => CMat2::identity(),
            1 => CMat([[ZERO, ONE], [ONE, ZERO]]),
            2 => CMat([[ZERO, -I], [I, ZERO]]),
            _ => CMat([[ONE, ZERO], [ZERO, -ONE]]),
        }
    }
}

/// Pauli matrix by integer label; `σ₀ = I`.
pub fn pauli(alpha: usize) -> Result<CMat2> {
    PauliIndex::new(alpha).map(PauliIndex::matrix)
}

/// The four Pauli matrices in order `I, σ_x, σ_y, σ_z`.
pub fn pauli_basis() -> [CMat2; 4] {
    PauliIndex::ALL.map(PauliIndex::matrix)
}

/// Coefficients `x_α = tr(σ_α A)`, so that `A = ½ Σ_α x_α σ_α`.
pub fn pauli_coefficients(a: &CMat2) -> [C64; 4] {
    pauli_basis().map(|s| (s * *a).trace())
}

/// Inverse of [`pauli_coefficients`].
pub fn from_pauli_coefficients(x: &[C64; 4]) -> CMat2 {
    pauli_basis()
        .iter()
        .zip(x)
        .fold(CMat2::zeros(), |acc, (s, &c)| acc + s.scale(c * 0.5))
}

/// Kronecker product `A ⊗ B` with index layout `(2i + k, 2j + l) = A_ij B_kl`.
pub fn kron(a: &CMat2, b: &CMat2) -> CMat4 {
    let mut m = CMat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m.0[2 * i + k][2 * j + l] = a.0[i][j] * b.0[k][l];
                }
            }
        }
    }
    m
}

/// Eigen-decomposition of a Hermitian 4×4 matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen4 {
    /// Ascending eigenvalues.
    pub values: [f64; 4],
    /// Column `k` is the unit eigenvector for `values[k]`.
    pub vectors: CMat4,
}

impl HermitianEigen4 {
    pub fn vector(&self, k: usize) -> [C64; 4] {
        [0, 1, 2, 3].map(|i| self.vectors.0[i][k])
    }
}

const JACOBI_MAX_SWEEPS: usize = 64;

/// Spectrum and eigenvectors of a Hermitian 4×4 matrix by cyclic complex
/// Jacobi rotations.
pub fn hermitian_eigen4(m: &CMat4) -> Result<HermitianEigen4> {
    let defect = m.hermiticity_defect();
    if !(defect < tolerances::HERMITICITY) {
        return Err(Error::Contract(format!(
            "matrix is not Hermitian (max |M - M†| = {defect:e})"
        )));
    }
    // Symmetrize so rounding in the input cannot leak into the rotations.
    let mut a = (*m + m.adjoint()).scale_re(0.5);
    let mut v = CMat4::identity();
    let scale = a.max_abs().max(f64::MIN_POSITIVE);

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..4)
            .flat_map(|p| ((p + 1)..4).map(move |q| (p, q)))
            .map(|(p, q)| a.0[p][q].norm_sqr())
            .sum();
        if off.sqrt() <= f64::EPSILON * 1e-2 * scale {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                let apq = a.0[p][q];
                let g = apq.norm();
                if g <= f64::EPSILON * 1e-3 * scale {
                    continue;
                }
                let phase = apq / g;
                let app = a.0[p][p].re;
                let aqq = a.0[q][q].re;
                let theta = (aqq - app) / (2.0 * g);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // J = diag(1, e^{-iφ}) on (p,q) followed by the real rotation.
                let mut j = CMat4::identity();
                j.0[p][p] = C64::new(c, 0.0);
                j.0[p][q] = C64::new(s, 0.0);
                j.0[q][p] = -phase.conj() * s;
                j.0[q][q] = phase.conj() * c;
                a = j.adjoint() * a * j;
                a.0[p][q] = ZERO;
                a.0[q][p] = ZERO;
                v = v * j;
            }
        }
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&x, &y| a.0[x][x].re.total_cmp(&a.0[y][y].re));
    let values = order.map(|k| a.0[k][k].re);
    let mut vectors = CMat4::zeros();
    for (col, &k) in order.iter().enumerate() {
        for i in 0..4 {
            vectors.0[i][col] = v.0[i][k];
        }
    }
    Ok(HermitianEigen4 { values, vectors })
}

/// Ascending real eigenvalues of a Hermitian 4×4 matrix.
pub fn hermitian_eigenvalues4(m: &CMat4) -> Result<[f64; 4]> {
    hermitian_eigen4(m).map(|e| e.values)
}

/// Largest residual `‖M v_k − λ_k v_k‖₂` over the decomposition.
pub fn eigen_residual(m: &CMat4, eig: &HermitianEigen4) -> f64 {
    (0..4)
        .map(|k| {
            let vk = eig.vector(k);
            let mv = m.mul_vec(&vk);
            mv.iter()
                .zip(&vk)
                .map(|(a, b)| (a - b * eig.values[k]).norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

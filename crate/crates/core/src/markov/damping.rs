use nalgebra::Matrix4;

use crate::bloch::{DensityOperator, Superoperator};
use crate::error::{require, Error, Result};
use crate::linalg::{pauli_basis, CMat, CMat2, CMat4, C64, ZERO};
use crate::tolerances;

use super::{generator_matrix, LindbladGenerator};

/// Left/right eigenoperators of a generator, dual-normalized so that
/// `tr(L_i R_j) = δ_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct DampingBasis {
    eigenvalues: [C64; 4],
    right: [CMat2; 4],
    left: [CMat2; 4],
    /// Columns are right eigenvectors in Pauli-coefficient space.
    vectors: CMat4,
    /// Rows are the dual left eigenvectors, `W = V⁻¹`.
    duals: CMat4,
    generator: Superoperator,
}

impl DampingBasis {
    pub fn eigenvalues(&self) -> &[C64; 4] {
        &self.eigenvalues
    }

    /// Real parts of the eigenvalues; exact for the damping channels,
    /// where the spectrum is real.
    pub fn eigenvalues_re(&self) -> [f64; 4] {
        self.eigenvalues.map(|z| z.re)
    }

    pub fn right(&self) -> &[CMat2; 4] {
        &self.right
    }

    pub fn left(&self) -> &[CMat2; 4] {
        &self.left
    }

    /// Pauli-basis matrix of the generator the basis was built from.
    pub fn generator(&self) -> &Superoperator {
        &self.generator
    }

    /// Largest `|tr(L_i R_j) − δ_ij|`.
    pub fn duality_defect(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                d = d.max(((self.left[i] * self.right[j]).trace() - want).norm());
            }
        }
        d
    }

    /// Largest `‖𝓛R_i − λ_i R_i‖` over the basis, evaluated with the
    /// Pauli-basis generator matrix.
    pub fn eigen_residual(&self) -> f64 {
        let g = &self.generator;
        let mut d: f64 = 0.0;
        for i in 0..4 {
            let col = [0, 1, 2, 3].map(|a| self.vectors.0[a][i]);
            for (a, row) in g.0.iter().enumerate() {
                let gv: C64 = (0..4).map(|b| col[b] * row[b]).sum();
                d = d.max((gv - self.eigenvalues[i] * col[a]).norm());
            }
        }
        d
    }

    /// `e^{𝓛t}` as a Pauli-coefficient matrix, `V diag(e^{λt}) V⁻¹`.
    pub fn transfer_matrix(&self, t: f64) -> Superoperator {
        let mut m = [[0.0; 4]; 4];
        for (a, row) in m.iter_mut().enumerate() {
            for (b, out) in row.iter_mut().enumerate() {
                let z: C64 = (0..4)
                    .map(|i| self.vectors.0[a][i] * (self.eigenvalues[i] * t).exp() * self.duals.0[i][b])
                    .sum();
                *out = z.re;
            }
        }
        Superoperator(m)
    }
}

/// Diagonalizes the generator in the Pauli basis. Degenerate eigenspaces
/// are spanned by Pauli-aligned vectors whenever they contain them.
pub fn damping_basis(g: &LindbladGenerator) -> Result<DampingBasis> {
    let gm = generator_matrix(g);
    let scale = 1.0 + gm.0.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()));

    let real = Matrix4::from_fn(|i, j| gm.0[i][j]);
    let raw = real.complex_eigenvalues();

    // Group numerically split copies of a repeated eigenvalue.
    let cluster_tol = 1e-6 * scale;
    let mut clusters: Vec<(C64, Vec<C64>)> = Vec::new();
    for z in raw.iter().copied() {
        match clusters.iter_mut().find(|(c, _)| (*c - z).norm() < cluster_tol) {
            Some((c, members)) => {
                members.push(z);
                *c = members.iter().sum::<C64>() / members.len() as f64;
            }
            None => clusters.push((z, vec![z])),
        }
    }

    let mut pairs: Vec<(C64, [C64; 4])> = Vec::with_capacity(4);
    for (lambda, members) in &clusters {
        let mut shifted = CMat::<4>::from_real(gm.0);
        for k in 0..4 {
            shifted.0[k][k] -= *lambda;
        }
        let null = nullspace(&shifted, 1e-7 * scale);
        if null.len() < members.len() {
            return Err(Error::DefectiveGenerator {
                eigenvalue: format!("{:.6}{:+.6}i", lambda.re, lambda.im),
                algebraic: members.len(),
                geometric: null.len(),
            });
        }
        for v in null.into_iter().take(members.len()) {
            pairs.push((*lambda, normalize(v)));
        }
    }

    pairs.sort_by(|(la, va), (lb, vb)| {
        dominant(va)
            .cmp(&dominant(vb))
            .then(la.re.total_cmp(&lb.re))
            .then(la.im.total_cmp(&lb.im))
    });

    let mut vectors = CMat4::zeros();
    let mut eigenvalues = [ZERO; 4];
    for (i, (lambda, v)) in pairs.iter().enumerate() {
        eigenvalues[i] = *lambda;
        for a in 0..4 {
            vectors.0[a][i] = v[a];
        }
    }
    let duals = vectors.try_inverse().ok_or_else(|| Error::DefectiveGenerator {
        eigenvalue: "(eigenvector matrix singular)".into(),
        algebraic: 4,
        geometric: 3,
    })?;

    let s = pauli_basis();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut right = [CMat2::zeros(); 4];
    let mut left = [CMat2::zeros(); 4];
    for i in 0..4 {
        for a in 0..4 {
            right[i] = right[i] + s[a].scale(vectors.0[a][i] * h);
            left[i] = left[i] + s[a].scale(duals.0[i][a] * h);
        }
    }

    Ok(DampingBasis {
        eigenvalues,
        right,
        left,
        vectors,
        duals,
        generator: gm,
    })
}

/// Basis of `{x : A x = 0}` from the reduced row echelon form; each free
/// column contributes one vector with a unit entry at that column.
fn nullspace(a: &CMat4, tol: f64) -> Vec<[C64; 4]> {
    let mut m = *a;
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..4 {
        if row == 4 {
            break;
        }
        let piv = (row..4)
            .max_by(|&x, &y| m.0[x][col].norm().total_cmp(&m.0[y][col].norm()))
            .expect("non-empty range");
        if m.0[piv][col].norm() <= tol {
            for r in row..4 {
                m.0[r][col] = ZERO;
            }
            continue;
        }
        m.0.swap(row, piv);
        let d = m.0[row][col];
        for j in 0..4 {
            m.0[row][j] /= d;
        }
        for r in 0..4 {
            if r != row {
                let f = m.0[r][col];
                for j in 0..4 {
                    let x = m.0[row][j];
                    m.0[r][j] -= f * x;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (0..4)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = [ZERO; 4];
            v[free] = C64::new(1.0, 0.0);
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m.0[r][free];
            }
            v
        })
        .collect()
}

/// Unit norm with the largest component real and positive.
fn normalize(v: [C64; 4]) -> [C64; 4] {
    let k = dominant(&v);
    let phase = v[k].conj() / v[k].norm();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.map(|z| z * phase / norm)
}

fn dominant(v: &[C64; 4]) -> usize {
    (0..4)
        .max_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm()).then(b.cmp(&a)))
        .expect("four components")
}

/// `ρ(t) = Σ_i tr(L_i ρ₀) e^{λ_i t} R_i`.
pub fn evolve_by_damping_basis(basis: &DampingBasis, rho0: &DensityOperator, t: f64) -> Result<DensityOperator> {
    require(t >= 0.0 && t.is_finite(), || format!("t must be ≥ 0, got {t}"))?;
    let mut out = CMat2::zeros();
    for i in 0..4 {
        let weight = (basis.left[i] * *rho0.matrix()).trace() * (basis.eigenvalues[i] * t).exp();
        out = out + basis.right[i].scale(weight);
    }
    // Discard round-off anti-Hermitian residue.
    let herm = (out + out.adjoint()).scale_re(0.5);
    Ok(DensityOperator::from_matrix_unchecked(herm))
}

/// Outcome of a semigroup test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemigroupReport {
    /// `max |Φ_t Φ_s − Φ_{t+s}|` over the Pauli inputs.
    pub composition_defect: f64,
    /// `max |Φ_ε − I|` at `ε = 1e-8`.
    pub continuity_defect: f64,
    pub continuity_tolerance: f64,
    pub holds: bool,
}

/// Largest entry of `Φ_t Φ_s − Φ_{t+s}` for an arbitrary one-parameter family.
pub fn composition_defect<F>(family: F, t: f64, s: f64) -> f64
where
    F: Fn(f64) -> Superoperator,
{
    family(t).compose(&family(s)).max_diff(&family(t + s))
}

/// Checks `Φ_t Φ_s = Φ_{t+s}` and `Φ_ε → I` for the flow of `basis`.
pub fn semigroup_check(basis: &DampingBasis, t: f64, s: f64) -> Result<SemigroupReport> {
    require(t >= 0.0 && s >= 0.0, || format!("t, s must be ≥ 0, got ({t}, {s})"))?;
    let eps = 1e-8;
    let composition = composition_defect(|x| basis.transfer_matrix(x), t, s);
    let continuity = basis.transfer_matrix(eps).max_diff(&Superoperator::identity());
    let rate = basis.eigenvalues.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    let continuity_tolerance = 10.0 * eps * rate + 1e-10;
    Ok(SemigroupReport {
        composition_defect: composition,
        continuity_defect: continuity,
        continuity_tolerance,
        holds: composition < tolerances::SEMIGROUP && continuity < continuity_tolerance,
    })
}

//! Independent reference computations used by the integration tests. None
//! of these call into the library's numerical kernels.

#![allow(dead_code)]

use num_complex::Complex64 as C;

pub type M4 = [[C; 4]; 4];

fn matmul(a: &M4, b: &M4) -> M4 {
    let mut out = [[C::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

/// Characteristic polynomial `λ⁴ + c₁λ³ + c₂λ² + c₃λ + c₄` by
/// Faddeev–LeVerrier.
pub fn char_poly(a: &M4) -> [C; 4] {
    let mut m = [[C::new(0.0, 0.0); 4]; 4];
    let mut c = [C::new(0.0, 0.0); 5];
    c[0] = C::new(1.0, 0.0);
    for k in 1..=4 {
        // M_k = A M_{k−1} + c_{k−1} I
        let mut next = matmul(a, &m);
        for i in 0..4 {
            next[i][i] += c[k - 1];
        }
        m = next;
        let am = matmul(a, &m);
        let tr: C = (0..4).map(|i| am[i][i]).sum();
        c[k] = -tr / k as f64;
    }
    [c[1], c[2], c[3], c[4]]
}

/// All four roots of a monic quartic by Durand–Kerner iteration.
pub fn quartic_roots(c: [C; 4]) -> [C; 4] {
    let p = |z: C| (((z + c[0]) * z + c[1]) * z + c[2]) * z + c[3];
    let bound = 1.0 + c.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let seed = C::new(0.4, 0.9);
    let mut z: [C; 4] = [0, 1, 2, 3].map(|k| seed.powi(k) * bound);
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for i in 0..4 {
            let mut denom = C::new(1.0, 0.0);
            for j in 0..4 {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            let step = p(z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * bound {
            break;
        }
    }
    z
}

/// Eigenvalues of a Hermitian matrix from its characteristic polynomial,
/// ascending. Accuracy degrades to about √ε for repeated eigenvalues.
pub fn hermitian_eigenvalues_oracle(a: &M4) -> [f64; 4] {
    let mut v = quartic_roots(char_poly(a)).map(|z| z.re);
    v.sort_by(f64::total_cmp);
    v
}

/// Volterra form of the telegraph memory equation,
/// `ċ(t) = −4a² ∫₀ᵗ e^{−(t−s)/τ} c(s) ds`, `c(0) = 1`, by the implicit
/// trapezoid rule on both integrals. The kernel sum
/// `S_n = Σ_{k<n} w_k e^{−(t_n−t_k)/τ} c_k` is carried forward by the
/// exact factor `e^{−dt/τ}`, which gives the same sum as the direct double
/// loop in O(N) time.
pub fn volterra_rts(a: f64, tau: f64, t_end: f64, dt: f64) -> Vec<(f64, f64)> {
    let n = (t_end / dt).round() as usize;
    let decay = (-dt / tau).exp();
    let g = 4.0 * a * a;
    let mut out = Vec::with_capacity(n + 1);
    let mut c = 1.0;
    let mut integral = 0.0;
    // T_n = ½ e^{−t_n/τ} c_0 + Σ_{1≤k≤n} e^{−(t_n−t_k)/τ} c_k
    let mut t_sum = 0.5 * c;
    out.push((0.0, c));
    for step in 1..=n {
        // I_n = dt (e^{−dt/τ} T_{n−1} + ½ c_n)
        let known = dt * decay * t_sum;
        // c_n = c_{n−1} − (g dt/2)(I_{n−1} + I_n), solved for c_n.
        let c_new = (c - 0.5 * g * dt * (integral + known)) / (1.0 + 0.25 * g * dt * dt);
        integral = known + 0.5 * dt * c_new;
        t_sum = decay * t_sum + c_new;
        c = c_new;
        out.push((step as f64 * dt, c));
    }
    out
}

/// The same quadrature with the kernel sum evaluated by a direct double
/// loop; used to check [`volterra_rts`] on short horizons.
pub fn volterra_rts_direct(a: f64, tau: f64, t_end: f64, dt: f64) -> Vec<(f64, f64)> {
    let n = (t_end / dt).round() as usize;
    let g = 4.0 * a * a;
    let mut c = vec![1.0];
    let mut integral = vec![0.0];
    for m in 1..=n {
        let tm = m as f64 * dt;
        let mut a_m = 0.0;
        for (k, ck) in c.iter().enumerate() {
            let w = if k == 0 { 0.5 } else { 1.0 };
            a_m += w * (-(tm - k as f64 * dt) / tau).exp() * ck;
        }
        a_m *= dt;
        let c_new = (c[m - 1] - 0.5 * g * dt * (integral[m - 1] + a_m)) / (1.0 + 0.25 * g * dt * dt);
        integral.push(a_m + 0.5 * dt * c_new);
        c.push(c_new);
    }
    c.into_iter().enumerate().map(|(k, v)| (k as f64 * dt, v)).collect()
}

/// Largest `‖Λb + t‖` over the unit sphere by a dense angular grid followed
/// by coordinate refinement of the best few cells.
pub fn max_image_norm_oracle(lambda: [f64; 3], t: [f64; 3]) -> f64 {
    let f = |th: f64, ph: f64| {
        let b = [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()];
        (0..3).map(|i| (lambda[i] * b[i] + t[i]).powi(2)).sum::<f64>().sqrt()
    };
    let (nt, np) = (181, 360);
    let mut cands: Vec<(f64, f64, f64)> = Vec::with_capacity(nt * np);
    for i in 0..nt {
        let th = std::f64::consts::PI * i as f64 / (nt - 1) as f64;
        for j in 0..np {
            let ph = 2.0 * std::f64::consts::PI * j as f64 / np as f64;
            cands.push((f(th, ph), th, ph));
        }
    }
    cands.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best: f64 = 0.0;
    for &(_, mut th, mut ph) in cands.iter().take(8) {
        let mut h = 0.02;
        let mut val = f(th, ph);
        while h > 1e-12 {
            let mut moved = false;
            for (dt, dp) in [(h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h)] {
                let v = f(th + dt, ph + dp);
                if v > val {
                    val = v;
                    th += dt;
                    ph += dp;
                    moved = true;
                }
            }
            if !moved {
                h *= 0.5;
            }
        }
        best = best.max(val);
    }
    best
}

/// `e^{Gt}` for a real 4×4 matrix by scaling and squaring with a Taylor
/// series.
pub fn expm4(g: &[[f64; 4]; 4], t: f64) -> [[f64; 4]; 4] {
    let norm = g.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs())) * t.abs() * 4.0;
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scale = t / 2f64.powi(squarings as i32);
    let mul = |a: &[[f64; 4]; 4], b: &[[f64; 4]; 4]| {
        let mut o = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                o[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
            }
        }
        o
    };
    let a = g.map(|row| row.map(|x| x * scale));
    let mut result = [[0.0; 4]; 4];
    let mut term = [[0.0; 4]; 4];
    for i in 0..4 {
        result[i][i] = 1.0;
        term[i][i] = 1.0;
    }
    for k in 1..30 {
        term = mul(&term, &a).map(|row| row.map(|x| x / k as f64));
        for i in 0..4 {
            for j in 0..4 {
                result[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..squarings {
        result = mul(&result, &result);
    }
    result
}

/// Choi matrix `½ Σ_ij |i⟩⟨j| ⊗ Φ(|i⟩⟨j|)` of the affine Bloch map, with
/// `Φ` applied to matrix units through their Pauli expansion.
pub fn choi_oracle(lambda: [f64; 3], t: [f64; 3]) -> M4 {
    let zero = C::new(0.0, 0.0);
    let i = C::new(0.0, 1.0);
    // Φ(X) for X = ½(x₀ I + x·σ) → ½(x₀ I + (Λx + x₀ t)·σ).
    let phi = |x0: C, x: [C; 3]| -> [[C; 2]; 2] {
        let y = [0, 1, 2].map(|k| x[k] * lambda[k] + x0 * t[k]);
        [[(x0 + y[2]) * 0.5, (y[0] - i * y[1]) * 0.5], [(y[0] + i * y[1]) * 0.5, (x0 - y[2]) * 0.5]]
    };
    // Pauli coefficients (tr X, tr σ₁X, tr σ₂X, tr σ₃X) of |a⟩⟨b|.
    let unit = |a: usize, b: usize| -> (C, [C; 3]) {
        match (a, b) {
            (0, 0) => (C::new(1.0, 0.0), [zero, zero, C::new(1.0, 0.0)]),
            (1, 1) => (C::new(1.0, 0.0), [zero, zero, C::new(-1.0, 0.0)]),
            (0, 1) => (zero, [C::new(1.0, 0.0), i, zero]),
            _ => (zero, [C::new(1.0, 0.0), -i, zero]),
        }
    };
    let mut out = [[zero; 4]; 4];
    for a in 0..2 {
        for b in 0..2 {
            let (x0, x) = unit(a, b);
            let img = phi(x0, x);
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * a + k][2 * b + l] = img[k][l] * 0.5;
                }
            }
        }
    }
    out
}

//! Classical fourth-order Runge–Kutta on fixed-size real systems.

/// One RK4 step of `y' = f(t, y)` with step `h`.
pub fn rk4_step<const N: usize, F>(f: &F, t: f64, y: &[f64; N], h: f64) -> [f64; N]
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let axpy = |a: &[f64; N], s: f64, b: &[f64; N]| -> [f64; N] {
        let mut out = *a;
        out.iter_mut().zip(b).for_each(|(o, x)| *o += s * x);
        out
    };
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, &axpy(y, 0.5 * h, &k1));
    let k3 = f(t + 0.5 * h, &axpy(y, 0.5 * h, &k2));
    let k4 = f(t + h, &axpy(y, h, &k3));
    let mut out = *y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Step boundaries `0 = t₀ < t₁ < … = t_end` with spacing `dt`; the last step
/// is shortened when `t_end` is not a multiple of `dt`.
pub fn time_grid(t_end: f64, dt: f64) -> Vec<f64> {
    let n = ((t_end / dt) - 1e-9).ceil().max(0.0) as usize;
    let mut grid: Vec<f64> = (0..=n).map(|k| (k as f64 * dt).min(t_end)).collect();
    if let Some(last) = grid.last_mut() {
        *last = t_end;
    }
    grid.dedup();
    grid
}

/// Integrates `y' = f(t, y)` over [`time_grid`], returning every sample.
pub fn integrate<const N: usize, F>(f: F, y0: [f64; N], t_end: f64, dt: f64) -> Vec<(f64, [f64; N])>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let grid = time_grid(t_end, dt);
    let mut out = Vec::with_capacity(grid.len());
    let mut y = y0;
    out.push((grid[0], y));
    for w in grid.windows(2) {
        y = rk4_step(&f, w[0], &y, w[1] - w[0]);
        out.push((w[1], y));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shapes() {
        assert_eq!(time_grid(0.0, 0.1), vec![0.0]);
        assert_eq!(time_grid(0.3, 0.1).len(), 4);
        let g = time_grid(0.25, 0.1);
        assert_eq!(g.len(), 4);
        assert_eq!(*g.last().unwrap(), 0.25);
    }

    #[test]
    fn damped_oscillator_matches_closed_form() {
        // x'' + 2ζω x' + ω² x = 0, underdamped, x(0)=1, x'(0)=0.
        let (w, z) = (3.0f64, 0.1f64);
        let f = |_t: f64, y: &[f64; 2]| [y[1], -2.0 * z * w * y[1] - w * w * y[0]];
        let traj = integrate(f, [1.0, 0.0], 5.0, 1e-3);
        let wd = w * (1.0 - z * z).sqrt();
        for (t, y) in traj.iter().step_by(500) {
            let exact = (-z * w * t).exp() * ((wd * t).cos() + z * w / wd * (wd * t).sin());
            assert!((y[0] - exact).abs() < 1e-10, "t={t}");
        }
    }
}

//! Euler-Maruyama simulation of the growth processes
//! `df = (2 - k0(n-1)/2) f^{1-2n} dt - f^{1-n} dB0`, `d theta_r = f^{-n} dB_r`,
//! of `g = f^n + n B0`, of the group-valued `Theta`, and the Monte Carlo test
//! of the martingale property on a truncated module.

mod martingale;
pub mod noise;
pub mod series;
mod theta;
mod trace;

use serde::Serialize;

use crate::error::{Error, Result};

pub use martingale::{
    apply_drift, deterministic_drift, deterministic_drift_float, martingale_mc, DegreeStatistic, MartingaleConfig,
    MartingaleReport, QuotientSlice,
};
pub use noise::NoisePath;
pub use theta::{generator_matrices, ThetaGroup};
pub use trace::{run_trace, svg_plot, Trace, TraceConfig, TraceRow};

/// Paths with `|a1|` below this are censored.
pub const BLOW_UP_THRESHOLD: f64 = 1e-9;

/// Truncated Laurent data of `f_t` and `theta_{r,t}`.
///
/// `f[j]` is the coefficient of `z^{1-j}` and `theta[r][k]` that of `z^{-k}`,
/// for `j, k = 0..=depth`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LaurentState {
    pub n: usize,
    pub depth: usize,
    pub t: f64,
    pub f: Vec<f64>,
    pub theta: Vec<Vec<f64>>,
    /// Accumulated `B^(i)_t`, channel 0 first.
    pub b: Vec<f64>,
}

impl LaurentState {
    /// `f_0(z) = z`, `theta_{r,0} = 0` for `generators` channels.
    pub fn initial(n: usize, depth: usize, generators: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("mode depth n must be >= 1".into()));
        }
        let mut f = vec![0.0; depth + 1];
        f[0] = 1.0;
        Ok(LaurentState {
            n,
            depth,
            t: 0.0,
            f,
            theta: vec![vec![0.0; depth + 1]; generators],
            b: vec![0.0; generators + 1],
        })
    }

    pub fn a1(&self) -> f64 {
        self.f[0]
    }

    /// Coefficients of `(f/(a1 z))^p`.
    pub fn f_power(&self, p: f64) -> Vec<f64> {
        series::power(&series::normalized(&self.f), p, self.depth + 1)
    }
}

/// Drift coefficient `2 - k0 (n-1)/2` of `f^{1-2n}`.
pub fn drift_coefficient(n: usize, kappa0: f64) -> f64 {
    2.0 - 0.5 * kappa0 * (n as f64 - 1.0)
}

/// One Euler-Maruyama step; `db[0]` drives `f`, `db[r]` drives `theta_r`.
pub fn step_f_theta(s: &mut LaurentState, db: &[f64], dt: f64, kappa0: f64) -> Result<()> {
    let a1 = s.a1();
    if !(a1.abs() >= BLOW_UP_THRESHOLD) {
        return Err(Error::BlowUp { t: s.t, a1 });
    }
    let n = s.n;
    let ni = n as i32;
    let len = s.depth + 1;
    let u = series::normalized(&s.f);
    let drift = series::power(&u, 1.0 - 2.0 * n as f64, len);
    let diff = series::power(&u, 1.0 - n as f64, len);
    let c0 = drift_coefficient(n, kappa0) * dt * a1.powi(1 - 2 * ni);
    let c1 = db[0] * a1.powi(1 - ni);
    for j in 0..len {
        let mut delta = 0.0;
        if j >= 2 * n {
            delta += c0 * drift[j - 2 * n];
        }
        if j >= n {
            delta -= c1 * diff[j - n];
        }
        s.f[j] += delta;
    }
    if !s.theta.is_empty() {
        let th = series::power(&u, -(n as f64), len);
        let scale = a1.powi(-ni);
        for (r, theta) in s.theta.iter_mut().enumerate() {
            let dbr = db[r + 1];
            for k in 0..len.saturating_sub(n) {
                theta[n + k] += scale * th[k] * dbr;
            }
        }
    }
    for (b, x) in s.b.iter_mut().zip(db) {
        *b += x;
    }
    s.t += dt;
    Ok(())
}

/// Coefficients of `g = f^n + n B0`, index `j` for `z^{n-j}`.
pub fn g_from_f(s: &LaurentState) -> Vec<f64> {
    let n = s.n;
    let p = s.f_power(n as f64);
    let lead = s.a1().powi(n as i32);
    let mut g: Vec<f64> = p.iter().map(|c| c * lead).collect();
    if n < g.len() {
        g[n] += n as f64 * s.b[0];
    }
    g
}

/// `g` integrated directly from `dg = 2n/(g - n B0) dt`, same indexing as [`g_from_f`].
#[derive(Debug, Clone, PartialEq)]
pub struct DirectG {
    pub n: usize,
    pub g: Vec<f64>,
}

impl DirectG {
    pub fn initial(n: usize, depth: usize) -> Self {
        let mut g = vec![0.0; depth + 1];
        g[0] = 1.0;
        DirectG { n, g }
    }

    /// Euler step with `b0 = B0` at the start of the step.
    pub fn step(&mut self, b0: f64, dt: f64) {
        let n = self.n;
        let len = self.g.len();
        let mut h = self.g.clone();
        if n < len {
            h[n] -= n as f64 * b0;
        }
        let lead = h[0];
        let inv = series::power(&series::normalized(&h), -1.0, len);
        let c = 2.0 * n as f64 * dt / lead;
        for j in 2 * n..len {
            self.g[j] += c * inv[j - 2 * n];
        }
    }
}

/// Largest coefficient gap between `f^n + n B0` and the directly integrated `g`
/// over all grid times of one noise path.
pub fn loewner_residual(path: &NoisePath, n: usize, depth: usize, kappa0: f64) -> Result<f64> {
    let mut s = LaurentState::initial(n, depth, 0)?;
    let mut direct = DirectG::initial(n, depth);
    let mut worst: f64 = 0.0;
    for k in 0..path.steps() {
        let b0 = s.b[0];
        direct.step(b0, path.dt);
        step_f_theta(&mut s, &[path.increments[0][k]], path.dt, kappa0)?;
        let g = g_from_f(&s);
        for (x, y) in g.iter().zip(&direct.g) {
            worst = worst.max((x - y).abs());
        }
    }
    Ok(worst)
}

/// Strong-order fit of the residual over grids `dt = T / 2^level`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub n: usize,
    pub kappa0: f64,
    pub t_final: f64,
    pub paths: usize,
    pub levels: Vec<u32>,
    pub dts: Vec<f64>,
    /// Mean over paths of the pathwise maximal residual, per grid.
    pub mean_residuals: Vec<f64>,
    /// Least-squares slope of `log residual` against `log dt`.
    pub slope: f64,
}

pub fn loewner_convergence(
    n: usize,
    kappa0: f64,
    t_final: f64,
    levels: &[u32],
    paths: usize,
    depth: usize,
    seed: u64,
) -> Result<ConvergenceReport> {
    let finest = *levels.iter().max().ok_or_else(|| Error::Config("no grid levels".into()))?;
    let steps = 1usize << finest;
    let dt_fine = t_final / steps as f64;
    let mut sums = vec![0.0; levels.len()];
    for p in 0..paths {
        let fine = NoisePath::generate(seed ^ p as u64, dt_fine, steps, &[kappa0])?;
        for (i, &lv) in levels.iter().enumerate() {
            let path = fine.coarsen(1 << (finest - lv))?;
            sums[i] += loewner_residual(&path, n, depth, kappa0)?;
        }
    }
    let dts: Vec<f64> = levels.iter().map(|&lv| t_final / (1u64 << lv) as f64).collect();
    let mean_residuals: Vec<f64> = sums.iter().map(|s| s / paths as f64).collect();
    let xs: Vec<f64> = dts.iter().map(|d| d.ln()).collect();
    let ys: Vec<f64> = mean_residuals.iter().map(|r| r.max(f64::MIN_POSITIVE).ln()).collect();
    Ok(ConvergenceReport {
        n,
        kappa0,
        t_final,
        paths,
        levels: levels.to_vec(),
        dts,
        mean_residuals,
        slope: least_squares_slope(&xs, &ys),
    })
}

pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Coefficients of `w^0..w^{count-1}` in `1/g(1/w)`.
pub fn inverse_chart(g: &[f64], n: usize, count: usize) -> Vec<f64> {
    // g(1/w) = w^{-n} sum_j g_j w^j, so 1/g(1/w) = w^n / sum_j g_j w^j
    let len = count.saturating_sub(n);
    let inv = series::power(&series::normalized(g), -1.0, len.min(g.len()));
    let mut out = vec![0.0; count];
    for (k, c) in inv.iter().enumerate() {
        out[n + k] = c / g[0];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_noise_closed_form() {
        for n in 1..=3usize {
            let kappa0 = 8.0 / 3.0;
            let dt = 1e-4;
            let mut s = LaurentState::initial(n, 4 * n + 2, 0).unwrap();
            for _ in 0..5000 {
                step_f_theta(&mut s, &[0.0], dt, kappa0).unwrap();
            }
            let f2n = s.f_power(2.0 * n as f64);
            let expected = 2.0 * n as f64 * drift_coefficient(n, kappa0) * s.t;
            assert!((f2n[2 * n] - expected).abs() < 1e-3 * (1.0 + expected.abs()), "n={n}");
        }
    }

    #[test]
    fn n_one_reduction_and_constant_leading_coefficient() {
        assert_eq!(drift_coefficient(1, 5.0), 2.0);
        let path = NoisePath::generate(1, 1e-3, 500, &[2.0, 1.0]).unwrap();
        let mut s = LaurentState::initial(1, 6, 1).unwrap();
        let mut t = LaurentState::initial(1, 6, 1).unwrap();
        for k in 0..path.steps() {
            let db = path.step(k);
            // df = 2 f^{-1} dt - dB0, dtheta = f^{-1} dB1
            let inv = t.f_power(-1.0);
            let mut f_new = t.f.clone();
            for j in 2..=6 {
                f_new[j] += 2.0 * path.dt * inv[j - 2];
            }
            f_new[1] -= db[0];
            for j in 1..=6 {
                t.theta[0][j] += inv[j - 1] * db[1];
            }
            t.f = f_new;
            t.t += path.dt;
            step_f_theta(&mut s, &db, path.dt, 2.0).unwrap();
            for (x, y) in s.f.iter().zip(&t.f) {
                assert!((x - y).abs() < 1e-12);
            }
            for (x, y) in s.theta[0].iter().zip(&t.theta[0]) {
                assert!((x - y).abs() < 1e-12);
            }
            assert_eq!(s.a1(), 1.0);
        }
    }

    #[test]
    fn classical_loewner_pathwise_for_n_one() {
        let path = NoisePath::generate(9, 1e-3, 500, &[8.0 / 3.0]).unwrap();
        let r = loewner_residual(&path, 1, 8, 8.0 / 3.0).unwrap();
        assert!(r < 1e-10, "{r}");
    }

    #[test]
    fn zero_theta_variance_keeps_theta_zero() {
        let path = NoisePath::generate(2, 1e-3, 200, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        let mut s = LaurentState::initial(2, 8, 3).unwrap();
        for k in 0..path.steps() {
            step_f_theta(&mut s, &path.step(k), path.dt, 8.0 / 3.0).unwrap();
        }
        assert!(s.theta.iter().all(|th| th.iter().all(|x| *x == 0.0)));
    }

    #[test]
    fn truncation_consistency_is_bit_exact() {
        let path = NoisePath::generate(5, 1e-3, 300, &[8.0 / 3.0, 1.0, 1.0, 1.0]).unwrap();
        let mut a = LaurentState::initial(2, 6, 3).unwrap();
        let mut b = LaurentState::initial(2, 12, 3).unwrap();
        for k in 0..path.steps() {
            let db = path.step(k);
            step_f_theta(&mut a, &db, path.dt, 8.0 / 3.0).unwrap();
            step_f_theta(&mut b, &db, path.dt, 8.0 / 3.0).unwrap();
        }
        assert_eq!(a.f[..], b.f[..7]);
        for r in 0..3 {
            assert_eq!(a.theta[r][..], b.theta[r][..7]);
        }
        assert_eq!(g_from_f(&a)[..], g_from_f(&b)[..7]);
    }

    #[test]
    fn g_starts_at_z_to_the_n_and_inverse_chart_vanishes_low() {
        let s = LaurentState::initial(2, 6, 0).unwrap();
        assert_eq!(g_from_f(&s), vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let path = NoisePath::generate(4, 1e-3, 100, &[8.0 / 3.0]).unwrap();
        let mut s = LaurentState::initial(2, 6, 0).unwrap();
        for k in 0..path.steps() {
            step_f_theta(&mut s, &path.step(k), path.dt, 8.0 / 3.0).unwrap();
        }
        let w = inverse_chart(&g_from_f(&s), 2, 5);
        assert_eq!(w[0], 0.0);
        assert_eq!(w[1], 0.0);
        assert!(w[2].abs() > 0.5);
    }

    #[test]
    fn blow_up_is_reported() {
        let mut s = LaurentState::initial(2, 4, 0).unwrap();
        s.f[0] = 0.0;
        assert!(matches!(step_f_theta(&mut s, &[0.1], 1e-3, 1.0), Err(Error::BlowUp { .. })));
    }
}

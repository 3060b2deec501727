//! `Theta_t(z)`, a matrix-valued series in `z^{-1}` driven by
//! `dTheta Theta^{-1} = sum_r dtheta_r X_r + 1/2 sum_r dtheta_r^2 X_r^2`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{series, LaurentState};
use crate::lie::LieData;
use crate::rep::FiniteRep;

/// Complex matrices of the orthonormal generators `X_r` in a finite representation.
pub fn generator_matrices(lie: &LieData, rep: &FiniteRep) -> Vec<DMatrix<Complex64>> {
    lie.hermitian_basis().iter().map(|(_, c)| rep.complex_matrix(c)).collect()
}

/// Coefficients `Theta[k]` of `z^{-k}`, `k = 0..=depth`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaGroup {
    pub coeffs: Vec<DMatrix<Complex64>>,
}

impl ThetaGroup {
    pub fn identity(dim: usize, depth: usize) -> Self {
        let mut coeffs = vec![DMatrix::zeros(dim, dim); depth + 1];
        coeffs[0] = DMatrix::identity(dim, dim);
        ThetaGroup { coeffs }
    }

    pub fn depth(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Right-invariant Euler step on the pre-step state `s`:
    /// `Theta <- (I + sum_r dtheta_r X_r + 1/2 sum_r kappa_r f^{-2n} dt X_r^2) Theta`.
    pub fn step(&mut self, s: &LaurentState, db: &[f64], dt: f64, kappa: &[f64], xs: &[DMatrix<Complex64>]) {
        let n = s.n;
        let len = self.coeffs.len();
        let u = series::normalized(&s.f);
        let a1 = s.a1();
        let th = series::power(&u, -(n as f64), len);
        let dr = series::power(&u, -2.0 * n as f64, len);
        let dim = self.coeffs[0].nrows();
        // increment series sum_k Z_k z^{-k}
        let mut z = vec![DMatrix::<Complex64>::zeros(dim, dim); len];
        for (r, x) in xs.iter().enumerate() {
            let x2 = x * x;
            let c_noise = a1.powi(-(n as i32)) * db[r + 1];
            let c_drift = 0.5 * kappa[r] * dt * a1.powi(-2 * n as i32);
            for k in 0..len {
                if k >= n && c_noise != 0.0 {
                    z[k] += x * Complex64::new(c_noise * th[k - n], 0.0);
                }
                if k >= 2 * n && c_drift != 0.0 {
                    z[k] += &x2 * Complex64::new(c_drift * dr[k - 2 * n], 0.0);
                }
            }
        }
        let old = self.coeffs.clone();
        for k in 0..len {
            for j in 1..=k {
                if z[j].iter().all(|c| *c == Complex64::new(0.0, 0.0)) {
                    continue;
                }
                self.coeffs[k] += &z[j] * &old[k - j];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{build_sl, Weight};
    use crate::sde::{step_f_theta, NoisePath};

    fn setup() -> (Vec<DMatrix<Complex64>>, usize) {
        let lie = build_sl(2).unwrap();
        let rep = FiniteRep::for_weight(&lie, &Weight(vec![1]), 1).unwrap();
        (generator_matrices(&lie, &rep), rep.dim())
    }

    #[test]
    fn zero_variances_keep_identity() {
        let (xs, dim) = setup();
        let path = NoisePath::generate(1, 1e-3, 100, &[8.0 / 3.0, 0.0, 0.0, 0.0]).unwrap();
        let mut s = LaurentState::initial(2, 6, 3).unwrap();
        let mut th = ThetaGroup::identity(dim, 6);
        for k in 0..path.steps() {
            let db = path.step(k);
            th.step(&s, &db, path.dt, &[0.0, 0.0, 0.0], &xs);
            step_f_theta(&mut s, &db, path.dt, 8.0 / 3.0).unwrap();
        }
        assert_eq!(th, ThetaGroup::identity(dim, 6));
    }

    #[test]
    fn single_generator_commutes() {
        let (xs, dim) = setup();
        let kappa = [1.0, 0.0, 0.0];
        let path = NoisePath::generate(2, 1e-3, 200, &[8.0 / 3.0, 1.0, 0.0, 0.0]).unwrap();
        let mut s = LaurentState::initial(2, 6, 3).unwrap();
        let mut th = ThetaGroup::identity(dim, 6);
        for k in 0..path.steps() {
            let db = path.step(k);
            th.step(&s, &db, path.dt, &kappa, &xs);
            step_f_theta(&mut s, &db, path.dt, 8.0 / 3.0).unwrap();
            for c in &th.coeffs {
                let comm = c * &xs[0] - &xs[0] * c;
                assert!(comm.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn mean_leading_coefficient_follows_casimir_drift() {
        // E[Theta_{2n}(t)] = 1/2 sum_r kappa_r X_r^2 t = (3/4) t I on the defining rep
        let (xs, dim) = setup();
        let kappa = [1.0, 1.0, 1.0];
        let (dt, steps, paths) = (1e-2, 50, 400);
        let mut mean = DMatrix::<Complex64>::zeros(dim, dim);
        for p in 0..paths {
            let path = NoisePath::generate(100 + p, dt, steps, &[8.0 / 3.0, 1.0, 1.0, 1.0]).unwrap();
            let mut s = LaurentState::initial(2, 4, 3).unwrap();
            let mut th = ThetaGroup::identity(dim, 4);
            for k in 0..steps {
                let db = path.step(k);
                th.step(&s, &db, dt, &kappa, &xs);
                step_f_theta(&mut s, &db, dt, 8.0 / 3.0).unwrap();
            }
            mean += &th.coeffs[4] / Complex64::new(paths as f64, 0.0);
        }
        let t = dt * steps as f64;
        let expected = DMatrix::<Complex64>::identity(dim, dim) * Complex64::new(0.75 * t, 0.0);
        assert!((mean - expected).norm() < 0.1, "mean deviates");
    }
}

//! Seeded Brownian increments for the channels `0` (Virasoro) and `1..=R`
//! (orthonormal generators).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Generator for one path; `seed` is the master seed combined with the path index.
pub fn path_rng(master: u64, path: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(master ^ path)
}

/// Increments `dB^(i)_k` with variance `kappa_i * dt`, stored per channel.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisePath {
    pub seed: u64,
    pub dt: f64,
    pub kappa: Vec<f64>,
    pub increments: Vec<Vec<f64>>,
}

impl NoisePath {
    /// Draws `steps` increments on every channel; step-major order, so a path
    /// is reproducible from its seed alone.
    pub fn generate(seed: u64, dt: f64, steps: usize, kappa: &[f64]) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::Config(format!("time step must be positive, got {dt}")));
        }
        if let Some(k) = kappa.iter().find(|k| !(**k >= 0.0)) {
            return Err(Error::Config(format!("variances must be nonnegative, got {k}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut increments = vec![Vec::with_capacity(steps); kappa.len()];
        let scales: Vec<f64> = kappa.iter().map(|k| (k * dt).sqrt()).collect();
        for _ in 0..steps {
            for (ch, s) in scales.iter().enumerate() {
                let z: f64 = StandardNormal.sample(&mut rng);
                increments[ch].push(s * z);
            }
        }
        Ok(NoisePath { seed, dt, kappa: kappa.to_vec(), increments })
    }

    pub fn steps(&self) -> usize {
        self.increments.first().map(Vec::len).unwrap_or(0)
    }

    pub fn channels(&self) -> usize {
        self.increments.len()
    }

    /// Increments of all channels at one step.
    pub fn step(&self, k: usize) -> Vec<f64> {
        self.increments.iter().map(|ch| ch[k]).collect()
    }

    /// Same Brownian path on a grid `factor` times coarser.
    pub fn coarsen(&self, factor: usize) -> Result<Self> {
        if factor == 0 || self.steps() % factor != 0 {
            return Err(Error::Config(format!("cannot coarsen {} steps by {factor}", self.steps())));
        }
        let increments = self
            .increments
            .iter()
            .map(|ch| ch.chunks(factor).map(|c| c.iter().sum()).collect())
            .collect();
        Ok(NoisePath { seed: self.seed, dt: self.dt * factor as f64, kappa: self.kappa.clone(), increments })
    }

    /// `B^(i)` at every grid time, starting from 0.
    pub fn values(&self, channel: usize) -> Vec<f64> {
        let mut acc = 0.0;
        std::iter::once(0.0)
            .chain(self.increments[channel].iter().map(|x| {
                acc += x;
                acc
            }))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_independent_channels() {
        let a = NoisePath::generate(7, 0.01, 1000, &[1.0, 2.0]).unwrap();
        let b = NoisePath::generate(7, 0.01, 1000, &[1.0, 2.0]).unwrap();
        assert_eq!(a, b);
        let var = |ch: &[f64]| ch.iter().map(|x| x * x).sum::<f64>() / ch.len() as f64;
        assert!((var(&a.increments[0]) / 0.01 - 1.0).abs() < 0.15);
        assert!((var(&a.increments[1]) / 0.02 - 1.0).abs() < 0.15);
        let cov: f64 = a.increments[0].iter().zip(&a.increments[1]).map(|(x, y)| x * y).sum::<f64>() / 1000.0;
        assert!(cov.abs() < 0.003);
    }

    #[test]
    fn coarsening_keeps_endpoints() {
        let a = NoisePath::generate(3, 0.001, 64, &[1.0]).unwrap();
        let c = a.coarsen(8).unwrap();
        assert_eq!(c.steps(), 8);
        assert!((a.values(0)[64] - c.values(0)[8]).abs() < 1e-12);
        assert!(a.coarsen(5).is_err());
        assert!(NoisePath::generate(0, 0.0, 1, &[1.0]).is_err());
    }
}

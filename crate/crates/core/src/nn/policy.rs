use rand::Rng;

use super::{DiagonalGaussian, Mlp, OutputInit};
use crate::Result;

/// Gaussian policy: an MLP for the mean and a state-independent log-std vector.
///
/// The flat parameter view is the mean network's parameters followed by the
/// log-std entries.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPolicy {
    pub net: Mlp,
    pub log_std: Vec<f64>,
}

impl GaussianPolicy {
    pub fn new<R: Rng + ?Sized>(
        obs_dim: usize,
        act_dim: usize,
        hidden: &[usize],
        rng: &mut R,
    ) -> Result<Self> {
        let sizes: Vec<usize> = std::iter::once(obs_dim)
            .chain(hidden.iter().copied())
            .chain(std::iter::once(act_dim))
            .collect();
        Ok(Self {
            net: Mlp::new(&sizes, OutputInit::Policy, rng)?,
            log_std: vec![0.0; act_dim],
        })
    }

    pub fn obs_dim(&self) -> usize {
        self.net.input_dim()
    }

    pub fn act_dim(&self) -> usize {
        self.net.output_dim()
    }

    pub fn param_count(&self) -> usize {
        self.net.param_count() + self.log_std.len()
    }

    pub fn flat_params(&self) -> Vec<f64> {
        let mut p = self.net.params().to_vec();
        p.extend_from_slice(&self.log_std);
        p
    }

    pub fn set_flat_params(&mut self, flat: &[f64]) {
        let n = self.net.param_count();
        self.net.params_mut().copy_from_slice(&flat[..n]);
        self.log_std.copy_from_slice(&flat[n..]);
    }

    pub fn distribution(&self, obs: &[f64]) -> Result<DiagonalGaussian> {
        DiagonalGaussian::new(self.net.predict(obs)?, &self.log_std)
    }

    /// Returns `(action, log_prob)`. Deterministic mode returns the mean.
    pub fn act<R: Rng + ?Sized>(
        &self,
        obs: &[f64],
        rng: &mut R,
        deterministic: bool,
    ) -> Result<(Vec<f64>, f64)> {
        let dist = self.distribution(obs)?;
        let action = if deterministic {
            dist.mean().to_vec()
        } else {
            dist.sample(rng)
        };
        let lp = dist.log_prob(&action)?;
        Ok((action, lp))
    }
}

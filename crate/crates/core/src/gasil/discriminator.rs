use ndarray::{Array2, ArrayView2};
use rand::Rng;

use crate::nn::{Adam, Mlp, OutputInit};
use crate::rollout::RolloutBatch;
use crate::{Error, Result};

/// `D` is clamped to `[D_CLAMP, 1 - D_CLAMP]` before taking logs.
pub const D_CLAMP: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct StateActionPair {
    pub observation: Vec<f64>,
    /// Action as applied by the environment.
    pub action: Vec<f64>,
}

fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Classifier `D(s, a)`: probability that a state-action pair came from the
/// current policy (label 1) rather than the good-trajectory buffer (label 0).
///
/// The network sees the observation concatenated with the applied action
/// divided by the action bound, and outputs a logit.
#[derive(Debug, Clone, PartialEq)]
pub struct Discriminator {
    pub net: Mlp,
    action_bound: f64,
    obs_dim: usize,
}

impl Discriminator {
    pub fn new<R: Rng + ?Sized>(
        obs_dim: usize,
        act_dim: usize,
        hidden: &[usize],
        action_bound: f64,
        rng: &mut R,
    ) -> Result<Self> {
        let sizes: Vec<usize> = std::iter::once(obs_dim + act_dim)
            .chain(hidden.iter().copied())
            .chain(std::iter::once(1))
            .collect();
        Self::from_net(Mlp::new(&sizes, OutputInit::Unit, rng)?, obs_dim, action_bound)
    }

    pub fn from_net(net: Mlp, obs_dim: usize, action_bound: f64) -> Result<Self> {
        if net.output_dim() != 1 || net.input_dim() <= obs_dim {
            return Err(Error::config(
                "discriminator",
                format!("network {:?} does not fit obs_dim {obs_dim}", net.sizes()),
            ));
        }
        if !(action_bound > 0.0) {
            return Err(Error::config("action_bound", "must be positive"));
        }
        Ok(Self {
            net,
            action_bound,
            obs_dim,
        })
    }

    pub fn obs_dim(&self) -> usize {
        self.obs_dim
    }

    pub fn act_dim(&self) -> usize {
        self.net.input_dim() - self.obs_dim
    }

    fn write_features(&self, obs: &[f64], applied_action: &[f64], row: &mut [f64]) {
        row[..self.obs_dim].copy_from_slice(obs);
        for (dst, &a) in row[self.obs_dim..].iter_mut().zip(applied_action) {
            *dst = a / self.action_bound;
        }
    }

    /// Network input matrix for a slice of pairs.
    pub fn features(&self, pairs: &[StateActionPair]) -> Array2<f64> {
        let mut x = Array2::zeros((pairs.len(), self.net.input_dim()));
        for (mut row, p) in x.rows_mut().into_iter().zip(pairs) {
            self.write_features(&p.observation, &p.action, row.as_slice_mut().expect("row"));
        }
        x
    }

    /// Feature rows for every step of a rollout batch.
    pub fn batch_features(&self, batch: &RolloutBatch) -> Array2<f64> {
        let mut x = Array2::zeros((batch.len(), self.net.input_dim()));
        for (t, mut row) in x.rows_mut().into_iter().enumerate() {
            let obs = batch.observations.row(t);
            let act = batch.applied_action(t);
            self.write_features(obs.as_slice().expect("row"), &act, row.as_slice_mut().expect("row"));
        }
        x
    }

    /// Raw logits for feature rows.
    pub fn logits(&self, features: ArrayView2<'_, f64>) -> Result<Vec<f64>> {
        let (z, _) = self.net.forward_batch(features)?;
        Ok(z.column(0).to_vec())
    }

    /// `D(s, a)`.
    pub fn probability(&self, observation: &[f64], applied_action: &[f64]) -> Result<f64> {
        let mut row = vec![0.0; self.net.input_dim()];
        self.write_features(observation, applied_action, &mut row);
        Ok(sigmoid(self.net.predict(&row)?[0]))
    }

    /// Learned reward `-log D(s, a)`, with `D` clamped away from 0 and 1.
    pub fn reward(&self, pair: &StateActionPair) -> Result<f64> {
        Ok(reward_from_probability(self.probability(&pair.observation, &pair.action)?))
    }

    /// `-log D` for every step of a rollout batch.
    pub fn batch_rewards(&self, batch: &RolloutBatch) -> Result<Vec<f64>> {
        let x = self.batch_features(batch);
        let logits = self.logits(x.view())?;
        if logits.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite("discriminator output"));
        }
        Ok(logits.into_iter().map(|z| reward_from_probability(sigmoid(z))).collect())
    }

    /// Ascent objective `mean log D(policy) + mean log(1 - D(buffer))`.
    pub fn objective(&self, policy: ArrayView2<'_, f64>, buffer: ArrayView2<'_, f64>) -> Result<f64> {
        let zp = self.logits(policy)?;
        let zb = self.logits(buffer)?;
        Ok(objective_from_logits(&zp, &zb))
    }

    /// Objective value and its gradient with respect to the flat parameters.
    pub fn objective_and_grad(
        &self,
        policy: ArrayView2<'_, f64>,
        buffer: ArrayView2<'_, f64>,
    ) -> Result<(f64, Vec<f64>)> {
        if policy.nrows() == 0 || buffer.nrows() == 0 {
            return Err(Error::Usage("discriminator minibatches must be non-empty".into()));
        }
        let (zp, cache_p) = self.net.forward_batch(policy)?;
        let (zb, cache_b) = self.net.forward_batch(buffer)?;
        let zp: Vec<f64> = zp.column(0).to_vec();
        let zb: Vec<f64> = zb.column(0).to_vec();
        let value = objective_from_logits(&zp, &zb);
        let (np, nb) = (zp.len() as f64, zb.len() as f64);
        // d/dz log sigmoid(z) = 1 - sigmoid(z);  d/dz log(1 - sigmoid(z)) = -sigmoid(z)
        let gp = Array2::from_shape_fn((zp.len(), 1), |(i, _)| (1.0 - sigmoid(zp[i])) / np);
        let gb = Array2::from_shape_fn((zb.len(), 1), |(i, _)| -sigmoid(zb[i]) / nb);
        let mut grad = vec![0.0; self.net.param_count()];
        self.net.backward_into(&cache_p, gp.view(), &mut grad)?;
        self.net.backward_into(&cache_b, gb.view(), &mut grad)?;
        Ok((value, grad))
    }

    /// One gradient-ascent step. Returns the objective before the step.
    /// Non-finite objective or gradient skips the step with an error.
    pub fn train_step(
        &mut self,
        policy: ArrayView2<'_, f64>,
        buffer: ArrayView2<'_, f64>,
        optimizer: &mut Adam,
    ) -> Result<f64> {
        let (value, mut grad) = self.objective_and_grad(policy, buffer)?;
        if !value.is_finite() {
            return Err(Error::NonFinite("discriminator objective"));
        }
        // Adam descends; ascend the objective.
        grad.iter_mut().for_each(|g| *g = -*g);
        optimizer.step(self.net.params_mut(), &grad)?;
        Ok(value)
    }

    /// Fraction of pairs classified correctly (policy as D > 0.5, buffer as D < 0.5).
    pub fn accuracy(&self, policy: ArrayView2<'_, f64>, buffer: ArrayView2<'_, f64>) -> Result<f64> {
        let zp = self.logits(policy)?;
        let zb = self.logits(buffer)?;
        let correct = zp.iter().filter(|&&z| z > 0.0).count() + zb.iter().filter(|&&z| z < 0.0).count();
        Ok(correct as f64 / (zp.len() + zb.len()) as f64)
    }
}

pub(crate) fn reward_from_probability(d: f64) -> f64 {
    -d.clamp(D_CLAMP, 1.0 - D_CLAMP).ln()
}

fn objective_from_logits(zp: &[f64], zb: &[f64]) -> f64 {
    let lp = zp.iter().map(|&z| -softplus(-z)).sum::<f64>() / zp.len() as f64;
    let lb = zb.iter().map(|&z| -softplus(z)).sum::<f64>() / zb.len() as f64;
    lp + lb
}

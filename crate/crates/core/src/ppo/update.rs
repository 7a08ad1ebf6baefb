use ndarray::{Array2, ArrayView2, Axis};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::nn::{Adam, DiagonalGaussian, GaussianPolicy, Mlp, clip_grad_norm};
use crate::rollout::RolloutBatch;
use crate::seeding;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PpoConfig {
    pub clip: f64,
    pub epochs: usize,
    pub minibatch_size: usize,
    pub learning_rate: f64,
    pub value_coef: f64,
    pub entropy_coef: f64,
    pub max_grad_norm: f64,
}

impl Default for PpoConfig {
    fn default() -> Self {
        Self {
            clip: 0.2,
            epochs: 10,
            minibatch_size: 64,
            learning_rate: 3e-4,
            value_coef: 0.5,
            entropy_coef: 0.0,
            max_grad_norm: 0.5,
        }
    }
}

impl PpoConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("clip", self.clip),
            ("learning_rate", self.learning_rate),
            ("value_coef", self.value_coef),
            ("max_grad_norm", self.max_grad_norm),
        ];
        for (field, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(field, "must be positive"));
            }
        }
        if self.epochs == 0 {
            return Err(Error::config("epochs", "must be positive"));
        }
        if self.minibatch_size == 0 {
            return Err(Error::config("minibatch_size", "must be positive"));
        }
        if !(self.entropy_coef >= 0.0) {
            return Err(Error::config("entropy_coef", "must be >= 0"));
        }
        Ok(())
    }
}

/// Averages over the minibatches of one update call.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct UpdateStats {
    pub surrogate: f64,
    pub value_loss: f64,
    pub entropy: f64,
    pub clip_fraction: f64,
    pub approx_kl: f64,
    pub minibatches: usize,
    /// Minibatches skipped because of a non-finite loss or gradient.
    pub skipped: usize,
}

/// `min(ratio * adv, clip(ratio, 1 - eps, 1 + eps) * adv)`.
pub fn clipped_surrogate(ratio: f64, advantage: f64, clip: f64) -> f64 {
    (ratio * advantage).min(ratio.clamp(1.0 - clip, 1.0 + clip) * advantage)
}

/// Policy objective on one minibatch and its gradient (ascent direction).
#[derive(Debug, Clone, PartialEq)]
pub struct MinibatchGrad {
    /// Mean clipped surrogate.
    pub surrogate: f64,
    pub entropy: f64,
    pub clip_fraction: f64,
    pub approx_kl: f64,
    /// Gradient of `surrogate + entropy_coef * entropy` w.r.t. the flat policy parameters.
    pub grad: Vec<f64>,
}

pub fn policy_objective_grad(
    policy: &GaussianPolicy,
    observations: ArrayView2<'_, f64>,
    actions: ArrayView2<'_, f64>,
    old_log_probs: &[f64],
    advantages: &[f64],
    clip: f64,
    entropy_coef: f64,
) -> Result<MinibatchGrad> {
    let n = observations.nrows();
    if n == 0 || actions.nrows() != n || old_log_probs.len() != n || advantages.len() != n {
        return Err(Error::Usage("minibatch arrays must be non-empty and equally long".into()));
    }
    let act_dim = policy.act_dim();
    let (means, cache) = policy.net.forward_batch(observations)?;
    let mut d_mean = Array2::zeros((n, act_dim));
    let mut d_log_std = vec![0.0; act_dim];
    let (mut surrogate, mut clipped, mut kl, mut entropy) = (0.0, 0usize, 0.0, 0.0);
    let inv_n = 1.0 / n as f64;

    for i in 0..n {
        let dist = DiagonalGaussian::new(means.row(i).to_vec(), &policy.log_std)?;
        let action = actions.row(i);
        let action = action.as_slice().expect("row");
        let log_prob = dist.log_prob(action)?;
        let ratio = (log_prob - old_log_probs[i]).exp();
        let adv = advantages[i];
        let unclipped = ratio * adv;
        let clipped_term = ratio.clamp(1.0 - clip, 1.0 + clip) * adv;
        surrogate += unclipped.min(clipped_term) * inv_n;
        if (ratio - 1.0).abs() > clip {
            clipped += 1;
        }
        kl += (old_log_probs[i] - log_prob) * inv_n;
        entropy += dist.entropy() * inv_n;
        // d/dlogp of min(): the unclipped branch carries ratio * adv, the
        // clipped branch is flat in the parameters.
        if unclipped <= clipped_term {
            let coeff = unclipped * inv_n;
            let (gm, gs) = dist.log_prob_grads(action, &policy.log_std);
            for j in 0..act_dim {
                d_mean[[i, j]] = coeff * gm[j];
                d_log_std[j] += coeff * gs[j];
            }
        }
    }
    if entropy_coef != 0.0 {
        for (g, &ls) in d_log_std.iter_mut().zip(&policy.log_std) {
            if (crate::nn::LOG_STD_MIN..=crate::nn::LOG_STD_MAX).contains(&ls) {
                *g += entropy_coef;
            }
        }
    }
    let mut grad = vec![0.0; policy.param_count()];
    let net_params = policy.net.param_count();
    policy.net.backward_into(&cache, d_mean.view(), &mut grad[..net_params])?;
    grad[net_params..].copy_from_slice(&d_log_std);
    Ok(MinibatchGrad {
        surrogate,
        entropy,
        clip_fraction: clipped as f64 * inv_n,
        approx_kl: kl,
        grad,
    })
}

/// Mean squared error of the value head and its gradient.
fn value_loss_grad(value: &Mlp, observations: ArrayView2<'_, f64>, targets: &[f64]) -> Result<(f64, Vec<f64>)> {
    let n = targets.len() as f64;
    let (pred, cache) = value.forward_batch(observations)?;
    let mut loss = 0.0;
    let d_out = Array2::from_shape_fn((targets.len(), 1), |(i, _)| {
        let err = pred[[i, 0]] - targets[i];
        loss += err * err / n;
        2.0 * err / n
    });
    let mut grad = vec![0.0; value.param_count()];
    value.backward_into(&cache, d_out.view(), &mut grad)?;
    Ok((loss, grad))
}

/// PPO optimizer state: one Adam per network and the minibatch shuffle stream.
#[derive(Debug, Clone)]
pub struct PpoLearner {
    pub config: PpoConfig,
    policy_opt: Adam,
    value_opt: Adam,
    rng: seeding::Rng,
}

impl PpoLearner {
    pub fn new(config: PpoConfig, policy: &GaussianPolicy, value: &Mlp, rng: seeding::Rng) -> Self {
        let lr = config.learning_rate;
        Self {
            policy_opt: Adam::new(policy.param_count(), lr),
            value_opt: Adam::new(value.param_count(), lr),
            config,
            rng,
        }
    }

    /// Runs `epochs` passes of shuffled minibatch updates over the batch.
    /// Advantages and return targets must already be final.
    pub fn update(&mut self, policy: &mut GaussianPolicy, value: &mut Mlp, batch: &RolloutBatch) -> Result<UpdateStats> {
        let n = batch.len();
        if batch.advantages.len() != n || batch.returns.len() != n {
            return Err(Error::Usage("advantages must be computed before the PPO update".into()));
        }
        let cfg = self.config.clone();
        let mut stats = UpdateStats::default();
        let mut indices: Vec<usize> = (0..n).collect();
        let policy_len = policy.param_count();

        for _ in 0..cfg.epochs {
            indices.shuffle(&mut self.rng);
            for chunk in indices.chunks(cfg.minibatch_size) {
                let obs = batch.observations.select(Axis(0), chunk);
                let acts = batch.actions.select(Axis(0), chunk);
                let old: Vec<f64> = chunk.iter().map(|&i| batch.log_probs[i]).collect();
                let adv: Vec<f64> = chunk.iter().map(|&i| batch.advantages[i]).collect();
                let ret: Vec<f64> = chunk.iter().map(|&i| batch.returns[i]).collect();

                let pg = policy_objective_grad(policy, obs.view(), acts.view(), &old, &adv, cfg.clip, cfg.entropy_coef)?;
                let (vloss, vgrad) = value_loss_grad(value, obs.view(), &ret)?;
                let loss = -(pg.surrogate + cfg.entropy_coef * pg.entropy) + cfg.value_coef * vloss;
                stats.minibatches += 1;
                if !loss.is_finite() {
                    stats.skipped += 1;
                    continue;
                }

                let mut grad: Vec<f64> = pg.grad.iter().map(|g| -g).collect();
                grad.extend(vgrad.iter().map(|g| cfg.value_coef * g));
                clip_grad_norm(&mut grad, cfg.max_grad_norm);
                if grad.iter().any(|g| !g.is_finite()) {
                    stats.skipped += 1;
                    continue;
                }
                let (gp, gv) = grad.split_at(policy_len);
                let mut flat = policy.flat_params();
                self.policy_opt.step(&mut flat, gp)?;
                policy.set_flat_params(&flat);
                self.value_opt.step(value.params_mut(), gv)?;

                stats.surrogate += pg.surrogate;
                stats.value_loss += vloss;
                stats.entropy += pg.entropy;
                stats.clip_fraction += pg.clip_fraction;
                stats.approx_kl += pg.approx_kl;
            }
        }
        let used = (stats.minibatches - stats.skipped).max(1) as f64;
        stats.surrogate /= used;
        stats.value_loss /= used;
        stats.entropy /= used;
        stats.clip_fraction /= used;
        stats.approx_kl /= used;
        Ok(stats)
    }
}

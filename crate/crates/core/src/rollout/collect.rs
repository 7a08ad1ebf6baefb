use ndarray::Array2;

use super::{Episode, RolloutBatch, Transition};
use crate::env::{Environment, scale_action};
use crate::nn::{GaussianPolicy, Mlp};
use crate::seeding;
use crate::{Error, Result};

/// Steps one environment with the current policy. Episodes that cross a batch
/// edge carry over into the next call.
pub struct Collector {
    env: Box<dyn Environment>,
    obs: Vec<f64>,
    partial: Vec<Transition>,
    rng: seeding::Rng,
    gamma: f64,
    /// Sample actions (true) or act with the policy mean (false).
    pub stochastic: bool,
}

impl Collector {
    pub fn new(mut env: Box<dyn Environment>, rng: seeding::Rng, gamma: f64) -> Self {
        let obs = env.reset();
        Self {
            env,
            obs,
            partial: Vec::new(),
            rng,
            gamma,
            stochastic: true,
        }
    }

    pub fn env(&self) -> &dyn Environment {
        self.env.as_ref()
    }

    /// Collects exactly `horizon` steps. Returns the batch (values filled,
    /// shaped rewards and advantages empty) and the episodes completed in it.
    pub fn collect(
        &mut self,
        policy: &GaussianPolicy,
        value_net: &Mlp,
        horizon: usize,
    ) -> Result<(RolloutBatch, Vec<Episode>)> {
        if horizon == 0 {
            return Err(Error::config("horizon", "must be positive"));
        }
        let obs_dim = self.env.observation_dim();
        let act_dim = self.env.action_dim();
        let bound = self.env.action_bound();
        let mut observations = Array2::zeros((horizon, obs_dim));
        let mut actions = Array2::zeros((horizon, act_dim));
        let mut rewards = Vec::with_capacity(horizon);
        let mut dones = Vec::with_capacity(horizon);
        let mut log_probs = Vec::with_capacity(horizon);
        let mut completed = Vec::new();

        for t in 0..horizon {
            let (action, log_prob) = policy.act(&self.obs, &mut self.rng, !self.stochastic)?;
            let applied = scale_action(&action, bound);
            let step = self.env.step(&applied)?;
            observations.row_mut(t).assign(&ndarray::ArrayView1::from(&self.obs));
            actions.row_mut(t).assign(&ndarray::ArrayView1::from(&action));
            rewards.push(step.reward);
            dones.push(step.done);
            log_probs.push(log_prob);
            let next_obs = if step.done { self.env.reset() } else { step.observation };
            let obs = std::mem::replace(&mut self.obs, next_obs);
            self.partial.push(Transition {
                observation: obs,
                action: applied,
                reward: step.reward,
            });
            if step.done {
                let transitions = std::mem::take(&mut self.partial);
                completed.push(Episode::new(transitions, true, self.gamma));
            }
        }

        let (values, _) = value_net.forward_batch(observations.view())?;
        let values: Vec<f64> = values.column(0).to_vec();
        let bootstrap_value = if *dones.last().expect("horizon > 0") {
            0.0
        } else {
            value_net.predict(&self.obs)?[0]
        };

        Ok((
            RolloutBatch {
                observations,
                actions,
                env_rewards: rewards,
                shaped_rewards: Vec::new(),
                dones,
                log_probs,
                values,
                bootstrap_value,
                advantages: Vec::new(),
                returns: Vec::new(),
                action_bound: bound,
            },
            completed,
        ))
    }
}

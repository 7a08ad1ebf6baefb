use ndarray::Array2;

/// Fixed-horizon batch of on-policy transitions.
///
/// `actions` holds the raw policy samples in normalized units (what the
/// log-probs refer to); the environment saw them clipped to `[-1, 1]` and
/// scaled by `action_bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct RolloutBatch {
    pub observations: Array2<f64>,
    pub actions: Array2<f64>,
    pub env_rewards: Vec<f64>,
    pub shaped_rewards: Vec<f64>,
    pub dones: Vec<bool>,
    pub log_probs: Vec<f64>,
    pub values: Vec<f64>,
    /// Value of the observation after the last step (0 if that step ended an episode).
    pub bootstrap_value: f64,
    pub advantages: Vec<f64>,
    pub returns: Vec<f64>,
    pub action_bound: f64,
}

impl RolloutBatch {
    pub fn len(&self) -> usize {
        self.env_rewards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.env_rewards.is_empty()
    }

    pub fn obs_dim(&self) -> usize {
        self.observations.ncols()
    }

    pub fn act_dim(&self) -> usize {
        self.actions.ncols()
    }

    /// Action at step `t` as the environment applied it.
    pub fn applied_action(&self, t: usize) -> Vec<f64> {
        let b = self.action_bound;
        self.actions.row(t).iter().map(|a| a.clamp(-1.0, 1.0) * b).collect()
    }

    /// Recomputes advantages and return targets from the shaped rewards.
    pub fn compute_advantages(&mut self, gamma: f64, lambda: f64) {
        let (adv, ret) = super::compute_gae(
            &self.shaped_rewards,
            &self.values,
            &self.dones,
            self.bootstrap_value,
            gamma,
            lambda,
        );
        self.advantages = adv;
        self.returns = ret;
    }
}

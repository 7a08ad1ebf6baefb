use ndarray::Axis;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{Discriminator, GoodTrajectoryBuffer};
use crate::nn::{Adam, GaussianPolicy, Mlp, OutputInit};
use crate::ppo::{PpoConfig, PpoLearner, UpdateStats};
use crate::rollout::{Episode, RewardMode, RolloutBatch, normalize_advantages, shape_rewards};
use crate::seeding::{self, Stream};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgentKind {
    Ppo,
    PpoGasil,
}

impl AgentKind {
    pub fn name(self) -> &'static str {
        match self {
            AgentKind::Ppo => "ppo",
            AgentKind::PpoGasil => "ppo_gasil",
        }
    }
}

/// Self-imitation knobs.
#[derive(Debug, Clone, PartialEq)]
pub struct GasilSettings {
    /// Discriminator passes over each batch, like PPO epochs.
    pub n_disc: usize,
    /// Pairs per discriminator step, split evenly between policy and buffer.
    pub disc_minibatch: usize,
    pub disc_lr: f64,
    pub alpha: f64,
    pub mode: RewardMode,
    pub buffer_capacity: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct IterationStats {
    pub ppo: UpdateStats,
    /// Mean pre-step discriminator objective, when the discriminator trained.
    pub disc_objective: Option<f64>,
    /// Whether the shaped (rather than environment) reward drove this update.
    pub shaped: bool,
    /// Numeric incidents (skipped steps) during this iteration.
    pub incidents: usize,
}

/// Policy, critic, good-trajectory buffer and (for `PpoGasil`) discriminator.
///
/// The pure PPO agent keeps the buffer too, for diagnostics only; it never
/// influences its updates.
#[derive(Debug, Clone)]
pub struct Agent {
    pub kind: AgentKind,
    pub policy: GaussianPolicy,
    pub value: Mlp,
    pub ppo: PpoLearner,
    pub buffer: GoodTrajectoryBuffer,
    pub discriminator: Option<Discriminator>,
    pub settings: GasilSettings,
    pub gamma: f64,
    pub gae_lambda: f64,
    disc_opt: Option<Adam>,
    disc_rng: seeding::Rng,
}

#[allow(clippy::too_many_arguments)]
impl Agent {
    pub fn new(
        kind: AgentKind,
        obs_dim: usize,
        act_dim: usize,
        action_bound: f64,
        hidden: &[usize],
        ppo_config: PpoConfig,
        settings: GasilSettings,
        gamma: f64,
        gae_lambda: f64,
        seed: u64,
    ) -> Result<Self> {
        let policy = GaussianPolicy::new(obs_dim, act_dim, hidden, &mut seeding::stream(seed, Stream::PolicyInit))?;
        let value_sizes: Vec<usize> = std::iter::once(obs_dim)
            .chain(hidden.iter().copied())
            .chain(std::iter::once(1))
            .collect();
        let value = Mlp::new(&value_sizes, OutputInit::Unit, &mut seeding::stream(seed, Stream::ValueInit))?;
        let ppo = PpoLearner::new(ppo_config, &policy, &value, seeding::stream(seed, Stream::Minibatches));
        let (discriminator, disc_opt) = match kind {
            AgentKind::Ppo => (None, None),
            AgentKind::PpoGasil => {
                let d = Discriminator::new(
                    obs_dim,
                    act_dim,
                    hidden,
                    action_bound,
                    &mut seeding::stream(seed, Stream::DiscriminatorInit),
                )?;
                let opt = Adam::new(d.net.param_count(), settings.disc_lr);
                (Some(d), Some(opt))
            }
        };
        Ok(Self {
            kind,
            policy,
            value,
            ppo,
            buffer: GoodTrajectoryBuffer::new(settings.buffer_capacity),
            discriminator,
            settings,
            gamma,
            gae_lambda,
            disc_opt,
            disc_rng: seeding::stream(seed, Stream::BufferSampling),
        })
    }

    /// One iteration over a freshly collected batch: update the buffer, train
    /// the discriminator, shape rewards, recompute advantages, run PPO.
    pub fn iterate(&mut self, batch: &mut RolloutBatch, completed: Vec<Episode>) -> Result<IterationStats> {
        let mut stats = IterationStats::default();
        self.buffer.update(completed);

        let imitation_ready = self.discriminator.is_some() && !self.buffer.is_empty();
        if imitation_ready && self.settings.n_disc > 0 {
            stats.disc_objective = self.train_discriminator(batch, &mut stats.incidents)?;
        }

        let mode = if imitation_ready { self.settings.mode } else { RewardMode::EnvOnly };
        match shape_rewards(batch, self.discriminator.as_ref(), self.settings.alpha, mode) {
            Ok(()) => stats.shaped = mode != RewardMode::EnvOnly,
            Err(Error::NonFinite(_)) => {
                stats.incidents += 1;
                shape_rewards(batch, None, 0.0, RewardMode::EnvOnly)?;
            }
            Err(e) => return Err(e),
        }

        batch.compute_advantages(self.gamma, self.gae_lambda);
        normalize_advantages(&mut batch.advantages);
        stats.ppo = self.ppo.update(&mut self.policy, &mut self.value, batch)?;
        stats.incidents += stats.ppo.skipped;
        Ok(stats)
    }

    fn train_discriminator(&mut self, batch: &RolloutBatch, incidents: &mut usize) -> Result<Option<f64>> {
        let disc = self.discriminator.as_mut().expect("checked by caller");
        let opt = self.disc_opt.as_mut().expect("paired with discriminator");
        let half = (self.settings.disc_minibatch / 2).max(1);
        let all_policy = disc.batch_features(batch);
        let mut total = 0.0;
        let mut done = 0usize;
        let mut order: Vec<usize> = (0..batch.len()).collect();
        for _ in 0..self.settings.n_disc {
            order.shuffle(&mut self.disc_rng);
            for rows in order.chunks(half) {
                let policy_x = all_policy.select(Axis(0), rows);
                let buffer_x = disc.features(&self.buffer.sample(rows.len(), &mut self.disc_rng)?);
                match disc.train_step(policy_x.view(), buffer_x.view(), opt) {
                    Ok(v) => {
                        total += v;
                        done += 1;
                    }
                    Err(Error::NonFinite(_)) => *incidents += 1,
                    Err(e) => return Err(e),
                }
            }
        }
        Ok((done > 0).then(|| total / done as f64))
    }
}

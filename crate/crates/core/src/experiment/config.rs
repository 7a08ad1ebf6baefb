use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::env::EnvConfig;
use crate::gasil::{AgentKind, GasilSettings};
use crate::ppo::PpoConfig;
use crate::rollout::RewardMode;
use crate::{Error, Result};

/// Linear ramp of the discriminator reward scale from 0 (at `start_step`)
/// to `alpha` (at `end_step`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaRamp {
    pub start_step: usize,
    pub end_step: usize,
}

/// Everything that determines a run. Same config, same outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub agent: AgentKind,
    pub seed: u64,
    pub total_steps: usize,
    pub horizon: usize,
    pub hidden: Vec<usize>,
    pub epochs: usize,
    pub minibatch_size: usize,
    pub gamma: f64,
    pub gae_lambda: f64,
    pub entropy_coef: f64,
    pub policy_lr: f64,
    pub clip: f64,
    pub value_coef: f64,
    pub max_grad_norm: f64,
    pub disc_minibatch: usize,
    pub n_disc: usize,
    pub disc_lr: f64,
    pub buffer_capacity: usize,
    pub alpha: f64,
    pub alpha_ramp: Option<AlphaRamp>,
    pub reward_mode: RewardMode,
    pub eval_interval: usize,
    pub eval_episodes: usize,
    pub eval_deterministic: bool,
    /// Runs with more numeric incidents than this are reported as failed.
    pub max_incidents: usize,
    pub output_dir: Option<PathBuf>,
    pub env: EnvConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            agent: AgentKind::PpoGasil,
            seed: 0,
            total_steps: 204_800,
            horizon: 2048,
            hidden: vec![64, 64],
            epochs: 10,
            minibatch_size: 64,
            gamma: 0.99,
            gae_lambda: 0.95,
            entropy_coef: 0.0,
            policy_lr: 3e-4,
            clip: 0.2,
            value_coef: 0.5,
            max_grad_norm: 0.5,
            disc_minibatch: 128,
            n_disc: 5,
            disc_lr: 1e-4,
            buffer_capacity: 1000,
            alpha: 0.1,
            alpha_ramp: None,
            reward_mode: RewardMode::Combined,
            eval_interval: 10,
            eval_episodes: 10,
            eval_deterministic: true,
            max_incidents: 100,
            output_dir: None,
            env: EnvConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let c: Self = toml::from_str(text).map_err(|e| Error::Format {
            what: "experiment config",
            reason: e.to_string(),
        })?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("experiment config serializes")
    }

    /// Hex SHA-256 of the canonical TOML rendering, ignoring `output_dir`.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output_dir = None;
        let digest = Sha256::digest(c.to_toml_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn iterations(&self) -> usize {
        self.total_steps / self.horizon
    }

    pub fn ppo_config(&self) -> PpoConfig {
        PpoConfig {
            clip: self.clip,
            epochs: self.epochs,
            minibatch_size: self.minibatch_size,
            learning_rate: self.policy_lr,
            value_coef: self.value_coef,
            entropy_coef: self.entropy_coef,
            max_grad_norm: self.max_grad_norm,
        }
    }

    pub fn gasil_settings(&self) -> GasilSettings {
        GasilSettings {
            n_disc: self.n_disc,
            disc_minibatch: self.disc_minibatch,
            disc_lr: self.disc_lr,
            alpha: self.alpha_at(0),
            mode: self.reward_mode,
            buffer_capacity: self.buffer_capacity,
        }
    }

    /// Discriminator reward scale after `env_steps` steps.
    pub fn alpha_at(&self, env_steps: usize) -> f64 {
        match self.alpha_ramp {
            None => self.alpha,
            Some(r) if env_steps <= r.start_step => 0.0,
            Some(r) if env_steps >= r.end_step => self.alpha,
            Some(r) => self.alpha * (env_steps - r.start_step) as f64 / (r.end_step - r.start_step) as f64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::config("horizon", "must be positive"));
        }
        if self.total_steps == 0 || !self.total_steps.is_multiple_of(self.horizon) {
            return Err(Error::config(
                "total_steps",
                format!("{} is not a positive multiple of horizon {}", self.total_steps, self.horizon),
            ));
        }
        if self.hidden.is_empty() || self.hidden.contains(&0) {
            return Err(Error::config("hidden", "need at least one positive hidden size"));
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(Error::config("gamma", "must lie in (0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.gae_lambda) {
            return Err(Error::config("gae_lambda", "must lie in [0, 1]"));
        }
        self.ppo_config().validate().map_err(|e| match e {
            Error::Config { field, reason } if field == "learning_rate" => Error::Config {
                field: "policy_lr".into(),
                reason,
            },
            other => other,
        })?;
        if self.disc_minibatch < 2 {
            return Err(Error::config("disc_minibatch", "must be at least 2"));
        }
        if !(self.disc_lr > 0.0) {
            return Err(Error::config("disc_lr", "must be positive"));
        }
        if self.buffer_capacity == 0 {
            return Err(Error::config("buffer_capacity", "must be positive"));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::config("alpha", "must be a finite value >= 0"));
        }
        if let Some(r) = self.alpha_ramp
            && r.end_step <= r.start_step {
                return Err(Error::config("alpha_ramp", "end_step must exceed start_step"));
            }
        if self.eval_interval == 0 {
            return Err(Error::config("eval_interval", "must be positive"));
        }
        if self.eval_episodes == 0 {
            return Err(Error::config("eval_episodes", "must be positive"));
        }
        self.env.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_and_sit_in_the_published_grids() {
        let c = ExperimentConfig::default();
        c.validate().unwrap();
        assert_eq!(c.horizon, 2048);
        assert_eq!((c.epochs, c.minibatch_size), (10, 64));
        assert_eq!((c.gamma, c.gae_lambda, c.entropy_coef), (0.99, 0.95, 0.0));
        assert_eq!(c.disc_minibatch, 128);
        assert_eq!(c.hidden, vec![64, 64]);
        assert!([3e-4, 1e-4, 5e-5, 3e-5].contains(&c.policy_lr));
        assert!([3e-4, 1e-4, 2e-5, 1e-5].contains(&c.disc_lr));
        assert!([1, 5, 10, 20].contains(&c.n_disc));
        assert!([1000, 10000].contains(&c.buffer_capacity));
        assert!([0.02, 0.1, 0.2, 1.0].contains(&c.alpha));
    }

    #[test]
    fn total_steps_must_divide_by_horizon() {
        let c = ExperimentConfig {
            total_steps: 200_000,
            ..ExperimentConfig::default()
        };
        assert!(matches!(c.validate(), Err(Error::Config { field, .. }) if field == "total_steps"));
    }

    #[test]
    fn nested_env_errors_keep_field_name() {
        let mut c = ExperimentConfig::default();
        c.env.delay = 0;
        assert!(matches!(c.validate(), Err(Error::Config { field, .. }) if field == "delay"));
    }

    #[test]
    fn alpha_ramp_is_linear() {
        let c = ExperimentConfig {
            alpha: 0.02,
            alpha_ramp: Some(AlphaRamp {
                start_step: 2_000_000,
                end_step: 3_000_000,
            }),
            ..ExperimentConfig::default()
        };
        assert_eq!(c.alpha_at(1_000_000), 0.0);
        assert!((c.alpha_at(2_500_000) - 0.01).abs() < 1e-15);
        assert_eq!(c.alpha_at(4_000_000), 0.02);
    }

    #[test]
    fn toml_round_trip_and_hash_stability() {
        let c = ExperimentConfig {
            agent: AgentKind::Ppo,
            seed: 17,
            ..ExperimentConfig::default()
        };
        let back = ExperimentConfig::from_toml_str(&c.to_toml_string()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.hash(), c.hash());
        let other = ExperimentConfig { seed: 18, ..c.clone() };
        assert_ne!(other.hash(), c.hash());
    }
}

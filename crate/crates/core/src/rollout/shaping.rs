use serde::{Deserialize, Serialize};

use super::RolloutBatch;
use crate::gasil::Discriminator;
use crate::{Error, Result};

/// Which reward the policy optimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RewardMode {
    /// Environment reward only.
    EnvOnly,
    /// Discriminator reward `-log D` only.
    GasilOnly,
    /// `r - alpha * log D`.
    #[default]
    Combined,
}

/// Shaped reward from the env reward and the discriminator reward `-log D`.
pub fn shaped_reward(env_reward: f64, disc_reward: f64, alpha: f64, mode: RewardMode) -> f64 {
    match mode {
        RewardMode::EnvOnly => env_reward,
        RewardMode::GasilOnly => disc_reward,
        // r - alpha * log D == r + alpha * (-log D)
        RewardMode::Combined => env_reward + alpha * disc_reward,
    }
}

/// Fills `batch.shaped_rewards`. `EnvOnly` needs no discriminator.
pub fn shape_rewards(
    batch: &mut RolloutBatch,
    disc: Option<&Discriminator>,
    alpha: f64,
    mode: RewardMode,
) -> Result<()> {
    if mode == RewardMode::EnvOnly {
        batch.shaped_rewards = batch.env_rewards.clone();
        return Ok(());
    }
    let disc = disc.ok_or(Error::BufferNotReady)?;
    let disc_rewards = disc.batch_rewards(batch)?;
    batch.shaped_rewards = batch
        .env_rewards
        .iter()
        .zip(&disc_rewards)
        .map(|(&r, &d)| shaped_reward(r, d, alpha, mode))
        .collect();
    Ok(())
}

//! Environments: the 2D point-mass task and the reward/observation wrappers
//! used to build its delayed and noisy variants.

mod config;
mod point_mass;
mod wrappers;

pub use config::{EnvConfig, EnvKind};
pub use point_mass::{ObjectSpec, PointMass, PointMassConfig, PointMassState};
pub use wrappers::{DelayedReward, ObservationNoise};

use crate::Result;

/// Diagnostics attached to every step.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StepInfo {
    /// Reward before any wrapper touched it.
    pub raw_reward: f64,
    /// Objects collected so far in this episode (point mass only).
    pub objects_collected: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvStep {
    pub observation: Vec<f64>,
    pub reward: f64,
    pub done: bool,
    pub info: StepInfo,
}

/// Episodic environment with continuous actions.
///
/// After a step returns `done = true`, `step` fails with
/// [`Error::StepAfterDone`](crate::Error::StepAfterDone) until `reset` is called.
pub trait Environment: Send {
    fn observation_dim(&self) -> usize;
    fn action_dim(&self) -> usize;
    /// Actions are clipped componentwise to `[-bound, bound]` before they act.
    fn action_bound(&self) -> f64;
    fn reset(&mut self) -> Vec<f64>;
    fn step(&mut self, action: &[f64]) -> Result<EnvStep>;
}

impl<E: Environment + ?Sized> Environment for Box<E> {
    fn observation_dim(&self) -> usize {
        (**self).observation_dim()
    }
    fn action_dim(&self) -> usize {
        (**self).action_dim()
    }
    fn action_bound(&self) -> f64 {
        (**self).action_bound()
    }
    fn reset(&mut self) -> Vec<f64> {
        (**self).reset()
    }
    fn step(&mut self, action: &[f64]) -> Result<EnvStep> {
        (**self).step(action)
    }
}

/// `sum_t gamma^t r_t`.
pub fn discounted_return(rewards: &[f64], gamma: f64) -> f64 {
    let mut discount = 1.0;
    let mut total = 0.0;
    for &r in rewards {
        total += discount * r;
        discount *= gamma;
    }
    total
}

/// Clips an action componentwise to `[-bound, bound]`.
pub fn clip_action(action: &[f64], bound: f64) -> Vec<f64> {
    action.iter().map(|a| a.clamp(-bound, bound)).collect()
}

/// Maps a policy action in normalized units to the environment's range:
/// clip to `[-1, 1]`, then scale by `bound`.
pub fn scale_action(normalized: &[f64], bound: f64) -> Vec<f64> {
    normalized.iter().map(|a| a.clamp(-1.0, 1.0) * bound).collect()
}

//! Generative adversarial self-imitation learning (GASIL) on top of PPO.
//!
//! The agent keeps a buffer of its own best episodes and trains a
//! discriminator to tell those episodes apart from fresh policy rollouts.
//! The discriminator output becomes a learned shaped reward
//! `r(s, a) - alpha * log D(s, a)` that PPO then optimizes.
//!
//! Module map:
//!
//! - [`nn`]: fixed-topology MLPs with manual backprop, Adam, diagonal Gaussians.
//! - [`env`]: the 2D point-mass task plus delayed-reward and observation-noise wrappers.
//! - [`rollout`]: trajectory collection, GAE, reward shaping.
//! - [`gasil`]: the good-trajectory buffer and the discriminator.
//! - [`ppo`]: clipped-surrogate policy optimization and policy evaluation.
//! - [`experiment`]: seeded runs, sweeps, CSV records and SVG plots.

// `!(x > 0.0)` is how validation rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod env;
pub mod error;
pub mod experiment;
pub mod gasil;
pub mod nn;
pub mod ppo;
pub mod rollout;
pub mod seeding;

pub use error::{Error, Result};

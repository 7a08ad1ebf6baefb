//! Trajectory collection, generalized advantage estimation and reward shaping.

mod batch;
mod collect;
mod episode;
mod gae;
mod shaping;

pub use batch::RolloutBatch;
pub use collect::Collector;
pub use episode::{Episode, Transition};
pub use gae::{compute_gae, normalize_advantages};
pub use shaping::{RewardMode, shape_rewards, shaped_reward};

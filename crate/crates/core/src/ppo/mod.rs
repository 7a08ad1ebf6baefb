//! Clipped-surrogate policy optimization over (possibly shaped) rewards, and
//! policy evaluation on raw environment returns.

mod evaluate;
mod update;

pub use evaluate::{Evaluation, evaluate_policy};
pub use update::{
    MinibatchGrad, PpoConfig, PpoLearner, UpdateStats, clipped_surrogate, policy_objective_grad,
};

//! Self-imitation machinery: the good-trajectory buffer, the discriminator
//! trained to separate buffer data from fresh policy data, and the agent
//! iteration that ties them to PPO.

mod agent;
mod buffer;
mod discriminator;
pub mod snapshot;

pub use agent::{Agent, AgentKind, GasilSettings, IterationStats};
pub use buffer::GoodTrajectoryBuffer;
pub use discriminator::{D_CLAMP, Discriminator, StateActionPair};

//! Independent, reproducible random streams.
//!
//! Every consumer of randomness in a run draws from its own ChaCha stream so
//! that adding or removing one consumer (for example the discriminator) never
//! shifts the numbers seen by another.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Stream identifiers used by the experiment driver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    PolicyInit = 1,
    ValueInit = 2,
    DiscriminatorInit = 3,
    TrainEnv = 4,
    ActionSampling = 5,
    Minibatches = 6,
    BufferSampling = 7,
    EvalEnv = 8,
    EvalActions = 9,
}

pub fn stream(seed: u64, stream: Stream) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

/// Derives a child seed for sub-components (for example a wrapper inside an env).
pub fn child_seed(seed: u64, salt: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

//! Feeds random episodes to the good-trajectory buffer and watches its
//! lowest stored return rise.
//!
//! ```text
//! cargo run --release --example buffer
//! ```

use gasil::gasil::GoodTrajectoryBuffer;
use gasil::rollout::{Episode, Transition};
use gasil::seeding::Rng;
use rand::{Rng as _, SeedableRng};

fn main() -> gasil::Result<()> {
    let mut rng = Rng::seed_from_u64(1);
    let mut buffer = GoodTrajectoryBuffer::new(1000);
    for iteration in 0..20 {
        let batch: Vec<Episode> = (0..8)
            .map(|_| {
                let len = rng.random_range(50..200);
                let transitions = (0..len)
                    .map(|_| Transition {
                        observation: vec![rng.random(), rng.random()],
                        action: vec![rng.random_range(-1.0..1.0)],
                        reward: rng.random_range(-1.0..1.0),
                    })
                    .collect();
                Episode::new(transitions, true, 0.99)
            })
            .collect();
        buffer.update(batch);
        println!(
            "iteration {iteration:>2}: {} episodes, {:>4} steps, min return {:>6.3}, max {:>6.3}",
            buffer.len(),
            buffer.total_steps(),
            buffer.min_return().unwrap_or(f64::NAN),
            buffer.max_return().unwrap_or(f64::NAN)
        );
    }
    let sample = buffer.sample(4, &mut rng)?;
    println!("sampled {} state-action pairs, first obs {:?}", sample.len(), sample[0].observation);
    Ok(())
}

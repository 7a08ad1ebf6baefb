//! Trains the discriminator to separate two state-action clouds, then shows
//! the imitation reward it assigns to each.
//!
//! ```text
//! cargo run --release --example discriminator
//! ```

use gasil::gasil::Discriminator;
use gasil::nn::Adam;
use gasil::seeding::Rng;
use ndarray::Array2;
use rand::SeedableRng;
use rand_distr::{Distribution, Normal};

fn main() -> gasil::Result<()> {
    let mut rng = Rng::seed_from_u64(5);
    let noise = Normal::new(0.0, 0.3).expect("valid std");
    // Features are 2 observation dims followed by 1 normalized action dim.
    let mut cloud = |centre: f64, n: usize| Array2::from_shape_fn((n, 3), |_| centre + noise.sample(&mut rng));
    let policy = cloud(-1.0, 64);
    let good = cloud(1.0, 64);

    let mut disc = Discriminator::new(2, 1, &[32, 32], 1.0, &mut rng)?;
    let mut opt = Adam::new(disc.net.param_count(), 1e-3);
    for step in 0..=200 {
        let objective = disc.train_step(policy.view(), good.view(), &mut opt)?;
        if step % 50 == 0 {
            let acc = disc.accuracy(policy.view(), good.view())?;
            println!("step {step:>3}: objective {objective:>8.4}, accuracy {acc:.3}");
        }
    }
    let mean_reward = |x: &Array2<f64>| -> gasil::Result<f64> {
        let logits = disc.logits(x.view())?;
        // -log D = softplus(-z)
        Ok(logits.iter().map(|z| (-z).max(0.0) + (-z.abs()).exp().ln_1p()).sum::<f64>() / logits.len() as f64)
    };
    println!(
        "imitation reward -log D: policy-like {:.3}, buffer-like {:.3}",
        mean_reward(&policy)?,
        mean_reward(&good)?
    );
    Ok(())
}

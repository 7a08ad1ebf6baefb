//! Shows the delay wrapper holding rewards back and releasing their sum.
//!
//! ```text
//! cargo run --release --example delayed_reward
//! ```

use gasil::env::{DelayedReward, Environment, PointMass, PointMassConfig};

fn main() -> gasil::Result<()> {
    let config = PointMassConfig {
        start_jitter: 0.0,
        ..PointMassConfig::default()
    };
    let delay = 20;
    let mut raw = PointMass::new(config.clone(), 3);
    let mut wrapped = DelayedReward::new(PointMass::new(config, 3), delay)?;
    raw.reset();
    wrapped.reset();
    // Head straight up; the path crosses several objects.
    let action = [0.0, 0.05];
    let (mut raw_sum, mut wrapped_sum) = (0.0, 0.0);
    loop {
        let r = raw.step(&action)?;
        let w = wrapped.step(&action)?;
        raw_sum += r.reward;
        wrapped_sum += w.reward;
        if w.reward != 0.0 {
            println!("step {:>3}: released {:>8.4}", raw.state().steps, w.reward);
        }
        if r.done {
            break;
        }
    }
    println!("raw total {raw_sum:.6}, wrapped total {wrapped_sum:.6} (delay {delay})");
    Ok(())
}

//! Drives the point mass with a scripted controller and prints each event.
//!
//! ```text
//! cargo run --release --example point_mass
//! ```

use gasil::env::{Environment, PointMass, PointMassConfig};

/// Velocity command toward `target`, capped at `speed` per axis.
fn toward(from: [f64; 2], target: [f64; 2], speed: f64) -> Vec<f64> {
    vec![
        (target[0] - from[0]).clamp(-speed, speed),
        (target[1] - from[1]).clamp(-speed, speed),
    ]
}

fn main() -> gasil::Result<()> {
    let config = PointMassConfig {
        start_jitter: 0.0,
        ..PointMassConfig::default()
    };
    let route: Vec<[f64; 2]> = config
        .objects
        .iter()
        .filter(|o| o.value > 0.0)
        .map(|o| o.position)
        .collect();
    let mut env = PointMass::new(config, 0);
    env.reset();
    let (mut total, mut leg) = (0.0, 0);
    loop {
        let pos = env.state().position;
        if leg < route.len() && (pos[0] - route[leg][0]).hypot(pos[1] - route[leg][1]) < 0.03 {
            leg += 1;
        }
        let action = match route.get(leg) {
            Some(&target) => toward(pos, target, env.action_bound()),
            None => vec![0.0, 0.0],
        };
        let step = env.step(&action)?;
        total += step.reward;
        if step.reward.abs() > 1.0 {
            println!(
                "step {:>3}: reward {:>6.2} at ({:.2}, {:.2})",
                env.state().steps,
                step.reward,
                env.state().position[0],
                env.state().position[1]
            );
        }
        if step.done {
            break;
        }
    }
    println!("episode return {total:.3}");
    Ok(())
}

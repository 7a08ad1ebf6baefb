//! Trains one agent on the point mass and prints its learning curve.
//!
//! ```text
//! cargo run --release --example train_once -- ppo_gasil 3
//! ```

use gasil::experiment::{ExperimentConfig, run_experiment};
use gasil::gasil::AgentKind;

fn main() -> gasil::Result<()> {
    let mut args = std::env::args().skip(1);
    let agent = match args.next().as_deref() {
        Some("ppo") => AgentKind::Ppo,
        _ => AgentKind::PpoGasil,
    };
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let config = ExperimentConfig {
        agent,
        seed,
        ..ExperimentConfig::default()
    };
    let out = run_experiment(&config)?;
    for row in &out.record.rows {
        if let Some(ret) = row.eval_return {
            println!(
                "{:>7} steps  eval {:>7.3}  buffer min {:>7.3}",
                row.env_steps,
                ret,
                row.buffer_min_return.unwrap_or(f64::NAN)
            );
        }
    }
    println!("{} seed {seed}: {:.1}s", agent.name(), out.record.meta.wall_clock_secs);
    Ok(())
}

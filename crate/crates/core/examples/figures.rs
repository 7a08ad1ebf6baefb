//! Trains both agents on the point mass, then writes learning curves and the
//! three-panel policy/buffer/discriminator view.
//!
//! ```text
//! cargo run --release --example figures -- [output_dir] [total_steps]
//! ```

use std::path::PathBuf;

use gasil::experiment::{ExperimentConfig, render_curves, render_pointmass_snapshot, run_experiment};
use gasil::gasil::AgentKind;

fn main() -> gasil::Result<()> {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "figures".into()));
    let total_steps = args.next().and_then(|s| s.parse().ok()).unwrap_or(61_440);
    std::fs::create_dir_all(&dir).map_err(|e| gasil::Error::io(&dir, e))?;

    let mut records = Vec::new();
    let mut gasil_run = None;
    for agent in [AgentKind::Ppo, AgentKind::PpoGasil] {
        for seed in 0..2 {
            let config = ExperimentConfig {
                agent,
                seed,
                total_steps,
                eval_interval: 5,
                ..ExperimentConfig::default()
            };
            let out = run_experiment(&config)?;
            records.push(out.record.clone());
            if agent == AgentKind::PpoGasil && seed == 0 {
                gasil_run = Some((config, out.agent));
            }
        }
    }

    let curves = dir.join("curves.svg");
    std::fs::write(&curves, render_curves(&records)?).map_err(|e| gasil::Error::io(&curves, e))?;

    let (config, agent) = gasil_run.expect("trained above");
    let disc = agent.discriminator.as_ref().expect("imitation agent has a discriminator");
    let view = render_pointmass_snapshot(&config.env, &agent.policy, &agent.buffer, disc, 16, 5, config.seed)?;
    let snapshot = dir.join("snapshot.svg");
    std::fs::write(&snapshot, &view.svg).map_err(|e| gasil::Error::io(&snapshot, e))?;
    if let Some((on, off)) = view.trajectory_contrast(0.1) {
        println!("discriminator reward near buffer paths {on:.3}, elsewhere {off:.3}");
    }
    println!("wrote {} and {}", curves.display(), snapshot.display());
    Ok(())
}

//! Seed-paired comparison of PPO and PPO+GASIL under one config.
//!
//! ```text
//! cargo run --release --example compare -- [config.toml] [seeds]
//! ```
//!
//! The config file may set any experiment field; `agent` and `seed` are
//! overridden per run.

use std::path::Path;

use gasil::experiment::{ExperimentConfig, run_experiment};
use gasil::gasil::AgentKind;

fn main() -> gasil::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let base = match args.first() {
        Some(path) if path.ends_with(".toml") => ExperimentConfig::load(Path::new(path))?,
        _ => ExperimentConfig::default(),
    };
    let seeds: u64 = args.iter().find_map(|a| a.parse().ok()).unwrap_or(3);

    let mut wins = 0;
    let (mut sum_ppo, mut sum_gasil) = (0.0, 0.0);
    for seed in 0..seeds {
        let mut finals = [0.0; 2];
        for (slot, agent) in [AgentKind::Ppo, AgentKind::PpoGasil].into_iter().enumerate() {
            let config = ExperimentConfig {
                agent,
                seed,
                output_dir: None,
                ..base.clone()
            };
            let record = run_experiment(&config)?.record;
            finals[slot] = record.final_eval_return().unwrap_or(f64::NAN);
        }
        wins += usize::from(finals[1] > finals[0]);
        sum_ppo += finals[0];
        sum_gasil += finals[1];
        println!("seed {seed:>2}: ppo {:>8.3}  ppo_gasil {:>8.3}", finals[0], finals[1]);
    }
    let n = seeds as f64;
    println!(
        "mean: ppo {:.3}  ppo_gasil {:.3}  gasil wins {wins}/{seeds}",
        sum_ppo / n,
        sum_gasil / n
    );
    Ok(())
}

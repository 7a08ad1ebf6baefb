//! A short grid over discriminator updates per batch, two seeds each.
//!
//! ```text
//! cargo run --release --example sweep -- [output_dir]
//! ```

use std::path::PathBuf;

use gasil::experiment::{ExperimentConfig, SweepAxis, run_sweep, sweep_summary_csv};

fn main() -> gasil::Result<()> {
    let output_dir = std::env::args().nth(1).map(PathBuf::from);
    let base = ExperimentConfig {
        total_steps: 20_480,
        eval_interval: 5,
        output_dir,
        ..ExperimentConfig::default()
    };
    let runs = run_sweep(&base, SweepAxis::NDisc, &[1.0, 5.0, 10.0, 20.0], &[0, 1])?;
    print!("{}", sweep_summary_csv(SweepAxis::NDisc, &runs));
    Ok(())
}

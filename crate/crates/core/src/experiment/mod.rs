//! Seeded experiment driver: full training runs, grid sweeps, CSV run
//! records and SVG figures.

mod config;
mod plot;
mod record;
mod run;
mod snapshot_view;
mod sweep;

pub use config::{AlphaRamp, ExperimentConfig};
pub use plot::render_curves;
pub use record::{CSV_HEADER, RunMeta, RunRecord, Row, parse_csv};
pub use run::{RunOutput, run_experiment};
pub use snapshot_view::{SnapshotView, render_pointmass_snapshot};
pub use sweep::{SweepAxis, SweepRun, run_sweep, sweep_summary_csv};

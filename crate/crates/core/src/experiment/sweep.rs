use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::run::write_file;
use super::{ExperimentConfig, RunRecord, run_experiment};
use crate::{Error, Result};

/// Config field a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    BufferCapacity,
    NDisc,
    Alpha,
    ObsNoise,
    Delay,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::BufferCapacity => "buffer_capacity",
            SweepAxis::NDisc => "n_disc",
            SweepAxis::Alpha => "alpha",
            SweepAxis::ObsNoise => "obs_noise",
            SweepAxis::Delay => "delay",
        }
    }

    /// Returns a copy of `base` with this axis set to `value`.
    pub fn apply(self, base: &ExperimentConfig, value: f64) -> Result<ExperimentConfig> {
        let mut c = base.clone();
        let count = || {
            if value >= 0.0 && value.fract() == 0.0 {
                Ok(value as usize)
            } else {
                Err(Error::config(self.name(), format!("{value} is not a whole number")))
            }
        };
        match self {
            SweepAxis::BufferCapacity => c.buffer_capacity = count()?,
            SweepAxis::NDisc => c.n_disc = count()?,
            SweepAxis::Alpha => c.alpha = value,
            SweepAxis::ObsNoise => c.env.obs_noise = value,
            SweepAxis::Delay => c.env.delay = count()?,
        }
        c.validate()?;
        Ok(c)
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            SweepAxis::BufferCapacity,
            SweepAxis::NDisc,
            SweepAxis::Alpha,
            SweepAxis::ObsNoise,
            SweepAxis::Delay,
        ]
        .into_iter()
        .find(|a| a.name() == s)
        .ok_or_else(|| Error::Usage(format!("unknown sweep axis {s:?}")))
    }
}

#[derive(Debug, Clone)]
pub struct SweepRun {
    pub value: f64,
    pub seed: u64,
    /// The run's record, or the error that stopped it.
    pub outcome: std::result::Result<RunRecord, String>,
}

impl SweepRun {
    pub fn record(&self) -> Option<&RunRecord> {
        self.outcome.as_ref().ok()
    }
}

/// Runs every `(value, seed)` combination, in parallel, returning results in
/// value-major order. Each run writes to `<output_dir>/<axis>=<value>/seed=<seed>`
/// when the base config has an output directory, and the summary lands in
/// `<output_dir>/summary.csv`. A failing run is recorded and the rest carry on.
pub fn run_sweep(base: &ExperimentConfig, axis: SweepAxis, values: &[f64], seeds: &[u64]) -> Result<Vec<SweepRun>> {
    if values.is_empty() || seeds.is_empty() {
        return Err(Error::Usage("a sweep needs at least one value and one seed".into()));
    }
    let mut jobs = Vec::with_capacity(values.len() * seeds.len());
    for &value in values {
        for &seed in seeds {
            let mut c = axis.apply(base, value)?;
            c.seed = seed;
            c.output_dir = base
                .output_dir
                .as_ref()
                .map(|d| d.join(format!("{}={value}", axis.name())).join(format!("seed={seed}")));
            jobs.push((value, seed, c));
        }
    }
    let runs: Vec<SweepRun> = jobs
        .into_par_iter()
        .map(|(value, seed, c)| SweepRun {
            value,
            seed,
            outcome: run_experiment(&c).map(|out| out.record).map_err(|e| e.to_string()),
        })
        .collect();
    if let Some(dir) = &base.output_dir {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        write_file(&dir.join("summary.csv"), sweep_summary_csv(axis, &runs).as_bytes())?;
    }
    Ok(runs)
}

/// One line per run: axis value, seed, final evaluation return and incidents.
pub fn sweep_summary_csv(axis: SweepAxis, runs: &[SweepRun]) -> String {
    let mut out = format!("{},seed,status,final_eval_return,total_incidents\n", axis.name());
    for r in runs {
        let _ = match &r.outcome {
            Ok(rec) => writeln!(
                out,
                "{},{},ok,{},{}",
                r.value,
                r.seed,
                rec.final_eval_return().map(|v| v.to_string()).unwrap_or_default(),
                rec.total_incidents()
            ),
            Err(_) => writeln!(out, "{},{},failed,,", r.value, r.seed),
        };
    }
    out
}

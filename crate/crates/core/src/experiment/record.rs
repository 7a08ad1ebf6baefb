use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Column order of the per-iteration CSV. Identical for both agents; columns
/// that do not apply to a run are left empty.
pub const CSV_HEADER: &str = "iteration,env_steps,eval_return,train_return,episodes,buffer_episodes,\
buffer_steps,buffer_min_return,buffer_mean_return,buffer_max_return,disc_objective,\
surrogate,value_loss,entropy,clip_fraction,approx_kl,incidents";

/// One line of the run CSV.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Row {
    pub iteration: usize,
    pub env_steps: usize,
    pub eval_return: Option<f64>,
    /// Mean undiscounted return of the episodes that finished in this batch.
    pub train_return: Option<f64>,
    pub episodes: usize,
    pub buffer_episodes: usize,
    pub buffer_steps: usize,
    pub buffer_min_return: Option<f64>,
    pub buffer_mean_return: Option<f64>,
    pub buffer_max_return: Option<f64>,
    pub disc_objective: Option<f64>,
    pub surrogate: f64,
    pub value_loss: f64,
    pub entropy: f64,
    pub clip_fraction: f64,
    pub approx_kl: f64,
    pub incidents: usize,
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn parse_opt(field: &str) -> Result<Option<f64>> {
    if field.is_empty() {
        Ok(None)
    } else {
        parse_f64(field).map(Some)
    }
}

fn parse_f64(field: &str) -> Result<f64> {
    field.parse().map_err(|_| Error::Format {
        what: "run csv",
        reason: format!("bad number {field:?}"),
    })
}

fn parse_usize(field: &str) -> Result<usize> {
    field.parse().map_err(|_| Error::Format {
        what: "run csv",
        reason: format!("bad integer {field:?}"),
    })
}

impl Row {
    /// Float fields use Rust's shortest round-trip formatting, so equal runs
    /// produce equal bytes.
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.iteration,
            self.env_steps,
            opt(self.eval_return),
            opt(self.train_return),
            self.episodes,
            self.buffer_episodes,
            self.buffer_steps,
            opt(self.buffer_min_return),
            opt(self.buffer_mean_return),
            opt(self.buffer_max_return),
            opt(self.disc_objective),
            self.surrogate,
            self.value_loss,
            self.entropy,
            self.clip_fraction,
            self.approx_kl,
            self.incidents,
        )
    }

    pub fn from_csv_line(line: &str) -> Result<Self> {
        let f: Vec<&str> = line.trim_end().split(',').collect();
        if f.len() != 17 {
            return Err(Error::Format {
                what: "run csv",
                reason: format!("expected 17 fields, found {}", f.len()),
            });
        }
        Ok(Self {
            iteration: parse_usize(f[0])?,
            env_steps: parse_usize(f[1])?,
            eval_return: parse_opt(f[2])?,
            train_return: parse_opt(f[3])?,
            episodes: parse_usize(f[4])?,
            buffer_episodes: parse_usize(f[5])?,
            buffer_steps: parse_usize(f[6])?,
            buffer_min_return: parse_opt(f[7])?,
            buffer_mean_return: parse_opt(f[8])?,
            buffer_max_return: parse_opt(f[9])?,
            disc_objective: parse_opt(f[10])?,
            surrogate: parse_f64(f[11])?,
            value_loss: parse_f64(f[12])?,
            entropy: parse_f64(f[13])?,
            clip_fraction: parse_f64(f[14])?,
            approx_kl: parse_f64(f[15])?,
            incidents: parse_usize(f[16])?,
        })
    }
}

/// Run metadata that is not a deterministic function of the config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub agent: String,
    pub seed: u64,
    pub config_hash: String,
    pub wall_clock_secs: f64,
    pub total_incidents: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub rows: Vec<Row>,
    pub meta: RunMeta,
}

impl RunRecord {
    /// Reads `run.csv` and `meta.json` from a run directory.
    pub fn load(dir: &Path) -> Result<Self> {
        let read = |name: &str| {
            let path = dir.join(name);
            std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))
        };
        let rows = parse_csv(&read("run.csv")?)?;
        let meta = serde_json::from_str(&read("meta.json")?).map_err(|e| Error::Format {
            what: "run metadata",
            reason: e.to_string(),
        })?;
        Ok(Self { rows, meta })
    }

    pub fn to_csv(&self) -> String {
        csv_text(&self.rows)
    }

    /// Last recorded evaluation return.
    pub fn final_eval_return(&self) -> Option<f64> {
        self.rows.iter().rev().find_map(|r| r.eval_return)
    }

    /// `(env_steps, eval_return)` for every evaluated iteration.
    pub fn eval_curve(&self) -> Vec<(f64, f64)> {
        eval_curve(&self.rows)
    }

    pub fn total_incidents(&self) -> usize {
        self.rows.iter().map(|r| r.incidents).sum()
    }
}

pub(crate) fn csv_text(rows: &[Row]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{}", r.to_csv_line());
    }
    out
}

pub(crate) fn eval_curve(rows: &[Row]) -> Vec<(f64, f64)> {
    rows.iter()
        .filter_map(|r| r.eval_return.map(|e| (r.env_steps as f64, e)))
        .collect()
}

/// Parses a run CSV back into rows.
pub fn parse_csv(text: &str) -> Result<Vec<Row>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim_end() == CSV_HEADER => {}
        _ => {
            return Err(Error::Format {
                what: "run csv",
                reason: "missing or unexpected header".into(),
            });
        }
    }
    lines.filter(|l| !l.trim().is_empty()).map(Row::from_csv_line).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_rows_have_the_same_width() {
        let line = Row::default().to_csv_line();
        assert_eq!(line.split(',').count(), CSV_HEADER.split(',').count());
    }

    #[test]
    fn rows_round_trip() {
        let row = Row {
            iteration: 3,
            env_steps: 8192,
            eval_return: Some(-1.25),
            train_return: None,
            episodes: 16,
            buffer_min_return: Some(0.1 + 0.2),
            disc_objective: Some(-1.3862943611198906),
            surrogate: 1e-17,
            incidents: 2,
            ..Row::default()
        };
        let text = csv_text(std::slice::from_ref(&row));
        assert_eq!(parse_csv(&text).unwrap(), vec![row]);
    }
}

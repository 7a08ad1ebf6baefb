use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use super::record::{Row, RunMeta, RunRecord};
use super::{CSV_HEADER, ExperimentConfig};
use crate::gasil::{Agent, snapshot};
use crate::nn::checkpoint;
use crate::ppo::evaluate_policy;
use crate::rollout::Collector;
use crate::seeding::{self, Stream, child_seed};
use crate::{Error, Result};

/// A finished run: its record and the trained agent.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub record: RunRecord,
    pub agent: Agent,
}

struct CsvSink {
    out: BufWriter<File>,
    path: std::path::PathBuf,
}

impl CsvSink {
    fn create(path: &Path) -> Result<Self> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut sink = Self {
            out: BufWriter::new(file),
            path: path.to_path_buf(),
        };
        sink.line(CSV_HEADER)?;
        Ok(sink)
    }

    fn line(&mut self, line: &str) -> Result<()> {
        writeln!(self.out, "{line}")
            .and_then(|_| self.out.flush())
            .map_err(|e| Error::io(&self.path, e))
    }
}

/// Trains one agent for `total_steps / horizon` iterations.
///
/// With `output_dir` set, writes `run.csv` row by row as iterations finish,
/// then `policy.bin`, `value.bin`, `discriminator.bin` (imitation agent
/// only), `buffer.bin`, `config.toml` and `meta.json`. Everything except
/// the wall-clock field in `meta.json` is a pure function of the config.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunOutput> {
    config.validate()?;
    let started = Instant::now();
    let seed = config.seed;
    let env = config.env.build(child_seed(seed, Stream::TrainEnv as u64))?;
    let (obs_dim, act_dim, bound) = (env.observation_dim(), env.action_dim(), env.action_bound());
    let mut agent = Agent::new(
        config.agent,
        obs_dim,
        act_dim,
        bound,
        &config.hidden,
        config.ppo_config(),
        config.gasil_settings(),
        config.gamma,
        config.gae_lambda,
        seed,
    )?;
    let mut collector = Collector::new(env, seeding::stream(seed, Stream::ActionSampling), config.gamma);
    let mut eval_rng = seeding::stream(seed, Stream::EvalActions);

    let mut sink = match &config.output_dir {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            // Saved without its own location so copies of a run stay identical.
            let portable = ExperimentConfig {
                output_dir: None,
                ..config.clone()
            };
            write_file(&dir.join("config.toml"), portable.to_toml_string().as_bytes())?;
            Some(CsvSink::create(&dir.join("run.csv"))?)
        }
        None => None,
    };

    let iterations = config.iterations();
    let mut rows = Vec::with_capacity(iterations);
    for it in 0..iterations {
        let steps_before = it * config.horizon;
        agent.settings.alpha = config.alpha_at(steps_before);
        let (mut batch, completed) = collector.collect(&agent.policy, &agent.value, config.horizon)?;
        let episodes = completed.len();
        let train_return =
            (episodes > 0).then(|| completed.iter().map(|e| e.total_reward()).sum::<f64>() / episodes as f64);
        let stats = agent.iterate(&mut batch, completed)?;

        let env_steps = steps_before + config.horizon;
        let eval_return = if (it + 1) % config.eval_interval == 0 || it + 1 == iterations {
            // A fresh evaluation environment each time, so every evaluation
            // of a run faces the same start states.
            let mut eval_env = config.env.build(child_seed(seed, Stream::EvalEnv as u64))?;
            let ev = evaluate_policy(
                eval_env.as_mut(),
                &agent.policy,
                config.eval_episodes,
                &mut eval_rng,
                config.eval_deterministic,
            )?;
            Some(ev.mean_return)
        } else {
            None
        };

        let row = Row {
            iteration: it,
            env_steps,
            eval_return,
            train_return,
            episodes,
            buffer_episodes: agent.buffer.len(),
            buffer_steps: agent.buffer.total_steps(),
            buffer_min_return: agent.buffer.min_return(),
            buffer_mean_return: agent.buffer.mean_return(),
            buffer_max_return: agent.buffer.max_return(),
            disc_objective: stats.disc_objective,
            surrogate: stats.ppo.surrogate,
            value_loss: stats.ppo.value_loss,
            entropy: stats.ppo.entropy,
            clip_fraction: stats.ppo.clip_fraction,
            approx_kl: stats.ppo.approx_kl,
            incidents: stats.incidents,
        };
        if let Some(s) = sink.as_mut() {
            s.line(&row.to_csv_line())?;
        }
        rows.push(row);
    }

    let meta = RunMeta {
        agent: config.agent.name().to_string(),
        seed,
        config_hash: config.hash(),
        wall_clock_secs: started.elapsed().as_secs_f64(),
        total_incidents: rows.iter().map(|r| r.incidents).sum(),
    };
    if let Some(dir) = &config.output_dir {
        checkpoint::save(&dir.join("policy.bin"), &agent.policy.net, &agent.policy.log_std)?;
        checkpoint::save(&dir.join("value.bin"), &agent.value, &[])?;
        if let Some(d) = &agent.discriminator {
            checkpoint::save(&dir.join("discriminator.bin"), &d.net, &[])?;
        }
        snapshot::save(&dir.join("buffer.bin"), &agent.buffer, obs_dim, act_dim)?;
        let json = serde_json::to_string_pretty(&meta).expect("run metadata serializes");
        write_file(&dir.join("meta.json"), json.as_bytes())?;
    }
    Ok(RunOutput {
        record: RunRecord { rows, meta },
        agent,
    })
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

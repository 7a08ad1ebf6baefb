//! Command-line front end: `train`, `sweep`, `plot`, `snapshot`, `eval`.
//!
//! Exit codes: 0 success, 1 runtime error, 2 invalid configuration or usage,
//! 3 a run exceeded its numeric-incident threshold.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gasil::env::EnvKind;
use gasil::experiment::{
    ExperimentConfig, RunRecord, SweepAxis, render_curves, render_pointmass_snapshot, run_experiment, run_sweep,
    sweep_summary_csv,
};
use gasil::gasil::{AgentKind, Discriminator, snapshot};
use gasil::nn::checkpoint;
use gasil::ppo::evaluate_policy;
use gasil::rollout::RewardMode;
use gasil::seeding::{self, Stream, child_seed};
use gasil::{Error, Result};

#[derive(Parser)]
#[command(name = "gasil", version, about = "Self-imitation on top of PPO")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train one agent and write its run directory.
    Train(ConfigArgs),
    /// Run a grid over one config field and several seeds.
    Sweep {
        #[command(flatten)]
        config: ConfigArgs,
        /// buffer_capacity, n_disc, alpha, obs_noise or delay.
        #[arg(long)]
        axis: String,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        seeds: Vec<u64>,
    },
    /// Learning curves from run directories, grouped by agent.
    Plot {
        #[arg(required = true)]
        runs: Vec<PathBuf>,
        #[arg(long, short, default_value = "curves.svg")]
        out: PathBuf,
    },
    /// Policy, buffer and discriminator panels for a point-mass run.
    Snapshot {
        run: PathBuf,
        #[arg(long, default_value_t = 16)]
        resolution: usize,
        #[arg(long, default_value_t = 5)]
        rollouts: usize,
        #[arg(long, short, default_value = "snapshot.svg")]
        out: PathBuf,
    },
    /// Evaluates a run's final policy.
    Eval {
        run: PathBuf,
        #[arg(long, default_value_t = 10)]
        episodes: usize,
        /// Sample actions instead of using the policy mean.
        #[arg(long)]
        stochastic: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Flags mirror the experiment config. Values in `--config` win over flags.
#[derive(Args)]
struct ConfigArgs {
    /// TOML experiment config; its values override the flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    /// ppo or ppo_gasil.
    #[arg(long)]
    agent: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    total_steps: Option<usize>,
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    hidden: Option<Vec<usize>>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    minibatch_size: Option<usize>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    gae_lambda: Option<f64>,
    #[arg(long)]
    entropy_coef: Option<f64>,
    #[arg(long)]
    policy_lr: Option<f64>,
    #[arg(long)]
    clip: Option<f64>,
    #[arg(long)]
    value_coef: Option<f64>,
    #[arg(long)]
    max_grad_norm: Option<f64>,
    #[arg(long)]
    disc_minibatch: Option<usize>,
    #[arg(long)]
    n_disc: Option<usize>,
    #[arg(long)]
    disc_lr: Option<f64>,
    #[arg(long)]
    buffer_capacity: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    /// env_only, gasil_only or combined.
    #[arg(long)]
    reward_mode: Option<String>,
    #[arg(long)]
    eval_interval: Option<usize>,
    #[arg(long)]
    eval_episodes: Option<usize>,
    #[arg(long)]
    max_incidents: Option<usize>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long)]
    delay: Option<usize>,
    #[arg(long)]
    obs_noise: Option<f64>,
}

fn parse_named<T: serde::de::DeserializeOwned>(field: &str, value: &str) -> Result<T> {
    T::deserialize(serde::de::value::StrDeserializer::<serde::de::value::Error>::new(value))
        .map_err(|_| Error::Config {
            field: field.into(),
            reason: format!("unknown value {value:?}"),
        })
}

/// Recursively lays `over` on top of `base`.
fn overlay(base: &mut toml::Table, over: toml::Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => overlay(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

impl ConfigArgs {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let mut c = ExperimentConfig::default();
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = &self.$field {
                    c.$field = v.clone();
                }
            )*};
        }
        set!(
            seed, total_steps, horizon, hidden, epochs, minibatch_size, gamma, gae_lambda, entropy_coef, policy_lr,
            clip, value_coef, max_grad_norm, disc_minibatch, n_disc, disc_lr, buffer_capacity, alpha, eval_interval,
            eval_episodes, max_incidents
        );
        if let Some(a) = &self.agent {
            c.agent = parse_named::<AgentKind>("agent", a)?;
        }
        if let Some(m) = &self.reward_mode {
            c.reward_mode = parse_named::<RewardMode>("reward_mode", m)?;
        }
        if self.output_dir.is_some() {
            c.output_dir = self.output_dir.clone();
        }
        if let Some(d) = self.delay {
            c.env.delay = d;
        }
        if let Some(s) = self.obs_noise {
            c.env.obs_noise = s;
        }
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            let file: toml::Table = toml::from_str(&text).map_err(|e| Error::Format {
                what: "experiment config",
                reason: e.to_string(),
            })?;
            let mut merged = toml::Table::try_from(&c).expect("experiment config serializes");
            overlay(&mut merged, file);
            c = ExperimentConfig::from_toml_str(&toml::to_string(&merged).expect("table serializes"))?;
        }
        c.validate()?;
        Ok(c)
    }
}

fn check_incidents(record: &RunRecord, limit: usize) -> Option<String> {
    let n = record.total_incidents();
    (n > limit).then(|| format!("seed {}: {n} numeric incidents (limit {limit})", record.meta.seed))
}

/// Outcome of a command that completed but should still fail the process.
enum Finished {
    Ok,
    TooManyIncidents(Vec<String>),
}

fn run(cli: Cli) -> Result<Finished> {
    match cli.command {
        Command::Train(args) => {
            let config = args.resolve()?;
            let out = run_experiment(&config)?;
            let rec = &out.record;
            match rec.final_eval_return() {
                Some(r) => println!("{} seed {}: final eval return {r:.4}", rec.meta.agent, rec.meta.seed),
                None => println!("{} seed {}: no evaluation recorded", rec.meta.agent, rec.meta.seed),
            }
            if let Some(dir) = &config.output_dir {
                println!("wrote {}", dir.display());
            }
            Ok(match check_incidents(rec, config.max_incidents) {
                Some(msg) => Finished::TooManyIncidents(vec![msg]),
                None => Finished::Ok,
            })
        }
        Command::Sweep {
            config,
            axis,
            values,
            seeds,
        } => {
            let base = config.resolve()?;
            let axis: SweepAxis = axis.parse()?;
            let runs = run_sweep(&base, axis, &values, &seeds)?;
            print!("{}", sweep_summary_csv(axis, &runs));
            let mut bad = Vec::new();
            for r in &runs {
                match &r.outcome {
                    Ok(rec) => bad.extend(check_incidents(rec, base.max_incidents)),
                    Err(e) => eprintln!("{}={} seed {} failed: {e}", axis.name(), r.value, r.seed),
                }
            }
            Ok(if bad.is_empty() {
                Finished::Ok
            } else {
                Finished::TooManyIncidents(bad)
            })
        }
        Command::Plot { runs, out } => {
            let records = runs.iter().map(|d| RunRecord::load(d)).collect::<Result<Vec<_>>>()?;
            let svg = render_curves(&records)?;
            std::fs::write(&out, svg).map_err(|e| Error::io(&out, e))?;
            println!("wrote {}", out.display());
            Ok(Finished::Ok)
        }
        Command::Snapshot {
            run,
            resolution,
            rollouts,
            out,
        } => {
            let config = ExperimentConfig::load(&run.join("config.toml"))?;
            let EnvKind::PointMass = config.env.env;
            let policy = checkpoint::load(&run.join("policy.bin"))?.into_policy()?;
            let buffer = snapshot::load(&run.join("buffer.bin"))?;
            let disc_path = run.join("discriminator.bin");
            if !disc_path.exists() {
                return Err(Error::Usage(format!(
                    "{} has no discriminator checkpoint (pure PPO run?)",
                    run.display()
                )));
            }
            let disc_net = checkpoint::load(&disc_path)?.net;
            let bound = config.env.point_mass.max_speed;
            let disc = Discriminator::from_net(disc_net, buffer.obs_dim, bound)?;
            let view =
                render_pointmass_snapshot(&config.env, &policy, &buffer.buffer, &disc, resolution, rollouts, config.seed)?;
            std::fs::write(&out, &view.svg).map_err(|e| Error::io(&out, e))?;
            if let Some((on, off)) = view.trajectory_contrast(1.5 / resolution as f64) {
                println!("mean best reward near buffer {on:.4}, elsewhere {off:.4}");
            }
            println!("wrote {}", out.display());
            Ok(Finished::Ok)
        }
        Command::Eval {
            run,
            episodes,
            stochastic,
            seed,
        } => {
            let config = ExperimentConfig::load(&run.join("config.toml"))?;
            let policy = checkpoint::load(&run.join("policy.bin"))?.into_policy()?;
            let mut env = config.env.build(child_seed(seed, Stream::EvalEnv as u64))?;
            let mut rng = seeding::stream(seed, Stream::EvalActions);
            let ev = evaluate_policy(env.as_mut(), &policy, episodes, &mut rng, !stochastic)?;
            println!("mean return {:.4} over {episodes} episodes", ev.mean_return);
            for (i, r) in ev.returns.iter().enumerate() {
                println!("  episode {i}: {r:.4}");
            }
            Ok(Finished::Ok)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Finished::Ok) => ExitCode::SUCCESS,
        Ok(Finished::TooManyIncidents(msgs)) => {
            for m in msgs {
                eprintln!("error: {m}");
            }
            ExitCode::from(3)
        }
        Err(e @ (Error::Config { .. } | Error::Usage(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}


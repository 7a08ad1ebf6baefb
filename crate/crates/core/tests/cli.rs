use std::path::Path;
use std::process::{Command, Output};

fn gasil(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gasil")).args(args).output().expect("binary runs")
}

const TINY: &[&str] = &[
    "--total-steps",
    "512",
    "--horizon",
    "256",
    "--hidden",
    "8",
    "--epochs",
    "1",
    "--eval-interval",
    "1",
    "--eval-episodes",
    "1",
];

fn train(dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["train", "--output-dir", dir.to_str().unwrap()];
    args.extend_from_slice(TINY);
    args.extend_from_slice(extra);
    gasil(&args)
}

#[test]
fn invalid_config_exits_with_code_2() {
    let out = gasil(&["train", "--total-steps", "1000", "--horizon", "256"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("total_steps"));
}

#[test]
fn unknown_agent_exits_with_code_2() {
    let out = gasil(&["train", "--agent", "dqn"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.toml");
    std::fs::write(&cfg, "seed = 5\n[env]\ndelay = 3\n").unwrap();
    let run = dir.path().join("run");
    let out = train(&run, &["--seed", "3", "--obs-noise", "0.05", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(run.join("config.toml")).unwrap();
    let saved = gasil::experiment::ExperimentConfig::from_toml_str(&text).unwrap();
    assert_eq!(saved.seed, 5);
    assert_eq!(saved.env.delay, 3);
    // Flags the file does not mention still apply.
    assert_eq!(saved.env.obs_noise, 0.05);
    assert_eq!(saved.total_steps, 512);
}

#[test]
fn train_then_eval_plot_and_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let gasil_run = dir.path().join("g");
    let ppo_run = dir.path().join("p");
    assert!(train(&gasil_run, &[]).status.success());
    assert!(train(&ppo_run, &["--agent", "ppo"]).status.success());

    let out = gasil(&["eval", gasil_run.to_str().unwrap(), "--episodes", "2"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("mean return"));

    let svg = dir.path().join("curves.svg");
    let out = gasil(&[
        "plot",
        gasil_run.to_str().unwrap(),
        ppo_run.to_str().unwrap(),
        "--out",
        svg.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    roxmltree::Document::parse(&std::fs::read_to_string(&svg).unwrap()).unwrap();

    let snap = dir.path().join("snap.svg");
    let out = gasil(&[
        "snapshot",
        gasil_run.to_str().unwrap(),
        "--resolution",
        "6",
        "--out",
        snap.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    roxmltree::Document::parse(&std::fs::read_to_string(&snap).unwrap()).unwrap();

    // A pure PPO run has no discriminator to draw.
    let out = gasil(&["snapshot", ppo_run.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_writes_summary() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec![
        "sweep",
        "--output-dir",
        dir.path().to_str().unwrap(),
        "--axis",
        "n_disc",
        "--values",
        "1,5",
        "--seeds",
        "0,1",
    ];
    args.extend_from_slice(TINY);
    let out = gasil(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 5);
    assert!(dir.path().join("n_disc=5/seed=1/run.csv").exists());
}

#[test]
fn incident_threshold_exits_with_code_3() {
    // An absurd learning rate drives the networks to non-finite values; every
    // skipped step counts as an incident.
    let dir = tempfile::tempdir().unwrap();
    let out = train(dir.path(), &["--policy-lr", "1e300", "--disc-lr", "1e300", "--max-incidents", "0"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

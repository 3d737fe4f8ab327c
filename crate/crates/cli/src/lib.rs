//! Command-line workflows: noise synthesis, SDE solving, estimation, `d(H)`
//! calibration and Monte Carlo campaigns.

pub mod config;
pub mod error;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rblab_core::estimators::calibrate_table;
use rblab_core::harness::{resolve_d, run_experiment_with_d, write_campaign, ExperimentConfig};
use rblab_core::io::{
    read_path_csv, write_dir_atomically, write_json, write_path_csv, write_solution,
};
use rblab_core::noise::NoiseGenerator;
use rblab_core::report::{estimate_all, EstimationRequest};
use rblab_core::sde::solve;
use rblab_core::NoiseSpec;
use serde::Serialize;

use config::{parse_config, CalibrateConfig, EstimateConfig, SolveConfig};
use error::{CliError, CliResult, Context};

pub const THREADS_ENV: &str = "RBLAB_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "rblab",
    version,
    about = "Rosenblatt-driven SDE simulation and estimation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// JSON configuration document.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory; must not exist or be empty.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Dot-path override such as `model.noise.h=0.8`; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    pub overrides: Vec<String>,
    /// Worker threads, 0 for one per core. Falls back to RBLAB_THREADS.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed (or master seed) overriding the one in the configuration.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Synthesize one Rosenblatt or fBm path.
    SimulateNoise,
    /// Integrate one SDE trajectory.
    Solve,
    /// Run estimators on a path CSV.
    Estimate,
    /// Calibrate d(H) by Monte Carlo.
    CalibrateD {
        /// Hurst value to calibrate; repeatable, replaces `h_grid`.
        #[arg(long = "h")]
        h: Vec<f64>,
    },
    /// Run a replicated Monte Carlo campaign.
    Experiment,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::SimulateNoise => "simulate-noise",
            Command::Solve => "solve",
            Command::Estimate => "estimate",
            Command::CalibrateD { .. } => "calibrate-d",
            Command::Experiment => "experiment",
        }
    }

    /// Document key the `--seed` flag overrides.
    fn seed_key(&self) -> Option<&'static str> {
        match self {
            Command::SimulateNoise | Command::Solve => Some("seed"),
            Command::CalibrateD { .. } => Some("settings.master_seed"),
            Command::Experiment => Some("master_seed"),
            Command::Estimate => None,
        }
    }
}

/// Thread count from the flag, then the environment, then automatic.
pub fn resolve_threads(flag: Option<usize>, env: Option<&str>) -> CliResult<usize> {
    match (flag, env) {
        (Some(n), _) => Ok(n),
        (None, Some(s)) if !s.trim().is_empty() => s.trim().parse().map_err(|_| {
            CliError::Usage(format!("{THREADS_ENV}={s} is not a nonnegative integer"))
        }),
        _ => Ok(0),
    }
}

fn read_config_text(path: Option<&Path>, required: bool) -> CliResult<String> {
    match path {
        Some(p) => fs::read_to_string(p)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", p.display()))),
        None if required => Err(CliError::Usage(
            "--config is required for this command".into(),
        )),
        None => Ok("{}".into()),
    }
}

fn out_dir(global: &GlobalArgs) -> CliResult<&Path> {
    global
        .out
        .as_deref()
        .ok_or_else(|| CliError::Usage("--out is required".into()))
}

/// Parses the command's configuration and runs it on a pool with `threads` workers.
pub fn run(cli: &Cli) -> CliResult<()> {
    let env = std::env::var(THREADS_ENV).ok();
    let threads = resolve_threads(cli.global.threads, env.as_deref())?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {threads} worker threads: {e}")))?;
    pool.install(|| dispatch(&cli.command, &cli.global))
}

pub fn dispatch(command: &Command, global: &GlobalArgs) -> CliResult<()> {
    let name = command.name();
    let mut overrides = global.overrides.clone();
    if let Some(seed) = global.seed {
        let key = command
            .seed_key()
            .ok_or_else(|| CliError::Usage(format!("--seed has no effect on {name}")))?;
        overrides.push(format!("{key}={seed}"));
    }
    if let Command::CalibrateD { h } = command {
        if !h.is_empty() {
            let grid = serde_json::to_string(h).map_err(|e| CliError::Usage(e.to_string()))?;
            overrides.push(format!("h_grid={grid}"));
        }
    }
    let required = !matches!(command, Command::CalibrateD { .. });
    let text = read_config_text(global.config.as_deref(), required)?;
    let out = out_dir(global)?;

    match command {
        Command::SimulateNoise => {
            let spec: NoiseSpec = parse_config(&text, &overrides)?;
            let path = NoiseGenerator::new(&spec)
                .context(name)?
                .sample(spec.seed());
            write_dir_atomically(out, |dir| {
                write_json(&dir.join("config.json"), &spec)?;
                write_path_csv(&dir.join("noise.csv"), &path)
            })
            .context(name)
        }
        Command::Solve => {
            let cfg: SolveConfig = parse_config(&text, &overrides)?;
            let sol = solve(&cfg.model, cfg.seed).context(name)?;
            write_dir_atomically(out, |dir| {
                write_json(&dir.join("config.json"), &cfg)?;
                write_solution(dir, &sol, cfg.seed)
            })
            .context(name)
        }
        Command::Estimate => {
            let cfg: EstimateConfig = parse_config(&text, &overrides)?;
            let path = read_path_csv(&cfg.input).context(name)?;
            let req = EstimationRequest {
                estimators: cfg.estimators.clone(),
                drift: cfg.drift.clone(),
                h: cfg.h,
                sigma: cfg.sigma,
                // Only the diffusion estimator can run without `d`, and it never reads it.
                d: cfg.d.clone().unwrap_or(rblab_core::DConstant::LeadingOrder),
            };
            let report = estimate_all(&path, &req);
            if report.failures.len() == req.estimators.len() {
                let f = &report.failures[0];
                return Err(CliError::Estimation {
                    kind: f.kind.clone(),
                    message: f.message.clone(),
                });
            }
            write_dir_atomically(out, |dir| {
                write_json(&dir.join("config.json"), &cfg)?;
                write_json(&dir.join("report.json"), &report)
            })
            .context(name)
        }
        Command::CalibrateD { .. } => {
            let cfg: CalibrateConfig = parse_config(&text, &overrides)?;
            let (table, calibrations) =
                calibrate_table(&cfg.h_grid, &cfg.settings).context(name)?;
            #[derive(Serialize)]
            struct DTable<'a> {
                d: &'a rblab_core::DConstant,
                calibrations: &'a [rblab_core::estimators::DCalibration],
            }
            write_dir_atomically(out, |dir| {
                write_json(&dir.join("config.json"), &cfg)?;
                write_json(
                    &dir.join("d_table.json"),
                    &DTable {
                        d: &table,
                        calibrations: &calibrations,
                    },
                )
            })
            .context(name)
        }
        Command::Experiment => {
            let cfg: ExperimentConfig = parse_config(&text, &overrides)?;
            let d = resolve_d(&cfg).context(name)?;
            let results = run_experiment_with_d(&cfg, &d.constant).context(name)?;
            write_dir_atomically(out, |dir| {
                write_campaign(dir, &cfg, &d, &results).map(|_| ())
            })
            .context(name)
        }
    }
}

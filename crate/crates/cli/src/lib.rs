//! Command-line surface: deterministic experiment orchestration around the
//! model library, with reproducible CSV/JSON outputs and a run manifest.

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use anyhow::Result;
use clap::{Parser, Subcommand};

use config::Config;
use output::OutputDir;

#[derive(Parser, Debug)]
#[command(
    name = "dupdiff",
    version,
    about = "Curve-of-equilibria analytics and simulators for two gene-duplication models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Base configuration file (JSON; a manifest.json is accepted)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output directory (default: ./out/<command>)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Model: watterson | subfunc
    #[arg(long, global = true)]
    pub model: Option<String>,

    /// Null-mutation probability of the two-locus model
    #[arg(long, global = true)]
    pub mu: Option<f64>,

    /// Mutation rate of the six-dimensional model
    #[arg(long, global = true)]
    pub b: Option<f64>,

    /// Population size
    #[arg(long, global = true)]
    pub pop_size: Option<u32>,

    /// Comma-separated population sizes (scans)
    #[arg(long, global = true, value_delimiter = ',')]
    pub pop_sizes: Option<Vec<u32>>,

    /// Replicates of a discrete-model run
    #[arg(long, global = true)]
    pub reps: Option<u64>,

    /// Paths of a diffusion run
    #[arg(long, global = true)]
    pub paths: Option<usize>,

    /// Integrator step size
    #[arg(long, global = true)]
    pub dt: Option<f64>,

    /// Grid points
    #[arg(long, global = true)]
    pub grid: Option<usize>,

    /// RNG seed (fixed per-command default when omitted)
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Time horizon of a diffusion run
    #[arg(long, global = true)]
    pub horizon: Option<f64>,

    /// Horizon constant of the tracking experiment
    #[arg(long, global = true)]
    pub gamma: Option<f64>,

    /// Censoring cap in generations per individual of population size
    #[arg(long, global = true)]
    pub cap: Option<f64>,

    /// Start state (comma-separated coordinates)
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub start: Option<Vec<f64>>,

    /// Start coordinate of an exit-time computation
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub x0: Option<f64>,

    /// Noise multiplier of a diffusion run (0 = deterministic)
    #[arg(long, global = true)]
    pub noise_scale: Option<f64>,

    /// Verification suite: lemmas | curve | rh | ito | oracles | all
    #[arg(long, global = true)]
    pub suite: Option<String>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Sample the curve of equilibria
    Curve,
    /// Drift/variance profile of the limiting diffusion
    Coeffs,
    /// Green's-function profile of the limiting diffusion
    Green,
    /// Expected absorption time of the limiting diffusion
    ExitTime,
    /// Linearization table along the curve (subfunc model)
    Linearize,
    /// Discrete-model replicates run to absorption
    Simulate,
    /// Euler-Maruyama paths of the frequency diffusion
    Sde,
    /// Diffusion-vs-flow tracking error across population sizes
    Theorem1,
    /// Subfunctionalization-probability decay scan
    PsubScan,
    /// Property suites with a pass/fail table
    Verify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Curve => "curve",
            Command::Coeffs => "coeffs",
            Command::Green => "green",
            Command::ExitTime => "exit-time",
            Command::Linearize => "linearize",
            Command::Simulate => "simulate",
            Command::Sde => "sde",
            Command::Theorem1 => "theorem1",
            Command::PsubScan => "psub-scan",
            Command::Verify => "verify",
        }
    }

    fn default_seed(&self) -> u64 {
        match self {
            Command::Curve => 11,
            Command::Coeffs => 12,
            Command::Green => 13,
            Command::ExitTime => 14,
            Command::Linearize => 15,
            Command::Simulate => 101,
            Command::Sde => 102,
            Command::Theorem1 => 103,
            Command::PsubScan => 104,
            Command::Verify => 105,
        }
    }
}

impl Cli {
    fn flag_config(&self) -> Config {
        Config {
            model: self.model.clone(),
            mu: self.mu,
            b: self.b,
            pop_size: self.pop_size,
            pop_sizes: self.pop_sizes.clone(),
            reps: self.reps,
            paths: self.paths,
            dt: self.dt,
            grid: self.grid,
            seed: self.seed,
            horizon: self.horizon,
            gamma: self.gamma,
            cap: self.cap,
            start: self.start.clone(),
            x0: self.x0,
            noise_scale: self.noise_scale,
            suite: self.suite.clone(),
        }
    }

    /// File config overlaid by flags, then per-command defaults.
    pub fn resolve(&self) -> Result<Config> {
        let mut cfg = match &self.config {
            Some(path) => Config::from_file(path)?,
            None => Config::default(),
        };
        cfg.overlay(&self.flag_config());
        if cfg.seed.is_none() {
            cfg.seed = Some(self.command.default_seed());
        }
        Ok(cfg)
    }
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I) -> Result<i32>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    let cfg = cli.resolve()?;
    eprintln!("seed: {}", cfg.seed.unwrap());
    let out_dir = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("out").join(cli.command.name()));
    let mut out = OutputDir::create(&out_dir)?;
    let mut code = 0;
    match cli.command {
        Command::Curve => commands::data::cmd_curve(&cfg, &mut out)?,
        Command::Coeffs => commands::data::cmd_coeffs(&cfg, &mut out)?,
        Command::Green => commands::data::cmd_green(&cfg, &mut out)?,
        Command::ExitTime => {
            commands::data::cmd_exit_time(&cfg, &mut out)?;
        }
        Command::Linearize => commands::data::cmd_linearize(&cfg, &mut out)?,
        Command::Simulate => commands::sim::cmd_simulate(&cfg, &mut out)?,
        Command::Sde => commands::sim::cmd_sde(&cfg, &mut out)?,
        Command::Theorem1 => commands::sim::cmd_theorem1(&cfg, &mut out)?,
        Command::PsubScan => commands::sim::cmd_psub_scan(&cfg, &mut out)?,
        Command::Verify => {
            if !commands::verify::cmd_verify(&cfg, &mut out)? {
                code = 1;
            }
        }
    }
    out.finish(cli.command.name(), &cfg)?;
    Ok(code)
}

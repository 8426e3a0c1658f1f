//! Command-line experiment runner.
//!
//! Every command reads a JSON [`config::ExperimentConfig`], runs
//! deterministically from its master seed and writes its results with
//! temp-then-rename so a failure never leaves partial files behind.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use cqie_core::par::Execution;

use commands::{Axis, FitModelArg};
use config::ExperimentConfig;
pub use error::{CliError, Result};

/// Worker-count cap; never changes results.
pub const THREADS_ENV: &str = "CQIE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "cqie", version, about = "Simulate and analyse cooperative reset of qubit registers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the config's master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory (default: the config's output_dir, else ./results).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides the config's shot count.
    #[arg(long)]
    pub shots: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the configured protocol and summarise the readouts.
    Run(Common),
    /// Repeat `run` over values of one parameter.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        axis: Axis,
        /// Comma-separated axis values.
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        values: Vec<f64>,
    },
    /// Fit a scaling model to a sweep's scaling.csv.
    Fit {
        csv: PathBuf,
        #[arg(long, value_enum)]
        model: FitModelArg,
        /// Qubit gap in GHz (effective_temp only).
        #[arg(long = "delta-e")]
        delta_e: Option<f64>,
        /// Error rate for the n0 model: a number or a fit.json path.
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Locate the zero-field ordering transition over a range of couplings.
    LocateCritical {
        #[command(flatten)]
        common: Common,
        /// Comma-separated couplings J (at least 5).
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        values: Vec<f64>,
    },
    /// Write the configured topology as an edge list plus statistics.
    GenTopology(Common),
}

fn load(common: &Common) -> Result<(ExperimentConfig, PathBuf)> {
    let mut config = ExperimentConfig::from_path(&common.config)?;
    if let Some(seed) = common.seed {
        config.master_seed = seed;
    }
    if let Some(shots) = common.shots {
        if shots == 0 {
            return Err(CliError::config("--shots must be >= 1"));
        }
        config.shots = shots;
    }
    let out = common
        .out
        .clone()
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("results"));
    Ok((config, out))
}

/// Reads [`THREADS_ENV`].
pub fn execution_from_env() -> Result<Execution> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(Execution::Parallel),
        Ok(v) if v.trim().is_empty() => Ok(Execution::Parallel),
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(|t| Execution::with_thread_cap(Some(t)))
            .map_err(|_| CliError::config(format!("{THREADS_ENV} must be a non-negative integer, got {v:?}"))),
    }
}

/// Prints a status line; a closed stdout is not an error.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

fn show(out: &Path, what: &str) {
    say!("wrote {what} to {}", out.display());
}

pub fn dispatch(cli: Cli) -> Result<()> {
    let exec = execution_from_env()?;
    match cli.command {
        Command::Run(common) => {
            let (config, out) = load(&common)?;
            let s = commands::run(&config, &out, exec)?;
            say!(
                "F = {:.6} ± {:.6}, f = {:.6} ± {:.6}, m = {:.6}",
                s.global_fidelity.value,
                s.global_fidelity.stderr,
                s.single_qubit_fidelity.value,
                s.single_qubit_fidelity.stderr,
                s.magnetization.mean
            );
            show(&out, "run results");
        }
        Command::Sweep { common, axis, values } => {
            let (config, out) = load(&common)?;
            let failed = commands::sweep(&config, axis, &values, &out, exec)?;
            if failed > 0 {
                eprintln!("warning: {failed} of {} sweep points failed", values.len());
            }
            show(&out, "scaling.csv");
        }
        Command::Fit { csv, model, delta_e, alpha, out } => {
            let alpha = alpha.as_deref().map(commands::parse_alpha).transpose()?;
            let result = commands::fit(&csv, model, delta_e, alpha, &out)?;
            for (name, value) in &result.params {
                say!("{name} = {value} ± {}", result.stderr(name).unwrap_or(f64::NAN));
            }
            show(&out, "fit.json");
        }
        Command::LocateCritical { common, values } => {
            let (config, out) = load(&common)?;
            let s = commands::locate_critical(&config, &values, &out, exec)?;
            say!(
                "J_c = {} ± {} (coupling {} ± {})",
                s.j_c, s.j_c_uncertainty, s.coupling_c, s.coupling_c_uncertainty
            );
            show(&out, "critical.json");
        }
        Command::GenTopology(common) => {
            let (config, out) = load(&common)?;
            let s = commands::gen_topology(&config, &out)?;
            say!("{} nodes, {} edges, connectivity {:.4}", s.n, s.edges, s.connectivity);
            show(&out, "topology.edges");
        }
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

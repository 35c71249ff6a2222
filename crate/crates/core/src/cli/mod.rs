//! Experiment runner: config parsing, dispatch to the solvers and studies,
//! CSV output.

mod config;
mod run;

use std::fs;
use std::path::PathBuf;

use clap::Parser;

pub use config::{parse_config, parse_function, Command, ExperimentConfig};
pub use run::{run_experiment, Cell, CsvTable};

use crate::{Error, Result};

/// `teleheat <command> --config <path> [--mu X] [--out PATH] [--tol T]`
#[derive(Debug, Parser)]
#[command(
    name = "teleheat",
    version,
    about = "Damped wave / heat equation experiments",
    allow_negative_numbers = true
)]
pub struct Args {
    /// solve, fdm, heat, limit-study, decomposition, bessel-check or energy
    pub command: String,
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Sets both the absolute and relative quadrature tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
}

/// Reads the config file, checks it agrees with the command on the command
/// line and applies the override flags.
pub fn load(args: &Args) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(&args.config).map_err(|source| Error::Io {
        path: args.config.display().to_string(),
        source,
    })?;
    let command: Command = args.command.parse()?;
    let mut cfg = parse_config(&text)?;
    if cfg.command != command {
        return Err(Error::config(format!(
            "command line says '{command}' but {} says '{}'",
            args.config.display(),
            cfg.command
        )));
    }
    if let Some(mu) = args.mu {
        cfg.mu = mu;
    }
    if let Some(out) = &args.out {
        cfg.out_path = Some(out.clone());
    }
    if let Some(tol) = args.tol {
        cfg.quadrature.abs_tol = tol;
        cfg.quadrature.rel_tol = tol;
    }
    cfg.validate()?;
    Ok(cfg)
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ramanforge::config::ExperimentConfig;
use ramanforge::report::{
    cmd_fig1e, cmd_fig2b, cmd_run, cmd_table_s1, resolve_out_dir, RunArtifacts, RunOverrides,
};
use ramanforge::Error;

/// Dataset generators for sideband-engineered Raman driving: conversion
/// benchmarks, dispersion requirements, and pulse-sequence simulations.
#[derive(Parser)]
#[command(name = "ramanforge", version, about)]
struct Cli {
    /// Output directory (falls back to the config, then RAMANFORGE_OUT_DIR).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// RNG seed override for `run`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Shot-count override for `run`.
    #[arg(long, global = true)]
    shots: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the conversion-method comparison table (method,beta_star,T,eta,C).
    TableS1 {
        /// Dispersive curvature for the constrained row, radians.
        #[arg(long, default_value_t = 0.76)]
        alpha: f64,
        /// Cap every depth search at this value, radians.
        #[arg(long)]
        beta_max: Option<f64>,
    },
    /// Write the dispersion-requirement table for the element catalogue.
    Fig1e {
        /// Qubit frequency in Hz.
        #[arg(long, default_value_t = 6.8e9)]
        qubit_frequency_hz: f64,
    },
    /// Write the efficiency-versus-depth curve of a dispersive element.
    Fig2b {
        /// Element curvature, radians.
        #[arg(long, default_value_t = 0.76)]
        alpha: f64,
        #[arg(long, default_value_t = 0.02)]
        beta_min: f64,
        #[arg(long, default_value_t = std::f64::consts::PI)]
        beta_max: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
    /// Run the simulation described by a JSON experiment config.
    Run { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(artifacts) => {
            println!("wrote {}", artifacts.csv_path.display());
            if let Some(summary) = &artifacts.summary_path {
                println!("wrote {}", summary.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn dispatch(cli: &Cli) -> ramanforge::Result<RunArtifacts> {
    match &cli.command {
        Command::TableS1 { alpha, beta_max } => {
            let dir = resolve_out_dir(cli.out_dir.as_deref(), None);
            cmd_table_s1(&dir.join("table_s1.csv"), *alpha, *beta_max)
        }
        Command::Fig1e { qubit_frequency_hz } => {
            let dir = resolve_out_dir(cli.out_dir.as_deref(), None);
            cmd_fig1e(&dir.join("fig1e.csv"), *qubit_frequency_hz)
        }
        Command::Fig2b {
            alpha,
            beta_min,
            beta_max,
            points,
        } => {
            let dir = resolve_out_dir(cli.out_dir.as_deref(), None);
            cmd_fig2b(&dir.join("fig2b.csv"), *alpha, *beta_min, *beta_max, *points)
        }
        Command::Run { config } => {
            let config = ExperimentConfig::from_path(config)?;
            let overrides = RunOverrides {
                seed: cli.seed,
                shots: cli.shots,
                out_dir: cli.out_dir.clone(),
            };
            cmd_run(&config, &overrides)
        }
    }
}

/// 1: config validation, 2: i/o, 3: numeric failure.
fn exit_code(error: &Error) -> u8 {
    match error {
        Error::ConfigParse(_) | Error::Config(_) => 1,
        Error::Io(_) => 2,
        _ => 3,
    }
}

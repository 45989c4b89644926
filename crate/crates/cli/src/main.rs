//! `otto`: experiments on the coherent-bath Otto engine.
//!
//! Each command writes a CSV table (with a `#` metadata header) and a JSON
//! run record into the output directory.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use otto_core::sampling::DEFAULT_SEED;
use serde::Serialize;

use config::{parse_pairs, FileConfig, PairList, RunConfig};
use output::{Sink, VERSION};

#[derive(Parser)]
#[command(name = "otto", version, about = "Finite-time Otto engine with coherent atom-stream baths")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Steady-cycle report over a log grid of cycle times.
    Curve(Common),
    /// Photon number from an initial value until the steady cycle.
    Transient(Common),
    /// Maximize peak power over the stroke fractions.
    Optimize(Common),
    /// Run the property suite and print one verdict per property.
    Verify(Common),
    /// Work and peak power along the coherent family between CH and CC.
    PiSweep(Common),
}

#[derive(Args)]
struct Common {
    /// TOML experiment file; missing keys fall back to the default preset.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, env = "OTTO_OUT_DIR", default_value = "otto-out")]
    out: PathBuf,
    /// Bath pairs to run, comma separated.
    #[arg(long, value_parser = parse_pairs)]
    pairs: Option<PairList>,
    /// Grid size for the cycle-time sweep and the π sweep.
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Serialize)]
struct Rejection<'a> {
    command: &'a str,
    version: &'a str,
    status: &'a str,
    error: String,
}

fn run(name: &str, common: &Common, command: &Command) -> anyhow::Result<bool> {
    let file = match &common.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let resolved = RunConfig::resolve(file, common.pairs.clone().map(|p| p.0), common.grid, common.seed)?;
    let mut sink = Sink::new(&common.out)?;
    let result = match command {
        Command::Curve(_) => commands::curve(&resolved, &mut sink).map(|_| true),
        Command::Transient(_) => commands::transient(&resolved, &mut sink).map(|_| true),
        Command::Optimize(_) => commands::optimize(&resolved, &mut sink).map(|_| true),
        Command::Verify(_) => commands::verify(&resolved, &mut sink),
        Command::PiSweep(_) => commands::pi_sweep_cmd(&resolved, &mut sink).map(|_| true),
    };
    match result {
        Ok(ok) => {
            for path in sink.written() {
                eprintln!("wrote {}", path.display());
            }
            Ok(ok)
        }
        Err(e) => {
            let rejection = Rejection {
                command: name,
                version: VERSION,
                status: "rejected",
                error: format!("{e:#}"),
            };
            let _ = sink.json("rejected.json", &rejection);
            Err(e)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, common) = match &cli.command {
        Command::Curve(c) => ("curve", c),
        Command::Transient(c) => ("transient", c),
        Command::Optimize(c) => ("optimize", c),
        Command::Verify(c) => ("verify", c),
        Command::PiSweep(c) => ("pi-sweep", c),
    };
    match run(name, common, &cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

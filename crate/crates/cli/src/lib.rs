//! Command-line front end for the `fairdisc` library.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use clap::{Parser, Subcommand};

use commands::{IngestArgs, ScoreArgs};
use config::{RunArgs, RunConfig};
use error::CliResult;
use output::write_text;

#[derive(Debug, Parser)]
#[command(
    name = "fairdisc",
    version,
    about = "Fairness-discrepancy metrics and benchmarks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normalization factors per metric and k
    Nfactor(RunArgs),
    /// Score one estimated distribution against uniform
    Score(ScoreArgs),
    /// Scores at the fair and all-bias extreme points
    Ep(RunArgs),
    /// Per-epoch scores along a sweep from an extreme point to uniform
    Sweep(RunArgs),
    /// MEPE, EP-var and MEM summary
    Bench(RunArgs),
    /// Estimate a distribution from classifier predictions (JSON Lines)
    Ingest(IngestArgs),
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Nfactor(a) => {
            let cfg = RunConfig::from_args(a)?;
            write_text(cfg.out.as_deref(), &commands::nfactor(&cfg)?)
        }
        Command::Score(a) => write_text(a.out.as_deref(), &commands::score(&a)?),
        Command::Ep(a) => {
            let cfg = RunConfig::from_args(a)?;
            write_text(cfg.out.as_deref(), &commands::ep(&cfg)?)
        }
        Command::Sweep(a) => {
            let cfg = RunConfig::from_args(a)?;
            write_text(cfg.out.as_deref(), &commands::sweep(&cfg)?)
        }
        Command::Bench(a) => {
            let cfg = RunConfig::from_args(a)?;
            let (csv, md) = commands::bench(&cfg)?;
            write_text(cfg.out.as_deref(), &csv)?;
            if let Some(path) = &cfg.markdown {
                write_text(Some(path), &md)?;
            }
            Ok(())
        }
        Command::Ingest(a) => commands::write_ingest(&a),
    }
}

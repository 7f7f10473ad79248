//! `lanekg`: lane-change intention pipeline from recordings to horizon reports.

mod cmd;
mod config;
mod error;
mod manifest;

use clap::{Parser, Subcommand};

use crate::error::Failure;

#[derive(Parser)]
#[command(
    name = "lanekg",
    version,
    about = "Lane-change intention prediction over a traffic knowledge graph"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Turn recordings (HighD directory or synthetic) into numeric frames.
    Ingest(cmd::ingest::Args),
    /// Fit lateral thresholds on the training recordings.
    FitThresholds(cmd::thresholds::Args),
    /// Discretize, reify into triples and split train/validation/test.
    BuildKg(cmd::kg::Args),
    /// Train TransE or ComplEx embeddings.
    Train(cmd::train::Args),
    /// Posterior for a single frame given as JSON.
    Predict(cmd::predict::Args),
    /// Horizon sweep on the test frames.
    Evaluate(cmd::evaluate::Args),
    /// Compare frequency-backed posteriors against direct counting.
    OracleCheck(cmd::oracle::Args),
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Ingest(a) => cmd::ingest::run(a),
        Command::FitThresholds(a) => cmd::thresholds::run(a),
        Command::BuildKg(a) => cmd::kg::run(a),
        Command::Train(a) => cmd::train::run(a),
        Command::Predict(a) => cmd::predict::run(a),
        Command::Evaluate(a) => cmd::evaluate::run(a),
        Command::OracleCheck(a) => cmd::oracle::run(a),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            std::process::exit(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(f) = run(cli.command) {
        eprintln!("{f}");
        std::process::exit(f.exit_code());
    }
}

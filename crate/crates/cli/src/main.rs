//! `torsorforge`: scenario ingestion, classification commands and
//! deterministic reports.
//!
//! Exit codes: 0 success, 1 usage or I/O failure, 2 capacity (budget)
//! exceeded, 3 invariant or validation failure, 4 oracle mismatch.

mod report;
mod run;
mod scenario;

use clap::{Parser, ValueEnum};
use report::Report;
use run::Command;
use sha2::{Digest, Sha256};
use std::process::ExitCode;
use std::time::Instant;
use torsorforge_core::Error;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CliCommand {
    ClassifyTorsors,
    ClassifyCoverings,
    Cech,
    Compare,
    Oracle,
    HolonomyRoundtrip,
    FrameRoundtrip,
    Gauge,
}

impl From<CliCommand> for Command {
    fn from(c: CliCommand) -> Command {
        match c {
            CliCommand::ClassifyTorsors => Command::ClassifyTorsors,
            CliCommand::ClassifyCoverings => Command::ClassifyCoverings,
            CliCommand::Cech => Command::Cech,
            CliCommand::Compare => Command::Compare,
            CliCommand::Oracle => Command::Oracle,
            CliCommand::HolonomyRoundtrip => Command::HolonomyRoundtrip,
            CliCommand::FrameRoundtrip => Command::FrameRoundtrip,
            CliCommand::Gauge => Command::Gauge,
        }
    }
}

/// Classify group coverings, torsors and twisted local systems over
/// combinatorial bases from a scenario file.
#[derive(Debug, Parser)]
#[command(name = "torsorforge", version, disable_help_subcommand = true)]
struct Cli {
    /// Which classification requests of the scenario to run.
    #[arg(value_enum)]
    command: CliCommand,

    /// Scenario file (line-oriented, header `torsorforge v1`).
    scenario: std::path::PathBuf,

    /// Report format.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,

    /// Search budget in assignments; falls back to TORSORFORGE_BUDGET, then
    /// to the built-in default.
    #[arg(long)]
    budget: Option<u64>,

    /// Worker threads for the enumeration kernels.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap would exit with code 2, which is reserved for capacity
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let budget = cli
        .budget
        .or_else(|| std::env::var("TORSORFORGE_BUDGET").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(torsorforge_core::DEFAULT_BUDGET);
    let bytes = match std::fs::read(&cli.scenario) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("cannot read {}: {e}", cli.scenario.display());
            return ExitCode::from(1);
        }
    };
    let text = match String::from_utf8(bytes.clone()) {
        Ok(t) => t,
        Err(_) => {
            eprintln!("scenario file is not valid UTF-8");
            return ExitCode::from(3);
        }
    };
    let scenario = match scenario::parse_scenario(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("scenario rejected: {e}");
            return ExitCode::from(3);
        }
    };
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    let digest = hasher.finalize();
    let hash: String = digest.iter().map(|b| format!("{b:02x}")).collect();

    let command: Command = cli.command.into();
    let mut report = Report::new(hash, command.name().to_string(), budget);
    let started = Instant::now();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.workers.max(1)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("cannot build worker pool: {e}");
            return ExitCode::from(1);
        }
    };
    let outcome = pool.install(|| run::run(&scenario, command, &mut report, budget));
    let elapsed = started.elapsed();
    match outcome {
        Ok(()) => {
            let body = match cli.format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json(),
            };
            print!("{body}");
            eprintln!(
                "ran {} computation(s) in {} ms",
                report.computations.len(),
                elapsed.as_millis()
            );
            if report.has_mismatch() {
                ExitCode::from(4)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Capacity { .. } => ExitCode::from(2),
                _ => ExitCode::from(3),
            }
        }
    }
}

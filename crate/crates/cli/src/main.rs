//! `transfun`: apply transfunction specs to measures, run property checks,
//! infer properties statically, compose specs, and summarize documents.
//!
//! Exit codes: 0 success, 2 parse error, 3 invalid spec or space mismatch,
//! 4 internal inconsistency (a statically proved axiom refuted by trials).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use property_engine::Axiom;

mod commands;

use commands::AxiomSelector;

#[derive(Parser)]
#[command(
    name = "transfun",
    version,
    about = "Transfunctions over discrete measure spaces: apply, check, infer, compose, info"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a spec to a measure and emit the output measure document.
    Apply {
        /// Spec document (JSON constructor tree).
        spec: PathBuf,
        /// Measure document on the spec's domain space.
        measure: PathBuf,
        /// Output path; standard output if omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run seeded randomized property checks and emit a report document.
    Check {
        spec: PathBuf,
        /// Randomized trials per axiom.
        #[arg(long, default_value_t = 1000)]
        trials: u32,
        /// Violation tolerance.
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        /// Root seed; identical seeds give byte-identical reports.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// One axiom name, or "all".
        #[arg(long, default_value = "all", value_parser = parse_axiom_selector)]
        axiom: AxiomSelector,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Emit the static-only property report (no trials).
    Infer {
        spec: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compose two specs (outer after inner) into one spec document.
    Compose {
        outer: PathBuf,
        inner: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Summarize a spec, measure, or space document.
    Info { file: PathBuf },
}

fn parse_axiom_selector(raw: &str) -> Result<AxiomSelector, String> {
    if raw == "all" {
        return Ok(AxiomSelector::All);
    }
    Axiom::from_name(raw).map(AxiomSelector::One).ok_or_else(|| {
        let names: Vec<&str> = Axiom::ALL.iter().map(|a| a.name()).collect();
        format!("unknown axiom '{raw}'; expected one of: all, {}", names.join(", "))
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Apply {
            spec,
            measure,
            output,
        } => commands::cmd_apply(&spec, &measure, output.as_deref()),
        Command::Check {
            spec,
            trials,
            tolerance,
            seed,
            axiom,
            output,
        } => commands::cmd_check(&spec, trials, tolerance, seed, axiom, output.as_deref()),
        Command::Infer { spec, output } => commands::cmd_infer(&spec, output.as_deref()),
        Command::Compose {
            outer,
            inner,
            output,
        } => commands::cmd_compose(&outer, &inner, output.as_deref()),
        Command::Info { file } => commands::cmd_info(&file),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}

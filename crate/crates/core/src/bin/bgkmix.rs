use std::path::PathBuf;
use std::process::ExitCode;

use bgkmix::runner::{self, Command, ExitStatus, Overrides};
use clap::{Parser, Subcommand};

/// Linearized two-species BGK: validation, spectral simulation, entropy certification.
#[derive(Parser)]
#[command(name = "bgkmix", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// TOML run configuration, overlaid on the preset when both are given
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// symmetric, asymmetric, zero, single-mode, k0-momentum, random, degenerate
    #[arg(long, global = true, value_name = "NAME")]
    preset: Option<String>,
    /// Use unscaled sqrt(m+1) transport entries for both species
    #[arg(long, global = true)]
    paper_literal_transport: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Check parameter constraints and derivative tables
    Validate,
    /// Evolve the initial data and write the entropy trace
    Simulate,
    /// Search entropy parameters and report the certified rate
    Certify,
    /// Compare the spectral solution with the velocity-grid reference
    Compare,
    /// Check the entropy trace against the certified bound
    DecayCheck,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    runner::init_threads();
    let command = match cli.command {
        Cmd::Validate => Command::Validate,
        Cmd::Simulate => Command::Simulate,
        Cmd::Certify => Command::Certify,
        Cmd::Compare => Command::Compare,
        Cmd::DecayCheck => Command::DecayCheck,
    };
    let o = Overrides {
        config: cli.config,
        preset: cli.preset,
        seed: cli.seed,
        out: cli.out,
        paper_literal_transport: cli.paper_literal_transport,
    };
    let cfg = match runner::resolve_config(&o) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(ExitStatus::RuntimeError.code() as u8);
        }
    };
    let outcome = runner::run(command, &cfg);
    if outcome.status == ExitStatus::Ok {
        print!("{}", outcome.summary);
    } else {
        eprint!("{}", outcome.summary);
    }
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
    ExitCode::from(outcome.status.code() as u8)
}

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use boundaryk::crossed::Mode;
use boundaryk_cli::commands::{collect_inputs, execute, exit, threads_from_env, Command, Config};
use boundaryk_cli::pipeline::parse_coefficients;
use clap::{Args, Parser, Subcommand};

/// K-theory invariants of boundary crossed products of closed orientable
/// 3-manifold groups.
#[derive(Parser)]
#[command(name = "boundaryk", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Homological checks for a closed connected orientable 3-manifold
    Validate(Shared),
    /// Integral homology and cohomology, plus field dimensions for f<p> or q
    Homology(Shared),
    /// K^*(M) via the spectral sequence and K_*(M), with evidence
    Ktheory(Shared),
    /// Pointed K-invariants of the boundary crossed product
    Crossed(Shared),
    /// Partition a corpus into isomorphism classes of crossed products
    Classify(Shared),
}

#[derive(Args)]
struct Shared {
    /// Fixture files or directories of *.json fixtures
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Coefficients: z, q or f<p> for a prime p
    #[arg(long, default_value = "z", value_parser = parse_coefficients)]
    coefficients: Mode,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    /// Record failures in the report and exit 0
    #[arg(long)]
    keep_going: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, shared) = match cli.command {
        Cmd::Validate(s) => (Command::Validate, s),
        Cmd::Homology(s) => (Command::Homology, s),
        Cmd::Ktheory(s) => (Command::KTheory, s),
        Cmd::Crossed(s) => (Command::Crossed, s),
        Cmd::Classify(s) => (Command::Classify, s),
    };

    let files = match collect_inputs(&shared.inputs) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit::IO as u8);
        }
    };
    let config = Config {
        command,
        coefficients: shared.coefficients,
        keep_going: shared.keep_going,
        threads: threads_from_env(),
    };
    let run = execute(config, &files);
    for line in &run.diagnostics {
        eprintln!("error: {line}");
    }

    let json = run.report.to_json();
    match &shared.output {
        Some(path) => {
            if let Err(e) = fs::write(path, json) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(exit::IO as u8);
            }
        }
        None => print!("{json}"),
    }
    ExitCode::from(run.exit_code as u8)
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gapkdv::cli::{execute, Command, Outcome, Overrides};

/// Finite-gap reflectionless spectral data and KdV flows.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// JSON run configuration (defaults apply when omitted).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Quadrature tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for sampled checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Order of the time flow.
    #[arg(long, global = true)]
    k: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Comb parameters, frequencies, harmonic measures and B-periods.
    Geometry,
    /// The potential V(x, t) on the configured lattice.
    Potential,
    /// Run the verification battery.
    Verify,
    /// Convergence of e_α under truncation of the band set.
    Converge,
}

fn main() -> ExitCode {
    // Usage errors are input errors: exit 1, not clap's default of 2.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let command = match cli.command {
        Cmd::Geometry => Command::Geometry,
        Cmd::Potential => Command::Potential,
        Cmd::Verify => Command::Verify,
        Cmd::Converge => Command::Converge,
    };
    let overrides = Overrides {
        config: cli.config,
        out: cli.out,
        tol: cli.tol,
        seed: cli.seed,
        k: cli.k,
    };
    let outcome = execute(command, &overrides);
    match &outcome {
        Outcome::Pass => {}
        Outcome::Validation(m) => eprintln!("invalid input: {m}"),
        Outcome::Numerical(m) => eprintln!("numerical failure: {m}"),
        Outcome::VerificationFailed(names) => eprintln!("verification failed: {}", names.join(", ")),
    }
    ExitCode::from(outcome.exit_code() as u8)
}

//! `conlaw`: entropy production experiments from JSON scenarios.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use conlaw_core::FluxKind;

use config::Overrides;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Core(#[from] conlaw_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use conlaw_core::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Core(
                E::InvalidState(_)
                | E::StateOutOfRange { .. }
                | E::InvalidDomain(_)
                | E::UnsupportedFamily(_)
                | E::InvalidFamily(_)
                | E::UnknownFlux(_)
                | E::WindowOutsideSpan(_)
                | E::Tangency { .. }
                | E::InvalidFlux(_),
            ) => 2,
            CliError::Core(_) | CliError::Io(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "conlaw", version, about = "Entropy production experiments for scalar conservation laws")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON scenario file; built-in defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    flux: Option<FluxKind>,
    /// Tolerance for entropy-production checks.
    #[arg(long, global = true)]
    tol_ep: Option<f64>,
    /// Staircase step for rarefactions.
    #[arg(long, global = true)]
    delta_u: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Report the literal jump density next to the kinetic one.
    #[arg(long = "paper-literal", global = true)]
    literal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Entropic Riemann fan.
    Riemann,
    /// Non-entropic fans with their production rates.
    Family,
    /// Front tracking to `t_end`.
    Evolve,
    /// Entropy ledger over the configured windows.
    Ep,
    /// Production, combined shock entropy and entropy rate across a family.
    RateCompare,
    /// One-sided Lipschitz check at `t_end`.
    Econd,
    /// Hopf-Lax samples against front tracking.
    Hopflax,
    /// Godunov run and convergence to front tracking.
    Fv,
    /// Trapezoid re-solve and production before and after.
    Splice,
    /// Kinetic versus literal jump density.
    DeltaAudit,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Riemann => "riemann",
            Command::Family => "family",
            Command::Evolve => "evolve",
            Command::Ep => "ep",
            Command::RateCompare => "rate-compare",
            Command::Econd => "econd",
            Command::Hopflax => "hopflax",
            Command::Fv => "fv",
            Command::Splice => "splice",
            Command::DeltaAudit => "delta-audit",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let overrides =
        Overrides { flux: cli.flux, tol_ep: cli.tol_ep, delta_u: cli.delta_u, seed: cli.seed, out: cli.out.clone() };
    let outcome = config::load(cli.config.as_deref(), &overrides)
        .and_then(|sc| commands::run(cli.command, &sc, cli.literal).and_then(|r| r.emit(&sc).map(|_| r)));
    match outcome {
        Ok(report) => {
            let failed: Vec<_> = report.checks.iter().filter(|c| !c.passed).collect();
            if failed.is_empty() {
                ExitCode::SUCCESS
            } else {
                for c in failed {
                    eprintln!("invariant failed: {}: {}", c.name, c.detail);
                }
                ExitCode::from(3)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

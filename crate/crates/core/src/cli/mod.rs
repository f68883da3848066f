//! The `fourbessel` command line.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0  | success |
//! | 1  | a checked discrepancy exceeded its threshold, or a batch row failed |
//! | 2  | no parity-valid bridge order |
//! | 3  | degenerate momenta for a bridge order `L >= 1` |
//! | 4  | the quadrature oracle did not converge |
//! | 64 | usage error |
//! | 65 | malformed or empty batch input |

mod batch;
mod eval;
mod tools;

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::oracle::QuadratureConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_NO_VALID_BRIDGE: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;
pub const EXIT_NO_CONVERGENCE: i32 = 4;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NoValidBridge { .. } => EXIT_NO_VALID_BRIDGE,
        Error::DegenerateMomenta { .. } => EXIT_DEGENERATE,
        Error::NoConvergence { .. } => EXIT_NO_CONVERGENCE,
        Error::PrefactorZero { .. } | Error::Domain(_) => EXIT_USAGE,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "fourbessel",
    version,
    about = "Closed-form integrals of four spherical Bessel functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one integral and print a JSON report.
    Eval(eval::EvalArgs),
    /// Evaluate many integrals from a CSV file or a grid.
    Batch(batch::BatchArgs),
    /// Exact Wigner symbols and bridge orders.
    #[command(subcommand)]
    Wigner(tools::WignerCommand),
    /// Legendre functions and related integrals.
    #[command(subcommand)]
    Legendre(tools::LegendreCommand),
    /// Numerical quadrature of one integral.
    Oracle(tools::OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormulaArg {
    Auto,
    General,
    Paired,
}

impl From<FormulaArg> for crate::quadbessel::Formula {
    fn from(f: FormulaArg) -> Self {
        match f {
            FormulaArg::Auto => Self::Auto,
            FormulaArg::General => Self::General,
            FormulaArg::Paired => Self::Paired,
        }
    }
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("expected a positive finite number, got {s}"))
    }
}

/// Quadrature settings shared by every subcommand that runs the oracle.
#[derive(Debug, Clone, Args)]
struct OracleFlags {
    /// Relative tolerance of the oracle; checks fail above ten times this.
    #[arg(long, default_value_t = 1e-8, value_parser = positive_f64)]
    rel_tol: f64,
    /// Largest quadrature radius (default 4000 / min(k1, k2)).
    #[arg(long, value_parser = positive_f64)]
    max_radius: Option<f64>,
    /// Quadrature panels per period of the fastest oscillation.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(2..))]
    panels_per_period: u32,
    /// Number of radius doublings tried.
    #[arg(long, default_value_t = 6)]
    acceleration_depth: u32,
}

impl OracleFlags {
    fn config(&self) -> QuadratureConfig {
        QuadratureConfig {
            rel_tol: self.rel_tol,
            max_radius: self.max_radius,
            panels_per_period: self.panels_per_period,
            acceleration_depth: self.acceleration_depth,
        }
    }

    fn threshold(&self) -> f64 {
        10.0 * self.rel_tol
    }
}

/// Run the CLI on `args` (including the program name) and return the exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            // printing to a closed pipe is not worth a panic
            let _ = err.print();
            return code;
        }
    };
    match cli.command {
        Command::Eval(args) => eval::run(&args),
        Command::Batch(args) => batch::run(&args),
        Command::Wigner(cmd) => tools::run_wigner(&cmd),
        Command::Legendre(cmd) => tools::run_legendre(&cmd),
        Command::Oracle(args) => tools::run_oracle(&args),
    }
}

use clap::{Args, Subcommand};
use serde_json::json;

use super::{exit_code, positive_f64, OracleFlags, EXIT_OK, EXIT_USAGE};
use crate::error::Error;
use crate::legendre::{
    assoc_legendre_gt1, legendre_linearization_coeffs, legendre_p, HalfIntegerOrder,
};
use crate::oracle::quad_bessel_numeric;
use crate::quadbessel::{legendre_ratio_integral, IntegralSpec};
use crate::wigner::{
    ratio_to_f64, select_bridge_order, wigner_3j_zero, wigner_6j, SignedSqrtRational,
};

#[derive(Debug, Subcommand)]
pub(super) enum WignerCommand {
    /// (j1 j2 j3; 0 0 0), exactly and as a decimal.
    #[command(name = "3j")]
    ThreeJ { j1: u32, j2: u32, j3: u32 },
    /// {j1 j2 j3; j4 j5 j6}, exactly and as a decimal.
    #[command(name = "6j")]
    SixJ {
        j1: u32,
        j2: u32,
        j3: u32,
        j4: u32,
        j5: u32,
        j6: u32,
    },
    /// Smallest parity-valid bridge order for four orders.
    Bridge { l1: u32, l2: u32, l3: u32, l4: u32 },
}

#[derive(Debug, Subcommand)]
pub(super) enum LegendreCommand {
    /// Legendre polynomial P_l(x), |x| <= 1.
    P {
        #[arg(long)]
        l: u32,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
    },
    /// Associated Legendre function P_l^m(x) for x > 1 and half-integer or
    /// integer m (e.g. -1/2, -1.5, 1).
    Assoc {
        #[arg(long)]
        l: u32,
        #[arg(long, allow_hyphen_values = true)]
        m: HalfIntegerOrder,
        #[arg(long)]
        x: f64,
    },
    /// Coefficients (2mu+1)(l lp mu; 000)^2 of P_l P_lp in the Legendre basis.
    Linearize {
        #[arg(long)]
        l: u32,
        #[arg(long)]
        lp: u32,
    },
    /// int_{-1}^{1} P_l(t) P_lp(t) (y - t)^(-L - 1/2) dt for y > 1.
    RatioIntegral {
        #[arg(long)]
        l: u32,
        #[arg(long)]
        lp: u32,
        /// The exponent order L.
        #[arg(long = "bridge")]
        bridge: u32,
        #[arg(long)]
        y: f64,
    },
}

#[derive(Debug, Args)]
pub(super) struct OracleArgs {
    #[arg(long)]
    l1: u32,
    #[arg(long)]
    l2: u32,
    #[arg(long)]
    l3: u32,
    #[arg(long)]
    l4: u32,
    #[arg(long, value_parser = positive_f64)]
    k1: f64,
    #[arg(long, value_parser = positive_f64)]
    k2: f64,
    #[command(flatten)]
    flags: OracleFlags,
}

fn print_exact(value: &SignedSqrtRational) {
    if value.is_zero() {
        println!("0");
    } else {
        println!("{value} {}", value.to_f64());
    }
}

fn fail(err: &Error) -> i32 {
    eprintln!("error: {err}");
    exit_code(err)
}

fn print_value(result: crate::error::Result<f64>) -> i32 {
    match result {
        Ok(v) => {
            println!("{v}");
            EXIT_OK
        }
        Err(e) => fail(&e),
    }
}

pub(super) fn run_wigner(cmd: &WignerCommand) -> i32 {
    match *cmd {
        WignerCommand::ThreeJ { j1, j2, j3 } => print_exact(&wigner_3j_zero(j1, j2, j3)),
        WignerCommand::SixJ {
            j1,
            j2,
            j3,
            j4,
            j5,
            j6,
        } => print_exact(&wigner_6j(j1, j2, j3, j4, j5, j6)),
        WignerCommand::Bridge { l1, l2, l3, l4 } => match select_bridge_order(l1, l2, l3, l4) {
            Ok(l) => println!("{l}"),
            Err(e) => return fail(&e),
        },
    }
    EXIT_OK
}

pub(super) fn run_legendre(cmd: &LegendreCommand) -> i32 {
    match *cmd {
        LegendreCommand::P { l, x } => print_value(legendre_p(l, x)),
        LegendreCommand::Assoc { l, m, x } => print_value(assoc_legendre_gt1(l, m, x)),
        LegendreCommand::Linearize { l, lp } => {
            for term in legendre_linearization_coeffs(l, lp).iter() {
                println!("{} {} {}", term.mu, term.coeff, ratio_to_f64(&term.coeff));
            }
            EXIT_OK
        }
        LegendreCommand::RatioIntegral { l, lp, bridge, y } => {
            print_value(legendre_ratio_integral(l, lp, bridge, y))
        }
    }
}

pub(super) fn run_oracle(args: &OracleArgs) -> i32 {
    let spec = match IntegralSpec::new([args.l1, args.l2, args.l3, args.l4], args.k1, args.k2) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match quad_bessel_numeric(&spec, &args.flags.config()) {
        Ok(r) => {
            println!(
                "{}",
                json!({
                    "lambda": spec.lambda,
                    "k1": spec.k1,
                    "k2": spec.k2,
                    "value": r.value,
                    "error_estimate": r.error_estimate,
                })
            );
            EXIT_OK
        }
        Err(e) => fail(&e),
    }
}

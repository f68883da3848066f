use clap::Args;
use serde_json::json;

use super::{exit_code, positive_f64, FormulaArg, OracleFlags, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};
use crate::error::Error;
use crate::oracle::quad_bessel_numeric;
use crate::quadbessel::{evaluate_with, EvaluationReport, IntegralSpec, Method, OracleSummary};

#[derive(Debug, Args)]
pub(super) struct EvalArgs {
    #[arg(long)]
    l1: u32,
    #[arg(long)]
    l2: u32,
    #[arg(long)]
    l3: u32,
    #[arg(long)]
    l4: u32,
    /// Momentum shared by the first and third Bessel functions.
    #[arg(long, value_parser = positive_f64)]
    k1: f64,
    /// Momentum shared by the second and fourth Bessel functions.
    #[arg(long, value_parser = positive_f64)]
    k2: f64,
    /// Also run the quadrature oracle and report the discrepancy.
    #[arg(long)]
    check: bool,
    /// Answer degenerate momenta with the oracle instead of failing.
    #[arg(long)]
    fallback_oracle: bool,
    #[arg(long, value_enum, default_value_t = FormulaArg::Auto)]
    method: FormulaArg,
    #[command(flatten)]
    oracle: OracleFlags,
}

fn print_json(value: &impl serde::Serialize) {
    println!(
        "{}",
        serde_json::to_string(value).expect("report serialization cannot fail")
    );
}

fn report_error(spec: &IntegralSpec, err: &Error) -> i32 {
    eprintln!("error: {err}");
    print_json(&json!({
        "lambda": spec.lambda,
        "k1": spec.k1,
        "k2": spec.k2,
        "error": { "kind": err.kind(), "message": err.to_string() },
    }));
    exit_code(err)
}

fn oracle_summary(spec: &IntegralSpec, flags: &OracleFlags) -> Result<OracleSummary, Error> {
    let r = quad_bessel_numeric(spec, &flags.config())?;
    Ok(OracleSummary {
        value: r.value,
        error_estimate: r.error_estimate,
    })
}

pub(super) fn run(args: &EvalArgs) -> i32 {
    let spec = match IntegralSpec::new([args.l1, args.l2, args.l3, args.l4], args.k1, args.k2) {
        Ok(spec) => spec,
        Err(err) => {
            eprintln!("error: {err}");
            return EXIT_USAGE;
        }
    };
    let report = match evaluate_with(&spec, args.method.into()) {
        Ok(report) => report,
        Err(Error::DegenerateMomenta { bridge, .. }) if args.fallback_oracle => {
            eprintln!(
                "warning: k1 = {} and k2 = {} are degenerate for L = {bridge}; using the quadrature oracle",
                spec.k1, spec.k2
            );
            let oracle = match oracle_summary(&spec, &args.oracle) {
                Ok(o) => o,
                Err(err) => return report_error(&spec, &err),
            };
            let report = EvaluationReport {
                lambda: spec.lambda,
                k1: spec.k1,
                k2: spec.k2,
                bridge_l: Some(bridge),
                value: oracle.value,
                method: Method::Oracle,
                terms: Vec::new(),
                oracle: Some(oracle),
                discrepancy: None,
            };
            print_json(&report);
            return EXIT_OK;
        }
        Err(err) => return report_error(&spec, &err),
    };
    if !args.check {
        print_json(&report);
        return EXIT_OK;
    }
    let report = match oracle_summary(&spec, &args.oracle) {
        Ok(o) => report.with_oracle(o),
        Err(err) => return report_error(&spec, &err),
    };
    print_json(&report);
    let discrepancy = report.discrepancy.unwrap_or(f64::INFINITY);
    if discrepancy <= args.oracle.threshold() {
        EXIT_OK
    } else {
        eprintln!(
            "error: discrepancy {discrepancy:e} exceeds threshold {:e}",
            args.oracle.threshold()
        );
        EXIT_FAILURE
    }
}

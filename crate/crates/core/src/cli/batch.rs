use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{OracleFlags, EXIT_DATA, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};
use crate::oracle::{quad_bessel_numeric, QuadratureConfig};
use crate::quadbessel::{evaluate, IntegralSpec, Method};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Both,
    Analytic,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Jsonl,
}

#[derive(Debug, Args)]
pub(super) struct BatchArgs {
    /// CSV file with header l1,l2,l3,l4,k1,k2.
    #[arg(long, conflicts_with = "grid", required_unless_present = "grid")]
    input: Option<PathBuf>,
    /// Grid shorthand such as "lambda=0..1;k=1:2,2:5". Keys: lambda, l1..l4
    /// (ranges `a..b` or lists `a,b`) and k (pairs `k1:k2`).
    #[arg(long)]
    grid: Option<String>,
    #[arg(long, value_enum, default_value_t = Mode::Both)]
    mode: Mode,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    oracle: OracleFlags,
}

#[derive(Debug, Deserialize)]
struct InputRow {
    l1: u32,
    l2: u32,
    l3: u32,
    l4: u32,
    k1: f64,
    k2: f64,
}

/// One output row. Absent values are empty CSV fields / JSON nulls.
#[derive(Debug, Clone, Serialize)]
struct OutputRow {
    row: String,
    l1: Option<u32>,
    l2: Option<u32>,
    l3: Option<u32>,
    l4: Option<u32>,
    k1: Option<f64>,
    k2: Option<f64>,
    #[serde(rename = "L")]
    bridge_l: Option<u32>,
    method: Option<Method>,
    analytic: Option<f64>,
    oracle: Option<f64>,
    error_estimate: Option<f64>,
    discrepancy: Option<f64>,
    wall_ms: Option<f64>,
    error: Option<String>,
}

fn read_csv(path: &PathBuf) -> Result<Vec<IntegralSpec>, String> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut specs = Vec::new();
    for (i, record) in reader.deserialize::<InputRow>().enumerate() {
        let r = record.map_err(|e| format!("row {}: {e}", i + 1))?;
        let spec = IntegralSpec::new([r.l1, r.l2, r.l3, r.l4], r.k1, r.k2)
            .map_err(|e| format!("row {}: {e}", i + 1))?;
        specs.push(spec);
    }
    Ok(specs)
}

fn parse_orders(value: &str) -> Result<Vec<u32>, String> {
    let parse = |s: &str| {
        s.trim()
            .parse::<u32>()
            .map_err(|e| format!("bad order {s:?}: {e}"))
    };
    if let Some((lo, hi)) = value.split_once("..") {
        let (lo, hi) = (parse(lo)?, parse(hi.trim_start_matches('='))?);
        if lo > hi {
            return Err(format!("empty range {value:?}"));
        }
        Ok((lo..=hi).collect())
    } else {
        value.split(',').map(parse).collect()
    }
}

fn parse_momenta(value: &str) -> Result<Vec<(f64, f64)>, String> {
    value
        .split(',')
        .map(|pair| {
            let (a, b) = pair
                .split_once(':')
                .ok_or_else(|| format!("momentum pair {pair:?} is not k1:k2"))?;
            let a = super::positive_f64(a)?;
            let b = super::positive_f64(b)?;
            Ok((a, b))
        })
        .collect()
}

/// Expand the grid shorthand; the last index varies fastest, momenta slowest.
fn parse_grid(grid: &str) -> Result<Vec<IntegralSpec>, String> {
    let mut orders: [Vec<u32>; 4] = Default::default();
    let mut momenta = None;
    for part in grid.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("grid entry {part:?} is not key=value"))?;
        match key.trim() {
            "lambda" => {
                let o = parse_orders(value)?;
                orders = [o.clone(), o.clone(), o.clone(), o];
            }
            "l1" => orders[0] = parse_orders(value)?,
            "l2" => orders[1] = parse_orders(value)?,
            "l3" => orders[2] = parse_orders(value)?,
            "l4" => orders[3] = parse_orders(value)?,
            "k" => momenta = Some(parse_momenta(value)?),
            other => return Err(format!("unknown grid key {other:?}")),
        }
    }
    if orders.iter().any(Vec::is_empty) {
        return Err("grid must set orders for all of l1..l4 (or lambda)".into());
    }
    let momenta = momenta.ok_or("grid must set k")?;
    let mut specs = Vec::new();
    for &(k1, k2) in &momenta {
        for &a in &orders[0] {
            for &b in &orders[1] {
                for &c in &orders[2] {
                    for &d in &orders[3] {
                        specs.push(
                            IntegralSpec::new([a, b, c, d], k1, k2).map_err(|e| e.to_string())?,
                        );
                    }
                }
            }
        }
    }
    Ok(specs)
}

fn evaluate_row(
    index: usize,
    spec: &IntegralSpec,
    mode: Mode,
    config: &QuadratureConfig,
) -> OutputRow {
    let start = Instant::now();
    let mut row = OutputRow {
        row: (index + 1).to_string(),
        l1: Some(spec.lambda[0]),
        l2: Some(spec.lambda[1]),
        l3: Some(spec.lambda[2]),
        l4: Some(spec.lambda[3]),
        k1: Some(spec.k1),
        k2: Some(spec.k2),
        bridge_l: None,
        method: None,
        analytic: None,
        oracle: None,
        error_estimate: None,
        discrepancy: None,
        wall_ms: None,
        error: None,
    };
    let mut errors = Vec::new();
    if mode != Mode::Oracle {
        match evaluate(spec) {
            Ok(report) => {
                row.bridge_l = report.bridge_l;
                row.method = Some(report.method);
                row.analytic = Some(report.value);
            }
            Err(e) => errors.push(format!("{}: {e}", e.kind())),
        }
    }
    if mode != Mode::Analytic {
        match quad_bessel_numeric(spec, config) {
            Ok(r) => {
                row.oracle = Some(r.value);
                row.error_estimate = Some(r.error_estimate);
            }
            Err(e) => errors.push(format!("{}: {e}", e.kind())),
        }
    }
    if let (Some(a), Some(o)) = (row.analytic, row.oracle) {
        row.discrepancy = Some((a - o).abs() / o.abs().max(f64::MIN_POSITIVE));
    }
    if mode == Mode::Oracle && row.oracle.is_some() {
        row.method = Some(Method::Oracle);
    }
    if !errors.is_empty() {
        row.error = Some(errors.join("; "));
    }
    row.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    row
}

fn summary_row(rows: &[OutputRow], threshold: f64, elapsed_ms: f64) -> (OutputRow, bool) {
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    let max_discrepancy = rows
        .iter()
        .filter_map(|r| r.discrepancy)
        .fold(None, |acc: Option<f64>, d| {
            Some(acc.map_or(d, |a| a.max(d)))
        });
    let over = rows
        .iter()
        .filter(|r| r.discrepancy.is_some_and(|d| !(d <= threshold)))
        .count();
    let summary = OutputRow {
        row: "summary".into(),
        l1: None,
        l2: None,
        l3: None,
        l4: None,
        k1: None,
        k2: None,
        bridge_l: None,
        method: None,
        analytic: None,
        oracle: None,
        error_estimate: None,
        discrepancy: max_discrepancy,
        wall_ms: Some(elapsed_ms),
        error: Some(format!(
            "rows={} failed={failed} over_threshold={over} threshold={threshold:e}",
            rows.len()
        )),
    };
    (summary, failed == 0 && over == 0)
}

fn write_rows(rows: &[OutputRow], format: Format) -> std::io::Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Csv => {
            let mut writer = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(&mut out);
            for row in rows {
                writer.serialize(row)?;
            }
            writer.flush()?;
        }
        Format::Jsonl => {
            for row in rows {
                serde_json::to_writer(&mut out, row)?;
                writeln!(out)?;
            }
        }
    }
    out.flush()
}

pub(super) fn run(args: &BatchArgs) -> i32 {
    let specs = match (&args.input, &args.grid) {
        (Some(path), _) => read_csv(path).map_err(|e| (e, EXIT_DATA)),
        (None, Some(grid)) => parse_grid(grid).map_err(|e| (e, EXIT_DATA)),
        (None, None) => Err(("one of --input or --grid is required".into(), EXIT_USAGE)),
    };
    let specs = match specs {
        Ok(s) if s.is_empty() => {
            eprintln!("error: batch input has no rows");
            return EXIT_DATA;
        }
        Ok(s) => s,
        Err((msg, code)) => {
            eprintln!("error: {msg}");
            return code;
        }
    };
    let config = args.oracle.config();
    if let Err(e) = config.validate() {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    let start = Instant::now();
    let mut rows: Vec<OutputRow> = specs
        .par_iter()
        .enumerate()
        .map(|(i, spec)| evaluate_row(i, spec, args.mode, &config))
        .collect();
    let threshold = args.oracle.threshold();
    let (summary, ok) = summary_row(&rows, threshold, start.elapsed().as_secs_f64() * 1e3);
    rows.push(summary);
    if let Err(e) = write_rows(&rows, args.format) {
        eprintln!("error: writing output: {e}");
        return EXIT_FAILURE;
    }
    if ok {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_expansion() {
        let specs = parse_grid("lambda=0..1;k=1:2").unwrap();
        assert_eq!(specs.len(), 16);
        assert_eq!(specs[1].lambda, [0, 0, 0, 1]);
        let specs = parse_grid("l1=0,2; l2=1; l3=0..2; l4=3; k=1:2,2:5").unwrap();
        assert_eq!(specs.len(), 12);
        assert_eq!(specs[6].k2, 5.0);
        assert!(parse_grid("lambda=0..1").is_err());
        assert!(parse_grid("lambda=2..1;k=1:2").is_err());
        assert!(parse_grid("lambda=0;k=1:-2").is_err());
        assert!(parse_grid("nu=0;k=1:2").is_err());
    }
}

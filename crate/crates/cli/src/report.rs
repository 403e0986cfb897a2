//! CSV rows, per-cell statistics and the JSON summary.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::config::Format;
use crate::error::CliError;

/// CSV columns, in this order, are a stable interface.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub task: String,
    pub quantity: String,
    pub order: u32,
    pub trial: usize,
    pub estimate: f64,
    pub exact_value: Option<f64>,
    pub n: usize,
    #[serde(rename = "N_U")]
    pub n_u: usize,
    #[serde(rename = "N_M")]
    pub n_m: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupSummary {
    pub quantity: String,
    pub order: u32,
    pub trials: usize,
    /// Trials whose estimate is undefined, e.g. a ratio below the floor.
    pub failures: usize,
    pub mean: f64,
    /// Standard deviation across trials, the statistical error.
    pub std: f64,
    pub se: f64,
    pub exact: Option<f64>,
    pub mean_abs_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detection_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gated_detection_rate: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CellSummary {
    pub label: String,
    pub n: usize,
    pub n_a: usize,
    #[serde(rename = "N_U")]
    pub n_u: usize,
    #[serde(rename = "N_M")]
    pub n_m: usize,
    pub t: u32,
    pub groups: Vec<GroupSummary>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MinNmResult {
    pub cell: String,
    pub value: f64,
    /// Smallest candidate meeting the target, if any did.
    #[serde(rename = "N_M")]
    pub n_m: Option<usize>,
    #[serde(rename = "N_U")]
    pub n_u: usize,
    pub n_tot: Option<usize>,
    /// Error at the accepted candidate, or at the largest one tried.
    pub error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Runtime {
    pub threads: usize,
    pub elapsed_seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub library_version: &'static str,
    pub config_hash: String,
    pub task: String,
    pub seed: u64,
    pub cells: Vec<CellSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub min_n_m: Vec<MinNmResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime: Option<Runtime>,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub rows: Vec<Row>,
    pub summary: Summary,
}

/// Mean and sample standard deviation of the finite values.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let m = v.iter().sum::<f64>() / v.len() as f64;
    if v.len() < 2 {
        return (m, f64::NAN);
    }
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64;
    (m, var.sqrt())
}

fn detection(quantity: &str, v: f64) -> Option<bool> {
    match quantity {
        "D" | "p3ppt" => Some(v > 0.0),
        "hankel_min_eig" => Some(v < 0.0),
        _ => None,
    }
}

/// Groups rows by `(quantity, order)` in order of first appearance.
pub fn summarize(rows: &[Row], z_gate: Option<f64>) -> Vec<GroupSummary> {
    let mut keys: Vec<(String, u32)> = Vec::new();
    for r in rows {
        if !keys.iter().any(|(q, o)| *q == r.quantity && *o == r.order) {
            keys.push((r.quantity.clone(), r.order));
        }
    }
    keys.into_iter()
        .map(|(q, o)| {
            let sel: Vec<&Row> = rows.iter().filter(|r| r.quantity == q && r.order == o).collect();
            let vals: Vec<f64> = sel.iter().map(|r| r.estimate).collect();
            let finite: Vec<f64> = vals.iter().copied().filter(|x| x.is_finite()).collect();
            let (mean, std) = mean_std(&vals);
            let exact = sel[0].exact_value;
            let mae = exact.map(|e| finite.iter().map(|x| (x - e).abs()).sum::<f64>() / finite.len().max(1) as f64);
            let rate = |f: &dyn Fn(f64) -> bool| finite.iter().filter(|&&x| f(x)).count() as f64 / vals.len() as f64;
            let detection_rate = detection(&q, 0.0).map(|_| rate(&|x| detection(&q, x) == Some(true)));
            let gated = match (detection(&q, 0.0), z_gate) {
                (Some(_), Some(z)) if std.is_finite() => Some(rate(&|x| {
                    if q == "hankel_min_eig" {
                        -x > z * std
                    } else {
                        x > z * std
                    }
                })),
                _ => None,
            };
            GroupSummary {
                quantity: q,
                order: o,
                trials: vals.len(),
                failures: vals.len() - finite.len(),
                mean,
                std,
                se: std / (finite.len() as f64).sqrt(),
                exact,
                mean_abs_error: mae,
                detection_rate,
                gated_detection_rate: gated,
            }
        })
        .collect()
}

pub fn write_csv<W: Write>(rows: &[Row], w: W) -> Result<(), CliError> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct JsonReport<'a> {
    rows: &'a [Row],
    summary: &'a Summary,
}

/// Writes the primary output and, for CSV, the JSON summary next to it.
///
/// Without a path the primary output goes to stdout and the summary to
/// stderr.
pub fn write_outputs(report: &Report, format: Format, out: Option<&Path>) -> Result<(), CliError> {
    match (format, out) {
        (Format::Csv, Some(path)) => {
            write_csv(&report.rows, std::fs::File::create(path)?)?;
            let summary_path = if path.extension().is_some_and(|e| e == "json") {
                path.with_extension("summary.json")
            } else {
                path.with_extension("json")
            };
            let mut f = std::fs::File::create(summary_path)?;
            serde_json::to_writer_pretty(&mut f, &report.summary)?;
            writeln!(f)?;
        }
        (Format::Csv, None) => {
            write_csv(&report.rows, std::io::stdout().lock())?;
            let mut e = std::io::stderr().lock();
            serde_json::to_writer_pretty(&mut e, &report.summary)?;
            writeln!(e)?;
        }
        (Format::Json, out) => {
            // The primary output must be reproducible, so it carries no timing.
            let mut summary = report.summary.clone();
            summary.runtime = None;
            let body = JsonReport { rows: &report.rows, summary: &summary };
            match out {
                Some(path) => {
                    let mut f = std::fs::File::create(path)?;
                    serde_json::to_writer_pretty(&mut f, &body)?;
                    writeln!(f)?;
                }
                None => {
                    let mut o = std::io::stdout().lock();
                    serde_json::to_writer_pretty(&mut o, &body)?;
                    writeln!(o)?;
                }
            }
        }
    }
    Ok(())
}

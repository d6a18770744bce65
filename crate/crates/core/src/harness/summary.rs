use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use super::config::Algorithm;
use super::sweep::{RunRecord, CSV_COLUMNS};
use super::HarnessError;

/// Aggregate of one algorithm at one scenario point.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub scenario_id: usize,
    pub snr_db: f64,
    pub eta: f64,
    pub k_min: usize,
    pub algorithm: String,
    /// All rows, including failed ones.
    pub runs: usize,
    pub failures: usize,
    /// Over successful runs.
    pub mean_se: f64,
    pub stderr_se: f64,
    pub mean_objective_evals: f64,
    pub mean_infeasible_evals: f64,
    /// Mean GS evaluations over the mean of its exhaustive counterpart at the same point.
    pub eval_ratio: Option<f64>,
}

pub fn read_records<R: Read>(reader: R) -> Result<Vec<RunRecord>, HarnessError> {
    let mut csv = csv::Reader::from_reader(reader);
    let header: Vec<String> = csv.headers()?.iter().map(str::to_string).collect();
    if header != CSV_COLUMNS {
        return Err(HarnessError::Schema(format!(
            "expected columns `{}`, found `{}`",
            CSV_COLUMNS.join(","),
            header.join(",")
        )));
    }
    csv.deserialize()
        .enumerate()
        .map(|(i, row)| row.map_err(|e| HarnessError::Schema(format!("row {}: {e}", i + 1))))
        .collect()
}

pub fn read_records_from(path: &Path) -> Result<Vec<RunRecord>, HarnessError> {
    let file = std::fs::File::open(path).map_err(|e| HarnessError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    read_records(std::io::BufReader::new(file))
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

fn standard_error(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(values);
    let var = values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1) as f64;
    (var / n as f64).sqrt()
}

/// Per-point, per-algorithm means, standard errors and GS/ES evaluation ratios.
pub fn summarize(records: &[RunRecord]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(usize, String), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.scenario_id, r.algorithm.clone()))
            .or_default()
            .push(r);
    }
    let mut rows: Vec<SummaryRow> = groups
        .into_values()
        .map(|group| {
            let ok: Vec<&RunRecord> = group
                .iter()
                .copied()
                .filter(|r| r.se_bits_per_hz.is_some())
                .collect();
            let se: Vec<f64> = ok.iter().filter_map(|r| r.se_bits_per_hz).collect();
            let evals: Vec<f64> = ok.iter().map(|r| r.objective_evals as f64).collect();
            let infeasible: Vec<f64> = ok.iter().map(|r| r.infeasible_evals as f64).collect();
            let first = group[0];
            SummaryRow {
                scenario_id: first.scenario_id,
                snr_db: first.snr_db,
                eta: first.eta,
                k_min: first.k_min,
                algorithm: first.algorithm.clone(),
                runs: group.len(),
                failures: group.len() - ok.len(),
                mean_se: mean(&se),
                stderr_se: standard_error(&se),
                mean_objective_evals: mean(&evals),
                mean_infeasible_evals: mean(&infeasible),
                eval_ratio: None,
            }
        })
        .collect();
    let lookup: BTreeMap<(usize, String), f64> = rows
        .iter()
        .map(|r| ((r.scenario_id, r.algorithm.clone()), r.mean_objective_evals))
        .collect();
    for row in &mut rows {
        let Ok(algorithm) = row.algorithm.parse::<Algorithm>() else {
            continue;
        };
        let Some(es) = algorithm.exhaustive_counterpart() else {
            continue;
        };
        if let Some(&es_evals) = lookup.get(&(row.scenario_id, es.name().to_string())) {
            row.eval_ratio = Some(row.mean_objective_evals / es_evals);
        }
    }
    rows
}

pub fn format_summary(rows: &[SummaryRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>8} {:>7} {:>6} {:>5} {:<9} {:>5} {:>5} {:>10} {:>8} {:>12} {:>12} {:>8}",
        "scenario",
        "snr_db",
        "eta",
        "k_min",
        "algorithm",
        "runs",
        "fail",
        "mean_se",
        "stderr",
        "obj_evals",
        "infeasible",
        "gs/es"
    );
    for r in rows {
        let ratio = r
            .eval_ratio
            .map_or_else(|| "-".to_string(), |x| format!("{x:.4}"));
        let _ = writeln!(
            out,
            "{:>8} {:>7.2} {:>6.3} {:>5} {:<9} {:>5} {:>5} {:>10.4} {:>8.4} {:>12.1} {:>12.1} {:>8}",
            r.scenario_id,
            r.snr_db,
            r.eta,
            r.k_min,
            r.algorithm,
            r.runs,
            r.failures,
            r.mean_se,
            r.stderr_se,
            r.mean_objective_evals,
            r.mean_infeasible_evals,
            ratio
        );
    }
    out
}

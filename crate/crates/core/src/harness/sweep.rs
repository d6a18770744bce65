use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{Algorithm, ScenarioPoint, ScenarioSweep};
use super::seeds::{algorithm_seed, channel_seed};
use super::HarnessError;
use crate::channel::{draw_channels, ChannelRealization, EvalCounts, SystemConfig};
use crate::gibbs::optimize;
use crate::oracles::{exhaustive_search, greedy_successive_selection, random_feasible_baseline};

/// Fixed CSV columns, in order.
pub const CSV_COLUMNS: [&str; 17] = [
    "scenario_id",
    "seed",
    "snr_db",
    "eta",
    "k_min",
    "algorithm",
    "se_bits_per_hz",
    "objective_evals",
    "infeasible_evals",
    "iterations",
    "fallback_count",
    "wall_ms",
    "realization",
    "channel_fingerprint",
    "p_u",
    "p_d",
    "error",
];

/// One CSV row: a single algorithm on a single realization of a scenario point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub scenario_id: usize,
    /// Seed of the algorithm's random stream.
    pub seed: u64,
    pub snr_db: f64,
    pub eta: f64,
    pub k_min: usize,
    pub algorithm: String,
    /// Empty when the run failed.
    pub se_bits_per_hz: Option<f64>,
    /// SE computations.
    pub objective_evals: u64,
    /// Masks rejected before an SE computation, plus singular selections.
    pub infeasible_evals: u64,
    /// Optimizer iterations; empty for non-iterative algorithms.
    pub iterations: Option<usize>,
    pub fallback_count: Option<usize>,
    /// Empty unless timing is enabled, which keeps reruns byte-identical.
    pub wall_ms: Option<f64>,
    pub realization: usize,
    /// Hash of the channel draw shared by every algorithm of the realization.
    pub channel_fingerprint: String,
    /// Linear watts.
    pub p_u: f64,
    pub p_d: f64,
    pub error: String,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Record wall-clock time per run.
    pub timing: bool,
}

struct Cell {
    point: ScenarioPoint,
    realization: usize,
}

struct AlgorithmResult {
    se: f64,
    counts: EvalCounts,
    iterations: Option<usize>,
    fallback_count: Option<usize>,
}

fn run_algorithm(
    algorithm: Algorithm,
    sweep: &ScenarioSweep,
    point: &ScenarioPoint,
    config: &SystemConfig,
    channels: &ChannelRealization,
    rng: &mut ChaCha8Rng,
) -> Result<AlgorithmResult, String> {
    let problem = algorithm.problem(sweep.rx_antennas);
    let plain = |se: f64, counts: EvalCounts| AlgorithmResult {
        se,
        counts,
        iterations: None,
        fallback_count: None,
    };
    match algorithm {
        Algorithm::GsJ | Algorithm::GsU => {
            let out = optimize(problem, channels, config, &sweep.hyper_at(point), rng)
                .map_err(|e| e.to_string())?;
            Ok(AlgorithmResult {
                se: out.se,
                counts: out.counts,
                iterations: Some(out.iterations),
                fallback_count: Some(out.fallback_count),
            })
        }
        Algorithm::EsJ | Algorithm::EsU => {
            exhaustive_search(problem, channels, config, sweep.exhaustive_cap)
                .map(|o| plain(o.se, o.counts))
                .map_err(|e| e.to_string())
        }
        Algorithm::GreedyU => greedy_successive_selection(problem, channels, config)
            .map(|o| plain(o.se, o.counts))
            .map_err(|e| e.to_string()),
        Algorithm::RandomJ | Algorithm::RandomU => {
            random_feasible_baseline(problem, channels, config, sweep.random_draws, rng)
                .map(|o| plain(o.se, o.counts))
                .map_err(|e| e.to_string())
        }
    }
}

fn run_cell(sweep: &ScenarioSweep, cell: &Cell, options: RunOptions) -> Vec<RunRecord> {
    let config = sweep.system_at(&cell.point);
    let mut channel_rng =
        ChaCha8Rng::seed_from_u64(channel_seed(sweep.master_seed, cell.realization));
    let channels = draw_channels(&config, &mut channel_rng);
    let fingerprint = format!("{:016x}", channels.fingerprint());
    let mut algorithms = sweep.algorithms.clone();
    algorithms.sort();
    algorithms.dedup();
    algorithms
        .into_iter()
        .map(|algorithm| {
            let seed = algorithm_seed(
                sweep.master_seed,
                cell.point.id,
                cell.realization,
                algorithm.index(),
            );
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let start = Instant::now();
            let result = run_algorithm(algorithm, sweep, &cell.point, &config, &channels, &mut rng);
            let wall_ms = options.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
            let mut record = RunRecord {
                scenario_id: cell.point.id,
                seed,
                snr_db: cell.point.snr_db,
                eta: cell.point.eta,
                k_min: cell.point.k_min,
                algorithm: algorithm.name().to_string(),
                se_bits_per_hz: None,
                objective_evals: 0,
                infeasible_evals: 0,
                iterations: None,
                fallback_count: None,
                wall_ms,
                realization: cell.realization,
                channel_fingerprint: fingerprint.clone(),
                p_u: config.p_u,
                p_d: config.p_d,
                error: String::new(),
            };
            match result {
                Ok(r) => {
                    record.se_bits_per_hz = Some(r.se);
                    record.objective_evals = r.counts.feasible;
                    record.infeasible_evals = r.counts.infeasible + r.counts.singular;
                    record.iterations = r.iterations;
                    record.fallback_count = r.fallback_count;
                }
                Err(e) => record.error = e,
            }
            record
        })
        .collect()
}

/// Run every algorithm on every realization of every scenario point.
///
/// Cells run in parallel; rows come back sorted by scenario, realization and
/// algorithm. A failing run is recorded with its error and an empty SE.
pub fn run_sweep(sweep: &ScenarioSweep, options: RunOptions) -> Vec<RunRecord> {
    let cells: Vec<Cell> = sweep
        .points()
        .into_iter()
        .flat_map(|point| {
            (0..sweep.realizations).map(move |realization| Cell { point, realization })
        })
        .collect();
    cells
        .par_iter()
        .map(|cell| run_cell(sweep, cell, options))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

pub fn write_records<W: Write>(records: &[RunRecord], writer: W) -> Result<(), HarnessError> {
    let mut csv = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(writer);
    csv.write_record(CSV_COLUMNS)?;
    for record in records {
        csv.serialize(record)?;
    }
    csv.flush().map_err(|e| HarnessError::Io {
        path: "<csv>".into(),
        message: e.to_string(),
    })?;
    Ok(())
}

/// Run the sweep and write its CSV to `path`.
pub fn run_sweep_to_file(
    sweep: &ScenarioSweep,
    path: &Path,
    options: RunOptions,
) -> Result<Vec<RunRecord>, HarnessError> {
    let records = run_sweep(sweep, options);
    let file = std::fs::File::create(path).map_err(|e| HarnessError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    write_records(&records, std::io::BufWriter::new(file))?;
    Ok(records)
}

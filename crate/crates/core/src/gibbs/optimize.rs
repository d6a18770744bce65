use std::collections::HashMap;

use rand::Rng;

use super::population::{sample_population, Constraints};
use super::theta::{sigmoid_prob, theta_update, ThetaVector};
use super::{GibbsHyper, OptimizeError};
use crate::channel::{
    ChannelRealization, EvalCounts, EvalError, Evaluator, Layout, Problem, SelectionMask,
    SystemConfig,
};

/// Per-iteration record of an [`optimize`] run.
#[derive(Debug, Clone, Default)]
pub struct RunTrace {
    /// Best SE in each iteration's population; `None` when no member was feasible.
    pub iteration_best: Vec<Option<f64>>,
    /// Running maximum of `iteration_best`.
    pub best_so_far: Vec<f64>,
    /// Member used for the theta update.
    pub chosen: Vec<Option<SelectionMask>>,
    /// Theta after each update, when `GibbsHyper::record_theta` is set.
    pub theta: Vec<ThetaVector>,
    /// Cumulative SE computations after each iteration.
    pub evaluations: Vec<u64>,
    pub fallback: Vec<bool>,
}

#[derive(Debug, Clone)]
pub struct OptimizeOutcome {
    pub mask: SelectionMask,
    pub se: f64,
    pub trace: RunTrace,
    /// `feasible` counts SE computations; `infeasible` counts samples
    /// rejected by the cardinality check.
    pub counts: EvalCounts,
    pub iterations: usize,
    pub fallback_count: usize,
    /// Whether the stopping window was met before `max_iterations`.
    pub converged: bool,
}

/// True when the last `window` iteration bests exist and span less than `tol`.
fn window_settled(history: &[Option<f64>], window: usize, tol: f64) -> bool {
    if history.len() < window {
        return false;
    }
    let tail = &history[history.len() - window..];
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in tail {
        match v {
            Some(v) => {
                lo = lo.min(*v);
                hi = hi.max(*v);
            }
            None => return false,
        }
    }
    hi - lo < tol
}

/// Maximize SE over the masks of `problem` with the population-based Gibbs optimizer.
///
/// Each iteration draws `N` masks from the current Bernoulli parameters
/// (falling back to subset simulation when none is feasible), evaluates the
/// feasible ones, and moves theta towards the best member with `f(x) = -SE`.
/// The run stops once the last `stop_window` per-iteration bests lie within
/// `stop_tol` of each other, or after `max_iterations`. The best mask seen in
/// any iteration is returned.
pub fn optimize<R: Rng + ?Sized>(
    problem: Problem,
    channels: &ChannelRealization,
    config: &SystemConfig,
    hyper: &GibbsHyper,
    rng: &mut R,
) -> Result<OptimizeOutcome, OptimizeError> {
    hyper.validate()?;
    let layout = Layout::new(problem, config);
    let evaluator = Evaluator::new(layout, channels, config);
    let constraints = Constraints::new(problem, config);
    let mut theta = ThetaVector::zeros(layout.len());
    let mut cache: HashMap<SelectionMask, Result<f64, EvalError>> = HashMap::new();

    let mut trace = RunTrace::default();
    let mut best: Option<(SelectionMask, f64)> = None;
    let mut fallback_count = 0;
    let mut screened_out = 0u64;
    let mut converged = false;

    for _ in 0..hyper.max_iterations {
        let mut population = sample_population(&theta, hyper, &constraints, rng)?;
        if population.used_fallback {
            fallback_count += 1;
        }
        let p = sigmoid_prob(&theta, hyper.beta);

        let mut chosen: Option<(usize, f64)> = None;
        for i in 0..population.samples.len() {
            if !population.feasible[i] {
                screened_out += 1;
                continue;
            }
            let mask = &population.samples[i];
            let value = if hyper.memoize {
                cache
                    .entry(mask.clone())
                    .or_insert_with(|| evaluator.evaluate(mask))
                    .clone()
            } else {
                evaluator.evaluate(mask)
            };
            if let Ok(se) = value {
                population.objectives[i] = Some(se);
                if chosen.is_none_or(|(_, b)| se > b) {
                    chosen = Some((i, se));
                }
            }
        }

        match chosen {
            Some((i, se)) => {
                let mask = &population.samples[i];
                theta = theta_update(&theta, mask.bits(), -se, &p, hyper);
                if best.as_ref().is_none_or(|(_, b)| se > *b) {
                    best = Some((mask.clone(), se));
                }
                trace.chosen.push(Some(mask.clone()));
            }
            None => trace.chosen.push(None),
        }
        trace.iteration_best.push(chosen.map(|(_, se)| se));
        trace
            .best_so_far
            .push(best.as_ref().map_or(f64::NEG_INFINITY, |(_, b)| *b));
        trace.evaluations.push(evaluator.counts().feasible);
        trace.fallback.push(population.used_fallback);
        if hyper.record_theta {
            trace.theta.push(theta.clone());
        }

        if window_settled(&trace.iteration_best, hyper.stop_window, hyper.stop_tol) {
            converged = true;
            break;
        }
    }

    let iterations = trace.iteration_best.len();
    let (mask, se) = best.ok_or(OptimizeError::NoFeasibleSample { iterations })?;
    let mut counts = evaluator.counts();
    counts.infeasible += screened_out;
    Ok(OptimizeOutcome {
        mask,
        se,
        trace,
        counts,
        iterations,
        fallback_count,
        converged,
    })
}

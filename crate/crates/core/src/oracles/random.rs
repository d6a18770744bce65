use std::collections::BTreeSet;

use rand::Rng;

use super::space::SearchSpaceSpec;
use super::{OracleError, SearchOutcome};
use crate::channel::{ChannelRealization, Evaluator, Problem, SelectionMask, SystemConfig};
use crate::gibbs::Constraints;
use crate::subset::SubsetSimParams;

/// Below this feasible fraction, candidates come from subset simulation.
const REJECTION_FLOOR: f64 = 1e-3;
/// Subset-simulation batches tried before settling for fewer distinct masks.
const MAX_BATCHES: usize = 100;

/// Best SE among `draws` distinct feasible masks drawn uniformly at random.
///
/// Masks are drawn by rejection from fair coin flips; when the feasible
/// fraction is below 1e-3 they come from subset simulation at `p = 1/2`
/// instead. If `draws` reaches the number of feasible masks, all of them are
/// used.
pub fn random_feasible_baseline<R: Rng + ?Sized>(
    problem: Problem,
    channels: &ChannelRealization,
    config: &SystemConfig,
    draws: usize,
    rng: &mut R,
) -> Result<SearchOutcome, OracleError> {
    if draws == 0 {
        return Err(OracleError::NoDraws);
    }
    let spec = SearchSpaceSpec::new(problem, config);
    let feasible_total = spec.feasible_count();
    if feasible_total == 0 {
        return Err(OracleError::NoFeasibleMask);
    }
    let n = spec.bits();
    let constraints = Constraints::new(problem, config);
    let target = (draws as u128).min(feasible_total) as usize;

    let mut chosen: BTreeSet<SelectionMask> = BTreeSet::new();
    if target as u128 == feasible_total && n < 64 {
        chosen.extend(
            (0..1u64 << n)
                .map(|v| SelectionMask::from_value(v, n))
                .filter(|m| constraints.is_feasible(m)),
        );
    } else if spec.feasible_fraction() >= REJECTION_FLOOR {
        while chosen.len() < target {
            let mask = SelectionMask::new((0..n).map(|_| rng.random::<bool>()).collect());
            if constraints.is_feasible(&mask) {
                chosen.insert(mask);
            }
        }
    } else {
        let p = vec![0.5; n];
        let params = SubsetSimParams {
            samples: target.max(10),
            ..SubsetSimParams::default()
        };
        for _ in 0..MAX_BATCHES {
            for mask in constraints.feasible_masks(&p, params.samples, &params, rng)? {
                if chosen.len() < target {
                    chosen.insert(mask);
                }
            }
            if chosen.len() >= target {
                break;
            }
        }
    }

    let evaluator = Evaluator::new(spec.layout, channels, config);
    let mut best: Option<(&SelectionMask, f64)> = None;
    for mask in &chosen {
        if let Ok(se) = evaluator.evaluate(mask) {
            if best.is_none_or(|(_, b)| se > b) {
                best = Some((mask, se));
            }
        }
    }
    let (mask, se) = best.ok_or(OracleError::NoFeasibleMask)?;
    Ok(SearchOutcome {
        mask: mask.clone(),
        se,
        counts: evaluator.counts(),
    })
}

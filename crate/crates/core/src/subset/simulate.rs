use rand::Rng;

use super::bounds::{rank_by_keys, rank_key, ConstraintBounds, RankKey};
use super::mma::{mma_step, LatentVector, LevelState, MmaKernel};
use super::{Secondary, SubsetSimError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubsetSimParams {
    /// Batch size `N` per level.
    pub samples: usize,
    /// Conditional level probability `p0`.
    pub p0: f64,
    /// Maximum number of MMA levels before giving up.
    pub level_cap: usize,
    pub kernel: MmaKernel,
}

impl Default for SubsetSimParams {
    fn default() -> Self {
        Self {
            samples: 100,
            p0: 0.1,
            level_cap: 50,
            kernel: MmaKernel::default(),
        }
    }
}

impl SubsetSimParams {
    /// `n0 = ceil(p0 * N)`.
    pub fn seeds_per_level(&self) -> usize {
        // Guard against 0.1 * 500 = 50.000000000000007.
        let raw = self.p0 * self.samples as f64;
        let n0 = (raw - 1e-9).ceil().max(1.0) as usize;
        n0.min(self.samples)
    }
}

#[derive(Debug, Clone)]
pub struct SubsetSimOutcome {
    /// `N` feasible bit vectors.
    pub samples: Vec<Vec<bool>>,
    /// Product of the level fractions and the final feasible fraction.
    pub probability: f64,
    /// Fraction of each batch reaching the next threshold; `n0 / N` when keys are distinct.
    pub level_fractions: Vec<f64>,
    /// Number of MMA levels run (`L - 1`).
    pub levels: usize,
    /// Threshold key of every level, in order.
    pub thresholds: Vec<RankKey>,
    /// Feasible count `n_k` of every batch, starting with the direct batch.
    pub feasible_counts: Vec<usize>,
}

/// Whether any vector with bits drawn from `p` can land in `bounds`.
fn attainable(bounds: &ConstraintBounds, p: &[f64]) -> bool {
    let forced_on = p.iter().filter(|&&p| p >= 1.0).count();
    let forced_off = p.iter().filter(|&&p| p <= 0.0).count();
    let (lo, hi) = (forced_on, p.len() - forced_off);
    lo.max(bounds.lower) <= hi.min(bounds.upper)
}

/// Draw `N` Bernoulli(`p`) vectors conditioned on `bounds` by subset simulation.
///
/// A direct batch of uniform latents is thresholded against `p`. While fewer
/// than `n0` of the batch are feasible, the batch is ranked by the
/// double-criterion key and the next threshold is the `n0`-th key, or the
/// nearest key strictly beating the previous threshold when ties stall it.
/// Every sample reaching the threshold seeds an MMA chain, and the chains
/// (of length `ceil(N / seeds)`) form the next batch. The probability
/// estimate is the product of the level fractions and the final feasible
/// fraction. The feasible members of the last batch are returned,
/// resampled with replacement up to `N`.
///
/// `secondary` is the objective `h` used to order feasible samples; `None`
/// means `h = 0`, i.e. pure feasibility search.
pub fn subset_simulate<R: Rng + ?Sized>(
    bounds: &ConstraintBounds,
    p: &[f64],
    params: &SubsetSimParams,
    secondary: Secondary,
    rng: &mut R,
) -> Result<SubsetSimOutcome, SubsetSimError> {
    let n = params.samples;
    if n < 10 {
        return Err(SubsetSimError::InvalidParameters(format!(
            "need at least 10 samples per level, got {n}"
        )));
    }
    if !(params.p0 > 0.0 && params.p0 < 1.0) {
        return Err(SubsetSimError::InvalidParameters(format!(
            "p0 must lie in (0, 1), got {}",
            params.p0
        )));
    }
    if p.len() != bounds.dim {
        return Err(SubsetSimError::InvalidParameters(format!(
            "probability vector has length {} but bounds have dimension {}",
            p.len(),
            bounds.dim
        )));
    }
    if !attainable(bounds, p) {
        return Err(SubsetSimError::InfeasibleConstraints {
            lower: bounds.lower,
            upper: bounds.upper,
            dim: bounds.dim,
        });
    }
    let n0 = params.seeds_per_level();

    let mut latents: Vec<LatentVector> = (0..n)
        .map(|_| LatentVector::uniform(bounds.dim, rng))
        .collect();
    let mut bits: Vec<Vec<bool>> = latents.iter().map(|z| z.bernoulli(p)).collect();
    let mut keys: Vec<RankKey> = bits
        .iter()
        .map(|x| rank_key(x, bounds, secondary))
        .collect();
    let mut feasible = keys.iter().filter(|k| k.is_feasible()).count();

    let mut thresholds = Vec::new();
    let mut level_fractions = Vec::new();
    let mut feasible_counts = vec![feasible];
    let mut level = 0;
    while feasible < n0 {
        if level >= params.level_cap {
            return Err(SubsetSimError::LevelCapExceeded {
                levels: level,
                feasible,
            });
        }
        level += 1;
        let order = rank_by_keys(&keys);
        let mut threshold = keys[order[n0 - 1]];
        if let Some(previous) = thresholds.last() {
            // Integer violations tie easily; step to the nearest strictly better key.
            if !threshold.beats(previous) {
                if let Some(next) = order
                    .iter()
                    .rev()
                    .map(|&i| keys[i])
                    .find(|k| k.beats(previous))
                {
                    threshold = next;
                }
            }
        }
        // Every sample tied with the n0-th one belongs to the level, so all of
        // them seed chains; with distinct keys these are exactly the top n0.
        let members: Vec<usize> = (0..n).filter(|&i| keys[i].reaches(&threshold)).collect();
        let state = LevelState {
            level,
            threshold,
            seeds: members.iter().map(|&i| latents[i].clone()).collect(),
            n0,
            feasible_count: feasible,
            level_cap: params.level_cap,
            kernel: params.kernel,
        };
        thresholds.push(threshold);
        level_fractions.push(members.len() as f64 / n as f64);

        let chain_len = n.div_ceil(members.len());
        let mut next = Vec::with_capacity(members.len() * chain_len);
        for seed in &state.seeds {
            let mut current = seed.clone();
            for _ in 0..chain_len {
                current = mma_step(&current, p, &state, bounds, secondary, rng);
                next.push(current.clone());
            }
        }
        next.truncate(n);
        latents = next;
        bits = latents.iter().map(|z| z.bernoulli(p)).collect();
        keys = bits
            .iter()
            .map(|x| rank_key(x, bounds, secondary))
            .collect();
        feasible = keys.iter().filter(|k| k.is_feasible()).count();
        feasible_counts.push(feasible);
    }

    let probability = level_fractions.iter().product::<f64>() * (feasible as f64 / n as f64);

    let mut samples: Vec<Vec<bool>> = bits
        .into_iter()
        .zip(&keys)
        .filter(|(_, k)| k.is_feasible())
        .map(|(x, _)| x)
        .collect();
    let pool = samples.len();
    while samples.len() < n {
        let pick = rng.random_range(0..pool);
        samples.push(samples[pick].clone());
    }
    samples.truncate(n);

    Ok(SubsetSimOutcome {
        samples,
        probability,
        level_fractions,
        levels: level,
        thresholds,
        feasible_counts,
    })
}

use rayon::prelude::*;

use super::space::SearchSpaceSpec;
use super::{OracleError, SearchOutcome};
use crate::channel::{ChannelRealization, Evaluator, Problem, SelectionMask, SystemConfig};

/// Largest space [`exhaustive_search`] enumerates by default.
pub const DEFAULT_SPACE_CAP: u64 = 1 << 26;

const CHUNK: u64 = 1 << 10;

/// Best `(value, se)` in `range`; strict `>` keeps the lowest value on ties.
fn best_in_range(
    evaluator: &Evaluator<'_>,
    n: usize,
    range: std::ops::Range<u64>,
) -> Option<(u64, f64)> {
    let mut best: Option<(u64, f64)> = None;
    for v in range {
        let mask = SelectionMask::from_value(v, n);
        if !evaluator.is_cardinality_feasible(&mask) {
            continue;
        }
        if let Ok(se) = evaluator.evaluate(&mask) {
            if best.is_none_or(|(_, b)| se > b) {
                best = Some((v, se));
            }
        }
    }
    best
}

/// Enumerate every mask of `problem`, skip those failing the cardinality
/// pre-screen, and return the SE-maximizing feasible one. Ties go to the
/// mask with the lowest binary value. Only full SE computations are counted.
pub fn exhaustive_search(
    problem: Problem,
    channels: &ChannelRealization,
    config: &SystemConfig,
    cap: u64,
) -> Result<SearchOutcome, OracleError> {
    let spec = SearchSpaceSpec::new(problem, config);
    let n = spec.bits();
    if spec.size() > u128::from(cap) {
        return Err(OracleError::SpaceTooLarge { bits: n, cap });
    }
    let total = 1u64 << n;
    let evaluator = Evaluator::new(spec.layout, channels, config);
    let chunks = total.div_ceil(CHUNK);
    let partial: Vec<Option<(u64, f64)>> = (0..chunks)
        .into_par_iter()
        .map(|c| best_in_range(&evaluator, n, c * CHUNK..((c + 1) * CHUNK).min(total)))
        .collect();
    let mut best: Option<(u64, f64)> = None;
    for (v, se) in partial.into_iter().flatten() {
        if best.is_none_or(|(_, b)| se > b) {
            best = Some((v, se));
        }
    }
    let (v, se) = best.ok_or(OracleError::NoFeasibleMask)?;
    Ok(SearchOutcome {
        mask: SelectionMask::from_value(v, n),
        se,
        counts: evaluator.counts(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{draw_channels, evaluate_selection, Layout};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn full_scale_space_is_refused() {
        let cfg = SystemConfig::new(30, 10, 10);
        let ch = draw_channels(&cfg, &mut ChaCha8Rng::seed_from_u64(0));
        assert_eq!(
            exhaustive_search(Problem::Joint, &ch, &cfg, DEFAULT_SPACE_CAP),
            Err(OracleError::SpaceTooLarge {
                bits: 50,
                cap: DEFAULT_SPACE_CAP
            })
        );
    }

    #[test]
    fn singleton_feasible_set() {
        let cfg = SystemConfig::new(4, 2, 2).with_k_min(2, 2);
        let ch = draw_channels(&cfg, &mut ChaCha8Rng::seed_from_u64(1));
        let out = exhaustive_search(
            Problem::UserOnly { rx_antennas: 2 },
            &ch,
            &cfg,
            DEFAULT_SPACE_CAP,
        )
        .unwrap();
        assert_eq!(out.mask.value(), 0b1111);
        assert_eq!(out.counts.feasible, 1);
    }

    #[test]
    fn no_feasible_mask() {
        let cfg = SystemConfig::new(4, 3, 3).with_k_min(3, 3);
        let ch = draw_channels(&cfg, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(
            exhaustive_search(Problem::Joint, &ch, &cfg, DEFAULT_SPACE_CAP),
            Err(OracleError::NoFeasibleMask)
        );
    }

    /// Reverse-order enumeration with `>=`, so ties also resolve to the lowest value.
    fn reverse_oracle(
        problem: Problem,
        ch: &ChannelRealization,
        cfg: &SystemConfig,
    ) -> (u64, f64, u64) {
        let layout = Layout::new(problem, cfg);
        let n = layout.len();
        let mut best = (u64::MAX, f64::NEG_INFINITY);
        let mut feasible = 0;
        for v in (0..1u64 << n).rev() {
            if let Ok(se) = evaluate_selection(&SelectionMask::from_value(v, n), &layout, ch, cfg) {
                feasible += 1;
                if se >= best.1 {
                    best = (v, se);
                }
            }
        }
        (best.0, best.1, feasible)
    }

    #[test]
    fn matches_reverse_enumeration() {
        let cfg = SystemConfig::new(6, 3, 3).with_powers(1e-2, 1e-2);
        for seed in 0..5 {
            let ch = draw_channels(&cfg, &mut ChaCha8Rng::seed_from_u64(seed));
            for problem in [Problem::Joint, Problem::UserOnly { rx_antennas: 2 }] {
                let out = exhaustive_search(problem, &ch, &cfg, DEFAULT_SPACE_CAP).unwrap();
                let (v, se, feasible) = reverse_oracle(problem, &ch, &cfg);
                assert_eq!(out.mask.value(), v);
                assert_eq!(out.se, se);
                assert_eq!(out.counts.feasible, feasible);
                assert_eq!(out.counts.infeasible, 0);
            }
        }
    }

    #[test]
    fn joint_dominates_user_only() {
        let cfg = SystemConfig::new(6, 3, 3).with_powers(1e-2, 1e-2);
        for seed in 0..10 {
            let ch = draw_channels(&cfg, &mut ChaCha8Rng::seed_from_u64(seed));
            let j = exhaustive_search(Problem::Joint, &ch, &cfg, DEFAULT_SPACE_CAP).unwrap();
            let u = exhaustive_search(
                Problem::UserOnly { rx_antennas: 2 },
                &ch,
                &cfg,
                DEFAULT_SPACE_CAP,
            )
            .unwrap();
            assert!(j.se >= u.se - 1e-12);
        }
    }
}

use rand::Rng;

use super::bounds::{rank_key, ConstraintBounds, RankKey};
use super::Secondary;

/// Continuous latent point in `[0, 1]^M`; bit `m` is set iff `z_m <= p_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentVector {
    pub z: Vec<f64>,
}

impl LatentVector {
    pub fn uniform<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        Self {
            z: (0..dim).map(|_| rng.random::<f64>()).collect(),
        }
    }

    pub fn bernoulli(&self, p: &[f64]) -> Vec<bool> {
        debug_assert_eq!(self.z.len(), p.len());
        self.z.iter().zip(p).map(|(z, p)| z <= p).collect()
    }
}

/// Coordinate acceptance rule of the modified Metropolis step.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum MmaKernel {
    /// Accept any proposal inside `[0, 1]`; leaves the uniform latent law invariant.
    #[default]
    Uniform,
    /// Accept with probability `min(1, (proposal - z + 2) / 2)`. Not reversible
    /// with respect to the uniform law: it drifts latents towards 1.
    ShiftedRatio,
}

/// State of one intermediate level `F_k`.
#[derive(Debug, Clone)]
pub struct LevelState {
    pub level: usize,
    /// Rank key of the `n0`-th ranked sample; membership is `key >= threshold`.
    pub threshold: RankKey,
    pub seeds: Vec<LatentVector>,
    pub n0: usize,
    /// Fully feasible samples in the batch that defined this level.
    pub feasible_count: usize,
    pub level_cap: usize,
    pub kernel: MmaKernel,
}

/// `omega = (proposal - z + 2) / 2`.
pub fn acceptance_ratio(z: f64, proposal: f64) -> f64 {
    (proposal - z + 2.0) / 2.0
}

/// One coordinate update given the proposal and a uniform draw `u`.
///
/// The proposal is taken with probability 1 under [`MmaKernel::Uniform`] and
/// `min(1, omega)` under [`MmaKernel::ShiftedRatio`]; accepted values outside
/// `[0, 1]` fall back to `z`.
pub fn mma_coordinate(kernel: MmaKernel, z: f64, proposal: f64, u: f64) -> f64 {
    let accept = match kernel {
        MmaKernel::Uniform => 1.0,
        MmaKernel::ShiftedRatio => acceptance_ratio(z, proposal).min(1.0),
    };
    if u < accept && (0.0..=1.0).contains(&proposal) {
        proposal
    } else {
        z
    }
}

/// One modified-Metropolis move from `seed`, which must lie in the level's event.
///
/// Each coordinate proposes uniformly on `[z - 2, z + 2]`. The assembled
/// candidate replaces the seed only if its thresholded bit vector still
/// reaches `level.threshold`.
pub fn mma_step<R: Rng + ?Sized>(
    seed: &LatentVector,
    p: &[f64],
    level: &LevelState,
    bounds: &ConstraintBounds,
    secondary: Secondary,
    rng: &mut R,
) -> LatentVector {
    let candidate = LatentVector {
        z: seed
            .z
            .iter()
            .map(|&z| {
                let proposal = z - 2.0 + 4.0 * rng.random::<f64>();
                mma_coordinate(level.kernel, z, proposal, rng.random::<f64>())
            })
            .collect(),
    };
    let key = rank_key(&candidate.bernoulli(p), bounds, secondary);
    if key.reaches(&level.threshold) {
        candidate
    } else {
        seed.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ratio_examples() {
        assert_eq!(acceptance_ratio(0.4, 0.4), 1.0);
        assert_eq!(acceptance_ratio(0.4, 0.4 - 2.0), 0.0);
        assert_eq!(acceptance_ratio(0.25, 1.25), 1.5);
    }

    #[test]
    fn coordinate_rules() {
        let k = MmaKernel::ShiftedRatio;
        // Centre of the window: always taken.
        assert_eq!(mma_coordinate(k, 0.5, 0.5, 0.999), 0.5);
        // Lower edge: never taken.
        assert_eq!(mma_coordinate(k, 0.9, -1.1, 0.0), 0.9);
        // Capped ratio inside [0, 1]: always taken.
        assert_eq!(mma_coordinate(k, 0.2, 0.7, 0.999), 0.7);
        // Outside [0, 1]: keep.
        assert_eq!(mma_coordinate(k, 0.2, 1.2, 0.0), 0.2);
        assert_eq!(mma_coordinate(MmaKernel::Uniform, 0.9, 0.1, 0.999), 0.1);
        assert_eq!(mma_coordinate(MmaKernel::Uniform, 0.2, -0.3, 0.0), 0.2);
    }

    #[test]
    fn chain_never_leaves_level() {
        let bounds = ConstraintBounds::new(6, 8, 8).unwrap();
        let p = vec![0.5; 8];
        let threshold = RankKey::new(-2, 0.0);
        let level = LevelState {
            level: 1,
            threshold,
            seeds: vec![],
            n0: 1,
            feasible_count: 0,
            level_cap: 50,
            kernel: MmaKernel::default(),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut state = LatentVector {
            z: vec![0.1, 0.2, 0.3, 0.4, 0.9, 0.9, 0.9, 0.9],
        };
        for _ in 0..2000 {
            state = mma_step(&state, &p, &level, &bounds, None, &mut rng);
            assert!(state.z.iter().all(|z| (0.0..=1.0).contains(z)));
            assert!(rank_key(&state.bernoulli(&p), &bounds, None).reaches(&threshold));
        }
    }

    /// Long-run fraction of latents below 1/2 under repeated coordinate moves.
    fn stationary_lower_half(kernel: MmaKernel) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut z: Vec<f64> = (0..20_000).map(|_| rng.random()).collect();
        for _ in 0..100 {
            for zi in z.iter_mut() {
                let proposal = *zi - 2.0 + 4.0 * rng.random::<f64>();
                *zi = mma_coordinate(kernel, *zi, proposal, rng.random());
            }
        }
        z.iter().filter(|&&v| v <= 0.5).count() as f64 / z.len() as f64
    }

    #[test]
    fn uniform_kernel_keeps_uniform_law() {
        // 3 sigma of a binomial proportion at n = 20000 is about 0.011.
        assert!((stationary_lower_half(MmaKernel::Uniform) - 0.5).abs() < 0.011);
    }

    #[test]
    fn shifted_ratio_drifts_upwards() {
        // Stationary mass below 1/2 settles near 0.43.
        let f = stationary_lower_half(MmaKernel::ShiftedRatio);
        assert!(f < 0.45 && f > 0.41, "{f}");
    }
}

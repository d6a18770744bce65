use rand::Rng;

use super::theta::{sigmoid_prob, ThetaVector};
use super::{GibbsHyper, OptimizeError};
use crate::channel::{check_cardinality, Layout, Problem, SelectionMask, SystemConfig};
use crate::subset::{
    generate_joint_masks, subset_simulate, ConstraintBounds, JointShape, SubsetSimError,
    SubsetSimParams,
};

/// Cardinality constraints of the joint or user-only problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Constraints {
    pub layout: Layout,
    pub k_min_u: usize,
    pub k_min_d: usize,
}

impl Constraints {
    pub fn new(problem: Problem, config: &SystemConfig) -> Self {
        Self {
            layout: Layout::new(problem, config),
            k_min_u: config.k_min_u,
            k_min_d: config.k_min_d,
        }
    }

    pub fn is_feasible(&self, mask: &SelectionMask) -> bool {
        self.layout
            .decode(mask)
            .and_then(|sel| check_cardinality(&sel, self.k_min_u, self.k_min_d, true))
            .is_ok()
    }

    /// `N` masks that satisfy the constraints, drawn by subset simulation around `p`.
    pub fn feasible_masks<R: Rng + ?Sized>(
        &self,
        p: &[f64],
        count: usize,
        subset: &SubsetSimParams,
        rng: &mut R,
    ) -> Result<Vec<SelectionMask>, SubsetSimError> {
        let layout = &self.layout;
        let params = SubsetSimParams {
            samples: count.max(10),
            ..*subset
        };
        let mut masks = match layout.problem {
            Problem::Joint => {
                let shape = JointShape {
                    uplink_users: layout.uplink_users,
                    downlink_users: layout.downlink_users,
                    antennas: layout.antennas,
                    k_min_u: self.k_min_u,
                    k_min_d: self.k_min_d,
                };
                generate_joint_masks(&shape, p, &params, rng)?
            }
            Problem::UserOnly { rx_antennas } => {
                let (k_u, k_d) = (layout.uplink_users, layout.downlink_users);
                let tx_antennas = layout.antennas.saturating_sub(rx_antennas);
                let up_bounds = ConstraintBounds::new(self.k_min_u, rx_antennas.min(k_u), k_u)?;
                let down_bounds = ConstraintBounds::new(self.k_min_d, tx_antennas.min(k_d), k_d)?;
                let up = subset_simulate(&up_bounds, &p[..k_u], &params, None, rng)?;
                let down = subset_simulate(&down_bounds, &p[k_u..], &params, None, rng)?;
                up.samples
                    .iter()
                    .zip(&down.samples)
                    .map(|(u, d)| SelectionMask::concat(&[u, d]))
                    .collect()
            }
        };
        masks.truncate(count);
        Ok(masks)
    }
}

/// One iteration's samples.
#[derive(Debug, Clone)]
pub struct Population {
    pub samples: Vec<SelectionMask>,
    pub feasible: Vec<bool>,
    /// SE of each feasible, evaluated member; filled in by the optimizer.
    pub objectives: Vec<Option<f64>>,
    pub used_fallback: bool,
}

impl Population {
    pub fn feasible_count(&self) -> usize {
        self.feasible.iter().filter(|&&f| f).count()
    }
}

/// Draw `N` masks bit-by-bit from `p = sigmoid_prob(theta, beta)`.
///
/// If none satisfies the constraints and the fallback is enabled, the whole
/// population is replaced by subset-simulation output, retrying up to
/// `hyper.fallback_retries` extra times before giving up.
pub fn sample_population<R: Rng + ?Sized>(
    theta: &ThetaVector,
    hyper: &GibbsHyper,
    constraints: &Constraints,
    rng: &mut R,
) -> Result<Population, OptimizeError> {
    let p = sigmoid_prob(theta, hyper.beta);
    let samples: Vec<SelectionMask> = (0..hyper.population_size)
        .map(|_| SelectionMask::new(p.iter().map(|&pi| rng.random::<f64>() <= pi).collect()))
        .collect();
    let feasible: Vec<bool> = samples.iter().map(|m| constraints.is_feasible(m)).collect();
    if feasible.iter().any(|&f| f) || !hyper.fallback {
        let n = samples.len();
        return Ok(Population {
            samples,
            feasible,
            objectives: vec![None; n],
            used_fallback: false,
        });
    }

    let attempts = hyper.fallback_retries + 1;
    let mut last_error = None;
    for _ in 0..attempts {
        match constraints.feasible_masks(&p, hyper.population_size, &hyper.subset, rng) {
            Ok(samples) => {
                let feasible: Vec<bool> =
                    samples.iter().map(|m| constraints.is_feasible(m)).collect();
                let n = samples.len();
                return Ok(Population {
                    samples,
                    feasible,
                    objectives: vec![None; n],
                    used_fallback: true,
                });
            }
            // An empty feasible set will not become non-empty on retry.
            Err(e @ SubsetSimError::InfeasibleConstraints { .. }) => {
                return Err(OptimizeError::FallbackExhausted {
                    attempts: 1,
                    source: e,
                });
            }
            Err(e) => last_error = Some(e),
        }
    }
    Err(OptimizeError::FallbackExhausted {
        attempts,
        source: last_error.expect("at least one attempt"),
    })
}

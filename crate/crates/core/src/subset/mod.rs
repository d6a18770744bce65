//! Subset simulation for drawing multivariate Bernoulli vectors under
//! cardinality constraints when direct sampling almost never lands in the
//! feasible set.

mod bounds;
mod joint;
mod mma;
mod simulate;

use thiserror::Error;

pub use bounds::{
    constraint_violation, double_criterion_rank, rank_key, ConstraintBounds, RankKey, Violation,
};
pub use joint::{generate_joint_masks, JointShape};
pub use mma::{acceptance_ratio, mma_coordinate, mma_step, LatentVector, LevelState, MmaKernel};
pub use simulate::{subset_simulate, SubsetSimOutcome, SubsetSimParams};

/// Secondary objective `h` ordering feasible samples; `None` means `h = 0`.
pub type Secondary<'a> = Option<&'a dyn Fn(&[bool]) -> f64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SubsetSimError {
    #[error("no vector of dimension {dim} can satisfy {lower} <= ones <= {upper}")]
    InfeasibleConstraints {
        lower: usize,
        upper: usize,
        dim: usize,
    },
    #[error("level cap reached after {levels} levels with {feasible} feasible samples")]
    LevelCapExceeded { levels: usize, feasible: usize },
    #[error("invalid subset simulation parameters: {0}")]
    InvalidParameters(String),
}

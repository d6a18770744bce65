//! Ground truth and baselines: exhaustive search, a random feasible
//! baseline and greedy successive user selection.

mod exhaustive;
mod greedy;
mod random;
mod space;

use thiserror::Error;

use crate::channel::{EvalCounts, SelectionMask};
use crate::subset::SubsetSimError;

pub use exhaustive::{exhaustive_search, DEFAULT_SPACE_CAP};
pub use greedy::greedy_successive_selection;
pub use random::random_feasible_baseline;
pub use space::SearchSpaceSpec;

/// Best mask found by an oracle or baseline.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub mask: SelectionMask,
    pub se: f64,
    pub counts: EvalCounts,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("search space of 2^{bits} masks exceeds the cap of {cap}")]
    SpaceTooLarge { bits: usize, cap: u64 },
    #[error("no feasible mask")]
    NoFeasibleMask,
    #[error("{0}")]
    Unsupported(String),
    #[error("draws must be at least 1")]
    NoDraws,
    #[error(transparent)]
    Sampling(#[from] SubsetSimError),
}

//! Joint antenna splitting and user scheduling for full-duplex massive MIMO
//! via a Gibbs-distribution statistical combinatorial optimizer.
//!
//! * [`channel`]: channel draws, ZF precoding/detection and the SE objective.
//! * [`gibbs`]: the Bernoulli-parameterized optimizer driven by stochastic
//!   gradient steps on the free energy.
//! * [`subset`]: subset simulation for rare feasible samples.
//! * [`oracles`]: exhaustive search and baseline schedulers.
//! * [`harness`]: config files, seeded Monte Carlo sweeps and CSV output.

pub mod channel;
pub mod gibbs;
pub mod harness;
pub mod oracles;
pub mod subset;

pub use channel::{
    draw_channels, evaluate_selection, ChannelRealization, EvalCounts, EvalError, Evaluator,
    Layout, Problem, SelectionMask, SystemConfig,
};
pub use gibbs::{optimize, GibbsHyper, OptimizeError, OptimizeOutcome, ThetaVector};
pub use oracles::{exhaustive_search, greedy_successive_selection, OracleError, SearchOutcome};
pub use subset::{subset_simulate, ConstraintBounds, SubsetSimError, SubsetSimParams};

//! Population-based Gibbs optimizer over binary selection masks.
//!
//! Masks are drawn from independent Bernoulli bits `p_i = (1 + tanh(beta theta_i)) / 2`
//! and theta is moved by stochastic gradient steps on the free energy
//! towards the best feasible member of each population.

mod measure;
mod optimize;
mod population;
mod theta;

use thiserror::Error;

use crate::subset::{SubsetSimError, SubsetSimParams};

pub use measure::{entropy, free_energy, gibbs_pmf, kl_divergence, log_partition, SupportError};
pub use optimize::{optimize, OptimizeOutcome, RunTrace};
pub use population::{sample_population, Constraints, Population};
pub use theta::{grad_log_prob, log_prob, sigmoid_prob, theta_update, ThetaVector, SATURATION};

/// Optimizer hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GibbsHyper {
    /// Step size. The effective step scales with `alpha * beta^2 * SE`, so the
    /// default is calibrated to the SE range of the bundled channel model.
    pub alpha: f64,
    /// Inverse scale inside the tanh.
    pub beta: f64,
    /// Free-energy temperature; 0 drops the entropy term.
    pub temperature: f64,
    /// Samples per iteration.
    pub population_size: usize,
    /// Iterations whose bests must agree before stopping.
    pub stop_window: usize,
    /// Allowed spread of the iteration bests within the window.
    pub stop_tol: f64,
    pub max_iterations: usize,
    /// Evaluate each distinct mask once per run.
    pub memoize: bool,
    /// Use subset simulation when a population has no feasible member.
    pub fallback: bool,
    /// Extra subset-simulation attempts after the first one fails.
    pub fallback_retries: usize,
    pub subset: SubsetSimParams,
    /// Keep theta after every iteration in the trace.
    pub record_theta: bool,
}

impl Default for GibbsHyper {
    fn default() -> Self {
        Self {
            alpha: 0.25,
            beta: 0.2,
            temperature: 0.0,
            population_size: 100,
            stop_window: 100,
            stop_tol: 1e-6,
            max_iterations: 5000,
            memoize: true,
            fallback: true,
            fallback_retries: 3,
            subset: SubsetSimParams::default(),
            record_theta: false,
        }
    }
}

impl GibbsHyper {
    /// beta = 0.2 up to 10 dB SNR and 0.1 above.
    pub fn beta_for_snr(snr_db: f64) -> f64 {
        if snr_db <= 10.0 {
            0.2
        } else {
            0.1
        }
    }

    pub fn validate(&self) -> Result<(), OptimizeError> {
        let bad = |msg: &str| Err(OptimizeError::InvalidHyper(msg.to_string()));
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return bad("alpha must be positive");
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return bad("beta must be positive");
        }
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            return bad("temperature must be non-negative");
        }
        if self.population_size == 0 {
            return bad("population_size must be at least 1");
        }
        if self.stop_window == 0 {
            return bad("stop_window must be at least 1");
        }
        if !(self.stop_tol.is_finite() && self.stop_tol > 0.0) {
            return bad("stop_tol must be positive");
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be at least 1");
        }
        if !(self.subset.p0 > 0.0 && self.subset.p0 < 1.0) {
            return bad("subset p0 must lie in (0, 1)");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OptimizeError {
    #[error("subset-simulation fallback failed after {attempts} attempt(s): {source}")]
    FallbackExhausted {
        attempts: usize,
        #[source]
        source: SubsetSimError,
    },
    #[error("no feasible sample in {iterations} iterations")]
    NoFeasibleSample { iterations: usize },
    #[error("invalid hyperparameters: {0}")]
    InvalidHyper(String),
}

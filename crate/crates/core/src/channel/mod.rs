//! Single-cell full-duplex channel model and the spectral-efficiency objective.
//!
//! A [`ChannelRealization`] holds every uplink, downlink, user-to-user and
//! residual self-interference coefficient. [`evaluate_selection`] turns a
//! [`SelectionMask`] into the sum rate obtained with ZF precoding at the
//! transmit antennas and ZF detection at the receive antennas.

mod config;
mod draw;
mod evaluate;
mod selection;
mod sinr;
mod zf;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

pub use config::{
    db_to_linear, dbm_to_watts, linear_to_db, ConfigError, LosProbability, PathlossLaw,
    PathlossParams, PowerBudget, SystemConfig, DEFAULT_COND_CAP, DEFAULT_NOISE_DBM,
};
pub use draw::{draw_channels, ChannelRealization, LinkBudgetDraw};
pub use evaluate::{evaluate_decoded, evaluate_selection, EvalCounts, Evaluator};
pub use selection::{check_cardinality, DecodedSelection, Layout, Problem, SelectionMask};
pub use sinr::{downlink_sinr, spectral_efficiency, uplink_sinr};
pub use zf::{hermitian_condition, zf_detector, zf_precoder};

pub type CMatrix = DMatrix<Complex64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("selection is infeasible: {0}")]
    Infeasible(String),
    #[error("channel submatrix is ill-conditioned (condition number {cond:e})")]
    SingularChannel { cond: f64 },
    #[error("mask length {got} does not match layout length {expected}")]
    LayoutMismatch { expected: usize, got: usize },
}

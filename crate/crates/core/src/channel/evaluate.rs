use std::sync::atomic::{AtomicU64, Ordering};

use super::config::SystemConfig;
use super::draw::ChannelRealization;
use super::selection::{check_cardinality, DecodedSelection, Layout, SelectionMask};
use super::sinr::{downlink_sinr, spectral_efficiency, uplink_sinr};
use super::zf::{zf_detector, zf_precoder};
use super::EvalError;

/// SE of an already decoded selection; no cardinality checks.
pub fn evaluate_decoded(
    sel: &DecodedSelection,
    ch: &ChannelRealization,
    config: &SystemConfig,
) -> Result<f64, EvalError> {
    let h_u = ch
        .h_u
        .select_rows(&sel.rx_antennas)
        .select_columns(&sel.uplink_users);
    let h_d = ch
        .h_d
        .select_rows(&sel.downlink_users)
        .select_columns(&sel.tx_antennas);
    let g =
        ch.g.select_rows(&sel.downlink_users)
            .select_columns(&sel.uplink_users);
    let h_si = ch
        .h_si
        .select_rows(&sel.rx_antennas)
        .select_columns(&sel.tx_antennas);

    let w = zf_precoder(&h_d, config.cond_cap)?;
    let p = zf_detector(&h_u, config.cond_cap)?;
    let powers = config.powers();

    let up: Vec<f64> = (0..sel.uplink_users.len())
        .map(|k| uplink_sinr(k, &p, &h_si, &w, &powers))
        .collect();
    let down: Vec<f64> = (0..sel.downlink_users.len())
        .map(|k| downlink_sinr(k, &w, &h_d, &g, &powers))
        .collect();
    Ok(spectral_efficiency(&up, &down))
}

/// Objective of problem (joint or user-only): decode, check cardinalities
/// including the `k_min` floors, then compose ZF precoding/detection, the
/// SINR expressions and the sum rate. Pure in its arguments.
pub fn evaluate_selection(
    mask: &SelectionMask,
    layout: &Layout,
    ch: &ChannelRealization,
    config: &SystemConfig,
) -> Result<f64, EvalError> {
    let sel = layout.decode(mask)?;
    check_cardinality(&sel, config.k_min_u, config.k_min_d, true)?;
    evaluate_decoded(&sel, ch, config)
}

/// Snapshot of an [`Evaluator`]'s counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalCounts {
    /// Calls that produced an SE value.
    pub feasible: u64,
    /// Calls rejected by the cardinality constraints.
    pub infeasible: u64,
    /// Calls that reached the linear algebra but hit an ill-conditioned channel.
    pub singular: u64,
}

impl EvalCounts {
    pub fn total(&self) -> u64 {
        self.feasible + self.infeasible + self.singular
    }
}

impl std::ops::Add for EvalCounts {
    type Output = EvalCounts;

    fn add(self, rhs: EvalCounts) -> EvalCounts {
        EvalCounts {
            feasible: self.feasible + rhs.feasible,
            infeasible: self.infeasible + rhs.infeasible,
            singular: self.singular + rhs.singular,
        }
    }
}

/// Counting objective-function entry point bound to one realization.
///
/// Every call to [`Evaluator::evaluate`] bumps exactly one counter. The
/// counters are atomic so a shared `&Evaluator` can be used from worker threads.
#[derive(Debug)]
pub struct Evaluator<'a> {
    config: &'a SystemConfig,
    channels: &'a ChannelRealization,
    layout: Layout,
    feasible: AtomicU64,
    infeasible: AtomicU64,
    singular: AtomicU64,
}

impl<'a> Evaluator<'a> {
    pub fn new(layout: Layout, channels: &'a ChannelRealization, config: &'a SystemConfig) -> Self {
        Self {
            config,
            channels,
            layout,
            feasible: AtomicU64::new(0),
            infeasible: AtomicU64::new(0),
            singular: AtomicU64::new(0),
        }
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn config(&self) -> &SystemConfig {
        self.config
    }

    pub fn evaluate(&self, mask: &SelectionMask) -> Result<f64, EvalError> {
        self.evaluate_inner(mask, true)
    }

    /// Like [`Evaluator::evaluate`] but without the `k_min` floors; used by
    /// constructive heuristics that pass through under-filled selections.
    pub fn evaluate_relaxed(&self, mask: &SelectionMask) -> Result<f64, EvalError> {
        self.evaluate_inner(mask, false)
    }

    fn evaluate_inner(&self, mask: &SelectionMask, floors: bool) -> Result<f64, EvalError> {
        let result = self.layout.decode(mask).and_then(|sel| {
            check_cardinality(&sel, self.config.k_min_u, self.config.k_min_d, floors)?;
            evaluate_decoded(&sel, self.channels, self.config)
        });
        let counter = match &result {
            Ok(_) => &self.feasible,
            Err(EvalError::SingularChannel { .. }) => &self.singular,
            Err(_) => &self.infeasible,
        };
        counter.fetch_add(1, Ordering::Relaxed);
        result
    }

    /// Cardinality pre-screen; not counted as an objective evaluation.
    pub fn is_cardinality_feasible(&self, mask: &SelectionMask) -> bool {
        self.layout
            .decode(mask)
            .and_then(|sel| check_cardinality(&sel, self.config.k_min_u, self.config.k_min_d, true))
            .is_ok()
    }

    pub fn counts(&self) -> EvalCounts {
        EvalCounts {
            feasible: self.feasible.load(Ordering::Relaxed),
            infeasible: self.infeasible.load(Ordering::Relaxed),
            singular: self.singular.load(Ordering::Relaxed),
        }
    }
}

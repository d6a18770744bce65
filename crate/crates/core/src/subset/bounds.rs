use std::cmp::Ordering;

use super::{Secondary, SubsetSimError};

/// Cardinality constraint `lower <= ||x||_1 <= upper` on `dim`-bit vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstraintBounds {
    pub lower: usize,
    pub upper: usize,
    pub dim: usize,
}

impl ConstraintBounds {
    /// `upper` is clamped to `dim`; an empty range is an error.
    pub fn new(lower: usize, upper: usize, dim: usize) -> Result<Self, SubsetSimError> {
        let upper = upper.min(dim);
        if lower > upper {
            return Err(SubsetSimError::InfeasibleConstraints { lower, upper, dim });
        }
        Ok(Self { lower, upper, dim })
    }

    pub fn contains(&self, ones: usize) -> bool {
        (self.lower..=self.upper).contains(&ones)
    }
}

/// The two one-sided violations and their minimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub below: i64,
    pub above: i64,
    /// `0` when feasible, negative otherwise.
    pub total: i64,
}

pub fn constraint_violation(x: &[bool], bounds: &ConstraintBounds) -> Violation {
    let ones = x.iter().filter(|&&b| b).count() as i64;
    let (a, b) = (bounds.lower as i64, bounds.upper as i64);
    let below = if ones >= a { 0 } else { ones - a };
    let above = if ones <= b { 0 } else { b - ones };
    Violation {
        below,
        above,
        total: below.min(above),
    }
}

/// Double-criterion sort key: violation first, then the secondary objective
/// for feasible samples. Larger is better.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankKey {
    pub violation: i64,
    pub objective: f64,
}

impl RankKey {
    pub fn new(violation: i64, objective: f64) -> Self {
        // Infeasible samples are ordered by violation alone.
        let objective = if violation == 0 { objective } else { 0.0 };
        Self {
            violation,
            objective,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.violation == 0
    }

    pub fn cmp_key(&self, other: &Self) -> Ordering {
        self.violation
            .cmp(&other.violation)
            .then_with(|| self.objective.total_cmp(&other.objective))
    }

    /// Strictly better than `other`.
    pub fn beats(&self, other: &Self) -> bool {
        self.cmp_key(other) == Ordering::Greater
    }

    /// Membership of the intermediate event defined by `threshold`.
    pub fn reaches(&self, threshold: &Self) -> bool {
        self.cmp_key(threshold) != Ordering::Less
    }
}

pub fn rank_key(x: &[bool], bounds: &ConstraintBounds, secondary: Secondary) -> RankKey {
    let v = constraint_violation(x, bounds).total;
    let h = match (v, secondary) {
        (0, Some(h)) => h(x),
        _ => 0.0,
    };
    RankKey::new(v, h)
}

/// Indices of `samples` ordered by decreasing violation (0 first), feasible
/// samples further ordered by decreasing `h`. Ties keep index order.
pub fn double_criterion_rank<S: AsRef<[bool]>>(
    samples: &[S],
    h: &[f64],
    bounds: &ConstraintBounds,
) -> Vec<usize> {
    assert_eq!(samples.len(), h.len());
    let keys: Vec<RankKey> = samples
        .iter()
        .zip(h)
        .map(|(s, &h)| RankKey::new(constraint_violation(s.as_ref(), bounds).total, h))
        .collect();
    rank_by_keys(&keys)
}

pub(crate) fn rank_by_keys(keys: &[RankKey]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&i, &j| keys[j].cmp_key(&keys[i]));
    order
}

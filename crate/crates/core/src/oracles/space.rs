use crate::channel::{Layout, Problem, SystemConfig};

/// Mask space of one problem instance and its cardinality constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchSpaceSpec {
    pub layout: Layout,
    pub k_min_u: usize,
    pub k_min_d: usize,
}

fn choose(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of `k`-subsets of `n` items with `lo <= k <= hi`.
fn band(n: usize, lo: usize, hi: usize) -> u128 {
    (lo..=hi.min(n)).map(|k| choose(n, k)).sum()
}

impl SearchSpaceSpec {
    pub fn new(problem: Problem, config: &SystemConfig) -> Self {
        Self {
            layout: Layout::new(problem, config),
            k_min_u: config.k_min_u,
            k_min_d: config.k_min_d,
        }
    }

    /// Number of mask bits.
    pub fn bits(&self) -> usize {
        self.layout.len()
    }

    /// `2^bits`, saturating at `u128::MAX`.
    pub fn size(&self) -> u128 {
        1u128.checked_shl(self.bits() as u32).unwrap_or(u128::MAX)
    }

    /// Closed-form count of masks meeting all cardinality constraints.
    pub fn feasible_count(&self) -> u128 {
        let l = &self.layout;
        let users = |m_r: usize, m_t: usize| {
            band(l.uplink_users, self.k_min_u, m_r) * band(l.downlink_users, self.k_min_d, m_t)
        };
        match l.problem {
            Problem::UserOnly { rx_antennas } => {
                if rx_antennas > l.antennas {
                    return 0;
                }
                users(rx_antennas, l.antennas - rx_antennas)
            }
            Problem::Joint => (0..=l.antennas)
                .map(|m_r| choose(l.antennas, m_r) * users(m_r, l.antennas - m_r))
                .sum(),
        }
    }

    /// Feasible fraction of the whole space.
    pub fn feasible_fraction(&self) -> f64 {
        self.feasible_count() as f64 / self.size() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::SelectionMask;
    use crate::gibbs::Constraints;

    #[test]
    fn full_scale_joint_space() {
        let spec = SearchSpaceSpec::new(Problem::Joint, &SystemConfig::new(30, 10, 10));
        assert_eq!(spec.bits(), 50);
        assert_eq!(spec.size(), 1u128 << 50);
    }

    #[test]
    fn closed_form_matches_enumeration() {
        for (m, k, kmin) in [(6, 3, 1), (6, 3, 2), (6, 3, 3), (5, 2, 0), (4, 2, 1)] {
            let cfg = SystemConfig::new(m, k, k).with_k_min(kmin, kmin);
            for problem in [Problem::Joint, Problem::UserOnly { rx_antennas: 2 }] {
                let spec = SearchSpaceSpec::new(problem, &cfg);
                let constraints = Constraints::new(problem, &cfg);
                let n = spec.bits();
                let counted = (0..1u64 << n)
                    .filter(|&v| constraints.is_feasible(&SelectionMask::from_value(v, n)))
                    .count() as u128;
                assert_eq!(
                    counted,
                    spec.feasible_count(),
                    "m={m} k={k} kmin={kmin} {problem}"
                );
            }
        }
    }
}

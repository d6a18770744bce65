use std::fmt;

use super::config::SystemConfig;
use super::EvalError;

/// Which decisions the binary feature vector encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Problem {
    /// Users plus one mode bit per antenna (1 = receive, 0 = transmit).
    Joint,
    /// Users only; antennas `0..rx_antennas` receive and the rest transmit.
    UserOnly { rx_antennas: usize },
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Problem::Joint => f.write_str("joint"),
            Problem::UserOnly { rx_antennas } => write!(f, "user-only(m_r={rx_antennas})"),
        }
    }
}

/// Binary feature vector: `K_u` uplink bits, `K_d` downlink bits, then `M`
/// antenna-mode bits in the joint layout.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SelectionMask {
    bits: Vec<bool>,
}

impl SelectionMask {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            bits: vec![false; len],
        }
    }

    /// Bit `i` is `(value >> i) & 1`.
    pub fn from_value(value: u64, len: usize) -> Self {
        assert!(len <= 64, "masks longer than 64 bits have no integer value");
        Self {
            bits: (0..len).map(|i| (value >> i) & 1 == 1).collect(),
        }
    }

    /// Integer value with bit `i` weighted by `2^i`; the exhaustive-search tie-break key.
    pub fn value(&self) -> u64 {
        assert!(self.bits.len() <= 64);
        self.bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i))
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn concat(parts: &[&[bool]]) -> Self {
        Self {
            bits: parts.iter().flat_map(|p| p.iter().copied()).collect(),
        }
    }
}

impl fmt::Display for SelectionMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Index sets activated by a mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedSelection {
    pub uplink_users: Vec<usize>,
    pub downlink_users: Vec<usize>,
    pub rx_antennas: Vec<usize>,
    pub tx_antennas: Vec<usize>,
}

/// Mask layout for a problem on a given system size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub problem: Problem,
    pub uplink_users: usize,
    pub downlink_users: usize,
    pub antennas: usize,
}

impl Layout {
    pub fn new(problem: Problem, config: &SystemConfig) -> Self {
        Self {
            problem,
            uplink_users: config.uplink_users,
            downlink_users: config.downlink_users,
            antennas: config.antennas,
        }
    }

    pub fn len(&self) -> usize {
        let users = self.uplink_users + self.downlink_users;
        match self.problem {
            Problem::Joint => users + self.antennas,
            Problem::UserOnly { .. } => users,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn decode(&self, mask: &SelectionMask) -> Result<DecodedSelection, EvalError> {
        if mask.len() != self.len() {
            return Err(EvalError::LayoutMismatch {
                expected: self.len(),
                got: mask.len(),
            });
        }
        let bits = mask.bits();
        let (up, rest) = bits.split_at(self.uplink_users);
        let (down, antenna_bits) = rest.split_at(self.downlink_users);
        let ones = |s: &[bool]| {
            s.iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| i)
                .collect()
        };
        let (rx_antennas, tx_antennas) = match self.problem {
            Problem::Joint => {
                let rx = ones(antenna_bits);
                let tx = antenna_bits
                    .iter()
                    .enumerate()
                    .filter(|(_, &b)| !b)
                    .map(|(i, _)| i)
                    .collect();
                (rx, tx)
            }
            Problem::UserOnly { rx_antennas } => {
                if rx_antennas > self.antennas {
                    return Err(EvalError::LayoutMismatch {
                        expected: self.antennas,
                        got: rx_antennas,
                    });
                }
                (
                    (0..rx_antennas).collect(),
                    (rx_antennas..self.antennas).collect(),
                )
            }
        };
        Ok(DecodedSelection {
            uplink_users: ones(up),
            downlink_users: ones(down),
            rx_antennas,
            tx_antennas,
        })
    }
}

/// Cardinality constraints `k_min_u <= N_u <= M_r` and `k_min_d <= N_d <= M_t`.
///
/// With `enforce_floors = false` only the upper bounds are checked.
pub fn check_cardinality(
    sel: &DecodedSelection,
    k_min_u: usize,
    k_min_d: usize,
    enforce_floors: bool,
) -> Result<(), EvalError> {
    let (n_u, n_d) = (sel.uplink_users.len(), sel.downlink_users.len());
    let (m_r, m_t) = (sel.rx_antennas.len(), sel.tx_antennas.len());
    if n_u > m_r {
        return Err(EvalError::Infeasible(format!(
            "{n_u} uplink users exceed {m_r} receive antennas"
        )));
    }
    if n_d > m_t {
        return Err(EvalError::Infeasible(format!(
            "{n_d} downlink users exceed {m_t} transmit antennas"
        )));
    }
    if enforce_floors && n_u < k_min_u {
        return Err(EvalError::Infeasible(format!(
            "{n_u} uplink users below minimum {k_min_u}"
        )));
    }
    if enforce_floors && n_d < k_min_d {
        return Err(EvalError::Infeasible(format!(
            "{n_d} downlink users below minimum {k_min_d}"
        )));
    }
    Ok(())
}

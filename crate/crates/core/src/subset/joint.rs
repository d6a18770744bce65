use rand::Rng;

use super::bounds::ConstraintBounds;
use super::simulate::{subset_simulate, SubsetSimParams};
use super::SubsetSimError;
use crate::channel::SelectionMask;

/// Sizes and floors of the joint problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JointShape {
    pub uplink_users: usize,
    pub downlink_users: usize,
    pub antennas: usize,
    pub k_min_u: usize,
    pub k_min_d: usize,
}

impl JointShape {
    pub fn len(&self) -> usize {
        self.uplink_users + self.downlink_users + self.antennas
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn ones(x: &[bool]) -> usize {
    x.iter().filter(|&&b| b).count()
}

/// Feasible joint masks in three steps.
///
/// 1. Subset-simulate `N` uplink vectors with `k_min_u <= ones <= K_u` and `N`
///    downlink vectors with `k_min_d <= ones <= K_d`.
/// 2. Keep the uplink and downlink vectors with the fewest active users
///    (first in batch order on ties), giving `K_u1` and `K_d1`.
/// 3. Subset-simulate `N` antenna vectors with `K_u1 <= ones <= M - K_d1`.
///
/// Every returned mask shares the same user part.
pub fn generate_joint_masks<R: Rng + ?Sized>(
    shape: &JointShape,
    p: &[f64],
    params: &SubsetSimParams,
    rng: &mut R,
) -> Result<Vec<SelectionMask>, SubsetSimError> {
    assert_eq!(
        p.len(),
        shape.len(),
        "probability vector does not match the joint layout"
    );
    let (k_u, k_d, m) = (shape.uplink_users, shape.downlink_users, shape.antennas);
    if shape.k_min_u + shape.k_min_d > m {
        return Err(SubsetSimError::InfeasibleConstraints {
            lower: shape.k_min_u + shape.k_min_d,
            upper: m,
            dim: m,
        });
    }
    let (p_u, rest) = p.split_at(k_u);
    let (p_d, p_m) = rest.split_at(k_d);

    let up = subset_simulate(
        &ConstraintBounds::new(shape.k_min_u, k_u, k_u)?,
        p_u,
        params,
        None,
        rng,
    )?;
    let down = subset_simulate(
        &ConstraintBounds::new(shape.k_min_d, k_d, k_d)?,
        p_d,
        params,
        None,
        rng,
    )?;

    let x_u = up
        .samples
        .iter()
        .min_by_key(|x| ones(x))
        .expect("non-empty batch");
    let x_d = down
        .samples
        .iter()
        .min_by_key(|x| ones(x))
        .expect("non-empty batch");
    let (k_u1, k_d1) = (ones(x_u), ones(x_d));
    if k_u1 + k_d1 > m {
        return Err(SubsetSimError::InfeasibleConstraints {
            lower: k_u1,
            upper: m.saturating_sub(k_d1),
            dim: m,
        });
    }

    let antennas = subset_simulate(
        &ConstraintBounds::new(k_u1, m - k_d1, m)?,
        p_m,
        params,
        None,
        rng,
    )?;
    Ok(antennas
        .samples
        .iter()
        .map(|x_m| SelectionMask::concat(&[x_u, x_d, x_m]))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn forced_users_fix_antenna_bounds() {
        let shape = JointShape {
            uplink_users: 2,
            downlink_users: 3,
            antennas: 8,
            k_min_u: 2,
            k_min_d: 3,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let masks = generate_joint_masks(&shape, &[0.5; 13], &SubsetSimParams::default(), &mut rng)
            .unwrap();
        assert_eq!(masks.len(), 100);
        for mask in &masks {
            let bits = mask.bits();
            assert!(bits[..5].iter().all(|&b| b));
            let rx = ones(&bits[5..]);
            assert!((2..=5).contains(&rx), "rx = {rx}");
        }
    }

    #[test]
    fn pigeonhole_violation_is_rejected() {
        let shape = JointShape {
            uplink_users: 3,
            downlink_users: 3,
            antennas: 4,
            k_min_u: 3,
            k_min_d: 2,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        assert!(matches!(
            generate_joint_masks(&shape, &[0.5; 10], &SubsetSimParams::default(), &mut rng),
            Err(SubsetSimError::InfeasibleConstraints { .. })
        ));
    }

    #[test]
    fn user_part_is_shared() {
        let shape = JointShape {
            uplink_users: 4,
            downlink_users: 4,
            antennas: 6,
            k_min_u: 1,
            k_min_d: 1,
        };
        let mut p = vec![0.05; 14];
        p[8..].iter_mut().for_each(|x| *x = 0.5);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let masks =
            generate_joint_masks(&shape, &p, &SubsetSimParams::default(), &mut rng).unwrap();
        let users = &masks[0].bits()[..8];
        assert!(masks.iter().all(|m| &m.bits()[..8] == users));
    }
}

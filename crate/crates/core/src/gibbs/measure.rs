//! Gibbs measure, KL divergence and free energy on enumerable domains.
//!
//! These are the quantities the optimizer descends on implicitly; they are
//! exposed for checking the optimizer's premises on small domains.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("q[{index}] = 0 where p[{index}] > 0")]
pub struct SupportError {
    pub index: usize,
}

/// `p*(x) = exp(-f(x)/T) / sum_y exp(-f(y)/T)`, stabilized by subtracting `min f`.
pub fn gibbs_pmf(f: &[f64], temperature: f64) -> Vec<f64> {
    assert!(temperature > 0.0, "temperature must be positive");
    let f_min = f.iter().cloned().fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = f
        .iter()
        .map(|v| (-(v - f_min) / temperature).exp())
        .collect();
    let z: f64 = w.iter().sum();
    w.into_iter().map(|v| v / z).collect()
}

/// `ln Z = ln sum_y exp(-f(y)/T)`.
pub fn log_partition(f: &[f64], temperature: f64) -> f64 {
    let f_min = f.iter().cloned().fold(f64::INFINITY, f64::min);
    let s: f64 = f.iter().map(|v| (-(v - f_min) / temperature).exp()).sum();
    -f_min / temperature + s.ln()
}

/// `D(p, q) = sum p ln(p / q)` with `0 ln 0 = 0`.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> Result<f64, SupportError> {
    assert_eq!(p.len(), q.len());
    let mut d = 0.0;
    for (index, (&pi, &qi)) in p.iter().zip(q).enumerate() {
        if pi > 0.0 {
            if qi <= 0.0 {
                return Err(SupportError { index });
            }
            d += pi * (pi / qi).ln();
        }
    }
    Ok(d)
}

/// Shannon entropy in nats.
pub fn entropy(p: &[f64]) -> f64 {
    -p.iter()
        .filter(|&&v| v > 0.0)
        .map(|v| v * v.ln())
        .sum::<f64>()
}

/// `F = sum p f + T sum p ln p`.
pub fn free_energy(p: &[f64], f: &[f64], temperature: f64) -> f64 {
    assert_eq!(p.len(), f.len());
    let expected: f64 = p.iter().zip(f).map(|(p, f)| p * f).sum();
    expected - temperature * entropy(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_objective_is_uniform() {
        let p = gibbs_pmf(&[3.0; 8], 0.7);
        assert!(p.iter().all(|v| (v - 0.125).abs() < 1e-15));
    }

    #[test]
    fn two_point_ratio() {
        let p = gibbs_pmf(&[0.0, 2f64.ln()], 1.0);
        assert!((p[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((p[1] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn kl_examples() {
        assert_eq!(kl_divergence(&[0.2, 0.8], &[0.2, 0.8]).unwrap(), 0.0);
        assert!((kl_divergence(&[1.0, 0.0], &[0.5, 0.5]).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert_eq!(
            kl_divergence(&[0.5, 0.5], &[1.0, 0.0]),
            Err(SupportError { index: 1 })
        );
    }

    #[test]
    fn free_energy_limits() {
        let f = [1.0, 2.0, 4.0];
        let p = [0.2, 0.3, 0.5];
        assert!((free_energy(&p, &f, 0.0) - (0.2 + 0.6 + 2.0)).abs() < 1e-15);
        let c = [5.0; 4];
        let u = [0.25; 4];
        assert!((free_energy(&u, &c, 2.0) - (5.0 - 2.0 * 4f64.ln())).abs() < 1e-14);
        assert!(free_energy(&[0.7, 0.1, 0.1, 0.1], &c, 2.0) > free_energy(&u, &c, 2.0));
    }

    #[test]
    fn log_partition_matches_direct_sum() {
        let f = [0.3, -1.2, 2.5];
        let direct: f64 = f.iter().map(|v: &f64| (-v / 0.9).exp()).sum::<f64>().ln();
        assert!((log_partition(&f, 0.9) - direct).abs() < 1e-14);
    }
}

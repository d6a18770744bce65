use super::GibbsHyper;

/// `|beta * theta|` is clamped here so that `p` stays strictly inside `(0, 1)` in f64.
pub const SATURATION: f64 = 18.0;

/// Bernoulli parameters of the search distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaVector(pub Vec<f64>);

impl ThetaVector {
    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// `p_i = (1 + tanh(beta * theta_i)) / 2`.
pub fn sigmoid_prob(theta: &ThetaVector, beta: f64) -> Vec<f64> {
    theta
        .0
        .iter()
        .map(|t| 0.5 * (1.0 + (beta * t).tanh()))
        .collect()
}

/// `ln p(x) = sum_i ln(x_i p_i + (1 - x_i)(1 - p_i))`, accumulated in the log domain.
pub fn log_prob(x: &[bool], p: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), p.len());
    x.iter()
        .zip(p)
        .map(|(&x, &p)| if x { p.ln() } else { (1.0 - p).ln() })
        .sum()
}

/// `d ln p(x) / d theta_i = 2 beta (x_i - p_i)`.
pub fn grad_log_prob(x: &[bool], p: &[f64], beta: f64) -> Vec<f64> {
    x.iter()
        .zip(p)
        .map(|(&x, &p)| 2.0 * beta * (f64::from(u8::from(x)) - p))
        .collect()
}

/// Stochastic-gradient step on the free energy:
/// `theta_i <- theta_i - 2 alpha beta (f(x) + T (1 + ln p(x))) (x_i - p_i)`.
///
/// `f_x` is the value being minimized, so maximizers pass `-SE`. `p` must be
/// the probabilities `x` was drawn from.
pub fn theta_update(
    theta: &ThetaVector,
    x: &[bool],
    f_x: f64,
    p: &[f64],
    hyper: &GibbsHyper,
) -> ThetaVector {
    let entropy_term = if hyper.temperature == 0.0 {
        0.0
    } else {
        hyper.temperature * (1.0 + log_prob(x, p))
    };
    let coeff = f_x + entropy_term;
    let limit = SATURATION / hyper.beta;
    let grad = grad_log_prob(x, p, hyper.beta);
    ThetaVector(
        theta
            .0
            .iter()
            .zip(grad)
            .map(|(t, g)| (t - hyper.alpha * coeff * g).clamp(-limit, limit))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hyper(alpha: f64, beta: f64, temperature: f64) -> GibbsHyper {
        GibbsHyper {
            alpha,
            beta,
            temperature,
            ..GibbsHyper::default()
        }
    }

    #[test]
    fn sigmoid_values() {
        let p = sigmoid_prob(&ThetaVector(vec![0.0, 5.0, 1e6, -1e6]), 0.2);
        assert_eq!(p[0], 0.5);
        // 0.5 * (1 + tanh(1)) to 15 digits.
        assert!((p[1] - 0.880_797_077_977_882).abs() < 1e-14);
        assert!(p[2] > 1.0 - 1e-12);
        assert!(p[3] < 1e-12);
    }

    #[test]
    fn uniform_log_prob() {
        let p = vec![0.5; 10];
        for v in [0u64, 0b1010, 1023] {
            let x: Vec<bool> = (0..10).map(|i| (v >> i) & 1 == 1).collect();
            assert!((log_prob(&x, &p) + 10.0 * 2f64.ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn log_prob_direct_and_point_mass() {
        assert!(
            (log_prob(&[true, false], &[0.9, 0.2]) - (0.9f64.ln() + 0.8f64.ln())).abs() < 1e-15
        );
        let near = log_prob(&[true, false, true], &[1.0 - 1e-12, 1e-12, 1.0 - 1e-12]);
        assert!(near.abs() < 1e-10);
    }

    #[test]
    fn gradient_examples() {
        assert!((grad_log_prob(&[true], &[0.5], 0.2)[0] - 0.2).abs() < 1e-15);
        assert_eq!(
            grad_log_prob(&[true, false], &[1.0, 0.0], 0.3),
            vec![0.0, 0.0]
        );
    }

    #[test]
    fn update_hand_example() {
        let theta = ThetaVector::zeros(1);
        let p = sigmoid_prob(&theta, 0.2);
        let next = theta_update(&theta, &[true], -1.0, &p, &hyper(0.5, 0.2, 0.0));
        assert!((next.0[0] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn zero_coefficient_leaves_theta() {
        // f(x) = -T (1 + ln p(x)) cancels the bracket.
        let theta = ThetaVector(vec![0.3, -0.7]);
        let p = sigmoid_prob(&theta, 0.2);
        let x = [true, false];
        let t = 0.8;
        let f = -t * (1.0 + log_prob(&x, &p));
        let next = theta_update(&theta, &x, f, &p, &hyper(0.5, 0.2, t));
        for (a, b) in next.0.iter().zip(&theta.0) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn good_bits_are_reinforced() {
        let theta = ThetaVector(vec![0.4, -1.0, 2.0]);
        let p = sigmoid_prob(&theta, 0.2);
        let next = theta_update(
            &theta,
            &[true, true, false],
            -3.0,
            &p,
            &hyper(0.5, 0.2, 0.0),
        );
        assert!(next.0[0] > theta.0[0]);
        assert!(next.0[1] > theta.0[1]);
        assert!(next.0[2] < theta.0[2]);
    }

    #[test]
    fn saturation_keeps_probabilities_interior() {
        let mut theta = ThetaVector::zeros(2);
        let h = hyper(0.5, 0.2, 0.0);
        for _ in 0..200 {
            let p = sigmoid_prob(&theta, h.beta);
            theta = theta_update(&theta, &[true, false], -50.0, &p, &h);
        }
        let p = sigmoid_prob(&theta, h.beta);
        assert!(p[0] < 1.0 && p[1] > 0.0);
        assert!(log_prob(&[false, true], &p).is_finite());
    }
}

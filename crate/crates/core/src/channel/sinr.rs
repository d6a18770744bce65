use num_complex::Complex64;

use super::config::PowerBudget;
use super::CMatrix;

/// SINR of downlink stream `k`.
///
/// `w` is the `M_t x N_d` precoder, `h_d` the `N_d x M_t` downlink channel and
/// `g` the `N_d x N_u` user-to-user coupling of the active users.
pub fn downlink_sinr(
    k: usize,
    w: &CMatrix,
    h_d: &CMatrix,
    g: &CMatrix,
    powers: &PowerBudget,
) -> f64 {
    let gain: Complex64 = h_d
        .row(k)
        .iter()
        .zip(w.column(k).iter())
        .map(|(h, w)| h * w)
        .sum();
    let interference: f64 = g.row(k).iter().map(|g| powers.p_u * g.norm_sqr()).sum();
    powers.p_d * gain.norm_sqr() / (interference + powers.noise_dl)
}

/// SINR of uplink stream `k` after ZF detection.
///
/// `p` is the `N_u x M_r` detector, `h_si` the `M_r x M_t` residual SI block
/// and `w` the `M_t x N_d` precoder.
pub fn uplink_sinr(
    k: usize,
    p: &CMatrix,
    h_si: &CMatrix,
    w: &CMatrix,
    powers: &PowerBudget,
) -> f64 {
    let p_k = p.row(k);
    let leak = p_k * h_si;
    let si: f64 = (leak * w).iter().map(|z| z.norm_sqr()).sum();
    let noise = powers.noise_bs * p_k.norm_squared();
    powers.p_u / (powers.p_d * si + noise)
}

/// Sum rate in bits/s/Hz over all active streams.
pub fn spectral_efficiency(uplink: &[f64], downlink: &[f64]) -> f64 {
    uplink
        .iter()
        .chain(downlink)
        .map(|g| (1.0 + g).log2())
        .sum()
}

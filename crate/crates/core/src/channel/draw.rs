use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use super::config::{db_to_linear, PathlossLaw, SystemConfig};
use super::CMatrix;

/// Large-scale budget of one link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudgetDraw {
    pub distance_m: f64,
    pub los: bool,
    pub pathloss_db: f64,
    pub shadow_db: f64,
}

impl LinkBudgetDraw {
    /// Linear power gain including shadowing.
    pub fn gain(&self) -> f64 {
        db_to_linear(-(self.pathloss_db + self.shadow_db))
    }
}

/// One draw of every channel in the cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// `M x K_u`, column `j` is uplink user `j` to all antennas.
    pub h_u: CMatrix,
    /// `K_d x M`, row `k` is all antennas to downlink user `k`.
    pub h_d: CMatrix,
    /// `K_d x K_u`, entry `(k, j)` couples uplink user `j` into downlink user `k`.
    pub g: CMatrix,
    /// `M x M`, entry `(r, t)` couples transmit antenna `t` into receive antenna `r`.
    pub h_si: CMatrix,
    pub uplink_links: Vec<LinkBudgetDraw>,
    pub downlink_links: Vec<LinkBudgetDraw>,
}

impl ChannelRealization {
    /// FNV-1a hash over the bit patterns of every matrix entry.
    pub fn fingerprint(&self) -> u64 {
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
        for m in [&self.h_u, &self.h_d, &self.g, &self.h_si] {
            for z in m.iter() {
                for word in [z.re.to_bits(), z.im.to_bits()] {
                    for byte in word.to_le_bytes() {
                        hash ^= u64::from(byte);
                        hash = hash.wrapping_mul(0x0100_0000_01b3);
                    }
                }
            }
        }
        hash
    }

    pub fn is_finite(&self) -> bool {
        [&self.h_u, &self.h_d, &self.g, &self.h_si]
            .iter()
            .all(|m| m.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
    }
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn shadowing<R: Rng + ?Sized>(std_db: f64, rng: &mut R) -> f64 {
    if std_db == 0.0 {
        0.0
    } else {
        Normal::new(0.0, std_db)
            .expect("shadowing std validated")
            .sample(rng)
    }
}

/// Uniform position over the annulus `[min_dist_m, cell_radius_m]`, BS at the origin.
fn drop_user<R: Rng + ?Sized>(config: &SystemConfig, rng: &mut R) -> (f64, f64) {
    let r0 = config.min_dist_m * config.min_dist_m;
    let r1 = config.cell_radius_m * config.cell_radius_m;
    let radius = (r0 + rng.random::<f64>() * (r1 - r0)).sqrt();
    let angle = rng.random::<f64>() * 2.0 * PI;
    (radius * angle.cos(), radius * angle.sin())
}

fn bs_link<R: Rng + ?Sized>(config: &SystemConfig, distance_m: f64, rng: &mut R) -> LinkBudgetDraw {
    let los = rng.random::<f64>() < config.pathloss.los_probability.at(distance_m);
    let (law, std_db): (PathlossLaw, f64) = if los {
        (config.pathloss.bs_user_los, config.shadow_std_los_db)
    } else {
        (config.pathloss.bs_user_nlos, config.shadow_std_nlos_db)
    };
    LinkBudgetDraw {
        distance_m,
        los,
        pathloss_db: law.loss_db(distance_m),
        shadow_db: shadowing(std_db, rng),
    }
}

/// Draw one channel realization.
///
/// Users are dropped uniformly over the annulus; each BS-user link gets a
/// LOS/NLOS state, a log-normal shadowing term and i.i.d. unit-variance
/// Rayleigh fading across the array. User-to-user links are NLOS. The SI
/// matrix is Rician with mean `sqrt(si_power * kappa / (1 + kappa)) * si_mean`
/// and per-entry variance `si_power / (1 + kappa)`.
///
/// The draw order is fixed, so a seeded `rng` gives bit-identical output.
pub fn draw_channels<R: Rng + ?Sized>(config: &SystemConfig, rng: &mut R) -> ChannelRealization {
    let m = config.antennas;
    let k_u = config.uplink_users;
    let k_d = config.downlink_users;

    let up_pos: Vec<(f64, f64)> = (0..k_u).map(|_| drop_user(config, rng)).collect();
    let down_pos: Vec<(f64, f64)> = (0..k_d).map(|_| drop_user(config, rng)).collect();

    let mut uplink_links = Vec::with_capacity(k_u);
    let mut h_u = DMatrix::zeros(m, k_u);
    for (j, &(x, y)) in up_pos.iter().enumerate() {
        let link = bs_link(config, x.hypot(y), rng);
        let amp = link.gain().sqrt();
        for i in 0..m {
            h_u[(i, j)] = complex_gaussian(rng) * amp;
        }
        uplink_links.push(link);
    }

    let mut downlink_links = Vec::with_capacity(k_d);
    let mut h_d = DMatrix::zeros(k_d, m);
    for (k, &(x, y)) in down_pos.iter().enumerate() {
        let link = bs_link(config, x.hypot(y), rng);
        let amp = link.gain().sqrt();
        for i in 0..m {
            h_d[(k, i)] = complex_gaussian(rng) * amp;
        }
        downlink_links.push(link);
    }

    let mut g = DMatrix::zeros(k_d, k_u);
    for (k, &(xd, yd)) in down_pos.iter().enumerate() {
        for (j, &(xu, yu)) in up_pos.iter().enumerate() {
            let d = (xd - xu).hypot(yd - yu).max(config.min_u2u_dist_m);
            let link = LinkBudgetDraw {
                distance_m: d,
                los: false,
                pathloss_db: config.pathloss.user_to_user.loss_db(d),
                shadow_db: shadowing(config.shadow_std_u2u_db, rng),
            };
            g[(k, j)] = complex_gaussian(rng) * link.gain().sqrt();
        }
    }

    let mean_scale = (config.si_power * config.kappa / (1.0 + config.kappa)).sqrt();
    let scatter_scale = (config.si_power / (1.0 + config.kappa)).sqrt();
    let mut h_si = DMatrix::zeros(m, m);
    for r in 0..m {
        for t in 0..m {
            h_si[(r, t)] =
                config.si_mean[(r, t)] * mean_scale + complex_gaussian(rng) * scatter_scale;
        }
    }

    ChannelRealization {
        h_u,
        h_d,
        g,
        h_si,
        uplink_links,
        downlink_links,
    }
}

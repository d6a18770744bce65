use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use super::CMatrix;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid system configuration: {0}")]
pub struct ConfigError(pub String);

/// Log-distance pathloss law `PL(d) = intercept + slope * log10(d_km)` in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathlossLaw {
    pub intercept_db: f64,
    pub slope_db: f64,
}

impl PathlossLaw {
    pub const fn new(intercept_db: f64, slope_db: f64) -> Self {
        Self {
            intercept_db,
            slope_db,
        }
    }

    /// A law that is 0 dB at every distance.
    pub const fn unity() -> Self {
        Self::new(0.0, 0.0)
    }

    pub fn loss_db(&self, distance_m: f64) -> f64 {
        self.intercept_db + self.slope_db * (distance_m / 1000.0).log10()
    }

    /// Linear power gain `10^(-PL/10)`.
    pub fn gain(&self, distance_m: f64) -> f64 {
        db_to_linear(-self.loss_db(distance_m))
    }
}

/// Probability that a BS-user link is line-of-sight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LosProbability {
    /// Pico-cell rule `0.5 - min(0.5, 5 exp(-0.156/d)) + min(0.5, 5 exp(-d/0.03))`, `d` in km.
    Pico,
    /// Distance-independent probability.
    Fixed(f64),
}

impl LosProbability {
    pub fn at(&self, distance_m: f64) -> f64 {
        match *self {
            LosProbability::Pico => {
                let d_km = distance_m / 1000.0;
                let p = 0.5 - (5.0 * (-0.156 / d_km).exp()).min(0.5)
                    + (5.0 * (-d_km / 0.03).exp()).min(0.5);
                p.clamp(0.0, 1.0)
            }
            LosProbability::Fixed(p) => p,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathlossParams {
    pub bs_user_los: PathlossLaw,
    pub bs_user_nlos: PathlossLaw,
    /// User-to-user links are always NLOS.
    pub user_to_user: PathlossLaw,
    pub los_probability: LosProbability,
}

impl Default for PathlossParams {
    /// Pico-cell constants at 2 GHz.
    fn default() -> Self {
        Self {
            bs_user_los: PathlossLaw::new(103.8, 20.9),
            bs_user_nlos: PathlossLaw::new(145.4, 37.5),
            user_to_user: PathlossLaw::new(175.78, 40.0),
            los_probability: LosProbability::Pico,
        }
    }
}

/// Transmit powers and noise levels entering the SINR expressions, all linear watts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerBudget {
    pub p_u: f64,
    pub p_d: f64,
    pub noise_bs: f64,
    pub noise_dl: f64,
}

/// Physical and geometric parameters of the single-cell full-duplex system.
///
/// Powers and variances are linear watts. Construct with
/// [`SystemConfig::new`] (which applies the pico-cell defaults) and call
/// [`SystemConfig::validate`] after editing fields by hand.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub antennas: usize,
    pub uplink_users: usize,
    pub downlink_users: usize,
    pub p_u: f64,
    pub p_d: f64,
    pub noise_bs: f64,
    pub noise_dl: f64,
    /// Rician factor of the residual SI channel.
    pub kappa: f64,
    pub si_power: f64,
    /// Mean SI matrix, `antennas x antennas`.
    pub si_mean: CMatrix,
    pub cell_radius_m: f64,
    pub min_dist_m: f64,
    /// Floor applied to user-to-user distances before the pathloss law.
    pub min_u2u_dist_m: f64,
    pub carrier_ghz: f64,
    pub shadow_std_los_db: f64,
    pub shadow_std_nlos_db: f64,
    pub shadow_std_u2u_db: f64,
    pub pathloss: PathlossParams,
    pub k_min_u: usize,
    pub k_min_d: usize,
    /// Gram-matrix condition number beyond which ZF is treated as undefined.
    pub cond_cap: f64,
}

pub const DEFAULT_NOISE_DBM: f64 = -95.0;
pub const DEFAULT_COND_CAP: f64 = 1e10;

impl SystemConfig {
    /// Pico-cell defaults: 40 m radius, 10 m minimum distance, 2 GHz,
    /// 3/4/6 dB shadowing, kappa = 1, residual SI power -100 dB, all-ones
    /// SI mean, unit uplink/downlink power and one active user per direction.
    pub fn new(antennas: usize, uplink_users: usize, downlink_users: usize) -> Self {
        let noise = dbm_to_watts(DEFAULT_NOISE_DBM);
        Self {
            antennas,
            uplink_users,
            downlink_users,
            p_u: 1.0,
            p_d: 1.0,
            noise_bs: noise,
            noise_dl: noise,
            kappa: 1.0,
            si_power: db_to_linear(-100.0),
            si_mean: DMatrix::from_element(antennas, antennas, Complex64::new(1.0, 0.0)),
            cell_radius_m: 40.0,
            min_dist_m: 10.0,
            min_u2u_dist_m: 1.0,
            carrier_ghz: 2.0,
            shadow_std_los_db: 3.0,
            shadow_std_nlos_db: 4.0,
            shadow_std_u2u_db: 6.0,
            pathloss: PathlossParams::default(),
            k_min_u: 1,
            k_min_d: 1,
            cond_cap: DEFAULT_COND_CAP,
        }
    }

    pub fn with_k_min(mut self, k_min_u: usize, k_min_d: usize) -> Self {
        self.k_min_u = k_min_u;
        self.k_min_d = k_min_d;
        self
    }

    pub fn with_powers(mut self, p_u: f64, p_d: f64) -> Self {
        self.p_u = p_u;
        self.p_d = p_d;
        self
    }

    pub fn powers(&self) -> PowerBudget {
        PowerBudget {
            p_u: self.p_u,
            p_d: self.p_d,
            noise_bs: self.noise_bs,
            noise_dl: self.noise_dl,
        }
    }

    /// Expected BS-user pathloss gain at `distance_m`, averaged over the
    /// LOS/NLOS state and excluding shadowing.
    pub fn mean_bs_gain(&self, distance_m: f64) -> f64 {
        let p_los = self.pathloss.los_probability.at(distance_m);
        p_los * self.pathloss.bs_user_los.gain(distance_m)
            + (1.0 - p_los) * self.pathloss.bs_user_nlos.gain(distance_m)
    }

    /// Uplink power that yields `snr_db` at the BS for a user at
    /// `reference_m`: `SNR = p_u * mean_bs_gain(reference_m) / noise_bs`.
    pub fn uplink_power_for_snr(&self, snr_db: f64, reference_m: f64) -> f64 {
        db_to_linear(snr_db) * self.noise_bs / self.mean_bs_gain(reference_m)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |msg: String| Err(ConfigError(msg));
        if self.antennas < 2 {
            return fail(format!("antennas must be >= 2, got {}", self.antennas));
        }
        if self.uplink_users < 1 || self.downlink_users < 1 {
            return fail("at least one uplink and one downlink user are required".into());
        }
        for (name, v) in [
            ("p_u", self.p_u),
            ("p_d", self.p_d),
            ("noise_bs", self.noise_bs),
            ("noise_dl", self.noise_dl),
            ("si_power", self.si_power),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return fail(format!("{name} must be finite and > 0, got {v}"));
            }
        }
        if !(self.kappa.is_finite() && self.kappa >= 0.0) {
            return fail(format!("kappa must be >= 0, got {}", self.kappa));
        }
        if self.si_mean.nrows() != self.antennas || self.si_mean.ncols() != self.antennas {
            return fail(format!(
                "si_mean must be {m}x{m}, got {}x{}",
                self.si_mean.nrows(),
                self.si_mean.ncols(),
                m = self.antennas
            ));
        }
        if !(self.min_dist_m > 0.0 && self.min_dist_m < self.cell_radius_m) {
            return fail(format!(
                "need 0 < min_dist_m < cell_radius_m, got {} and {}",
                self.min_dist_m, self.cell_radius_m
            ));
        }
        if self.min_u2u_dist_m.is_nan() || self.min_u2u_dist_m <= 0.0 {
            return fail("min_u2u_dist_m must be > 0".into());
        }
        for (name, v) in [
            ("shadow_std_los_db", self.shadow_std_los_db),
            ("shadow_std_nlos_db", self.shadow_std_nlos_db),
            ("shadow_std_u2u_db", self.shadow_std_u2u_db),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return fail(format!("{name} must be >= 0, got {v}"));
            }
        }
        let laws = [
            ("bs_user_los", self.pathloss.bs_user_los),
            ("bs_user_nlos", self.pathloss.bs_user_nlos),
            ("user_to_user", self.pathloss.user_to_user),
        ];
        for (name, law) in laws {
            if !(law.slope_db >= 0.0 && law.intercept_db.is_finite()) {
                return fail(format!(
                    "pathloss law {name} must be finite and non-decreasing in distance"
                ));
            }
        }
        if let LosProbability::Fixed(p) = self.pathloss.los_probability {
            if !(0.0..=1.0).contains(&p) {
                return fail(format!("los probability must lie in [0, 1], got {p}"));
            }
        }
        if self.k_min_u > self.uplink_users {
            return fail(format!(
                "k_min_u = {} exceeds uplink_users = {}",
                self.k_min_u, self.uplink_users
            ));
        }
        if self.k_min_d > self.downlink_users {
            return fail(format!(
                "k_min_d = {} exceeds downlink_users = {}",
                self.k_min_d, self.downlink_users
            ));
        }
        if self.cond_cap.is_nan() || self.cond_cap <= 1.0 {
            return fail("cond_cap must be > 1".into());
        }
        Ok(())
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm - 30.0)
}

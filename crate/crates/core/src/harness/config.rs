use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Deserializer};

use super::HarnessError;
use crate::channel::{db_to_linear, dbm_to_watts, Problem, SystemConfig};
use crate::gibbs::GibbsHyper;
use crate::oracles::DEFAULT_SPACE_CAP;
use crate::subset::{MmaKernel, SubsetSimParams};

/// Scheduler run for every cell of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    GsJ,
    GsU,
    EsJ,
    EsU,
    GreedyU,
    RandomJ,
    RandomU,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::GsJ,
        Algorithm::GsU,
        Algorithm::EsJ,
        Algorithm::EsU,
        Algorithm::GreedyU,
        Algorithm::RandomJ,
        Algorithm::RandomU,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::GsJ => "GS-J",
            Algorithm::GsU => "GS-U",
            Algorithm::EsJ => "ES-J",
            Algorithm::EsU => "ES-U",
            Algorithm::GreedyU => "GREEDY-U",
            Algorithm::RandomJ => "RANDOM-J",
            Algorithm::RandomU => "RANDOM-U",
        }
    }

    /// Stable index used in seed derivation and row ordering.
    pub fn index(self) -> u64 {
        self as u64
    }

    pub fn problem(self, rx_antennas: usize) -> Problem {
        match self {
            Algorithm::GsJ | Algorithm::EsJ | Algorithm::RandomJ => Problem::Joint,
            _ => Problem::UserOnly { rx_antennas },
        }
    }

    /// The exhaustive counterpart of a Gibbs algorithm.
    pub fn exhaustive_counterpart(self) -> Option<Algorithm> {
        match self {
            Algorithm::GsJ => Some(Algorithm::EsJ),
            Algorithm::GsU => Some(Algorithm::EsU),
            _ => None,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let names: Vec<&str> = Algorithm::ALL.iter().map(|a| a.name()).collect();
                format!(
                    "unknown algorithm `{s}`; expected one of {}",
                    names.join(", ")
                )
            })
    }
}

impl<'de> Deserialize<'de> for Algorithm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn deserialize_kernel<'de, D: Deserializer<'de>>(d: D) -> Result<MmaKernel, D::Error> {
    match String::deserialize(d)?.as_str() {
        "uniform" => Ok(MmaKernel::Uniform),
        "shifted-ratio" => Ok(MmaKernel::ShiftedRatio),
        other => Err(serde::de::Error::custom(format!(
            "unknown mma_kernel `{other}`; expected `uniform` or `shifted-ratio`"
        ))),
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct SystemSection {
    antennas: usize,
    uplink_users: usize,
    downlink_users: usize,
    rx_antennas: usize,
    cell_radius_m: f64,
    min_dist_m: f64,
    min_u2u_dist_m: f64,
    carrier_ghz: f64,
    shadow_los_db: f64,
    shadow_nlos_db: f64,
    shadow_u2u_db: f64,
    kappa: f64,
    si_power_db: f64,
    noise_bs_dbm: f64,
    noise_dl_dbm: f64,
    cond_cap: f64,
    snr_reference_m: Option<f64>,
}

impl Default for SystemSection {
    fn default() -> Self {
        let base = SystemConfig::new(6, 3, 3);
        Self {
            antennas: base.antennas,
            uplink_users: base.uplink_users,
            downlink_users: base.downlink_users,
            rx_antennas: 2,
            cell_radius_m: base.cell_radius_m,
            min_dist_m: base.min_dist_m,
            min_u2u_dist_m: base.min_u2u_dist_m,
            carrier_ghz: base.carrier_ghz,
            shadow_los_db: base.shadow_std_los_db,
            shadow_nlos_db: base.shadow_std_nlos_db,
            shadow_u2u_db: base.shadow_std_u2u_db,
            kappa: base.kappa,
            si_power_db: -100.0,
            noise_bs_dbm: -95.0,
            noise_dl_dbm: -95.0,
            cond_cap: base.cond_cap,
            snr_reference_m: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct SweepSection {
    snr_db: Vec<f64>,
    eta: Vec<f64>,
    k_min: Vec<usize>,
    realizations: usize,
    algorithms: Vec<Algorithm>,
    seed: u64,
    random_draws: usize,
    exhaustive_cap: u64,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            snr_db: vec![0.0, 10.0, 20.0],
            eta: vec![1.0],
            k_min: vec![1],
            realizations: 50,
            algorithms: vec![
                Algorithm::GsJ,
                Algorithm::GsU,
                Algorithm::EsJ,
                Algorithm::EsU,
            ],
            seed: 0,
            random_draws: 100,
            exhaustive_cap: DEFAULT_SPACE_CAP,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct GibbsSection {
    alpha: f64,
    beta: Option<f64>,
    temperature: f64,
    population_size: usize,
    stop_window: usize,
    stop_tol: f64,
    max_iterations: usize,
    memoize: bool,
    fallback: bool,
    fallback_retries: usize,
    subset_samples: usize,
    subset_p0: f64,
    subset_level_cap: usize,
    #[serde(deserialize_with = "deserialize_kernel")]
    mma_kernel: MmaKernel,
}

impl Default for GibbsSection {
    fn default() -> Self {
        let h = GibbsHyper::default();
        Self {
            alpha: h.alpha,
            beta: None,
            temperature: h.temperature,
            population_size: h.population_size,
            stop_window: h.stop_window,
            stop_tol: h.stop_tol,
            max_iterations: h.max_iterations,
            memoize: h.memoize,
            fallback: h.fallback,
            fallback_retries: h.fallback_retries,
            subset_samples: h.subset.samples,
            subset_p0: h.subset.p0,
            subset_level_cap: h.subset.level_cap,
            mma_kernel: h.subset.kernel,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct FileConfig {
    system: SystemSection,
    sweep: SweepSection,
    gibbs: GibbsSection,
}

/// A validated experiment: system, sweep grid and optimizer settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSweep {
    /// Base system; `k_min` and powers are set per scenario point.
    pub system: SystemConfig,
    /// Receive antennas of the fixed split used by user-only algorithms.
    pub rx_antennas: usize,
    /// Distance at which the configured SNR is met.
    pub snr_reference_m: f64,
    pub snr_db: Vec<f64>,
    /// `p_d / p_u`.
    pub eta: Vec<f64>,
    /// Applied to both directions.
    pub k_min: Vec<usize>,
    pub realizations: usize,
    pub algorithms: Vec<Algorithm>,
    pub master_seed: u64,
    pub random_draws: usize,
    pub exhaustive_cap: u64,
    pub gibbs: GibbsHyper,
    /// Fixed beta; `None` selects it from the SNR.
    pub beta: Option<f64>,
}

impl Default for ScenarioSweep {
    fn default() -> Self {
        parse_config("").expect("defaults are valid")
    }
}

/// One `(snr, eta, k_min)` combination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioPoint {
    pub id: usize,
    pub snr_db: f64,
    pub eta: f64,
    pub k_min: usize,
}

impl ScenarioSweep {
    /// Points ordered by `k_min`, then `eta`, then SNR.
    pub fn points(&self) -> Vec<ScenarioPoint> {
        let mut out = Vec::new();
        for &k_min in &self.k_min {
            for &eta in &self.eta {
                for &snr_db in &self.snr_db {
                    out.push(ScenarioPoint {
                        id: out.len(),
                        snr_db,
                        eta,
                        k_min,
                    });
                }
            }
        }
        out
    }

    /// System of one point: `k_min` floors, `p_u` from the SNR and `p_d = eta p_u`.
    pub fn system_at(&self, point: &ScenarioPoint) -> SystemConfig {
        let p_u = self
            .system
            .uplink_power_for_snr(point.snr_db, self.snr_reference_m);
        self.system
            .clone()
            .with_k_min(point.k_min, point.k_min)
            .with_powers(p_u, point.eta * p_u)
    }

    pub fn hyper_at(&self, point: &ScenarioPoint) -> GibbsHyper {
        GibbsHyper {
            beta: self
                .beta
                .unwrap_or_else(|| GibbsHyper::beta_for_snr(point.snr_db)),
            ..self.gibbs
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let fail = |msg: String| Err(HarnessError::Validation(msg));
        if self.snr_db.is_empty() || self.eta.is_empty() || self.k_min.is_empty() {
            return fail("sweep.snr_db, sweep.eta and sweep.k_min must be non-empty".into());
        }
        if self.algorithms.is_empty() {
            return fail("sweep.algorithms must be non-empty".into());
        }
        if self.realizations == 0 {
            return fail("sweep.realizations must be >= 1".into());
        }
        if self.random_draws == 0 {
            return fail("sweep.random_draws must be >= 1".into());
        }
        if let Some(s) = self.snr_db.iter().find(|s| !s.is_finite()) {
            return fail(format!("sweep.snr_db entries must be finite, got {s}"));
        }
        if let Some(e) = self.eta.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
            return fail(format!("sweep.eta entries must be > 0, got {e}"));
        }
        let users = self.system.uplink_users.min(self.system.downlink_users);
        if let Some(k) = self.k_min.iter().find(|&&k| k > users) {
            return fail(format!(
                "sweep.k_min = {k} exceeds the {users} users available per direction"
            ));
        }
        if self.rx_antennas > self.system.antennas {
            return fail(format!(
                "system.rx_antennas = {} exceeds system.antennas = {}",
                self.rx_antennas, self.system.antennas
            ));
        }
        if !(self.snr_reference_m.is_finite() && self.snr_reference_m > 0.0) {
            return fail("system.snr_reference_m must be > 0".into());
        }
        if let Some(b) = self.beta {
            if !(b.is_finite() && b > 0.0) {
                return fail(format!("gibbs.beta must be > 0, got {b}"));
            }
        }
        self.system
            .validate()
            .map_err(|e| HarnessError::Validation(e.0))?;
        self.gibbs
            .validate()
            .map_err(|e| HarnessError::Validation(e.to_string()))?;
        if self.gibbs.subset.samples < 10 {
            return fail("gibbs.subset_samples must be >= 10".into());
        }
        Ok(())
    }
}

/// 1-based line and column of a byte offset.
fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Parse and validate TOML text; missing keys take their defaults.
pub fn parse_config(text: &str) -> Result<ScenarioSweep, HarnessError> {
    let file: FileConfig = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| line_column(text, s.start));
        HarnessError::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    let s = file.system;
    let mut system = SystemConfig::new(s.antennas, s.uplink_users, s.downlink_users);
    system.cell_radius_m = s.cell_radius_m;
    system.min_dist_m = s.min_dist_m;
    system.min_u2u_dist_m = s.min_u2u_dist_m;
    system.carrier_ghz = s.carrier_ghz;
    system.shadow_std_los_db = s.shadow_los_db;
    system.shadow_std_nlos_db = s.shadow_nlos_db;
    system.shadow_std_u2u_db = s.shadow_u2u_db;
    system.kappa = s.kappa;
    system.si_power = db_to_linear(s.si_power_db);
    system.noise_bs = dbm_to_watts(s.noise_bs_dbm);
    system.noise_dl = dbm_to_watts(s.noise_dl_dbm);
    system.cond_cap = s.cond_cap;

    let g = file.gibbs;
    let gibbs = GibbsHyper {
        alpha: g.alpha,
        beta: g.beta.unwrap_or(GibbsHyper::default().beta),
        temperature: g.temperature,
        population_size: g.population_size,
        stop_window: g.stop_window,
        stop_tol: g.stop_tol,
        max_iterations: g.max_iterations,
        memoize: g.memoize,
        fallback: g.fallback,
        fallback_retries: g.fallback_retries,
        subset: SubsetSimParams {
            samples: g.subset_samples,
            p0: g.subset_p0,
            level_cap: g.subset_level_cap,
            kernel: g.mma_kernel,
        },
        record_theta: false,
    };
    let w = file.sweep;
    let sweep = ScenarioSweep {
        snr_reference_m: s.snr_reference_m.unwrap_or(system.cell_radius_m),
        system,
        rx_antennas: s.rx_antennas,
        snr_db: w.snr_db,
        eta: w.eta,
        k_min: w.k_min,
        realizations: w.realizations,
        algorithms: w.algorithms,
        master_seed: w.seed,
        random_draws: w.random_draws,
        exhaustive_cap: w.exhaustive_cap,
        gibbs,
        beta: g.beta,
    };
    sweep.validate()?;
    Ok(sweep)
}

pub fn load_config(path: &Path) -> Result<ScenarioSweep, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_config(&text)
}

/// Every configuration key with its default, as a loadable TOML document.
pub fn config_reference() -> String {
    let s = SystemSection::default();
    let w = SweepSection::default();
    let g = GibbsSection::default();
    let list = |v: &[f64]| {
        v.iter()
            .map(|x| format!("{x:?}"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let algorithms = w
        .algorithms
        .iter()
        .map(|a| format!("\"{a}\""))
        .collect::<Vec<_>>()
        .join(", ");
    let all: Vec<&str> = Algorithm::ALL.iter().map(|a| a.name()).collect();
    format!(
        r#"# All keys are optional; the values shown are the defaults.

[system]
antennas = {antennas}
uplink_users = {uplink_users}
downlink_users = {downlink_users}
# Receive antennas of the fixed split used by user-only algorithms.
rx_antennas = {rx_antennas}
cell_radius_m = {cell_radius_m:?}
min_dist_m = {min_dist_m:?}
# Floor on user-to-user distances.
min_u2u_dist_m = {min_u2u_dist_m:?}
carrier_ghz = {carrier_ghz:?}
# Log-normal shadowing standard deviations.
shadow_los_db = {shadow_los_db:?}
shadow_nlos_db = {shadow_nlos_db:?}
shadow_u2u_db = {shadow_u2u_db:?}
# Rician factor and scattered power of the residual self-interference channel.
kappa = {kappa:?}
si_power_db = {si_power_db:?}
noise_bs_dbm = {noise_bs_dbm:?}
noise_dl_dbm = {noise_dl_dbm:?}
# Gram-matrix condition number above which a selection is treated as singular.
cond_cap = {cond_cap:e}
# SNR is met at this BS distance, averaged over LOS state; defaults to cell_radius_m.
# snr_reference_m = {cell_radius_m:?}

[sweep]
snr_db = [{snr}]
# Downlink to uplink power ratio p_d / p_u.
eta = [{eta}]
# Minimum scheduled users per direction.
k_min = [{k_min}]
realizations = {realizations}
# Any of: {all}
algorithms = [{algorithms}]
seed = {seed}
# Distinct feasible masks drawn by the random baselines.
random_draws = {random_draws}
# Largest mask space the exhaustive searches enumerate.
exhaustive_cap = {exhaustive_cap}

[gibbs]
alpha = {alpha:?}
# Fixed beta; when absent, 0.2 up to 10 dB SNR and 0.1 above.
# beta = 0.2
temperature = {temperature:?}
population_size = {population_size}
stop_window = {stop_window}
stop_tol = {stop_tol:e}
max_iterations = {max_iterations}
# Evaluate each distinct mask once per run.
memoize = {memoize}
# Use subset simulation when a population has no feasible member.
fallback = {fallback}
fallback_retries = {fallback_retries}
subset_samples = {subset_samples}
subset_p0 = {subset_p0:?}
subset_level_cap = {subset_level_cap}
# "uniform" or "shifted-ratio".
mma_kernel = "uniform"
"#,
        antennas = s.antennas,
        uplink_users = s.uplink_users,
        downlink_users = s.downlink_users,
        rx_antennas = s.rx_antennas,
        cell_radius_m = s.cell_radius_m,
        min_dist_m = s.min_dist_m,
        min_u2u_dist_m = s.min_u2u_dist_m,
        carrier_ghz = s.carrier_ghz,
        shadow_los_db = s.shadow_los_db,
        shadow_nlos_db = s.shadow_nlos_db,
        shadow_u2u_db = s.shadow_u2u_db,
        kappa = s.kappa,
        si_power_db = s.si_power_db,
        noise_bs_dbm = s.noise_bs_dbm,
        noise_dl_dbm = s.noise_dl_dbm,
        cond_cap = s.cond_cap,
        snr = list(&w.snr_db),
        eta = list(&w.eta),
        k_min = w
            .k_min
            .iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join(", "),
        realizations = w.realizations,
        all = all.join(", "),
        seed = w.seed,
        random_draws = w.random_draws,
        exhaustive_cap = w.exhaustive_cap,
        alpha = g.alpha,
        temperature = g.temperature,
        population_size = g.population_size,
        stop_window = g.stop_window,
        stop_tol = g.stop_tol,
        max_iterations = g.max_iterations,
        memoize = g.memoize,
        fallback = g.fallback,
        fallback_retries = g.fallback_retries,
        subset_samples = g.subset_samples,
        subset_p0 = g.subset_p0,
        subset_level_cap = g.subset_level_cap,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let sweep = parse_config("").unwrap();
        assert_eq!(sweep.system.antennas, 6);
        assert_eq!(sweep.realizations, 50);
        assert_eq!(sweep.gibbs, GibbsHyper::default());
        assert_eq!(sweep.snr_reference_m, 40.0);
    }

    #[test]
    fn reference_document_round_trips() {
        assert_eq!(
            parse_config(&config_reference()).unwrap(),
            ScenarioSweep::default()
        );
    }

    #[test]
    fn k_min_above_user_count_is_rejected() {
        let err = parse_config("[sweep]\nk_min = [5]\n").unwrap_err();
        assert!(
            matches!(err, HarnessError::Validation(ref m) if m.contains("k_min")),
            "{err}"
        );
    }

    #[test]
    fn unknown_key_reports_position() {
        let err = parse_config("[sweep]\nrealizations = 3\nbogus = 1\n").unwrap_err();
        match err {
            HarnessError::Parse {
                line,
                column,
                message,
            } => {
                assert_eq!((line, column), (3, 1));
                assert!(message.contains("bogus"), "{message}");
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn unknown_algorithm_is_a_parse_error() {
        assert!(matches!(
            parse_config("[sweep]\nalgorithms = [\"SUS\"]\n"),
            Err(HarnessError::Parse { .. })
        ));
    }

    #[test]
    fn pico_cell_file_loads_verbatim() {
        let text = r#"
[system]
antennas = 30
uplink_users = 10
downlink_users = 10
rx_antennas = 10
cell_radius_m = 40.0
min_dist_m = 10.0
carrier_ghz = 2.0
shadow_los_db = 3.0
shadow_nlos_db = 4.0
shadow_u2u_db = 6.0
kappa = 1.0
si_power_db = -100.0

[sweep]
k_min = [5]
algorithms = ["gs-u", "es-u"]
"#;
        let sweep = parse_config(text).unwrap();
        assert_eq!(sweep.system.cell_radius_m, 40.0);
        assert_eq!(sweep.system.min_dist_m, 10.0);
        assert_eq!(sweep.system.carrier_ghz, 2.0);
        assert_eq!(
            (
                sweep.system.shadow_std_los_db,
                sweep.system.shadow_std_nlos_db,
                sweep.system.shadow_std_u2u_db
            ),
            (3.0, 4.0, 6.0)
        );
        assert_eq!(sweep.system.kappa, 1.0);
        assert!((sweep.system.si_power - 1e-10).abs() < 1e-22);
        assert_eq!(sweep.k_min, vec![5]);
        assert_eq!(sweep.algorithms, vec![Algorithm::GsU, Algorithm::EsU]);
    }

    #[test]
    fn points_and_powers() {
        let sweep =
            parse_config("[sweep]\nsnr_db = [0.0, 10.0]\neta = [0.5, 2.0]\nk_min = [1, 2]\n")
                .unwrap();
        let points = sweep.points();
        assert_eq!(points.len(), 8);
        assert_eq!(
            (points[1].snr_db, points[1].eta, points[1].k_min),
            (10.0, 0.5, 1)
        );
        let cfg = sweep.system_at(&points[3]);
        assert!((cfg.p_d / cfg.p_u - 2.0).abs() < 1e-15);
        let snr = cfg.p_u * cfg.mean_bs_gain(sweep.snr_reference_m) / cfg.noise_bs;
        assert!((snr - 10.0).abs() < 1e-9);
        assert_eq!(sweep.hyper_at(&points[0]).beta, 0.2);
        assert_eq!(sweep.hyper_at(&points[1]).beta, 0.2);
        let hi = ScenarioPoint {
            snr_db: 20.0,
            ..points[0]
        };
        assert_eq!(sweep.hyper_at(&hi).beta, 0.1);
    }
}

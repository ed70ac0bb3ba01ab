//! Air-to-ground channel primitives.
//!
//! Two-level directional antenna, log-distance path loss, elevation-driven
//! LoS probability and elevation-dependent shadow fading. Powers cross the
//! public API in dBm; linear arithmetic is done in milliwatts.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Numerator of the half-power main-lobe gain approximation (degrees²).
const MAIN_LOBE_CONSTANT: f64 = 29_000.0;

/// Elevation (degrees) at or below which the LoS probability is zero.
const LOS_ELEVATION_FLOOR_DEG: f64 = 15.0;

/// Propagation constants for one environment class.
///
/// `k2` and `g2` are per-degree decay rates of the shadowing standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentParams {
    pub alpha: f64,
    pub gamma: f64,
    pub k1: f64,
    pub k2: f64,
    pub g1: f64,
    pub g2: f64,
    pub mu_los_db: f64,
    pub mu_nlos_db: f64,
    pub path_loss_exp: f64,
}

impl EnvironmentParams {
    /// Urban environment at 2 GHz.
    pub const URBAN: EnvironmentParams = EnvironmentParams {
        alpha: 0.6,
        gamma: 0.11,
        k1: 10.39,
        k2: 0.05,
        g1: 29.06,
        g2: 0.03,
        mu_los_db: 1.0,
        mu_nlos_db: 20.0,
        path_loss_exp: 2.5,
    };

    pub fn urban() -> Self {
        Self::URBAN
    }

    /// Looks up a named preset.
    pub fn preset(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "urban" => Some(Self::URBAN),
            _ => None,
        }
    }

    pub fn preset_names() -> &'static [&'static str] {
        &["urban"]
    }

    /// Parses a key-value environment description.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let env: Self = toml::from_str(text).map_err(|e| Error::Scenario(e.to_string()))?;
        env.validate()?;
        Ok(env)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.alpha > 0.0, "alpha", self.alpha, "must be > 0")?;
        ensure(self.gamma > 0.0, "gamma", self.gamma, "must be > 0")?;
        ensure(self.k1 > 0.0, "k1", self.k1, "must be > 0")?;
        ensure(self.g1 > 0.0, "g1", self.g1, "must be > 0")?;
        ensure(self.k2 >= 0.0, "k2", self.k2, "must be >= 0")?;
        ensure(self.g2 >= 0.0, "g2", self.g2, "must be >= 0")?;
        ensure(
            self.path_loss_exp >= 2.0,
            "path_loss_exp",
            self.path_loss_exp,
            "must be >= 2",
        )?;
        ensure(
            self.mu_los_db.is_finite(),
            "mu_los_db",
            self.mu_los_db,
            "must be finite",
        )?;
        ensure(
            self.mu_nlos_db >= self.mu_los_db && self.mu_nlos_db.is_finite(),
            "mu_nlos_db",
            self.mu_nlos_db,
            "must be finite and >= mu_los_db",
        )
    }
}

impl Default for EnvironmentParams {
    fn default() -> Self {
        Self::URBAN
    }
}

/// Transmitter and receiver parameters shared by every UAV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadioConfig {
    pub carrier_hz: f64,
    pub tx_power_dbm: f64,
    /// Full half-power beamwidth in degrees.
    pub beamwidth_deg: f64,
    /// Linear antenna gain outside the main lobe.
    pub sidelobe_gain_lin: f64,
    pub sinr_threshold_lin: f64,
    pub noise_dbm: f64,
    pub coverage_eps: f64,
}

impl Default for RadioConfig {
    fn default() -> Self {
        Self {
            carrier_hz: 2.0e9,
            tx_power_dbm: 35.0,
            beamwidth_deg: 80.0,
            sidelobe_gain_lin: 0.1,
            sinr_threshold_lin: 5.0,
            noise_dbm: -120.0,
            coverage_eps: 0.8,
        }
    }
}

impl RadioConfig {
    pub fn validate(&self) -> Result<()> {
        ensure(
            self.carrier_hz > 0.0 && self.carrier_hz.is_finite(),
            "carrier_hz",
            self.carrier_hz,
            "must be > 0",
        )?;
        ensure(
            self.tx_power_dbm.is_finite(),
            "tx_power_dbm",
            self.tx_power_dbm,
            "must be finite",
        )?;
        let main = main_lobe_gain(self.beamwidth_deg)?;
        ensure(
            self.sidelobe_gain_lin >= 0.0 && self.sidelobe_gain_lin < main,
            "sidelobe_gain_lin",
            self.sidelobe_gain_lin,
            "must be >= 0 and below the main-lobe gain",
        )?;
        ensure(
            self.sinr_threshold_lin > 0.0 && self.sinr_threshold_lin.is_finite(),
            "sinr_threshold_lin",
            self.sinr_threshold_lin,
            "must be > 0",
        )?;
        ensure(
            self.noise_dbm.is_finite(),
            "noise_dbm",
            self.noise_dbm,
            "must be finite",
        )?;
        ensure(
            self.coverage_eps > 0.0 && self.coverage_eps < 1.0,
            "coverage_eps",
            self.coverage_eps,
            "must lie in (0, 1)",
        )
    }

    /// Half of the beamwidth, in radians.
    pub fn half_beam_rad(&self) -> f64 {
        (self.beamwidth_deg / 2.0).to_radians()
    }

    /// Largest horizontal range inside the main-lobe footprint at altitude `altitude_m`.
    pub fn beam_cap_m(&self, altitude_m: f64) -> f64 {
        altitude_m * self.half_beam_rad().tan()
    }

    pub fn with_tx_power(mut self, tx_power_dbm: f64) -> Self {
        self.tx_power_dbm = tx_power_dbm;
        self
    }
}

/// Geometry of one UAV-to-user link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkGeometry {
    horiz_range_m: f64,
    altitude_m: f64,
    distance_m: f64,
    elevation_rad: f64,
}

impl LinkGeometry {
    /// Builds the link for a user `horiz_range_m` from the nadir of a UAV at `altitude_m`.
    pub fn new(horiz_range_m: f64, altitude_m: f64) -> Result<Self> {
        ensure(
            horiz_range_m >= 0.0 && horiz_range_m.is_finite(),
            "horiz_range_m",
            horiz_range_m,
            "must be finite and >= 0",
        )?;
        ensure(
            altitude_m > 0.0 && altitude_m.is_finite(),
            "altitude_m",
            altitude_m,
            "must be finite and > 0",
        )?;
        let distance_m = horiz_range_m.hypot(altitude_m);
        let elevation_rad = (altitude_m / distance_m).min(1.0).asin();
        Ok(Self {
            horiz_range_m,
            altitude_m,
            distance_m,
            elevation_rad,
        })
    }

    pub fn horiz_range_m(&self) -> f64 {
        self.horiz_range_m
    }

    pub fn altitude_m(&self) -> f64 {
        self.altitude_m
    }

    pub fn distance_m(&self) -> f64 {
        self.distance_m
    }

    pub fn elevation_rad(&self) -> f64 {
        self.elevation_rad
    }

    pub fn elevation_deg(&self) -> f64 {
        self.elevation_rad.to_degrees()
    }
}

/// Link state drawn by the LoS/NLoS mixture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkState {
    Los,
    Nlos,
}

pub fn dbm_to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

pub fn mw_to_dbm(mw: f64) -> f64 {
    10.0 * mw.log10()
}

/// Linear main-lobe gain `29000 / θ_B²` for a beamwidth in degrees.
pub fn main_lobe_gain(beamwidth_deg: f64) -> Result<f64> {
    ensure(
        beamwidth_deg > 0.0 && beamwidth_deg < 180.0,
        "beamwidth_deg",
        beamwidth_deg,
        "must lie in (0, 180)",
    )?;
    Ok(MAIN_LOBE_CONSTANT / (beamwidth_deg * beamwidth_deg))
}

pub fn main_lobe_gain_db(beamwidth_deg: f64) -> Result<f64> {
    main_lobe_gain(beamwidth_deg).map(|g| 10.0 * g.log10())
}

/// Two-level antenna gain at sector angle `sector_angle_rad` off boresight.
///
/// The main-lobe interval is closed: `|φ| = θ_B/2` still gets the main-lobe gain.
pub fn antenna_gain(sector_angle_rad: f64, config: &RadioConfig) -> Result<f64> {
    ensure(
        sector_angle_rad.abs() <= std::f64::consts::PI,
        "sector_angle_rad",
        sector_angle_rad,
        "must lie in [-pi, pi]",
    )?;
    let main = main_lobe_gain(config.beamwidth_deg)?;
    if sector_angle_rad.abs().to_degrees() <= config.beamwidth_deg / 2.0 {
        Ok(main)
    } else {
        Ok(config.sidelobe_gain_lin)
    }
}

/// Path loss `10 n log10(4π f_c d / c)` in dB.
pub fn path_loss_db(distance_m: f64, carrier_hz: f64, path_loss_exp: f64) -> Result<f64> {
    ensure(
        distance_m > 0.0 && distance_m.is_finite(),
        "distance_m",
        distance_m,
        "must be > 0",
    )?;
    ensure(
        carrier_hz > 0.0 && carrier_hz.is_finite(),
        "carrier_hz",
        carrier_hz,
        "must be > 0",
    )?;
    Ok(10.0 * path_loss_exp * free_space_ratio(distance_m, carrier_hz).log10())
}

/// `4π f_c d / c`, the argument of the path-loss logarithm.
pub(crate) fn free_space_ratio(distance_m: f64, carrier_hz: f64) -> f64 {
    4.0 * std::f64::consts::PI * carrier_hz * distance_m / SPEED_OF_LIGHT
}

/// LoS probability `α (θ° − 15)^γ`, zero at or below 15° and clamped to [0, 1].
pub fn los_probability(elevation_rad: f64, env: &EnvironmentParams) -> f64 {
    let excess = elevation_rad.to_degrees() - LOS_ELEVATION_FLOOR_DEG;
    if excess <= 0.0 {
        return 0.0;
    }
    (env.alpha * excess.powf(env.gamma)).clamp(0.0, 1.0)
}

pub fn nlos_probability(elevation_rad: f64, env: &EnvironmentParams) -> f64 {
    1.0 - los_probability(elevation_rad, env)
}

/// Shadow-fading standard deviation in dB; the decay constants act on degrees.
pub fn shadow_sigma(elevation_rad: f64, env: &EnvironmentParams, state: LinkState) -> f64 {
    let deg = elevation_rad.to_degrees();
    match state {
        LinkState::Los => env.k1 * (-env.k2 * deg).exp(),
        LinkState::Nlos => env.g1 * (-env.g2 * deg).exp(),
    }
}

/// Mean excess loss in dB for a link state.
pub fn mean_excess_loss_db(env: &EnvironmentParams, state: LinkState) -> f64 {
    match state {
        LinkState::Los => env.mu_los_db,
        LinkState::Nlos => env.mu_nlos_db,
    }
}

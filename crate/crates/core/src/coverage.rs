//! Downlink coverage probability under the LoS/NLoS shadowing mixture with
//! mean nearest-UAV interference.
//!
//! Every Q-function argument is assembled in dB/dBm space:
//!
//! ```text
//! P_cov = P_LoS  · Q((P_min + L − P_t − G + μ_LoS)  / σ_LoS)
//!       + P_NLoS · Q((P_min + L − P_t − G + μ_NLoS) / σ_NLoS)
//! P_min = 10 log10(β N + β Ī)
//! ```

use serde::Serialize;

use crate::channel::{
    dbm_to_mw, free_space_ratio, los_probability, main_lobe_gain_db, mean_excess_loss_db,
    mw_to_dbm, path_loss_db, shadow_sigma, EnvironmentParams, LinkGeometry, LinkState, RadioConfig,
};
use crate::error::{Error, Result};
use crate::special::q_function;

/// Relative slack on the beam-footprint test so that `r = h·tan(θ_B/2)` computed
/// through a round trip is still inside.
const FOOTPRINT_SLACK: f64 = 1e-9;

/// The dominant (nearest) interfering UAV as seen from the user.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterfererSpec {
    pub geometry: LinkGeometry,
    /// User angle off the interferer's boresight.
    pub sector_angle_rad: f64,
}

impl InterfererSpec {
    pub fn new(geometry: LinkGeometry, sector_angle_rad: f64) -> Self {
        Self {
            geometry,
            sector_angle_rad,
        }
    }

    /// Interferer at `horiz_range_m` from the user with a nadir-pointing antenna.
    pub fn nadir_pointing(horiz_range_m: f64, altitude_m: f64) -> Result<Self> {
        let geometry = LinkGeometry::new(horiz_range_m, altitude_m)?;
        Ok(Self::new(geometry, horiz_range_m.atan2(altitude_m)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageQuery {
    pub serving: LinkGeometry,
    pub interferer: Option<InterfererSpec>,
    pub env: EnvironmentParams,
    pub radio: RadioConfig,
}

impl CoverageQuery {
    pub fn new(serving: LinkGeometry, env: EnvironmentParams, radio: RadioConfig) -> Self {
        Self {
            serving,
            interferer: None,
            env,
            radio,
        }
    }

    pub fn with_interferer(mut self, interferer: Option<InterfererSpec>) -> Self {
        self.interferer = interferer;
        self
    }

    pub fn check_footprint(&self) -> Result<()> {
        check_footprint(
            self.serving.horiz_range_m(),
            self.serving.altitude_m(),
            &self.radio,
        )
    }
}

pub(crate) fn check_footprint(range_m: f64, altitude_m: f64, radio: &RadioConfig) -> Result<()> {
    let cap_m = radio.beam_cap_m(altitude_m);
    if range_m <= cap_m * (1.0 + FOOTPRINT_SLACK) + FOOTPRINT_SLACK {
        Ok(())
    } else {
        Err(Error::BeamFootprintViolation { range_m, cap_m })
    }
}

/// Mean power (mW) received from the interferer through its side lobe.
pub fn mean_interference_mw(
    interferer: &InterfererSpec,
    env: &EnvironmentParams,
    radio: &RadioConfig,
) -> f64 {
    let geom = &interferer.geometry;
    let p_los = los_probability(geom.elevation_rad(), env);
    let excess = 10f64.powf(-env.mu_los_db / 10.0) * p_los
        + 10f64.powf(-env.mu_nlos_db / 10.0) * (1.0 - p_los);
    let spreading = free_space_ratio(geom.distance_m(), radio.carrier_hz).powf(-env.path_loss_exp);
    dbm_to_mw(radio.tx_power_dbm) * radio.sidelobe_gain_lin * excess * spreading
}

/// Detection threshold `10 log10(βN + βĪ)` in dBm.
pub fn p_min_db(radio: &RadioConfig, interference_mw: f64) -> f64 {
    let beta = radio.sinr_threshold_lin;
    mw_to_dbm(beta * dbm_to_mw(radio.noise_dbm) + beta * interference_mw)
}

/// Deterministic pieces of a coverage evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkBudget {
    pub path_loss_db: f64,
    pub gain_db: f64,
    pub tx_power_dbm: f64,
    pub interference_mw: f64,
    pub p_min_dbm: f64,
    pub p_los: f64,
    pub mu_los_db: f64,
    pub mu_nlos_db: f64,
    pub sigma_los_db: f64,
    pub sigma_nlos_db: f64,
}

impl LinkBudget {
    pub fn evaluate(query: &CoverageQuery) -> Result<Self> {
        query.check_footprint()?;
        let serving = &query.serving;
        let env = &query.env;
        let radio = &query.radio;
        let interference_mw = query
            .interferer
            .as_ref()
            .map_or(0.0, |k| mean_interference_mw(k, env, radio));
        let el = serving.elevation_rad();
        Ok(Self {
            path_loss_db: path_loss_db(serving.distance_m(), radio.carrier_hz, env.path_loss_exp)?,
            gain_db: main_lobe_gain_db(radio.beamwidth_deg)?,
            tx_power_dbm: radio.tx_power_dbm,
            interference_mw,
            p_min_dbm: p_min_db(radio, interference_mw),
            p_los: los_probability(el, env),
            mu_los_db: mean_excess_loss_db(env, LinkState::Los),
            mu_nlos_db: mean_excess_loss_db(env, LinkState::Nlos),
            sigma_los_db: shadow_sigma(el, env, LinkState::Los),
            sigma_nlos_db: shadow_sigma(el, env, LinkState::Nlos),
        })
    }

    /// `P_t + G − L − P_min`: the margin before shadowing.
    pub fn margin_db(&self) -> f64 {
        self.tx_power_dbm + self.gain_db - self.path_loss_db - self.p_min_dbm
    }

    /// `P[P_r ≥ P_min]` conditioned on the link state.
    pub fn conditional_coverage(&self, state: LinkState) -> f64 {
        let (mu, sigma) = match state {
            LinkState::Los => (self.mu_los_db, self.sigma_los_db),
            LinkState::Nlos => (self.mu_nlos_db, self.sigma_nlos_db),
        };
        let shortfall = mu - self.margin_db();
        if sigma > 0.0 {
            q_function(shortfall / sigma)
        } else if shortfall <= 0.0 {
            1.0
        } else {
            0.0
        }
    }

    pub fn coverage_probability(&self) -> f64 {
        let pcov = self.p_los * self.conditional_coverage(LinkState::Los)
            + (1.0 - self.p_los) * self.conditional_coverage(LinkState::Nlos);
        pcov.clamp(0.0, 1.0)
    }
}

/// Coverage probability of a user inside the serving beam footprint.
pub fn coverage_probability(query: &CoverageQuery) -> Result<f64> {
    LinkBudget::evaluate(query).map(|b| b.coverage_probability())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{nlos_probability, SPEED_OF_LIGHT};
    use std::f64::consts::PI;

    fn urban_query(r: f64, h: f64, pt: f64) -> CoverageQuery {
        CoverageQuery::new(
            LinkGeometry::new(r, h).unwrap(),
            EnvironmentParams::urban(),
            RadioConfig::default().with_tx_power(pt),
        )
    }

    #[test]
    fn interference_zero_sidelobe() {
        let radio = RadioConfig {
            sidelobe_gain_lin: 0.0,
            ..RadioConfig::default()
        };
        let k = InterfererSpec::nadir_pointing(3000.0, 2000.0).unwrap();
        assert_eq!(
            mean_interference_mw(&k, &EnvironmentParams::urban(), &radio),
            0.0
        );
    }

    #[test]
    fn interference_without_excess_loss() {
        let env = EnvironmentParams {
            mu_los_db: 0.0,
            mu_nlos_db: 0.0,
            ..EnvironmentParams::urban()
        };
        let radio = RadioConfig::default();
        let k = InterfererSpec::nadir_pointing(3000.0, 2000.0).unwrap();
        let d = k.geometry.distance_m();
        let expected = 10f64.powf(3.5) * 0.1 * (4.0 * PI * 2.0e9 * d / SPEED_OF_LIGHT).powf(-2.5);
        let got = mean_interference_mw(&k, &env, &radio);
        assert!((got - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn interference_regression_urban() {
        // d_k = 5000 m at h = 2000 m; term-by-term evaluation gives
        // P_LoS = 0.760019454, Ī = 1.6849024469e-12 mW.
        let radio = RadioConfig::default();
        let horiz = (5000f64.powi(2) - 2000f64.powi(2)).sqrt();
        let k = InterfererSpec::nadir_pointing(horiz, 2000.0).unwrap();
        let got = mean_interference_mw(&k, &EnvironmentParams::urban(), &radio);
        assert!(
            (got - 1.684_902_446_905_387_7e-12).abs() <= 1e-9 * got,
            "{got:e}"
        );
    }

    #[test]
    fn p_min_values() {
        let radio = RadioConfig::default();
        assert!((p_min_db(&radio, 0.0) - (-113.01)).abs() < 0.01);
        let unit_beta = RadioConfig {
            sinr_threshold_lin: 1.0,
            ..radio
        };
        assert!((p_min_db(&unit_beta, 0.0) - radio.noise_dbm).abs() < 1e-12);
        let n_lin = dbm_to_mw(radio.noise_dbm);
        assert!((p_min_db(&radio, n_lin) - (radio.noise_dbm + 10.0)).abs() < 0.01);
    }

    #[test]
    fn step_limit_when_shadowing_vanishes() {
        let env = EnvironmentParams {
            mu_los_db: 3.0,
            mu_nlos_db: 3.0,
            k2: 1e6,
            g2: 1e6,
            ..EnvironmentParams::urban()
        };
        let q = CoverageQuery {
            env,
            ..urban_query(1000.0, 2000.0, 35.0)
        };
        let b = LinkBudget::evaluate(&q).unwrap();
        assert_eq!(b.sigma_los_db, 0.0);
        assert!(b.margin_db() > env.mu_los_db);
        assert_eq!(coverage_probability(&q).unwrap(), 1.0);
    }

    #[test]
    fn mixture_identity() {
        // Recompute both terms from the channel primitives.
        for &(r, h, pt) in &[
            (1500.0, 2000.0, 35.0),
            (800.0, 1000.0, 10.0),
            (2500.0, 3000.0, 20.0),
        ] {
            let q = urban_query(r, h, pt);
            let env = q.env;
            let el = q.serving.elevation_rad();
            let l = path_loss_db(q.serving.distance_m(), 2.0e9, 2.5).unwrap();
            let g = 10.0 * (29000.0f64 / 6400.0).log10();
            let pmin = 10.0 * (5.0 * 1e-12f64).log10();
            let t1 = q_function((pmin + l - pt - g + 1.0) / shadow_sigma(el, &env, LinkState::Los));
            let t2 =
                q_function((pmin + l - pt - g + 20.0) / shadow_sigma(el, &env, LinkState::Nlos));
            let pl = los_probability(el, &env);
            let expected = pl * t1 + nlos_probability(el, &env) * t2;
            let got = coverage_probability(&q).unwrap();
            assert!((0.0..=1.0).contains(&got));
            assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
        }
    }

    #[test]
    fn urban_reference_point() {
        // Independent evaluation with a reference normal-tail implementation.
        let got = coverage_probability(&urban_query(1500.0, 2000.0, 35.0)).unwrap();
        assert!((got - 0.958_514_371_210_420_9).abs() < 1e-9, "{got}");
    }

    #[test]
    fn footprint_violation() {
        let cap = RadioConfig::default().beam_cap_m(2000.0);
        assert!(coverage_probability(&urban_query(cap, 2000.0, 35.0)).is_ok());
        let err = coverage_probability(&urban_query(cap + 1.0, 2000.0, 35.0)).unwrap_err();
        assert!(matches!(err, Error::BeamFootprintViolation { .. }));
    }

    #[test]
    fn monotone_in_power_and_threshold() {
        let mut prev = 0.0;
        for pt in (-20..=60).map(|p| p as f64) {
            let p = coverage_probability(&urban_query(1500.0, 2000.0, pt)).unwrap();
            assert!(p >= prev);
            prev = p;
        }
        let mut prev = 1.0;
        for beta in [0.5, 1.0, 2.0, 5.0, 10.0, 100.0, 1e4] {
            let mut q = urban_query(1500.0, 2000.0, 15.0);
            q.radio.sinr_threshold_lin = beta;
            let p = coverage_probability(&q).unwrap();
            assert!(p <= prev);
            prev = p;
        }
    }

    #[test]
    fn interference_coupled_power_grid() {
        // Ī grows with P_t, but βN does not, so P_cov must not fall.
        for &(r, h) in &[(500.0, 1000.0), (1500.0, 2000.0), (2000.0, 2500.0)] {
            for &x in &[r, 2.0 * r, 4.0 * r] {
                let k = InterfererSpec::nadir_pointing(x, h).unwrap();
                let mut prev = 0.0;
                for pt in (-30..=60).map(|p| p as f64) {
                    let q = urban_query(r, h, pt).with_interferer(Some(k));
                    let p = coverage_probability(&q).unwrap();
                    assert!(p >= prev - 1e-12, "r={r} h={h} x={x} pt={pt}");
                    prev = p;
                }
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn strictly_increasing_in_power_without_interference(
                frac in 0.0f64..1.0, h in 200.0f64..5000.0, pt in -10.0f64..20.0
            ) {
                let r = frac * RadioConfig::default().beam_cap_m(h);
                let lo_b = LinkBudget::evaluate(&urban_query(r, h, pt)).unwrap();
                let hi_b = LinkBudget::evaluate(&urban_query(r, h, pt + 1.0)).unwrap();
                let (lo, hi) = (lo_b.coverage_probability(), hi_b.coverage_probability());
                prop_assert!((0.0..=1.0).contains(&lo));
                prop_assert!(hi >= lo);
                // Equality only when the gain is below the resolution of the sum.
                if hi == lo {
                    let gain = lo_b.p_los
                        * (hi_b.conditional_coverage(LinkState::Los) - lo_b.conditional_coverage(LinkState::Los))
                        + (1.0 - lo_b.p_los)
                            * (hi_b.conditional_coverage(LinkState::Nlos) - lo_b.conditional_coverage(LinkState::Nlos));
                    prop_assert!(gain <= 4.0 * f64::EPSILON * lo.max(f64::MIN_POSITIVE));
                }
            }
        }
    }
}

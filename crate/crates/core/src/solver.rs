//! Coverage radius and minimum transmit power.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::channel::{EnvironmentParams, LinkGeometry, RadioConfig};
use crate::coverage::{check_footprint, coverage_probability, CoverageQuery, InterfererSpec};
use crate::error::{ensure, Error, Result};

/// Numerical knobs for the one-dimensional searches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverOptions {
    /// Grid points used to bracket the outermost ε-crossing in range.
    pub grid_points: usize,
    pub radius_tol_m: f64,
    pub power_tol_db: f64,
    pub p_lo_dbm: f64,
    pub p_hi_dbm: f64,
    /// Power samples taken to check that `P_cov` rises with `P_t`.
    pub monotonicity_probes: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            grid_points: 512,
            radius_tol_m: 0.1,
            power_tol_db: 0.01,
            p_lo_dbm: -30.0,
            p_hi_dbm: 60.0,
            monotonicity_probes: 8,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        ensure(
            self.grid_points >= 2,
            "grid_points",
            self.grid_points as f64,
            "must be >= 2",
        )?;
        ensure(
            self.radius_tol_m > 0.0,
            "radius_tol_m",
            self.radius_tol_m,
            "must be > 0",
        )?;
        ensure(
            self.power_tol_db > 0.0,
            "power_tol_db",
            self.power_tol_db,
            "must be > 0",
        )?;
        ensure(
            self.p_hi_dbm > self.p_lo_dbm,
            "p_hi_dbm",
            self.p_hi_dbm,
            "must exceed p_lo_dbm",
        )
    }
}

/// Which constraint fixes the coverage radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Binding {
    /// `P_cov` drops below ε before the beam edge.
    PowerLimited,
    /// `P_cov ≥ ε` all the way to `h·tan(θ_B/2)`.
    BeamLimited,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadiusSolution {
    pub radius_m: f64,
    pub binding: Binding,
    pub pcov_at_radius: f64,
}

fn pcov_at(
    range_m: f64,
    altitude_m: f64,
    env: &EnvironmentParams,
    radio: &RadioConfig,
    interferer: Option<&InterfererSpec>,
) -> Result<f64> {
    let query = CoverageQuery::new(LinkGeometry::new(range_m, altitude_m)?, *env, *radio)
        .with_interferer(interferer.copied());
    coverage_probability(&query)
}

/// Largest range under the beam at which `P_cov ≥ ε`.
///
/// `P_cov(r)` need not be monotone, so a grid scan locates the outermost
/// crossing before bisection refines it.
pub fn coverage_radius(
    radio: &RadioConfig,
    env: &EnvironmentParams,
    altitude_m: f64,
    interferer: Option<&InterfererSpec>,
    opts: &SolverOptions,
) -> Result<RadiusSolution> {
    ensure(
        altitude_m > 0.0 && altitude_m.is_finite(),
        "altitude_m",
        altitude_m,
        "must be > 0",
    )?;
    let eps = radio.coverage_eps;
    let cap = radio.beam_cap_m(altitude_m);
    let n = opts.grid_points;
    let at = |k: usize| {
        if k == n {
            cap
        } else {
            cap * k as f64 / n as f64
        }
    };

    let edge = pcov_at(cap, altitude_m, env, radio, interferer)?;
    if edge >= eps {
        return Ok(RadiusSolution {
            radius_m: cap,
            binding: Binding::BeamLimited,
            pcov_at_radius: edge,
        });
    }

    let mut inside = None;
    for k in (0..n).rev() {
        let p = pcov_at(at(k), altitude_m, env, radio, interferer)?;
        if p >= eps {
            inside = Some((k, p));
            break;
        }
    }
    let (k, mut p_lo) = inside.ok_or(Error::NoCoverage { eps, cap_m: cap })?;

    let (mut lo, mut hi) = (at(k), at(k + 1));
    while hi - lo > opts.radius_tol_m {
        let mid = 0.5 * (lo + hi);
        let p = pcov_at(mid, altitude_m, env, radio, interferer)?;
        if p >= eps {
            lo = mid;
            p_lo = p;
        } else {
            hi = mid;
        }
    }
    Ok(RadiusSolution {
        radius_m: lo,
        binding: Binding::PowerLimited,
        pcov_at_radius: p_lo,
    })
}

/// Smallest transmit power (dBm) that meets ε at `required_radius_m`.
///
/// Bisection over `[p_lo, p_hi]`; the returned power always satisfies ε.
pub fn min_transmit_power(
    required_radius_m: f64,
    radio_template: &RadioConfig,
    env: &EnvironmentParams,
    altitude_m: f64,
    interferer: Option<&InterfererSpec>,
    opts: &SolverOptions,
) -> Result<f64> {
    check_footprint(required_radius_m, altitude_m, radio_template)?;
    let eps = radio_template.coverage_eps;
    let pcov = |p: f64| {
        pcov_at(
            required_radius_m,
            altitude_m,
            env,
            &radio_template.with_tx_power(p),
            interferer,
        )
    };

    let probes = opts.monotonicity_probes.max(2);
    let mut prev = f64::NEG_INFINITY;
    for i in 0..probes {
        let p = opts.p_lo_dbm + (opts.p_hi_dbm - opts.p_lo_dbm) * i as f64 / (probes - 1) as f64;
        let v = pcov(p)?;
        if v < prev - 1e-12 {
            warn!(
                "P_cov not monotone in P_t at r = {required_radius_m} m, h = {altitude_m} m \
                 (drops to {v} at {p} dBm); power bisection may be inexact"
            );
            break;
        }
        prev = v;
    }

    if pcov(opts.p_lo_dbm)? >= eps {
        return Ok(opts.p_lo_dbm);
    }
    let top = pcov(opts.p_hi_dbm)?;
    if top < eps {
        return Err(Error::Unreachable {
            eps,
            p_hi_dbm: opts.p_hi_dbm,
            pcov: top,
        });
    }
    let (mut lo, mut hi) = (opts.p_lo_dbm, opts.p_hi_dbm);
    while hi - lo > opts.power_tol_db {
        let mid = 0.5 * (lo + hi);
        if pcov(mid)? >= eps {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Coverage lifetime relative to a reference power; inverse in linear power.
pub fn lifetime_metric(tx_power_dbm: f64, reference_power_dbm: f64) -> f64 {
    10f64.powf((reference_power_dbm - tx_power_dbm) / 10.0)
}

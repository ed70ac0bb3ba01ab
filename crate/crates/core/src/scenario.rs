//! Scenario files.
//!
//! A scenario is TOML. Angles are degrees, distances meters, powers dBm.
//!
//! ```toml
//! environment = "urban"          # or an inline [environment] table
//! area_radius_m = 5000
//!
//! [radio]
//! tx_power_dbm = 35
//! beamwidth_deg = 80
//!
//! [constraints]
//! max_altitude_m = 5000
//! max_tx_power_dbm = 35
//! ```
//!
//! Missing radio keys take their defaults; unknown keys anywhere are errors.

use serde::Deserialize;

use crate::channel::{EnvironmentParams, RadioConfig};
use crate::error::{ensure, Error, Result};
use crate::planner::{PlanConstraints, Planner};
use crate::solver::SolverOptions;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub env: EnvironmentParams,
    pub radio: RadioConfig,
    pub area_radius_m: f64,
    pub constraints: PlanConstraints,
    pub solver: SolverOptions,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            env: EnvironmentParams::urban(),
            radio: RadioConfig::default(),
            area_radius_m: 5000.0,
            constraints: PlanConstraints::default(),
            solver: SolverOptions::default(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    #[serde(default)]
    environment: Option<toml::Value>,
    #[serde(default)]
    area_radius_m: Option<f64>,
    #[serde(default)]
    radio: RadioFile,
    #[serde(default)]
    constraints: ConstraintsFile,
    #[serde(default)]
    solver: SolverOptions,
}

#[derive(Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RadioFile {
    carrier_hz: f64,
    tx_power_dbm: f64,
    beamwidth_deg: f64,
    sidelobe_gain_lin: f64,
    sinr_threshold_lin: f64,
    noise_dbm: f64,
    coverage_eps: f64,
}

impl Default for RadioFile {
    fn default() -> Self {
        let r = RadioConfig::default();
        Self {
            carrier_hz: r.carrier_hz,
            tx_power_dbm: r.tx_power_dbm,
            beamwidth_deg: r.beamwidth_deg,
            sidelobe_gain_lin: r.sidelobe_gain_lin,
            sinr_threshold_lin: r.sinr_threshold_lin,
            noise_dbm: r.noise_dbm,
            coverage_eps: r.coverage_eps,
        }
    }
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ConstraintsFile {
    max_altitude_m: Option<f64>,
    max_tx_power_dbm: Option<f64>,
    coverage_eps: Option<f64>,
}

fn field_error(field: &str, err: Error) -> Error {
    Error::Scenario(format!("{field}: {err}"))
}

fn parse_environment(value: Option<toml::Value>) -> Result<EnvironmentParams> {
    let env = match value {
        None => EnvironmentParams::urban(),
        Some(toml::Value::String(name)) => EnvironmentParams::preset(&name).ok_or_else(|| {
            Error::Scenario(format!(
                "environment: unknown preset {name:?} (known: {})",
                EnvironmentParams::preset_names().join(", ")
            ))
        })?,
        Some(table @ toml::Value::Table(_)) => table
            .try_into()
            .map_err(|e: toml::de::Error| Error::Scenario(format!("environment: {e}")))?,
        Some(other) => {
            return Err(Error::Scenario(format!(
                "environment: expected a preset name or a table, found {}",
                other.type_str()
            )))
        }
    };
    env.validate().map_err(|e| field_error("environment", e))?;
    Ok(env)
}

impl Scenario {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: ScenarioFile =
            toml::from_str(text).map_err(|e| Error::Scenario(e.to_string()))?;
        let env = parse_environment(file.environment)?;
        let r = file.radio;
        let radio = RadioConfig {
            carrier_hz: r.carrier_hz,
            tx_power_dbm: r.tx_power_dbm,
            beamwidth_deg: r.beamwidth_deg,
            sidelobe_gain_lin: r.sidelobe_gain_lin,
            sinr_threshold_lin: r.sinr_threshold_lin,
            noise_dbm: r.noise_dbm,
            coverage_eps: r.coverage_eps,
        };
        radio.validate().map_err(|e| field_error("radio", e))?;
        let constraints = PlanConstraints {
            max_altitude_m: file.constraints.max_altitude_m,
            max_tx_power_dbm: file.constraints.max_tx_power_dbm,
            coverage_eps: file.constraints.coverage_eps.unwrap_or(radio.coverage_eps),
        };
        constraints
            .validate()
            .map_err(|e| field_error("constraints", e))?;
        file.solver
            .validate()
            .map_err(|e| field_error("solver", e))?;
        let area_radius_m = file.area_radius_m.unwrap_or(5000.0);
        ensure(
            area_radius_m > 0.0,
            "area_radius_m",
            area_radius_m,
            "must be > 0",
        )
        .map_err(|e| field_error("area_radius_m", e))?;
        Ok(Self {
            env,
            radio,
            area_radius_m,
            constraints,
            solver: file.solver,
        })
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Scenario(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn planner(&self) -> Planner {
        Planner::new(self.env, self.radio, self.constraints).with_solver(self.solver)
    }
}

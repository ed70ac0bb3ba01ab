//! End-to-end deployment planning and the parameter sweeps built on it.
//!
//! A plan scales the packing layout for `M` to the target area, flies every
//! UAV at the altitude whose beam footprint equals the packed radius, and
//! finds the least transmit power that keeps `P_cov ≥ ε` at the cell edge
//! while the nearest neighbour interferes.

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{EnvironmentParams, RadioConfig};
use crate::coverage::InterfererSpec;
use crate::error::{ensure, Error, Result};
use crate::packing::{self, PackingLayout, MAX_LAYOUT_COUNT};
use crate::solver::{lifetime_metric, min_transmit_power, SolverOptions};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanConstraints {
    #[serde(default)]
    pub max_altitude_m: Option<f64>,
    #[serde(default)]
    pub max_tx_power_dbm: Option<f64>,
    pub coverage_eps: f64,
}

impl Default for PlanConstraints {
    fn default() -> Self {
        Self {
            max_altitude_m: None,
            max_tx_power_dbm: None,
            coverage_eps: 0.8,
        }
    }
}

impl PlanConstraints {
    pub fn validate(&self) -> Result<()> {
        if let Some(h) = self.max_altitude_m {
            ensure(h > 0.0, "max_altitude_m", h, "must be > 0")?;
        }
        if let Some(p) = self.max_tx_power_dbm {
            ensure(p.is_finite(), "max_tx_power_dbm", p, "must be finite")?;
        }
        ensure(
            self.coverage_eps > 0.0 && self.coverage_eps < 1.0,
            "coverage_eps",
            self.coverage_eps,
            "must lie in (0, 1)",
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UavPosition {
    pub x_m: f64,
    pub y_m: f64,
    pub altitude_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeploymentPlan {
    pub uav_count: usize,
    pub area_radius_m: f64,
    pub positions: Vec<UavPosition>,
    pub per_uav_radius_m: f64,
    pub altitude_m: f64,
    pub tx_power_dbm: f64,
    pub total_coverage: f64,
    /// Lifetime relative to the single-UAV plan; `None` if that plan has no finite power.
    pub lifetime: Option<f64>,
    pub altitude_capped: bool,
    /// Horizontal distance from the worst-case user to the nearest other UAV.
    pub interferer_range_m: Option<f64>,
}

impl DeploymentPlan {
    /// Positions and radius rescaled to the unit disk.
    pub fn normalized_layout(&self) -> PackingLayout {
        let scale = self.area_radius_m;
        let rho = self.per_uav_radius_m / scale;
        PackingLayout {
            count: self.uav_count,
            radius_norm: rho,
            centers_norm: self
                .positions
                .iter()
                .map(|p| [p.x_m / scale, p.y_m / scale])
                .collect(),
            total_coverage: self.uav_count as f64 * rho * rho,
        }
    }
}

/// One row of the sweep over UAV count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountSweepRow {
    pub uav_count: usize,
    pub total_coverage: Option<f64>,
    pub lifetime: Option<f64>,
    pub altitude_m: Option<f64>,
    pub tx_power_dbm: Option<f64>,
    pub per_uav_radius_m: Option<f64>,
    pub error: Option<String>,
}

/// One row of the sweep over area radius.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusSweepRow {
    pub area_radius_m: f64,
    pub min_uav_count: Option<usize>,
    pub error: Option<String>,
}

/// Scenario-wide planning context.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Planner {
    pub env: EnvironmentParams,
    pub radio: RadioConfig,
    pub constraints: PlanConstraints,
    pub solver: SolverOptions,
}

struct CellGeometry {
    layout: PackingLayout,
    radius_m: f64,
    altitude_m: f64,
    capped: bool,
}

impl Planner {
    pub fn new(env: EnvironmentParams, radio: RadioConfig, constraints: PlanConstraints) -> Self {
        Self {
            env,
            radio,
            constraints,
            solver: SolverOptions::default(),
        }
    }

    pub fn with_solver(mut self, solver: SolverOptions) -> Self {
        self.solver = solver;
        self
    }

    fn radio(&self) -> RadioConfig {
        RadioConfig {
            coverage_eps: self.constraints.coverage_eps,
            ..self.radio
        }
    }

    fn cell_geometry(&self, area_radius_m: f64, count: usize) -> Result<CellGeometry> {
        ensure(
            area_radius_m > 0.0 && area_radius_m.is_finite(),
            "area_radius_m",
            area_radius_m,
            "must be > 0",
        )?;
        let layout = packing::layout(count)?;
        let bw = self.radio.beamwidth_deg;
        let mut radius_m = layout.radius_norm * area_radius_m;
        let mut altitude_m = packing::altitude_for_radius(radius_m, bw)?;
        let mut capped = false;
        if let Some(cap) = self.constraints.max_altitude_m {
            if altitude_m > cap {
                altitude_m = cap;
                radius_m = self.radio.beam_cap_m(cap);
                capped = true;
            }
        }
        Ok(CellGeometry {
            layout,
            radius_m,
            altitude_m,
            capped,
        })
    }

    fn power_bracket(&self, apply_power_cap: bool) -> SolverOptions {
        let mut opts = self.solver;
        if apply_power_cap {
            if let Some(cap) = self.constraints.max_tx_power_dbm {
                opts.p_hi_dbm = opts.p_hi_dbm.min(cap);
                opts.p_lo_dbm = opts.p_lo_dbm.min(opts.p_hi_dbm - opts.power_tol_db);
            }
        }
        opts
    }

    fn solve_power(
        &self,
        area_radius_m: f64,
        count: usize,
        geometry: &CellGeometry,
        apply_power_cap: bool,
    ) -> Result<(f64, Option<f64>)> {
        let interferer_range = geometry
            .layout
            .min_center_spacing()
            .map(|s| s * area_radius_m - geometry.radius_m);
        let interferer = interferer_range
            .map(|x| InterfererSpec::nadir_pointing(x, geometry.altitude_m))
            .transpose()?;
        let power = min_transmit_power(
            geometry.radius_m,
            &self.radio(),
            &self.env,
            geometry.altitude_m,
            interferer.as_ref(),
            &self.power_bracket(apply_power_cap),
        )
        .map_err(|e| match e {
            Error::Unreachable {
                eps,
                p_hi_dbm,
                pcov,
            } => Error::Infeasible {
                count,
                reason: format!(
                    "coverage probability {pcov:.4} stays below {eps} at {p_hi_dbm} dBm"
                ),
            },
            other => other,
        })?;
        Ok((power, interferer_range))
    }

    /// Transmit power of the single-UAV plan, ignoring any power cap.
    pub fn reference_power(&self, area_radius_m: f64) -> Result<f64> {
        let geometry = self.cell_geometry(area_radius_m, 1)?;
        self.solve_power(area_radius_m, 1, &geometry, false)
            .map(|(p, _)| p)
    }

    pub fn plan(&self, area_radius_m: f64, count: usize) -> Result<DeploymentPlan> {
        let reference = self.reference_power(area_radius_m).ok();
        self.plan_with_reference(area_radius_m, count, reference)
    }

    fn plan_with_reference(
        &self,
        area_radius_m: f64,
        count: usize,
        reference_power_dbm: Option<f64>,
    ) -> Result<DeploymentPlan> {
        self.constraints.validate()?;
        let geometry = self.cell_geometry(area_radius_m, count)?;
        let (tx_power_dbm, interferer_range_m) =
            self.solve_power(area_radius_m, count, &geometry, true)?;
        let positions = geometry
            .layout
            .centers_norm
            .iter()
            .map(|c| UavPosition {
                x_m: c[0] * area_radius_m,
                y_m: c[1] * area_radius_m,
                altitude_m: geometry.altitude_m,
            })
            .collect();
        let rho = geometry.radius_m / area_radius_m;
        Ok(DeploymentPlan {
            uav_count: count,
            area_radius_m,
            positions,
            per_uav_radius_m: geometry.radius_m,
            altitude_m: geometry.altitude_m,
            tx_power_dbm,
            total_coverage: count as f64 * rho * rho,
            lifetime: reference_power_dbm.map(|p_ref| lifetime_metric(tx_power_dbm, p_ref)),
            altitude_capped: geometry.capped,
            interferer_range_m,
        })
    }

    /// Whether an `M`-UAV plan exists and covers at least `threshold` of the area.
    pub fn meets_threshold(
        &self,
        area_radius_m: f64,
        count: usize,
        threshold: f64,
    ) -> Result<bool> {
        match self.plan_with_reference(area_radius_m, count, None) {
            Ok(plan) => Ok(plan.total_coverage >= threshold),
            Err(Error::Infeasible { .. }) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// Smallest UAV count whose plan covers at least `threshold` of the area.
    pub fn min_uav_count(&self, area_radius_m: f64, threshold: f64) -> Result<Option<usize>> {
        self.min_uav_count_from(area_radius_m, threshold, 1)
    }

    /// As [`Planner::min_uav_count`], considering only counts of at least `min_count`.
    pub fn min_uav_count_from(
        &self,
        area_radius_m: f64,
        threshold: f64,
        min_count: usize,
    ) -> Result<Option<usize>> {
        ensure(
            threshold > 0.0,
            "coverage_threshold",
            threshold,
            "must be > 0",
        )?;
        for count in min_count.max(1)..=MAX_LAYOUT_COUNT {
            if self.meets_threshold(area_radius_m, count, threshold)? {
                return Ok(Some(count));
            }
        }
        Ok(None)
    }

    /// Every count in 1..=10 whose plan meets `threshold`.
    pub fn feasible_counts(&self, area_radius_m: f64, threshold: f64) -> Result<Vec<usize>> {
        ensure(
            threshold > 0.0,
            "coverage_threshold",
            threshold,
            "must be > 0",
        )?;
        let flags = (1..=MAX_LAYOUT_COUNT)
            .into_par_iter()
            .map(|m| self.meets_threshold(area_radius_m, m, threshold))
            .collect::<Result<Vec<bool>>>()?;
        Ok((1..=MAX_LAYOUT_COUNT)
            .zip(flags)
            .filter(|(_, ok)| *ok)
            .map(|(m, _)| m)
            .collect())
    }

    pub fn sweep_vs_m(
        &self,
        area_radius_m: f64,
        counts: RangeInclusive<usize>,
    ) -> Vec<CountSweepRow> {
        let reference = self.reference_power(area_radius_m).ok();
        let counts: Vec<usize> = counts.collect();
        counts
            .into_par_iter()
            .map(
                |m| match self.plan_with_reference(area_radius_m, m, reference) {
                    Ok(p) => CountSweepRow {
                        uav_count: m,
                        total_coverage: Some(p.total_coverage),
                        lifetime: p.lifetime,
                        altitude_m: Some(p.altitude_m),
                        tx_power_dbm: Some(p.tx_power_dbm),
                        per_uav_radius_m: Some(p.per_uav_radius_m),
                        error: None,
                    },
                    Err(e) => CountSweepRow {
                        uav_count: m,
                        total_coverage: None,
                        lifetime: None,
                        altitude_m: None,
                        tx_power_dbm: None,
                        per_uav_radius_m: None,
                        error: Some(e.to_string()),
                    },
                },
            )
            .collect()
    }

    pub fn sweep_vs_rc(&self, area_radii_m: &[f64], threshold: f64) -> Vec<RadiusSweepRow> {
        area_radii_m
            .par_iter()
            .map(|&rc| match self.min_uav_count(rc, threshold) {
                Ok(m) => RadiusSweepRow {
                    area_radius_m: rc,
                    min_uav_count: m,
                    error: None,
                },
                Err(e) => RadiusSweepRow {
                    area_radius_m: rc,
                    min_uav_count: None,
                    error: Some(e.to_string()),
                },
            })
            .collect()
    }
}

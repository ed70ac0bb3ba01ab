//! Deployment planning for multiple UAV base stations with directional
//! antennas over a circular area.
//!
//! * [`channel`]: antenna gain, path loss, LoS probability, shadow fading.
//! * [`coverage`]: coverage probability with mean nearest-UAV interference.
//! * [`solver`]: coverage radius and minimum transmit power.
//! * [`packing`]: circle-packing layouts and the altitude upper bound.
//! * [`planner`]: full plans and the sweeps over UAV count and area radius.
//! * [`montecarlo`]: sampling estimate used to check the analytic coverage.

pub mod channel;
pub mod coverage;
pub mod error;
pub mod montecarlo;
pub mod packing;
pub mod planner;
pub mod scenario;
pub mod solver;
pub mod special;

pub use channel::{EnvironmentParams, LinkGeometry, LinkState, RadioConfig};
pub use coverage::{coverage_probability, CoverageQuery, InterfererSpec, LinkBudget};
pub use error::{Error, Result};
pub use montecarlo::{simulate_coverage, SimResult};
pub use packing::{layout, verify_layout, PackingLayout, Violation};
pub use planner::{DeploymentPlan, PlanConstraints, Planner};
pub use scenario::Scenario;
pub use solver::{coverage_radius, min_transmit_power, Binding, RadiusSolution, SolverOptions};
pub use special::q_function;

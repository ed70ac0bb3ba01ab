use thiserror::Error;

/// Errors raised by the planning engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the domain of the model.
    #[error("invalid {name}: {value} ({reason})")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The user sits outside the serving antenna's main-lobe footprint.
    #[error("beam footprint violation: range {range_m} m exceeds h*tan(beamwidth/2) = {cap_m} m")]
    BeamFootprintViolation { range_m: f64, cap_m: f64 },

    /// Coverage threshold is missed at every range under the beam.
    #[error("no coverage: P_cov < {eps} at every range up to {cap_m} m")]
    NoCoverage { eps: f64, cap_m: f64 },

    /// Coverage threshold is missed even at the top of the power bracket.
    #[error("unreachable: P_cov = {pcov} < {eps} at {p_hi_dbm} dBm")]
    Unreachable { eps: f64, p_hi_dbm: f64, pcov: f64 },

    /// No stored packing layout for this UAV count.
    #[error("unsupported UAV count {count}: {reason}")]
    Unsupported { count: usize, reason: &'static str },

    /// A deployment plan cannot satisfy its constraints.
    #[error("infeasible plan for M = {count}: {reason}")]
    Infeasible { count: usize, reason: String },

    /// A scenario file could not be parsed or validated.
    #[error("scenario: {0}")]
    Scenario(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure(
    cond: bool,
    name: &'static str,
    value: f64,
    reason: &'static str,
) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            reason,
        })
    }
}

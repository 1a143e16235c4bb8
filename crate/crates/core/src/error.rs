use thiserror::Error;

use crate::sizing::Infeasibility;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{name}` out of domain: {value}")]
    Domain { name: &'static str, value: f64 },

    #[error("r_breakdown components sum to {sum} ohm but r_total is {r_total} ohm")]
    Breakdown { sum: f64, r_total: f64 },

    #[error("overdamped circuit (L = {inductance:e} H <= R^2 C / 4 = {bound:e} H); closed forms need the underdamped regime")]
    Overdamped { inductance: f64, bound: f64 },

    #[error("degenerate schedule: {0}")]
    DegenerateSchedule(String),

    #[error("invalid schedule: {0}")]
    Schedule(String),

    #[error("time step {dt:e} s exceeds the limit of {limit:e} s")]
    StepSize { dt: f64, limit: f64 },

    #[error("integration diverged at t = {t:e} s")]
    Divergence { t: f64 },

    #[error("no inductor current zero-crossing found")]
    NoCrossing,

    #[error("geometry: {0}")]
    Geometry(String),

    #[error("energy ledger: {0}")]
    Ledger(String),

    #[error("{0}")]
    Infeasible(Infeasibility),
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain { name, value })
    }
}

pub(crate) fn check_non_negative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain { name, value })
    }
}

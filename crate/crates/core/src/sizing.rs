//! Inductor sizing.
//!
//! For a fixed load the swing requirement bounds the inductance from below
//! (the quality factor grows with `L`), while the discharge budget and the
//! clock period bound it from above (the half period grows with `L`). The
//! optimizer returns the smallest inductance meeting the lower bounds and
//! then checks the upper ones.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::analytic::swing;
use crate::array::{effective_params, ArrayGeometry};
use crate::circuit::{derive_resonance, min_inductance, RlcParams};
use crate::error::{check_positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SizingSpec {
    pub target_swing_fraction: f64,
    /// Discharge budget (s); may be infinite.
    pub max_t_r_half: f64,
    pub f_op_min: f64,
    pub f_op_max: f64,
    /// Columns on the shared node; the geometry's own count when `None`.
    pub bits_connected: Option<u32>,
}

impl Default for SizingSpec {
    fn default() -> Self {
        Self {
            target_swing_fraction: 2.0 / 3.0,
            max_t_r_half: 100e-12,
            f_op_min: 200e6,
            f_op_max: 1e9,
            bits_connected: None,
        }
    }
}

impl SizingSpec {
    pub fn validate(&self) -> Result<()> {
        let t = self.target_swing_fraction;
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::Domain {
                name: "target_swing_fraction",
                value: t,
            });
        }
        if !(self.max_t_r_half > 0.0) {
            return Err(Error::Domain {
                name: "max_t_r_half",
                value: self.max_t_r_half,
            });
        }
        check_positive("f_op_min", self.f_op_min)?;
        check_positive("f_op_max", self.f_op_max)?;
        if self.f_op_min > self.f_op_max {
            return Err(Error::Domain {
                name: "f_op_min",
                value: self.f_op_min,
            });
        }
        if self.bits_connected == Some(0) {
            return Err(Error::Domain {
                name: "bits_connected",
                value: 0.0,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    Underdamped,
    Swing,
    DischargeTime,
    ClockFit,
}

impl Constraint {
    pub fn name(self) -> &'static str {
        match self {
            Constraint::Underdamped => "underdamped",
            Constraint::Swing => "swing",
            Constraint::DischargeTime => "discharge_time",
            Constraint::ClockFit => "clock_fit",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Infeasibility {
    pub binding: Constraint,
    pub detail: String,
}

impl fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "infeasible sizing, binding constraint {}: {}", self.binding.name(), self.detail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SizingResult {
    pub inductance: f64,
    pub t_r_half: f64,
    pub swing_fraction: f64,
    pub q_f: f64,
    pub r_total: f64,
    pub capacitance: f64,
    /// Constraint active at the returned inductance.
    pub binding: Constraint,
}

/// Grid density of the bracketing scan, points per decade of inductance.
const GRID_PER_DECADE: u32 = 20;
const GRID_DECADES: u32 = 24;

fn meets_lower_bounds(r: f64, c: f64, v_dd: f64, l: f64, target: f64) -> Result<bool> {
    let params = RlcParams::new(r, l, c, v_dd)?;
    if !derive_resonance(&params)?.underdamped {
        return Ok(false);
    }
    Ok(swing(&params)?.swing_fraction >= target)
}

/// Smallest inductance for a load of `r_total` in series with
/// `capacitance`: log-grid bracketing, then bisection down to a relative
/// width of `1e-13`.
pub fn size_for_load(r_total: f64, capacitance: f64, v_dd: f64, spec: &SizingSpec) -> Result<SizingResult> {
    spec.validate()?;
    let floor = min_inductance(r_total, capacitance)?;
    let target = spec.target_swing_fraction;

    let step = 10f64.powf(1.0 / f64::from(GRID_PER_DECADE));
    let mut lo = floor;
    let mut hi = None;
    let mut l = floor;
    for _ in 0..GRID_PER_DECADE * GRID_DECADES {
        l *= step;
        if meets_lower_bounds(r_total, capacitance, v_dd, l, target)? {
            hi = Some(l);
            break;
        }
        lo = l;
    }
    let Some(mut hi) = hi else {
        return Err(Error::Infeasible(Infeasibility {
            binding: Constraint::Swing,
            detail: format!("swing fraction {target} not reached below {l:e} H"),
        }));
    };
    while hi - lo > 1e-13 * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if meets_lower_bounds(r_total, capacitance, v_dd, mid, target)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    let params = RlcParams::new(r_total, hi, capacitance, v_dd)?;
    let res = derive_resonance(&params)?;
    let t_r_half = res.t_r_half.expect("lower bounds imply underdamped");
    if t_r_half > spec.max_t_r_half {
        return Err(Error::Infeasible(Infeasibility {
            binding: Constraint::DischargeTime,
            detail: format!(
                "smallest inductance meeting the swing ({hi:e} H) needs T_R/2 = {t_r_half:e} s > {:e} s",
                spec.max_t_r_half
            ),
        }));
    }
    let fastest_period = 1.0 / spec.f_op_max;
    if 2.0 * t_r_half > fastest_period {
        return Err(Error::Infeasible(Infeasibility {
            binding: Constraint::ClockFit,
            detail: format!(
                "two resonant pulses of {t_r_half:e} s do not fit the {fastest_period:e} s clock period"
            ),
        }));
    }
    Ok(SizingResult {
        inductance: hi,
        t_r_half,
        swing_fraction: swing(&params)?.swing_fraction,
        q_f: res.q_f,
        r_total,
        capacitance,
        binding: Constraint::Swing,
    })
}

/// Sizes the shared inductor for `spec.bits_connected` columns of the
/// template geometry. Driver resistance is fixed per bit, so the load
/// resistance falls as `1/N` while the capacitance grows as `N`.
pub fn size_inductor(template: &ArrayGeometry, v_dd: f64, spec: &SizingSpec) -> Result<SizingResult> {
    spec.validate()?;
    let geometry = match spec.bits_connected {
        Some(bits) => template.with_connected_columns(bits),
        None => *template,
    };
    let load = effective_params(&geometry, v_dd)?;
    size_for_load(load.r_total, load.capacitance, v_dd, spec)
}

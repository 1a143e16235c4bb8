//! Lumped series-resonance parameters and the scalar figures derived from
//! them.
//!
//! The equivalent circuit is a capacitor `C` (every connected bitline in
//! parallel) in series with a total resistance `R_T` and an inductor `L`
//! whose far end sits on a bias supply, nominally `V_DD/2`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{check_non_negative, check_positive, Error, Result};

/// Split of the series resistance into its physical contributors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResistanceBreakdown {
    /// On-resistance of the write-driver / transmission-gate path (ohm).
    pub mos: f64,
    /// Wire resistance (ohm).
    pub wire: f64,
    /// Inductor parasitic resistance (ohm).
    pub inductor: f64,
}

impl ResistanceBreakdown {
    pub fn total(&self) -> f64 {
        self.mos + self.wire + self.inductor
    }
}

/// Lumped series RLC tank driven from a bias node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RlcParams {
    /// Total series resistance `R_T` (ohm).
    pub r_total: f64,
    pub r_breakdown: Option<ResistanceBreakdown>,
    /// Inductance `L` (henry).
    pub inductance: f64,
    /// Total load capacitance on the shared node (farad).
    pub capacitance: f64,
    /// Rail supply (volt).
    pub v_dd: f64,
    /// Inductor bias supply (volt).
    pub v_bias: f64,
}

impl RlcParams {
    /// Builds a parameter set with the bias at exactly `v_dd / 2`.
    pub fn new(r_total: f64, inductance: f64, capacitance: f64, v_dd: f64) -> Result<Self> {
        let params = Self {
            r_total,
            r_breakdown: None,
            inductance,
            capacitance,
            v_dd,
            v_bias: v_dd / 2.0,
        };
        params.validate()?;
        Ok(params)
    }

    /// Builds a parameter set whose `r_total` is the sum of the breakdown.
    pub fn from_breakdown(
        breakdown: ResistanceBreakdown,
        inductance: f64,
        capacitance: f64,
        v_dd: f64,
    ) -> Result<Self> {
        let mut params = Self::new(breakdown.total(), inductance, capacitance, v_dd)?;
        params.r_breakdown = Some(breakdown);
        params.validate()?;
        Ok(params)
    }

    pub fn with_bias(mut self, v_bias: f64) -> Result<Self> {
        self.v_bias = v_bias;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("r_total", self.r_total)?;
        check_positive("inductance", self.inductance)?;
        check_positive("capacitance", self.capacitance)?;
        check_positive("v_dd", self.v_dd)?;
        check_positive("v_bias", self.v_bias)?;
        if let Some(b) = &self.r_breakdown {
            check_non_negative("r_mos", b.mos)?;
            check_non_negative("r_wire", b.wire)?;
            check_non_negative("r_inductor", b.inductor)?;
            let sum = b.total();
            if (sum - self.r_total).abs() > 1e-12 * self.r_total {
                return Err(Error::Breakdown {
                    sum,
                    r_total: self.r_total,
                });
            }
        }
        Ok(())
    }

    /// Characteristic impedance `sqrt(L/C)`.
    pub fn impedance(&self) -> f64 {
        (self.inductance / self.capacitance).sqrt()
    }

    /// Applies scalar process-corner multipliers to resistance and
    /// capacitance. The breakdown, if any, is scaled alongside.
    pub fn at_corner(&self, r_multiplier: f64, c_multiplier: f64) -> Result<Self> {
        check_positive("r_multiplier", r_multiplier)?;
        check_positive("c_multiplier", c_multiplier)?;
        let mut out = *self;
        out.r_total *= r_multiplier;
        out.capacitance *= c_multiplier;
        out.r_breakdown = self.r_breakdown.map(|b| ResistanceBreakdown {
            mos: b.mos * r_multiplier,
            wire: b.wire * r_multiplier,
            inductor: b.inductor * r_multiplier,
        });
        out.validate()?;
        Ok(out)
    }
}

/// Damping and oscillation figures of a tank.
///
/// Overdamped tanks are a reportable state: the oscillation fields are
/// `None` and `underdamped` is false.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedResonance {
    /// Damping rate `R_T / 2L` (1/s).
    pub alpha: f64,
    /// Undamped angular frequency `1/sqrt(LC)` (rad/s).
    pub omega_0: f64,
    /// Damped angular frequency (rad/s).
    pub omega_d: Option<f64>,
    /// Damped oscillation frequency (Hz).
    pub f_r: Option<f64>,
    /// Damped period (s).
    pub t_r: Option<f64>,
    /// Half of the damped period; the resonant discharge window (s).
    pub t_r_half: Option<f64>,
    /// Quality factor `sqrt(L/C) / R_T`.
    pub q_f: f64,
    pub underdamped: bool,
}

impl DerivedResonance {
    /// `alpha / omega_d`, the per-radian decay that sets the swing.
    pub fn damping_ratio_per_radian(&self) -> Option<f64> {
        self.omega_d.map(|w| self.alpha / w)
    }
}

/// Smallest inductance that is *not* underdamped, `R_T^2 C / 4`. Any
/// strictly larger inductance oscillates.
pub fn min_inductance(r_total: f64, capacitance: f64) -> Result<f64> {
    check_positive("r_total", r_total)?;
    check_positive("capacitance", capacitance)?;
    Ok(r_total * r_total * capacitance / 4.0)
}

pub fn derive_resonance(params: &RlcParams) -> Result<DerivedResonance> {
    params.validate()?;
    let RlcParams {
        r_total: r,
        inductance: l,
        capacitance: c,
        ..
    } = *params;

    let alpha = r / (2.0 * l);
    let omega_0 = 1.0 / (l * c).sqrt();
    let q_f = params.impedance() / r;
    let bound = r * r * c / 4.0;
    let underdamped = l > bound;

    // 1/LC - R^2/4L^2 == (1 - R^2 C / 4L) / LC; this form keeps the sign
    // consistent with the `l > bound` test right at the boundary.
    let (omega_d, f_r, t_r, t_r_half) = if underdamped {
        let omega_d = ((1.0 - bound / l) / (l * c)).sqrt();
        let f_r = omega_d / (2.0 * PI);
        (Some(omega_d), Some(f_r), Some(1.0 / f_r), Some(PI / omega_d))
    } else {
        (None, None, None, None)
    };

    Ok(DerivedResonance {
        alpha,
        omega_0,
        omega_d,
        f_r,
        t_r,
        t_r_half,
        q_f,
        underdamped,
    })
}

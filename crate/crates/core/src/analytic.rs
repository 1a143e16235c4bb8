//! Closed-form time-domain response of the tank.
//!
//! Sign convention: the inductor current is positive when it flows out of
//! the capacitor node, through the inductor, into the bias supply. That is
//! the direction of the resonant discharge, so the current is positive over
//! the first half period. With this convention
//!
//! ```text
//! C dV/dt = -i_L
//! L di_L/dt = V_C - V_bias - R_T i_L
//! ```
//!
//! Both closed forms start from the discharge initial condition:
//! `V_C(0) = V_DD`, `i_L(0) = 0`.

use serde::{Deserialize, Serialize};

use crate::circuit::{derive_resonance, min_inductance, DerivedResonance, RlcParams};
use crate::error::{Error, Result};

/// Which capacitor-voltage expression [`cap_voltage`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveformVariant {
    /// The exact solution of the state equations: the correction term is
    /// `+(alpha/omega_d) sin(omega_d t)`.
    #[default]
    OdeConsistent,
    /// The textbook form with a `-1/(2 Q_f) cos(omega_d t)` correction term.
    /// It does not satisfy the state equations and is kept for comparison.
    PaperLiteral,
}

/// Extremes of the tank-only swing, before rail completion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwingReport {
    pub v_ol: f64,
    pub v_oh: f64,
    pub v_rsw: f64,
    pub swing_fraction: f64,
}

fn underdamped(params: &RlcParams) -> Result<(DerivedResonance, f64)> {
    let res = derive_resonance(params)?;
    match res.omega_d {
        Some(w) => Ok((res, w)),
        None => Err(Error::Overdamped {
            inductance: params.inductance,
            bound: min_inductance(params.r_total, params.capacitance)?,
        }),
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain { name: "t", value: t })
    }
}

/// Inductor current during the resonant discharge.
pub fn inductor_current(params: &RlcParams, t: f64) -> Result<f64> {
    check_time(t)?;
    let (res, omega_d) = underdamped(params)?;
    let amplitude = (params.v_dd - params.v_bias) / (omega_d * params.inductance);
    Ok(amplitude * (-res.alpha * t).exp() * (omega_d * t).sin())
}

/// Peak discharge current magnitude bound, `(V_DD - V_bias) / (omega_d L)`.
pub fn current_scale(params: &RlcParams) -> Result<f64> {
    let (_, omega_d) = underdamped(params)?;
    Ok((params.v_dd - params.v_bias) / (omega_d * params.inductance))
}

/// Capacitor voltage during the resonant discharge.
pub fn cap_voltage(params: &RlcParams, t: f64, variant: WaveformVariant) -> Result<f64> {
    check_time(t)?;
    let (res, omega_d) = underdamped(params)?;
    let step = params.v_dd - params.v_bias;
    let decay = (-res.alpha * t).exp();
    let phase = omega_d * t;
    let ring = match variant {
        WaveformVariant::OdeConsistent => phase.cos() + res.alpha / omega_d * phase.sin(),
        WaveformVariant::PaperLiteral => phase.cos() - phase.cos() / (2.0 * res.q_f),
    };
    Ok(params.v_bias + step * decay * ring)
}

/// Per-half-period amplitude retention `exp(-pi alpha / omega_d)`.
pub fn half_period_retention(params: &RlcParams) -> Result<f64> {
    let (res, omega_d) = underdamped(params)?;
    Ok((-std::f64::consts::PI * res.alpha / omega_d).exp())
}

/// Resonant swing extrema.
///
/// `v_ol` ends the discharge half-cycle that starts at `V_DD`; `v_oh` ends
/// the recovery half-cycle that starts at 0 V with the switch opened at the
/// current zero. Both rings decay by the same factor, so
/// `v_rsw = V_DD exp(-pi alpha / omega_d)`.
pub fn swing(params: &RlcParams) -> Result<SwingReport> {
    let k = half_period_retention(params)?;
    let v_ol = params.v_bias - (params.v_dd - params.v_bias) * k;
    let v_oh = params.v_bias + params.v_bias * k;
    let v_rsw = v_oh - v_ol;
    Ok(SwingReport {
        v_ol,
        v_oh,
        v_rsw,
        swing_fraction: v_rsw / params.v_dd,
    })
}

/// Swing fraction as a function of quality factor alone,
/// `exp(-pi / sqrt(4 Q_f^2 - 1))`; zero at or below `Q_f = 1/2`.
pub fn swing_fraction_for_q(q_f: f64) -> f64 {
    let d = 4.0 * q_f * q_f - 1.0;
    if d <= 0.0 {
        0.0
    } else {
        (-std::f64::consts::PI / d.sqrt()).exp()
    }
}

/// Inverse of [`swing_fraction_for_q`]: the quality factor at which the
/// tank swing equals `fraction` of the rail.
pub fn q_for_swing_fraction(fraction: f64) -> Result<f64> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::Domain {
            name: "swing_fraction",
            value: fraction,
        });
    }
    let per_radian = -fraction.ln() / std::f64::consts::PI;
    Ok(((1.0 / (per_radian * per_radian) + 1.0) / 4.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn row1() -> RlcParams {
        RlcParams::new(0.5, 0.621e-9, 10.10e-12, 0.9).unwrap()
    }

    #[test]
    fn current_zero_at_start_and_half_period() {
        let p = row1();
        let half = derive_resonance(&p).unwrap().t_r_half.unwrap();
        assert_eq!(inductor_current(&p, 0.0).unwrap(), 0.0);
        let peak = current_scale(&p).unwrap();
        assert!(inductor_current(&p, half).unwrap().abs() < 1e-12 * peak);
    }

    #[test]
    fn quarter_period_current_scale() {
        let p = row1();
        let d = derive_resonance(&p).unwrap();
        let i = inductor_current(&p, d.t_r.unwrap() / 4.0).unwrap();
        let expected = 0.45 / (7.841 * (1.0 - 1.0 / (4.0 * d.q_f * d.q_f)).sqrt())
            * (-d.alpha * d.t_r.unwrap() / 4.0).exp();
        assert_relative_eq!(i, expected, max_relative = 1e-3);
        assert!(i > 0.050 && i < 0.060);
    }

    #[test]
    fn voltage_initial_and_final() {
        let p = row1();
        for v in [WaveformVariant::OdeConsistent, WaveformVariant::PaperLiteral] {
            let late = cap_voltage(&p, 1e-6, v).unwrap();
            assert_relative_eq!(late, 0.45, max_relative = 1e-12);
        }
        assert_relative_eq!(
            cap_voltage(&p, 0.0, WaveformVariant::OdeConsistent).unwrap(),
            0.9,
            max_relative = 1e-15
        );
        // the printed form starts below the rail by V_DD/(4 Q_f)
        let lit = cap_voltage(&p, 0.0, WaveformVariant::PaperLiteral).unwrap();
        let q = derive_resonance(&p).unwrap().q_f;
        assert_relative_eq!(lit, 0.9 - 0.45 / (2.0 * q), max_relative = 1e-12);
    }

    #[test]
    fn half_period_voltage() {
        let p = row1();
        let d = derive_resonance(&p).unwrap();
        let v = cap_voltage(&p, d.t_r_half.unwrap(), WaveformVariant::OdeConsistent).unwrap();
        // independent arithmetic: exp(-pi / (2 Q sqrt(1 - 1/4Q^2)))
        let q = d.q_f;
        let k = (-std::f64::consts::PI / (2.0 * q * (1.0 - 1.0 / (4.0 * q * q)).sqrt())).exp();
        assert_relative_eq!(v, 0.45 * (1.0 - k), max_relative = 1e-9);
        assert_relative_eq!(v / 0.9, 0.0477, max_relative = 5e-3);
    }

    #[test]
    fn swing_row1_and_lossless() {
        let s = swing(&row1()).unwrap();
        assert_relative_eq!(s.swing_fraction, 0.905, max_relative = 1e-3);
        assert_eq!(s.v_rsw, s.v_oh - s.v_ol);
        assert!(0.0 <= s.v_ol && s.v_ol <= 0.45 && 0.45 <= s.v_oh && s.v_oh <= 0.9);

        let lossless = RlcParams::new(1e-15, 0.621e-9, 10.10e-12, 0.9).unwrap();
        let s = swing(&lossless).unwrap();
        assert!(s.v_ol.abs() < 1e-12);
        assert_relative_eq!(s.v_oh, 0.9, max_relative = 1e-12);
        assert_relative_eq!(s.swing_fraction, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn two_thirds_inversion() {
        let q = q_for_swing_fraction(2.0 / 3.0).unwrap();
        assert_relative_eq!(swing_fraction_for_q(q), 2.0 / 3.0, max_relative = 1e-14);
        let per_radian = 1.0 / (4.0 * q * q - 1.0).sqrt();
        assert_relative_eq!(per_radian, 1.5f64.ln() / std::f64::consts::PI, max_relative = 1e-14);
        assert!(q_for_swing_fraction(1.0).is_err());
        assert!(q_for_swing_fraction(0.0).is_err());
    }

    #[test]
    fn overdamped_is_rejected() {
        let p = RlcParams::new(2.0, 0.01e-9, 10e-12, 0.9).unwrap();
        assert!(matches!(inductor_current(&p, 1e-12), Err(Error::Overdamped { .. })));
        assert!(matches!(
            cap_voltage(&p, 1e-12, WaveformVariant::OdeConsistent),
            Err(Error::Overdamped { .. })
        ));
        assert!(matches!(swing(&p), Err(Error::Overdamped { .. })));
    }

    #[test]
    fn negative_time_is_a_domain_error() {
        assert!(matches!(inductor_current(&row1(), -1e-12), Err(Error::Domain { name: "t", .. })));
    }
}

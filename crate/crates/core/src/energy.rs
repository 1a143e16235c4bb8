//! Per-cycle energy ledger of a simulated write against conventional CMOS
//! switching.
//!
//! A conventional write drains the bitline to ground and recharges it from
//! the rail, drawing `C V_DD^2` per cycle. In the resonant cycle the rail
//! only tops up the part of the swing the tank could not return, and the
//! bias supply sees charge flow out and back in again.

use serde::{Deserialize, Serialize};

use crate::circuit::RlcParams;
use crate::error::{check_non_negative, check_positive, Error, Result};
use crate::transient::{Phase, PhaseConfig, WaveformTrace};

/// Largest relative mismatch tolerated between supplied and dissipated plus
/// stored energy.
pub const LEDGER_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Dissipation {
    pub series_r: f64,
    pub pulldown: f64,
    pub pullup: f64,
    pub clamp: f64,
}

impl Dissipation {
    pub fn total(&self) -> f64 {
        self.series_r + self.pulldown + self.pullup + self.clamp
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    /// Energy drawn from the rail (J).
    pub e_from_vdd: f64,
    /// Net energy drawn from the bias supply (J, signed).
    pub e_from_bias_net: f64,
    pub e_dissipated: Dissipation,
    /// `C V_DD^2` (J).
    pub e_conventional: f64,
    pub savings_fraction: f64,
    /// Stored energy at the end of the cycle minus at the start (J).
    pub delta_stored: f64,
    /// Net charge drawn from the bias supply (C, signed).
    pub bias_charge_net: f64,
    /// `(supplied - dissipated - delta_stored) / e_conventional`.
    pub ledger_residual: f64,
}

impl EnergyReport {
    pub fn closes(&self) -> bool {
        self.ledger_residual.abs() <= LEDGER_TOLERANCE
    }
}

/// Energy of one conventional write cycle, `C V_DD^2`: `C V_DD^2 / 2` is
/// lost in each of the two transitions.
pub fn conventional_energy(c_total: f64, v_dd: f64) -> Result<f64> {
    check_positive("c_total", c_total)?;
    check_non_negative("v_dd", v_dd)?;
    Ok(c_total * v_dd * v_dd)
}

/// Builds the ledger from a trace by trapezoidal integration of the source
/// and resistor powers, step by step, using each step's topology.
pub fn resonant_energy(
    trace: &WaveformTrace,
    params: &RlcParams,
    phases: &PhaseConfig,
) -> Result<EnergyReport> {
    params.validate()?;
    phases.validate()?;
    if trace.samples.len() < 2 {
        return Err(Error::Ledger("trace has fewer than two samples".into()));
    }
    let v_dd = params.v_dd;
    let first = trace.first();
    let last = trace.last();
    if (first.v_c - v_dd).abs() > 1e-9 * v_dd || first.i_l != 0.0 {
        return Err(Error::Ledger(format!(
            "cycle must start at V_DD with no inductor current (v_c = {:e} V)",
            first.v_c
        )));
    }
    if (last.v_c - v_dd).abs() > 0.01 * v_dd {
        return Err(Error::Ledger(format!(
            "incomplete cycle: ends at {:e} V, not within 1% of V_DD",
            last.v_c
        )));
    }

    let r_series = phases.series_resistance(params);
    let (r_pd, r_pu) = (phases.pulldown_resistance, phases.pullup_resistance);
    let mut diss = Dissipation {
        clamp: trace.clamp_energy(),
        ..Dissipation::default()
    };
    let mut e_vdd = 0.0;
    let mut bias_charge_out = 0.0;

    for pair in trace.samples.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let h = b.t - a.t;
        let trap = |f: &dyn Fn(f64, f64) -> f64| 0.5 * h * (f(a.v_c, a.i_l) + f(b.v_c, b.i_l));
        match a.phase {
            Phase::ResonantDischarge | Phase::ResonantRecovery => {
                diss.series_r += trap(&|_, i| r_series * i * i);
                bias_charge_out += trap(&|_, i| i);
            }
            Phase::PullDown => diss.pulldown += trap(&|v, _| v * v / r_pd),
            Phase::PullUp => {
                e_vdd += trap(&|v, _| v_dd * (v_dd - v) / r_pu);
                diss.pullup += trap(&|v, _| (v_dd - v) * (v_dd - v) / r_pu);
            }
            Phase::Hold => {}
        }
    }

    let c = params.capacitance;
    let l = params.inductance;
    let stored = |v: f64, i: f64| 0.5 * c * v * v + 0.5 * l * i * i;
    let delta_stored = stored(last.v_c, last.i_l) - stored(first.v_c, first.i_l);
    let e_bias = -params.v_bias * bias_charge_out;
    let e_conventional = conventional_energy(c, v_dd)?;
    let residual = (e_vdd + e_bias - diss.total() - delta_stored) / e_conventional;

    Ok(EnergyReport {
        e_from_vdd: e_vdd,
        e_from_bias_net: e_bias,
        e_dissipated: diss,
        e_conventional,
        savings_fraction: 1.0 - (e_vdd + e_bias) / e_conventional,
        delta_stored,
        bias_charge_net: -bias_charge_out,
        ledger_residual: residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::swing;
    use crate::transient::{
        build_control, default_time_step, simulate_tuned_cycle, simulate_write_cycle,
        PulseSchedule,
    };
    use approx::assert_relative_eq;

    fn row1() -> RlcParams {
        RlcParams::new(0.5, 0.621e-9, 10.10e-12, 0.9).unwrap()
    }

    #[test]
    fn conventional_examples() {
        // 10.10e-12 * 0.81 by hand: 8.181e-12
        assert_relative_eq!(conventional_energy(10.10e-12, 0.9).unwrap(), 8.181e-12, max_relative = 1e-12);
        assert_eq!(conventional_energy(10.10e-12, 0.0).unwrap(), 0.0);
        let e1 = conventional_energy(1e-12, 0.6).unwrap();
        let e2 = conventional_energy(1e-12, 1.2).unwrap();
        assert_relative_eq!(e2, 4.0 * e1, max_relative = 1e-15);
        assert!(conventional_energy(0.0, 1.0).is_err());
    }

    #[test]
    fn tuned_cycle_ledger() {
        let p = row1();
        let phases = PhaseConfig::with_rails(0.5);
        let dt = default_time_step(&p, &phases).unwrap();
        let (_, trace) =
            simulate_tuned_cycle(&p, &phases, &PulseSchedule::symmetric(1e-9, 0.0), dt).unwrap();
        let e = resonant_energy(&trace, &p, &phases).unwrap();
        assert!(e.closes(), "residual {}", e.ledger_residual);
        assert!(e.e_from_bias_net.abs() < 1e-3 * e.e_conventional);
        assert!(e.bias_charge_net.abs() < 1e-3 * p.capacitance * p.v_dd);
        // rail tops up V_OH -> V_DD
        let v_oh = swing(&p).unwrap().v_oh;
        let topup = p.capacitance * p.v_dd * (p.v_dd - v_oh);
        assert_relative_eq!(e.e_from_vdd, topup, max_relative = 2e-2);
        assert!(e.savings_fraction < 1.0 && e.savings_fraction > 0.9);
    }

    #[test]
    fn plain_cmos_cycle_saves_nothing() {
        let p = row1();
        let phases = PhaseConfig::with_rails(0.5);
        let dt = default_time_step(&p, &phases).unwrap();
        let control = build_control(&PulseSchedule::symmetric(1e-9, 0.0), false).unwrap();
        let trace = simulate_write_cycle(&p, &phases, &control, dt).unwrap();
        let e = resonant_energy(&trace, &p, &phases).unwrap();
        assert!(e.closes());
        assert!(e.savings_fraction.abs() < 1e-3, "{}", e.savings_fraction);
    }

    #[test]
    fn mistuning_costs_energy() {
        let p = row1();
        let phases = PhaseConfig::with_rails(0.5);
        let dt = default_time_step(&p, &phases).unwrap();
        let sched = PulseSchedule::symmetric(1e-9, 0.0);
        let (tuned, trace) = simulate_tuned_cycle(&p, &phases, &sched, dt).unwrap();
        let good = resonant_energy(&trace, &p, &phases).unwrap();
        let control = build_control(&sched.with_delay(tuned.delay() / 2.0), true).unwrap();
        let trace = simulate_write_cycle(&p, &phases, &control, dt).unwrap();
        let bad = resonant_energy(&trace, &p, &phases).unwrap();
        assert!(bad.closes());
        assert!(bad.e_dissipated.clamp > 0.0);
        assert!(bad.savings_fraction < good.savings_fraction);
    }

    #[test]
    fn incomplete_cycle_is_a_ledger_error() {
        let p = row1();
        let phases = PhaseConfig::with_rails(0.5);
        let dt = default_time_step(&p, &phases).unwrap();
        let control = crate::transient::ControlWaveforms {
            period: 0.5e-9,
            vsr_windows: vec![crate::transient::Window::new(0.0, 0.2e-9)],
            vdn_windows: vec![crate::transient::Window::new(0.2e-9, 0.5e-9)],
            pullup_windows: vec![],
        };
        let trace = simulate_write_cycle(&p, &phases, &control, dt).unwrap();
        assert!(matches!(resonant_energy(&trace, &p, &phases), Err(Error::Ledger(_))));
    }
}

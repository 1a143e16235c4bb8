//! Switched write-cycle simulation.
//!
//! One clock period of a resonant write is split into five phases:
//! resonant discharge through the inductor, rail pull-down, hold, resonant
//! recovery, and rail pull-up. Each phase has a fixed topology, so the
//! state equations are linear and constant between switching instants and
//! are integrated with fixed-step RK4 ([`integrate`]).
//!
//! Switches are ideal and break-before-make. Window edges are snapped to
//! the sample grid. When the series switch opens while the inductor still
//! carries current, the remaining `L i^2 / 2` is dumped into a clamp and
//! logged as a [`TraceEvent::Clamp`].

mod integrate;
mod schedule;

use std::f64::consts::PI;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

pub use integrate::{integrate_phase, SeriesBranch, State, Topology};
pub use schedule::{build_control, ControlWaveforms, PulseSchedule, Window, MAX_DELAY_CODE};

use crate::circuit::{derive_resonance, RlcParams};
use crate::error::{check_non_negative, check_positive, Error, Result};

/// Default sampling density: steps per damped period.
pub const STEPS_PER_PERIOD: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Hold,
    ResonantDischarge,
    PullDown,
    ResonantRecovery,
    PullUp,
}

impl Phase {
    pub fn name(self) -> &'static str {
        match self {
            Phase::Hold => "hold",
            Phase::ResonantDischarge => "resonant_discharge",
            Phase::PullDown => "pull_down",
            Phase::ResonantRecovery => "resonant_recovery",
            Phase::PullUp => "pull_up",
        }
    }

    pub fn is_resonant(self) -> bool {
        matches!(self, Phase::ResonantDischarge | Phase::ResonantRecovery)
    }
}

/// Second series tank that bumps the write-driver gate above the rail.
/// It is driven from `V_DD` while VSR is high and does not load the main
/// tank.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Booster {
    pub inductance: f64,
    pub gate_capacitance: f64,
    pub series_resistance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseConfig {
    /// Extra on-resistance of the series switch, added to `R_T` while VSR
    /// is high. `None` when the switch is already part of `R_T`.
    pub series_switch_on_resistance: Option<f64>,
    pub pulldown_resistance: f64,
    pub pullup_resistance: f64,
    pub booster: Option<Booster>,
}

impl PhaseConfig {
    /// Rail-completion devices with the given resistance and no extra
    /// series switch or booster.
    pub fn with_rails(resistance: f64) -> Self {
        Self {
            series_switch_on_resistance: None,
            pulldown_resistance: resistance,
            pullup_resistance: resistance,
            booster: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(r) = self.series_switch_on_resistance {
            check_non_negative("series_switch_on_resistance", r)?;
        }
        check_positive("pulldown_resistance", self.pulldown_resistance)?;
        check_positive("pullup_resistance", self.pullup_resistance)?;
        if let Some(b) = &self.booster {
            check_positive("booster.inductance", b.inductance)?;
            check_positive("booster.gate_capacitance", b.gate_capacitance)?;
            check_positive("booster.series_resistance", b.series_resistance)?;
        }
        Ok(())
    }

    /// Resistance of the closed resonant path.
    pub fn series_resistance(&self, params: &RlcParams) -> f64 {
        params.r_total + self.series_switch_on_resistance.unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub v_c: f64,
    pub i_l: f64,
    /// Phase of the step that starts at this sample.
    pub phase: Phase,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceEvent {
    PhaseChange { t: f64, from: Phase, to: Phase },
    CurrentZero { t: f64 },
    Clamp { t: f64, current: f64, energy: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoosterTrace {
    /// Gate voltage, one entry per main-trace sample.
    pub v_gate: Vec<f64>,
    pub peak_voltage: f64,
    pub peak_time: f64,
    /// Peak above the rail.
    pub bump: f64,
    pub energy_from_vdd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveformTrace {
    pub samples: Vec<Sample>,
    pub events: Vec<TraceEvent>,
    pub dt: f64,
    pub booster: Option<BoosterTrace>,
}

impl WaveformTrace {
    pub fn first(&self) -> &Sample {
        &self.samples[0]
    }

    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trace has samples")
    }

    pub fn clamp_energy(&self) -> f64 {
        self.events
            .iter()
            .map(|e| match e {
                TraceEvent::Clamp { energy, .. } => *energy,
                _ => 0.0,
            })
            .sum()
    }

    /// Sample at which the given phase ends, i.e. the first sample after
    /// its last step.
    pub fn end_of(&self, phase: Phase) -> Option<&Sample> {
        let last = self.samples.iter().rposition(|s| s.phase == phase)?;
        self.samples.get(last + 1)
    }

    /// Writes `t,v_c,i_l,phase` CSV with six significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,v_c,i_l,phase")?;
        for s in &self.samples {
            writeln!(out, "{:.5e},{:.5e},{:.5e},{}", s.t, s.v_c, s.i_l, s.phase.name())?;
        }
        out.flush()
    }
}

/// Time scale used to bound the step: the damped period, or the undamped
/// one when the tank does not oscillate.
fn reference_period(params: &RlcParams) -> Result<f64> {
    let res = derive_resonance(params)?;
    Ok(res.t_r.unwrap_or(2.0 * PI / res.omega_0))
}

fn rail_time_constant(params: &RlcParams, phases: &PhaseConfig) -> f64 {
    phases.pulldown_resistance.min(phases.pullup_resistance) * params.capacitance
}

/// Largest step accepted by [`simulate_write_cycle`].
pub fn max_time_step(params: &RlcParams, phases: &PhaseConfig) -> Result<f64> {
    Ok((reference_period(params)? / 1000.0).min(rail_time_constant(params, phases)))
}

/// `T_R / 10^4`, shortened when a rail time constant is faster than
/// `T_R / 200`.
pub fn default_time_step(params: &RlcParams, phases: &PhaseConfig) -> Result<f64> {
    Ok((reference_period(params)? / STEPS_PER_PERIOD).min(rail_time_constant(params, phases) / 50.0))
}

fn snap(t: f64, h: f64, n: usize) -> usize {
    ((t / h).round() as usize).min(n)
}

/// Simulates one clock period from `V_C = V_DD`, `i_L = 0`.
pub fn simulate_write_cycle(
    params: &RlcParams,
    phases: &PhaseConfig,
    control: &ControlWaveforms,
    dt: f64,
) -> Result<WaveformTrace> {
    params.validate()?;
    phases.validate()?;
    control.validate()?;
    check_positive("dt", dt)?;
    let limit = max_time_step(params, phases)?;
    if dt > limit {
        return Err(Error::StepSize { dt, limit });
    }

    let n = ((control.period / dt).round() as usize).max(1);
    let h = control.period / n as f64;

    let mut modes = vec![Phase::Hold; n];
    let mut paint = |w: &Window, phase: Phase| {
        for m in &mut modes[snap(w.start, h, n)..snap(w.end, h, n)] {
            *m = phase;
        }
    };
    for (k, w) in control.vsr_windows.iter().enumerate() {
        let phase = if k % 2 == 0 {
            Phase::ResonantDischarge
        } else {
            Phase::ResonantRecovery
        };
        paint(w, phase);
    }
    for w in &control.vdn_windows {
        paint(w, Phase::PullDown);
    }
    for w in &control.pullup_windows {
        paint(w, Phase::PullUp);
    }

    let c = params.capacitance;
    let resonant = Topology::resonant(
        c,
        SeriesBranch {
            resistance: phases.series_resistance(params),
            inductance: params.inductance,
            source: params.v_bias,
        },
    );
    let pulldown = Topology::pulldown(c, phases.pulldown_resistance);
    let pullup = Topology::pullup(c, phases.pullup_resistance, params.v_dd);
    let hold = Topology::isolated(c);

    let mut samples = Vec::with_capacity(n + 1);
    let mut events = Vec::new();
    let mut state = State::new(params.v_dd, 0.0);

    for (k, &mode) in modes.iter().enumerate() {
        let t = k as f64 * h;
        if k > 0 && modes[k - 1] != mode {
            events.push(TraceEvent::PhaseChange {
                t,
                from: modes[k - 1],
                to: mode,
            });
        }
        samples.push(Sample {
            t,
            v_c: state.v_c,
            i_l: state.i_l,
            phase: mode,
        });
        let series_closed = mode.is_resonant();
        let continuing = k > 0 && modes[k - 1] == mode;
        if !continuing && state.i_l != 0.0 {
            // the previous resonant window just ended (or a new one started
            // with trapped current): the clamp absorbs what is left
            events.push(TraceEvent::Clamp {
                t,
                current: state.i_l,
                energy: 0.5 * params.inductance * state.i_l * state.i_l,
            });
            state.i_l = 0.0;
        }
        let topology = match mode {
            Phase::ResonantDischarge | Phase::ResonantRecovery => &resonant,
            Phase::PullDown => &pulldown,
            Phase::PullUp => &pullup,
            Phase::Hold => &hold,
        };
        let next = topology.step(state, h);
        if !(next.v_c.is_finite() && next.i_l.is_finite()) {
            return Err(Error::Divergence { t: t + h });
        }
        if series_closed && state.i_l != 0.0 && (next.i_l == 0.0 || next.i_l.signum() != state.i_l.signum()) {
            events.push(TraceEvent::CurrentZero {
                t: t + h * state.i_l / (state.i_l - next.i_l),
            });
        }
        state = next;
    }
    samples.push(Sample {
        t: control.period,
        v_c: state.v_c,
        i_l: state.i_l,
        phase: modes[n - 1],
    });

    let booster = match &phases.booster {
        Some(b) => Some(simulate_booster(b, params.v_dd, &modes, h)?),
        None => None,
    };

    Ok(WaveformTrace {
        samples,
        events,
        dt: h,
        booster,
    })
}

/// Gate node starts each VSR window at 0 V and rings up from `V_DD`
/// through the booster inductor; it is discharged between windows.
fn simulate_booster(b: &Booster, v_dd: f64, modes: &[Phase], h: f64) -> Result<BoosterTrace> {
    let tank = Topology::resonant(
        b.gate_capacitance,
        SeriesBranch {
            resistance: b.series_resistance,
            inductance: b.inductance,
            source: v_dd,
        },
    );
    let mut v_gate = Vec::with_capacity(modes.len() + 1);
    let mut state = State::new(0.0, 0.0);
    let mut energy = 0.0;
    let (mut peak_voltage, mut peak_time) = (0.0f64, 0.0);
    for (k, &mode) in modes.iter().enumerate() {
        if !mode.is_resonant() {
            state = State::new(0.0, 0.0);
        }
        v_gate.push(state.v_c);
        if state.v_c > peak_voltage {
            peak_voltage = state.v_c;
            peak_time = k as f64 * h;
        }
        if mode.is_resonant() {
            let next = tank.step(state, h);
            if !(next.v_c.is_finite() && next.i_l.is_finite()) {
                return Err(Error::Divergence { t: (k + 1) as f64 * h });
            }
            // source current flows toward the gate, i.e. -i_l in the tank
            // convention
            energy += v_dd * h * 0.5 * (-state.i_l - next.i_l);
            state = next;
        }
    }
    v_gate.push(state.v_c);
    if state.v_c > peak_voltage {
        peak_voltage = state.v_c;
        peak_time = modes.len() as f64 * h;
    }
    Ok(BoosterTrace {
        v_gate,
        peak_voltage,
        peak_time,
        bump: peak_voltage - v_dd,
        energy_from_vdd: energy,
    })
}

/// First sign change of the inductor current inside a resonant window,
/// located by linear interpolation between samples.
pub fn find_current_zero(trace: &WaveformTrace) -> Result<f64> {
    trace
        .samples
        .windows(2)
        .find_map(|pair| {
            let (a, b) = (&pair[0], &pair[1]);
            let crosses = a.phase.is_resonant()
                && a.i_l != 0.0
                && (b.i_l == 0.0 || b.i_l.signum() != a.i_l.signum());
            crosses.then(|| a.t + (b.t - a.t) * a.i_l / (a.i_l - b.i_l))
        })
        .ok_or(Error::NoCrossing)
}

/// Width of the resonant window that opens the switch at the natural
/// current zero, found by simulating a lone discharge.
pub fn tune_resonant_width(params: &RlcParams, phases: &PhaseConfig, dt: f64) -> Result<f64> {
    let horizon = reference_period(params)?;
    let control = ControlWaveforms {
        period: horizon,
        vsr_windows: vec![Window::new(0.0, horizon)],
        vdn_windows: Vec::new(),
        pullup_windows: Vec::new(),
    };
    let trace = simulate_write_cycle(params, phases, &control, dt)?;
    find_current_zero(&trace)
}

/// Tunes the SD delay to the current zero, then simulates the full cycle.
/// Returns the trimmed schedule alongside the trace.
pub fn simulate_tuned_cycle(
    params: &RlcParams,
    phases: &PhaseConfig,
    schedule: &PulseSchedule,
    dt: f64,
) -> Result<(PulseSchedule, WaveformTrace)> {
    let width = tune_resonant_width(params, phases, dt)?;
    let tuned = schedule.with_delay(width);
    let control = build_control(&tuned, true)?;
    let trace = simulate_write_cycle(params, phases, &control, dt)?;
    Ok((tuned, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::swing;
    use approx::assert_relative_eq;

    fn row1() -> RlcParams {
        RlcParams::new(0.5, 0.621e-9, 10.10e-12, 0.9).unwrap()
    }

    fn rails() -> PhaseConfig {
        PhaseConfig::with_rails(0.5)
    }

    fn half(p: &RlcParams) -> f64 {
        derive_resonance(p).unwrap().t_r_half.unwrap()
    }

    #[test]
    fn tuned_width_is_half_period() {
        let p = row1();
        let dt = default_time_step(&p, &rails()).unwrap();
        let w = tune_resonant_width(&p, &rails(), dt).unwrap();
        assert!((w - half(&p)).abs() < dt);
        assert_relative_eq!(w, 248.0e-12, max_relative = 0.01);
    }

    #[test]
    fn overdamped_has_no_crossing() {
        let p = RlcParams::new(2.0, 0.005e-9, 10e-12, 0.9).unwrap();
        let dt = default_time_step(&p, &rails()).unwrap();
        assert_eq!(tune_resonant_width(&p, &rails(), dt), Err(Error::NoCrossing));
    }

    #[test]
    fn tuned_cycle_reaches_v_ol_and_completes() {
        let p = row1();
        let dt = default_time_step(&p, &rails()).unwrap();
        let (_, trace) =
            simulate_tuned_cycle(&p, &rails(), &PulseSchedule::symmetric(1e-9, 0.0), dt).unwrap();
        let v_ol = swing(&p).unwrap().v_ol;
        let end1 = trace.end_of(Phase::ResonantDischarge).unwrap();
        assert!((end1.v_c - v_ol).abs() < 1e-4 * 0.9, "{} vs {}", end1.v_c, v_ol);
        assert!((end1.v_c - 0.043).abs() < 1e-3);
        let last = trace.last();
        assert!(last.v_c >= 0.99 * 0.9 && last.v_c <= 0.9 + 1e-12);
        // tuned: clamp absorbs essentially nothing
        assert!(trace.clamp_energy() < 1e-9 * 10.10e-12 * 0.81);
    }

    #[test]
    fn lossless_full_swing_needs_no_pulldown_energy() {
        let p = RlcParams::new(1e-9, 0.621e-9, 10.10e-12, 0.9).unwrap();
        let dt = default_time_step(&p, &rails()).unwrap();
        let (_, trace) =
            simulate_tuned_cycle(&p, &rails(), &PulseSchedule::symmetric(1e-9, 0.0), dt).unwrap();
        let end1 = trace.end_of(Phase::ResonantDischarge).unwrap();
        assert!(end1.v_c.abs() < 1e-6);
    }

    #[test]
    fn mistuned_quarter_period_leaves_current() {
        let p = row1();
        let dt = default_time_step(&p, &rails()).unwrap();
        let control = build_control(&PulseSchedule::symmetric(1e-9, half(&p) / 2.0), true).unwrap();
        let trace = simulate_write_cycle(&p, &rails(), &control, dt).unwrap();
        let end1 = trace.end_of(Phase::ResonantDischarge).unwrap();
        assert!(end1.v_c > swing(&p).unwrap().v_ol + 0.1);
        assert!(end1.i_l.abs() > 1e-3);
        assert!(trace.clamp_energy() > 0.0);
    }

    #[test]
    fn step_size_is_checked() {
        let p = row1();
        let control = build_control(&PulseSchedule::symmetric(1e-9, 200e-12), true).unwrap();
        let err = simulate_write_cycle(&p, &rails(), &control, 1e-12).unwrap_err();
        assert!(matches!(err, Error::StepSize { .. }));
    }

    #[test]
    fn trace_is_well_formed() {
        let p = row1();
        let dt = default_time_step(&p, &rails()).unwrap();
        let control = build_control(&PulseSchedule::symmetric(1e-9, half(&p)), true).unwrap();
        let trace = simulate_write_cycle(&p, &rails(), &control, dt).unwrap();
        assert!(trace.samples.windows(2).all(|w| w[1].t > w[0].t));
        assert!(trace.samples.iter().all(|s| s.v_c.is_finite() && s.i_l.is_finite()));
        let order: Vec<Phase> = trace
            .events
            .iter()
            .filter_map(|e| match e {
                TraceEvent::PhaseChange { to, .. } => Some(*to),
                _ => None,
            })
            .collect();
        assert_eq!(
            order,
            vec![Phase::PullDown, Phase::ResonantRecovery, Phase::PullUp]
        );
        let mut csv = Vec::new();
        trace.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("t,v_c,i_l,phase\n0.00000e0,9.00000e-1,0.00000e0,resonant_discharge\n"));
        assert_eq!(text.lines().count(), trace.samples.len() + 1);
    }

    #[test]
    fn booster_bumps_above_rail() {
        let p = row1();
        let mut phases = rails();
        phases.booster = Some(Booster {
            inductance: 0.5e-9,
            gate_capacitance: 50e-15,
            series_resistance: 5.0,
        });
        let dt = default_time_step(&p, &phases).unwrap();
        let control = build_control(&PulseSchedule::symmetric(1e-9, half(&p)), true).unwrap();
        let trace = simulate_write_cycle(&p, &phases, &control, dt).unwrap();
        let b = trace.booster.unwrap();
        assert_eq!(b.v_gate.len(), trace.samples.len());
        assert!(b.bump > 0.0 && b.peak_voltage < 2.0 * 0.9);
        assert!(b.energy_from_vdd > 0.0);
    }
}

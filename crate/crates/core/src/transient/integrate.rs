//! Fixed-step RK4 on the piecewise-constant-topology state equations.

use serde::{Deserialize, Serialize};

use crate::error::{check_non_negative, check_positive, Error, Result};

/// Capacitor voltage and inductor current. Current is positive flowing
/// from the capacitor node into the bias supply.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub v_c: f64,
    pub i_l: f64,
}

impl State {
    pub fn new(v_c: f64, i_l: f64) -> Self {
        Self { v_c, i_l }
    }

    fn is_finite(&self) -> bool {
        self.v_c.is_finite() && self.i_l.is_finite()
    }

    fn axpy(self, h: f64, d: State) -> State {
        State {
            v_c: self.v_c + h * d.v_c,
            i_l: self.i_l + h * d.i_l,
        }
    }
}

/// Closed series path: resistor and inductor from the capacitor node to a
/// voltage source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesBranch {
    pub resistance: f64,
    pub inductance: f64,
    pub source: f64,
}

/// Which paths conduct during a phase. A zero conductance is an open
/// switch. With no series branch the inductor current is frozen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    pub capacitance: f64,
    pub series: Option<SeriesBranch>,
    pub pulldown_conductance: f64,
    pub pullup_conductance: f64,
    pub rail: f64,
}

impl Topology {
    pub fn isolated(capacitance: f64) -> Self {
        Self {
            capacitance,
            series: None,
            pulldown_conductance: 0.0,
            pullup_conductance: 0.0,
            rail: 0.0,
        }
    }

    pub fn resonant(capacitance: f64, branch: SeriesBranch) -> Self {
        Self {
            series: Some(branch),
            ..Self::isolated(capacitance)
        }
    }

    pub fn pulldown(capacitance: f64, resistance: f64) -> Self {
        Self {
            pulldown_conductance: 1.0 / resistance,
            ..Self::isolated(capacitance)
        }
    }

    pub fn pullup(capacitance: f64, resistance: f64, rail: f64) -> Self {
        Self {
            pullup_conductance: 1.0 / resistance,
            rail,
            ..Self::isolated(capacitance)
        }
    }

    fn validate(&self) -> Result<()> {
        check_positive("capacitance", self.capacitance)?;
        check_non_negative("pulldown_conductance", self.pulldown_conductance)?;
        check_non_negative("pullup_conductance", self.pullup_conductance)?;
        if let Some(b) = &self.series {
            check_non_negative("series resistance", b.resistance)?;
            check_positive("series inductance", b.inductance)?;
        }
        Ok(())
    }

    pub fn derivative(&self, s: State) -> State {
        let mut node_current = -self.pulldown_conductance * s.v_c
            + self.pullup_conductance * (self.rail - s.v_c);
        let di = match &self.series {
            Some(b) => {
                node_current -= s.i_l;
                (s.v_c - b.source - b.resistance * s.i_l) / b.inductance
            }
            None => 0.0,
        };
        State {
            v_c: node_current / self.capacitance,
            i_l: di,
        }
    }

    /// One classical fourth-order Runge-Kutta step.
    pub fn step(&self, s: State, h: f64) -> State {
        let k1 = self.derivative(s);
        let k2 = self.derivative(s.axpy(h / 2.0, k1));
        let k3 = self.derivative(s.axpy(h / 2.0, k2));
        let k4 = self.derivative(s.axpy(h, k3));
        State {
            v_c: s.v_c + h / 6.0 * (k1.v_c + 2.0 * k2.v_c + 2.0 * k3.v_c + k4.v_c),
            i_l: s.i_l + h / 6.0 * (k1.i_l + 2.0 * k2.i_l + 2.0 * k3.i_l + k4.i_l),
        }
    }
}

/// Integrates one phase of constant topology. The step is shrunk so a
/// whole number of steps covers `duration`; the returned trajectory
/// includes the initial state.
pub fn integrate_phase(
    state: State,
    topology: &Topology,
    duration: f64,
    dt: f64,
) -> Result<Vec<State>> {
    topology.validate()?;
    check_non_negative("duration", duration)?;
    check_positive("dt", dt)?;
    if duration == 0.0 {
        return Ok(vec![state]);
    }
    let steps = (duration / dt * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    let h = duration / steps as f64;

    let mut out = Vec::with_capacity(steps + 1);
    out.push(state);
    let mut s = state;
    for k in 0..steps {
        s = topology.step(s, h);
        if !s.is_finite() {
            return Err(Error::Divergence {
                t: (k + 1) as f64 * h,
            });
        }
        out.push(s);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn zero_duration_is_identity() {
        let s = State::new(0.3, 1e-3);
        let traj = integrate_phase(s, &Topology::pulldown(1e-12, 10.0), 0.0, 1e-15).unwrap();
        assert_eq!(traj, vec![s]);
    }

    #[test]
    fn rc_pulldown_matches_exponential() {
        let (r, c) = (100.0, 10.10e-12);
        let tau = r * c;
        let traj = integrate_phase(
            State::new(0.05, 0.0),
            &Topology::pulldown(c, r),
            tau,
            tau / 1000.0,
        )
        .unwrap();
        let v = traj.last().unwrap().v_c;
        assert_relative_eq!(v, 0.05 * (-1.0f64).exp(), max_relative = 1e-12);
    }

    #[test]
    fn lossless_half_period_reflects_about_bias() {
        let (l, c): (f64, f64) = (0.621e-9, 10.10e-12);
        let half = PI * (l * c).sqrt();
        let branch = SeriesBranch {
            resistance: 0.0,
            inductance: l,
            source: 0.45,
        };
        let traj = integrate_phase(
            State::new(0.9, 0.0),
            &Topology::resonant(c, branch),
            half,
            half / 10_000.0,
        )
        .unwrap();
        let end = traj.last().unwrap();
        assert!((end.v_c - 0.0).abs() < 1e-9);
        let peak = 0.45 / (l / c).sqrt();
        assert!(end.i_l.abs() < 1e-9 * peak);
    }

    #[test]
    fn divergence_is_reported() {
        // wildly unstable step on a stiff RC
        let err = integrate_phase(
            State::new(1.0, 0.0),
            &Topology::pulldown(1e-15, 1.0),
            1e-6,
            1e-9,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Divergence { .. }));
    }

    #[test]
    fn rejects_bad_step() {
        assert!(integrate_phase(State::new(1.0, 0.0), &Topology::isolated(1e-12), 1e-9, 0.0).is_err());
        assert!(integrate_phase(State::new(1.0, 0.0), &Topology::isolated(1e-12), -1e-9, 1e-12).is_err());
    }
}

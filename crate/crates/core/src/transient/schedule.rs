//! Pulse schedule and the derived control windows.
//!
//! `S` is high over `[s_rise, s_fall)`, `SD` is `S` delayed by the tuning
//! register, `VSR = S xor SD` gates the resonant path and `VDN = S and SD`
//! drives the pull-down that completes the falling transition. The pull-up
//! opens when the recovery `VSR` pulse ends and stays on for the rest of
//! the clock period.

use serde::{Deserialize, Serialize};

use crate::error::{check_non_negative, check_positive, Error, Result};

/// Largest value of the 4-bit delay register.
pub const MAX_DELAY_CODE: u8 = 15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseSchedule {
    /// Clock period `T_Rclk` (s).
    pub clock_period: f64,
    pub s_rise: f64,
    pub s_fall: f64,
    /// 4-bit register value, 0..=15.
    pub delay_code: u8,
    pub base_delay: f64,
    pub delay_step: f64,
}

impl Default for PulseSchedule {
    fn default() -> Self {
        Self {
            clock_period: 1e-9,
            s_rise: 0.0,
            s_fall: 0.5e-9,
            delay_code: 0,
            base_delay: 100e-12,
            delay_step: 10e-12,
        }
    }
}

impl PulseSchedule {
    /// `S` high for the first half of the period.
    pub fn symmetric(clock_period: f64, delay: f64) -> Self {
        Self {
            clock_period,
            s_rise: 0.0,
            s_fall: clock_period / 2.0,
            delay_code: 0,
            base_delay: delay,
            delay_step: 0.0,
        }
    }

    /// SD delay, `base_delay + delay_code * delay_step`.
    pub fn delay(&self) -> f64 {
        self.base_delay + f64::from(self.delay_code) * self.delay_step
    }

    /// Same schedule with the register trimmed to an exact delay: the base
    /// absorbs the target and the code is cleared.
    pub fn with_delay(mut self, delay: f64) -> Self {
        self.base_delay = delay;
        self.delay_code = 0;
        self
    }

    /// Register code whose delay is closest to `target`.
    pub fn nearest_code(&self, target: f64) -> u8 {
        if self.delay_step <= 0.0 {
            return 0;
        }
        let code = ((target - self.base_delay) / self.delay_step).round();
        code.clamp(0.0, f64::from(MAX_DELAY_CODE)) as u8
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("clock_period", self.clock_period)?;
        check_non_negative("s_rise", self.s_rise)?;
        check_non_negative("base_delay", self.base_delay)?;
        check_non_negative("delay_step", self.delay_step)?;
        if self.delay_code > MAX_DELAY_CODE {
            return Err(Error::Schedule(format!(
                "delay_code {} does not fit the 4-bit register",
                self.delay_code
            )));
        }
        if !(self.s_rise < self.s_fall && self.s_fall < self.clock_period) {
            return Err(Error::Schedule(format!(
                "need 0 <= s_rise < s_fall < clock_period, got {:e}, {:e}, {:e}",
                self.s_rise, self.s_fall, self.clock_period
            )));
        }
        let delay = self.delay();
        if self.s_fall + delay > self.clock_period {
            return Err(Error::Schedule(format!(
                "s_fall + delay = {:e} s overruns the clock period {:e} s",
                self.s_fall + delay,
                self.clock_period
            )));
        }
        if delay >= self.s_fall - self.s_rise {
            return Err(Error::Schedule(format!(
                "SD delay {:e} s must be shorter than the S pulse {:e} s",
                delay,
                self.s_fall - self.s_rise
            )));
        }
        Ok(())
    }
}

/// Half-open time interval `[start, end)` in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub start: f64,
    pub end: f64,
}

impl Window {
    pub fn new(start: f64, end: f64) -> Self {
        Self { start, end }
    }

    pub fn width(&self) -> f64 {
        self.end - self.start
    }

    fn overlaps(&self, other: &Window) -> bool {
        self.start < other.end && other.start < self.end
    }
}

/// Control windows for one clock period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlWaveforms {
    pub period: f64,
    pub vsr_windows: Vec<Window>,
    pub vdn_windows: Vec<Window>,
    pub pullup_windows: Vec<Window>,
}

impl ControlWaveforms {
    /// Checks bounds, ordering and that no two switches conduct at once.
    pub fn validate(&self) -> Result<()> {
        check_positive("period", self.period)?;
        let signals = [
            ("VSR", &self.vsr_windows),
            ("VDN", &self.vdn_windows),
            ("pull-up", &self.pullup_windows),
        ];
        for (name, windows) in signals {
            for w in windows.iter() {
                if !(w.start.is_finite() && w.end.is_finite())
                    || w.start < 0.0
                    || w.end > self.period
                    || w.end <= w.start
                {
                    return Err(Error::Schedule(format!(
                        "{name} window [{:e}, {:e}) is empty or outside [0, {:e}]",
                        w.start, w.end, self.period
                    )));
                }
            }
            for pair in windows.windows(2) {
                if pair[1].start < pair[0].end {
                    return Err(Error::Schedule(format!("{name} windows overlap or are unsorted")));
                }
            }
        }
        for (i, (a_name, a)) in signals.iter().enumerate() {
            for (b_name, b) in &signals[i + 1..] {
                if a.iter().any(|wa| b.iter().any(|wb| wa.overlaps(wb))) {
                    return Err(Error::Schedule(format!(
                        "{a_name} and {b_name} conduct at the same time"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Derives VSR/VDN/pull-up windows from the pulse schedule.
///
/// With `strict`, a zero SD delay is rejected: no VSR pulse means no
/// resonant transfer. Without it, a zero delay degenerates into a plain
/// CMOS pull-down/pull-up cycle.
pub fn build_control(schedule: &PulseSchedule, strict: bool) -> Result<ControlWaveforms> {
    schedule.validate()?;
    let delay = schedule.delay();
    if strict && delay == 0.0 {
        return Err(Error::DegenerateSchedule(
            "SD delay is zero, so VSR never pulses".into(),
        ));
    }
    let s = Window::new(schedule.s_rise, schedule.s_fall);
    let sd = Window::new(schedule.s_rise + delay, schedule.s_fall + delay);

    let vsr_windows = if delay > 0.0 {
        // xor of two equal-width pulses offset by less than their width
        vec![Window::new(s.start, sd.start), Window::new(s.end, sd.end)]
    } else {
        Vec::new()
    };
    let vdn_windows = vec![Window::new(sd.start, s.end)];
    let recovery_end = sd.end;
    let pullup_windows = if recovery_end < schedule.clock_period {
        vec![Window::new(recovery_end, schedule.clock_period)]
    } else {
        Vec::new()
    };

    let control = ControlWaveforms {
        period: schedule.clock_period,
        vsr_windows,
        vdn_windows,
        pullup_windows,
    };
    control.validate()?;
    Ok(control)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Samples a boolean signal built from step edges; used as a
    /// brute-force check of the interval algebra.
    fn level(t: f64, rise: f64, fall: f64) -> bool {
        t >= rise && t < fall
    }

    fn inside(t: f64, windows: &[Window]) -> bool {
        windows.iter().any(|w| t >= w.start && t < w.end)
    }

    #[test]
    fn xor_and_windows_match_boolean_evaluation() {
        let sched = PulseSchedule {
            clock_period: 1e-9,
            s_rise: 0.0,
            s_fall: 500e-12,
            delay_code: 0,
            base_delay: 248e-12,
            delay_step: 0.0,
        };
        let c = build_control(&sched, true).unwrap();
        assert_eq!(c.vsr_windows, vec![Window::new(0.0, 248e-12), Window::new(500e-12, 500e-12 + 248e-12)]);
        assert_eq!(c.vdn_windows, vec![Window::new(248e-12, 500e-12)]);
        assert_eq!(c.pullup_windows, vec![Window::new(500e-12 + 248e-12, 1e-9)]);

        for k in 0..10_000 {
            let t = (k as f64 + 0.5) * 1e-13;
            let s = level(t, 0.0, 500e-12);
            let sd = level(t, 248e-12, 748e-12);
            assert_eq!(inside(t, &c.vsr_windows), s ^ sd, "VSR at {t:e}");
            assert_eq!(inside(t, &c.vdn_windows), s && sd, "VDN at {t:e}");
        }
        for w in &c.vsr_windows {
            assert_relative_eq!(w.width(), sched.delay(), max_relative = 1e-12);
        }
    }

    #[test]
    fn zero_delay() {
        let sched = PulseSchedule::symmetric(1e-9, 0.0);
        let c = build_control(&sched, false).unwrap();
        assert!(c.vsr_windows.is_empty());
        assert_eq!(c.vdn_windows, vec![Window::new(0.0, 0.5e-9)]);
        assert!(matches!(build_control(&sched, true), Err(Error::DegenerateSchedule(_))));
    }

    #[test]
    fn register_is_affine() {
        let mut s = PulseSchedule {
            clock_period: 2e-9,
            s_fall: 1e-9,
            ..PulseSchedule::default()
        };
        s.delay_code = 0;
        assert_relative_eq!(s.delay(), 100e-12);
        s.delay_code = 15;
        assert_relative_eq!(s.delay(), 250e-12, max_relative = 1e-12);
        let c = build_control(&s, true).unwrap();
        assert_relative_eq!(c.vsr_windows[0].width(), 250e-12, max_relative = 1e-12);
        assert_eq!(s.nearest_code(181e-12), 8);
        assert_eq!(s.nearest_code(1e-9), 15);
        assert_eq!(s.nearest_code(0.0), 0);
    }

    #[test]
    fn schedule_errors() {
        let mut s = PulseSchedule::default();
        s.s_fall = 1.2e-9;
        assert!(matches!(build_control(&s, true), Err(Error::Schedule(_))));
        let mut s = PulseSchedule::default();
        s.delay_code = 16;
        assert!(s.validate().is_err());
        let s = PulseSchedule::symmetric(1e-9, 0.6e-9);
        assert!(s.validate().is_err());
    }

    #[test]
    fn overlapping_control_is_rejected() {
        let c = ControlWaveforms {
            period: 1e-9,
            vsr_windows: vec![Window::new(0.0, 300e-12)],
            vdn_windows: vec![Window::new(250e-12, 500e-12)],
            pullup_windows: vec![],
        };
        assert!(matches!(c.validate(), Err(Error::Schedule(_))));
    }
}

//! Test-only reference integrator, written independently of the library.
#![allow(dead_code)]

use proptest::prelude::*;

/// Series tank: capacitor `c` discharging through `r` and `l` into a bias
/// source `vb`. Current is positive flowing out of the capacitor.
#[derive(Debug, Clone, Copy)]
pub struct Tank {
    pub r: f64,
    pub l: f64,
    pub c: f64,
    pub vb: f64,
}

impl Tank {
    fn slope(&self, v: f64, i: f64) -> (f64, f64) {
        (-i / self.c, (v - self.vb - self.r * i) / self.l)
    }

    /// Classic fourth-order Runge-Kutta; returns `(v, i)` at every step,
    /// including the initial state.
    pub fn rk4(&self, v0: f64, i0: f64, dt: f64, steps: usize) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(steps + 1);
        let (mut v, mut i) = (v0, i0);
        out.push((v, i));
        for _ in 0..steps {
            let (a1, b1) = self.slope(v, i);
            let (a2, b2) = self.slope(v + 0.5 * dt * a1, i + 0.5 * dt * b1);
            let (a3, b3) = self.slope(v + 0.5 * dt * a2, i + 0.5 * dt * b2);
            let (a4, b4) = self.slope(v + dt * a3, i + dt * b3);
            v += dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
            i += dt / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
            out.push((v, i));
        }
        out
    }

    pub fn damped_period(&self) -> f64 {
        let w0sq = 1.0 / (self.l * self.c);
        let a = self.r / (2.0 * self.l);
        2.0 * std::f64::consts::PI / (w0sq - a * a).sqrt()
    }
}

/// `(r, l, c, v_dd)` with quality factor in `q_range`.
pub fn underdamped_params(q_lo: f64, q_hi: f64) -> impl Strategy<Value = (f64, f64, f64, f64)> {
    (0.05f64..10.0, q_lo..q_hi, -13.0f64..-10.0, 0.5f64..1.2).prop_map(|(r, q, log_c, v_dd)| {
        let c = 10f64.powf(log_c);
        let l = (q * r).powi(2) * c;
        (r, l, c, v_dd)
    })
}

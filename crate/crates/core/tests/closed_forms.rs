mod common;

use common::{underdamped_params, Tank};
use proptest::prelude::*;
use resram::analytic::{cap_voltage, current_scale, inductor_current, WaveformVariant};
use resram::circuit::{derive_resonance, RlcParams};

fn params((r, l, c, v_dd): (f64, f64, f64, f64)) -> RlcParams {
    RlcParams::new(r, l, c, v_dd).unwrap()
}

fn tank(p: &RlcParams) -> Tank {
    Tank {
        r: p.r_total,
        l: p.inductance,
        c: p.capacitance,
        vb: p.v_bias,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn closed_forms_match_reference_integrator(raw in underdamped_params(0.6, 40.0)) {
        let p = params(raw);
        let t_r = derive_resonance(&p).unwrap().t_r.unwrap();
        let dt = t_r / 1e4;
        let traj = tank(&p).rk4(p.v_dd, 0.0, dt, 50_000);
        let i_scale = current_scale(&p).unwrap();
        let mut worst_v = 0.0f64;
        let mut worst_i = 0.0f64;
        for (k, &(v, i)) in traj.iter().enumerate().step_by(7) {
            let t = k as f64 * dt;
            let va = cap_voltage(&p, t, WaveformVariant::OdeConsistent).unwrap();
            let ia = inductor_current(&p, t).unwrap();
            worst_v = worst_v.max((va - v).abs());
            worst_i = worst_i.max((ia - i).abs());
        }
        prop_assert!(worst_v < 1e-4 * p.v_dd, "voltage error {worst_v:e}");
        prop_assert!(worst_i < 1e-4 * i_scale, "current error {worst_i:e}");
    }

    #[test]
    fn closed_forms_satisfy_the_circuit_equation(raw in underdamped_params(0.6, 40.0), frac in 0.01f64..4.0) {
        let p = params(raw);
        let t_r = derive_resonance(&p).unwrap().t_r.unwrap();
        let t = frac * t_r;
        let v = |t| cap_voltage(&p, t, WaveformVariant::OdeConsistent).unwrap();
        let i = |t| inductor_current(&p, t).unwrap();
        // relative residuals of both branch equations with step h
        let residual = |h: f64| {
            let dv = (v(t + h) - v(t - h)) / (2.0 * h);
            let di = (i(t + h) - i(t - h)) / (2.0 * h);
            let kcl = (p.capacitance * dv + i(t)).abs() / current_scale(&p).unwrap();
            let kvl = (p.inductance * di + p.r_total * i(t) - (v(t) - p.v_bias)).abs() / p.v_dd;
            kcl.max(kvl)
        };
        let coarse = residual(t_r * 1e-3);
        let fine = residual(t_r * 5e-4);
        prop_assert!(coarse < 1e-4, "coarse residual {coarse:e}");
        // second order: halving the step quarters the residual, unless both
        // are already at rounding level
        prop_assert!(fine < coarse / 3.0 || coarse < 1e-9, "{coarse:e} -> {fine:e}");
    }

    #[test]
    fn energy_with_source_work_is_conserved(raw in underdamped_params(0.6, 40.0)) {
        let p = params(raw);
        let t_r = derive_resonance(&p).unwrap().t_r.unwrap();
        let dt = t_r / 2e4;
        let e0 = 0.5 * p.capacitance * p.v_dd * p.v_dd;
        let (mut dissipated, mut to_source) = (0.0, 0.0);
        let mut prev_i = 0.0;
        let mut worst = 0.0f64;
        for k in 1..=60_000 {
            let t = k as f64 * dt;
            let v = cap_voltage(&p, t, WaveformVariant::OdeConsistent).unwrap();
            let i = inductor_current(&p, t).unwrap();
            dissipated += 0.5 * dt * p.r_total * (i * i + prev_i * prev_i);
            to_source += 0.5 * dt * p.v_bias * (i + prev_i);
            prev_i = i;
            let stored = 0.5 * p.capacitance * v * v + 0.5 * p.inductance * i * i;
            worst = worst.max((stored + dissipated + to_source - e0).abs() / e0);
        }
        prop_assert!(worst < 1e-6, "drift {worst:e}");
    }

    #[test]
    fn current_first_zero_is_half_period(raw in underdamped_params(0.6, 40.0)) {
        let p = params(raw);
        let half = derive_resonance(&p).unwrap().t_r_half.unwrap();
        let scale = current_scale(&p).unwrap();
        prop_assert!(inductor_current(&p, half).unwrap().abs() < 1e-12 * scale);
        for k in 1..100 {
            prop_assert!(inductor_current(&p, half * k as f64 / 100.0).unwrap() > 0.0);
        }
        prop_assert!(inductor_current(&p, half * 1.01).unwrap() < 0.0);
    }
}

#[test]
fn literal_variant_disagrees_with_the_circuit_equation() {
    let p = RlcParams::new(0.5, 0.621e-9, 10.10e-12, 0.9).unwrap();
    let t_r = derive_resonance(&p).unwrap().t_r.unwrap();
    let traj = tank(&p).rk4(p.v_dd, 0.0, t_r / 1e4, 10_000);
    let worst = traj
        .iter()
        .enumerate()
        .map(|(k, &(v, _))| {
            let t = k as f64 * t_r / 1e4;
            (cap_voltage(&p, t, WaveformVariant::PaperLiteral).unwrap() - v).abs()
        })
        .fold(0.0, f64::max);
    // off by roughly (V_DD - V_b) / 2Q at t = 0
    assert!(worst > 0.01 * p.v_dd, "{worst}");
}

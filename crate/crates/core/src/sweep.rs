//! Design-space sweeps over array size, bitline height, inductance, supply
//! and process corner.
//!
//! Points are evaluated in parallel and returned in input order. A point
//! that fails (overdamped tank, schedule that cannot hold the resonant
//! pulses, infeasible sizing) keeps its row with the failure recorded.

use std::collections::BTreeMap;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::swing;
use crate::array::{effective_params, ArrayGeometry};
use crate::circuit::derive_resonance;
use crate::energy::resonant_energy;
use crate::error::{Error, Result};
use crate::sizing::{size_inductor, SizingSpec};
use crate::transient::{
    default_time_step, simulate_tuned_cycle, Booster, PhaseConfig, PulseSchedule,
};

/// Scalar process-corner multipliers on resistance and capacitance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Corner {
    pub r_multiplier: f64,
    pub c_multiplier: f64,
}

impl Corner {
    pub const NOMINAL: Corner = Corner {
        r_multiplier: 1.0,
        c_multiplier: 1.0,
    };
}

/// `tt` nominal, `ff` = (0.85, 0.95) and `ss` = (1.25, 1.05). These are
/// modelling assumptions, not extracted device data.
pub fn default_corners() -> BTreeMap<String, Corner> {
    BTreeMap::from([
        ("ff".to_string(), Corner { r_multiplier: 0.85, c_multiplier: 0.95 }),
        ("ss".to_string(), Corner { r_multiplier: 1.25, c_multiplier: 1.05 }),
        ("tt".to_string(), Corner::NOMINAL),
    ])
}

/// Rail-completion and switch settings before they are tied to a
/// particular array. Unset rail resistances follow the parallel driver
/// resistance of the array they are applied to.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PhaseOverrides {
    pub series_switch_on_resistance: Option<f64>,
    pub pulldown_resistance: Option<f64>,
    pub pullup_resistance: Option<f64>,
    pub booster: Option<Booster>,
}

impl PhaseOverrides {
    pub fn resolve(&self, geometry: &ArrayGeometry) -> Result<PhaseConfig> {
        let driver = geometry.driver_resistance()?;
        let phases = PhaseConfig {
            series_switch_on_resistance: self.series_switch_on_resistance,
            pulldown_resistance: self.pulldown_resistance.unwrap_or(driver),
            pullup_resistance: self.pullup_resistance.unwrap_or(driver),
            booster: self.booster,
        };
        phases.validate()?;
        Ok(phases)
    }
}

/// Values per axis. An empty axis is held at the base value and gets no
/// CSV column.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SweepAxes {
    pub bits: Vec<u32>,
    pub rows: Vec<u32>,
    pub inductance: Vec<f64>,
    pub v_dd: Vec<f64>,
    pub corners: Vec<String>,
}

impl SweepAxes {
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
            && self.rows.is_empty()
            && self.inductance.is_empty()
            && self.v_dd.is_empty()
            && self.corners.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPlan {
    pub geometry: ArrayGeometry,
    pub v_dd: f64,
    pub phases: PhaseOverrides,
    pub schedule: PulseSchedule,
    pub sizing: SizingSpec,
    pub corners: BTreeMap<String, Corner>,
    pub axes: SweepAxes,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub bits: u32,
    pub rows: u32,
    pub inductance: f64,
    pub v_dd: f64,
    pub corner: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub point: SweepPoint,
    pub f_r: Option<f64>,
    pub t_r_half: Option<f64>,
    pub swing_fraction: Option<f64>,
    pub q_f: Option<f64>,
    pub savings_fraction: Option<f64>,
    pub underdamped: Option<bool>,
    /// Smallest inductance meeting the sizing spec at this point.
    pub sized_inductance: Option<f64>,
    pub errors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub axes: SweepAxes,
    pub rows: Vec<SweepRow>,
}

fn points(plan: &SweepPlan) -> Result<Vec<SweepPoint>> {
    let base_bits = plan.geometry.connected_columns()?;
    fn or_base<T: Clone>(axis: &[T], base: T) -> Vec<T> {
        if axis.is_empty() {
            vec![base]
        } else {
            axis.to_vec()
        }
    }
    let corners: Vec<Option<String>> = if plan.axes.corners.is_empty() {
        vec![None]
    } else {
        plan.axes.corners.iter().cloned().map(Some).collect()
    };
    let mut out = Vec::new();
    for &bits in &or_base(&plan.axes.bits, base_bits) {
        for &rows in &or_base(&plan.axes.rows, plan.geometry.rows) {
            for &inductance in &or_base(&plan.axes.inductance, plan.geometry.shared_inductance) {
                for &v_dd in &or_base(&plan.axes.v_dd, plan.v_dd) {
                    for corner in &corners {
                        out.push(SweepPoint {
                            bits,
                            rows,
                            inductance,
                            v_dd,
                            corner: corner.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

fn evaluate(plan: &SweepPlan, point: &SweepPoint) -> SweepRow {
    let mut row = SweepRow {
        point: point.clone(),
        f_r: None,
        t_r_half: None,
        swing_fraction: None,
        q_f: None,
        savings_fraction: None,
        underdamped: None,
        sized_inductance: None,
        errors: Vec::new(),
    };
    if let Err(e) = fill(plan, point, &mut row) {
        row.errors.push(e.to_string());
    }
    row
}

fn fill(plan: &SweepPlan, point: &SweepPoint, row: &mut SweepRow) -> Result<()> {
    let corner = match &point.corner {
        Some(name) => *plan
            .corners
            .get(name)
            .ok_or_else(|| Error::Geometry(format!("unknown corner `{name}`")))?,
        None => Corner::NOMINAL,
    };
    let mut geometry = plan
        .geometry
        .with_rows(point.rows)?
        .with_connected_columns(point.bits)
        .at_corner(corner.r_multiplier, corner.c_multiplier)?;
    geometry.shared_inductance = point.inductance;

    let params = effective_params(&geometry, point.v_dd)?;
    let res = derive_resonance(&params)?;
    row.q_f = Some(res.q_f);
    row.underdamped = Some(res.underdamped);
    row.f_r = res.f_r;
    row.t_r_half = res.t_r_half;

    let sizing = SizingSpec {
        bits_connected: None,
        ..plan.sizing
    };
    match size_inductor(&geometry, point.v_dd, &sizing) {
        Ok(s) => row.sized_inductance = Some(s.inductance),
        Err(e) => row.errors.push(e.to_string()),
    }

    if !res.underdamped {
        return Err(Error::Overdamped {
            inductance: params.inductance,
            bound: crate::circuit::min_inductance(params.r_total, params.capacitance)?,
        });
    }
    row.swing_fraction = Some(swing(&params)?.swing_fraction);

    let phases = plan.phases.resolve(&geometry)?;
    let dt = default_time_step(&params, &phases)?;
    let (_, trace) = simulate_tuned_cycle(&params, &phases, &plan.schedule, dt)?;
    row.savings_fraction = Some(resonant_energy(&trace, &params, &phases)?.savings_fraction);
    Ok(())
}

/// Evaluates every combination of the axes, outermost first in the order
/// bits, rows, inductance, v_dd, corner.
pub fn sweep_design_space(plan: &SweepPlan) -> Result<SweepResult> {
    if plan.axes.is_empty() {
        return Err(Error::Geometry("sweep needs at least one non-empty axis".into()));
    }
    let rows = points(plan)?
        .par_iter()
        .map(|p| evaluate(plan, p))
        .collect();
    Ok(SweepResult {
        axes: plan.axes.clone(),
        rows,
    })
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.5e}")).unwrap_or_default()
}

impl SweepResult {
    /// One column per swept axis, then the derived figures.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let axes = &self.axes;
        let mut header: Vec<&str> = Vec::new();
        if !axes.bits.is_empty() {
            header.push("bits");
        }
        if !axes.rows.is_empty() {
            header.push("rows");
        }
        if !axes.inductance.is_empty() {
            header.push("inductance");
        }
        if !axes.v_dd.is_empty() {
            header.push("v_dd");
        }
        if !axes.corners.is_empty() {
            header.push("corner");
        }
        header.extend([
            "f_r",
            "t_r_half",
            "swing_fraction",
            "q_f",
            "savings_fraction",
            "underdamped",
            "sized_inductance",
            "error",
        ]);
        writeln!(out, "{}", header.join(","))?;

        for row in &self.rows {
            let p = &row.point;
            let mut cells: Vec<String> = Vec::new();
            if !axes.bits.is_empty() {
                cells.push(p.bits.to_string());
            }
            if !axes.rows.is_empty() {
                cells.push(p.rows.to_string());
            }
            if !axes.inductance.is_empty() {
                cells.push(format!("{:.5e}", p.inductance));
            }
            if !axes.v_dd.is_empty() {
                cells.push(format!("{:.5e}", p.v_dd));
            }
            if !axes.corners.is_empty() {
                cells.push(p.corner.clone().unwrap_or_default());
            }
            cells.push(cell(row.f_r));
            cells.push(cell(row.t_r_half));
            cells.push(cell(row.swing_fraction));
            cells.push(cell(row.q_f));
            cells.push(cell(row.savings_fraction));
            cells.push(row.underdamped.map(|b| b.to_string()).unwrap_or_default());
            cells.push(cell(row.sized_inductance));
            // errors are free text; keep the CSV single-field
            cells.push(format!("\"{}\"", row.errors.join("; ").replace('"', "'")));
            writeln!(out, "{}", cells.join(","))?;
        }
        out.flush()
    }
}

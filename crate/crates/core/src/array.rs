//! SRAM organisation to lumped tank parameters.
//!
//! Every connected column hangs its bitline on the shared inductor node, so
//! `N` connected columns multiply the load capacitance by `N` and put `N`
//! write drivers in parallel, dividing their series resistance by `N`.

use serde::{Deserialize, Serialize};

use crate::circuit::{derive_resonance, RlcParams, ResistanceBreakdown};
use crate::error::{check_non_negative, check_positive, Error, Result};

/// Defaults: 256 columns of 256 rows behind a 0.621 nH inductor. The
/// per-column capacitance reproduces 10.10 pF at 256 columns; the driver
/// resistance gives `R_T = 0.5 ohm` (`Q_f ~ 15.7`) at that size and is an
/// assumption, not a measured value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrayGeometry {
    /// Cells per bitline.
    pub rows: u32,
    /// Columns wired to the shared node, before column muxing.
    pub columns: u32,
    pub mux_factor: u32,
    /// Bitline capacitance of one column at `rows` rows (F).
    pub cap_per_column: f64,
    /// Marginal capacitance of one more row on a column (F).
    pub cap_per_row_increment: f64,
    /// Series resistance of one active write driver (ohm).
    pub driver_resistance_per_bit: f64,
    pub shared_inductance: f64,
    pub inductor_parasitic_resistance: f64,
}

impl Default for ArrayGeometry {
    fn default() -> Self {
        Self {
            rows: 256,
            columns: 256,
            mux_factor: 1,
            cap_per_column: 39.45e-15,
            cap_per_row_increment: 0.125e-15,
            driver_resistance_per_bit: 128.0,
            shared_inductance: 0.621e-9,
            inductor_parasitic_resistance: 0.0,
        }
    }
}

impl ArrayGeometry {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rows", self.rows),
            ("columns", self.columns),
            ("mux_factor", self.mux_factor),
        ] {
            if v == 0 {
                return Err(Error::Geometry(format!("{name} must be at least 1")));
            }
        }
        check_positive("cap_per_column", self.cap_per_column)?;
        check_non_negative("cap_per_row_increment", self.cap_per_row_increment)?;
        check_positive("driver_resistance_per_bit", self.driver_resistance_per_bit)?;
        check_positive("shared_inductance", self.shared_inductance)?;
        check_non_negative("inductor_parasitic_resistance", self.inductor_parasitic_resistance)?;
        if self.fixed_cap_per_column() < 0.0 {
            return Err(Error::Geometry(format!(
                "cap_per_row_increment * rows ({:e} F) exceeds cap_per_column ({:e} F)",
                self.cap_per_row_increment * f64::from(self.rows),
                self.cap_per_column
            )));
        }
        Ok(())
    }

    /// Columns active in one write: `columns / mux_factor`, rounded down.
    pub fn connected_columns(&self) -> Result<u32> {
        self.validate()?;
        match self.columns / self.mux_factor {
            0 => Err(Error::Geometry(format!(
                "{} columns at MUX {} connect no column",
                self.columns, self.mux_factor
            ))),
            n => Ok(n),
        }
    }

    /// Non-fatal oddities worth echoing in reports.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.mux_factor > 0 && self.columns % self.mux_factor != 0 {
            out.push(format!(
                "geometry.columns ({}) is not a multiple of geometry.mux_factor ({}); connected columns rounded down",
                self.columns, self.mux_factor
            ));
        }
        out
    }

    /// Row-independent part of one column's capacitance (wire stubs,
    /// driver parasitics).
    pub fn fixed_cap_per_column(&self) -> f64 {
        self.cap_per_column - self.cap_per_row_increment * f64::from(self.rows)
    }

    /// Same array with a different bitline height.
    pub fn with_rows(&self, rows: u32) -> Result<Self> {
        let mut out = *self;
        out.rows = rows;
        out.cap_per_column =
            self.fixed_cap_per_column() + self.cap_per_row_increment * f64::from(rows);
        out.validate()?;
        Ok(out)
    }

    /// Same array with `bits` columns connected at the current MUX factor.
    pub fn with_connected_columns(&self, bits: u32) -> Self {
        let mut out = *self;
        out.columns = bits.saturating_mul(self.mux_factor);
        out
    }

    /// Applies corner multipliers to every resistance and capacitance.
    pub fn at_corner(&self, r_multiplier: f64, c_multiplier: f64) -> Result<Self> {
        check_positive("r_multiplier", r_multiplier)?;
        check_positive("c_multiplier", c_multiplier)?;
        let mut out = *self;
        out.cap_per_column *= c_multiplier;
        out.cap_per_row_increment *= c_multiplier;
        out.driver_resistance_per_bit *= r_multiplier;
        out.inductor_parasitic_resistance *= r_multiplier;
        Ok(out)
    }

    /// Parallel resistance of the connected write drivers.
    pub fn driver_resistance(&self) -> Result<f64> {
        Ok(self.driver_resistance_per_bit / f64::from(self.connected_columns()?))
    }
}

pub fn effective_params(geometry: &ArrayGeometry, v_dd: f64) -> Result<RlcParams> {
    let n = f64::from(geometry.connected_columns()?);
    let breakdown = ResistanceBreakdown {
        mos: geometry.driver_resistance_per_bit / n,
        wire: 0.0,
        inductor: geometry.inductor_parasitic_resistance,
    };
    RlcParams::from_breakdown(
        breakdown,
        geometry.shared_inductance,
        n * geometry.cap_per_column,
        v_dd,
    )
}

/// One configuration of the half-period table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Table1Entry {
    pub mux_factor: u32,
    pub columns: u32,
    pub total_capacitance: f64,
}

/// The three published configurations, capacitance taken as authoritative
/// (the 126-column entry is kept verbatim).
pub const TABLE1_ENTRIES: [Table1Entry; 3] = [
    Table1Entry { mux_factor: 1, columns: 256, total_capacitance: 10.10e-12 },
    Table1Entry { mux_factor: 2, columns: 126, total_capacitance: 5.07e-12 },
    Table1Entry { mux_factor: 4, columns: 64, total_capacitance: 2.53e-12 },
];

/// Published half periods for [`TABLE1_ENTRIES`] at 0.621 nH (s).
pub const TABLE1_PUBLISHED_T_R_HALF: [f64; 3] = [248.0e-12, 176.0e-12, 125.0e-12];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub mux_factor: u32,
    pub columns: u32,
    pub total_capacitance: f64,
    pub inductance: f64,
    pub r_total: f64,
    pub q_f: f64,
    pub t_r_half: Option<f64>,
}

/// Half period per configuration at a fixed inductor. `R_T` comes from the
/// geometry's per-driver and parasitic resistances over the listed column
/// count.
pub fn table1(
    geometry: &ArrayGeometry,
    inductance: f64,
    entries: &[Table1Entry],
) -> Result<Vec<Table1Row>> {
    entries
        .iter()
        .map(|e| {
            if e.columns == 0 {
                return Err(Error::Geometry("table entry with zero columns".into()));
            }
            let r_total = geometry.driver_resistance_per_bit / f64::from(e.columns)
                + geometry.inductor_parasitic_resistance;
            let params = RlcParams::new(r_total, inductance, e.total_capacitance, 1.0)?;
            let res = derive_resonance(&params)?;
            Ok(Table1Row {
                mux_factor: e.mux_factor,
                columns: e.columns,
                total_capacitance: e.total_capacitance,
                inductance,
                r_total,
                q_f: res.q_f,
                t_r_half: res.t_r_half,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RowPoint {
    pub rows: u32,
    pub capacitance: f64,
    /// `None` when the tank is overdamped at this height.
    pub t_r_half: Option<f64>,
}

/// Discharge window as the bitlines grow taller.
pub fn discharge_time_vs_rows(geometry: &ArrayGeometry, rows_list: &[u32]) -> Result<Vec<RowPoint>> {
    if rows_list.is_empty() {
        return Err(Error::Geometry("rows list is empty".into()));
    }
    if rows_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Geometry("rows list must be strictly increasing".into()));
    }
    rows_list
        .iter()
        .map(|&rows| {
            let g = geometry.with_rows(rows)?;
            let params = effective_params(&g, 1.0)?;
            let res = derive_resonance(&params)?;
            Ok(RowPoint {
                rows,
                capacitance: params.capacitance,
                t_r_half: res.t_r_half,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn default_reproduces_row1_load() {
        let p = effective_params(&ArrayGeometry::default(), 0.9).unwrap();
        assert_relative_eq!(p.capacitance, 10.10e-12, max_relative = 1e-3);
        assert_relative_eq!(p.r_total, 0.5, max_relative = 1e-15);
        let q = derive_resonance(&p).unwrap().q_f;
        assert!((q - 15.0).abs() < 1.0);
    }

    #[test]
    fn single_column() {
        let g = ArrayGeometry {
            columns: 1,
            inductor_parasitic_resistance: 0.1,
            ..ArrayGeometry::default()
        };
        let p = effective_params(&g, 0.9).unwrap();
        assert_eq!(p.capacitance, g.cap_per_column);
        assert_relative_eq!(p.r_total, g.driver_resistance_per_bit + 0.1, max_relative = 1e-15);
    }

    #[test]
    fn doubling_columns_keeps_q() {
        let g = ArrayGeometry::default();
        let g2 = ArrayGeometry { columns: 512, ..g };
        let p = effective_params(&g, 0.9).unwrap();
        let p2 = effective_params(&g2, 0.9).unwrap();
        assert_relative_eq!(p2.capacitance, 2.0 * p.capacitance, max_relative = 1e-15);
        assert_relative_eq!(p2.r_total, p.r_total / 2.0, max_relative = 1e-15);
        let q = derive_resonance(&p).unwrap().q_f;
        let q2 = derive_resonance(&p2).unwrap().q_f;
        // same L, so Q halves by sqrt(2) from C and doubles from R
        assert_relative_eq!(q2, q * 2.0 / 2f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn geometry_errors() {
        let g = ArrayGeometry { mux_factor: 0, ..ArrayGeometry::default() };
        assert!(matches!(effective_params(&g, 0.9), Err(Error::Geometry(_))));
        let g = ArrayGeometry { columns: 1, mux_factor: 2, ..ArrayGeometry::default() };
        assert!(matches!(g.connected_columns(), Err(Error::Geometry(_))));
        let g = ArrayGeometry { columns: 255, mux_factor: 2, ..ArrayGeometry::default() };
        assert_eq!(g.connected_columns().unwrap(), 127);
        assert_eq!(g.warnings().len(), 1);
    }

    #[test]
    fn table1_matches_published_within_two_percent() {
        let rows = table1(&ArrayGeometry::default(), 0.621e-9, &TABLE1_ENTRIES).unwrap();
        for (row, published) in rows.iter().zip(TABLE1_PUBLISHED_T_R_HALF) {
            let got = row.t_r_half.unwrap();
            assert!((got - published).abs() / published < 0.02, "{got:e} vs {published:e}");
        }
        assert!(rows.windows(2).all(|w| w[1].t_r_half < w[0].t_r_half));
    }

    #[test]
    fn rows_sweep() {
        let g = ArrayGeometry::default();
        let pts = discharge_time_vs_rows(&g, &[128, 256, 512]).unwrap();
        assert!(pts.windows(2).all(|w| w[1].t_r_half > w[0].t_r_half));
        let single = discharge_time_vs_rows(&g, &[256]).unwrap();
        let direct = derive_resonance(&effective_params(&g, 1.0).unwrap()).unwrap();
        assert_eq!(single[0].t_r_half, direct.t_r_half);
        assert!(discharge_time_vs_rows(&g, &[]).is_err());
        assert!(discharge_time_vs_rows(&g, &[256, 128]).is_err());
    }

    #[test]
    fn doubling_rows_scales_by_root_two_when_cap_is_all_rows() {
        let g = ArrayGeometry {
            cap_per_column: 256.0 * 0.15e-15,
            cap_per_row_increment: 0.15e-15,
            driver_resistance_per_bit: 1e-6,
            ..ArrayGeometry::default()
        };
        let pts = discharge_time_vs_rows(&g, &[200, 400]).unwrap();
        let ratio = pts[1].t_r_half.unwrap() / pts[0].t_r_half.unwrap();
        assert_relative_eq!(ratio, 2f64.sqrt(), max_relative = 1e-9);
    }

    #[test]
    fn overdamped_rows_are_flagged() {
        let g = ArrayGeometry {
            shared_inductance: 1e-15,
            driver_resistance_per_bit: 1e4,
            ..ArrayGeometry::default()
        };
        let pts = discharge_time_vs_rows(&g, &[64, 512]).unwrap();
        assert!(pts.iter().all(|p| p.t_r_half.is_none()));
    }
}

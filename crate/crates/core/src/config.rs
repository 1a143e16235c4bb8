//! Run configuration: flat dotted keys, one `key = value` per line, `#`
//! comments, SI or engineering-suffixed numbers.
//!
//! ```text
//! # 256 columns, MUX 1
//! geometry.columns = 256
//! geometry.shared_inductance = 0.621nH
//! circuit.v_dd = 900mV
//! schedule.clock_period = 1ns
//! corners.ss.r_multiplier = 1.25
//! corners.ss.c_multiplier = 1.05
//! output.format = json
//! ```
//!
//! [`RunConfig`] keeps exactly what was written (every field optional) so
//! that [`RunConfig::to_text`] and [`parse_config`] round-trip.
//! [`RunConfig::resolve`] fills in defaults and builds the model types.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::array::{effective_params, ArrayGeometry};
use crate::circuit::{ResistanceBreakdown, RlcParams};
use crate::error::Error;
use crate::sizing::SizingSpec;
use crate::sweep::{default_corners, Corner, PhaseOverrides};
use crate::transient::{Booster, PhaseConfig, PulseSchedule, MAX_DELAY_CODE};
use crate::units::{format_quantity, parse_quantity, Unit, UnitError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
    Table,
}

impl OutputFormat {
    pub fn name(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
            OutputFormat::Table => "table",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "table" => Ok(OutputFormat::Table),
            other => Err(format!("unknown format `{other}` (csv, json or table)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CircuitSection {
    pub r_total: Option<f64>,
    pub r_mos: Option<f64>,
    pub r_wire: Option<f64>,
    pub r_inductor: Option<f64>,
    pub inductance: Option<f64>,
    pub capacitance: Option<f64>,
    pub v_dd: Option<f64>,
    pub v_bias: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GeometrySection {
    pub rows: Option<u32>,
    pub columns: Option<u32>,
    pub mux_factor: Option<u32>,
    pub cap_per_column: Option<f64>,
    pub cap_per_row_increment: Option<f64>,
    pub driver_resistance_per_bit: Option<f64>,
    pub shared_inductance: Option<f64>,
    pub inductor_parasitic_resistance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ScheduleSection {
    pub clock_period: Option<f64>,
    pub s_rise: Option<f64>,
    pub s_fall: Option<f64>,
    pub delay_code: Option<u32>,
    pub base_delay: Option<f64>,
    pub delay_step: Option<f64>,
    /// Trim the delay to the simulated current zero instead of using the
    /// register value.
    pub auto_tune: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PhasesSection {
    pub series_switch_on_resistance: Option<f64>,
    pub pulldown_resistance: Option<f64>,
    pub pullup_resistance: Option<f64>,
    pub booster_inductance: Option<f64>,
    pub booster_gate_capacitance: Option<f64>,
    pub booster_series_resistance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SizingSection {
    pub target_swing_fraction: Option<f64>,
    pub max_t_r_half: Option<f64>,
    pub f_op_min: Option<f64>,
    pub f_op_max: Option<f64>,
    pub bits_connected: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CornerSection {
    pub r_multiplier: Option<f64>,
    pub c_multiplier: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct OutputSection {
    pub format: Option<OutputFormat>,
    pub path: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RunConfig {
    pub circuit: CircuitSection,
    pub geometry: GeometrySection,
    pub schedule: ScheduleSection,
    pub phases: PhasesSection,
    pub sizing: SizingSection,
    pub corners: BTreeMap<String, CornerSection>,
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigErrorKind {
    #[error("unknown key")]
    UnknownKey,
    #[error("duplicate key")]
    Duplicate,
    #[error("expected `key = value`")]
    Syntax,
    #[error("{0}")]
    Unit(#[from] UnitError),
    #[error("out of range: {0}")]
    Range(String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{key}: {kind}")]
pub struct ConfigError {
    /// Offending key, or `line N` for lines without one.
    pub key: String,
    pub kind: ConfigErrorKind,
}

impl ConfigError {
    fn new(key: impl Into<String>, kind: ConfigErrorKind) -> Self {
        Self {
            key: key.into(),
            kind,
        }
    }

    fn range(key: &str, msg: impl Into<String>) -> Self {
        Self::new(key, ConfigErrorKind::Range(msg.into()))
    }

    fn invalid(key: &str, msg: impl Into<String>) -> Self {
        Self::new(key, ConfigErrorKind::Invalid(msg.into()))
    }
}

#[derive(Debug, Clone, Copy)]
enum Bound {
    Positive,
    NonNegative,
    /// Strictly between 0 and 1.
    Fraction,
    /// Positive, infinity allowed.
    PositiveOrInf,
}

enum Field<'a> {
    Real(&'a mut Option<f64>, Option<Unit>, Bound),
    Count(&'a mut Option<u32>, u32, u32),
    Flag(&'a mut Option<bool>),
    Format(&'a mut Option<OutputFormat>),
    Text(&'a mut Option<String>),
}

fn fixed_fields(cfg: &mut RunConfig) -> Vec<(&'static str, Field<'_>)> {
    use Bound::*;
    use Field::*;
    let c = &mut cfg.circuit;
    let g = &mut cfg.geometry;
    let s = &mut cfg.schedule;
    let p = &mut cfg.phases;
    let z = &mut cfg.sizing;
    let o = &mut cfg.output;
    vec![
        ("circuit.r_total", Real(&mut c.r_total, Some(Unit::Ohm), Positive)),
        ("circuit.r_mos", Real(&mut c.r_mos, Some(Unit::Ohm), NonNegative)),
        ("circuit.r_wire", Real(&mut c.r_wire, Some(Unit::Ohm), NonNegative)),
        ("circuit.r_inductor", Real(&mut c.r_inductor, Some(Unit::Ohm), NonNegative)),
        ("circuit.inductance", Real(&mut c.inductance, Some(Unit::Henry), Positive)),
        ("circuit.capacitance", Real(&mut c.capacitance, Some(Unit::Farad), Positive)),
        ("circuit.v_dd", Real(&mut c.v_dd, Some(Unit::Volt), Positive)),
        ("circuit.v_bias", Real(&mut c.v_bias, Some(Unit::Volt), Positive)),
        ("geometry.rows", Count(&mut g.rows, 1, u32::MAX)),
        ("geometry.columns", Count(&mut g.columns, 1, u32::MAX)),
        ("geometry.mux_factor", Count(&mut g.mux_factor, 1, u32::MAX)),
        ("geometry.cap_per_column", Real(&mut g.cap_per_column, Some(Unit::Farad), Positive)),
        (
            "geometry.cap_per_row_increment",
            Real(&mut g.cap_per_row_increment, Some(Unit::Farad), NonNegative),
        ),
        (
            "geometry.driver_resistance_per_bit",
            Real(&mut g.driver_resistance_per_bit, Some(Unit::Ohm), Positive),
        ),
        ("geometry.shared_inductance", Real(&mut g.shared_inductance, Some(Unit::Henry), Positive)),
        (
            "geometry.inductor_parasitic_resistance",
            Real(&mut g.inductor_parasitic_resistance, Some(Unit::Ohm), NonNegative),
        ),
        ("schedule.clock_period", Real(&mut s.clock_period, Some(Unit::Second), Positive)),
        ("schedule.s_rise", Real(&mut s.s_rise, Some(Unit::Second), NonNegative)),
        ("schedule.s_fall", Real(&mut s.s_fall, Some(Unit::Second), Positive)),
        ("schedule.delay_code", Count(&mut s.delay_code, 0, u32::from(MAX_DELAY_CODE))),
        ("schedule.base_delay", Real(&mut s.base_delay, Some(Unit::Second), NonNegative)),
        ("schedule.delay_step", Real(&mut s.delay_step, Some(Unit::Second), NonNegative)),
        ("schedule.auto_tune", Flag(&mut s.auto_tune)),
        (
            "phases.series_switch_on_resistance",
            Real(&mut p.series_switch_on_resistance, Some(Unit::Ohm), NonNegative),
        ),
        ("phases.pulldown_resistance", Real(&mut p.pulldown_resistance, Some(Unit::Ohm), Positive)),
        ("phases.pullup_resistance", Real(&mut p.pullup_resistance, Some(Unit::Ohm), Positive)),
        ("phases.booster.inductance", Real(&mut p.booster_inductance, Some(Unit::Henry), Positive)),
        (
            "phases.booster.gate_capacitance",
            Real(&mut p.booster_gate_capacitance, Some(Unit::Farad), Positive),
        ),
        (
            "phases.booster.series_resistance",
            Real(&mut p.booster_series_resistance, Some(Unit::Ohm), Positive),
        ),
        ("sizing.target_swing_fraction", Real(&mut z.target_swing_fraction, None, Fraction)),
        ("sizing.max_t_r_half", Real(&mut z.max_t_r_half, Some(Unit::Second), PositiveOrInf)),
        ("sizing.f_op_min", Real(&mut z.f_op_min, Some(Unit::Hertz), Positive)),
        ("sizing.f_op_max", Real(&mut z.f_op_max, Some(Unit::Hertz), Positive)),
        ("sizing.bits_connected", Count(&mut z.bits_connected, 1, u32::MAX)),
        ("output.format", Format(&mut o.format)),
        ("output.path", Text(&mut o.path)),
    ]
}

/// Every fixed key, in serialization order. Corner keys are
/// `corners.<name>.r_multiplier` and `corners.<name>.c_multiplier`.
pub fn known_keys() -> Vec<&'static str> {
    fixed_fields(&mut RunConfig::default())
        .into_iter()
        .map(|(k, _)| k)
        .collect()
}

fn valid_corner_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

fn parse_real(key: &str, value: &str, unit: Option<Unit>, bound: Bound) -> Result<f64, ConfigError> {
    let v = if matches!(bound, Bound::PositiveOrInf) && matches!(value, "inf" | "infinity") {
        f64::INFINITY
    } else {
        match unit {
            Some(u) => parse_quantity(value, u).map_err(|e| ConfigError::new(key, e.into()))?,
            None => value.parse::<f64>().map_err(|_| {
                ConfigError::new(key, UnitError::NotANumber(value.to_string()).into())
            })?,
        }
    };
    let ok = match bound {
        Bound::Positive => v.is_finite() && v > 0.0,
        Bound::NonNegative => v.is_finite() && v >= 0.0,
        Bound::Fraction => v > 0.0 && v < 1.0,
        Bound::PositiveOrInf => v > 0.0,
    };
    if ok {
        Ok(v)
    } else {
        let want = match bound {
            Bound::Positive => "must be > 0",
            Bound::NonNegative => "must be >= 0",
            Bound::Fraction => "must be in (0, 1)",
            Bound::PositiveOrInf => "must be > 0 or inf",
        };
        Err(ConfigError::range(key, format!("{value} {want}")))
    }
}

fn unquote(value: &str) -> &str {
    value
        .strip_prefix('"')
        .and_then(|v| v.strip_suffix('"'))
        .unwrap_or(value)
}

/// Strips a trailing `#` comment that is not inside double quotes.
fn strip_comment(line: &str) -> &str {
    let mut quoted = false;
    for (i, ch) in line.char_indices() {
        match ch {
            '"' => quoted = !quoted,
            '#' if !quoted => return &line[..i],
            _ => {}
        }
    }
    line
}

impl RunConfig {
    /// Sets one key from its textual value, as a config line or a
    /// command-line override would.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let value = value.trim();
        if let Some(rest) = key.strip_prefix("corners.") {
            let (name, field) = rest
                .rsplit_once('.')
                .ok_or_else(|| ConfigError::new(key, ConfigErrorKind::UnknownKey))?;
            if !valid_corner_name(name) {
                return Err(ConfigError::new(key, ConfigErrorKind::UnknownKey));
            }
            let v = parse_real(key, value, None, Bound::Positive)?;
            let corner = self.corners.entry(name.to_string()).or_default();
            match field {
                "r_multiplier" => corner.r_multiplier = Some(v),
                "c_multiplier" => corner.c_multiplier = Some(v),
                _ => return Err(ConfigError::new(key, ConfigErrorKind::UnknownKey)),
            }
            return Ok(());
        }

        let field = fixed_fields(self)
            .into_iter()
            .find(|(k, _)| *k == key)
            .map(|(_, f)| f)
            .ok_or_else(|| ConfigError::new(key, ConfigErrorKind::UnknownKey))?;
        match field {
            Field::Real(slot, unit, bound) => *slot = Some(parse_real(key, value, unit, bound)?),
            Field::Count(slot, lo, hi) => {
                let n: u64 = value.parse().map_err(|_| {
                    ConfigError::new(key, UnitError::NotANumber(value.to_string()).into())
                })?;
                if n < u64::from(lo) || n > u64::from(hi) {
                    return Err(ConfigError::range(key, format!("{n} not in {lo}..={hi}")));
                }
                *slot = Some(n as u32);
            }
            Field::Flag(slot) => {
                *slot = Some(match value {
                    "true" => true,
                    "false" => false,
                    _ => return Err(ConfigError::invalid(key, format!("`{value}` is not true/false"))),
                })
            }
            Field::Format(slot) => {
                *slot = Some(unquote(value).parse().map_err(|e: String| ConfigError::invalid(key, e))?)
            }
            Field::Text(slot) => *slot = Some(unquote(value).to_string()),
        }
        Ok(())
    }

    /// Serializes every set key; [`parse_config`] reads it back unchanged.
    pub fn to_text(&self) -> String {
        let mut copy = self.clone();
        let mut out = String::new();
        let mut section = "";
        for (key, field) in fixed_fields(&mut copy) {
            let value = match field {
                Field::Real(slot, unit, _) => slot.map(|v| match unit {
                    Some(u) if v.is_finite() => format_quantity(v, u),
                    _ => format!("{v:e}"),
                }),
                Field::Count(slot, ..) => slot.map(|v| v.to_string()),
                Field::Flag(slot) => slot.map(|v| v.to_string()),
                Field::Format(slot) => slot.map(|v| v.name().to_string()),
                Field::Text(slot) => slot.clone().map(|v| format!("\"{v}\"")),
            };
            if let Some(value) = value {
                let this = key.split('.').next().unwrap_or_default();
                if !section.is_empty() && this != section {
                    out.push('\n');
                }
                section = this;
                out.push_str(&format!("{key} = {value}\n"));
            }
        }
        for (name, c) in &self.corners {
            if !section.is_empty() && section != "corners" {
                out.push('\n');
            }
            section = "corners";
            if let Some(v) = c.r_multiplier {
                out.push_str(&format!("corners.{name}.r_multiplier = {v:e}\n"));
            }
            if let Some(v) = c.c_multiplier {
                out.push_str(&format!("corners.{name}.c_multiplier = {v:e}\n"));
            }
        }
        out
    }

    /// Applies defaults and builds validated model values.
    pub fn resolve(&self) -> Result<ResolvedConfig, ConfigError> {
        let mut assumptions = Vec::new();

        let defaults = ArrayGeometry::default();
        let g = &self.geometry;
        if g.driver_resistance_per_bit.is_none() && self.circuit.r_total.is_none() {
            assumptions.push(format!(
                "geometry.driver_resistance_per_bit defaulted to {} ohm (assumed, not measured)",
                defaults.driver_resistance_per_bit
            ));
        }
        let geometry = ArrayGeometry {
            rows: g.rows.unwrap_or(defaults.rows),
            columns: g.columns.unwrap_or(defaults.columns),
            mux_factor: g.mux_factor.unwrap_or(defaults.mux_factor),
            cap_per_column: g.cap_per_column.unwrap_or(defaults.cap_per_column),
            cap_per_row_increment: g.cap_per_row_increment.unwrap_or(defaults.cap_per_row_increment),
            driver_resistance_per_bit: g
                .driver_resistance_per_bit
                .unwrap_or(defaults.driver_resistance_per_bit),
            shared_inductance: g.shared_inductance.unwrap_or(defaults.shared_inductance),
            inductor_parasitic_resistance: g
                .inductor_parasitic_resistance
                .unwrap_or(defaults.inductor_parasitic_resistance),
        };
        geometry
            .connected_columns()
            .map_err(|e| section_error("geometry", e))?;
        assumptions.extend(geometry.warnings());

        let params = self.resolve_circuit(&geometry, &mut assumptions)?;

        let sd = PulseSchedule::default();
        let s = &self.schedule;
        let clock_period = s.clock_period.unwrap_or(sd.clock_period);
        let schedule = PulseSchedule {
            clock_period,
            s_rise: s.s_rise.unwrap_or(sd.s_rise),
            s_fall: s.s_fall.unwrap_or(clock_period / 2.0),
            delay_code: s.delay_code.map(|c| c as u8).unwrap_or(sd.delay_code),
            base_delay: s.base_delay.unwrap_or(sd.base_delay),
            delay_step: s.delay_step.unwrap_or(sd.delay_step),
        };
        let auto_tune = s.auto_tune.unwrap_or(true);
        if !auto_tune {
            schedule.validate().map_err(|e| section_error("schedule", e))?;
        } else if !(schedule.s_rise < schedule.s_fall && schedule.s_fall < schedule.clock_period) {
            return Err(ConfigError::invalid(
                "schedule.s_fall",
                "need s_rise < s_fall < clock_period",
            ));
        }

        let p = &self.phases;
        let booster = match (p.booster_inductance, p.booster_gate_capacitance, p.booster_series_resistance) {
            (None, None, None) => None,
            (Some(inductance), Some(gate_capacitance), Some(series_resistance)) => Some(Booster {
                inductance,
                gate_capacitance,
                series_resistance,
            }),
            _ => {
                return Err(ConfigError::invalid(
                    "phases.booster",
                    "set all of inductance, gate_capacitance and series_resistance, or none",
                ))
            }
        };
        let phase_overrides = PhaseOverrides {
            series_switch_on_resistance: p.series_switch_on_resistance,
            pulldown_resistance: p.pulldown_resistance,
            pullup_resistance: p.pullup_resistance,
            booster,
        };
        let rail_default = params.r_breakdown.map(|b| b.mos).filter(|r| *r > 0.0).unwrap_or(params.r_total);
        for (key, set) in [
            ("phases.pulldown_resistance", p.pulldown_resistance),
            ("phases.pullup_resistance", p.pullup_resistance),
        ] {
            if set.is_none() {
                assumptions.push(format!(
                    "{key} defaulted to the parallel driver resistance ({rail_default:e} ohm)"
                ));
            }
        }
        let phases = PhaseConfig {
            series_switch_on_resistance: p.series_switch_on_resistance,
            pulldown_resistance: p.pulldown_resistance.unwrap_or(rail_default),
            pullup_resistance: p.pullup_resistance.unwrap_or(rail_default),
            booster,
        };
        phases.validate().map_err(|e| section_error("phases", e))?;

        let zd = SizingSpec::default();
        let z = &self.sizing;
        let sizing = SizingSpec {
            target_swing_fraction: z.target_swing_fraction.unwrap_or(zd.target_swing_fraction),
            max_t_r_half: z.max_t_r_half.unwrap_or(zd.max_t_r_half),
            f_op_min: z.f_op_min.unwrap_or(zd.f_op_min),
            f_op_max: z.f_op_max.unwrap_or(zd.f_op_max),
            bits_connected: z.bits_connected,
        };
        sizing.validate().map_err(|e| section_error("sizing", e))?;

        let mut corners = default_corners();
        for (name, c) in &self.corners {
            let base = corners.get(name).copied();
            let r = c.r_multiplier.or(base.map(|b| b.r_multiplier));
            let cm = c.c_multiplier.or(base.map(|b| b.c_multiplier));
            match (r, cm) {
                (Some(r_multiplier), Some(c_multiplier)) => {
                    corners.insert(name.clone(), Corner { r_multiplier, c_multiplier });
                }
                (None, _) => {
                    return Err(ConfigError::invalid(
                        &format!("corners.{name}.r_multiplier"),
                        "missing for a new corner",
                    ))
                }
                (_, None) => {
                    return Err(ConfigError::invalid(
                        &format!("corners.{name}.c_multiplier"),
                        "missing for a new corner",
                    ))
                }
            }
        }

        Ok(ResolvedConfig {
            params,
            geometry,
            schedule,
            auto_tune,
            phase_overrides,
            phases,
            sizing,
            corners,
            output_format: self.output.format.unwrap_or(OutputFormat::Table),
            output_path: self.output.path.clone(),
            assumptions,
        })
    }

    fn resolve_circuit(
        &self,
        geometry: &ArrayGeometry,
        assumptions: &mut Vec<String>,
    ) -> Result<RlcParams, ConfigError> {
        let c = &self.circuit;
        let v_dd = c.v_dd.unwrap_or(0.9);
        let derived = effective_params(geometry, v_dd).map_err(|e| section_error("geometry", e))?;

        let any_part = c.r_mos.is_some() || c.r_wire.is_some() || c.r_inductor.is_some();
        let breakdown = if any_part {
            Some(ResistanceBreakdown {
                mos: c.r_mos.unwrap_or(0.0),
                wire: c.r_wire.unwrap_or(0.0),
                inductor: c.r_inductor.unwrap_or(0.0),
            })
        } else if c.r_total.is_none() {
            derived.r_breakdown
        } else {
            None
        };
        let r_total = match (c.r_total, breakdown) {
            (Some(r), _) => r,
            (None, Some(b)) => b.total(),
            (None, None) => derived.r_total,
        };
        if !(r_total > 0.0) {
            return Err(ConfigError::range("circuit.r_total", "series resistance must be > 0"));
        }
        if c.r_inductor.is_none() && geometry.inductor_parasitic_resistance == 0.0 {
            assumptions.push("inductor parasitic resistance taken as 0 ohm".to_string());
        }
        let params = RlcParams {
            r_total,
            r_breakdown: breakdown,
            inductance: c.inductance.unwrap_or(derived.inductance),
            capacitance: c.capacitance.unwrap_or(derived.capacitance),
            v_dd,
            v_bias: c.v_bias.unwrap_or(v_dd / 2.0),
        };
        params.validate().map_err(|e| section_error("circuit", e))?;
        Ok(params)
    }
}

fn section_error(section: &str, e: Error) -> ConfigError {
    match e {
        Error::Domain { name, value } => {
            ConfigError::range(&format!("{section}.{name}"), format!("{value} is out of range"))
        }
        Error::Breakdown { .. } => ConfigError::invalid("circuit.r_total", e.to_string()),
        other => ConfigError::invalid(section, other.to_string()),
    }
}

/// Parses configuration text. Unknown keys, duplicates, malformed lines and
/// out-of-range values are errors naming the key.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    let mut seen = BTreeSet::new();
    for (n, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| ConfigError::new(format!("line {}", n + 1), ConfigErrorKind::Syntax))?;
        let key = key.trim();
        if !seen.insert(key.to_string()) {
            return Err(ConfigError::new(key, ConfigErrorKind::Duplicate));
        }
        cfg.set(key, value)?;
    }
    Ok(cfg)
}

/// Fully defaulted configuration, ready for the models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedConfig {
    pub params: RlcParams,
    pub geometry: ArrayGeometry,
    pub schedule: PulseSchedule,
    pub auto_tune: bool,
    pub phase_overrides: PhaseOverrides,
    pub phases: PhaseConfig,
    pub sizing: SizingSpec,
    pub corners: BTreeMap<String, Corner>,
    pub output_format: OutputFormat,
    pub output_path: Option<String>,
    /// Defaults that stand in for data the user did not give.
    pub assumptions: Vec<String>,
}

impl ResolvedConfig {
    /// The resolved values written back as an explicit configuration.
    pub fn to_run_config(&self) -> RunConfig {
        let p = &self.params;
        let g = &self.geometry;
        let s = &self.schedule;
        let ph = &self.phases;
        let z = &self.sizing;
        RunConfig {
            circuit: CircuitSection {
                r_total: Some(p.r_total),
                r_mos: p.r_breakdown.map(|b| b.mos),
                r_wire: p.r_breakdown.map(|b| b.wire),
                r_inductor: p.r_breakdown.map(|b| b.inductor),
                inductance: Some(p.inductance),
                capacitance: Some(p.capacitance),
                v_dd: Some(p.v_dd),
                v_bias: Some(p.v_bias),
            },
            geometry: GeometrySection {
                rows: Some(g.rows),
                columns: Some(g.columns),
                mux_factor: Some(g.mux_factor),
                cap_per_column: Some(g.cap_per_column),
                cap_per_row_increment: Some(g.cap_per_row_increment),
                driver_resistance_per_bit: Some(g.driver_resistance_per_bit),
                shared_inductance: Some(g.shared_inductance),
                inductor_parasitic_resistance: Some(g.inductor_parasitic_resistance),
            },
            schedule: ScheduleSection {
                clock_period: Some(s.clock_period),
                s_rise: Some(s.s_rise),
                s_fall: Some(s.s_fall),
                delay_code: Some(u32::from(s.delay_code)),
                base_delay: Some(s.base_delay),
                delay_step: Some(s.delay_step),
                auto_tune: Some(self.auto_tune),
            },
            phases: PhasesSection {
                series_switch_on_resistance: ph.series_switch_on_resistance,
                pulldown_resistance: Some(ph.pulldown_resistance),
                pullup_resistance: Some(ph.pullup_resistance),
                booster_inductance: ph.booster.map(|b| b.inductance),
                booster_gate_capacitance: ph.booster.map(|b| b.gate_capacitance),
                booster_series_resistance: ph.booster.map(|b| b.series_resistance),
            },
            sizing: SizingSection {
                target_swing_fraction: Some(z.target_swing_fraction),
                max_t_r_half: Some(z.max_t_r_half),
                f_op_min: Some(z.f_op_min),
                f_op_max: Some(z.f_op_max),
                bits_connected: z.bits_connected,
            },
            corners: self
                .corners
                .iter()
                .map(|(k, c)| {
                    (
                        k.clone(),
                        CornerSection {
                            r_multiplier: Some(c.r_multiplier),
                            c_multiplier: Some(c.c_multiplier),
                        },
                    )
                })
                .collect(),
            output: OutputSection {
                format: Some(self.output_format),
                path: self.output_path.clone(),
            },
        }
    }
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

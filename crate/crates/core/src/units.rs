//! Engineering-notation quantities: `0.621nH`, `10.10 pF`, `248ps`,
//! `1GHz`, `900mV`, `2.5e-10` (bare SI).
//!
//! The SI prefix is folded into the decimal exponent before the number is
//! parsed, so `0.621nH` yields exactly the same `f64` as `6.21e-10`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Unit {
    Ohm,
    Henry,
    Farad,
    Second,
    Hertz,
    Volt,
}

impl Unit {
    pub fn symbol(self) -> &'static str {
        match self {
            Unit::Ohm => "ohm",
            Unit::Henry => "H",
            Unit::Farad => "F",
            Unit::Second => "s",
            Unit::Hertz => "Hz",
            Unit::Volt => "V",
        }
    }

    fn spellings(self) -> &'static [&'static str] {
        match self {
            Unit::Ohm => &["ohm", "Ohm", "Ω"],
            Unit::Henry => &["H"],
            Unit::Farad => &["F"],
            Unit::Second => &["s"],
            Unit::Hertz => &["Hz"],
            Unit::Volt => &["V"],
        }
    }

    const ALL: [Unit; 6] = [
        Unit::Ohm,
        Unit::Henry,
        Unit::Farad,
        Unit::Second,
        Unit::Hertz,
        Unit::Volt,
    ];
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnitError {
    #[error("`{0}` is not a number")]
    NotANumber(String),
    #[error("expected {expected}, found {found}")]
    Mismatch { expected: Unit, found: Unit },
    #[error("unknown suffix `{0}`")]
    UnknownSuffix(String),
}

fn prefix_exponent(p: &str) -> Option<i32> {
    Some(match p {
        "" => 0,
        "f" => -15,
        "p" => -12,
        "n" => -9,
        "u" | "µ" | "μ" => -6,
        "m" => -3,
        "k" => 3,
        "M" => 6,
        "G" => 9,
        "T" => 12,
        _ => return None,
    })
}

/// Splits `text` into the numeric literal and its suffix.
fn split_number(text: &str) -> (&str, &str) {
    let bytes = text.as_bytes();
    let mut i = 0;
    if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
        i += 1;
    }
    while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
        i += 1;
    }
    // exponent only if followed by digits, so `1e` is not eaten
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        if j < bytes.len() && bytes[j].is_ascii_digit() {
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            i = j;
        }
    }
    (&text[..i], text[i..].trim())
}

/// Parses a quantity expected to be in `unit`. Accepted suffixes are
/// `<prefix><unit>`, `<prefix>` alone, or nothing.
pub fn parse_quantity(text: &str, unit: Unit) -> Result<f64, UnitError> {
    let text = text.trim();
    let (number, suffix) = split_number(text);
    if number.is_empty() {
        return Err(UnitError::NotANumber(text.to_string()));
    }

    let prefix = unit
        .spellings()
        .iter()
        .find_map(|s| suffix.strip_suffix(s))
        .unwrap_or(suffix);
    let Some(exp) = prefix_exponent(prefix) else {
        for other in Unit::ALL {
            if other != unit && other.spellings().iter().any(|s| suffix.ends_with(s)) {
                let head = other
                    .spellings()
                    .iter()
                    .find_map(|s| suffix.strip_suffix(s))
                    .unwrap_or_default();
                if prefix_exponent(head).is_some() {
                    return Err(UnitError::Mismatch {
                        expected: unit,
                        found: other,
                    });
                }
            }
        }
        return Err(UnitError::UnknownSuffix(suffix.to_string()));
    };

    let (mantissa, base_exp) = match number.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = number[pos + 1..]
                .parse()
                .map_err(|_| UnitError::NotANumber(text.to_string()))?;
            (&number[..pos], e)
        }
        None => (number, 0),
    };
    format!("{mantissa}e{}", base_exp + exp)
        .parse::<f64>()
        .map_err(|_| UnitError::NotANumber(text.to_string()))
}

/// Formats a value with a unit suffix such that [`parse_quantity`] returns
/// the identical `f64`.
pub fn format_quantity(value: f64, unit: Unit) -> String {
    format!("{value:e} {}", unit.symbol())
}

/// Six-significant-digit engineering rendering for human-facing tables,
/// e.g. `248.858 ps`.
pub fn engineering(value: f64, unit: Unit) -> String {
    if value == 0.0 || !value.is_finite() {
        return format!("{value} {}", unit.symbol());
    }
    const PREFIXES: [(i32, &str); 10] = [
        (-15, "f"),
        (-12, "p"),
        (-9, "n"),
        (-6, "u"),
        (-3, "m"),
        (0, ""),
        (3, "k"),
        (6, "M"),
        (9, "G"),
        (12, "T"),
    ];
    // round to six significant digits first so 999.9996 ps becomes 1 ns
    let rounded: f64 = format!("{value:.5e}").parse().unwrap_or(value);
    let exp3 = (rounded.abs().log10().floor() as i32).div_euclid(3) * 3;
    let exp3 = exp3.clamp(-15, 12);
    let prefix = PREFIXES.iter().find(|(e, _)| *e == exp3).map(|p| p.1).unwrap_or("");
    let scaled = rounded / 10f64.powi(exp3);
    let int_digits = (scaled.abs().log10().floor() as i32 + 1).clamp(1, 6);
    let decimals = (6 - int_digits) as usize;
    format!("{scaled:.decimals$} {prefix}{}", unit.symbol())
}

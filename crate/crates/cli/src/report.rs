//! Rendering helpers: six-significant-digit numbers, unit-tagged JSON
//! quantities and aligned text tables.

use std::collections::BTreeMap;

use resram::config::{parse_config, ResolvedConfig};
use serde_json::{json, Map, Value};

/// Rounds to six significant digits so printed output diffs cleanly.
pub fn sig6(v: f64) -> f64 {
    if !v.is_finite() {
        return v;
    }
    format!("{v:.5e}").parse().unwrap_or(v)
}

pub fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(sig6(v))
    } else if v > 0.0 {
        json!("inf")
    } else {
        Value::Null
    }
}

/// `{"value": v, "unit": unit}`.
pub fn quantity(v: f64, unit: &str) -> Value {
    json!({ "value": num(v), "unit": unit })
}

pub fn opt_quantity(v: Option<f64>, unit: &str) -> Value {
    v.map(|v| quantity(v, unit)).unwrap_or(Value::Null)
}

pub fn cell(v: f64) -> String {
    format!("{v:.5e}")
}

pub fn opt_cell(v: Option<f64>) -> String {
    v.map(plain).unwrap_or_else(|| "-".to_string())
}

/// Six significant digits in positional notation when that is short,
/// otherwise the exponent form of [`cell`].
pub fn plain(v: f64) -> String {
    let v = sig6(v);
    let a = v.abs();
    if (1e-3..1e6).contains(&a) {
        let decimals = (5 - a.log10().floor() as i32).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        cell(v)
    }
}

/// Resolved configuration as `key -> "value unit"`, readable back by the
/// config parser.
pub fn config_map(resolved: &ResolvedConfig) -> BTreeMap<String, String> {
    let text = resolved.to_run_config().to_text();
    debug_assert!(parse_config(&text).is_ok());
    text.lines()
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.to_string(), v.trim_matches('"').to_string()))
        .collect()
}

/// Top-level JSON report. Unused sections are `null`; extra sections go
/// after the five fixed keys.
pub fn report(
    resolved: &ResolvedConfig,
    derived: Value,
    energy: Value,
    sizing: Value,
    warnings: &[String],
    extra: Vec<(&str, Value)>,
) -> Value {
    let mut top = Map::new();
    top.insert("config".into(), json!(config_map(resolved)));
    top.insert("derived".into(), derived);
    top.insert("energy".into(), energy);
    top.insert("sizing".into(), sizing);
    top.insert("warnings".into(), json!(warnings));
    for (k, v) in extra {
        top.insert(k.into(), v);
    }
    Value::Object(top)
}

pub fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Left-aligned first column, right-aligned numbers.
pub fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, w))| {
                if i == 0 {
                    format!("{c:<w$}")
                } else {
                    format!("{c:>w$}")
                }
            })
            .collect();
        parts.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(headers.to_vec());
    out += &line(widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().iter().map(String::as_str).collect());
    for row in rows {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}

/// Config echo for text output, one `# key = value` line each.
pub fn config_header(resolved: &ResolvedConfig) -> String {
    let mut out = String::from("# resolved config\n");
    for (k, v) in config_map(resolved) {
        out += &format!("# {k} = {v}\n");
    }
    out + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_digits() {
        assert_eq!(sig6(2.488584e-10), 2.48858e-10);
        assert_eq!(cell(0.9), "9.00000e-1");
        assert_eq!(plain(15.68312), "15.6831");
        assert_eq!(plain(0.904648), "0.904648");
        assert_eq!(plain(7.36884e-5), "7.36884e-5");
        assert_eq!(plain(123456.7), "123457");
    }

    #[test]
    fn aligned() {
        let t = table(&["a", "bb"], &[vec!["xyz".into(), "1".into()]]);
        assert_eq!(t, "a    bb\n---  --\nxyz   1\n");
    }
}

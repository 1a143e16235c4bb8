use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use resram::analytic::swing;
use resram::array::{table1, TABLE1_ENTRIES, TABLE1_PUBLISHED_T_R_HALF};
use resram::circuit::{derive_resonance, min_inductance, RlcParams};
use resram::config::{parse_config, CircuitSection, OutputFormat, ResolvedConfig, RunConfig};
use resram::energy::{resonant_energy, EnergyReport};
use resram::sizing::{size_inductor, SizingResult};
use resram::sweep::{sweep_design_space, SweepAxes, SweepPlan, SweepResult};
use resram::transient::{
    build_control, default_time_step, simulate_tuned_cycle, simulate_write_cycle, PulseSchedule,
    WaveformTrace,
};
use resram::units::{engineering, parse_quantity, Unit};
use serde_json::{json, Value};

use crate::report::{self, cell, num, opt_cell, opt_quantity, plain, quantity};
use crate::{Cli, CliError, Command, Format};

struct Ctx<'a> {
    cli: &'a Cli,
    resolved: ResolvedConfig,
    output: Option<PathBuf>,
    format: Option<Format>,
    warnings: Vec<String>,
}

impl Ctx<'_> {
    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn warn_stderr(&self) {
        if self.cli.quiet {
            return;
        }
        for w in &self.warnings {
            eprintln!("warning: {w}");
        }
    }

    /// Writes the main artifact to `--output` or stdout.
    fn emit(&self, text: &str) -> Result<(), CliError> {
        match &self.output {
            Some(path) => {
                write_file(path, text)?;
                if !self.cli.no_meta {
                    self.write_meta(path)?;
                }
                Ok(())
            }
            None => {
                let mut out = io::stdout().lock();
                out.write_all(text.as_bytes())
                    .and_then(|_| out.flush())
                    .map_err(|source| CliError::Io {
                        path: "<stdout>".into(),
                        source,
                    })
            }
        }
    }

    /// Table text with the config echo prepended unless `--quiet`.
    fn with_header(&self, body: String) -> String {
        if self.cli.quiet {
            body
        } else {
            report::config_header(&self.resolved) + &body
        }
    }

    fn write_meta(&self, artifact: &Path) -> Result<(), CliError> {
        let meta = json!({
            "tool": "resram",
            "version": env!("CARGO_PKG_VERSION"),
            "command": command_name(&self.cli.command),
            "artifact": artifact.file_name().map(|n| n.to_string_lossy().into_owned()),
            "config": report::config_map(&self.resolved),
            "warnings": self.warnings,
        });
        write_file(&sidecar(artifact, "meta.json"), &report::to_json(&meta))
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Derive => "derive",
        Command::Table1 => "table1",
        Command::Simulate { .. } => "simulate",
        Command::Size => "size",
        Command::Sweep { .. } => "sweep",
    }
}

/// `out/trace.csv` -> `out/trace.<suffix>`.
pub fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "output".into());
    path.with_file_name(format!("{stem}.{suffix}"))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            parse_config(&text)?
        }
        None => RunConfig::default(),
    };
    for item in &cli.overrides {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got `{item}`")))?;
        cfg.set(key.trim(), value)?;
    }
    Ok(cfg)
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = load_config(cli)?;
    let mut resolved = cfg.resolve()?;
    let format = cli.format.or(cfg.output.format.map(Format::from));
    let default_format = match cli.command {
        Command::Sweep { .. } => Format::Csv,
        _ => Format::Table,
    };
    resolved.output_format = match format.unwrap_or(default_format) {
        Format::Csv => OutputFormat::Csv,
        Format::Json => OutputFormat::Json,
        Format::Table => OutputFormat::Table,
    };
    let mut warnings = resolved.assumptions.clone();
    let geometry_only = matches!(cli.command, Command::Table1 | Command::Size | Command::Sweep { .. });
    if geometry_only && cfg.circuit != CircuitSection::default() {
        warnings.push(format!(
            "{} works from the geometry section; circuit.* keys are ignored",
            command_name(&cli.command)
        ));
    }
    let ctx = Ctx {
        cli,
        output: cli.output.clone().or_else(|| cfg.output.path.clone().map(PathBuf::from)),
        format,
        resolved,
        warnings,
    };

    match &cli.command {
        Command::Derive => derive(&ctx),
        Command::Table1 => cmd_table1(&ctx),
        Command::Simulate { dry_run, dt } => simulate(&ctx, *dry_run, dt.as_deref()),
        Command::Size => size(&ctx),
        Command::Sweep {
            bits,
            rows,
            inductance,
            vdd,
            corners,
        } => {
            let axes = SweepAxes {
                bits: bits.clone(),
                rows: rows.clone(),
                inductance: parse_list(inductance, Unit::Henry, "--inductance")?,
                v_dd: parse_list(vdd, Unit::Volt, "--vdd")?,
                corners: corners.clone(),
            };
            sweep(&ctx, axes)
        }
    }
}

fn parse_list(items: &[String], unit: Unit, flag: &str) -> Result<Vec<f64>, CliError> {
    items
        .iter()
        .map(|s| {
            parse_quantity(s, unit).map_err(|e| CliError::Usage(format!("{flag} `{s}`: {e}")))
        })
        .collect()
}

fn derived_json(p: &RlcParams) -> Result<Value, CliError> {
    let res = derive_resonance(p)?;
    let sw = if res.underdamped { Some(swing(p)?) } else { None };
    Ok(json!({
        "r_total": quantity(p.r_total, "ohm"),
        "inductance": quantity(p.inductance, "H"),
        "capacitance": quantity(p.capacitance, "F"),
        "min_inductance": quantity(min_inductance(p.r_total, p.capacitance)?, "H"),
        "alpha": quantity(res.alpha, "1/s"),
        "omega_0": quantity(res.omega_0, "rad/s"),
        "omega_d": opt_quantity(res.omega_d, "rad/s"),
        "f_r": opt_quantity(res.f_r, "Hz"),
        "t_r": opt_quantity(res.t_r, "s"),
        "t_r_half": opt_quantity(res.t_r_half, "s"),
        "q_f": quantity(res.q_f, "1"),
        "underdamped": res.underdamped,
        "v_ol": opt_quantity(sw.map(|s| s.v_ol), "V"),
        "v_oh": opt_quantity(sw.map(|s| s.v_oh), "V"),
        "v_rsw": opt_quantity(sw.map(|s| s.v_rsw), "V"),
        "swing_fraction": opt_quantity(sw.map(|s| s.swing_fraction), "1"),
    }))
}

fn derive(ctx: &Ctx) -> Result<(), CliError> {
    let p = &ctx.resolved.params;
    let derived = derived_json(p)?;
    match ctx.format_or(Format::Table) {
        Format::Json => {
            let r = report::report(&ctx.resolved, derived, Value::Null, Value::Null, &ctx.warnings, vec![]);
            ctx.emit(&report::to_json(&r))
        }
        Format::Csv => {
            let mut out = String::from("quantity,value,unit\n");
            for (k, v) in derived.as_object().expect("object") {
                out += &format!("{k},{},{}\n", csv_value(v), v["unit"].as_str().unwrap_or(""));
            }
            ctx.warn_stderr();
            ctx.emit(&out)
        }
        Format::Table => {
            let res = derive_resonance(p)?;
            let sw = if res.underdamped { Some(swing(p)?) } else { None };
            let eng = |v: Option<f64>, u| v.map(|v| engineering(v, u)).unwrap_or_else(|| "-".into());
            let rows = vec![
                vec!["r_total".into(), engineering(p.r_total, Unit::Ohm)],
                vec!["inductance".into(), engineering(p.inductance, Unit::Henry)],
                vec!["capacitance".into(), engineering(p.capacitance, Unit::Farad)],
                vec!["min_inductance".into(), engineering(min_inductance(p.r_total, p.capacitance)?, Unit::Henry)],
                vec!["alpha".into(), format!("{} 1/s", cell(res.alpha))],
                vec!["omega_0".into(), format!("{} rad/s", cell(res.omega_0))],
                vec!["omega_d".into(), res.omega_d.map(|w| format!("{} rad/s", cell(w))).unwrap_or("-".into())],
                vec!["f_r".into(), eng(res.f_r, Unit::Hertz)],
                vec!["t_r".into(), eng(res.t_r, Unit::Second)],
                vec!["t_r_half".into(), eng(res.t_r_half, Unit::Second)],
                vec!["q_f".into(), plain(res.q_f)],
                vec!["underdamped".into(), res.underdamped.to_string()],
                vec!["v_ol".into(), eng(sw.map(|s| s.v_ol), Unit::Volt)],
                vec!["v_oh".into(), eng(sw.map(|s| s.v_oh), Unit::Volt)],
                vec!["v_rsw".into(), eng(sw.map(|s| s.v_rsw), Unit::Volt)],
                vec!["swing_fraction".into(), opt_cell(sw.map(|s| s.swing_fraction))],
            ];
            ctx.warn_stderr();
            ctx.emit(&ctx.with_header(report::table(&["quantity", "value"], &rows)))
        }
    }
}

fn csv_value(v: &Value) -> String {
    match &v["value"] {
        Value::Number(n) => n.as_f64().map(cell).unwrap_or_default(),
        Value::Null => v.as_bool().map(|b| b.to_string()).unwrap_or_default(),
        other => other.to_string(),
    }
}

fn cmd_table1(ctx: &Ctx) -> Result<(), CliError> {
    let g = &ctx.resolved.geometry;
    let l = g.shared_inductance;
    let rows = table1(g, l, &TABLE1_ENTRIES)?;
    let deviation = |i: usize, t: Option<f64>| t.map(|t| t / TABLE1_PUBLISHED_T_R_HALF[i] - 1.0);
    match ctx.format_or(Format::Table) {
        Format::Json => {
            let entries: Vec<Value> = rows
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    json!({
                        "mux_factor": r.mux_factor,
                        "columns": r.columns,
                        "total_capacitance": quantity(r.total_capacitance, "F"),
                        "inductance": quantity(r.inductance, "H"),
                        "r_total": quantity(r.r_total, "ohm"),
                        "q_f": quantity(r.q_f, "1"),
                        "t_r_half": opt_quantity(r.t_r_half, "s"),
                        "published_t_r_half": quantity(TABLE1_PUBLISHED_T_R_HALF[i], "s"),
                        "relative_deviation": deviation(i, r.t_r_half).map(num).unwrap_or(Value::Null),
                    })
                })
                .collect();
            let r = report::report(
                &ctx.resolved,
                Value::Null,
                Value::Null,
                Value::Null,
                &ctx.warnings,
                vec![("table1", json!(entries))],
            );
            ctx.emit(&report::to_json(&r))
        }
        Format::Csv => {
            let mut out = String::from(
                "mux_factor,columns,total_capacitance,inductance,r_total,q_f,t_r_half,published_t_r_half\n",
            );
            for (i, r) in rows.iter().enumerate() {
                out += &format!(
                    "{},{},{},{},{},{},{},{}\n",
                    r.mux_factor,
                    r.columns,
                    cell(r.total_capacitance),
                    cell(r.inductance),
                    cell(r.r_total),
                    cell(r.q_f),
                    r.t_r_half.map(cell).unwrap_or_default(),
                    cell(TABLE1_PUBLISHED_T_R_HALF[i])
                );
            }
            ctx.warn_stderr();
            ctx.emit(&out)
        }
        Format::Table => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    vec![
                        r.mux_factor.to_string(),
                        r.columns.to_string(),
                        engineering(r.total_capacitance, Unit::Farad),
                        engineering(r.inductance, Unit::Henry),
                        engineering(r.r_total, Unit::Ohm),
                        plain(r.q_f),
                        r.t_r_half.map(|t| engineering(t, Unit::Second)).unwrap_or("-".into()),
                        engineering(TABLE1_PUBLISHED_T_R_HALF[i], Unit::Second),
                        deviation(i, r.t_r_half)
                            .map(|d| format!("{:+.3}%", 100.0 * d))
                            .unwrap_or("-".into()),
                    ]
                })
                .collect();
            let t = report::table(
                &["mux", "columns", "C_total", "L", "R_T", "Q_f", "T_R/2", "published", "deviation"],
                &body,
            );
            ctx.warn_stderr();
            ctx.emit(&ctx.with_header(t))
        }
    }
}

fn energy_json(e: &EnergyReport) -> Value {
    json!({
        "e_from_vdd": quantity(e.e_from_vdd, "J"),
        "e_from_bias_net": quantity(e.e_from_bias_net, "J"),
        "e_dissipated": {
            "series_r": quantity(e.e_dissipated.series_r, "J"),
            "pulldown": quantity(e.e_dissipated.pulldown, "J"),
            "pullup": quantity(e.e_dissipated.pullup, "J"),
            "clamp": quantity(e.e_dissipated.clamp, "J"),
            "total": quantity(e.e_dissipated.total(), "J"),
        },
        "e_conventional": quantity(e.e_conventional, "J"),
        "savings_fraction": quantity(e.savings_fraction, "1"),
        "savings_scope": "bitline mechanism only; periphery excluded",
        "delta_stored": quantity(e.delta_stored, "J"),
        "bias_charge_net": quantity(e.bias_charge_net, "C"),
        "ledger_residual": quantity(e.ledger_residual, "1"),
        "ledger_closes": e.closes(),
    })
}

fn schedule_json(s: &PulseSchedule) -> Value {
    json!({
        "clock_period": quantity(s.clock_period, "s"),
        "s_rise": quantity(s.s_rise, "s"),
        "s_fall": quantity(s.s_fall, "s"),
        "delay": quantity(s.delay(), "s"),
        "delay_code": s.delay_code,
    })
}

fn run_simulation(ctx: &Ctx, dt: Option<&str>) -> Result<(PulseSchedule, WaveformTrace, f64), CliError> {
    let r = &ctx.resolved;
    let dt = match dt {
        Some(s) => parse_quantity(s, Unit::Second).map_err(|e| CliError::Usage(format!("--dt `{s}`: {e}")))?,
        None => default_time_step(&r.params, &r.phases)?,
    };
    if r.auto_tune {
        let (tuned, trace) = simulate_tuned_cycle(&r.params, &r.phases, &r.schedule, dt)?;
        Ok((tuned, trace, dt))
    } else {
        let control = build_control(&r.schedule, true)?;
        let trace = simulate_write_cycle(&r.params, &r.phases, &control, dt)?;
        Ok((r.schedule, trace, dt))
    }
}

fn simulate(ctx: &Ctx, dry_run: bool, dt: Option<&str>) -> Result<(), CliError> {
    let r = &ctx.resolved;
    if dry_run {
        let dt = match dt {
            Some(s) => parse_quantity(s, Unit::Second).map_err(|e| CliError::Usage(format!("--dt `{s}`: {e}")))?,
            None => default_time_step(&r.params, &r.phases)?,
        };
        let limit = resram::transient::max_time_step(&r.params, &r.phases)?;
        if dt > limit {
            return Err(resram::Error::StepSize { dt, limit }.into());
        }
        if !r.auto_tune {
            build_control(&r.schedule, true)?;
        }
        return Ok(());
    }

    let (schedule, trace, dt) = run_simulation(ctx, dt)?;
    let energy = resonant_energy(&trace, &r.params, &r.phases)?;
    let mut warnings = ctx.warnings.clone();
    if !energy.closes() {
        warnings.push(format!("energy ledger residual {:.5e} exceeds tolerance", energy.ledger_residual));
    }
    let mut extra = vec![
        ("schedule", schedule_json(&schedule)),
        ("time_step", quantity(dt, "s")),
        ("samples", json!(trace.samples.len())),
    ];
    if let Some(b) = &trace.booster {
        extra.push((
            "booster",
            json!({
                "peak_voltage": quantity(b.peak_voltage, "V"),
                "peak_time": quantity(b.peak_time, "s"),
                "bump": quantity(b.bump, "V"),
                "energy_from_vdd": quantity(b.energy_from_vdd, "J"),
            }),
        ));
    }
    let full = report::report(
        r,
        derived_json(&r.params)?,
        energy_json(&energy),
        Value::Null,
        &warnings,
        extra,
    );

    let mut csv = Vec::new();
    trace
        .write_csv(&mut csv)
        .map_err(|source| CliError::Io { path: "<buffer>".into(), source })?;
    let csv = String::from_utf8(csv).expect("csv is ascii");

    if let Some(path) = &ctx.output {
        write_file(path, &csv)?;
        write_file(&sidecar(path, "energy.json"), &report::to_json(&full))?;
        if !ctx.cli.no_meta {
            ctx.write_meta(path)?;
        }
        if !ctx.cli.quiet {
            for w in &warnings {
                eprintln!("warning: {w}");
            }
        }
        return Ok(());
    }

    let sink = Ctx {
        cli: ctx.cli,
        resolved: r.clone(),
        output: None,
        format: ctx.format,
        warnings,
    };
    match ctx.format_or(Format::Table) {
        Format::Csv => {
            sink.warn_stderr();
            sink.emit(&csv)
        }
        Format::Json => sink.emit(&report::to_json(&full)),
        Format::Table => {
            let d = &energy.e_dissipated;
            let rows = vec![
                vec!["delay".into(), engineering(schedule.delay(), Unit::Second)],
                vec!["time_step".into(), engineering(dt, Unit::Second)],
                vec!["samples".into(), trace.samples.len().to_string()],
                vec!["v_c_end".into(), engineering(trace.last().v_c, Unit::Volt)],
                vec!["e_from_vdd".into(), format!("{} J", cell(energy.e_from_vdd))],
                vec!["e_from_bias_net".into(), format!("{} J", cell(energy.e_from_bias_net))],
                vec!["e_dissipated_series_r".into(), format!("{} J", cell(d.series_r))],
                vec!["e_dissipated_pulldown".into(), format!("{} J", cell(d.pulldown))],
                vec!["e_dissipated_pullup".into(), format!("{} J", cell(d.pullup))],
                vec!["e_dissipated_clamp".into(), format!("{} J", cell(d.clamp))],
                vec!["e_conventional".into(), format!("{} J", cell(energy.e_conventional))],
                vec!["savings_fraction".into(), plain(energy.savings_fraction)],
                vec!["bias_charge_net".into(), format!("{} C", cell(energy.bias_charge_net))],
                vec!["ledger_residual".into(), cell(energy.ledger_residual)],
            ];
            sink.warn_stderr();
            sink.emit(&sink.with_header(report::table(&["quantity", "value"], &rows)))
        }
    }
}

fn sizing_json(s: &SizingResult) -> Value {
    json!({
        "inductance": quantity(s.inductance, "H"),
        "t_r_half": quantity(s.t_r_half, "s"),
        "swing_fraction": quantity(s.swing_fraction, "1"),
        "q_f": quantity(s.q_f, "1"),
        "r_total": quantity(s.r_total, "ohm"),
        "capacitance": quantity(s.capacitance, "F"),
        "binding": s.binding.name(),
    })
}

fn size(ctx: &Ctx) -> Result<(), CliError> {
    let r = &ctx.resolved;
    let s = size_inductor(&r.geometry, r.params.v_dd, &r.sizing)?;
    match ctx.format_or(Format::Table) {
        Format::Json => {
            let rep = report::report(r, Value::Null, Value::Null, sizing_json(&s), &ctx.warnings, vec![]);
            ctx.emit(&report::to_json(&rep))
        }
        Format::Csv => {
            ctx.warn_stderr();
            ctx.emit(&format!(
                "inductance,t_r_half,swing_fraction,q_f,r_total,capacitance,binding\n{},{},{},{},{},{},{}\n",
                cell(s.inductance),
                cell(s.t_r_half),
                cell(s.swing_fraction),
                cell(s.q_f),
                cell(s.r_total),
                cell(s.capacitance),
                s.binding.name()
            ))
        }
        Format::Table => {
            let rows = vec![
                vec!["inductance".into(), engineering(s.inductance, Unit::Henry)],
                vec!["t_r_half".into(), engineering(s.t_r_half, Unit::Second)],
                vec!["swing_fraction".into(), plain(s.swing_fraction)],
                vec!["q_f".into(), plain(s.q_f)],
                vec!["r_total".into(), engineering(s.r_total, Unit::Ohm)],
                vec!["capacitance".into(), engineering(s.capacitance, Unit::Farad)],
                vec!["binding".into(), s.binding.name().into()],
            ];
            ctx.warn_stderr();
            ctx.emit(&ctx.with_header(report::table(&["quantity", "value"], &rows)))
        }
    }
}

fn sweep_json(result: &SweepResult) -> Value {
    let rows: Vec<Value> = result
        .rows
        .iter()
        .map(|row| {
            let p = &row.point;
            json!({
                "bits": p.bits,
                "rows": p.rows,
                "inductance": quantity(p.inductance, "H"),
                "v_dd": quantity(p.v_dd, "V"),
                "corner": p.corner,
                "f_r": opt_quantity(row.f_r, "Hz"),
                "t_r_half": opt_quantity(row.t_r_half, "s"),
                "swing_fraction": opt_quantity(row.swing_fraction, "1"),
                "q_f": opt_quantity(row.q_f, "1"),
                "savings_fraction": opt_quantity(row.savings_fraction, "1"),
                "underdamped": row.underdamped,
                "sized_inductance": opt_quantity(row.sized_inductance, "H"),
                "errors": row.errors,
            })
        })
        .collect();
    json!(rows)
}

fn sweep(ctx: &Ctx, axes: SweepAxes) -> Result<(), CliError> {
    if axes.is_empty() {
        return Err(CliError::Usage(
            "sweep needs at least one of --bits, --rows, --inductance, --vdd, --corners".into(),
        ));
    }
    let r = &ctx.resolved;
    for name in &axes.corners {
        if !r.corners.contains_key(name) {
            return Err(CliError::Usage(format!(
                "unknown corner `{name}` (known: {})",
                r.corners.keys().cloned().collect::<Vec<_>>().join(", ")
            )));
        }
    }
    let plan = SweepPlan {
        geometry: r.geometry,
        v_dd: r.params.v_dd,
        phases: r.phase_overrides,
        schedule: r.schedule,
        sizing: r.sizing,
        corners: r.corners.clone(),
        axes,
    };
    let result = sweep_design_space(&plan)?;
    match ctx.format_or(Format::Csv) {
        Format::Json => {
            let rep = report::report(
                r,
                Value::Null,
                Value::Null,
                Value::Null,
                &ctx.warnings,
                vec![("sweep", sweep_json(&result))],
            );
            ctx.emit(&report::to_json(&rep))
        }
        Format::Csv => {
            let mut buf = Vec::new();
            result
                .write_csv(&mut buf)
                .map_err(|source| CliError::Io { path: "<buffer>".into(), source })?;
            ctx.warn_stderr();
            ctx.emit(&String::from_utf8(buf).expect("csv is ascii"))
        }
        Format::Table => {
            let body: Vec<Vec<String>> = result
                .rows
                .iter()
                .map(|row| {
                    let p = &row.point;
                    vec![
                        p.bits.to_string(),
                        p.rows.to_string(),
                        engineering(p.inductance, Unit::Henry),
                        engineering(p.v_dd, Unit::Volt),
                        p.corner.clone().unwrap_or("-".into()),
                        row.t_r_half.map(|t| engineering(t, Unit::Second)).unwrap_or("-".into()),
                        opt_cell(row.swing_fraction),
                        opt_cell(row.q_f),
                        opt_cell(row.savings_fraction),
                        row.sized_inductance.map(|l| engineering(l, Unit::Henry)).unwrap_or("-".into()),
                        if row.errors.is_empty() { "ok".into() } else { "error".into() },
                    ]
                })
                .collect();
            let t = report::table(
                &["bits", "rows", "L", "V_DD", "corner", "T_R/2", "swing", "Q_f", "savings", "L_min", "status"],
                &body,
            );
            ctx.warn_stderr();
            ctx.emit(&ctx.with_header(t))
        }
    }
}

//! `run`, `sweep` and `check`. Each returns the process exit code.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::Context;
use rayon::prelude::*;
use steering_core::reference::TanhReference;
use steering_core::telemetry::format_float;
use steering_core::{check_feasibility, run_scenario, ConfigError, Reference, ScenarioConfig, Termination};

use crate::config::resolve;
use crate::output::write_run;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
/// Guard violation in `run`, infeasible reference in `check`, any
/// non-completed row in `sweep`.
pub const EXIT_GUARD: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

pub const SUMMARY_FILE: &str = "summary.csv";
pub const SUMMARY_HEADER: &str = "value,max_abs_delta,max_abs_delta_dot,final_error,status";

/// Command-line overrides applied on top of a loaded config.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub dt: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, mut config: ScenarioConfig) -> Result<ScenarioConfig, ConfigError> {
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(dt) = self.dt {
            config.dt = dt;
        }
        config.validate()?;
        Ok(config)
    }
}

pub fn exit_code(t: &Termination) -> i32 {
    match t {
        Termination::Completed => EXIT_OK,
        Termination::GuardViolation { .. } => EXIT_GUARD,
        Termination::NumericFailure { .. } => EXIT_NUMERIC,
    }
}

fn describe(t: &Termination) -> String {
    match t {
        Termination::Completed => "completed".into(),
        Termination::GuardViolation { t, violation } => format!("guard violation at t = {t}: {violation}"),
        Termination::NumericFailure { t } => format!("non-finite state at t = {t}"),
    }
}

pub fn run(spec: &str, out_dir: &Path, overrides: Overrides, out: &mut dyn Write) -> anyhow::Result<i32> {
    let loaded = resolve(spec)?;
    let config = overrides.apply(loaded.config).with_context(|| format!("{}", loaded.origin))?;
    let traj = run_scenario(&config)?;
    let manifest = write_run(out_dir, &config, &traj)?;
    writeln!(out, "{}: {} ({} records)", config.name, describe(&traj.termination), traj.records.len())?;
    if let Some(m) = &manifest.metrics {
        writeln!(
            out,
            "max|delta| = {:.6} deg, max|delta_dot| = {:.6} deg/s, final |e_psi| = {:.3e} deg",
            m.max_abs_delta, m.max_abs_delta_dot, m.final_abs_heading_error
        )?;
    }
    writeln!(out, "wrote {}", out_dir.display())?;
    Ok(exit_code(&traj.termination))
}

/// `config` with its reference rescaled to `value`: the tanh amplitude
/// (with default timing for that amplitude), the constant heading, or the
/// sine amplitude.
pub fn with_value(config: &ScenarioConfig, value: f64) -> Result<ScenarioConfig, ConfigError> {
    let reference = match config.reference {
        Reference::Tanh(_) => Reference::Tanh(TanhReference::with_defaults(value)?),
        Reference::Constant { .. } => Reference::constant(value),
        Reference::Sine(s) => {
            Reference::Sine(steering_core::reference::SineReference { amplitude: value, ..s })
        }
    };
    let out = ScenarioConfig { name: format!("{}_at_{value}", config.name), reference, ..config.clone() };
    out.validate()?;
    Ok(out)
}

/// One line of the sweep table.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub max_abs_delta: Option<f64>,
    pub max_abs_delta_dot: Option<f64>,
    pub final_error: Option<f64>,
    /// `completed`, `guard_violation`, `numeric_failure`, `infeasible` or
    /// `invalid`.
    pub status: String,
}

impl SweepRow {
    fn skipped(value: f64, status: &str) -> Self {
        Self { value, max_abs_delta: None, max_abs_delta_dot: None, final_error: None, status: status.into() }
    }

    fn csv_line(&self) -> String {
        let f = |v: Option<f64>| v.map(format_float).unwrap_or_default();
        format!(
            "{},{},{},{},{}",
            format_float(self.value),
            f(self.max_abs_delta),
            f(self.max_abs_delta_dot),
            f(self.final_error),
            self.status
        )
    }
}

fn sweep_one(base: &ScenarioConfig, value: f64, out_dir: &Path) -> anyhow::Result<SweepRow> {
    let Ok(config) = with_value(base, value) else {
        return Ok(SweepRow::skipped(value, "invalid"));
    };
    let model = config.model.build()?;
    let report = check_feasibility(&config.reference, &model, &config.limits, config.horizon, config.dt)?;
    if !report.is_feasible() {
        return Ok(SweepRow::skipped(value, "infeasible"));
    }
    let traj = run_scenario(&config)?;
    let manifest = write_run(&out_dir.join(&config.name), &config, &traj)?;
    let m = manifest.metrics;
    Ok(SweepRow {
        value,
        max_abs_delta: m.as_ref().map(|m| m.max_abs_delta),
        max_abs_delta_dot: m.as_ref().map(|m| m.max_abs_delta_dot),
        final_error: m.as_ref().map(|m| m.final_abs_heading_error),
        status: traj.termination.label().into(),
    })
}

pub fn sweep(
    spec: &str,
    values: &[f64],
    out_dir: &Path,
    overrides: Overrides,
    out: &mut dyn Write,
) -> anyhow::Result<i32> {
    let loaded = resolve(spec)?;
    let base = overrides.apply(loaded.config).with_context(|| format!("{}", loaded.origin))?;
    let rows: Vec<SweepRow> =
        values.par_iter().map(|&v| sweep_one(&base, v, out_dir)).collect::<anyhow::Result<_>>()?;

    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let mut summary = String::from(SUMMARY_HEADER);
    summary.push('\n');
    for row in &rows {
        summary.push_str(&row.csv_line());
        summary.push('\n');
    }
    let path = out_dir.join(SUMMARY_FILE);
    fs::write(&path, summary).with_context(|| format!("writing {}", path.display()))?;

    let cell = |v: Option<f64>| v.map(|v| format!("{v:.4}")).unwrap_or_else(|| "-".into());
    writeln!(
        out,
        "{:>10} {:>12} {:>16} {:>12}  status",
        "value", "max|delta|", "max|delta_dot|", "final err"
    )?;
    for r in &rows {
        writeln!(
            out,
            "{:>10} {:>12} {:>16} {:>12}  {}",
            r.value,
            cell(r.max_abs_delta),
            cell(r.max_abs_delta_dot),
            r.final_error.map(|v| format!("{v:.3e}")).unwrap_or_else(|| "-".into()),
            r.status
        )?;
    }
    let all_completed = rows.iter().all(|r| r.status == "completed");
    Ok(if all_completed { EXIT_OK } else { EXIT_GUARD })
}

pub fn check(spec: &str, out: &mut dyn Write) -> anyhow::Result<i32> {
    let loaded = resolve(spec)?;
    let config = loaded.config;
    let model = config.model.build()?;
    let r = check_feasibility(&config.reference, &model, &config.limits, config.horizon, config.dt)?;
    let line = |ok: bool, first: Option<f64>, count: usize| match (ok, first) {
        (true, _) => "ok".to_string(),
        (false, Some(t)) => format!("VIOLATED from t = {t:.2} ({count} samples)"),
        (false, None) => "VIOLATED".to_string(),
    };
    writeln!(out, "{}: 0..={} s every {} s", config.name, config.horizon, config.dt)?;
    writeln!(
        out,
        "magnitude: margin {:.6} deg (worst at t = {:.2}) {}",
        r.worst_margin_magnitude,
        r.worst_times[0],
        line(r.magnitude_ok, r.first_magnitude_violation, r.magnitude_violation_samples)
    )?;
    writeln!(
        out,
        "rate:      margin {:.6} deg/s (worst at t = {:.2}) {}",
        r.worst_margin_rate,
        r.worst_times[1],
        line(r.rate_ok, r.first_rate_violation, r.rate_violation_samples)
    )?;
    writeln!(out, "{}", if r.is_feasible() { "feasible" } else { "infeasible" })?;
    Ok(if r.is_feasible() { EXIT_OK } else { EXIT_GUARD })
}

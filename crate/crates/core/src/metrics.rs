//! Summary statistics over a [`Trajectory`].

use serde::{Deserialize, Serialize};

use crate::sim::{TelemetryRecord, Trajectory};

/// Heading error band used for settling time [deg].
pub const SETTLING_BAND: f64 = 0.1;
/// Records with `V` at or below this are left out of the decay fit.
pub const DECAY_FIT_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub records: usize,
    pub completed: bool,
    pub max_abs_delta: f64,
    pub max_abs_delta_dot: f64,
    pub max_abs_eta: f64,
    pub final_abs_heading_error: f64,
    /// `−d(ln V)/dt` from a least-squares line over all records with
    /// `V > 1e−12`.
    pub decay_rate: Option<f64>,
    /// Time after which `|e_ψ|` stays within [`SETTLING_BAND`].
    pub settling_time: Option<f64>,
}

fn max_abs(records: &[TelemetryRecord], f: impl Fn(&TelemetryRecord) -> f64) -> f64 {
    records.iter().map(|r| f(r).abs()).fold(0.0, f64::max)
}

/// Returns `None` for an empty trajectory.
pub fn compute_metrics(traj: &Trajectory) -> Option<Metrics> {
    let last = traj.records.last()?;
    let recs = &traj.records;
    Some(Metrics {
        records: recs.len(),
        completed: traj.termination.is_completed(),
        max_abs_delta: max_abs(recs, |r| r.state.delta),
        max_abs_delta_dot: max_abs(recs, |r| r.delta_dot),
        max_abs_eta: max_abs(recs, |r| r.eta),
        final_abs_heading_error: (last.state.psi - last.psi_d).abs(),
        decay_rate: fit_log_slope(recs, DECAY_FIT_FLOOR, f64::INFINITY).map(|s| -s),
        settling_time: settling_time(recs, SETTLING_BAND),
    })
}

/// Least-squares slope of `ln V` against `t` over the records with
/// `lo ≤ V ≤ hi`. Needs at least two such records.
pub fn fit_log_slope(records: &[TelemetryRecord], lo: f64, hi: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        records.iter().filter(|r| r.v >= lo && r.v <= hi && r.v > 0.0).map(|r| (r.t, r.v.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mean_t = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(sxy, sxx), &(t, y)| {
        (sxy + (t - mean_t) * (y - mean_y), sxx + (t - mean_t).powi(2))
    });
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn settling_time(records: &[TelemetryRecord], band: f64) -> Option<f64> {
    let outside = |r: &TelemetryRecord| (r.state.psi - r.psi_d).abs() > band;
    match records.iter().rposition(outside) {
        None => records.first().map(|r| r.t),
        Some(i) => records.get(i + 1).map(|r| r.t),
    }
}

/// Number of sign changes of `e_ψ` among records with `t ≥ from`. Samples with
/// `|e_ψ| ≤ deadband` are skipped, so only swings that leave the band count.
pub fn heading_error_sign_changes(records: &[TelemetryRecord], from: f64, deadband: f64) -> usize {
    let signs = records
        .iter()
        .filter(|r| r.t >= from)
        .map(|r| r.state.psi - r.psi_d)
        .filter(|e| e.abs() > deadband)
        .map(|e| e > 0.0);
    let mut count = 0;
    let mut prev = None;
    for s in signs {
        if prev.is_some_and(|p| p != s) {
            count += 1;
        }
        prev = Some(s);
    }
    count
}

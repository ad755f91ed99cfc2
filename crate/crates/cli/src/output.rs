//! Per-run output directory: telemetry, plot data, metrics and manifest.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use anyhow::Context;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use steering_core::metrics::{compute_metrics, Metrics};
use steering_core::telemetry::{write_csv, write_plot_data};
use steering_core::{ScenarioConfig, Termination, Trajectory};

pub const TELEMETRY_FILE: &str = "telemetry.csv";
pub const PLOT_FILE: &str = "plot.dat";
pub const METRICS_FILE: &str = "metrics.json";
pub const MANIFEST_FILE: &str = "manifest.json";

/// File names inside the run directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputPaths {
    pub telemetry: String,
    pub plot_data: String,
    pub metrics: String,
}

impl Default for OutputPaths {
    fn default() -> Self {
        Self { telemetry: TELEMETRY_FILE.into(), plot_data: PLOT_FILE.into(), metrics: METRICS_FILE.into() }
    }
}

/// Everything needed to identify and re-run a scenario. Passing the
/// manifest file back to `steer run` reproduces the telemetry bit for bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub scenario: String,
    /// Hex SHA-256 of the config serialized as compact JSON.
    pub config_hash: String,
    pub version: String,
    pub outputs: OutputPaths,
    pub termination: Termination,
    pub metrics: Option<Metrics>,
    pub config: ScenarioConfig,
}

pub fn config_hash(config: &ScenarioConfig) -> String {
    let canonical = serde_json::to_vec(config).expect("config serializes");
    hex::encode(Sha256::digest(canonical))
}

pub fn manifest(config: &ScenarioConfig, traj: &Trajectory) -> RunManifest {
    RunManifest {
        scenario: config.name.clone(),
        config_hash: config_hash(config),
        version: env!("CARGO_PKG_VERSION").to_string(),
        outputs: OutputPaths::default(),
        termination: traj.termination,
        metrics: compute_metrics(traj),
        config: config.clone(),
    }
}

/// Writes all four files into `dir`, creating it if needed.
pub fn write_run(dir: &Path, config: &ScenarioConfig, traj: &Trajectory) -> anyhow::Result<RunManifest> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let create = |name: &str| {
        let path = dir.join(name);
        File::create(&path).map(BufWriter::new).with_context(|| format!("creating {}", path.display()))
    };
    write_csv(traj, create(TELEMETRY_FILE)?).context("writing telemetry")?;
    write_plot_data(traj, create(PLOT_FILE)?).context("writing plot data")?;
    let m = manifest(config, traj);
    serde_json::to_writer_pretty(create(METRICS_FILE)?, &m.metrics).context("writing metrics")?;
    serde_json::to_writer_pretty(create(MANIFEST_FILE)?, &m).context("writing manifest")?;
    Ok(m)
}

//! Scenario files, presets and validation with source locations.

use std::fmt;
use std::path::{Path, PathBuf};

use steering_core::{ConfigError, ScenarioConfig};
use thiserror::Error;

/// Directory searched for `<name>.toml` before the built-in presets.
pub const PRESET_DIR_ENV: &str = "STEER_PRESET_DIR";

const EMBEDDED: &[(&str, &str)] = &[
    ("case1_psi10", include_str!("../presets/case1_psi10.toml")),
    ("case1_psi20", include_str!("../presets/case1_psi20.toml")),
    ("case1_psi30", include_str!("../presets/case1_psi30.toml")),
    ("case1_psi40", include_str!("../presets/case1_psi40.toml")),
    ("case1_psi50", include_str!("../presets/case1_psi50.toml")),
    ("case2", include_str!("../presets/case2.toml")),
    ("conventional_servo", include_str!("../presets/conventional_servo.toml")),
    ("course_offset", include_str!("../presets/course_offset.toml")),
    ("degradation", include_str!("../presets/degradation.toml")),
    ("sine_infeasible", include_str!("../presets/sine_infeasible.toml")),
];

pub fn preset_names() -> impl Iterator<Item = &'static str> {
    EMBEDDED.iter().map(|(name, _)| *name)
}

pub fn embedded_preset(name: &str) -> Option<&'static str> {
    EMBEDDED.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

/// Where a configuration came from.
#[derive(Debug, Clone, PartialEq)]
pub enum Origin {
    File(PathBuf),
    Preset(String),
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::File(p) => write!(f, "{}", p.display()),
            Origin::Preset(name) => write!(f, "preset `{name}`"),
        }
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{origin}: {message}")]
    Parse { origin: Origin, message: String },
    #[error("{origin}{}: {error}", line.map(|l| format!(", line {l}")).unwrap_or_default())]
    Invalid { origin: Origin, line: Option<usize>, error: ConfigError },
    #[error("`{name}` is neither a file nor a known preset (available: {available})")]
    UnknownPreset { name: String, available: String },
}

impl LoadError {
    /// Field named by a validation failure.
    pub fn field(&self) -> Option<&str> {
        match self {
            LoadError::Invalid { error, .. } => Some(&error.field),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Loaded {
    pub config: ScenarioConfig,
    pub origin: Origin,
}

/// Resolves `spec` as a file path, then as `$STEER_PRESET_DIR/<spec>.toml`,
/// then as a built-in preset. `.json` files are read as run manifests and
/// their embedded `config` is used.
pub fn resolve(spec: &str) -> Result<Loaded, LoadError> {
    let path = Path::new(spec);
    if path.is_file() {
        return load_file(path);
    }
    if let Some(dir) = std::env::var_os(PRESET_DIR_ENV) {
        let candidate = Path::new(&dir).join(format!("{spec}.toml"));
        if candidate.is_file() {
            return load_file(&candidate);
        }
    }
    match embedded_preset(spec) {
        Some(text) => {
            let origin = Origin::Preset(spec.to_string());
            parse_toml(text, &origin).map(|config| Loaded { config, origin })
        }
        None => Err(LoadError::UnknownPreset {
            name: spec.to_string(),
            available: preset_names().collect::<Vec<_>>().join(", "),
        }),
    }
}

pub fn load_file(path: &Path) -> Result<Loaded, LoadError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| LoadError::Io { path: path.to_path_buf(), source })?;
    let origin = Origin::File(path.to_path_buf());
    let config = if path.extension().is_some_and(|e| e == "json") {
        parse_manifest(&text, &origin)?
    } else {
        parse_toml(&text, &origin)?
    };
    Ok(Loaded { config, origin })
}

/// Parses and validates a TOML scenario.
pub fn parse_toml(text: &str, origin: &Origin) -> Result<ScenarioConfig, LoadError> {
    let config: ScenarioConfig = toml::from_str(text)
        .map_err(|e| LoadError::Parse { origin: origin.clone(), message: e.to_string() })?;
    config.validate().map_err(|error| LoadError::Invalid {
        origin: origin.clone(),
        line: locate_field(text, &error.field),
        error,
    })?;
    Ok(config)
}

fn parse_manifest(text: &str, origin: &Origin) -> Result<ScenarioConfig, LoadError> {
    #[derive(serde::Deserialize)]
    struct ConfigOnly {
        config: ScenarioConfig,
    }
    let parsed: ConfigOnly = serde_json::from_str(text)
        .map_err(|e| LoadError::Parse { origin: origin.clone(), message: e.to_string() })?;
    parsed.config.validate().map_err(|error| LoadError::Invalid {
        origin: origin.clone(),
        line: None,
        error,
    })?;
    Ok(parsed.config)
}

/// 1-based line of `table.key` (or a top-level `key`) in a TOML document.
/// Falls back to the table header when the key is absent.
pub fn locate_field(text: &str, field: &str) -> Option<usize> {
    let (table, key) = field.rsplit_once('.').unwrap_or(("", field));
    let mut current = String::new();
    let mut header = None;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            current = name.trim().to_string();
            if current == table {
                header = Some(i + 1);
            }
            continue;
        }
        if current != table {
            continue;
        }
        if let Some(rest) = line.strip_prefix(key) {
            if rest.trim_start().starts_with('=') {
                return Some(i + 1);
            }
        }
    }
    header
}

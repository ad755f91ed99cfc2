use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A configuration value failed validation.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid value for `{field}`: {reason}")]
pub struct ConfigError {
    pub field: String,
    pub reason: String,
}

impl ConfigError {
    pub fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Self { field: field.into(), reason: reason.into() }
    }
}

/// Which boundary of the auxiliary cascade was approached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    /// `|δ|` reached the magnitude guard.
    Magnitude,
    /// `|ξ|` reached the rate guard.
    Rate,
    /// `1/(b g_δ g_ξ)` or `|η|` exceeded the output cap.
    ControlCap,
}

/// The state got too close to a constraint boundary for the cascade to be
/// evaluated reliably.
#[derive(Debug, Clone, Copy, PartialEq, Error, Serialize, Deserialize)]
#[error("{kind:?} guard tripped at delta = {delta}, xi = {xi} (remaining margin {margin:.3e})")]
pub struct BoundaryViolation {
    pub kind: BoundaryKind,
    pub delta: f64,
    pub xi: f64,
    /// Remaining fraction of the violated bound, `1 − |x|/bound`. Negative
    /// when the state is already outside.
    pub margin: f64,
}

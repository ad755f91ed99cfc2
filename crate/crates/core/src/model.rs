//! SISO yaw dynamics `ṙ = f(r) + bδ`.
//!
//! All angles are degrees and all rates deg/s. The Norrbin coefficients are
//! applied to `r` in deg/s; no radian conversion happens anywhere.

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

/// Which family a [`PlantModel`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlantKind {
    /// Linear first-order model `Tṙ + r = Kδ`.
    Nomoto,
    /// Cubic model `Tṙ + H(r) = Kδ`, `H(r) = n₃r³ + n₂r² + n₁r + n₀`.
    Norrbin,
    /// Same polynomial form as Norrbin, but `K` and `T` may take any
    /// nonzero sign.
    CustomPolynomial,
}

/// Yaw dynamics parameters. `b = K/T` is always derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlantModel {
    kind: PlantKind,
    gain: f64,
    time_constant: f64,
    /// `[n0, n1, n2, n3]`
    coeffs: [f64; 4],
}

impl PlantModel {
    pub fn nomoto(gain: f64, time_constant: f64) -> Result<Self, ConfigError> {
        Self::build(PlantKind::Nomoto, gain, time_constant, [0.0, 1.0, 0.0, 0.0])
    }

    pub fn norrbin(gain: f64, time_constant: f64, coeffs: [f64; 4]) -> Result<Self, ConfigError> {
        Self::build(PlantKind::Norrbin, gain, time_constant, coeffs)
    }

    pub fn custom_polynomial(gain: f64, time_constant: f64, coeffs: [f64; 4]) -> Result<Self, ConfigError> {
        Self::build(PlantKind::CustomPolynomial, gain, time_constant, coeffs)
    }

    /// Norrbin model identified for the ESSO OSAKA model ship
    /// (K = 0.21, T = 8.8, n₁ = 0.41, n₃ = 0.23).
    pub fn esso_osaka() -> Self {
        Self::norrbin(0.21, 8.8, [0.0, 0.41, 0.0, 0.23]).expect("valid built-in model")
    }

    fn build(kind: PlantKind, gain: f64, time_constant: f64, coeffs: [f64; 4]) -> Result<Self, ConfigError> {
        if !gain.is_finite() || gain == 0.0 {
            return Err(ConfigError::invalid("model.K", "must be finite and nonzero"));
        }
        if !time_constant.is_finite() || time_constant == 0.0 {
            return Err(ConfigError::invalid("model.T", "must be finite and nonzero"));
        }
        if kind != PlantKind::CustomPolynomial {
            if gain < 0.0 {
                return Err(ConfigError::invalid(
                    "model.K",
                    "must be > 0 (use custom-polynomial for other signs)",
                ));
            }
            if time_constant < 0.0 {
                return Err(ConfigError::invalid(
                    "model.T",
                    "must be > 0 (use custom-polynomial for other signs)",
                ));
            }
        }
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_finite() {
                return Err(ConfigError::invalid(
                    ["model.n0", "model.n1", "model.n2", "model.n3"][i],
                    "must be finite",
                ));
            }
        }
        Ok(Self { kind, gain, time_constant, coeffs })
    }

    pub fn kind(&self) -> PlantKind {
        self.kind
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    pub fn time_constant(&self) -> f64 {
        self.time_constant
    }

    pub fn coeffs(&self) -> [f64; 4] {
        self.coeffs
    }

    /// Input gain `b = K/T`.
    pub fn b(&self) -> f64 {
        self.gain / self.time_constant
    }

    /// Drift `f(r) = −H(r)/T`.
    pub fn eval_f(&self, r: f64) -> f64 {
        if self.kind == PlantKind::Nomoto {
            return -r / self.time_constant;
        }
        let [n0, n1, n2, n3] = self.coeffs;
        -(((n3 * r + n2) * r + n1) * r + n0) / self.time_constant
    }

    /// `df/dr = −(3n₃r² + 2n₂r + n₁)/T`.
    pub fn eval_df(&self, r: f64) -> f64 {
        let [_, n1, n2, n3] = self.coeffs;
        -((3.0 * n3 * r + 2.0 * n2) * r + n1) / self.time_constant
    }

    /// `d²f/dr² = −(6n₃r + 2n₂)/T`.
    pub fn eval_d2f(&self, r: f64) -> f64 {
        let [_, _, n2, n3] = self.coeffs;
        -(6.0 * n3 * r + 2.0 * n2) / self.time_constant
    }

    /// Yaw acceleration `f(r) + bδ`.
    pub fn eval_dynamics(&self, r: f64, delta: f64) -> f64 {
        if self.kind == PlantKind::Nomoto {
            return (-r + self.gain * delta) / self.time_constant;
        }
        self.eval_f(r) + self.b() * delta
    }
}

/// Heading and yaw rate.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ShipKinematicState {
    pub psi: f64,
    pub r: f64,
}

//! Target headings with analytic derivatives up to fourth order, and the
//! grid check of the necessary tracking conditions
//!
//! ```text
//! |(ṙᵈ − f(rᵈ)) / b|          ≤ M
//! |(r̈ᵈ − f'(rᵈ) ṙᵈ) / b|      ≤ R      with rᵈ = ψ̇ᵈ
//! ```
//!
//! Only closed-form references exist; there is deliberately no variant that
//! wraps sampled data, since the controller consumes `ψ⃜ᵈ`.

use serde::{Deserialize, Serialize};

use crate::cascade::ConstraintLimits;
use crate::error::ConfigError;
use crate::model::PlantModel;

/// `ψᵈ` and its first four time derivatives at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ReferenceSample {
    pub psi_d: f64,
    pub dpsi_d: f64,
    pub d2psi_d: f64,
    pub d3psi_d: f64,
    pub d4psi_d: f64,
}

impl ReferenceSample {
    pub fn as_array(&self) -> [f64; 5] {
        [self.psi_d, self.dpsi_d, self.d2psi_d, self.d3psi_d, self.d4psi_d]
    }
}

/// Smooth heading change `ψᵈ(t) = ½Ψ(1 + tanh((t − t₀)/d))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TanhReference {
    /// Final heading change Ψᵈ [deg].
    pub amplitude: f64,
    /// Center time t₀ [s].
    pub t_tanh: f64,
    /// Width d [s].
    pub d_tanh: f64,
}

impl TanhReference {
    /// Uses `t₀ = 5 + 0.3Ψ` and `d = 2.5 + 0.15Ψ`.
    pub fn with_defaults(amplitude: f64) -> Result<Self, ConfigError> {
        Self::new(amplitude, 5.0 + 0.3 * amplitude, 2.5 + 0.15 * amplitude)
    }

    pub fn new(amplitude: f64, t_tanh: f64, d_tanh: f64) -> Result<Self, ConfigError> {
        if !amplitude.is_finite() {
            return Err(ConfigError::invalid("reference.amplitude", "must be finite"));
        }
        if !t_tanh.is_finite() {
            return Err(ConfigError::invalid("reference.t_tanh", "must be finite"));
        }
        if !(d_tanh.is_finite() && d_tanh > 0.0) {
            return Err(ConfigError::invalid("reference.d_tanh", "must be finite and > 0"));
        }
        Ok(Self { amplitude, t_tanh, d_tanh })
    }

    pub fn sample(&self, t: f64) -> ReferenceSample {
        let u = (t - self.t_tanh) / self.d_tanh;
        let th = u.tanh();
        let th2 = th * th;
        let sech2 = 1.0 - th2;
        // dⁿ/duⁿ tanh u written as polynomials in tanh u
        let p1 = sech2;
        let p2 = -2.0 * th * sech2;
        let p3 = -2.0 + 8.0 * th2 - 6.0 * th2 * th2;
        let p4 = th * (16.0 - 40.0 * th2 + 24.0 * th2 * th2);
        let half = 0.5 * self.amplitude;
        let inv_d = 1.0 / self.d_tanh;
        ReferenceSample {
            psi_d: half * (1.0 + th),
            dpsi_d: half * p1 * inv_d,
            d2psi_d: half * p2 * inv_d.powi(2),
            d3psi_d: half * p3 * inv_d.powi(3),
            d4psi_d: half * p4 * inv_d.powi(4),
        }
    }
}

/// `ψᵈ(t) = offset + amplitude · sin(ωt + φ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SineReference {
    pub offset: f64,
    pub amplitude: f64,
    pub omega: f64,
    pub phase: f64,
}

impl SineReference {
    pub fn sample(&self, t: f64) -> ReferenceSample {
        let (s, c) = (self.omega * t + self.phase).sin_cos();
        let a = self.amplitude;
        let w = self.omega;
        ReferenceSample {
            psi_d: self.offset + a * s,
            dpsi_d: a * w * c,
            d2psi_d: -a * w.powi(2) * s,
            d3psi_d: -a * w.powi(3) * c,
            d4psi_d: a * w.powi(4) * s,
        }
    }
}

/// Heading reference as it appears in scenario files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reference {
    Tanh(TanhReference),
    Constant { value: f64 },
    Sine(SineReference),
}

impl Reference {
    pub fn tanh(amplitude: f64) -> Result<Self, ConfigError> {
        TanhReference::with_defaults(amplitude).map(Reference::Tanh)
    }

    pub fn constant(value: f64) -> Self {
        Reference::Constant { value }
    }

    pub fn sine(amplitude: f64, omega: f64) -> Self {
        Reference::Sine(SineReference { offset: 0.0, amplitude, omega, phase: 0.0 })
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        match self {
            Reference::Tanh(r) => TanhReference::new(r.amplitude, r.t_tanh, r.d_tanh).map(|_| ()),
            Reference::Constant { value } if !value.is_finite() => {
                Err(ConfigError::invalid("reference.value", "must be finite"))
            }
            Reference::Constant { .. } => Ok(()),
            Reference::Sine(s) => {
                let fields = [
                    ("reference.offset", s.offset),
                    ("reference.amplitude", s.amplitude),
                    ("reference.omega", s.omega),
                    ("reference.phase", s.phase),
                ];
                match fields.iter().find(|(_, v)| !v.is_finite()) {
                    Some((name, _)) => Err(ConfigError::invalid(*name, "must be finite")),
                    None => Ok(()),
                }
            }
        }
    }

    pub fn sample(&self, t: f64) -> ReferenceSample {
        match self {
            Reference::Tanh(r) => r.sample(t),
            Reference::Constant { value } => ReferenceSample { psi_d: *value, ..Default::default() },
            Reference::Sine(s) => s.sample(t),
        }
    }

    /// Same reference delayed by `shift` seconds, `ψᵈ(t − shift)`.
    pub fn shifted(&self, shift: f64) -> Self {
        match *self {
            Reference::Tanh(r) => Reference::Tanh(TanhReference { t_tanh: r.t_tanh + shift, ..r }),
            Reference::Constant { value } => Reference::Constant { value },
            Reference::Sine(s) => Reference::Sine(SineReference { phase: s.phase - s.omega * shift, ..s }),
        }
    }
}

/// Worst-case margins of the necessary tracking conditions on a time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub magnitude_ok: bool,
    pub rate_ok: bool,
    /// `M − sup|δᵈ|` [deg]; negative when violated.
    pub worst_margin_magnitude: f64,
    /// `R − sup|δ̇ᵈ|` [deg/s]; negative when violated.
    pub worst_margin_rate: f64,
    /// Times at which the magnitude and rate margins are smallest.
    pub worst_times: [f64; 2],
    pub first_magnitude_violation: Option<f64>,
    pub first_rate_violation: Option<f64>,
    pub magnitude_violation_samples: usize,
    pub rate_violation_samples: usize,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.magnitude_ok && self.rate_ok
    }
}

/// Rudder angle and rate an exact tracker would need at one instant.
pub fn required_rudder(model: &PlantModel, sample: &ReferenceSample) -> (f64, f64) {
    let b = model.b();
    let r_d = sample.dpsi_d;
    let delta = (sample.d2psi_d - model.eval_f(r_d)) / b;
    let delta_dot = (sample.d3psi_d - model.eval_df(r_d) * sample.d2psi_d) / b;
    (delta, delta_dot)
}

/// Evaluates both conditions at `t = 0, dt, …` up to and including `horizon`.
pub fn check_feasibility(
    reference: &Reference,
    model: &PlantModel,
    limits: &ConstraintLimits,
    horizon: f64,
    sample_dt: f64,
) -> Result<FeasibilityReport, ConfigError> {
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(ConfigError::invalid("horizon", "must be finite and > 0"));
    }
    if !(sample_dt.is_finite() && sample_dt > 0.0) {
        return Err(ConfigError::invalid("sample_dt", "must be finite and > 0"));
    }
    let steps = (horizon / sample_dt).round() as usize;

    let mut worst_mag = (f64::NEG_INFINITY, 0.0);
    let mut worst_rate = (f64::NEG_INFINITY, 0.0);
    let mut first_mag = None;
    let mut first_rate = None;
    let mut mag_count = 0;
    let mut rate_count = 0;

    for k in 0..=steps {
        let t = k as f64 * sample_dt;
        let (delta, delta_dot) = required_rudder(model, &reference.sample(t));
        let (mag, rate) = (delta.abs(), delta_dot.abs());
        if mag > worst_mag.0 {
            worst_mag = (mag, t);
        }
        if rate > worst_rate.0 {
            worst_rate = (rate, t);
        }
        if mag > limits.max_angle {
            mag_count += 1;
            first_mag.get_or_insert(t);
        }
        if rate > limits.max_rate {
            rate_count += 1;
            first_rate.get_or_insert(t);
        }
    }

    Ok(FeasibilityReport {
        magnitude_ok: mag_count == 0,
        rate_ok: rate_count == 0,
        worst_margin_magnitude: limits.max_angle - worst_mag.0,
        worst_margin_rate: limits.max_rate - worst_rate.0,
        worst_times: [worst_mag.1, worst_rate.1],
        first_magnitude_violation: first_mag,
        first_rate_violation: first_rate,
        magnitude_violation_samples: mag_count,
        rate_violation_samples: rate_count,
    })
}

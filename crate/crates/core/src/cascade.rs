//! The tanh auxiliary actuator cascade.
//!
//! The rudder is parameterised as `δ = M tanh(k_δ δ̃)` and the auxiliary rate
//! `ξ = δ̃̇` as `ξ = B(δ) tanh(k_ξ ξ̃)` with `B(δ) = MR / (k_δ(M² − δ²))`.
//! Differentiating both maps gives the last two rows of the strict-feedback
//! system
//!
//! ```text
//! δ̇ = g_δ(δ) ξ
//! ξ̇ = f_ξ(δ, ξ) + g_ξ(δ, ξ) η
//! ```
//!
//! in which `|δ| < M` and `|δ̇| < R` hold as long as `g_δ` and `g_ξ` stay
//! positive. Only `(δ, ξ)` are integrated; `δ̃`, `ξ̃` are recovered on demand.
//!
//! Both gains vanish at the constraint boundaries, so every evaluation is
//! gated by [`GuardMargins`]: a state closer than `eps` (as a fraction of the
//! bound) to either boundary is rejected with a [`BoundaryViolation`].

use serde::{Deserialize, Serialize};

use crate::error::{BoundaryKind, BoundaryViolation, ConfigError};
use crate::model::PlantModel;
use crate::state::FullState;

/// Rudder angle limit `M` [deg] and rudder rate limit `R` [deg/s].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConstraintLimits {
    #[serde(rename = "M")]
    pub max_angle: f64,
    #[serde(rename = "R")]
    pub max_rate: f64,
}

impl ConstraintLimits {
    pub fn new(max_angle: f64, max_rate: f64) -> Result<Self, ConfigError> {
        let limits = Self { max_angle, max_rate };
        limits.validate()?;
        Ok(limits)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.max_angle.is_finite() && self.max_angle > 0.0) {
            return Err(ConfigError::invalid("limits.M", "must be finite and > 0"));
        }
        if !(self.max_rate.is_finite() && self.max_rate > 0.0) {
            return Err(ConfigError::invalid("limits.R", "must be finite and > 0"));
        }
        Ok(())
    }
}

impl Default for ConstraintLimits {
    /// 35 deg and 20 deg/s.
    fn default() -> Self {
        Self { max_angle: 35.0, max_rate: 20.0 }
    }
}

/// Steepness of the two tanh maps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CascadeGains {
    pub k_delta: f64,
    pub k_xi: f64,
}

impl CascadeGains {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.k_delta.is_finite() && self.k_delta > 0.0) {
            return Err(ConfigError::invalid("cascade.k_delta", "must be finite and > 0"));
        }
        if !(self.k_xi.is_finite() && self.k_xi > 0.0) {
            return Err(ConfigError::invalid("cascade.k_xi", "must be finite and > 0"));
        }
        Ok(())
    }
}

impl Default for CascadeGains {
    fn default() -> Self {
        Self { k_delta: 1.0, k_xi: 1.0 }
    }
}

/// Relative distance from each boundary below which the state is rejected.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GuardMargins {
    pub eps_delta: f64,
    pub eps_xi: f64,
}

impl GuardMargins {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let open_unit = |v: f64| v > 0.0 && v < 1.0;
        if !open_unit(self.eps_delta) {
            return Err(ConfigError::invalid("guards.eps_delta", "must lie in (0, 1)"));
        }
        if !open_unit(self.eps_xi) {
            return Err(ConfigError::invalid("guards.eps_xi", "must lie in (0, 1)"));
        }
        Ok(())
    }
}

impl Default for GuardMargins {
    fn default() -> Self {
        Self { eps_delta: 1e-3, eps_xi: 1e-3 }
    }
}

/// Rudder angle and auxiliary rate state.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ActuatorAuxState {
    pub delta: f64,
    pub xi: f64,
}

/// Remaining distance to each boundary as a fraction of the bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryMargins {
    /// `1 − |δ|/M`
    pub delta: f64,
    /// `1 − |ξ|/B(δ)`, NaN when `|δ| ≥ M`.
    pub xi: f64,
}

/// Evaluates the auxiliary cascade for fixed limits, gains and guards.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AuxSystem {
    pub limits: ConstraintLimits,
    pub gains: CascadeGains,
    pub guards: GuardMargins,
}

impl AuxSystem {
    pub fn new(
        limits: ConstraintLimits,
        gains: CascadeGains,
        guards: GuardMargins,
    ) -> Result<Self, ConfigError> {
        limits.validate()?;
        gains.validate()?;
        guards.validate()?;
        Ok(Self { limits, gains, guards })
    }

    fn m(&self) -> f64 {
        self.limits.max_angle
    }

    fn gap(&self, delta: f64) -> f64 {
        let m = self.m();
        m * m - delta * delta
    }

    pub fn margins(&self, delta: f64, xi: f64) -> BoundaryMargins {
        let delta_margin = 1.0 - delta.abs() / self.m();
        let xi_margin =
            if delta.abs() < self.m() { 1.0 - xi.abs() / self.xi_bound_unchecked(delta) } else { f64::NAN };
        BoundaryMargins { delta: delta_margin, xi: xi_margin }
    }

    fn check_delta(&self, delta: f64, xi: f64) -> Result<(), BoundaryViolation> {
        let margin = 1.0 - delta.abs() / self.m();
        // written as !(a > b) so NaN trips the guard
        if !(margin > self.guards.eps_delta) {
            return Err(BoundaryViolation { kind: BoundaryKind::Magnitude, delta, xi, margin });
        }
        Ok(())
    }

    fn check_xi(&self, delta: f64, xi: f64) -> Result<(), BoundaryViolation> {
        self.check_delta(delta, xi)?;
        let margin = 1.0 - xi.abs() / self.xi_bound_unchecked(delta);
        if !(margin > self.guards.eps_xi) {
            return Err(BoundaryViolation { kind: BoundaryKind::Rate, delta, xi, margin });
        }
        Ok(())
    }

    /// Checks both guards for `(δ, ξ)`.
    pub fn check(&self, delta: f64, xi: f64) -> Result<(), BoundaryViolation> {
        self.check_xi(delta, xi)
    }

    fn g_delta_unchecked(&self, delta: f64) -> f64 {
        self.gains.k_delta * self.gap(delta) / self.m()
    }

    fn xi_bound_unchecked(&self, delta: f64) -> f64 {
        self.m() * self.limits.max_rate / (self.gains.k_delta * self.gap(delta))
    }

    /// `g_δ(δ) = k_δ(M² − δ²)/M`, so that `δ̇ = g_δ ξ`.
    pub fn g_delta(&self, delta: f64) -> Result<f64, BoundaryViolation> {
        self.check_delta(delta, f64::NAN)?;
        Ok(self.g_delta_unchecked(delta))
    }

    /// `dg_δ/dδ = −2k_δδ/M`. Defined everywhere.
    pub fn d_g_delta(&self, delta: f64) -> f64 {
        -2.0 * self.gains.k_delta * delta / self.m()
    }

    /// Admissible `|ξ|` at the current rudder angle, `MR/(k_δ(M² − δ²))`.
    pub fn xi_bound(&self, delta: f64) -> Result<f64, BoundaryViolation> {
        self.check_delta(delta, f64::NAN)?;
        Ok(self.xi_bound_unchecked(delta))
    }

    /// `f_ξ(δ, ξ) = 2k_δδξ²/M`.
    pub fn f_xi(&self, delta: f64, xi: f64) -> Result<f64, BoundaryViolation> {
        self.check_xi(delta, xi)?;
        Ok(2.0 * self.gains.k_delta * delta * xi * xi / self.m())
    }

    /// `g_ξ(δ, ξ) = k_δk_ξ(M² − δ²)/(MR) · (B(δ)² − ξ²)`.
    pub fn g_xi(&self, delta: f64, xi: f64) -> Result<f64, BoundaryViolation> {
        self.check_xi(delta, xi)?;
        let bound = self.xi_bound_unchecked(delta);
        let scale =
            self.gains.k_delta * self.gains.k_xi * self.gap(delta) / (self.m() * self.limits.max_rate);
        Ok(scale * (bound * bound - xi * xi))
    }

    /// Rudder rate `δ̇ = g_δ ξ`.
    pub fn rudder_rate(&self, delta: f64, xi: f64) -> Result<f64, BoundaryViolation> {
        self.check_xi(delta, xi)?;
        Ok(self.g_delta_unchecked(delta) * xi)
    }

    /// Right-hand side of the full cascade `(ψ̇, ṙ, δ̇, ξ̇)` under input `η`.
    pub fn cascade_rhs(
        &self,
        model: &PlantModel,
        state: &FullState,
        eta: f64,
    ) -> Result<FullState, BoundaryViolation> {
        let FullState { psi: _, r, delta, xi } = *state;
        let delta_dot = self.rudder_rate(delta, xi)?;
        let xi_dot = self.f_xi(delta, xi)? + self.g_xi(delta, xi)? * eta;
        Ok(FullState { psi: r, r: model.eval_dynamics(r, delta), delta: delta_dot, xi: xi_dot })
    }

    /// `δ̃ = artanh(δ/M)/k_δ`.
    pub fn delta_tilde_from_delta(&self, delta: f64) -> Result<f64, BoundaryViolation> {
        let margin = 1.0 - delta.abs() / self.m();
        if !(margin > 0.0) {
            return Err(BoundaryViolation { kind: BoundaryKind::Magnitude, delta, xi: f64::NAN, margin });
        }
        Ok((delta / self.m()).atanh() / self.gains.k_delta)
    }

    /// `δ = M tanh(k_δ δ̃)`.
    pub fn delta_from_tilde(&self, delta_tilde: f64) -> f64 {
        self.m() * (self.gains.k_delta * delta_tilde).tanh()
    }

    /// `ξ̃ = artanh(ξ/B(δ))/k_ξ`.
    pub fn xi_tilde_from_xi(&self, delta: f64, xi: f64) -> Result<f64, BoundaryViolation> {
        self.delta_tilde_from_delta(delta)?;
        let bound = self.xi_bound_unchecked(delta);
        let margin = 1.0 - xi.abs() / bound;
        if !(margin > 0.0) {
            return Err(BoundaryViolation { kind: BoundaryKind::Rate, delta, xi, margin });
        }
        Ok((xi / bound).atanh() / self.gains.k_xi)
    }

    /// `ξ = B(δ) tanh(k_ξ ξ̃)`.
    pub fn xi_from_tilde(&self, delta: f64, xi_tilde: f64) -> f64 {
        self.xi_bound_unchecked(delta) * (self.gains.k_xi * xi_tilde).tanh()
    }
}

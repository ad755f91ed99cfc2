//! Backstepping control of the cascade `(ψ, r, δ, ξ)` and the conventional
//! two-state baseline.
//!
//! With error coordinates `z = (z₁, z₂, z₃, z₄)` the proposed input `η`
//! renders
//!
//! ```text
//! ż = (−C + S) z,   C = diag(c₁, c₂, c₃, c₄),   S skew with S₁₂ = S₂₃ = S₃₄ = 1
//! ```
//!
//! so `V = ½zᵀz` obeys `V̇ = −zᵀCz`.

use serde::{Deserialize, Serialize};

use crate::cascade::AuxSystem;
use crate::error::{BoundaryKind, BoundaryViolation, ConfigError};
use crate::model::{PlantModel, ShipKinematicState};
use crate::reference::ReferenceSample;
use crate::state::FullState;

/// Backstepping design parameters `c₁ … c₄`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BacksteppingGains {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

impl BacksteppingGains {
    pub fn new(c1: f64, c2: f64, c3: f64, c4: f64) -> Result<Self, ConfigError> {
        let gains = Self { c1, c2, c3, c4 };
        gains.validate()?;
        Ok(gains)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, v) in
            [("gains.c1", self.c1), ("gains.c2", self.c2), ("gains.c3", self.c3), ("gains.c4", self.c4)]
        {
            if !(v.is_finite() && v > 0.0) {
                return Err(ConfigError::invalid(name, "must be finite and > 0"));
            }
        }
        Ok(())
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.c1, self.c2, self.c3, self.c4]
    }
}

impl Default for BacksteppingGains {
    fn default() -> Self {
        Self { c1: 1.0, c2: 1.0, c3: 1.0, c4: 1.0 }
    }
}

/// Backstepping error coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ErrorVector {
    pub z1: f64,
    pub z2: f64,
    pub z3: f64,
    pub z4: f64,
}

impl ErrorVector {
    pub fn as_array(&self) -> [f64; 4] {
        [self.z1, self.z2, self.z3, self.z4]
    }

    pub fn from_array(z: [f64; 4]) -> Self {
        Self { z1: z[0], z2: z[1], z3: z[2], z4: z[3] }
    }
}

/// `V(z) = ½zᵀz`.
pub fn lyapunov_value(z: &ErrorVector) -> f64 {
    0.5 * z.as_array().iter().map(|v| v * v).sum::<f64>()
}

/// Skew coupling `S` of the closed-loop error system.
pub fn coupling_matrix() -> [[f64; 4]; 4] {
    [[0.0, 1.0, 0.0, 0.0], [-1.0, 0.0, 1.0, 0.0], [0.0, -1.0, 0.0, 1.0], [0.0, 0.0, -1.0, 0.0]]
}

/// `A = −C + S`.
pub fn closed_loop_matrix(gains: &BacksteppingGains) -> [[f64; 4]; 4] {
    let mut a = coupling_matrix();
    for (i, c) in gains.as_array().iter().enumerate() {
        a[i][i] -= c;
    }
    a
}

/// Intermediate quantities shared by [`ProposedController::error_vector`]
/// and [`ProposedController::control`].
#[derive(Debug, Clone, Copy)]
struct Terms {
    /// `r − ψ̇ᵈ`
    rate_err: f64,
    /// `f + bδ`
    accel: f64,
    /// `f + bδ − ψ̈ᵈ`
    accel_err: f64,
    /// `f'(f + bδ) + b g_δ ξ`, the yaw jerk `r̈`
    jerk: f64,
    g_delta: f64,
    z: ErrorVector,
}

/// The tanh-cascade backstepping law `η = α_η(ψ, r, δ, ξ, ψᵈ, …, ψ⃜ᵈ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProposedController {
    pub model: PlantModel,
    pub aux: AuxSystem,
    pub gains: BacksteppingGains,
    /// Largest admissible `|1/(b g_δ g_ξ)|` and `|η|`.
    pub eta_cap: f64,
}

impl ProposedController {
    pub const DEFAULT_ETA_CAP: f64 = 1e9;

    pub fn new(model: PlantModel, aux: AuxSystem, gains: BacksteppingGains) -> Self {
        Self { model, aux, gains, eta_cap: Self::DEFAULT_ETA_CAP }
    }

    fn terms(&self, x: &FullState, rf: &ReferenceSample) -> Result<Terms, BoundaryViolation> {
        let BacksteppingGains { c1, c2, c3, .. } = self.gains;
        self.aux.check(x.delta, x.xi)?;
        let g_delta = self.aux.g_delta(x.delta)?;
        let b = self.model.b();

        let heading_err = x.psi - rf.psi_d;
        let rate_err = x.r - rf.dpsi_d;
        let accel = self.model.eval_dynamics(x.r, x.delta);
        let accel_err = accel - rf.d2psi_d;
        let jerk = self.model.eval_df(x.r) * accel + b * g_delta * x.xi;

        // recursive definitions: z_{i+1} = (ż_i without z_{i+1}) + c_i z_i + z_{i-1}
        let z1 = heading_err;
        let z2 = c1 * z1 + rate_err;
        let z3 = accel_err + c1 * rate_err + c2 * z2 + z1;
        let z4 = (jerk - rf.d3psi_d) + (c1 * c2 + 1.0) * rate_err + (c1 + c2) * accel_err + c3 * z3 + z2;

        Ok(Terms { rate_err, accel, accel_err, jerk, g_delta, z: ErrorVector { z1, z2, z3, z4 } })
    }

    /// Error coordinates `z₁ … z₄` of the current state against the reference.
    pub fn error_vector(
        &self,
        state: &FullState,
        reference: &ReferenceSample,
    ) -> Result<ErrorVector, BoundaryViolation> {
        self.terms(state, reference).map(|t| t.z)
    }

    /// Control input `η` together with the error coordinates it was built from.
    pub fn control(
        &self,
        state: &FullState,
        reference: &ReferenceSample,
    ) -> Result<(f64, ErrorVector), BoundaryViolation> {
        let BacksteppingGains { c1, c2, c3, c4 } = self.gains;
        let t = self.terms(state, reference)?;
        let b = self.model.b();
        let (delta, xi) = (state.delta, state.xi);
        let g_xi = self.aux.g_xi(delta, xi)?;
        let f_xi = self.aux.f_xi(delta, xi)?;
        let df = self.model.eval_df(state.r);
        let d2f = self.model.eval_d2f(state.r);

        // ż₄ with the η term removed
        let drift = (c1 + c3 + c1 * c2 * c3) * t.rate_err
            + (c1 * c2 + c2 * c3 + c3 * c1 + 2.0) * t.accel_err
            + (c1 + c2 + c3) * (t.jerk - reference.d3psi_d)
            + d2f * t.accel * t.accel
            + df * t.jerk
            + b * (self.aux.d_g_delta(delta) * t.g_delta * xi * xi + t.g_delta * f_xi)
            - reference.d4psi_d;

        let input_gain = b * t.g_delta * g_xi;
        let inv_gain = 1.0 / input_gain;
        let cap_violation =
            |margin: f64| BoundaryViolation { kind: BoundaryKind::ControlCap, delta, xi, margin };
        if !(inv_gain.abs() <= self.eta_cap) {
            return Err(cap_violation(1.0 - inv_gain.abs() / self.eta_cap));
        }
        let eta = (-c4 * t.z.z4 - t.z.z3 - drift) * inv_gain;
        if !(eta.abs() <= self.eta_cap) {
            return Err(cap_violation(1.0 - eta.abs() / self.eta_cap));
        }
        Ok((eta, t.z))
    }
}

/// Conventional backstepping law on `(ψ, r)` that commands `δ` directly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConventionalController {
    pub model: PlantModel,
    pub c1: f64,
    pub c2: f64,
}

impl ConventionalController {
    pub fn new(model: PlantModel, gains: &BacksteppingGains) -> Self {
        Self { model, c1: gains.c1, c2: gains.c2 }
    }

    /// `(e_ψ, e_r)` with `e_r = c₁e_ψ + r − ψ̇ᵈ`.
    pub fn errors(&self, state: &ShipKinematicState, rf: &ReferenceSample) -> (f64, f64) {
        let e_psi = state.psi - rf.psi_d;
        (e_psi, self.c1 * e_psi + (state.r - rf.dpsi_d))
    }

    /// Unconstrained rudder command
    /// `α_δ = (1/b)[−c₂e_r − e_ψ − {f(r) + c₁(r − ψ̇ᵈ) − ψ̈ᵈ}]`.
    ///
    /// The closed loop then satisfies `ė_r = −c₂e_r − e_ψ`.
    pub fn command(&self, state: &ShipKinematicState, rf: &ReferenceSample) -> f64 {
        let (e_psi, e_r) = self.errors(state, rf);
        let feedforward = self.model.eval_f(state.r) + self.c1 * (state.r - rf.dpsi_d) - rf.d2psi_d;
        (-self.c2 * e_r - e_psi - feedforward) / self.model.b()
    }
}

/// `sat(s, s̄)`: identity on `[−s̄, s̄]`, `sgn(s)·s̄` outside.
pub fn saturate_command(value: f64, limit: f64) -> f64 {
    if value.abs() <= limit {
        value
    } else {
        value.signum() * limit
    }
}

/// Discrete rate limiter: moves from `prev` toward `commanded` by at most `R·dt`.
pub fn rate_limit(prev: f64, commanded: f64, max_rate: f64, dt: f64) -> f64 {
    prev + saturate_command((commanded - prev) / dt, max_rate) * dt
}

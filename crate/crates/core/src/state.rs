use serde::{Deserialize, Serialize};

use crate::model::ShipKinematicState;

/// Cascade state `(ψ, r, δ, ξ)`. The same type carries time derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FullState {
    pub psi: f64,
    pub r: f64,
    pub delta: f64,
    pub xi: f64,
}

impl FullState {
    pub const PSI: usize = 0;
    pub const R: usize = 1;
    pub const DELTA: usize = 2;
    pub const XI: usize = 3;

    pub fn new(psi: f64, r: f64, delta: f64, xi: f64) -> Self {
        Self { psi, r, delta, xi }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.psi, self.r, self.delta, self.xi]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self { psi: a[0], r: a[1], delta: a[2], xi: a[3] }
    }

    pub fn kinematic(&self) -> ShipKinematicState {
        ShipKinematicState { psi: self.psi, r: self.r }
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }
}

//! Heading tracking for a ship whose rudder is limited in both angle and
//! rate.
//!
//! The rudder is reparameterised through two nested tanh maps so that the
//! constraints hold by construction, which turns the plant into an
//! unconstrained strict-feedback cascade `(ψ, r, δ, ξ)` with input `η`. A
//! four-step backstepping law then makes the error coordinates obey
//! `ż = (−C + S)z`, giving `V̇ = −zᵀCz` for `V = ½zᵀz`.
//!
//! Modules:
//!
//! - [`model`]: yaw dynamics `ṙ = f(r) + bδ` (Nomoto, Norrbin).
//! - [`cascade`]: `g_δ`, `f_ξ`, `g_ξ`, boundary guards and the cascade
//!   right-hand side.
//! - [`controller`]: error coordinates, the cascade law `α_η`, the
//!   conventional baseline `α_δ` and saturation helpers.
//! - [`reference`]: analytic target headings and the feasibility check.
//! - [`sim`], [`integrate`], [`metrics`]: fixed-step closed-loop runs.
//! - [`telemetry`]: CSV and plot-data export.
//!
//! Units are degrees and seconds throughout.
//!
//! ```
//! use steering_core::{run_scenario, ScenarioConfig};
//!
//! let config = ScenarioConfig { horizon: 30.0, ..ScenarioConfig::case1(10.0) };
//! let traj = run_scenario(&config).unwrap();
//! assert!(traj.termination.is_completed());
//! assert!(traj.records.iter().all(|r| r.state.delta.abs() < 35.0 && r.delta_dot.abs() < 20.0));
//! ```

// Range checks are written `!(x > lo)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cascade;
pub mod controller;
pub mod error;
pub mod integrate;
pub mod metrics;
pub mod model;
pub mod reference;
pub mod sim;
pub mod state;
pub mod telemetry;

pub use cascade::{AuxSystem, CascadeGains, ConstraintLimits, GuardMargins};
pub use controller::{BacksteppingGains, ConventionalController, ErrorVector, ProposedController};
pub use error::{BoundaryKind, BoundaryViolation, ConfigError};
pub use model::{PlantKind, PlantModel};
pub use reference::{check_feasibility, FeasibilityReport, Reference, ReferenceSample};
pub use sim::{run_scenario, ControllerKind, ScenarioConfig, Termination, Trajectory};
pub use state::FullState;

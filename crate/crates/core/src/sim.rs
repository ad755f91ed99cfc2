//! Closed-loop scenario runner.
//!
//! A run samples the reference, evaluates the selected controller, logs a
//! [`TelemetryRecord`] and takes one Euler (or Euler–Maruyama when
//! `sigma > 0`) step, for `t = 0, dt, …, horizon` inclusive. A guard trip or a
//! non-finite state ends the run early; the reason is kept in
//! [`Termination`] and the records logged so far are returned.

use serde::{Deserialize, Serialize};

use crate::cascade::{AuxSystem, BoundaryMargins, CascadeGains, ConstraintLimits, GuardMargins};
use crate::controller::{
    lyapunov_value, rate_limit, saturate_command, BacksteppingGains, ConventionalController, ErrorVector,
    ProposedController,
};
use crate::error::{BoundaryViolation, ConfigError};
use crate::integrate::{noise_rng, step_euler_maruyama};
use crate::model::{PlantKind, PlantModel};
use crate::reference::Reference;
use crate::state::FullState;

/// Controller driving the plant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ControllerKind {
    /// Tanh cascade with backstepping input `η`.
    Proposed,
    /// `δ = α_δ` with no constraints at all.
    Conventional,
    /// `α_δ` passed through magnitude and rate saturation.
    ConventionalSaturated,
    /// `α_δ` fed to a first-order rudder servo, then clipped.
    ConventionalServo,
}

/// Plant parameters as written in scenario files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub kind: PlantKind,
    #[serde(rename = "K")]
    pub gain: f64,
    #[serde(rename = "T")]
    pub time_constant: f64,
    #[serde(default)]
    pub n0: f64,
    #[serde(default)]
    pub n1: f64,
    #[serde(default)]
    pub n2: f64,
    #[serde(default)]
    pub n3: f64,
}

impl ModelConfig {
    pub fn build(&self) -> Result<PlantModel, ConfigError> {
        let coeffs = [self.n0, self.n1, self.n2, self.n3];
        match self.kind {
            PlantKind::Nomoto => PlantModel::nomoto(self.gain, self.time_constant),
            PlantKind::Norrbin => PlantModel::norrbin(self.gain, self.time_constant, coeffs),
            PlantKind::CustomPolynomial => {
                PlantModel::custom_polynomial(self.gain, self.time_constant, coeffs)
            }
        }
    }
}

impl From<&PlantModel> for ModelConfig {
    fn from(m: &PlantModel) -> Self {
        let [n0, n1, n2, n3] = m.coeffs();
        Self { kind: m.kind(), gain: m.gain(), time_constant: m.time_constant(), n0, n1, n2, n3 }
    }
}

/// Guard margins plus the output cap on `η`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GuardConfig {
    pub eps_delta: f64,
    pub eps_xi: f64,
    pub eta_cap: f64,
}

impl Default for GuardConfig {
    fn default() -> Self {
        let m = GuardMargins::default();
        Self { eps_delta: m.eps_delta, eps_xi: m.eps_xi, eta_cap: ProposedController::DEFAULT_ETA_CAP }
    }
}

/// First-order rudder servo `δ̇ = (K_R δ_c − δ)/T_R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServoParams {
    #[serde(rename = "T_R")]
    pub time_constant: f64,
    #[serde(rename = "K_R")]
    pub gain: f64,
}

impl ServoParams {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.time_constant.is_finite() && self.time_constant > 0.0) {
            return Err(ConfigError::invalid("servo.T_R", "must be finite and > 0"));
        }
        if !(self.gain.is_finite() && self.gain > 0.0) {
            return Err(ConfigError::invalid("servo.K_R", "must be finite and > 0"));
        }
        Ok(())
    }
}

/// One Euler step of the servo followed by the magnitude clip to `M` and the
/// rate clip to `R`.
pub fn servo_actuator_step(
    delta: f64,
    delta_cmd: f64,
    servo: &ServoParams,
    limits: &ConstraintLimits,
    dt: f64,
) -> f64 {
    let raw = delta + dt * (servo.gain * delta_cmd - delta) / servo.time_constant;
    let clipped = saturate_command(raw, limits.max_angle);
    rate_limit(delta, clipped, limits.max_rate, dt)
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub controller: ControllerKind,
    /// Step size [s].
    pub dt: f64,
    /// Final time [s]; the run logs `round(horizon/dt) + 1` records.
    pub horizon: f64,
    /// Diffusion on the yaw-rate equation [deg/s per √s].
    #[serde(default)]
    pub sigma: f64,
    #[serde(default)]
    pub seed: u64,
    pub model: ModelConfig,
    #[serde(default)]
    pub limits: ConstraintLimits,
    #[serde(default)]
    pub cascade: CascadeGains,
    #[serde(default)]
    pub gains: BacksteppingGains,
    #[serde(default)]
    pub guards: GuardConfig,
    pub reference: Reference,
    #[serde(default)]
    pub initial: FullState,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub servo: Option<ServoParams>,
}

impl ScenarioConfig {
    /// Tanh heading change of `amplitude` degrees with default timing, the
    /// ESSO OSAKA model, 35 deg / 20 deg/s limits, unit gains and
    /// `dt = 0.01` over 100 s from rest.
    pub fn case1(amplitude: f64) -> Self {
        Self {
            name: format!("case1_psi{amplitude}"),
            controller: ControllerKind::Proposed,
            dt: 0.01,
            horizon: 100.0,
            sigma: 0.0,
            seed: 0,
            model: ModelConfig::from(&PlantModel::esso_osaka()),
            limits: ConstraintLimits::default(),
            cascade: CascadeGains::default(),
            gains: BacksteppingGains::default(),
            guards: GuardConfig::default(),
            reference: Reference::tanh(amplitude).expect("finite amplitude"),
            initial: FullState::default(),
            servo: None,
        }
    }

    /// Course keeping at `ψᵈ ≡ 0` with `σ = bM`.
    pub fn case2() -> Self {
        let model = PlantModel::esso_osaka();
        let limits = ConstraintLimits::default();
        Self {
            name: "case2".into(),
            sigma: model.b() * limits.max_angle,
            seed: 0,
            reference: Reference::constant(0.0),
            ..Self::case1(10.0)
        }
    }

    /// Course keeping from a 0.5 deg heading offset, no noise.
    pub fn course_offset() -> Self {
        Self {
            name: "course_offset".into(),
            reference: Reference::constant(0.0),
            initial: FullState::new(0.5, 0.0, 0.0, 0.0),
            horizon: 40.0,
            ..Self::case1(10.0)
        }
    }

    /// Conventional law with saturation wrappers on a 50 deg step.
    pub fn degradation() -> Self {
        Self {
            name: "degradation".into(),
            controller: ControllerKind::ConventionalSaturated,
            reference: Reference::constant(50.0),
            ..Self::case1(50.0)
        }
    }

    /// Conventional law through a unit first-order servo on a 50 deg step.
    pub fn conventional_servo() -> Self {
        Self {
            name: "conventional_servo".into(),
            controller: ControllerKind::ConventionalServo,
            servo: Some(ServoParams { time_constant: 1.0, gain: 1.0 }),
            ..Self::degradation()
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(ConfigError::invalid("dt", "must be finite and > 0"));
        }
        if !(self.horizon.is_finite() && self.horizon >= self.dt) {
            return Err(ConfigError::invalid("horizon", "must be finite and >= dt"));
        }
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(ConfigError::invalid("sigma", "must be finite and >= 0"));
        }
        self.model.build()?;
        self.limits.validate()?;
        self.cascade.validate()?;
        self.gains.validate()?;
        self.guard_margins().validate()?;
        if !(self.guards.eta_cap > 0.0) {
            return Err(ConfigError::invalid("guards.eta_cap", "must be > 0"));
        }
        self.reference.validate()?;
        if !self.initial.is_finite() {
            return Err(ConfigError::invalid("initial", "all components must be finite"));
        }
        match (self.controller, &self.servo) {
            (ControllerKind::ConventionalServo, None) => {
                return Err(ConfigError::invalid("servo", "required for conventional-servo"))
            }
            (ControllerKind::ConventionalServo, Some(s)) => s.validate()?,
            _ => {}
        }
        if self.controller == ControllerKind::Proposed {
            let aux = self.aux_system()?;
            aux.check(self.initial.delta, self.initial.xi)
                .map_err(|v| ConfigError::invalid("initial", format!("outside the guarded region: {v}")))?;
        }
        Ok(())
    }

    fn guard_margins(&self) -> GuardMargins {
        GuardMargins { eps_delta: self.guards.eps_delta, eps_xi: self.guards.eps_xi }
    }

    pub fn aux_system(&self) -> Result<AuxSystem, ConfigError> {
        AuxSystem::new(self.limits, self.cascade, self.guard_margins())
    }

    pub fn steps(&self) -> usize {
        (self.horizon / self.dt).round() as usize
    }
}

/// One logged time step.
///
/// For the conventional controllers `eta` holds the commanded rudder angle
/// `α_δ`, `xi`, `z3` and `z4` are zero and `v` is `½(e_ψ² + e_r²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TelemetryRecord {
    pub t: f64,
    pub state: FullState,
    pub psi_d: f64,
    pub eta: f64,
    pub delta_dot: f64,
    pub z: ErrorVector,
    pub v: f64,
    pub margins: BoundaryMargins,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Termination {
    Completed,
    GuardViolation { t: f64, violation: BoundaryViolation },
    NumericFailure { t: f64 },
}

impl Termination {
    pub fn is_completed(&self) -> bool {
        matches!(self, Termination::Completed)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Termination::Completed => "completed",
            Termination::GuardViolation { .. } => "guard_violation",
            Termination::NumericFailure { .. } => "numeric_failure",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub dt: f64,
    pub records: Vec<TelemetryRecord>,
    pub termination: Termination,
}

enum StepOutcome {
    Next(FullState),
    Stop(Termination),
}

/// Runs a scenario to completion or to the first guard or numeric failure.
pub fn run_scenario(config: &ScenarioConfig) -> Result<Trajectory, ConfigError> {
    config.validate()?;
    let model = config.model.build()?;
    let aux = config.aux_system()?;
    let proposed = ProposedController {
        eta_cap: config.guards.eta_cap,
        ..ProposedController::new(model, aux, config.gains)
    };
    let conventional = ConventionalController::new(model, &config.gains);
    let mut rng = noise_rng(config.seed);

    let steps = config.steps();
    let dt = config.dt;
    let mut records = Vec::with_capacity(steps + 1);
    let mut x = config.initial;
    let mut termination = Termination::Completed;

    for k in 0..=steps {
        let t = k as f64 * dt;
        let rf = config.reference.sample(t);

        let (record, rhs) = match config.controller {
            ControllerKind::Proposed => {
                let evaluated = proposed
                    .control(&x, &rf)
                    .and_then(|(eta, z)| Ok((eta, z, aux.cascade_rhs(&model, &x, eta)?)));
                let (eta, z, rhs) = match evaluated {
                    Ok(v) => v,
                    Err(violation) => {
                        termination = Termination::GuardViolation { t, violation };
                        break;
                    }
                };
                let record = TelemetryRecord {
                    t,
                    state: x,
                    psi_d: rf.psi_d,
                    eta,
                    delta_dot: rhs.delta,
                    z,
                    v: lyapunov_value(&z),
                    margins: aux.margins(x.delta, x.xi),
                };
                (record, rhs)
            }
            kind => {
                let kin = x.kinematic();
                let command = conventional.command(&kin, &rf);
                let (e_psi, e_r) = conventional.errors(&kin, &rf);
                // rudder angle acting during this step, and the one after it
                let (applied, next_delta) = match kind {
                    ControllerKind::Conventional => (command, command),
                    ControllerKind::ConventionalSaturated => {
                        let target = saturate_command(command, config.limits.max_angle);
                        (x.delta, rate_limit(x.delta, target, config.limits.max_rate, dt))
                    }
                    ControllerKind::ConventionalServo => {
                        let servo = config.servo.as_ref().expect("validated");
                        (x.delta, servo_actuator_step(x.delta, command, servo, &config.limits, dt))
                    }
                    ControllerKind::Proposed => unreachable!(),
                };
                x.delta = applied;
                let delta_dot = (next_delta - applied) / dt;
                let z = ErrorVector { z1: e_psi, z2: e_r, z3: 0.0, z4: 0.0 };
                let record = TelemetryRecord {
                    t,
                    state: x,
                    psi_d: rf.psi_d,
                    eta: command,
                    delta_dot,
                    z,
                    v: lyapunov_value(&z),
                    margins: BoundaryMargins {
                        delta: 1.0 - applied.abs() / config.limits.max_angle,
                        xi: f64::NAN,
                    },
                };
                let rhs =
                    FullState { psi: x.r, r: model.eval_dynamics(x.r, applied), delta: delta_dot, xi: 0.0 };
                (record, rhs)
            }
        };

        if !(record.eta.is_finite() && record.v.is_finite()) {
            termination = Termination::NumericFailure { t };
            break;
        }
        records.push(record);
        if k == steps {
            break;
        }

        match advance(&x, rhs, dt, config.sigma, &mut rng, t + dt) {
            StepOutcome::Next(next) => x = next,
            StepOutcome::Stop(stop) => {
                termination = stop;
                break;
            }
        }
    }

    Ok(Trajectory { dt, records, termination })
}

fn advance(
    x: &FullState,
    rhs: FullState,
    dt: f64,
    sigma: f64,
    rng: &mut crate::integrate::NoiseRng,
    t_next: f64,
) -> StepOutcome {
    let next = step_euler_maruyama(
        |_| Ok::<_, std::convert::Infallible>(rhs.to_array()),
        &x.to_array(),
        dt,
        sigma,
        FullState::R,
        rng,
    )
    .map(FullState::from_array);
    match next {
        Ok(next) if next.is_finite() => StepOutcome::Next(next),
        _ => StepOutcome::Stop(Termination::NumericFailure { t: t_next }),
    }
}

//! Independent re-derivation of the error coordinates, their fourth
//! derivative and the control input, written in the fully expanded
//! coefficient form. Shares nothing with the library except the plant's
//! `f`, `f'`, `f''` (checked separately against finite differences).

#![allow(dead_code)]

use steering_core::controller::BacksteppingGains;
use steering_core::{FullState, PlantModel, ReferenceSample};

#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub m: f64,
    pub r: f64,
    pub k_delta: f64,
    pub k_xi: f64,
}

impl Default for Limits {
    fn default() -> Self {
        Self { m: 35.0, r: 20.0, k_delta: 1.0, k_xi: 1.0 }
    }
}

impl Limits {
    pub fn g_delta(&self, d: f64) -> f64 {
        self.k_delta * (self.m * self.m - d * d) / self.m
    }
    pub fn dg_delta(&self, d: f64) -> f64 {
        -2.0 * self.k_delta * d / self.m
    }
    pub fn xi_bound(&self, d: f64) -> f64 {
        self.m * self.r / (self.k_delta * (self.m * self.m - d * d))
    }
    pub fn f_xi(&self, d: f64, xi: f64) -> f64 {
        2.0 * self.k_delta * d * xi * xi / self.m
    }
    pub fn g_xi(&self, d: f64, xi: f64) -> f64 {
        let bound = self.xi_bound(d);
        self.k_delta * self.k_xi * (self.m * self.m - d * d) / (self.m * self.r) * (bound * bound - xi * xi)
    }
}

pub struct Expanded {
    pub z: [f64; 4],
    /// ż₄ at the given η
    pub z4_dot: f64,
    /// Sum of magnitudes of the terms in ż₄ + c₄z₄ + z₃, for relative checks.
    pub scale: f64,
}

/// Expanded `z` and explicit `ż₄` for input `eta`.
pub fn expanded(
    model: &PlantModel,
    lim: &Limits,
    g: &BacksteppingGains,
    x: &FullState,
    rf: &ReferenceSample,
    eta: f64,
) -> Expanded {
    let BacksteppingGains { c1, c2, c3, c4 } = *g;
    let b = model.b();
    let (f, df, d2f) = (model.eval_f(x.r), model.eval_df(x.r), model.eval_d2f(x.r));
    let gd = lim.g_delta(x.delta);
    let e = x.psi - rf.psi_d;
    let er = x.r - rf.dpsi_d;
    let a = f + b * x.delta;
    let ea = a - rf.d2psi_d;
    let j = df * a + b * gd * x.xi;

    let z1 = e;
    let z2 = c1 * e + er;
    let z3 = (c1 * c2 + 1.0) * e + (c1 + c2) * er + ea;
    let z4 =
        (c1 + c3 + c1 * c2 * c3) * e + (c1 * c2 + c2 * c3 + c3 * c1 + 2.0) * er + (c1 + c2 + c3) * ea + j
            - rf.d3psi_d;

    let terms = [
        (c1 + c3 + c1 * c2 * c3) * er,
        (c1 * c2 + c2 * c3 + c3 * c1 + 2.0) * ea,
        (c1 + c2 + c3) * (j - rf.d3psi_d),
        d2f * a * a,
        df * (df * a + b * gd * x.xi),
        b * lim.dg_delta(x.delta) * gd * x.xi * x.xi,
        b * gd * lim.f_xi(x.delta, x.xi),
        b * gd * lim.g_xi(x.delta, x.xi) * eta,
        -rf.d4psi_d,
    ];
    let z4_dot: f64 = terms.iter().sum();
    let scale = terms.iter().map(|t| t.abs()).sum::<f64>() + (c4 * z4).abs() + z3.abs();
    Expanded { z: [z1, z2, z3, z4], z4_dot, scale }
}

/// Control input from the fully expanded coefficient form.
pub fn expanded_eta(
    model: &PlantModel,
    lim: &Limits,
    g: &BacksteppingGains,
    x: &FullState,
    rf: &ReferenceSample,
) -> (f64, f64) {
    let BacksteppingGains { c1, c2, c3, c4 } = *g;
    let b = model.b();
    let (f, df, d2f) = (model.eval_f(x.r), model.eval_df(x.r), model.eval_d2f(x.r));
    let gd = lim.g_delta(x.delta);
    let gx = lim.g_xi(x.delta, x.xi);
    let e = x.psi - rf.psi_d;
    let er = x.r - rf.dpsi_d;
    let a = f + b * x.delta;
    let ea = a - rf.d2psi_d;
    let j = df * a + b * gd * x.xi;

    let terms = [
        -(c1 * c2 + c3 * c4 + c4 * c1 + c1 * c2 * c3 * c4 + 1.0) * e,
        -(2.0 * c1 + c2 + c3 + 2.0 * c4 + c1 * c2 * c3 + c4 * c1 * c2 + c3 * c4 * c1 + c2 * c3 * c4) * er,
        -(c1 * c2 + c1 * c3 + c1 * c4 + c2 * c3 + c2 * c4 + c3 * c4 + 3.0) * ea,
        -(c1 + c2 + c3 + c4) * (j - rf.d3psi_d),
        -(d2f * a * a
            + df * j
            + b * (lim.dg_delta(x.delta) * gd * x.xi * x.xi + gd * lim.f_xi(x.delta, x.xi))
            - rf.d4psi_d),
    ];
    let gain = b * gd * gx;
    let eta = terms.iter().sum::<f64>() / gain;
    let scale = terms.iter().map(|t| t.abs()).sum::<f64>() / gain.abs();
    (eta, scale)
}

/// Deterministic xorshift for sampling test states without extra deps.
pub struct Sampler(u64);

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self(seed.max(1))
    }
    pub fn unit(&mut self) -> f64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }
}

/// Random state strictly inside 95% of both bounds and a random reference.
pub fn random_admissible(s: &mut Sampler, lim: &Limits) -> (FullState, ReferenceSample) {
    let delta = s.range(-0.95, 0.95) * lim.m;
    let xi = s.range(-0.95, 0.95) * lim.xi_bound(delta);
    let x = FullState::new(s.range(-60.0, 60.0), s.range(-5.0, 5.0), delta, xi);
    let rf = ReferenceSample {
        psi_d: s.range(-60.0, 60.0),
        dpsi_d: s.range(-5.0, 5.0),
        d2psi_d: s.range(-1.0, 1.0),
        d3psi_d: s.range(-1.0, 1.0),
        d4psi_d: s.range(-1.0, 1.0),
    };
    (x, rf)
}

/// Max over time of `‖Δz/dt − (−C+S)z‖∞`, divided by the max of
/// `‖(−C+S)z‖∞`.
pub fn z_dynamics_residual(z: &[[f64; 4]], a: &[[f64; 4]; 4], dt: f64) -> f64 {
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for w in z.windows(2) {
        for i in 0..4 {
            let pred: f64 = (0..4).map(|j| a[i][j] * w[0][j]).sum();
            let fd = (w[1][i] - w[0][i]) / dt;
            worst = worst.max((fd - pred).abs());
            scale = scale.max(pred.abs());
        }
    }
    worst / scale
}

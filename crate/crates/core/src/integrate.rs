//! Fixed-step explicit integrators.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Noise generator used by every stochastic run: ChaCha with 8 rounds,
/// seeded through `SeedableRng::seed_from_u64`. Normal draws use
/// `rand_distr::StandardNormal` (ziggurat), so a seed reproduces the same
/// increments on every platform.
pub type NoiseRng = ChaCha8Rng;

pub fn noise_rng(seed: u64) -> NoiseRng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// `x + dt·f(x)`.
pub fn step_euler<const N: usize, E>(
    rhs: impl FnOnce(&[f64; N]) -> Result<[f64; N], E>,
    state: &[f64; N],
    dt: f64,
) -> Result<[f64; N], E> {
    let d = rhs(state)?;
    let mut next = *state;
    for (x, dx) in next.iter_mut().zip(d) {
        *x += dt * dx;
    }
    Ok(next)
}

/// Euler step plus additive noise `σ√dt·N(0,1)` on the single component
/// `channel`. No Wong–Zakai correction: the noise is additive.
pub fn step_euler_maruyama<const N: usize, E, G: Rng + ?Sized>(
    rhs: impl FnOnce(&[f64; N]) -> Result<[f64; N], E>,
    state: &[f64; N],
    dt: f64,
    sigma: f64,
    channel: usize,
    rng: &mut G,
) -> Result<[f64; N], E> {
    let mut next = step_euler(rhs, state, dt)?;
    if sigma != 0.0 {
        let w: f64 = rng.sample(StandardNormal);
        next[channel] += sigma * dt.sqrt() * w;
    }
    Ok(next)
}

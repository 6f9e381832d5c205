//! State generators: coherent states, Hermite functions and random
//! well-contained superpositions for randomized suites.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::fourier::hbar_fourier;
use crate::grid::{GridSpec, PhaseSpacePoint};
use crate::wavefunction::WaveFunction;

/// Coherent state `T(z0) xi0`, with `xi0(x) = (pi hbar)^(-1/4) exp(-x^2 / (2 hbar))`,
/// sampled from its closed form:
/// `exp((i/hbar)(p0 x - p0 x0 / 2)) xi0(x - x0)`.
pub fn gaussian_coherent(z0: PhaseSpacePoint, grid: GridSpec) -> Result<WaveFunction> {
    if !z0.is_finite() {
        return Err(Error::InvalidInput("non-finite coherent-state center".into()));
    }
    let hbar = grid.hbar();
    let amp = (PI * hbar).powf(-0.25);
    let psi = WaveFunction::from_fn(grid, |x| {
        let d = x - z0.x;
        C64::from_polar(amp * (-d * d / (2.0 * hbar)).exp(), (z0.p * x - 0.5 * z0.p * z0.x) / hbar)
    })?;
    psi.ensure_contained()?;
    Ok(psi)
}

/// The fiducial coherent state `xi0`.
pub fn fiducial(grid: GridSpec) -> Result<WaveFunction> {
    gaussian_coherent(PhaseSpacePoint::ORIGIN, grid)
}

/// Hermite function `h_n` with unit length scale `sqrt(hbar)` (the
/// eigenfunctions of `(x^2 + p^2)/2`).
pub fn hermite_basis(n: usize, grid: GridSpec) -> Result<WaveFunction> {
    hermite_function(n, grid.hbar().sqrt(), grid)
}

/// Hermite function of order `n` with length scale `ell`, generated by the
/// normalized three-term recurrence.
pub fn hermite_function(n: usize, ell: f64, grid: GridSpec) -> Result<WaveFunction> {
    if n > grid.len() / 8 {
        return Err(Error::InvalidInput(format!(
            "Hermite order {n} exceeds M/8 = {}",
            grid.len() / 8
        )));
    }
    if !(ell.is_finite() && ell > 0.0) {
        return Err(Error::InvalidInput(format!("length scale must be positive, got {ell}")));
    }
    let samples = grid
        .x_nodes()
        .into_iter()
        .map(|x| C64::new(hermite_value(n, x / ell) / ell.sqrt(), 0.0))
        .collect();
    let psi = WaveFunction::new(grid, samples)?;
    psi.ensure_contained()?;
    Ok(psi)
}

/// Normalized Hermite function `pi^(-1/4) H_n(u) exp(-u^2/2) / sqrt(2^n n!)`.
fn hermite_value(n: usize, u: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * u * u).exp();
    for k in 0..n {
        let next = (2.0 / (k as f64 + 1.0)).sqrt() * u * cur - (k as f64 / (k as f64 + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Position and momentum spreads `(dx, dp)` of a state.
pub fn spreads(psi: &WaveFunction) -> (f64, f64) {
    fn spread(w: &WaveFunction) -> f64 {
        let n = w.norm_sqr();
        let mean = w.position_moment(1) / n;
        let second = w.position_moment(2) / n;
        (second - mean * mean).max(0.0).sqrt()
    }
    (spread(psi), spread(&hbar_fourier(psi)))
}

/// Options for [`random_superposition`].
#[derive(Debug, Clone, Copy)]
pub struct RandomStateOptions {
    /// Maximum number of coherent components.
    pub max_components: usize,
    /// Centers are drawn uniformly from `[-r, r]^2`.
    pub center_radius: f64,
    /// Normalize the result.
    pub normalize: bool,
}

impl Default for RandomStateOptions {
    fn default() -> Self {
        Self { max_components: 3, center_radius: 1.5, normalize: true }
    }
}

/// Random superposition of coherent states with complex coefficients.
pub fn random_superposition<R: Rng + ?Sized>(
    rng: &mut R,
    grid: GridSpec,
    opts: RandomStateOptions,
) -> Result<WaveFunction> {
    let count = rng.random_range(1..=opts.max_components.max(1));
    let r = opts.center_radius;
    let mut acc = WaveFunction::zeros(grid);
    for _ in 0..count {
        let center = PhaseSpacePoint::new(rng.random_range(-r..=r), rng.random_range(-r..=r));
        let coeff = C64::from_polar(rng.random_range(0.3..1.0), rng.random_range(0.0..2.0 * PI));
        let term = gaussian_coherent(center, grid)?;
        acc = acc.combine(C64::new(1.0, 0.0), &term, coeff)?;
    }
    if opts.normalize {
        acc = acc.normalized()?;
    }
    Ok(acc)
}

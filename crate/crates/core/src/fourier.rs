//! The unitary hbar-Fourier transform and the FFT helpers built on it.
//!
//! `F psi(p) = (2 pi hbar)^(-1/2) sum_j exp(-i p x_j / hbar) psi(x_j) dx` on
//! the signed-index grids, so the transform matches the continuous one
//! (including the phase from the grid offset) and maps ascending position
//! samples to ascending momentum samples.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use crate::wavefunction::{Representation, WaveFunction};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Unnormalized forward DFT, `X_k = sum_n x_n exp(-2 pi i k n / N)`.
pub fn fft_forward(buf: &mut [C64]) {
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()));
    plan.process(buf);
}

/// Unnormalized inverse DFT, `x_n = sum_k X_k exp(+2 pi i k n / N)`.
pub fn fft_inverse(buf: &mut [C64]) {
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()));
    plan.process(buf);
}

fn alternate_signs(buf: &mut [C64]) {
    for c in buf.iter_mut().skip(1).step_by(2) {
        *c = -*c;
    }
}

/// Unitary hbar-Fourier transform; position samples map to momentum samples.
///
/// Applied to momentum samples it transforms them as functions on the dual
/// grid, so four applications return the input.
pub fn hbar_fourier(psi: &WaveFunction) -> WaveFunction {
    transform(psi, false)
}

/// Inverse of [`hbar_fourier`].
pub fn inverse_hbar_fourier(psi: &WaveFunction) -> WaveFunction {
    transform(psi, true)
}

fn transform(psi: &WaveFunction, inverse: bool) -> WaveFunction {
    let grid = *psi.grid();
    let scale = psi.spacing() / (2.0 * PI * grid.hbar()).sqrt();
    let mut buf = psi.samples().to_vec();
    alternate_signs(&mut buf);
    if inverse {
        fft_inverse(&mut buf);
    } else {
        fft_forward(&mut buf);
    }
    alternate_signs(&mut buf);
    buf.iter_mut().for_each(|c| *c *= scale);
    let repr = match psi.representation() {
        Representation::Position => Representation::Momentum,
        Representation::Momentum => Representation::Position,
    };
    WaveFunction::from_parts(grid, buf, repr)
}

/// Signed DFT index of bin `k` for a transform of length `n`.
pub(crate) fn signed_index(k: usize, n: usize) -> i64 {
    if k < n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Band-limited (trigonometric) interpolation of `samples` onto the
/// half-step lattice: output `2n` samples, even entries reproduce the input.
pub fn upsample2(samples: &[C64]) -> Vec<C64> {
    let n = samples.len();
    let mut spec = samples.to_vec();
    fft_forward(&mut spec);
    let mut padded = vec![C64::new(0.0, 0.0); 2 * n];
    let half = n / 2;
    padded[..half].copy_from_slice(&spec[..half]);
    padded[2 * n - half + 1..].copy_from_slice(&spec[half + 1..]);
    // Nyquist bin is shared between +n/2 and -n/2.
    padded[half] = 0.5 * spec[half];
    padded[2 * n - half] = 0.5 * spec[half];
    fft_inverse(&mut padded);
    let norm = 1.0 / n as f64;
    padded.iter_mut().for_each(|c| *c *= norm);
    padded
}

/// Band-limited translation on a periodic grid of spacing `dx`:
/// returns samples of `f(x - shift)`.
pub fn spectral_shift(samples: &[C64], dx: f64, shift: f64) -> Vec<C64> {
    let n = samples.len();
    let mut spec = samples.to_vec();
    fft_forward(&mut spec);
    let base = 2.0 * PI / (n as f64 * dx);
    for (k, c) in spec.iter_mut().enumerate() {
        if k == n / 2 {
            *c *= (PI * shift / dx).cos();
        } else {
            let kappa = base * signed_index(k, n) as f64;
            *c *= C64::from_polar(1.0, -kappa * shift);
        }
    }
    fft_inverse(&mut spec);
    let norm = 1.0 / n as f64;
    spec.iter_mut().for_each(|c| *c *= norm);
    spec
}

/// Applies a function of the momentum operator: `F^-1 [ f(p) F psi ]`.
pub fn apply_momentum_function(psi: &WaveFunction, f: impl Fn(f64) -> C64) -> WaveFunction {
    let mut momentum = hbar_fourier(psi);
    let p = momentum.nodes();
    momentum = momentum.map(|k, c| f(p[k]) * c);
    inverse_hbar_fourier(&momentum)
}

//! Cross-Wigner and Wigner transforms on the grid.
//!
//! `W(phi, psi)(x, p) = (2 pi hbar)^-1 \int exp(-i p y / hbar) conj(phi(x - y/2)) psi(x + y/2) dy`
//!
//! Both states are interpolated onto the half-step lattice so that
//! `x +- y/2` falls on samples for `y` a multiple of `dx`; the lag sum runs
//! over `2M` lags and is folded onto the `M` momentum nodes, which is the
//! length-`2M` transform decimated by two. Reads outside the grid are zero.

use std::collections::BTreeMap;

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::conventions;
use crate::error::{Error, Result};
use crate::field::{FieldLabel, PhaseSpaceField};
use crate::fourier::{fft_forward, upsample2};
use crate::grid::{GridSpec, PhaseSpacePoint, Snapped};
use crate::states::gaussian_coherent;
use crate::wavefunction::{Representation, WaveFunction};

fn check_pair(phi: &WaveFunction, psi: &WaveFunction) -> Result<()> {
    phi.ensure_compatible(psi)?;
    if phi.representation() != Representation::Position {
        return Err(Error::InvalidInput("cross-Wigner transform needs position samples".into()));
    }
    phi.ensure_contained()?;
    psi.ensure_contained()?;
    Ok(())
}

/// Cross-Wigner transform of the pair `(phi, psi)`: conjugate-linear in
/// `phi`, linear in `psi`.
pub fn cross_wigner(phi: &WaveFunction, psi: &WaveFunction) -> Result<PhaseSpaceField> {
    check_pair(phi, psi)?;
    let grid = *phi.grid();
    let m = grid.len();
    let fine_phi = upsample2(phi.samples());
    let fine_psi = upsample2(psi.samples());
    let two_m = 2 * m as i64;
    let scale = grid.dx() / (2.0 * std::f64::consts::PI * grid.hbar());

    let mut values = Array2::<C64>::zeros((m, m));
    let mut lag = vec![C64::new(0.0, 0.0); m];
    for j in 0..m {
        lag.iter_mut().for_each(|c| *c = C64::new(0.0, 0.0));
        let center = 2 * j as i64;
        for s in -(m as i64)..(m as i64) {
            let lo = center - s;
            let hi = center + s;
            if lo < 0 || hi < 0 || lo >= two_m || hi >= two_m {
                continue;
            }
            let slot = s.rem_euclid(m as i64) as usize;
            lag[slot] += fine_phi[lo as usize].conj() * fine_psi[hi as usize];
        }
        fft_forward(&mut lag);
        let mut row = values.row_mut(j);
        for (k, out) in row.iter_mut().enumerate() {
            *out = scale * lag[(k + m / 2) % m];
        }
    }
    Ok(PhaseSpaceField::from_parts(grid, values, FieldLabel::CrossWigner))
}

/// Wigner distribution `W psi = W(psi, psi)`; real-valued.
pub fn wigner(psi: &WaveFunction) -> Result<PhaseSpaceField> {
    let w = cross_wigner(psi, psi)?;
    let max_imag = w.max_imag();
    if max_imag >= 1e-10 * psi.norm_sqr().max(1.0) {
        return Err(Error::NotReal { max_imag });
    }
    Ok(w.real_part(FieldLabel::Wigner))
}

/// `sum_k F(x_j, p_k) dp` for each position node.
pub fn marginal_over_p(field: &PhaseSpaceField) -> Vec<C64> {
    let dp = field.grid().dp();
    field
        .values()
        .rows()
        .into_iter()
        .map(|row| row.iter().fold(C64::new(0.0, 0.0), |acc, &c| acc + c) * dp)
        .collect()
}

/// `sum_j F(x_j, p_k) dx` for each momentum node.
pub fn marginal_over_x(field: &PhaseSpaceField) -> Vec<C64> {
    let dx = field.grid().dx();
    field
        .values()
        .columns()
        .into_iter()
        .map(|col| col.iter().fold(C64::new(0.0, 0.0), |acc, &c| acc + c) * dx)
        .collect()
}

/// `sum_{j,k} F dx dp`.
pub fn phase_space_integral(field: &PhaseSpaceField) -> C64 {
    field.integral()
}

/// Result of [`translated_cross_wigner`]: the transported field together
/// with the midpoint shift actually applied.
#[derive(Debug, Clone)]
pub struct TranslatedField {
    pub field: PhaseSpaceField,
    pub shift: Snapped,
}

/// Transports a precomputed `W(phi, psi)` to `W(T(alpha) phi, T(beta) psi)`
/// using
/// `W(T(a) phi, T(b) psi)(z) = exp((i/hbar) chi_ab(z)) W(phi, psi)(z - (a + b)/2)`
/// with `chi_ab(z) = sigma(z, a - b) + sigma(a, b)/2`. The midpoint is snapped
/// to grid nodes; the snap is reported in the result.
pub fn translated_cross_wigner(
    alpha: PhaseSpacePoint,
    beta: PhaseSpacePoint,
    base: &PhaseSpaceField,
) -> Result<TranslatedField> {
    if !(alpha.is_finite() && beta.is_finite()) {
        return Err(Error::InvalidInput("non-finite translation".into()));
    }
    let grid = *base.grid();
    let m = grid.len() as i64;
    let shift = grid.snap_to_nodes((alpha + beta).scale(0.5));
    let sx = (shift.used.x / grid.dx()).round() as i64;
    let sp = (shift.used.p / grid.dp()).round() as i64;
    let xs = grid.x_nodes();
    let ps = grid.p_nodes();
    let hbar = grid.hbar();
    let values = Array2::from_shape_fn((grid.len(), grid.len()), |(j, k)| {
        let sj = j as i64 - sx;
        let sk = k as i64 - sp;
        if sj < 0 || sk < 0 || sj >= m || sk >= m {
            return C64::new(0.0, 0.0);
        }
        let z = PhaseSpacePoint::new(xs[j], ps[k]);
        let chi = conventions::chi_phase(alpha, beta, z);
        C64::from_polar(1.0, chi / hbar) * base.get(sj as usize, sk as usize)
    });
    Ok(TranslatedField { field: PhaseSpaceField::from_parts(grid, values, base.label()), shift })
}

/// Interference term `2 Re W(phi, psi)` of the Wigner distribution of
/// `phi + psi`.
pub fn interference_term(phi: &WaveFunction, psi: &WaveFunction) -> Result<PhaseSpaceField> {
    let w = cross_wigner(phi, psi)?;
    Ok(w.map(FieldLabel::Generic, |c| C64::new(2.0 * c.re, 0.0)))
}

/// Wigner function of a superposition of coherent states with every pairwise
/// interference term kept separately.
#[derive(Debug, Clone)]
pub struct CompassWigner {
    pub total: PhaseSpaceField,
    /// `W(T(z_i) xi0)` for each center.
    pub components: Vec<PhaseSpaceField>,
    /// `2 Re W(T(z_i) xi0, T(z_j) xi0)` for `i < j`.
    pub pair_terms: BTreeMap<(usize, usize), PhaseSpaceField>,
    /// The superposed state `sum_i T(z_i) xi0`.
    pub state: WaveFunction,
}

pub const COMPASS_MIN_CENTERS: usize = 2;
pub const COMPASS_MAX_CENTERS: usize = 8;

pub fn compass_wigner(centers: &[PhaseSpacePoint], grid: GridSpec) -> Result<CompassWigner> {
    if !(COMPASS_MIN_CENTERS..=COMPASS_MAX_CENTERS).contains(&centers.len()) {
        return Err(Error::InvalidInput(format!(
            "compass state needs {COMPASS_MIN_CENTERS}..={COMPASS_MAX_CENTERS} centers, got {}",
            centers.len()
        )));
    }
    let states = centers
        .iter()
        .map(|&z| gaussian_coherent(z, grid))
        .collect::<Result<Vec<_>>>()?;
    let components = states.iter().map(wigner).collect::<Result<Vec<_>>>()?;
    let mut pair_terms = BTreeMap::new();
    for i in 0..states.len() {
        for j in i + 1..states.len() {
            pair_terms.insert((i, j), interference_term(&states[i], &states[j])?);
        }
    }
    let one = C64::new(1.0, 0.0);
    let mut total = PhaseSpaceField::from_parts(grid, Array2::zeros((grid.len(), grid.len())), FieldLabel::Wigner);
    for w in components.iter().chain(pair_terms.values()) {
        total = total.combine(one, w, one, FieldLabel::Wigner)?;
    }
    let mut state = WaveFunction::zeros(grid);
    for s in &states {
        state = state.add(s)?;
    }
    Ok(CompassWigner { total, components, pair_terms, state })
}

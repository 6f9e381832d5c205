//! Heisenberg–Weyl translations and Grossmann–Royer reflections.
//!
//! Translations are carried out spectrally, so displacements need not lie on
//! the grid. Mass that would leave `[-L, L)` is dropped rather than wrapped
//! around and is reported as a containment error.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fourier::spectral_shift;
use crate::grid::PhaseSpacePoint;
use crate::wavefunction::{WaveFunction, CONTAINMENT_TOLERANCE};

/// Fraction of `|psi|^2` sitting at nodes that a shift by `shift` moves
/// outside the grid.
fn off_grid_fraction(psi: &WaveFunction, shift: f64) -> f64 {
    let g = psi.grid();
    let lo = g.x(0) - 0.5 * g.dx();
    let hi = g.x(g.len() - 1) + 0.5 * g.dx();
    let mut total = 0.0;
    let mut lost = 0.0;
    for (x, c) in g.x_nodes().into_iter().zip(psi.samples()) {
        let w = c.norm_sqr();
        total += w;
        let target = x + shift;
        if target < lo || target > hi {
            lost += w;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        lost / total
    }
}

/// Shifts `samples` to `f(x - shift)` with zero fill outside the grid.
fn translate(psi: &WaveFunction, samples: &[C64], shift: f64) -> Result<Vec<C64>> {
    let lost = off_grid_fraction(psi, shift);
    if lost >= CONTAINMENT_TOLERANCE {
        return Err(Error::Containment { tail_fraction: lost, at_time: None });
    }
    let g = psi.grid();
    let mut out = spectral_shift(samples, g.dx(), shift);
    // Nodes whose preimage is off-grid read zero.
    for (j, c) in out.iter_mut().enumerate() {
        let source = g.x(j) - shift;
        if source < g.x(0) - 0.5 * g.dx() || source > g.x(g.len() - 1) + 0.5 * g.dx() {
            *c = C64::new(0.0, 0.0);
        }
    }
    Ok(out)
}

fn check_flag(input: &WaveFunction, output: WaveFunction) -> Result<WaveFunction> {
    if input.is_well_contained() {
        output.ensure_contained()?;
    }
    Ok(output)
}

/// `(T(z0) psi)(x) = exp((i/hbar)(p0 x - p0 x0 / 2)) psi(x - x0)`.
pub fn heisenberg_weyl(z0: PhaseSpacePoint, psi: &WaveFunction) -> Result<WaveFunction> {
    if !z0.is_finite() {
        return Err(Error::InvalidInput("non-finite displacement".into()));
    }
    let g = *psi.grid();
    let hbar = g.hbar();
    let shifted = if z0.x == 0.0 { psi.samples().to_vec() } else { translate(psi, psi.samples(), z0.x)? };
    let samples = shifted
        .into_iter()
        .zip(g.x_nodes())
        .map(|(c, x)| c * C64::from_polar(1.0, (z0.p * x - 0.5 * z0.p * z0.x) / hbar))
        .collect();
    check_flag(psi, WaveFunction::new(g, samples)?)
}

/// Parity about the origin, `psi(-x)`; node `j` maps to node `M - j`, and
/// the image of `x = -L` is off-grid.
pub fn parity(psi: &WaveFunction) -> WaveFunction {
    let m = psi.samples().len();
    let s = psi.samples();
    let samples = (0..m).map(|j| if j == 0 { C64::new(0.0, 0.0) } else { s[m - j] }).collect();
    WaveFunction::new(*psi.grid(), samples).expect("parity preserves finiteness")
}

/// `(T_GR(z0) psi)(x) = exp((2i/hbar) p0 (x - x0)) psi(2 x0 - x)`.
pub fn grossmann_royer(z0: PhaseSpacePoint, psi: &WaveFunction) -> Result<WaveFunction> {
    if !z0.is_finite() {
        return Err(Error::InvalidInput("non-finite reflection center".into()));
    }
    let g = *psi.grid();
    let hbar = g.hbar();
    let reflected = parity(psi);
    let lost = psi.samples()[0].norm_sqr() * g.dx() / psi.norm_sqr().max(f64::MIN_POSITIVE);
    if lost >= CONTAINMENT_TOLERANCE {
        return Err(Error::Containment { tail_fraction: lost, at_time: None });
    }
    let shift = 2.0 * z0.x;
    let shifted = if shift == 0.0 {
        reflected.samples().to_vec()
    } else {
        translate(&reflected, reflected.samples(), shift)?
    };
    let samples = shifted
        .into_iter()
        .zip(g.x_nodes())
        .map(|(c, x)| c * C64::from_polar(1.0, 2.0 * z0.p * (x - z0.x) / hbar))
        .collect();
    check_flag(psi, WaveFunction::new(g, samples)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::wavefunction::inner_product;
    use std::f64::consts::PI;

    fn grid() -> GridSpec {
        GridSpec::new(512, 10.0, 1.0).unwrap()
    }

    fn bump(g: GridSpec) -> WaveFunction {
        WaveFunction::from_fn(g, |x| C64::from_polar((-(x - 0.3).powi(2) / 1.5).exp(), 0.4 * x + 0.1 * x * x)).unwrap()
    }

    fn max_diff(a: &WaveFunction, b: &WaveFunction) -> f64 {
        a.samples().iter().zip(b.samples()).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn zero_translation_is_identity() {
        let psi = bump(grid());
        let out = heisenberg_weyl(PhaseSpacePoint::ORIGIN, &psi).unwrap();
        assert_eq!(out, psi);
    }

    #[test]
    fn translated_fiducial_is_centered() {
        let g = grid();
        let xi = WaveFunction::from_fn(g, |x| C64::new(PI.powf(-0.25) * (-x * x / 2.0).exp(), 0.0)).unwrap();
        let out = heisenberg_weyl(PhaseSpacePoint::new(1.0, 0.0), &xi).unwrap();
        assert!((out.norm() - 1.0).abs() < 1e-12);
        assert!((out.position_moment(1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn weyl_relation_round_trip() {
        let psi = bump(grid());
        let z = PhaseSpacePoint::new(1.37, -0.61);
        let back = heisenberg_weyl(-z, &heisenberg_weyl(z, &psi).unwrap()).unwrap();
        let overlap = inner_product(&psi, &back).unwrap() / psi.norm_sqr();
        assert!((overlap.norm() - 1.0).abs() < 1e-10);
        // T(-z) T(z) = identity exactly since sigma(z, -z) = 0.
        assert!(max_diff(&back, &psi) < 1e-12);
    }

    #[test]
    fn translation_off_grid_is_rejected() {
        let psi = bump(grid());
        assert!(matches!(
            heisenberg_weyl(PhaseSpacePoint::new(9.0, 0.0), &psi),
            Err(Error::Containment { .. })
        ));
    }

    #[test]
    fn gr_at_origin_is_parity() {
        let g = grid();
        let psi = bump(g);
        let out = grossmann_royer(PhaseSpacePoint::ORIGIN, &psi).unwrap();
        let expected = WaveFunction::from_fn(g, |x| {
            let y = -x;
            C64::from_polar((-(y - 0.3).powi(2) / 1.5).exp(), 0.4 * y + 0.1 * y * y)
        })
        .unwrap();
        assert!(max_diff(&out, &expected) < 1e-12);
    }

    #[test]
    fn gr_is_unitary_and_involutive() {
        let psi = bump(grid());
        let z = PhaseSpacePoint::new(0.41, 1.3);
        let once = grossmann_royer(z, &psi).unwrap();
        assert!((once.norm() - psi.norm()).abs() < 1e-12);
        let twice = grossmann_royer(z, &once).unwrap();
        assert!(max_diff(&twice, &psi) < 1e-12);
    }

    #[test]
    fn gr_matches_closed_form_off_lattice() {
        let g = grid();
        let psi = bump(g);
        let z = PhaseSpacePoint::new(0.123, -0.7);
        let out = grossmann_royer(z, &psi).unwrap();
        let expected = WaveFunction::from_fn(g, |x| {
            let y = 2.0 * z.x - x;
            C64::from_polar((-(y - 0.3).powi(2) / 1.5).exp(), 0.4 * y + 0.1 * y * y)
                * C64::from_polar(1.0, 2.0 * z.p * (x - z.x))
        })
        .unwrap();
        assert!(max_diff(&out, &expected) < 1e-10);
    }
}

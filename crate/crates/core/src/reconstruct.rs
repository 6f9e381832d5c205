//! Recovering a state from its cross-Wigner transform with a known partner:
//! `psi(x) = (2 / <phi|gamma>) \int W(phi, psi)(z0) (T_GR(z0) gamma)(x) dz0`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::field::{FieldLabel, PhaseSpaceField};
use crate::observable::half_rows;
use crate::wavefunction::{inner_product, Representation, WaveFunction};
use crate::weakval::{gr_superpose, EPS_OVERLAP};

#[derive(Debug, Clone)]
pub struct ReconstructionInput {
    /// `W(phi, psi)` for the unknown `psi`.
    pub field: PhaseSpaceField,
    pub phi: WaveFunction,
    /// Auxiliary window; any state not orthogonal to `phi`.
    pub gamma: WaveFunction,
}

impl ReconstructionInput {
    pub fn new(field: PhaseSpaceField, phi: WaveFunction, gamma: WaveFunction) -> Result<Self> {
        if field.label() != FieldLabel::CrossWigner {
            return Err(Error::InvalidInput(format!(
                "reconstruction needs a CROSS_WIGNER field, got {}",
                field.label().as_str()
            )));
        }
        field.grid().ensure_same(phi.grid())?;
        field.grid().ensure_same(gamma.grid())?;
        for s in [&phi, &gamma] {
            if s.representation() != Representation::Position {
                return Err(Error::InvalidInput("reconstruction needs position samples".into()));
            }
        }
        gamma.ensure_contained()?;
        Ok(Self { field, phi, gamma })
    }
}

pub fn reconstruct(input: &ReconstructionInput) -> Result<WaveFunction> {
    let scale = input.phi.norm() * input.gamma.norm();
    let overlap = inner_product(&input.phi, &input.gamma)?;
    if scale == 0.0 || overlap.norm() <= EPS_OVERLAP * scale {
        return Err(Error::Conditioning { overlap_abs: overlap.norm() });
    }
    let symbol = half_rows(&input.field);
    let sum = gr_superpose(&symbol, &input.gamma, 1)?;
    let factor = 2.0 / overlap;
    WaveFunction::new(*input.gamma.grid(), sum.into_iter().map(|c| c * factor).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alignment {
    /// `<a|b> / |<a|b>|`; `None` when `a` and `b` are orthogonal.
    pub phase: Option<C64>,
    /// `min_theta |exp(i theta) a - b| / |b|`.
    pub residual: f64,
}

/// Best global phase to apply to `a` to match `b`.
pub fn phase_align(a: &WaveFunction, b: &WaveFunction) -> Result<Alignment> {
    let (na, nb) = (a.norm(), b.norm());
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroState);
    }
    let ip = inner_product(a, b)?;
    if ip.norm() <= EPS_OVERLAP * na * nb {
        // Every phase is equally good.
        return Ok(Alignment { phase: None, residual: (na * na + nb * nb).sqrt() / nb });
    }
    let phase = ip / ip.norm();
    let diff = a.combine(phase, b, C64::new(-1.0, 0.0))?;
    Ok(Alignment { phase: Some(phase), residual: diff.norm() / nb })
}

/// Least-squares modulus `s` in `reconstructed ~ s exp(i theta) truth`.
pub fn fitted_scale(reconstructed: &WaveFunction, truth: &WaveFunction) -> Result<f64> {
    let n = truth.norm_sqr();
    if n == 0.0 {
        return Err(Error::ZeroState);
    }
    Ok(inner_product(truth, reconstructed)?.norm() / n)
}

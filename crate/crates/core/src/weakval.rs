//! Complex quasi-probabilities, weak values and their phase-space
//! representation `<phi|A psi> = \int A(z) W(phi, psi)(z) dz`.

use std::fmt;

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::analytic::{amplification_bound, Magnitude, PhaseVector};
use crate::error::{Error, Result};
use crate::field::{FieldLabel, PhaseSpaceField};
use crate::fourier::fft_inverse;
use crate::grid::{GridSpec, PhaseSpacePoint};
use crate::observable::{apply_symbolic_monomial, Observable, Polynomial};
use crate::states::{gaussian_coherent, hermite_basis};
use crate::wavefunction::{inner_product, Representation, WaveFunction};
use crate::xwigner::cross_wigner;

/// Relative overlap threshold below which weak values are refused.
pub const EPS_OVERLAP: f64 = 1e-12;

/// Coverage a finite basis must reach in [`convex_sum_check`].
pub const MIN_COVERAGE: f64 = 1.0 - 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Quadrature,
    DirectGr,
    DirectSymbolic,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Quadrature => "QUADRATURE",
            Method::DirectGr => "DIRECT_GR",
            Method::DirectSymbolic => "DIRECT_SYMBOLIC",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakValueReport {
    pub value: C64,
    pub overlap: C64,
    pub method: Method,
    /// Filled in when a second method has been run on the same pair.
    pub residual_vs_alternate: Option<f64>,
}

/// `|a - b| / max(|a|, |b|, 1)`: relative for large values, absolute near zero.
pub fn relative_residual(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

/// `<phi|psi>`, refusing pairs that are orthogonal to working precision.
fn checked_overlap(phi: &WaveFunction, psi: &WaveFunction) -> Result<C64> {
    let scale = phi.norm() * psi.norm();
    if scale == 0.0 {
        return Err(Error::ZeroState);
    }
    let overlap = inner_product(phi, psi)?;
    let threshold = EPS_OVERLAP * scale;
    if overlap.norm() <= threshold {
        return Err(Error::Orthogonal { overlap_abs: overlap.norm(), threshold });
    }
    Ok(overlap)
}

/// `rho_{phi,psi} = W(phi, psi) / <phi|psi>`.
pub fn rho(phi: &WaveFunction, psi: &WaveFunction) -> Result<PhaseSpaceField> {
    let overlap = checked_overlap(phi, psi)?;
    Ok(cross_wigner(phi, psi)?.map(FieldLabel::Rho, |c| c / overlap))
}

/// Weak value as the phase-space integral `\int A rho dz`.
pub fn weak_value_quadrature(a: &Observable, phi: &WaveFunction, psi: &WaveFunction) -> Result<WeakValueReport> {
    let overlap = checked_overlap(phi, psi)?;
    let symbol = a.symbol_field(phi.grid())?;
    let w = cross_wigner(phi, psi)?;
    let value = symbol.integral_product(&w)? / overlap;
    Ok(WeakValueReport { value, overlap, method: Method::Quadrature, residual_vs_alternate: None })
}

/// `sum_{j in half rows, k} S(j, k) (T_GR(x_j/2, p_k) state)(x_n) (dx/2) dp`.
///
/// Rows are reflection centers on the half-step lattice
/// ([`GridSpec::x_half`]); the momentum sum is one inverse FFT per row.
/// With `stride > 1` only every `stride`-th center is used, weighted by
/// `stride^2`.
pub(crate) fn gr_superpose(symbol: &Array2<C64>, state: &WaveFunction, stride: usize) -> Result<Vec<C64>> {
    let grid = state.grid();
    let m = grid.len();
    if symbol.dim() != (2 * m, m) {
        return Err(Error::InvalidInput(format!("half-lattice symbol must be {}x{m}, got {:?}", 2 * m, symbol.dim())));
    }
    if stride == 0 || stride > m {
        return Err(Error::InvalidInput(format!("stride must lie in 1..={m}, got {stride}")));
    }
    let weight = (stride * stride) as f64 * 0.5 * grid.dx() * grid.dp();
    let samples = state.samples();
    let mut out = vec![C64::new(0.0, 0.0); m];
    let mut kernel = vec![C64::new(0.0, 0.0); m];
    for j in (0..2 * m).step_by(stride) {
        for (c, slot) in kernel.iter_mut().enumerate() {
            *slot = if c % stride == 0 { symbol[[j, c]] } else { C64::new(0.0, 0.0) };
        }
        fft_inverse(&mut kernel);
        // exp(2 pi i (c - M/2) r / M) = (-1)^r exp(2 pi i c r / M)
        for (r, c) in kernel.iter_mut().enumerate() {
            if r % 2 == 1 {
                *c = -*c;
            }
        }
        // Output node n reads the reflected node j - n.
        for n in j.saturating_sub(m - 1)..=j.min(m - 1) {
            let r = (2 * n as i64 - j as i64).rem_euclid(m as i64) as usize;
            out[n] += kernel[r] * samples[j - n];
        }
    }
    out.iter_mut().for_each(|c| *c *= weight);
    Ok(out)
}

fn check_state(psi: &WaveFunction) -> Result<()> {
    if psi.representation() != Representation::Position {
        return Err(Error::InvalidInput("Weyl operators act on position samples".into()));
    }
    psi.ensure_contained()
}

/// Weyl quantization as a superposition of Grossmann–Royer reflections,
/// `A psi = (pi hbar)^-1 \int A(z0) T_GR(z0) psi dz0`.
pub fn weyl_apply_gr(a: &Observable, psi: &WaveFunction, stride: usize) -> Result<WaveFunction> {
    check_state(psi)?;
    let grid = *psi.grid();
    let symbol = a.symbol_half_rows(&grid)?;
    let scale = 1.0 / (std::f64::consts::PI * grid.hbar());
    let out = gr_superpose(&symbol, psi, stride)?;
    WaveFunction::new(grid, out.into_iter().map(|c| c * scale).collect())
}

/// Applies the Weyl quantization of `a`: symbolic rules for polynomial
/// terms that have one, reflections for everything else. Returns the
/// method that was needed.
pub fn weyl_apply(a: &Observable, psi: &WaveFunction, stride: usize) -> Result<(WaveFunction, Method)> {
    check_state(psi)?;
    match a {
        Observable::Sampled(_) => Ok((weyl_apply_gr(a, psi, stride)?, Method::DirectGr)),
        Observable::Poly(poly) => {
            let mut acc = WaveFunction::zeros(*psi.grid());
            let mut rest = Vec::new();
            for t in poly.terms() {
                if t.has_symbolic_rule() {
                    acc = acc.add(&apply_symbolic_monomial(t, psi))?;
                } else {
                    rest.push(*t);
                }
            }
            if rest.is_empty() {
                return Ok((acc, Method::DirectSymbolic));
            }
            let gr = weyl_apply_gr(&Observable::Poly(Polynomial::new(rest)?), psi, stride)?;
            Ok((acc.add(&gr)?, Method::DirectGr))
        }
    }
}

/// Weak value `<phi|A psi> / <phi|psi>` with `A psi` formed directly.
pub fn weak_value_direct(a: &Observable, phi: &WaveFunction, psi: &WaveFunction) -> Result<WeakValueReport> {
    weak_value_direct_with_stride(a, phi, psi, 1)
}

/// [`weak_value_direct`] with a coarser reflection-center subgrid for the
/// terms that need one (accuracy degrades with `stride`).
pub fn weak_value_direct_with_stride(
    a: &Observable,
    phi: &WaveFunction,
    psi: &WaveFunction,
    stride: usize,
) -> Result<WeakValueReport> {
    let overlap = checked_overlap(phi, psi)?;
    let (applied, method) = weyl_apply(a, psi, stride)?;
    let value = inner_product(phi, &applied)? / overlap;
    Ok(WeakValueReport { value, overlap, method, residual_vs_alternate: None })
}

/// Runs both methods and records their mutual residual in each report.
pub fn weak_value_both(
    a: &Observable,
    phi: &WaveFunction,
    psi: &WaveFunction,
) -> Result<(WeakValueReport, WeakValueReport)> {
    let mut quad = weak_value_quadrature(a, phi, psi)?;
    let mut direct = weak_value_direct(a, phi, psi)?;
    let residual = relative_residual(quad.value, direct.value);
    quad.residual_vs_alternate = Some(residual);
    direct.residual_vs_alternate = Some(residual);
    Ok((quad, direct))
}

/// Expectation `<psi|A psi> / <psi|psi>` via the Wigner distribution.
pub fn expectation(a: &Observable, psi: &WaveFunction) -> Result<f64> {
    if psi.norm_sqr() == 0.0 {
        return Err(Error::ZeroState);
    }
    let value = weak_value_quadrature(a, psi, psi)?.value;
    if value.im.abs() >= 1e-8 * value.re.abs().max(1.0) {
        return Err(Error::NotReal { max_imag: value.im.abs() });
    }
    Ok(value.re)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexSum {
    pub lhs: f64,
    pub rhs: C64,
    pub residual: f64,
    /// `sum_j |<h_j|psi>|^2 / |psi|^2`.
    pub captured: f64,
    /// Number of basis states with non-vanishing weight.
    pub terms: usize,
}

/// Checks `<A>_psi = sum_j |<h_j|psi>|^2 / |psi|^2 * <A>_weak(h_j, psi)` over
/// the first `basis_size` Hermite functions.
pub fn convex_sum_check(a: &Observable, psi: &WaveFunction, basis_size: usize) -> Result<ConvexSum> {
    let norm_sqr = psi.norm_sqr();
    if norm_sqr == 0.0 {
        return Err(Error::ZeroState);
    }
    let grid = *psi.grid();
    let basis = (0..basis_size).map(|n| hermite_basis(n, grid)).collect::<Result<Vec<_>>>()?;
    let coeffs = basis.iter().map(|h| inner_product(h, psi)).collect::<Result<Vec<_>>>()?;
    let captured = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>() / norm_sqr;
    if captured < MIN_COVERAGE {
        return Err(Error::Coverage { captured });
    }
    let (applied, _) = weyl_apply(a, psi, 1)?;
    let threshold = EPS_OVERLAP * psi.norm();
    let mut rhs = C64::new(0.0, 0.0);
    let mut terms = 0;
    for (h, c) in basis.iter().zip(&coeffs) {
        if c.norm() <= threshold {
            continue;
        }
        let weak = inner_product(h, &applied)? / c;
        rhs += weak * (c.norm_sqr() / norm_sqr);
        terms += 1;
    }
    let lhs = expectation(a, psi)?;
    Ok(ConvexSum { lhs, rhs, residual: (C64::new(lhs, 0.0) - rhs).norm(), captured, terms })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplificationReport {
    /// `exp(|z0|^2 / hbar) sup|A|`
    pub bound: Magnitude,
    /// Weak value for post-selection `T(z0) xi0` and pre-selection `T(-z0) xi0`.
    pub attained: WeakValueReport,
    pub sup_abs: f64,
    /// Ordinary expectations in the two states.
    pub expectation_pre: f64,
    pub expectation_post: f64,
}

/// Weak value of `a` for the antipodal coherent pair at `+-z0` together with
/// the bound `exp(|z0|^2 / hbar) sup|A|`.
pub fn coherent_amplification_bound(a: &Observable, z0: PhaseSpacePoint, grid: GridSpec) -> Result<AmplificationReport> {
    let post = gaussian_coherent(z0, grid)?;
    let pre = gaussian_coherent(-z0, grid)?;
    let sup_abs = a.sup_abs(&grid)?;
    let bound = amplification_bound(&PhaseVector::from(z0), grid.hbar(), sup_abs)?;
    let attained = weak_value_quadrature(a, &post, &pre)?;
    Ok(AmplificationReport {
        bound,
        attained,
        sup_abs,
        expectation_pre: expectation(a, &pre)?,
        expectation_post: expectation(a, &post)?,
    })
}

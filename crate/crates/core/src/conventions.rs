//! Convention ledger.
//!
//! Every phase downstream depends on the choices collected here; they are
//! also written verbatim into the header of every output file.
//!
//! * Inner product: `<phi|psi> = \int conj(phi) psi dx` (first slot conjugated).
//! * Fourier transform: `F psi(p) = (2 pi hbar)^(-1/2) \int exp(-i p y / hbar) psi(y) dy`.
//! * Fiducial state: `xi0(x) = (pi hbar)^(-1/4) exp(-x^2 / (2 hbar))`, unit norm.
//! * Heisenberg–Weyl operator:
//!   `T(z0) psi(x) = exp((i/hbar)(p0 x - p0 x0 / 2)) psi(x - x0)`,
//!   so `T(z0) xi0` is centered at `(x0, p0)`.
//! * Grossmann–Royer operator:
//!   `T_GR(z0) psi(x) = exp((2i/hbar) p0 (x - x0)) psi(2 x0 - x)`.
//! * Cross-Wigner transform:
//!   `W(phi, psi)(x, p) = (2 pi hbar)^-1 \int exp(-i p y / hbar) conj(phi(x - y/2)) psi(x + y/2) dy`,
//!   which equals `(pi hbar)^-1 <T_GR(z) phi | psi>`. With this placement of
//!   the conjugate, `\int W dx = conj(F phi) F psi` and
//!   `\int A W dz = <phi | Op_Weyl(A) | psi>`, and a state with momentum `p0`
//!   has its Wigner function centred at `+p0`.
//! * Translation covariance:
//!   `W(T(a) phi, T(b) psi)(z) = exp((i/hbar) chi_ab(z)) W(phi, psi)(z - (a + b)/2)`
//!   with `chi_ab(z) = sigma(z, a - b) + sigma(a, b)/2`.
//! * Antipodal coherent pair: `W(T(z0) xi0, T(-z0) xi0)(z) =
//!   exp((2i/hbar) sigma(z, z0)) W xi0(z)`; the phase sign and the factor 2
//!   are confirmed by the direct grid transform.

use crate::grid::PhaseSpacePoint;

/// Compact form of the ledger for file headers.
pub const SIGN_LEDGER: &str = "W=conj(phi(x-y/2))psi(x+y/2)exp(-ipy/hbar);T(z0)=exp(i(p0x-p0x0/2)/hbar)shift(x0);\
chi_ab(z)=sigma(z,a-b)+sigma(a,b)/2,phase=exp(+i*chi/hbar);antipodal=exp(+2i*sigma(z,z0)/hbar)";

/// `chi_ab(z) = sigma(z, a - b) + sigma(a, b) / 2`.
pub fn chi_phase(alpha: PhaseSpacePoint, beta: PhaseSpacePoint, z: PhaseSpacePoint) -> f64 {
    z.sigma(&(alpha - beta)) + 0.5 * alpha.sigma(&beta)
}

/// Phase exponent (without the `i/hbar`) of the antipodal coherent pair,
/// `2 sigma(z, z0)`.
pub fn antipodal_phase(z: PhaseSpacePoint, z0: PhaseSpacePoint) -> f64 {
    2.0 * z.sigma(&z0)
}

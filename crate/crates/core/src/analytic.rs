//! Closed-form coherent-state results in `N` degrees of freedom.
//!
//! Phase-space vectors are stored as `(x_1..x_N, p_1..p_N)`. Gaussian
//! prefactors are combined in log space so that large `|z|^2 / hbar` do not
//! underflow before the final exponentiation.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::grid::PhaseSpacePoint;

/// Exponents above this are reported as [`Magnitude::Overflow`].
pub const OVERFLOW_EXPONENT: f64 = 700.0;

/// A point of the `2N`-dimensional phase space.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVector {
    x: Vec<f64>,
    p: Vec<f64>,
}

impl PhaseVector {
    pub fn new(x: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        if x.len() != p.len() || x.is_empty() {
            return Err(Error::InvalidInput(format!(
                "phase-space vector needs N >= 1 positions and momenta, got {} and {}",
                x.len(),
                p.len()
            )));
        }
        if x.iter().chain(&p).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite phase-space coordinate".into()));
        }
        Ok(Self { x, p })
    }

    /// Parses the interleaved-free layout `(x_1..x_N, p_1..p_N)`.
    pub fn from_slice(z: &[f64]) -> Result<Self> {
        if !z.len().is_multiple_of(2) {
            return Err(Error::InvalidInput(format!("odd phase-space length {}", z.len())));
        }
        let n = z.len() / 2;
        Self::new(z[..n].to_vec(), z[n..].to_vec())
    }

    pub fn zeros(n: usize) -> Self {
        Self { x: vec![0.0; n], p: vec![0.0; n] }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn norm_sqr(&self) -> f64 {
        self.x.iter().chain(&self.p).map(|v| v * v).sum()
    }

    /// `sigma(z, z') = p . x' - p' . x`
    pub fn sigma(&self, other: &PhaseVector) -> Result<f64> {
        self.same_dim(other)?;
        Ok(self.p.iter().zip(&other.x).map(|(a, b)| a * b).sum::<f64>()
            - other.p.iter().zip(&self.x).map(|(a, b)| a * b).sum::<f64>())
    }

    pub fn lin(&self, a: f64, other: &PhaseVector, b: f64) -> Result<PhaseVector> {
        self.same_dim(other)?;
        let comb = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(s, t)| a * s + b * t).collect();
        Ok(PhaseVector { x: comb(&self.x, &other.x), p: comb(&self.p, &other.p) })
    }

    fn same_dim(&self, other: &PhaseVector) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("dimension mismatch: N = {} vs N = {}", self.dim(), other.dim())))
        }
    }
}

impl From<PhaseSpacePoint> for PhaseVector {
    fn from(z: PhaseSpacePoint) -> Self {
        Self { x: vec![z.x], p: vec![z.p] }
    }
}

/// A nonnegative real that may exceed the `f64` range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Magnitude {
    Finite(f64),
    /// The value is `exp(log_value)` with `log_value > OVERFLOW_EXPONENT`.
    Overflow { log_value: f64 },
}

impl Magnitude {
    /// `exp(log_value)`, or the overflow marker.
    pub fn from_log(log_value: f64) -> Self {
        if log_value > OVERFLOW_EXPONENT {
            Magnitude::Overflow { log_value }
        } else {
            Magnitude::Finite(log_value.exp())
        }
    }

    pub fn value(&self) -> Option<f64> {
        match *self {
            Magnitude::Finite(v) => Some(v),
            Magnitude::Overflow { .. } => None,
        }
    }

    /// Whether `x <= self + slack`.
    pub fn admits(&self, x: f64, slack: f64) -> bool {
        match *self {
            Magnitude::Finite(v) => x <= v + slack,
            Magnitude::Overflow { .. } => x.is_finite(),
        }
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Magnitude::Finite(v) => write!(f, "{v:.16e}"),
            Magnitude::Overflow { log_value } => write!(f, "overflow(exp({log_value}))"),
        }
    }
}

fn check_hbar(hbar: f64) -> Result<()> {
    if hbar.is_finite() && hbar > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("hbar must be positive, got {hbar}")))
    }
}

/// `ln (pi hbar)^(-N)`
fn log_prefactor(hbar: f64, n: usize) -> f64 {
    -(n as f64) * (PI * hbar).ln()
}

/// `<T(z0) xi0 | T(-z0) xi0> = exp(-|z0|^2 / hbar)`.
pub fn overlap_antipodal(z0: &PhaseVector, hbar: f64) -> Result<f64> {
    check_hbar(hbar)?;
    Ok((-z0.norm_sqr() / hbar).exp())
}

/// `W xi0(z) = (pi hbar)^(-N) exp(-|z|^2 / hbar)`.
pub fn fiducial_wigner(z: &PhaseVector, hbar: f64) -> Result<f64> {
    check_hbar(hbar)?;
    Ok((log_prefactor(hbar, z.dim()) - z.norm_sqr() / hbar).exp())
}

/// `W(T(z0) xi0, T(-z0) xi0)(z) = exp((2i/hbar) sigma(z, z0)) W xi0(z)`.
pub fn cross_wigner_antipodal(z: &PhaseVector, z0: &PhaseVector, hbar: f64) -> Result<C64> {
    let phase = 2.0 * z.sigma(z0)? / hbar;
    Ok(C64::from_polar(fiducial_wigner(z, hbar)?, phase))
}

/// `rho(z) = (pi hbar)^(-N) exp((2i/hbar) sigma(z, z0)) exp((|z0|^2 - |z|^2) / hbar)`.
pub fn rho_antipodal(z: &PhaseVector, z0: &PhaseVector, hbar: f64) -> Result<C64> {
    check_hbar(hbar)?;
    let phase = 2.0 * z.sigma(z0)? / hbar;
    let log_mod = log_prefactor(hbar, z.dim()) + (z0.norm_sqr() - z.norm_sqr()) / hbar;
    Ok(C64::from_polar(log_mod.exp(), phase))
}

/// `chi_ab(z) = sigma(z, a - b) + sigma(a, b) / 2`.
pub fn chi_phase(alpha: &PhaseVector, beta: &PhaseVector, z: &PhaseVector) -> Result<f64> {
    let diff = alpha.lin(1.0, beta, -1.0)?;
    Ok(z.sigma(&diff)? + 0.5 * alpha.sigma(beta)?)
}

/// Transports a closed-form `W(phi, psi)` to `W(T(a) phi, T(b) psi)`:
/// `z -> exp((i/hbar) chi_ab(z)) W(phi, psi)(z - (a + b)/2)`.
pub fn translation_transport<F>(
    alpha: PhaseVector,
    beta: PhaseVector,
    hbar: f64,
    base: F,
) -> Result<impl Fn(&PhaseVector) -> Result<C64>>
where
    F: Fn(&PhaseVector) -> Result<C64>,
{
    check_hbar(hbar)?;
    let mid = alpha.lin(0.5, &beta, 0.5)?;
    Ok(move |z: &PhaseVector| {
        let shifted = z.lin(1.0, &mid, -1.0)?;
        let chi = chi_phase(&alpha, &beta, z)?;
        Ok(C64::from_polar(1.0, chi / hbar) * base(&shifted)?)
    })
}

/// `exp(|z0|^2 / hbar) sup|A|`, the bound on weak values of the antipodal pair.
pub fn amplification_bound(z0: &PhaseVector, hbar: f64, sup_abs: f64) -> Result<Magnitude> {
    check_hbar(hbar)?;
    if !(sup_abs.is_finite() && sup_abs >= 0.0) {
        return Err(Error::InvalidInput(format!("sup|A| must be finite and nonnegative, got {sup_abs}")));
    }
    if sup_abs == 0.0 {
        return Ok(Magnitude::Finite(0.0));
    }
    Ok(Magnitude::from_log(z0.norm_sqr() / hbar + sup_abs.ln()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(z: &[f64]) -> PhaseVector {
        PhaseVector::from_slice(z).unwrap()
    }

    #[test]
    fn overlaps() {
        assert_eq!(overlap_antipodal(&PhaseVector::zeros(1), 1.0).unwrap(), 1.0);
        assert!((overlap_antipodal(&v(&[1.0, 0.0]), 1.0).unwrap() - 0.367_879_441_171_442_3).abs() < 1e-15);
        assert!((overlap_antipodal(&v(&[1.0, 1.0, 0.0, 0.0]), 1.0).unwrap() - 0.135_335_283_236_612_7).abs() < 1e-15);
    }

    #[test]
    fn fiducial_values() {
        assert!((fiducial_wigner(&PhaseVector::zeros(1), 1.0).unwrap() - std::f64::consts::FRAC_1_PI).abs() < 1e-15);
        assert!((fiducial_wigner(&PhaseVector::zeros(3), 1.0).unwrap() - 0.032_251_534_433_199_5).abs() < 1e-15);
        assert!((fiducial_wigner(&v(&[1.0, 0.0]), 1.0).unwrap() - 0.117_099_663_048_638_34).abs() < 1e-12);
    }

    #[test]
    fn fiducial_normalization_by_quadrature() {
        // 1D product rule: the N-dim integral factorizes.
        for hbar in [0.5, 1.0, 2.0] {
            let h = 0.02;
            let mut total = 0.0;
            for i in -400..=400 {
                for k in -400..=400 {
                    total += fiducial_wigner(&v(&[i as f64 * h, k as f64 * h]), hbar).unwrap() * h * h;
                }
            }
            assert!((total - 1.0).abs() < 1e-10, "{total}");
        }
    }

    #[test]
    fn antipodal_forms() {
        let z0 = v(&[1.0, 0.0]);
        let at_origin = cross_wigner_antipodal(&PhaseVector::zeros(1), &z0, 1.0).unwrap();
        assert!((at_origin - C64::new(1.0 / PI, 0.0)).norm() < 1e-15);
        let z = v(&[0.3, -0.8]);
        assert!((cross_wigner_antipodal(&z, &z0, 1.0).unwrap().norm() - fiducial_wigner(&z, 1.0).unwrap()).abs() < 1e-15);
        let rho0 = rho_antipodal(&PhaseVector::zeros(1), &z0, 1.0).unwrap();
        assert!((rho0.norm() - 0.865_255_979_432_265).abs() < 1e-12);
        let coincident = rho_antipodal(&z, &PhaseVector::zeros(1), 1.0).unwrap();
        assert!((coincident.re - fiducial_wigner(&z, 1.0).unwrap()).abs() < 1e-15 && coincident.im == 0.0);
    }

    #[test]
    fn rho_integrates_to_one() {
        for (z0, hbar) in [(v(&[1.0, 0.0]), 1.0), (v(&[0.6, -0.4]), 0.7)] {
            let h = 0.02;
            let mut total = C64::new(0.0, 0.0);
            for i in -500..=500 {
                for k in -500..=500 {
                    total += rho_antipodal(&v(&[i as f64 * h, k as f64 * h]), &z0, hbar).unwrap() * (h * h);
                }
            }
            assert!((total - 1.0).norm() < 1e-8, "{total}");
        }
    }

    #[test]
    fn chi_examples() {
        let a = v(&[1.0, 0.0]);
        let b = a.lin(-1.0, &a, 0.0).unwrap();
        assert_eq!(chi_phase(&a, &a, &v(&[2.0, 5.0])).unwrap(), 0.0);
        assert_eq!(chi_phase(&a, &b, &v(&[0.0, 1.0])).unwrap(), 2.0);
    }

    #[test]
    fn transport_reproduces_antipodal_pair() {
        let hbar = 0.8;
        let z0 = v(&[0.4, -0.3, 1.1, 0.2]);
        let minus = z0.lin(-1.0, &z0, 0.0).unwrap();
        let transported =
            translation_transport(z0.clone(), minus, hbar, |z| Ok(C64::new(fiducial_wigner(z, hbar)?, 0.0))).unwrap();
        for z in [v(&[0.0, 0.0, 0.0, 0.0]), v(&[0.5, -1.0, 0.2, 0.9]), v(&[-2.0, 1.0, 1.5, -0.1])] {
            let diff = (transported(&z).unwrap() - cross_wigner_antipodal(&z, &z0, hbar).unwrap()).norm();
            assert!(diff < 1e-12, "{diff}");
        }
    }

    #[test]
    fn bound_and_overflow() {
        let b = amplification_bound(&v(&[1.0, 0.0]), 1.0, 1.0).unwrap();
        assert!((b.value().unwrap() - std::f64::consts::E).abs() < 1e-15);
        assert_eq!(amplification_bound(&PhaseVector::zeros(1), 1.0, 0.5).unwrap(), Magnitude::Finite(0.5));
        let big = amplification_bound(&v(&[30.0, 0.0]), 1.0, 1.0).unwrap();
        assert_eq!(big, Magnitude::Overflow { log_value: 900.0 });
        assert_eq!(big.to_string(), "overflow(exp(900))");
    }

    #[test]
    fn sigma_antisymmetry_and_dims() {
        let a = v(&[1.0, 2.0, -0.5, 0.3]);
        let b = v(&[0.7, -1.0, 2.0, 0.1]);
        assert_eq!(a.sigma(&b).unwrap(), -b.sigma(&a).unwrap());
        assert!(a.sigma(&v(&[1.0, 0.0])).is_err());
        assert!(PhaseVector::from_slice(&[1.0]).is_err());
    }
}

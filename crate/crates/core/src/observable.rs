//! Classical observables `A(x, p)` and their Weyl quantizations.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::field::{FieldLabel, PhaseSpaceField};
use crate::fourier::{apply_momentum_function, upsample2};
use crate::grid::GridSpec;
use crate::wavefunction::WaveFunction;

/// Highest total degree accepted for polynomial symbols.
pub const MAX_DEGREE: u32 = 4;

/// `coeff * x^x_power * p^p_power`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monomial {
    pub x_power: u32,
    pub p_power: u32,
    pub coeff: f64,
}

impl Monomial {
    pub fn new(x_power: u32, p_power: u32, coeff: f64) -> Self {
        Self { x_power, p_power, coeff }
    }

    pub fn degree(&self) -> u32 {
        self.x_power + self.p_power
    }

    fn eval(&self, x: f64, p: f64) -> f64 {
        self.coeff * x.powi(self.x_power as i32) * p.powi(self.p_power as i32)
    }

    /// Monomials whose Weyl quantization has a hard-coded symbolic form:
    /// pure powers of `x` or `p`, and `x p -> (x^ p^ + p^ x^)/2`.
    pub fn has_symbolic_rule(&self) -> bool {
        self.x_power == 0 || self.p_power == 0 || (self.x_power == 1 && self.p_power == 1)
    }
}

/// Real polynomial symbol, Weyl-ordered on quantization.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn new(terms: Vec<Monomial>) -> Result<Self> {
        for t in &terms {
            if t.degree() > MAX_DEGREE {
                return Err(Error::InvalidInput(format!(
                    "monomial x^{} p^{} exceeds degree {MAX_DEGREE}",
                    t.x_power, t.p_power
                )));
            }
            if !t.coeff.is_finite() {
                return Err(Error::InvalidInput("non-finite polynomial coefficient".into()));
            }
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn eval(&self, x: f64, p: f64) -> f64 {
        self.terms.iter().fold(0.0, |acc, t| acc + t.eval(x, p))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.degree() == 0 || t.coeff == 0.0)
    }
}

/// A classical observable: polynomial symbol or sampled real field.
#[derive(Debug, Clone, PartialEq)]
pub enum Observable {
    Poly(Polynomial),
    Sampled(PhaseSpaceField),
}

impl Observable {
    pub fn poly(terms: &[(u32, u32, f64)]) -> Result<Self> {
        Ok(Observable::Poly(Polynomial::new(
            terms.iter().map(|&(a, b, c)| Monomial::new(a, b, c)).collect(),
        )?))
    }

    pub fn constant(c: f64) -> Self {
        Self::poly(&[(0, 0, c)]).expect("degree 0")
    }

    pub fn position() -> Self {
        Self::poly(&[(1, 0, 1.0)]).expect("degree 1")
    }

    pub fn momentum() -> Self {
        Self::poly(&[(0, 1, 1.0)]).expect("degree 1")
    }

    /// `x^2 + p^2`
    pub fn oscillator() -> Self {
        Self::poly(&[(2, 0, 1.0), (0, 2, 1.0)]).expect("degree 2")
    }

    /// Wraps a sampled symbol; the field must be real to 1e-12.
    pub fn sampled(field: PhaseSpaceField) -> Result<Self> {
        let field = field.with_label(FieldLabel::Observable);
        field.check_invariants()?;
        Ok(Observable::Sampled(field))
    }

    /// Samples a real function on the grid.
    pub fn sampled_fn(grid: GridSpec, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        Self::sampled(PhaseSpaceField::from_fn(grid, FieldLabel::Observable, |x, p| C64::new(f(x, p), 0.0))?)
    }

    /// The symbol on the grid nodes.
    pub fn symbol_field(&self, grid: &GridSpec) -> Result<PhaseSpaceField> {
        match self {
            Observable::Poly(poly) => {
                PhaseSpaceField::from_fn(*grid, FieldLabel::Observable, |x, p| C64::new(poly.eval(x, p), 0.0))
            }
            Observable::Sampled(field) => {
                field.grid().ensure_same(grid)?;
                Ok(field.clone())
            }
        }
    }

    /// The symbol at reflection centers `(x_0 + j dx/2, p_k)`, `j = 0..2M`;
    /// sampled symbols are band-limited-interpolated along `x`.
    pub fn symbol_half_rows(&self, grid: &GridSpec) -> Result<Array2<C64>> {
        match self {
            Observable::Poly(poly) => {
                let ps = grid.p_nodes();
                Ok(Array2::from_shape_fn((2 * grid.len(), grid.len()), |(j, k)| {
                    C64::new(poly.eval(grid.x_half(j), ps[k]), 0.0)
                }))
            }
            Observable::Sampled(field) => {
                field.grid().ensure_same(grid)?;
                Ok(half_rows(field))
            }
        }
    }

    /// `sup |A|` over the grid nodes.
    pub fn sup_abs(&self, grid: &GridSpec) -> Result<f64> {
        Ok(self.symbol_field(grid)?.max_abs())
    }

    /// `(min A, max A)` over the grid nodes.
    pub fn range(&self, grid: &GridSpec) -> Result<(f64, f64)> {
        let f = self.symbol_field(grid)?;
        Ok(f.values().iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| (lo.min(c.re), hi.max(c.re))))
    }
}

/// Interpolates the rows of `field` onto the half-step lattice in `x`.
pub(crate) fn half_rows(field: &PhaseSpaceField) -> Array2<C64> {
    let m = field.grid().len();
    let mut out = Array2::<C64>::zeros((2 * m, m));
    for (k, col) in field.values().columns().into_iter().enumerate() {
        let fine = upsample2(&col.to_vec());
        for (j, v) in fine.into_iter().enumerate() {
            out[[j, k]] = v;
        }
    }
    out
}

fn multiply_by_x_power(psi: &WaveFunction, a: u32) -> WaveFunction {
    let xs = psi.nodes();
    psi.map(|j, c| c * xs[j].powi(a as i32))
}

fn apply_p_power(psi: &WaveFunction, b: u32) -> WaveFunction {
    apply_momentum_function(psi, |p| C64::new(p.powi(b as i32), 0.0))
}

/// Applies the Weyl quantization of a monomial with a symbolic rule.
pub(crate) fn apply_symbolic_monomial(t: &Monomial, psi: &WaveFunction) -> WaveFunction {
    let c = C64::new(t.coeff, 0.0);
    let out = match (t.x_power, t.p_power) {
        (0, 0) => psi.clone(),
        (a, 0) => multiply_by_x_power(psi, a),
        (0, b) => apply_p_power(psi, b),
        (1, 1) => {
            let xp = multiply_by_x_power(&apply_p_power(psi, 1), 1);
            let px = apply_p_power(&multiply_by_x_power(psi, 1), 1);
            xp.combine(C64::new(0.5, 0.0), &px, C64::new(0.5, 0.0)).expect("same grid")
        }
        _ => unreachable!("no symbolic rule for x^{} p^{}", t.x_power, t.p_power),
    };
    out.scaled(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_cap() {
        assert!(Observable::poly(&[(3, 2, 1.0)]).is_err());
        assert!(Observable::poly(&[(2, 2, 1.0)]).is_ok());
        assert!(Observable::poly(&[(0, 0, f64::NAN)]).is_err());
    }

    #[test]
    fn sampled_must_be_real() {
        let g = GridSpec::new(32, 4.0, 1.0).unwrap();
        let complex = PhaseSpaceField::from_fn(g, FieldLabel::Generic, |x, _| C64::new(x, 1e-6)).unwrap();
        assert!(matches!(Observable::sampled(complex), Err(Error::NotReal { .. })));
    }

    #[test]
    fn half_rows_reproduce_poly_values() {
        let g = GridSpec::new(64, 8.0, 1.0).unwrap();
        let bump = |x: f64, p: f64| (-(x * x + p * p) / 2.0).exp();
        let sampled = Observable::sampled_fn(g, bump).unwrap();
        let half = sampled.symbol_half_rows(&g).unwrap();
        let ps = g.p_nodes();
        let err = half
            .indexed_iter()
            .map(|((j, k), v)| (v.re - bump(g.x_half(j), ps[k])).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-9, "{err}");
    }

    #[test]
    fn symmetric_xp_is_hermitian_combination() {
        // (x p + p x)/2 = x p - i hbar/2 on any state
        let g = GridSpec::new(256, 8.0, 1.0).unwrap();
        let psi = WaveFunction::from_fn(g, |x| C64::from_polar((-(x - 0.2).powi(2)).exp(), 0.3 * x)).unwrap();
        let sym = apply_symbolic_monomial(&Monomial::new(1, 1, 1.0), &psi);
        let xp = multiply_by_x_power(&apply_p_power(&psi, 1), 1);
        let expected = xp.combine(C64::new(1.0, 0.0), &psi, C64::new(0.0, -0.5)).unwrap();
        let err = sym.samples().iter().zip(expected.samples()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
    }
}

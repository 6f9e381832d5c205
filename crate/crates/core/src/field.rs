//! Complex fields sampled on the `(x, p)` grid.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::grid::GridSpec;

/// What a field represents; gates the invariant checks in
/// [`PhaseSpaceField::check_invariants`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldLabel {
    CrossWigner,
    Wigner,
    Rho,
    Observable,
    Generic,
}

impl FieldLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            FieldLabel::CrossWigner => "CROSS_WIGNER",
            FieldLabel::Wigner => "WIGNER",
            FieldLabel::Rho => "RHO",
            FieldLabel::Observable => "OBSERVABLE",
            FieldLabel::Generic => "GENERIC",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "CROSS_WIGNER" => FieldLabel::CrossWigner,
            "WIGNER" => FieldLabel::Wigner,
            "RHO" => FieldLabel::Rho,
            "OBSERVABLE" => FieldLabel::Observable,
            "GENERIC" => FieldLabel::Generic,
            _ => return None,
        })
    }
}

/// `M x M` complex matrix, row index = position node, column index =
/// momentum node (both ascending).
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceField {
    grid: GridSpec,
    values: Array2<C64>,
    label: FieldLabel,
}

impl PhaseSpaceField {
    pub fn new(grid: GridSpec, values: Array2<C64>, label: FieldLabel) -> Result<Self> {
        let m = grid.len();
        if values.dim() != (m, m) {
            return Err(Error::InvalidInput(format!(
                "field shape {:?} does not match grid size {m}",
                values.dim()
            )));
        }
        if values.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidInput("non-finite field entry".into()));
        }
        Ok(Self { grid, values, label })
    }

    /// Samples `f(x, p)` on the grid.
    pub fn from_fn(grid: GridSpec, label: FieldLabel, f: impl Fn(f64, f64) -> C64) -> Result<Self> {
        let xs = grid.x_nodes();
        let ps = grid.p_nodes();
        let values = Array2::from_shape_fn((grid.len(), grid.len()), |(j, k)| f(xs[j], ps[k]));
        Self::new(grid, values, label)
    }

    pub(crate) fn from_parts(grid: GridSpec, values: Array2<C64>, label: FieldLabel) -> Self {
        Self { grid, values, label }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &Array2<C64> {
        &self.values
    }

    pub fn label(&self) -> FieldLabel {
        self.label
    }

    pub fn with_label(mut self, label: FieldLabel) -> Self {
        self.label = label;
        self
    }

    pub fn get(&self, j: usize, k: usize) -> C64 {
        self.values[[j, k]]
    }

    pub fn map(&self, label: FieldLabel, f: impl Fn(C64) -> C64) -> Self {
        Self { grid: self.grid, values: self.values.mapv(f), label }
    }

    pub fn scaled(&self, s: C64) -> Self {
        self.map(self.label, |c| s * c)
    }

    pub fn conj(&self) -> Self {
        self.map(self.label, |c| c.conj())
    }

    pub fn real_part(&self, label: FieldLabel) -> Self {
        self.map(label, |c| C64::new(c.re, 0.0))
    }

    /// Entrywise `a * self + b * other`.
    pub fn combine(&self, a: C64, other: &PhaseSpaceField, b: C64, label: FieldLabel) -> Result<Self> {
        self.grid.ensure_same(&other.grid)?;
        let values = ndarray::Zip::from(&self.values)
            .and(&other.values)
            .map_collect(|&u, &v| a * u + b * v);
        Ok(Self { grid: self.grid, values, label })
    }

    /// Riemann sum `sum_{j,k} F(x_j, p_k) dx dp`, row-major order.
    pub fn integral(&self) -> C64 {
        self.values.iter().fold(C64::new(0.0, 0.0), |acc, &c| acc + c) * self.grid.cell()
    }

    /// Riemann sum of `F * G` over the grid.
    pub fn integral_product(&self, other: &PhaseSpaceField) -> Result<C64> {
        self.grid.ensure_same(&other.grid)?;
        let sum = self
            .values
            .iter()
            .zip(other.values.iter())
            .fold(C64::new(0.0, 0.0), |acc, (&a, &b)| acc + a * b);
        Ok(sum * self.grid.cell())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().fold(0.0, |m, c| m.max(c.im.abs()))
    }

    pub fn max_abs_diff(&self, other: &PhaseSpaceField) -> Result<f64> {
        self.grid.ensure_same(&other.grid)?;
        Ok(self
            .values
            .iter()
            .zip(other.values.iter())
            .fold(0.0, |m, (a, b)| m.max((a - b).norm())))
    }

    /// Label-specific invariants: Wigner fields are real, rho fields
    /// integrate to one.
    pub fn check_invariants(&self) -> Result<()> {
        match self.label {
            FieldLabel::Wigner => {
                let max_imag = self.max_imag();
                if max_imag >= 1e-10 {
                    return Err(Error::NotReal { max_imag });
                }
            }
            FieldLabel::Rho => {
                let total = self.integral();
                if (total - C64::new(1.0, 0.0)).norm() >= 1e-6 {
                    return Err(Error::InvalidInput(format!("rho integrates to {total}, not 1")));
                }
            }
            FieldLabel::Observable => {
                let max_imag = self.max_imag();
                if max_imag >= 1e-12 {
                    return Err(Error::NotReal { max_imag });
                }
            }
            FieldLabel::CrossWigner | FieldLabel::Generic => {}
        }
        Ok(())
    }
}

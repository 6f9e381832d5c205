//! Sampled wavefunctions and their inner products.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::grid::GridSpec;

/// Tail-mass fraction below which a state counts as well-contained.
pub const CONTAINMENT_TOLERANCE: f64 = 1e-10;

/// Which grid the samples live on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Position,
    Momentum,
}

/// Complex samples of a state on the position (or momentum) nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    grid: GridSpec,
    samples: Vec<C64>,
    repr: Representation,
}

impl WaveFunction {
    pub fn new(grid: GridSpec, samples: Vec<C64>) -> Result<Self> {
        Self::with_representation(grid, samples, Representation::Position)
    }

    pub fn with_representation(grid: GridSpec, samples: Vec<C64>, repr: Representation) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} samples, got {}",
                grid.len(),
                samples.len()
            )));
        }
        if let Some(j) = samples.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidInput(format!("non-finite sample at index {j}")));
        }
        Ok(Self { grid, samples, repr })
    }

    /// Samples `f` at the position nodes.
    pub fn from_fn(grid: GridSpec, f: impl Fn(f64) -> C64) -> Result<Self> {
        Self::new(grid, grid.x_nodes().into_iter().map(f).collect())
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self { grid, samples: vec![C64::new(0.0, 0.0); grid.len()], repr: Representation::Position }
    }

    pub(crate) fn from_parts(grid: GridSpec, samples: Vec<C64>, repr: Representation) -> Self {
        debug_assert_eq!(samples.len(), grid.len());
        Self { grid, samples, repr }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<C64> {
        self.samples
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    /// Node spacing of the representation the samples live in.
    pub fn spacing(&self) -> f64 {
        match self.repr {
            Representation::Position => self.grid.dx(),
            Representation::Momentum => self.grid.dp(),
        }
    }

    /// Node coordinates of the representation the samples live in.
    pub fn nodes(&self) -> Vec<f64> {
        match self.repr {
            Representation::Position => self.grid.x_nodes(),
            Representation::Momentum => self.grid.p_nodes(),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.samples.iter().fold(0.0, |acc, c| acc + c.norm_sqr()) * self.spacing()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroState);
        }
        Ok(self.scaled(C64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, s: C64) -> Self {
        self.map(|_, c| s * c)
    }

    pub fn map(&self, f: impl Fn(usize, C64) -> C64) -> Self {
        let samples = self.samples.iter().enumerate().map(|(j, &c)| f(j, c)).collect();
        Self { grid: self.grid, samples, repr: self.repr }
    }

    /// `a * self + b * other`
    pub fn combine(&self, a: C64, other: &WaveFunction, b: C64) -> Result<Self> {
        self.ensure_compatible(other)?;
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(&u, &v)| a * u + b * v)
            .collect();
        Ok(Self { grid: self.grid, samples, repr: self.repr })
    }

    pub fn add(&self, other: &WaveFunction) -> Result<Self> {
        self.combine(C64::new(1.0, 0.0), other, C64::new(1.0, 0.0))
    }

    pub(crate) fn ensure_compatible(&self, other: &WaveFunction) -> Result<()> {
        self.grid.ensure_same(&other.grid)?;
        if self.repr != other.repr {
            return Err(Error::GridMismatch(format!(
                "{:?} representation vs {:?} representation",
                self.repr, other.repr
            )));
        }
        Ok(())
    }

    /// Fraction of the squared norm carried by the outermost 5% of nodes.
    pub fn tail_fraction(&self) -> f64 {
        let total = self.samples.iter().fold(0.0, |acc, c| acc + c.norm_sqr());
        if total == 0.0 {
            return 0.0;
        }
        let nb = self.grid.boundary_nodes();
        let m = self.samples.len();
        let tail = self.samples[..nb]
            .iter()
            .chain(&self.samples[m - nb..])
            .fold(0.0, |acc, c| acc + c.norm_sqr());
        tail / total
    }

    pub fn is_well_contained(&self) -> bool {
        self.tail_fraction() < CONTAINMENT_TOLERANCE
    }

    pub fn ensure_contained(&self) -> Result<()> {
        let tail_fraction = self.tail_fraction();
        if tail_fraction < CONTAINMENT_TOLERANCE {
            Ok(())
        } else {
            Err(Error::Containment { tail_fraction, at_time: None })
        }
    }

    /// `<x^k>` computed with position samples (not normalized by the norm).
    pub fn position_moment(&self, k: i32) -> f64 {
        let dx = self.spacing();
        self.nodes()
            .iter()
            .zip(&self.samples)
            .fold(0.0, |acc, (x, c)| acc + x.powi(k) * c.norm_sqr())
            * dx
    }
}

/// `<phi|psi> = sum_j conj(phi_j) psi_j dx`, conjugate-linear in the first slot.
pub fn inner_product(phi: &WaveFunction, psi: &WaveFunction) -> Result<C64> {
    phi.ensure_compatible(psi)?;
    let sum = phi
        .samples
        .iter()
        .zip(&psi.samples)
        .fold(C64::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b);
    Ok(sum * phi.spacing())
}

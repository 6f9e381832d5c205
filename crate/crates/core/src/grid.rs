//! Position/momentum discretization and phase-space points.
//!
//! Both grids are "signed-index" grids: `x_j = (j - M/2) dx` and
//! `p_k = (k - M/2) dp` for `j, k = 0..M`, with `dx dp M = 2 pi hbar`. In
//! particular `x_0 = -L` and the node `j = M/2` sits at the origin. Fields and
//! momentum-space samples are always stored in ascending order.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Discretization of the one-dimensional configuration space and its dual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    num_points: usize,
    half_width: f64,
    hbar: f64,
}

impl GridSpec {
    /// Smallest admissible number of nodes.
    pub const MIN_POINTS: usize = 8;

    pub fn new(num_points: usize, half_width: f64, hbar: f64) -> Result<Self> {
        if num_points < Self::MIN_POINTS || !num_points.is_power_of_two() {
            return Err(Error::InvalidGrid {
                field: "M",
                reason: format!("must be a power of two >= {}, got {num_points}", Self::MIN_POINTS),
            });
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidGrid {
                field: "L",
                reason: format!("must be finite and positive, got {half_width}"),
            });
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidGrid {
                field: "hbar",
                reason: format!("must be finite and positive, got {hbar}"),
            });
        }
        Ok(Self { num_points, half_width, hbar })
    }

    /// `M`
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.num_points
    }

    /// `L`
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.num_points as f64
    }

    pub fn dp(&self) -> f64 {
        2.0 * PI * self.hbar / (self.num_points as f64 * self.dx())
    }

    /// Phase-space cell `dx dp`.
    pub fn cell(&self) -> f64 {
        self.dx() * self.dp()
    }

    pub fn x(&self, j: usize) -> f64 {
        (j as f64 - (self.num_points / 2) as f64) * self.dx()
    }

    pub fn p(&self, k: usize) -> f64 {
        (k as f64 - (self.num_points / 2) as f64) * self.dp()
    }

    pub fn x_nodes(&self) -> Vec<f64> {
        (0..self.num_points).map(|j| self.x(j)).collect()
    }

    pub fn p_nodes(&self) -> Vec<f64> {
        (0..self.num_points).map(|k| self.p(k)).collect()
    }

    /// Position of the `j`-th node of the half-step lattice `x_0 + j dx/2`,
    /// `j = 0..2M`.
    pub fn x_half(&self, j: usize) -> f64 {
        -self.half_width + 0.5 * j as f64 * self.dx()
    }

    /// Number of boundary nodes on each side inspected by containment checks:
    /// the outermost 5% of all nodes, split evenly between both ends.
    pub fn boundary_nodes(&self) -> usize {
        ((0.025 * self.num_points as f64).ceil() as usize).max(1)
    }

    pub fn ensure_same(&self, other: &GridSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "(M={}, L={}, hbar={}) vs (M={}, L={}, hbar={})",
                self.num_points, self.half_width, self.hbar, other.num_points, other.half_width, other.hbar
            )))
        }
    }

    /// Rounds a point to the nearest `(dx, dp)` node offsets. Idempotent.
    pub fn snap_to_nodes(&self, z: PhaseSpacePoint) -> Snapped {
        let snapped = PhaseSpacePoint::new(
            (z.x / self.dx()).round() * self.dx(),
            (z.p / self.dp()).round() * self.dp(),
        );
        Snapped { requested: z, used: snapped }
    }
}

/// A point `z = (x, p)` of the two-dimensional phase space.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhaseSpacePoint {
    pub x: f64,
    pub p: f64,
}

impl PhaseSpacePoint {
    pub const ORIGIN: PhaseSpacePoint = PhaseSpacePoint { x: 0.0, p: 0.0 };

    pub const fn new(x: f64, p: f64) -> Self {
        Self { x, p }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.p.is_finite()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.x * self.x + self.p * self.p
    }

    /// Symplectic form `sigma(z, z') = p x' - p' x`.
    pub fn sigma(&self, other: &PhaseSpacePoint) -> f64 {
        self.p * other.x - other.p * self.x
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(s * self.x, s * self.p)
    }
}

impl std::ops::Add for PhaseSpacePoint {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.p + rhs.p)
    }
}

impl std::ops::Sub for PhaseSpacePoint {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.p - rhs.p)
    }
}

impl std::ops::Neg for PhaseSpacePoint {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.p)
    }
}

/// A phase-space point after snapping, together with the value requested.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Snapped {
    pub requested: PhaseSpacePoint,
    pub used: PhaseSpacePoint,
}

impl Snapped {
    pub fn delta(&self) -> PhaseSpacePoint {
        self.used - self.requested
    }
}

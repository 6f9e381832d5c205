use thiserror::Error;

/// Errors produced by the numerical modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A grid parameter failed validation.
    #[error("invalid grid: {field}: {reason}")]
    InvalidGrid { field: &'static str, reason: String },

    /// Two objects that must share a grid do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Norm mass reaches the grid boundary (or would be pushed off-grid).
    #[error("containment lost{}: tail mass fraction {tail_fraction:.3e}", at_time.map(|t| format!(" at t = {t}")).unwrap_or_default())]
    Containment {
        tail_fraction: f64,
        at_time: Option<f64>,
    },

    /// The overlap between pre- and post-selected states is too small for a
    /// weak value to be meaningful.
    #[error("states are orthogonal to working precision: |<phi|psi>| = {overlap_abs:.3e} (threshold {threshold:.3e})")]
    Orthogonal { overlap_abs: f64, threshold: f64 },

    /// The reconstruction window is (nearly) orthogonal to the reference state.
    #[error("ill-conditioned reconstruction: |<phi|gamma>| = {overlap_abs:.3e}")]
    Conditioning { overlap_abs: f64 },

    /// A finite basis does not capture enough of a state's norm.
    #[error("insufficient basis coverage: captured fraction {captured:.12}")]
    Coverage { captured: f64 },

    /// The imaginary part of an auto-Wigner transform is not negligible.
    #[error("Wigner transform is not real: max |Im| = {max_imag:.3e}")]
    NotReal { max_imag: f64 },

    /// The state has zero norm.
    #[error("zero state")]
    ZeroState,

    /// Any other violated precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

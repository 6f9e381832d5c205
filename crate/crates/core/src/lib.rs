//! Cross-Wigner transforms, complex quasi-probability distributions of
//! pre- and post-selected state pairs, and weak values of observables.
//!
//! The grid numerics are one-dimensional; [`analytic`] carries the
//! closed-form coherent-state results in any number of degrees of freedom.

pub mod analytic;
pub mod conventions;
pub mod error;
pub mod evolve;
pub mod field;
pub mod fourier;
pub mod grid;
pub mod observable;
pub mod operators;
pub mod reconstruct;
pub mod states;
pub mod wavefunction;
pub mod weakval;
pub mod xwigner;

pub use error::{Error, Result};
pub use field::{FieldLabel, PhaseSpaceField};
pub use grid::{GridSpec, PhaseSpacePoint, Snapped};
pub use observable::Observable;
pub use num_complex::Complex64;
pub use wavefunction::{inner_product, Representation, WaveFunction};

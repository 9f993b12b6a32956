//! Entanglement detection for bipartite quantum states through uncertainty
//! relations.
//!
//! The crate is organised bottom-up:
//!
//! - [`matrix`]: dense complex matrices, Kronecker products, partial
//!   transposition and a Jacobi eigensolver for Hermitian matrices.
//! - [`states`]: validated density matrices, Bell states and Bell-diagonal
//!   coordinates, the noise-ball sampler and the PPT test.
//! - [`criteria`]: variance-based local uncertainty relations, the nonlinear
//!   witness they induce, and Shannon/Tsallis entropic criteria.
//! - [`experiments`]: the detection-fraction sweep and the Bell-diagonal
//!   geometry scan, with CSV output.

pub mod criteria;
pub mod error;
pub mod experiments;
pub mod matrix;
pub mod states;

pub use error::{Error, Invariant, InvariantViolation, Result};
pub use matrix::{ComplexMatrix, Spectrum};
pub use states::{DensityMatrix, PureState};

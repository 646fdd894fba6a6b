//! Relative-error figure of merit for state-dependent quantum cloning.
//!
//! The crate is organised bottom-up:
//!
//! - [`qstate`]: density operators, pure states, channels, fidelity and the
//!   distance measures derived from it (Bures angle, sine distance, Bures metric).
//! - [`bounds`]: cloning scenarios, the relative error, its two-state and
//!   multi-state lower bounds, and the competing optimality criteria for two
//!   pure states together with their asymptotic expansions.
//! - [`optimize`]: the constrained sine-sum minimisations behind the bounds,
//!   solved in closed form (two variables) or by vertex enumeration, plus a grid
//!   oracle for cross-checking.
//! - [`circuit`]: the optimal two-state cloning circuit built from
//!   distinguishability transfer gates and a statevector simulator to verify it.
//!
//! Every numerical threshold lives in [`Tolerances`].

#![forbid(unsafe_code)]

pub mod bounds;
pub mod circuit;
mod error;
pub(crate) mod linalg;
pub mod optimize;
pub mod qstate;
mod tolerance;

pub use error::{Error, Result};
pub use tolerance::Tolerances;

pub use num_complex::Complex64;

/// Dense complex matrix used throughout the crate.
pub type CMatrix = nalgebra::DMatrix<Complex64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<Complex64>;

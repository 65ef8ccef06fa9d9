//! Numerical analysis of exceptional points (EPs) of small dense
//! non-Hermitian matrices.
//!
//! The crate detects degenerate Jordan structures, solves the transition
//! relation `H Q = Q J`, constructs quasi-Hermitian metric operators,
//! classifies unitarity domains in parameter space and measures
//! perturbation-unfolding exponents. A family of 6×6 model Hamiltonians
//! with known EP structure is built in as fixtures ([`models`]).
//!
//! Everything is plain dense double-precision linear algebra aimed at
//! matrix dimensions up to roughly 32; see [`linalg`] for the substrate.

pub mod error;
pub mod jordan;
pub mod linalg;
pub mod metric;
pub mod models;
pub mod secular;
pub mod sweep;
pub mod transition;

pub use error::Error;
pub use linalg::{Mat, Polynomial, ToleranceConfig};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

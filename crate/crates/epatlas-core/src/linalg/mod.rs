//! Self-contained dense complex linear algebra for small matrices.
//!
//! Everything here targets dimensions up to roughly N ≈ 32: characteristic
//! polynomials are computed by the Faddeev–LeVerrier recursion (exact in
//! exact arithmetic, which keeps integer-entry fixtures bit-clean),
//! polynomial roots by Aberth–Ehrlich simultaneous iteration, and
//! rank/kernel questions by Gaussian elimination with complete pivoting.
//! No QR/Schur machinery; conditioning at these sizes does not call for it,
//! and the polynomial route keeps multiplicity structure visible near
//! eigenvalue coalescence.

mod io;
mod matrix;
mod poly;
mod roots;
pub(crate) mod solve;

pub use io::{matrix_from_csv, matrix_from_json, matrix_to_csv, matrix_to_json};
pub use matrix::{vec_norm, Mat};
pub use poly::{char_poly, Polynomial};
pub use roots::{eigenvalues, poly_roots};
pub use solve::{det, inverse, null_space, rank, solve_affine, AffineSolution};

use crate::Result;

/// Numerical tolerances shared across the crate.
///
/// `rank_rel_tol` is relative to the largest pivot encountered, so mixed
/// entry magnitudes (the fixtures mix 1s with products of 9s) do not skew
/// rank decisions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Pivot cutoff for rank decisions, relative to the largest pivot.
    pub rank_rel_tol: f64,
    /// Scaled backward-error target for polynomial roots.
    pub root_abs_tol: f64,
    /// Relative residual accepted for linear solves and verification.
    pub residual_tol: f64,
    /// Iteration cap for the root finder.
    pub max_iter: usize,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            rank_rel_tol: 1e-10,
            root_abs_tol: 1e-12,
            residual_tol: 1e-9,
            max_iter: 200,
        }
    }
}

impl ToleranceConfig {
    /// Rejects non-positive tolerances and a zero iteration budget.
    pub fn validate(&self) -> Result<()> {
        if !(self.rank_rel_tol > 0.0) {
            return Err(crate::Error::BadTolerance(format!(
                "rank_rel_tol must be > 0, got {}",
                self.rank_rel_tol
            )));
        }
        if !(self.root_abs_tol > 0.0) {
            return Err(crate::Error::BadTolerance(format!(
                "root_abs_tol must be > 0, got {}",
                self.root_abs_tol
            )));
        }
        if !(self.residual_tol > 0.0) {
            return Err(crate::Error::BadTolerance(format!(
                "residual_tol must be > 0, got {}",
                self.residual_tol
            )));
        }
        if self.max_iter == 0 {
            return Err(crate::Error::BadTolerance(
                "max_iter must be positive".into(),
            ));
        }
        Ok(())
    }
}

//! Rank, kernels, linear solves and determinants via Gaussian elimination
//! with complete pivoting.

use num_complex::Complex64;

use super::matrix::{vec_norm, Mat};
use super::ToleranceConfig;
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Result of one complete-pivoting forward elimination.
struct Elimination {
    /// Working matrix after row/column swaps and elimination.
    w: Mat,
    /// `col_perm[k]` = original column index now sitting at position k.
    col_perm: Vec<usize>,
    rank: usize,
    /// Number of row+column swaps (determinant sign bookkeeping).
    swaps: usize,
    /// A pivot decision fell within a factor 5 of the cutoff.
    ambiguous: bool,
}

/// Forward elimination with complete pivoting. A pivot is accepted iff its
/// magnitude exceeds `rel_tol ×` (the first, largest pivot). `rhs`, when
/// given, receives the same row operations.
fn eliminate(m: &Mat, rel_tol: f64, mut rhs: Option<&mut Vec<Complex64>>) -> Elimination {
    let rows = m.rows();
    let cols = m.cols();
    let steps = rows.min(cols);
    let mut w = m.clone();
    let mut col_perm: Vec<usize> = (0..cols).collect();
    let mut swaps = 0usize;
    let mut ambiguous = false;
    let mut threshold = 0.0f64;
    let mut rank = 0usize;

    for k in 0..steps {
        // largest-magnitude entry of the trailing submatrix
        let mut best = (k, k);
        let mut best_mag = 0.0f64;
        for i in k..rows {
            for j in k..cols {
                let mag = w[(i, j)].norm();
                if mag > best_mag {
                    best_mag = mag;
                    best = (i, j);
                }
            }
        }
        if k == 0 {
            threshold = rel_tol * best_mag;
            if best_mag == 0.0 {
                return Elimination {
                    w,
                    col_perm,
                    rank: 0,
                    swaps,
                    ambiguous,
                };
            }
        }
        if best_mag <= threshold {
            if best_mag > threshold / 5.0 {
                ambiguous = true;
            }
            break;
        }
        if best_mag < 5.0 * threshold {
            ambiguous = true;
        }

        let (pi, pj) = best;
        if pi != k {
            for j in 0..cols {
                let tmp = w[(k, j)];
                w[(k, j)] = w[(pi, j)];
                w[(pi, j)] = tmp;
            }
            if let Some(b) = rhs.as_deref_mut() {
                b.swap(k, pi);
            }
            swaps += 1;
        }
        if pj != k {
            for i in 0..rows {
                let tmp = w[(i, k)];
                w[(i, k)] = w[(i, pj)];
                w[(i, pj)] = tmp;
            }
            col_perm.swap(k, pj);
            swaps += 1;
        }

        let pivot = w[(k, k)];
        for i in (k + 1)..rows {
            let factor = w[(i, k)] / pivot;
            if factor == ZERO {
                continue;
            }
            w[(i, k)] = ZERO;
            for j in (k + 1)..cols {
                let delta = factor * w[(k, j)];
                w[(i, j)] -= delta;
            }
            if let Some(b) = rhs.as_deref_mut() {
                let delta = factor * b[k];
                b[i] -= delta;
            }
        }
        rank = k + 1;
    }

    Elimination {
        w,
        col_perm,
        rank,
        swaps,
        ambiguous,
    }
}

/// Numerical rank. A pivot counts iff its magnitude exceeds
/// `rank_rel_tol ×` the largest initial pivot.
pub fn rank(m: &Mat, cfg: &ToleranceConfig) -> usize {
    eliminate(m, cfg.rank_rel_tol, None).rank
}

/// Rank against an externally supplied magnitude scale instead of the
/// matrix's own largest pivot.
///
/// Needed for powers of a (near-)nilpotent matrix: when `P^k` vanishes in
/// exact arithmetic the computed power is pure rounding dirt, and a
/// dirt-relative cutoff would see it as full rank. The caller passes the
/// scale the power would have without cancellation (`‖P‖_F^k`).
pub(crate) fn rank_flagged_scaled(m: &Mat, rel_tol: f64, scale: f64) -> (usize, bool) {
    let first_pivot = m.max_abs();
    if first_pivot == 0.0 {
        return (0, false);
    }
    // eliminate() thresholds at rel_tol × first pivot; rescale the
    // requested absolute cutoff rel_tol × scale into that form
    let effective = (rel_tol * scale.max(first_pivot)) / first_pivot;
    if effective >= 1.0 {
        // the whole matrix sits below the cutoff
        return (0, first_pivot > rel_tol * scale / 5.0);
    }
    let e = eliminate(m, effective, None);
    (e.rank, e.ambiguous)
}

/// Orthonormal-ish basis of the numerical kernel, one column per kernel
/// dimension (`n - rank` columns; zero columns for full-rank input).
pub fn null_space(m: &Mat, cfg: &ToleranceConfig) -> Mat {
    null_space_inner(m, cfg.rank_rel_tol)
}

/// Kernel basis against an external magnitude scale; see
/// [`rank_flagged_scaled`] for why powers of near-nilpotent matrices need
/// this.
pub(crate) fn null_space_scaled(m: &Mat, rel_tol: f64, scale: f64) -> Mat {
    let first_pivot = m.max_abs();
    if first_pivot == 0.0 {
        return null_space_inner(m, rel_tol);
    }
    let effective = (rel_tol * scale.max(first_pivot)) / first_pivot;
    if effective >= 1.0 {
        // everything is below the cutoff: the kernel is the whole space
        let n = m.cols();
        return Mat::identity(n);
    }
    null_space_inner(m, effective)
}

fn null_space_inner(m: &Mat, rel_tol: f64) -> Mat {
    let cols = m.cols();
    let e = eliminate(m, rel_tol, None);
    let r = e.rank;
    let free = cols - r;
    let mut basis = Mat::zeros(cols, free);
    for (bi, f) in (r..cols).enumerate() {
        // back-substitute U[0..r,0..r] x = -U[0..r, f]
        let mut x = vec![ZERO; r];
        for i in (0..r).rev() {
            let mut acc = -e.w[(i, f)];
            for j in (i + 1)..r {
                acc -= e.w[(i, j)] * x[j];
            }
            x[i] = acc / e.w[(i, i)];
        }
        let mut v = vec![ZERO; cols];
        for (pos, &xi) in x.iter().enumerate() {
            v[e.col_perm[pos]] = xi;
        }
        v[e.col_perm[f]] = Complex64::new(1.0, 0.0);
        let norm = vec_norm(&v);
        for z in v.iter_mut() {
            *z /= norm;
        }
        basis.set_col(bi, &v);
    }
    // orthonormalize (modified Gram-Schmidt) so downstream chain searches
    // can combine columns without conditioning surprises
    for j in 0..free {
        let mut v = basis.col(j);
        for k in 0..j {
            let u = basis.col(k);
            let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(&u) {
                *vi -= proj * ui;
            }
        }
        let n = vec_norm(&v);
        if n > 0.0 {
            for z in v.iter_mut() {
                *z /= n;
            }
        }
        basis.set_col(j, &v);
    }
    basis
}

/// Solution of the affine system `A x = b` for square, possibly singular `A`.
#[derive(Debug, Clone)]
pub struct AffineSolution {
    /// A particular solution: the best candidate found even when the system
    /// is inconsistent under the tolerance.
    pub particular: Vec<Complex64>,
    /// Basis of the kernel of `A` (columns); empty for regular `A`.
    pub homogeneous_basis: Mat,
    /// `‖A·particular - b‖₂`.
    pub residual: f64,
    /// Whether `residual ≤ residual_tol × (‖A‖·‖x‖ + ‖b‖)`.
    pub consistent: bool,
}

/// Solves `A x = b` with complete pivoting, reporting consistency under
/// the residual tolerance plus a kernel basis.
pub fn solve_affine(a: &Mat, b: &[Complex64], cfg: &ToleranceConfig) -> Result<AffineSolution> {
    let n = a.require_square()?;
    if b.len() != n {
        return Err(Error::Dimension(format!(
            "rhs length {} for {}x{} matrix",
            b.len(),
            n,
            n
        )));
    }
    let mut rhs = b.to_vec();
    let e = eliminate(a, cfg.rank_rel_tol, Some(&mut rhs));
    let r = e.rank;
    // zero the free coordinates, back-substitute the pivot block
    let mut x_perm = vec![ZERO; n];
    for i in (0..r).rev() {
        let mut acc = rhs[i];
        for j in (i + 1)..r {
            acc -= e.w[(i, j)] * x_perm[j];
        }
        x_perm[i] = acc / e.w[(i, i)];
    }
    let mut x = vec![ZERO; n];
    for (pos, &xi) in x_perm.iter().enumerate().take(r) {
        x[e.col_perm[pos]] = xi;
    }
    let ax = a.mul_vec(&x);
    let residual = vec_norm(
        &ax.iter()
            .zip(b)
            .map(|(p, q)| p - q)
            .collect::<Vec<Complex64>>(),
    );
    let scale = a.frobenius_norm() * vec_norm(&x) + vec_norm(b);
    let consistent = residual <= cfg.residual_tol * scale.max(f64::MIN_POSITIVE);
    Ok(AffineSolution {
        particular: x,
        homogeneous_basis: null_space(a, cfg),
        residual,
        consistent,
    })
}

/// Determinant via complete-pivoting elimination (product of pivots with
/// swap-sign bookkeeping). Runs all n steps; an exactly-zero trailing
/// submatrix gives an exact zero.
pub fn det(m: &Mat) -> Result<Complex64> {
    let n = m.require_square()?;
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let e = eliminate(m, 0.0, None);
    if e.rank < n {
        return Ok(ZERO);
    }
    let mut d = Complex64::new(if e.swaps % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
    for k in 0..n {
        d *= e.w[(k, k)];
    }
    Ok(d)
}

/// Matrix inverse; fails with [`Error::Singular`] when a pivot falls below
/// machine-scale relative to the first pivot.
pub fn inverse(m: &Mat) -> Result<Mat> {
    let n = m.require_square()?;
    let mut aug = Mat::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = m[(i, j)];
        }
        aug[(i, n + i)] = Complex64::new(1.0, 0.0);
    }
    // complete pivoting restricted to the left block
    let mut col_perm: Vec<usize> = (0..n).collect();
    let mut first_pivot = 0.0f64;
    for k in 0..n {
        let mut best = (k, k);
        let mut best_mag = 0.0f64;
        for i in k..n {
            for j in k..n {
                let mag = aug[(i, j)].norm();
                if mag > best_mag {
                    best_mag = mag;
                    best = (i, j);
                }
            }
        }
        if k == 0 {
            first_pivot = best_mag;
        }
        if best_mag <= first_pivot * f64::EPSILON * n as f64 {
            return Err(Error::Singular);
        }
        let (pi, pj) = best;
        if pi != k {
            for j in 0..2 * n {
                let tmp = aug[(k, j)];
                aug[(k, j)] = aug[(pi, j)];
                aug[(pi, j)] = tmp;
            }
        }
        if pj != k {
            for i in 0..n {
                let tmp = aug[(i, k)];
                aug[(i, k)] = aug[(i, pj)];
                aug[(i, pj)] = tmp;
            }
            col_perm.swap(k, pj);
        }
        let pivot = aug[(k, k)];
        for i in 0..n {
            if i == k {
                continue;
            }
            let factor = aug[(i, k)] / pivot;
            if factor == ZERO {
                continue;
            }
            for j in k..2 * n {
                let delta = factor * aug[(k, j)];
                aug[(i, j)] -= delta;
            }
        }
    }
    // scale rows, then undo the column permutation (row permutation of the
    // inverse)
    let mut inv = Mat::zeros(n, n);
    for k in 0..n {
        let pivot = aug[(k, k)];
        for j in 0..n {
            inv[(col_perm[k], j)] = aug[(k, n + j)] / pivot;
        }
    }
    Ok(inv)
}

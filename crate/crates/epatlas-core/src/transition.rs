//! Canonical Jordan matrices and the transition relation `H Q = Q J`.
//!
//! At an EP the eigenvalue problem degenerates and the only surviving
//! linear-algebraic statement is the transition relation: an invertible Q
//! with `H Q = Q J` for the canonical block matrix J. Q is never unique —
//! any block-respecting upper-triangular-Toeplitz mixing on the right gives
//! another solution — so the solver accepts any invertible representative
//! and printed reference matrices are verified separately as fixtures.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::jordan::jordan_structure_at;
use crate::linalg::solve::null_space_scaled;
use crate::linalg::{det, rank, vec_norm, Mat, ToleranceConfig};
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Single upper-bidiagonal Jordan block `J^(n)(η)`.
pub fn jordan_block(n: usize, eta: Complex64) -> Mat {
    let mut j = Mat::zeros(n, n);
    for i in 0..n {
        j[(i, i)] = eta;
        if i + 1 < n {
            j[(i, i + 1)] = ONE;
        }
    }
    j
}

/// Eigenvalue plus block-size list describing a canonical Jordan matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalJordanSpec {
    pub eta: Complex64,
    /// Block sizes in the order they appear on the diagonal; must be
    /// non-empty with positive entries.
    pub blocks: Vec<usize>,
}

impl CanonicalJordanSpec {
    pub fn total_dim(&self) -> usize {
        self.blocks.iter().sum()
    }
}

/// Block-diagonal direct sum of Jordan blocks per the spec.
pub fn build_canonical_jordan(spec: &CanonicalJordanSpec) -> Mat {
    let n = spec.total_dim();
    let mut j = Mat::zeros(n, n);
    let mut offset = 0;
    for &b in &spec.blocks {
        for i in 0..b {
            j[(offset + i, offset + i)] = spec.eta;
            if i + 1 < b {
                j[(offset + i, offset + i + 1)] = ONE;
            }
        }
        offset += b;
    }
    j
}

/// A solved (or verified) transition relation.
#[derive(Debug, Clone)]
pub struct TransitionSolution {
    pub q: Mat,
    pub j: Mat,
    /// `‖HQ - QJ‖_F / (‖H‖_F ‖Q‖_F)`.
    pub residual: f64,
    pub det_q: Complex64,
    pub invertible: bool,
}

/// Residual/determinant report of [`verify_transition`].
#[derive(Debug, Clone, Serialize)]
pub struct TransitionCheck {
    pub residual: f64,
    #[serde(serialize_with = "crate::jordan::serialize_complex")]
    pub det_q: Complex64,
    pub invertible: bool,
}

fn relative_residual(h: &Mat, q: &Mat, j: &Mat) -> f64 {
    let lhs = h.matmul(q);
    let rhs = q.matmul(j);
    let num = (&lhs - &rhs).frobenius_norm();
    let scale = h.frobenius_norm() * q.frobenius_norm();
    if scale > 0.0 {
        num / scale
    } else {
        num
    }
}

/// Checks a given Q against `H Q = Q J`; reports the relative residual,
/// `det Q`, and rank-based invertibility. No mutation.
pub fn verify_transition(
    h: &Mat,
    q: &Mat,
    j: &Mat,
    cfg: &ToleranceConfig,
) -> Result<TransitionCheck> {
    let n = h.require_square()?;
    if q.rows() != n || q.cols() != n || j.rows() != n || j.cols() != n {
        return Err(Error::Dimension(format!(
            "H, Q, J must all be {n}x{n}; got Q {}x{}, J {}x{}",
            q.rows(),
            q.cols(),
            j.rows(),
            j.cols()
        )));
    }
    Ok(TransitionCheck {
        residual: relative_residual(h, q, j),
        det_q: det(q)?,
        invertible: rank(q, cfg) == n,
    })
}

/// Solves `H Q = Q J` for an invertible Q, J being the canonical matrix of
/// `spec`.
///
/// The Jordan structure of H at η is verified against `spec.blocks` first;
/// a mismatch is an error. Chains are built longest block first. A valid
/// start for an m-chain must lie in `null(P) ∩ range(P^(m-1))` (P = H-ηI),
/// which equals `P^(m-1) · null(P^m)`; so chain candidates are drawn as
/// tops `t ∈ null(P^m)` (canonical basis directions first, then seeded
/// pseudo-random combinations, 64 per block) and the whole chain comes out
/// as matrix-vector products `q_k = P^(m-k) t` — no consistency solves to
/// go wrong halfway. Starts are orthogonalized against the chains already
/// selected, with the matching top correction, which is what keeps equal
/// blocks from collapsing the rank of Q.
pub fn solve_transition(
    h: &Mat,
    spec: &CanonicalJordanSpec,
    cfg: &ToleranceConfig,
) -> Result<TransitionSolution> {
    let n = h.require_square()?;
    cfg.validate()?;
    if spec.blocks.is_empty() || spec.blocks.iter().any(|&b| b == 0) {
        return Err(Error::Domain("block list must be non-empty and positive".into()));
    }
    if spec.total_dim() != n {
        return Err(Error::Dimension(format!(
            "blocks sum to {}, matrix is {n}x{n}",
            spec.total_dim()
        )));
    }
    let structure = jordan_structure_at(h, spec.eta, cfg)?;
    let mut want = spec.blocks.clone();
    want.sort_unstable_by(|a, b| b.cmp(a));
    if structure.blocks != want {
        return Err(Error::SpecMismatch {
            expected: spec.blocks.clone(),
            found: structure.blocks,
        });
    }

    let p = h.shifted(spec.eta);
    let p_norm = p.frobenius_norm().max(f64::MIN_POSITIVE);

    // powers[k] = P^(k+1), up to the largest block
    let max_block = *spec.blocks.iter().max().unwrap();
    let mut powers: Vec<Mat> = Vec::with_capacity(max_block);
    powers.push(p.clone());
    for _ in 1..max_block {
        let next = powers.last().unwrap().matmul(&p);
        powers.push(next);
    }
    let apply_power = |k: usize, v: &[Complex64]| -> Vec<Complex64> {
        if k == 0 {
            v.to_vec()
        } else {
            powers[k - 1].mul_vec(v)
        }
    };

    // kernel bases of P^m for each needed block size; the power of a
    // nilpotent part cancels exactly, so the rank cutoff is taken against
    // the un-cancelled scale ‖P‖^m rather than the power's own pivots
    let kernel_of_power = |m: usize| -> Mat {
        null_space_scaled(&powers[m - 1], cfg.rank_rel_tol, p_norm.powi(m as i32))
    };
    let kernels: std::collections::BTreeMap<usize, Mat> = spec
        .blocks
        .iter()
        .map(|&m| (m, kernel_of_power(m)))
        .collect();

    // build longest chains first; remember each block's original position
    let mut order: Vec<usize> = (0..spec.blocks.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(spec.blocks[i]));

    let j = build_canonical_jordan(spec);
    let offsets: Vec<usize> = spec
        .blocks
        .iter()
        .scan(0usize, |acc, &b| {
            let off = *acc;
            *acc += b;
            Some(off)
        })
        .collect();

    for attempt in 0..8u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x45_50_51 + attempt);
        let mut q = Mat::zeros(n, n);
        // per selected chain: (orthonormal start, top, block size)
        let mut chosen: Vec<(Vec<Complex64>, Vec<Complex64>, usize)> = Vec::new();
        let mut complete = true;

        'blocks: for &bi in &order {
            let m = spec.blocks[bi];
            let basis = &kernels[&m];
            let dim = basis.cols();
            for candidate in 0..(dim + 64) {
                let coeffs: Vec<Complex64> = if candidate < dim {
                    (0..dim)
                        .map(|i| if i == candidate { ONE } else { ZERO })
                        .collect()
                } else {
                    (0..dim)
                        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                        .collect()
                };
                let mut top = vec![ZERO; n];
                for (i, &c) in coeffs.iter().enumerate() {
                    let col = basis.col(i);
                    for (ti, ci) in top.iter_mut().zip(&col) {
                        *ti += c * ci;
                    }
                }
                let mut start = apply_power(m - 1, &top);
                if vec_norm(&start) < 1e-10 {
                    continue; // top fell inside null(P^(m-1))
                }
                // orthogonalize the start against the chains already chosen,
                // correcting the top through the corresponding higher tops:
                // s_i = P^(m_i - m) applied to t_i lifts the subtraction
                for (s_i, t_i, m_i) in &chosen {
                    let proj: Complex64 = s_i.iter().zip(&start).map(|(a, b)| a.conj() * b).sum();
                    if proj == ZERO {
                        continue;
                    }
                    let lifted = apply_power(m_i - m, t_i);
                    for ((sv, si), (tv, li)) in start
                        .iter_mut()
                        .zip(s_i)
                        .zip(top.iter_mut().zip(&lifted))
                    {
                        *sv -= proj * si;
                        *tv -= proj * li;
                    }
                }
                let norm = vec_norm(&start);
                if norm < 1e-8 {
                    continue;
                }
                for (sv, tv) in start.iter_mut().zip(top.iter_mut()) {
                    *sv /= norm;
                    *tv /= norm;
                }

                for k in 1..=m {
                    q.set_col(offsets[bi] + k - 1, &apply_power(m - k, &top));
                }
                chosen.push((start, top, m));
                continue 'blocks;
            }
            complete = false;
            break;
        }

        if !complete {
            continue;
        }
        if rank(&q, cfg) == n {
            let residual = relative_residual(h, &q, &j);
            if residual > cfg.residual_tol {
                continue;
            }
            let det_q = det(&q)?;
            return Ok(TransitionSolution {
                q,
                j,
                residual,
                det_q,
                invertible: true,
            });
        }
    }
    Err(Error::DegenerateChain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn canonical_matrices_match_printed_forms() {
        let j42 = build_canonical_jordan(&CanonicalJordanSpec {
            eta: c(2.0, 0.0),
            blocks: vec![4, 2],
        });
        // superdiagonal 1s inside blocks only; none across the 4|2 seam
        assert_eq!(j42[(2, 3)], ONE);
        assert_eq!(j42[(3, 4)], ZERO);
        assert_eq!(j42[(4, 5)], ONE);
        assert_eq!(j42[(5, 5)], c(2.0, 0.0));

        let j222 = build_canonical_jordan(&CanonicalJordanSpec {
            eta: ZERO,
            blocks: vec![2, 2, 2],
        });
        for (i, j) in [(0, 1), (2, 3), (4, 5)] {
            assert_eq!(j222[(i, j)], ONE);
        }
        assert_eq!(j222[(1, 2)], ZERO);
        assert_eq!(j222[(3, 4)], ZERO);

        let j6 = build_canonical_jordan(&CanonicalJordanSpec {
            eta: ZERO,
            blocks: vec![6],
        });
        assert_eq!(j6, jordan_block(6, ZERO));
    }

    #[test]
    fn identity_is_admissible_for_canonical_input() {
        let j = build_canonical_jordan(&CanonicalJordanSpec {
            eta: ZERO,
            blocks: vec![2, 2, 2],
        });
        let check = verify_transition(&j, &Mat::identity(6), &j, &cfg()).unwrap();
        assert_eq!(check.residual, 0.0);
        assert!(check.invertible);
    }

    #[test]
    fn solves_h222_ep() {
        let h = models::h222_ep(0.0);
        let spec = CanonicalJordanSpec {
            eta: ZERO,
            blocks: vec![2, 2, 2],
        };
        let sol = solve_transition(&h, &spec, &cfg()).unwrap();
        assert!(sol.invertible);
        assert!(sol.residual < 1e-9, "residual {}", sol.residual);
    }

    #[test]
    fn printed_q_of_h222_is_exact() {
        let h = models::h222_ep(0.0);
        let q = models::h222_ep_printed_q();
        let j = build_canonical_jordan(&CanonicalJordanSpec {
            eta: ZERO,
            blocks: vec![2, 2, 2],
        });
        let check = verify_transition(&h, &q, &j, &cfg()).unwrap();
        assert_eq!(check.residual, 0.0); // integer arithmetic, exact in f64
        assert!(check.invertible);
    }

    #[test]
    fn printed_q_of_h42_has_det_26244() {
        let h = models::h42_ep();
        let q = models::h42_ep_printed_q();
        let j = build_canonical_jordan(&CanonicalJordanSpec {
            eta: ZERO,
            blocks: vec![4, 2],
        });
        let check = verify_transition(&h, &q, &j, &cfg()).unwrap();
        assert!(check.residual < 1e-12, "residual {}", check.residual);
        assert!((check.det_q - c(26244.0, 0.0)).norm() < 26244.0 * 1e-8);
    }

    #[test]
    fn solves_h42_spec_mismatch_rejected() {
        let h = models::h42_ep();
        let bad = CanonicalJordanSpec {
            eta: ZERO,
            blocks: vec![3, 3],
        };
        assert!(matches!(
            solve_transition(&h, &bad, &cfg()),
            Err(Error::SpecMismatch { .. })
        ));
    }

    #[test]
    fn solves_h42_and_tilde_family() {
        let sol = solve_transition(
            &models::h42_ep(),
            &CanonicalJordanSpec {
                eta: ZERO,
                blocks: vec![4, 2],
            },
            &cfg(),
        )
        .unwrap();
        assert!(sol.invertible);
        assert!(sol.residual < 1e-9);

        let sol6 = solve_transition(
            &models::h42_tilde(2.0),
            &CanonicalJordanSpec {
                eta: ZERO,
                blocks: vec![6],
            },
            &cfg(),
        )
        .unwrap();
        assert!(sol6.invertible);
        assert!(sol6.residual < 1e-9);
    }

    #[test]
    fn gamma_family_det_is_quartic() {
        // det Q(2γ)/det Q(γ) = 16
        let j = jordan_block(6, ZERO);
        let mut dets = Vec::new();
        for &g in &[0.5, 1.0, 2.0] {
            let check =
                verify_transition(&models::h42_tilde(g), &models::h42_tilde_printed_q(g), &j, &cfg())
                    .unwrap();
            assert!(check.residual < 1e-12, "residual {}", check.residual);
            dets.push(check.det_q);
        }
        for w in dets.windows(2) {
            let ratio = w[1] / w[0];
            assert!((ratio - c(16.0, 0.0)).norm() < 1e-6, "ratio {ratio}");
        }
        assert!((dets[1] - c(19131876.0, 0.0)).norm() < 19131876.0 * 1e-8);
    }

    #[test]
    fn commutant_mixing_also_verifies() {
        // Q·T with block-respecting upper-triangular-Toeplitz T stays valid
        let h = models::h222_ep(0.0);
        let q = models::h222_ep_printed_q();
        let spec = CanonicalJordanSpec {
            eta: ZERO,
            blocks: vec![2, 2, 2],
        };
        let j = build_canonical_jordan(&spec);
        let mut t = Mat::zeros(6, 6);
        for (off, coeffs) in [(0, (2.0, 0.7)), (2, (-1.0, 0.3)), (4, (0.5, -2.0))] {
            t[(off, off)] = c(coeffs.0, 0.0);
            t[(off + 1, off + 1)] = c(coeffs.0, 0.0);
            t[(off, off + 1)] = c(coeffs.1, 0.0);
        }
        let qt = q.matmul(&t);
        let check = verify_transition(&h, &qt, &j, &cfg()).unwrap();
        assert!(check.residual < 1e-13);
        assert!(check.invertible);
    }

    #[test]
    fn trivial_diagonal_verify() {
        let h = Mat::diagonal(&[c(1.0, 0.0), c(2.0, 0.0)]);
        let check = verify_transition(&h, &Mat::identity(2), &h, &cfg()).unwrap();
        assert_eq!(check.residual, 0.0);
    }
}

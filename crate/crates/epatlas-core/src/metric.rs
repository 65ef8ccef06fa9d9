//! Quasi-Hermitian metric operators.
//!
//! A non-Hermitian H with real spectrum becomes an ordinary observable once
//! a positive-definite Hermitian Θ with `H†Θ = ΘH` is found: Θ defines the
//! physical inner product `⟨a|Θ|b⟩`, factors as `Θ = Ω†Ω`, and the
//! similarity `h = ΩHΩ⁻¹` is Hermitian with the same spectrum. Θ is never
//! unique — the weights over left-eigenvector projectors stay free — so the
//! weights are an explicit argument here, defaulting to all ones, and the
//! anisotropy (condition number) of the chosen Θ is reported as the
//! diagnostic of how close to an EP the construction is operating.
//!
//! At an EP no positive-definite solution exists at all; that obstruction
//! is detected up front and reported as a dedicated error.

use num_complex::Complex64;

use crate::jordan::ep_classify;
use crate::linalg::{eigenvalues, inverse, null_space, Mat, ToleranceConfig};
use crate::{Error, Result};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A solved metric problem.
#[derive(Debug, Clone)]
pub struct MetricSolution {
    /// Hermitian solutions of `H†Θ = ΘH` spanning the constructed family
    /// (the left-eigenvector projectors, unit Frobenius norm).
    pub basis: Vec<Mat>,
    pub chosen_theta: Option<Mat>,
    pub positive_definite: bool,
    /// min eigenvalue / max eigenvalue of the chosen Θ; near-zero values
    /// flag a borderline (near-EP) metric.
    pub definiteness_margin: f64,
    pub weights: Vec<f64>,
    /// `‖H†Θ - ΘH‖_F / (‖H‖_F ‖Θ‖_F)`.
    pub intertwining_residual: f64,
}

/// Result of Hermitizing `H` with a factor Ω.
#[derive(Debug, Clone)]
pub struct HermitizationResult {
    pub omega: Mat,
    pub h: Mat,
    /// `‖h - h†‖_F / ‖h‖_F`.
    pub hermiticity_defect: f64,
}

fn quasi_hermiticity_residual(h: &Mat, theta: &Mat) -> f64 {
    let lhs = h.dagger().matmul(theta);
    let rhs = theta.matmul(h);
    let scale = h.frobenius_norm() * theta.frobenius_norm();
    if scale > 0.0 {
        (&lhs - &rhs).frobenius_norm() / scale
    } else {
        0.0
    }
}

/// Hermitian basis element k of the real n²-dimensional space of Hermitian
/// matrices: diagonal units first, then re/im units for each i<j pair.
fn hermitian_basis_element(n: usize, k: usize) -> Mat {
    let mut m = Mat::zeros(n, n);
    if k < n {
        m[(k, k)] = ONE;
        return m;
    }
    let mut idx = n;
    for i in 0..n {
        for j in (i + 1)..n {
            if idx == k {
                m[(i, j)] = ONE;
                m[(j, i)] = ONE;
                return m;
            }
            if idx + 1 == k {
                m[(i, j)] = Complex64::new(0.0, 1.0);
                m[(j, i)] = Complex64::new(0.0, -1.0);
                return m;
            }
            idx += 2;
        }
    }
    unreachable!("basis index {k} out of range for n = {n}")
}

/// Real coordinates of an anti-Hermitian matrix: imaginary diagonal parts,
/// then re/im of each entry above the diagonal.
fn anti_hermitian_coords(a: &Mat) -> Vec<f64> {
    let n = a.rows();
    let mut coords = Vec::with_capacity(n * n);
    for i in 0..n {
        coords.push(a[(i, i)].im);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            coords.push(a[(i, j)].re);
            coords.push(a[(i, j)].im);
        }
    }
    coords
}

/// Basis of all Hermitian solutions of `H†Θ = ΘH`.
///
/// The map `Θ ↦ H†Θ - ΘH` sends Hermitian matrices to anti-Hermitian ones;
/// restricting to the real Hermitian subspace halves the problem and makes
/// Hermiticity structural. The kernel of the resulting real n²×n²
/// representation is computed by elimination and reassembled into unit-norm
/// Hermitian matrices.
pub fn sylvester_metric_basis(h: &Mat, cfg: &ToleranceConfig) -> Result<Vec<Mat>> {
    let n = h.require_square()?;
    cfg.validate()?;
    let dim = n * n;
    let hd = h.dagger();
    let mut rep = Mat::zeros(dim, dim);
    for k in 0..dim {
        let e = hermitian_basis_element(n, k);
        let image = &hd.matmul(&e) - &e.matmul(h);
        let coords = anti_hermitian_coords(&image);
        for (row, &x) in coords.iter().enumerate() {
            rep[(row, k)] = Complex64::new(x, 0.0);
        }
    }
    let kernel = null_space(&rep, cfg);
    let mut basis = Vec::with_capacity(kernel.cols());
    for col in 0..kernel.cols() {
        let v = kernel.col(col);
        let mut theta = Mat::zeros(n, n);
        for (k, &c) in v.iter().enumerate() {
            // kernel of a real matrix: coefficients are real up to rounding
            let e = hermitian_basis_element(n, k);
            for i in 0..n {
                for j in 0..n {
                    theta[(i, j)] += Complex64::new(c.re, 0.0) * e[(i, j)];
                }
            }
        }
        let norm = theta.frobenius_norm();
        if norm == 0.0 {
            continue;
        }
        let theta = theta.scale(Complex64::new(1.0 / norm, 0.0));
        let res = quasi_hermiticity_residual(h, &theta);
        if res > cfg.residual_tol {
            return Err(Error::ResidualCheck(format!(
                "metric basis member violates the intertwining relation: residual {res:.3e}"
            )));
        }
        basis.push(theta);
    }
    Ok(basis)
}

/// Real eigenvalues of a Hermitian matrix (ascending), via the
/// characteristic polynomial.
fn hermitian_eigenvalues(theta: &Mat, cfg: &ToleranceConfig) -> Result<Vec<f64>> {
    let eigs = eigenvalues(theta, cfg)?;
    let mut vals: Vec<f64> = eigs.iter().map(|z| z.re).collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(vals)
}

/// Builds `Θ = Σ c_k |χ_k⟩⟨χ_k|` over the left eigenvectors of H (the rows
/// of the inverse right-eigenvector matrix), weights `c_k > 0`.
///
/// Fails with [`Error::EpObstruction`] for non-diagonalizable H (checked by
/// Jordan classification) and [`Error::BrokenReality`] for complex spectra;
/// both are exactly the cases where no positive-definite metric exists.
pub fn construct_positive_metric(
    h: &Mat,
    weights: &[f64],
    cfg: &ToleranceConfig,
) -> Result<MetricSolution> {
    let n = h.require_square()?;
    cfg.validate()?;
    if weights.len() != n {
        return Err(Error::Dimension(format!(
            "expected {n} weights, got {}",
            weights.len()
        )));
    }
    if weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
        return Err(Error::Domain("weights must be positive and finite".into()));
    }

    let classification = ep_classify(h, cfg, None)?;
    if !classification.diagonalizable() {
        return Err(Error::EpObstruction);
    }
    let mut etas: Vec<Complex64> = classification.structures.iter().map(|s| s.eta).collect();
    // simple spectrum: one eigenvalue per structure
    if etas.len() != n {
        return Err(Error::EpObstruction);
    }
    let reality_tol = cfg.residual_tol * (1.0 + etas.iter().map(|z| z.norm()).fold(0.0, f64::max));
    if etas.iter().any(|z| z.im.abs() > reality_tol) {
        return Err(Error::BrokenReality);
    }
    etas.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());

    // right eigenvectors, phase-fixed for determinism
    let mut v = Mat::zeros(n, n);
    for (k, &eta) in etas.iter().enumerate() {
        let ns = null_space(&h.shifted(eta), cfg);
        if ns.cols() != 1 {
            return Err(Error::EpObstruction);
        }
        let mut col = ns.col(0);
        let (mut max_mag, mut max_idx) = (0.0, 0);
        for (i, z) in col.iter().enumerate() {
            if z.norm() > max_mag {
                max_mag = z.norm();
                max_idx = i;
            }
        }
        let phase = col[max_idx] / col[max_idx].norm();
        for z in col.iter_mut() {
            *z /= phase;
        }
        v.set_col(k, &col);
    }
    let v_inv = inverse(&v)?;

    // Θ = W† C W, W = V⁻¹; the k-th row of W is the k-th left eigenvector
    let mut basis = Vec::with_capacity(n);
    let mut theta = Mat::zeros(n, n);
    for k in 0..n {
        let mut proj = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                proj[(i, j)] = v_inv[(k, i)].conj() * v_inv[(k, j)];
            }
        }
        for i in 0..n {
            for j in 0..n {
                theta[(i, j)] += Complex64::new(weights[k], 0.0) * proj[(i, j)];
            }
        }
        let norm = proj.frobenius_norm();
        basis.push(proj.scale(Complex64::new(1.0 / norm, 0.0)));
    }
    // enforce exact Hermiticity against rounding
    let theta = {
        let daggered = theta.dagger();
        (&theta + &daggered).scale(Complex64::new(0.5, 0.0))
    };

    let intertwining_residual = quasi_hermiticity_residual(h, &theta);
    if intertwining_residual > cfg.residual_tol {
        return Err(Error::ResidualCheck(format!(
            "constructed metric violates the intertwining relation: residual {intertwining_residual:.3e}"
        )));
    }
    let vals = hermitian_eigenvalues(&theta, cfg)?;
    let (min_eig, max_eig) = (vals[0], vals[n - 1]);
    let margin = if max_eig > 0.0 { min_eig / max_eig } else { -1.0 };
    Ok(MetricSolution {
        basis,
        chosen_theta: Some(theta),
        positive_definite: margin > cfg.rank_rel_tol,
        definiteness_margin: margin,
        weights: weights.to_vec(),
        intertwining_residual,
    })
}

/// Upper-triangular factor Ω with `Ω†Ω = Θ` (Cholesky, `Θ = LL†`, Ω = L†).
///
/// Fails on a non-positive leading minor, naming it (1-based).
pub fn factor_metric(theta: &Mat, cfg: &ToleranceConfig) -> Result<Mat> {
    let n = theta.require_square()?;
    cfg.validate()?;
    if !theta.is_hermitian(1e-10) {
        return Err(Error::Domain("factor_metric needs a Hermitian matrix".into()));
    }
    let scale = theta.max_abs().max(f64::MIN_POSITIVE);
    let mut l = Mat::zeros(n, n);
    for j in 0..n {
        let mut d = theta[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if d <= scale * 1e-14 {
            return Err(Error::NotPositiveDefinite { minor: j + 1 });
        }
        let ljj = d.sqrt();
        l[(j, j)] = Complex64::new(ljj, 0.0);
        for i in (j + 1)..n {
            let mut acc = theta[(i, j)];
            for k in 0..j {
                acc -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = acc / ljj;
        }
    }
    let omega = l.dagger();
    let recon = (&omega.dagger().matmul(&omega) - theta).frobenius_norm();
    if recon > cfg.residual_tol * theta.frobenius_norm() {
        return Err(Error::ResidualCheck(format!(
            "factor reconstruction residual {recon:.3e}"
        )));
    }
    Ok(omega)
}

/// Similarity `h = Ω H Ω⁻¹`; reports the Hermiticity defect of h.
pub fn hermitize(h: &Mat, omega: &Mat, cfg: &ToleranceConfig) -> Result<HermitizationResult> {
    let n = h.require_square()?;
    cfg.validate()?;
    if omega.rows() != n || omega.cols() != n {
        return Err(Error::Dimension(format!(
            "omega must be {n}x{n}, got {}x{}",
            omega.rows(),
            omega.cols()
        )));
    }
    let omega_inv = inverse(omega)?;
    let hh = omega.matmul(h).matmul(&omega_inv);
    let defect_num = (&hh - &hh.dagger()).frobenius_norm();
    let norm = hh.frobenius_norm();
    Ok(HermitizationResult {
        omega: omega.clone(),
        hermiticity_defect: if norm > 0.0 { defect_num / norm } else { 0.0 },
        h: hh,
    })
}

/// Anisotropy of a positive-definite metric: largest over smallest
/// eigenvalue (≥ 1). Grows without bound as the underlying H approaches an
/// EP — the reason perturbation "smallness" cannot be judged in the
/// unweighted norm there.
pub fn metric_condition(theta: &Mat, cfg: &ToleranceConfig) -> Result<f64> {
    theta.require_square()?;
    if !theta.is_hermitian(1e-10) {
        return Err(Error::Domain("metric_condition needs a Hermitian matrix".into()));
    }
    let vals = hermitian_eigenvalues(theta, cfg)?;
    let (min_eig, max_eig) = (vals[0], *vals.last().unwrap());
    if min_eig <= 0.0 {
        return Err(Error::NotPositiveDefinite { minor: 0 });
    }
    // ratio is ≥ 1 for Hermitian PD input; clamp away root-smear noise on
    // (near-)degenerate spectra
    Ok((max_eig / min_eig).max(1.0))
}

/// The weighted inner product `⟨a|Θ|b⟩`.
pub fn theta_inner_product(theta: &Mat, a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let tb = theta.mul_vec(b);
    a.iter().zip(&tb).map(|(x, y)| x.conj() * y).sum()
}

/// Euclidean inner product `⟨a|b⟩`.
pub fn inner_product(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `‖v‖` under the Θ-weighted inner product.
pub fn theta_norm(theta: &Mat, v: &[Complex64]) -> f64 {
    theta_inner_product(theta, v, v).re.max(0.0).sqrt()
}

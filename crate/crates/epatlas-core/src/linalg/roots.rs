//! Polynomial roots by Aberth–Ehrlich simultaneous iteration.

use num_complex::Complex64;

use super::poly::{char_poly, Polynomial};
use super::{Mat, ToleranceConfig};
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// All roots of `p`, with multiplicity.
///
/// Exactly-zero trailing coefficients are factored out first (those roots
/// are exact zeros, which matters for the integer-entry EP fixtures whose
/// characteristic polynomial is a pure power). The remainder is solved by
/// simultaneous Aberth–Ehrlich iteration started on a perturbed circle with
/// fixed angle offsets — no randomness, runs are reproducible bit for bit —
/// and each root gets a Newton polish.
///
/// Quality gate: the scaled backward error `|p(z)| / Σ|a_i||z|^i` of every
/// root must come out below `root_abs_tol × degree`, else the call fails
/// carrying the best iterates.
pub fn poly_roots(p: &Polynomial, cfg: &ToleranceConfig) -> Result<Vec<Complex64>> {
    cfg.validate()?;
    let p = p.monic();
    let degree = p.degree();
    if degree == 0 {
        return Ok(Vec::new());
    }

    // factor out exact roots at the origin
    let mut coeffs = p.coeffs().to_vec();
    let mut zeros_at_origin = 0usize;
    while coeffs.len() > 1 && coeffs[0] == ZERO {
        coeffs.remove(0);
        zeros_at_origin += 1;
    }
    let mut roots = vec![ZERO; zeros_at_origin];
    let reduced = Polynomial::new(coeffs);
    match reduced.degree() {
        0 => {}
        1 => roots.push(-reduced.coeffs()[0] / reduced.coeffs()[1]),
        2 => roots.extend(quadratic_roots(&reduced)),
        _ => roots.extend(aberth(&reduced, cfg)?),
    }
    Ok(roots)
}

/// Stable quadratic formula (monic input).
fn quadratic_roots(p: &Polynomial) -> [Complex64; 2] {
    let c = p.coeffs()[0] / p.coeffs()[2];
    let b = p.coeffs()[1] / p.coeffs()[2];
    let disc = (b * b - 4.0 * c).sqrt();
    // pick the sign that avoids cancellation in -b ∓ disc
    let q = if (b.conj() * disc).re >= 0.0 {
        -0.5 * (b + disc)
    } else {
        -0.5 * (b - disc)
    };
    if q.norm() > 0.0 {
        [q, c / q]
    } else {
        [ZERO, -b]
    }
}

fn aberth(p: &Polynomial, cfg: &ToleranceConfig) -> Result<Vec<Complex64>> {
    let m = p.degree();
    let dp = p.derivative();
    let eps = f64::EPSILON;

    // initial guesses on a circle of the geometric-mean root radius,
    // clamped by the Fujiwara bound; fixed angle offsets break both the
    // real-axis symmetry and the exact m-fold symmetry of pure powers
    let a_m = p.leading();
    let fujiwara = 2.0
        * (1..=m)
            .map(|k| (p.coeffs()[m - k] / a_m).norm().powf(1.0 / k as f64))
            .fold(0.0, f64::max);
    let r_geo = (p.coeffs()[0] / a_m).norm().powf(1.0 / m as f64);
    let radius = if fujiwara > 0.0 {
        r_geo.clamp(1e-12, fujiwara).max(1e-12)
    } else {
        1.0
    };
    let mut z: Vec<Complex64> = (0..m)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / m as f64 + 0.4 + 0.037 * j as f64;
            radius * Complex64::new(theta.cos(), theta.sin())
        })
        .collect();

    let mut converged = false;
    for _ in 0..cfg.max_iter {
        let mut next = z.clone();
        let mut max_step = 0.0f64;
        for i in 0..m {
            let pz = p.eval(z[i]);
            if pz == ZERO {
                continue;
            }
            let dpz = dp.eval(z[i]);
            let newton = if dpz == ZERO {
                // stationary point; nudge off it
                Complex64::new(eps.sqrt(), eps.sqrt())
            } else {
                pz / dpz
            };
            let mut repulsion = ZERO;
            for j in 0..m {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 0.0 {
                        repulsion += 1.0 / d;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm() > eps { newton / denom } else { newton };
            next[i] = z[i] - step;
            max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
        }
        z = next;
        if max_step <= 4.0 * eps {
            converged = true;
            break;
        }
    }
    let _ = converged; // quality is judged by the residual gate below

    for zi in z.iter_mut() {
        *zi = newton_polish(p, &dp, *zi);
    }

    let worst = z
        .iter()
        .map(|&zi| backward_error(p, zi))
        .fold(0.0, f64::max);
    if worst > cfg.root_abs_tol * m as f64 {
        return Err(Error::RootIteration {
            best: z,
            residual: worst,
        });
    }
    Ok(z)
}

/// Scaled backward error `|p(z)| / Σ|a_i||z|^i`.
fn backward_error(p: &Polynomial, z: Complex64) -> f64 {
    let mut scale = 0.0;
    let mut pw = 1.0;
    for c in p.coeffs() {
        scale += c.norm() * pw;
        pw *= z.norm();
    }
    if scale == 0.0 {
        return 0.0;
    }
    p.eval(z).norm() / scale
}

/// A few Newton steps, keeping the best residual seen.
fn newton_polish(p: &Polynomial, dp: &Polynomial, z0: Complex64) -> Complex64 {
    let mut best = z0;
    let mut best_res = p.eval(z0).norm();
    let mut z = z0;
    for _ in 0..5 {
        let dpz = dp.eval(z);
        if dpz == ZERO {
            break;
        }
        z -= p.eval(z) / dpz;
        let res = p.eval(z).norm();
        if res < best_res {
            best_res = res;
            best = z;
        } else {
            break;
        }
    }
    best
}

/// Eigenvalues of `M` as the roots of its characteristic polynomial,
/// Newton-polished; always exactly n values (with multiplicity).
///
/// The matrix is centered by trace/n first and the roots shifted back:
/// root conditioning of the expanded polynomial degrades with the distance
/// of a root cluster from the origin, and for the integer-entry fixtures
/// the centering is exact, so a shifted n-fold degeneracy stays a pure
/// power instead of smearing over `ε^(1/n)` scales.
pub fn eigenvalues(m: &Mat, cfg: &ToleranceConfig) -> Result<Vec<Complex64>> {
    let n = m.require_square()?;
    let mu = m.trace() / n as f64;
    let p = char_poly(&m.shifted(mu))?;
    let dp = p.derivative();
    let mut roots = poly_roots(&p, cfg)?;
    for r in roots.iter_mut() {
        if *r != ZERO {
            *r = newton_polish(&p, &dp, *r);
        }
        *r += mu;
    }
    debug_assert_eq!(roots.len(), n);
    Ok(roots)
}

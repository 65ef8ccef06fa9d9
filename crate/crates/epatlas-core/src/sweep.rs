//! Parameter-space exploration: spectral sweeps, discriminant-based EP
//! localization, unfolding-exponent fits and reality experiments.
//!
//! The EP detector is the discriminant of the characteristic polynomial —
//! polynomial in the matrix entries, cheap at these sizes, and vanishing
//! exactly at eigenvalue collisions — rather than a minimal eigenvalue gap,
//! which gets noisy near high-order EPs.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::jordan::{cluster_eigenvalues, default_cluster_radius, ep_classify, JordanStructure};
use crate::linalg::{char_poly, det, eigenvalues, Mat, Polynomial, ToleranceConfig};
use crate::models::{jordan_pert, scaled_perturbation, ExponentsMode};
use crate::{Error, Result};

/// One sweep sample: parameter values, raw eigenvalue multiset, largest
/// imaginary part.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub params: Vec<f64>,
    pub eigenvalues: Vec<Complex64>,
    pub max_imag: f64,
}

/// Result of a 1-D (or, with two parameter names, 2-D) sweep. Eigenvalues
/// are raw multisets per point; branches are not matched across points.
#[derive(Debug, Clone)]
pub struct SweepTable {
    pub param_names: Vec<String>,
    pub points: Vec<SweepPoint>,
}

fn eigs_sorted(m: &Mat, cfg: &ToleranceConfig) -> Result<Vec<Complex64>> {
    let mut eigs = eigenvalues(m, cfg)?;
    eigs.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    Ok(eigs)
}

/// Uniform 1-D sweep over `[range.0, range.1]` with `steps` grid points
/// (endpoints included).
pub fn sweep_1d<F>(
    param_name: &str,
    family: F,
    range: (f64, f64),
    steps: usize,
    cfg: &ToleranceConfig,
) -> Result<SweepTable>
where
    F: Fn(f64) -> Result<Mat>,
{
    if steps < 2 {
        return Err(Error::Domain(format!("need at least 2 steps, got {steps}")));
    }
    let mut points = Vec::with_capacity(steps);
    for i in 0..steps {
        let t = i as f64 / (steps - 1) as f64;
        let x = range.0 + t * (range.1 - range.0);
        let m = family(x)?;
        let eigs = eigs_sorted(&m, cfg)?;
        let max_imag = eigs.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        points.push(SweepPoint {
            params: vec![x],
            eigenvalues: eigs,
            max_imag,
        });
    }
    Ok(SweepTable {
        param_names: vec![param_name.to_string()],
        points,
    })
}

/// Best-effort continuity matching across sweep points by greedy
/// nearest-neighbor pairing; returns one trace per branch. The raw
/// multisets in the table remain authoritative.
pub fn match_branches(table: &SweepTable) -> Vec<Vec<Complex64>> {
    let Some(first) = table.points.first() else {
        return Vec::new();
    };
    let n = first.eigenvalues.len();
    let mut traces: Vec<Vec<Complex64>> = first.eigenvalues.iter().map(|&z| vec![z]).collect();
    for point in &table.points[1..] {
        let mut remaining: Vec<Complex64> = point.eigenvalues.clone();
        for trace in traces.iter_mut() {
            let last = *trace.last().unwrap();
            let (idx, _) = remaining
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| {
                    (*a - last).norm().partial_cmp(&(*b - last).norm()).unwrap()
                })
                .unwrap();
            trace.push(remaining.swap_remove(idx));
        }
        debug_assert_eq!(remaining.len(), 0);
        debug_assert_eq!(traces.len(), n);
    }
    traces
}

/// Discriminant of the characteristic polynomial of `M(λ)`:
/// `(-1)^(n(n-1)/2) Res(p, p') / lc(p)` with the resultant evaluated as a
/// Sylvester-matrix determinant. Vanishes exactly at eigenvalue collisions.
pub fn discriminant_at<F>(family: F, lambda: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<Mat>,
{
    let m = family(lambda)?;
    let p = char_poly(&m)?;
    poly_discriminant(&p)
}

/// Discriminant of a polynomial via the Sylvester resultant of `p` and `p'`.
pub fn poly_discriminant(p: &Polynomial) -> Result<f64> {
    let n = p.degree();
    if n < 2 {
        return Ok(1.0);
    }
    let dp = p.derivative();
    let res = resultant(p, &dp)?;
    let sign = if (n * (n - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let disc = res * Complex64::new(sign, 0.0) / p.leading();
    Ok(disc.re)
}

/// Resultant of two polynomials as the determinant of their Sylvester
/// matrix.
fn resultant(p: &Polynomial, q: &Polynomial) -> Result<Complex64> {
    let n = p.degree();
    let m = q.degree();
    let size = n + m;
    if size == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let mut s = Mat::zeros(size, size);
    // m rows of p's coefficients (descending), shifted
    for row in 0..m {
        for (k, &c) in p.coeffs().iter().rev().enumerate() {
            s[(row, row + k)] = c;
        }
    }
    // n rows of q's coefficients
    for row in 0..n {
        for (k, &c) in q.coeffs().iter().rev().enumerate() {
            s[(m + row, row + k)] = c;
        }
    }
    det(&s)
}

/// A located EP in a 1-D family.
#[derive(Debug, Clone)]
pub struct EpLocation {
    pub param_value: f64,
    pub discriminant_at: f64,
    pub bracket: (f64, f64),
    /// Jordan structure of the dominant cluster at the located point, when
    /// the classification is conclusive.
    pub jordan: Option<JordanStructure>,
}

/// Finds `λ*` with vanishing discriminant inside `bracket`: bisection on a
/// sign change when one is present, golden-section minimization of `|disc|`
/// otherwise.
///
/// `disc_tol` is `1e-10 ×` the discriminant scale at the bracket ends —
/// discriminant magnitudes vary over many orders across families, so an
/// absolute cutoff would be meaningless.
pub fn locate_ep_1d<F>(family: F, bracket: (f64, f64), cfg: &ToleranceConfig) -> Result<EpLocation>
where
    F: Fn(f64) -> Result<Mat>,
{
    let (mut lo, mut hi) = bracket;
    if !(lo < hi) {
        return Err(Error::Domain(format!("invalid bracket [{lo}, {hi}]")));
    }
    let d_lo = discriminant_at(&family, lo)?;
    let d_hi = discriminant_at(&family, hi)?;
    let scale = d_lo.abs().max(d_hi.abs());
    if scale == 0.0 {
        return Err(Error::Domain(
            "discriminant vanishes at both bracket ends; no localization possible".into(),
        ));
    }
    let disc_tol = 1e-10 * scale;
    let width_tol = 1e-12 * (1.0 + lo.abs().max(hi.abs()));

    let star;
    if d_lo.signum() != d_hi.signum() && d_lo != 0.0 && d_hi != 0.0 {
        // bisection on the sign change
        let mut f_lo = d_lo;
        let mut mid = 0.5 * (lo + hi);
        for _ in 0..200 {
            mid = 0.5 * (lo + hi);
            let d_mid = discriminant_at(&family, mid)?;
            if d_mid.abs() <= disc_tol || (hi - lo) <= width_tol {
                break;
            }
            if d_mid.signum() == f_lo.signum() {
                lo = mid;
                f_lo = d_mid;
            } else {
                hi = mid;
            }
        }
        star = mid;
    } else {
        // golden-section minimization of |disc|
        let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (lo, hi);
        let mut c = b - phi * (b - a);
        let mut d = a + phi * (b - a);
        let mut fc = discriminant_at(&family, c)?.abs();
        let mut fd = discriminant_at(&family, d)?.abs();
        for _ in 0..200 {
            if (b - a) <= width_tol {
                break;
            }
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - phi * (b - a);
                fc = discriminant_at(&family, c)?.abs();
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + phi * (b - a);
                fd = discriminant_at(&family, d)?.abs();
            }
        }
        star = if fc < fd { c } else { d };
        let achieved = discriminant_at(&family, star)?.abs();
        if achieved > disc_tol {
            return Err(Error::EpNotFound { achieved });
        }
    }

    let disc_star = discriminant_at(&family, star)?;
    // classifying exactly at the numerically located EP needs a rank
    // tolerance matched to the residual distance from the true EP
    let mut ep_cfg = *cfg;
    ep_cfg.rank_rel_tol = ep_cfg.rank_rel_tol.max(1e-6);
    let jordan = family(star).ok().and_then(|m| {
        ep_classify(&m, &ep_cfg, None).ok().and_then(|cls| {
            cls.structures
                .into_iter()
                .max_by_key(|s| s.algebraic_mult)
        })
    });
    Ok(EpLocation {
        param_value: star,
        discriminant_at: disc_star,
        bracket,
        jordan,
    })
}

/// Least-squares fit of the eigenvalue-splitting exponent at an EP.
#[derive(Debug, Clone, Serialize)]
pub struct UnfoldingFit {
    pub ep_value: f64,
    /// `(g, max branch distance from the EP eigenvalue)` samples.
    pub samples: Vec<(f64, f64)>,
    pub exponent: f64,
    pub r_squared: f64,
}

/// Fits `log(max_j |E_j(ep+g) - η|) = exponent · log g + const` over the
/// given `g` samples; an order-N Jordan block unfolds with exponent `1/N`.
///
/// Requires at least 4 strictly decreasing positive `g` values spanning at
/// least two decades. η is the center of the dominant eigenvalue cluster
/// of the family evaluated at the EP itself.
pub fn unfolding_exponent<F>(
    family: F,
    ep: f64,
    g_values: &[f64],
    cfg: &ToleranceConfig,
) -> Result<UnfoldingFit>
where
    F: Fn(f64) -> Result<Mat>,
{
    if g_values.len() < 4 {
        return Err(Error::Domain(format!(
            "need at least 4 g values, got {}",
            g_values.len()
        )));
    }
    if g_values.windows(2).any(|w| w[0] <= w[1]) || g_values.iter().any(|&g| g <= 0.0) {
        return Err(Error::Domain(
            "g values must be positive and strictly decreasing".into(),
        ));
    }
    if g_values[0] / g_values[g_values.len() - 1] < 100.0 {
        return Err(Error::Domain(
            "g values must span at least two decades".into(),
        ));
    }

    let m_ep = family(ep)?;
    let eigs_ep = eigenvalues(&m_ep, cfg)?;
    let radius = default_cluster_radius(&m_ep, &eigs_ep);
    let report = cluster_eigenvalues(&eigs_ep, radius)?;
    let eta = report
        .clusters
        .iter()
        .max_by_key(|c| c.members.len())
        .map(|c| c.center)
        .unwrap_or_else(|| Complex64::new(0.0, 0.0));

    let mut samples = Vec::with_capacity(g_values.len());
    for &g in g_values {
        let m = family(ep + g)?;
        let eigs = eigenvalues(&m, cfg)?;
        let dist = eigs.iter().map(|z| (z - eta).norm()).fold(0.0, f64::max);
        samples.push((g, dist));
    }
    if samples.iter().all(|&(_, d)| d < 1e-13) {
        return Err(Error::NoiseFloor);
    }

    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|&&(_, d)| d > 0.0)
        .map(|&(g, d)| (g.ln(), d.ln()))
        .collect();
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let slope = sxy / sxx;
    let r_squared = if syy > 0.0 { (sxy * sxy) / (sxx * syy) } else { 1.0 };
    Ok(UnfoldingFit {
        ep_value: ep,
        samples,
        exponent: slope,
        r_squared,
    })
}

/// Perturbation ensembles for [`reality_experiment`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RealityMode {
    /// Dense uniform random entries in [-1, 1] — the ensemble whose
    /// perturbed spectra go complex for any block size above 2.
    Generic,
    /// Deterministic lower-triangular perturbation with the
    /// reality-compatible `g^((k-1)/2)` subdiagonal scaling.
    Scaled,
    /// Same prefactors without the scaling; the inadmissible comparison.
    Flat,
}

/// Real-spectrum fractions of perturbed Jordan blocks.
#[derive(Debug, Clone, Serialize)]
pub struct RealityReport {
    pub n: usize,
    pub mode: RealityMode,
    pub seed: u64,
    pub trials: usize,
    /// `(g, fraction of trials with an all-real spectrum)` per g.
    pub fractions: Vec<(f64, f64)>,
}

/// For each `g` and trial, perturbs `J^(N)(0)` and records the fraction of
/// all-real spectra. Generic mode draws the perturbation from the seeded
/// RNG; scaled/flat modes use the given prefactors deterministically.
pub fn reality_experiment(
    n: usize,
    mode: RealityMode,
    prefactors: &std::collections::BTreeMap<(usize, usize), f64>,
    g_values: &[f64],
    trials: usize,
    seed: u64,
    cfg: &ToleranceConfig,
) -> Result<RealityReport> {
    if n == 0 || trials == 0 {
        return Err(Error::Domain("need n ≥ 1 and trials ≥ 1".into()));
    }
    if g_values.iter().any(|&g| g <= 0.0) {
        return Err(Error::Domain("g values must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zero = Complex64::new(0.0, 0.0);
    let mut fractions = Vec::with_capacity(g_values.len());
    for &g in g_values {
        let mut real_count = 0usize;
        for _ in 0..trials {
            let v = match mode {
                RealityMode::Generic => {
                    let mut v = Mat::zeros(n, n);
                    for i in 0..n {
                        for j in 0..n {
                            v[(i, j)] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
                        }
                    }
                    v
                }
                RealityMode::Scaled => scaled_perturbation(n, g, prefactors, ExponentsMode::Scaled)?,
                RealityMode::Flat => scaled_perturbation(n, g, prefactors, ExponentsMode::Flat)?,
            };
            let m = jordan_pert(n, zero, g, &v)?;
            let eigs = eigenvalues(&m, cfg)?;
            let max_mag = eigs.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let tol = cfg.residual_tol * (1.0 + max_mag);
            if eigs.iter().all(|z| z.im.abs() <= tol) {
                real_count += 1;
            }
        }
        fractions.push((g, real_count as f64 / trials as f64));
    }
    Ok(RealityReport {
        n,
        mode,
        seed,
        trials,
        fractions,
    })
}

/// One grid point of a 2-D reality raster.
#[derive(Debug, Clone, Serialize)]
pub struct LocusPoint {
    pub x: f64,
    pub y: f64,
    /// Eigenvalues with `|Im| ≤ residual_tol × (1 + max|E|)`.
    pub real_count: usize,
    pub max_imag: f64,
}

/// Counts real eigenvalues of a two-parameter family over a uniform grid.
pub fn spectral_locus_2d<F>(
    family: F,
    x_range: (f64, f64),
    y_range: (f64, f64),
    nx: usize,
    ny: usize,
    cfg: &ToleranceConfig,
) -> Result<Vec<LocusPoint>>
where
    F: Fn(f64, f64) -> Result<Mat>,
{
    if nx < 2 || ny < 2 {
        return Err(Error::Domain(format!("grid must be at least 2x2, got {nx}x{ny}")));
    }
    let mut out = Vec::with_capacity(nx * ny);
    for i in 0..nx {
        let tx = i as f64 / (nx - 1) as f64;
        let x = x_range.0 + tx * (x_range.1 - x_range.0);
        for j in 0..ny {
            let ty = j as f64 / (ny - 1) as f64;
            let y = y_range.0 + ty * (y_range.1 - y_range.0);
            let m = family(x, y)?;
            let eigs = eigenvalues(&m, cfg)?;
            let max_mag = eigs.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let tol = cfg.residual_tol * (1.0 + max_mag);
            let real_count = eigs.iter().filter(|z| z.im.abs() <= tol).count();
            let max_imag = eigs.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
            out.push(LocusPoint {
                x,
                y,
                real_count,
                max_imag,
            });
        }
    }
    Ok(out)
}

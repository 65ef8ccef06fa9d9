//! Jordan structure detection at (clusters of) eigenvalues.
//!
//! The canonical form of a matrix at an eigenvalue η is read off the Weyr
//! sequence — the nullities of `(M-ηI)^k` for growing k. The number of
//! Jordan blocks of size ≥ k equals the k-th difference of that sequence,
//! so block sizes come out of rank computations alone, with no eigenvector
//! chains involved. This is what distinguishes an EP6 from an EP4+EP2 or
//! an EP2+EP2+EP2 resolution of a six-fold degeneracy.
//!
//! Exact degeneracy is a measure-zero event in floating point: a six-fold
//! root smears over a radius of roughly `(coefficient dirt)^(1/6)` — far
//! larger than machine epsilon — so eigenvalue clustering comes first and
//! the cluster radius is an explicit, reported quantity.

use num_complex::Complex64;
use serde::Serialize;

use crate::linalg::solve::rank_flagged_scaled;
use crate::linalg::{char_poly, eigenvalues, Mat, Polynomial, ToleranceConfig};
use crate::{Error, Result};

/// Jordan structure of a matrix at one eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JordanStructure {
    /// The eigenvalue η, as `[re, im]`.
    #[serde(serialize_with = "crate::jordan::serialize_complex")]
    pub eta: Complex64,
    pub algebraic_mult: usize,
    pub geom_mult: usize,
    /// Nullities of `(M-ηI)^k`, k = 1, 2, …, up to stabilization.
    pub weyr: Vec<usize>,
    /// Block sizes, descending; sums to `algebraic_mult`.
    pub blocks: Vec<usize>,
    /// Set when a rank decision fell near the pivot cutoff or the Weyr
    /// sequence needed repair — the structure is reported, not certified.
    pub low_confidence: bool,
}

pub(crate) fn serialize_complex<S: serde::Serializer>(
    z: &Complex64,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(2))?;
    seq.serialize_element(&z.re)?;
    seq.serialize_element(&z.im)?;
    seq.end()
}

/// One cluster of numerically coincident eigenvalues.
#[derive(Debug, Clone, Serialize)]
pub struct Cluster {
    #[serde(serialize_with = "crate::jordan::serialize_complex")]
    pub center: Complex64,
    pub members: Vec<[f64; 2]>,
    /// Link radius actually used, enlarged to the max center-to-member
    /// distance when the cluster is wider than the link distance.
    pub radius_used: f64,
}

/// Partition of an eigenvalue multiset into clusters.
#[derive(Debug, Clone, Serialize)]
pub struct ClusterReport {
    pub clusters: Vec<Cluster>,
}

/// Single-linkage clustering with link distance `radius`; cluster centers
/// are arithmetic means of members.
pub fn cluster_eigenvalues(values: &[Complex64], radius: f64) -> Result<ClusterReport> {
    if !(radius > 0.0) {
        return Err(Error::Domain(format!("cluster radius must be > 0, got {radius}")));
    }
    let n = values.len();
    let mut assigned = vec![usize::MAX; n];
    let mut next_cluster = 0usize;
    for i in 0..n {
        if assigned[i] != usize::MAX {
            continue;
        }
        // breadth-first chain of links from i
        let id = next_cluster;
        next_cluster += 1;
        assigned[i] = id;
        let mut frontier = vec![i];
        while let Some(a) = frontier.pop() {
            for b in 0..n {
                if assigned[b] == usize::MAX && (values[a] - values[b]).norm() <= radius {
                    assigned[b] = id;
                    frontier.push(b);
                }
            }
        }
    }
    let mut clusters = Vec::new();
    for id in 0..next_cluster {
        let members: Vec<Complex64> = (0..n)
            .filter(|&i| assigned[i] == id)
            .map(|i| values[i])
            .collect();
        let center = members.iter().sum::<Complex64>() / members.len() as f64;
        let spread = members
            .iter()
            .map(|z| (z - center).norm())
            .fold(0.0, f64::max);
        clusters.push(Cluster {
            center,
            members: members.iter().map(|z| [z.re, z.im]).collect(),
            radius_used: radius.max(spread),
        });
    }
    clusters.sort_by(|a, b| {
        (a.center.re, a.center.im)
            .partial_cmp(&(b.center.re, b.center.im))
            .unwrap()
    });
    Ok(ClusterReport { clusters })
}

/// Default clustering radius for `ep_classify`.
///
/// `1e-6 ×` spectral diameter, floored at `4 ε^(1/n) max(1, ‖M‖_F)`: the
/// floor tracks the n-th-root smearing of an n-fold root under coefficient
/// rounding, without which a numerically exact EP would be reported as n
/// separate simple eigenvalues. Overridable and reported in all outputs.
pub fn default_cluster_radius(m: &Mat, eigs: &[Complex64]) -> f64 {
    let mut diam = 0.0f64;
    for i in 0..eigs.len() {
        for j in (i + 1)..eigs.len() {
            diam = diam.max((eigs[i] - eigs[j]).norm());
        }
    }
    let n = m.rows().max(1);
    let floor = 4.0 * f64::EPSILON.powf(1.0 / n as f64) * m.frobenius_norm().max(1.0);
    (1e-6 * diam).max(floor)
}

/// Jordan structure of `M` at η from the Weyr (nullity) sequence.
///
/// Powers `(M-ηI)^k` are formed by repeated multiplication and the rank
/// cutoff is re-estimated at each power against the scale `‖M-ηI‖_F^k`
/// that the power would have without cancellation. The power's own pivots
/// cannot serve as the scale: once the nilpotent part dies out, the
/// computed power is rounding dirt and would look full-rank relative to
/// itself.
pub fn jordan_structure_at(
    m: &Mat,
    eta: Complex64,
    cfg: &ToleranceConfig,
) -> Result<JordanStructure> {
    let n = m.require_square()?;
    cfg.validate()?;
    let p = m.shifted(eta);
    let p_norm = p.frobenius_norm();
    let mut low_confidence = false;
    let mut weyr: Vec<usize> = Vec::new();
    let mut power = p.clone();
    let mut power_scale = p_norm;
    loop {
        let (r, ambiguous) = rank_flagged_scaled(&power, cfg.rank_rel_tol, power_scale);
        low_confidence |= ambiguous;
        let nullity = n - r;
        if weyr.is_empty() && nullity == 0 {
            return Err(Error::NotAnEigenvalue { eta });
        }
        if let Some(&prev) = weyr.last() {
            if nullity < prev {
                // cannot happen in exact arithmetic; tolerance artifact
                low_confidence = true;
                weyr.push(prev);
                break;
            }
            weyr.push(nullity);
            if nullity == prev || nullity == n {
                break;
            }
        } else {
            weyr.push(nullity);
            if nullity == n {
                break;
            }
        }
        if weyr.len() >= n {
            break;
        }
        power = power.matmul(&p);
        power_scale *= p_norm;
    }

    let (blocks, repaired) = blocks_from_weyr(&weyr);
    low_confidence |= repaired;
    let algebraic = *weyr.last().unwrap();
    Ok(JordanStructure {
        eta,
        algebraic_mult: algebraic,
        geom_mult: weyr[0],
        weyr,
        blocks,
        low_confidence,
    })
}

/// Conjugate-partition reconstruction: `weyr[k] - weyr[k-1]` counts blocks
/// of size ≥ k+1. Returns the sizes (descending) and whether the counts
/// had to be repaired into a valid partition.
fn blocks_from_weyr(weyr: &[usize]) -> (Vec<usize>, bool) {
    let mut counts: Vec<usize> = Vec::with_capacity(weyr.len());
    let mut prev = 0usize;
    for &w in weyr {
        counts.push(w.saturating_sub(prev));
        prev = w;
    }
    let mut repaired = false;
    for k in 1..counts.len() {
        if counts[k] > counts[k - 1] {
            counts[k] = counts[k - 1];
            repaired = true;
        }
    }
    let n_blocks = counts[0];
    let mut blocks = Vec::with_capacity(n_blocks);
    for i in 0..n_blocks {
        blocks.push(counts.iter().filter(|&&c| c > i).count());
    }
    (blocks, repaired)
}

/// Sharpens a cluster center of multiplicity m.
///
/// The individual members of an m-fold root cluster are only conditioned
/// to the m-th root of the coefficient noise, and so is their mean. But at
/// an m-fold root of p the (m-1)-th derivative has a *simple* root at the
/// same point (for a nearly-degenerate cluster, a simple root inside its
/// hull by Gauss–Lucas), so a few Newton steps on that derivative recover
/// the center to ordinary simple-root accuracy.
fn refine_center(p: &Polynomial, center: Complex64, mult: usize, radius: f64) -> Complex64 {
    let mut q = p.clone();
    for _ in 1..mult {
        q = q.derivative();
    }
    let dq = q.derivative();
    let mut z = center;
    for _ in 0..40 {
        let dqz = dq.eval(z);
        if dqz.norm() == 0.0 {
            break;
        }
        let step = q.eval(z) / dqz;
        z -= step;
        if step.norm() <= 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    // only accept a refinement that stays near the cluster
    if (z - center).norm() <= 4.0 * radius.max(1e-12) {
        z
    } else {
        center
    }
}

/// Full EP classification: cluster the spectrum, then resolve the Jordan
/// structure at each cluster center.
#[derive(Debug, Clone, Serialize)]
pub struct EpClassification {
    pub cluster_radius: f64,
    pub structures: Vec<JordanStructure>,
}

impl EpClassification {
    /// True iff every structure consists of size-1 blocks only.
    pub fn diagonalizable(&self) -> bool {
        self.structures
            .iter()
            .all(|s| s.blocks.iter().all(|&b| b == 1))
    }
}

/// Clusters the spectrum of `M` (with `radius`, or the default when
/// `None`), then runs [`jordan_structure_at`] on each cluster center.
///
/// A cluster whose center fails the eigenvalue test under the rank
/// tolerance — possible right at a tolerance boundary — is reported as
/// size-1 blocks with `low_confidence` set rather than dropped.
pub fn ep_classify(
    m: &Mat,
    cfg: &ToleranceConfig,
    radius: Option<f64>,
) -> Result<EpClassification> {
    let n = m.require_square()?;
    let eigs = eigenvalues(m, cfg)?;
    let radius = match radius {
        Some(r) => r,
        None => default_cluster_radius(m, &eigs),
    };
    let report = cluster_eigenvalues(&eigs, radius)?;
    let mu = m.trace() / n as f64;
    let centered_poly = char_poly(&m.shifted(mu))?;
    let mut structures = Vec::new();
    for cluster in &report.clusters {
        let count = cluster.members.len();
        let eta = refine_center(
            &centered_poly,
            cluster.center - mu,
            count,
            cluster.radius_used,
        ) + mu;
        match jordan_structure_at(m, eta, cfg) {
            Ok(mut s) => {
                if s.algebraic_mult != count {
                    s.low_confidence = true;
                }
                structures.push(s);
            }
            Err(Error::NotAnEigenvalue { .. }) => structures.push(JordanStructure {
                eta,
                algebraic_mult: count,
                geom_mult: count,
                weyr: vec![count],
                blocks: vec![1; count],
                low_confidence: true,
            }),
            Err(e) => return Err(e),
        }
    }
    Ok(EpClassification {
        cluster_radius: radius,
        structures,
    })
}

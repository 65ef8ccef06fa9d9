//! Built-in 6×6 model Hamiltonians and perturbation constructors.
//!
//! Every constructor reproduces its source matrix entry-exactly; entries are
//! assembled from integer and radical expressions, never parsed from text.
//! These are the fixtures all higher-level analyses run on.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::linalg::Mat;
use crate::{Error, Result};

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Cross-diagonal EP2+EP2+EP2 Hamiltonian; at any `ε` the whole sextet of
/// eigenvalues sits at `ε` with geometric multiplicity 3.
pub fn h222_ep(eps: f64) -> Mat {
    Mat::from_real_rows(&[
        vec![eps - 5.0, 0.0, 0.0, 0.0, 0.0, 5.0],
        vec![0.0, eps - 3.0, 0.0, 0.0, -3.0, 0.0],
        vec![0.0, 0.0, eps - 1.0, 1.0, 0.0, 0.0],
        vec![0.0, 0.0, -1.0, eps + 1.0, 0.0, 0.0],
        vec![0.0, 3.0, 0.0, 0.0, eps + 3.0, 0.0],
        vec![-5.0, 0.0, 0.0, 0.0, 0.0, eps + 5.0],
    ])
}

/// Transition matrix printed alongside [`h222_ep`] (ε = 0); satisfies
/// `H Q = Q J^(2+2+2)(0)` in exact arithmetic.
pub fn h222_ep_printed_q() -> Mat {
    Mat::from_real_rows(&[
        vec![-5.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        vec![-3.0, 0.0, -3.0, 0.0, -3.0, 0.0],
        vec![-1.0, 1.0, -1.0, 1.0, 0.0, 0.0],
        vec![-1.0, 0.0, -1.0, 0.0, 0.0, 0.0],
        vec![3.0, 1.0, 3.0, 1.0, 3.0, 1.0],
        vec![-5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    ])
}

/// Three-parameter perturbed partner of [`h222_ep`]: antisymmetric `a`
/// couplings, second-diagonal `b` couplings and corner couplings `±c`.
/// At `(a, b, c) = (0, 1, 5)` it coincides with `h222_ep(0)` entrywise.
pub fn h222_pert(a: f64, b: f64, c: f64) -> Mat {
    Mat::from_real_rows(&[
        vec![-5.0, 0.0, 0.0, -a, 0.0, c],
        vec![0.0, -3.0, a, 0.0, -3.0 * b, 0.0],
        vec![0.0, -a, -1.0, b, 0.0, -a],
        vec![a, 0.0, -b, 1.0, a, 0.0],
        vec![0.0, 3.0 * b, 0.0, -a, 3.0, 0.0],
        vec![-c, 0.0, a, 0.0, 0.0, 5.0],
    ])
}

/// Modified two-parameter EP2+EP2+EP2 family; its EPs sit at `b = ±1`.
pub fn h222_tilde(a: f64, b: f64) -> Mat {
    Mat::from_real_rows(&[
        vec![-5.0, 0.0, 0.0, -5.0 * a, 0.0, 5.0 * b],
        vec![0.0, -3.0, 3.0 * a, 0.0, -3.0 * b, 0.0],
        vec![0.0, -3.0 * a, -1.0, b, 0.0, -5.0 * a],
        vec![5.0 * a, 0.0, -b, 1.0, 3.0 * a, 0.0],
        vec![0.0, 3.0 * b, 0.0, -3.0 * a, 3.0, 0.0],
        vec![-5.0 * b, 0.0, 5.0 * a, 0.0, 0.0, 5.0],
    ])
}

/// Non-diagonalizable EP4+EP2 Hamiltonian (geometric multiplicity 2).
pub fn h42_ep() -> Mat {
    let s3 = 3.0_f64.sqrt();
    Mat::from_real_rows(&[
        vec![-9.0, 3.0 * s3, 0.0, 0.0, 0.0, 0.0],
        vec![-3.0 * s3, -3.0, 0.0, 0.0, 6.0, 0.0],
        vec![0.0, 0.0, -1.0, 1.0, 0.0, 0.0],
        vec![0.0, 0.0, -1.0, 1.0, 0.0, 0.0],
        vec![0.0, -6.0, 0.0, 0.0, 3.0, 3.0 * s3],
        vec![0.0, 0.0, 0.0, 0.0, -3.0 * s3, 9.0],
    ])
}

/// Transition matrix printed alongside [`h42_ep`]; `det Q = 26244`.
pub fn h42_ep_printed_q() -> Mat {
    let s3 = 3.0_f64.sqrt();
    Mat::from_real_rows(&[
        vec![-162.0, 54.0, -9.0, 1.0, 0.0, 0.0],
        vec![-162.0 * s3, 36.0 * s3, -3.0 * s3, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, -1.0, 1.0, -1.0, 1.0],
        vec![0.0, 0.0, -1.0, 0.0, -1.0, 0.0],
        vec![-162.0 * s3, 18.0 * s3, 0.0, 0.0, 0.0, 0.0],
        vec![-162.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    ])
}

/// Two-parameter minimal-coupling family around the EP4+EP2 point
/// `(τ, β) = (0, 0)`.
///
/// Requires `τ ≤ 1` so that `√(1-τ)` and `√(3-3τ)` stay real. For `β < 0`
/// the coupling `√β` is taken on the principal branch `i√|β|`, giving a
/// complex matrix; both signs of `β` are meaningful (the `β = 0` line
/// separates the non-Hermitian and Hermitian coupling regimes).
pub fn h6(tau: f64, beta: f64) -> Result<Mat> {
    if tau > 1.0 {
        return Err(Error::Domain(format!(
            "h6 requires tau <= 1, got {tau}"
        )));
    }
    let w = (3.0 - 3.0 * tau).sqrt(); // 3-level coupling scale
    let u = (1.0 - tau).sqrt();
    let sb = if beta >= 0.0 {
        re(beta.sqrt())
    } else {
        Complex64::new(0.0, (-beta).sqrt())
    };
    let z = re(0.0);
    let entries = [
        re(-9.0), re(3.0 * w), z, z, z, z,
        re(-3.0 * w), re(-3.0), sb, z, re(-6.0 * u), z,
        z, -sb, re(-1.0), re(u), z, z,
        z, z, re(-u), re(1.0), sb, z,
        z, re(6.0 * u), z, -sb, re(3.0), re(3.0 * w),
        z, z, z, z, re(-3.0 * w), re(9.0),
    ];
    Mat::from_entries(6, 6, &entries)
}

/// Single-entry perturbation of [`h42_ep`]: `-3γ` at row 5, column 4
/// (1-based). Any `γ ≠ 0` leaves all six eigenvalues degenerate but flips
/// the canonical form from EP4+EP2 to one full EP6 block.
pub fn h42_tilde(gamma: f64) -> Mat {
    let mut m = h42_ep();
    m[(4, 3)] = re(-3.0 * gamma);
    m
}

/// Transition matrix printed alongside [`h42_tilde`];
/// `det Q = 19131876 γ⁴`.
pub fn h42_tilde_printed_q(gamma: f64) -> Mat {
    let s3 = 3.0_f64.sqrt();
    let g = gamma;
    Mat::from_real_rows(&[
        vec![
            -486.0 * s3 * g,
            54.0 * s3 * g,
            9.0 * s3 * g,
            -3.0 * s3 * g,
            0.5 * s3 * g,
            -s3 * g / 18.0,
        ],
        vec![-1458.0 * g, 0.0, 45.0 * g, -6.0 * g, 0.5 * g, 0.0],
        vec![0.0, 0.0, 0.0, 0.0, -1.0, 1.0],
        vec![0.0, 0.0, 0.0, 0.0, -1.0, 0.0],
        vec![-1458.0 * g, -162.0 * g, 36.0 * g, 0.0, 0.0, 0.0],
        vec![-486.0 * s3 * g, -108.0 * s3 * g, 0.0, 0.0, 0.0, 0.0],
    ])
}

/// Perturbed Jordan block `J^(N)(η) + g V`.
pub fn jordan_pert(n: usize, eta: Complex64, g: f64, v: &Mat) -> Result<Mat> {
    if v.rows() != n || v.cols() != n {
        return Err(Error::Dimension(format!(
            "perturbation must be {n}x{n}, got {}x{}",
            v.rows(),
            v.cols()
        )));
    }
    let mut m = crate::transition::jordan_block(n, eta);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] += re(g) * v[(i, j)];
        }
    }
    Ok(m)
}

/// The canonical corner perturbation `e_N e_1ᵀ`; `J^(N)(0) + g·corner` has
/// characteristic polynomial exactly `λ^N - g`.
pub fn corner_perturbation(n: usize) -> Mat {
    let mut v = Mat::zeros(n, n);
    v[(n - 1, 0)] = re(1.0);
    v
}

/// How the strictly-lower-triangle prefactors of [`scaled_perturbation`]
/// are scaled with the coupling `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentsMode {
    /// Entry `(j+k, j)` gets `prefactor × g^((k-1)/2)` — the scaling that is
    /// necessary for spectral reality of the perturbed block.
    Scaled,
    /// Entry `(j+k, j)` gets the bare prefactor. The comparison case whose
    /// spectrum goes complex as `g → 0`.
    Flat,
}

/// Strictly-lower-triangular perturbation with diagonal-dependent scaling.
/// `prefactors` maps `(k, j)` (k-th subdiagonal, column j, both 1-based in
/// the usual indexing convention: entry row `j+k-1`, col `j-1` 0-based) to
/// its coefficient; absent entries are zero. Upper triangle is zero.
pub fn scaled_perturbation(
    n: usize,
    g: f64,
    prefactors: &BTreeMap<(usize, usize), f64>,
    mode: ExponentsMode,
) -> Result<Mat> {
    if g <= 0.0 {
        return Err(Error::Domain(format!(
            "scaled_perturbation requires g > 0, got {g}"
        )));
    }
    let mut v = Mat::zeros(n, n);
    for (&(k, j), &pre) in prefactors {
        if k < 1 || j < 1 || j + k > n {
            return Err(Error::Dimension(format!(
                "prefactor position (k={k}, j={j}) outside the lower triangle of an {n}x{n} matrix"
            )));
        }
        let scale = match mode {
            ExponentsMode::Scaled => g.powf((k as f64 - 1.0) / 2.0),
            ExponentsMode::Flat => 1.0,
        };
        v[(j + k - 1, j - 1)] = re(pre * scale);
    }
    Ok(v)
}

/// All-ones prefactors on every subdiagonal position of an `n×n` lower
/// triangle.
pub fn ones_prefactors(n: usize) -> BTreeMap<(usize, usize), f64> {
    let mut map = BTreeMap::new();
    for k in 1..n {
        for j in 1..=(n - k) {
            map.insert((k, j), 1.0);
        }
    }
    map
}

/// Names of the built-in model families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelName {
    H222Ep,
    H222Pert,
    H222Tilde,
    H42Ep,
    H6,
    H42Tilde,
    JordanPert,
}

impl ModelName {
    pub fn parse(s: &str) -> Option<ModelName> {
        match s {
            "h222_ep" => Some(ModelName::H222Ep),
            "h222_pert" => Some(ModelName::H222Pert),
            "h222_tilde" => Some(ModelName::H222Tilde),
            "h42_ep" => Some(ModelName::H42Ep),
            "h6" => Some(ModelName::H6),
            "h42_tilde" => Some(ModelName::H42Tilde),
            "jordan_pert" => Some(ModelName::JordanPert),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ModelName::H222Ep => "h222_ep",
            ModelName::H222Pert => "h222_pert",
            ModelName::H222Tilde => "h222_tilde",
            ModelName::H42Ep => "h42_ep",
            ModelName::H6 => "h6",
            ModelName::H42Tilde => "h42_tilde",
            ModelName::JordanPert => "jordan_pert",
        }
    }

    /// Parameter names the family expects, all required.
    ///
    /// `jordan_pert` here is the corner-perturbation subfamily
    /// (`J^(n)(eta) + g·e_n e_1ᵀ`); arbitrary perturbations go through
    /// [`jordan_pert`] directly.
    pub fn expected_params(&self) -> &'static [&'static str] {
        match self {
            ModelName::H222Ep => &["eps"],
            ModelName::H222Pert => &["a", "b", "c"],
            ModelName::H222Tilde => &["a", "b"],
            ModelName::H42Ep => &[],
            ModelName::H6 => &["tau", "beta"],
            ModelName::H42Tilde => &["gamma"],
            ModelName::JordanPert => &["n", "eta", "g"],
        }
    }

    pub fn all() -> &'static [&'static str] {
        &[
            "h222_ep",
            "h222_pert",
            "h222_tilde",
            "h42_ep",
            "h6",
            "h42_tilde",
            "jordan_pert",
        ]
    }
}

/// A model family plus a full parameter assignment.
#[derive(Debug, Clone)]
pub struct ModelSpec {
    pub name: ModelName,
    pub params: BTreeMap<String, f64>,
}

impl ModelSpec {
    pub fn new(name: ModelName, params: BTreeMap<String, f64>) -> ModelSpec {
        ModelSpec { name, params }
    }

    /// Validates parameter names: unknown names are rejected with the
    /// expected list; `missing_ok` names may be absent (used for sweeps
    /// where one parameter is bound later).
    fn validate(&self, missing_ok: &[&str]) -> Result<()> {
        let expected = self.name.expected_params();
        for key in self.params.keys() {
            if !expected.contains(&key.as_str()) {
                return Err(Error::UnknownParameter {
                    model: self.name.as_str().into(),
                    name: key.clone(),
                    expected: expected.to_vec(),
                });
            }
            if !self.params[key].is_finite() {
                return Err(Error::Domain(format!("parameter {key} is not finite")));
            }
        }
        for want in expected {
            if !self.params.contains_key(*want) && !missing_ok.contains(want) {
                return Err(Error::MissingParameter {
                    model: self.name.as_str().into(),
                    expected: expected.to_vec(),
                });
            }
        }
        Ok(())
    }

    /// Builds the matrix for the fully-assigned parameter set.
    pub fn build(&self) -> Result<Mat> {
        self.validate(&[])?;
        let p = |k: &str| self.params[k];
        match self.name {
            ModelName::H222Ep => Ok(h222_ep(p("eps"))),
            ModelName::H222Pert => Ok(h222_pert(p("a"), p("b"), p("c"))),
            ModelName::H222Tilde => Ok(h222_tilde(p("a"), p("b"))),
            ModelName::H42Ep => Ok(h42_ep()),
            ModelName::H6 => h6(p("tau"), p("beta")),
            ModelName::H42Tilde => Ok(h42_tilde(p("gamma"))),
            ModelName::JordanPert => {
                let n = p("n");
                if n < 1.0 || n.fract() != 0.0 {
                    return Err(Error::Domain(format!(
                        "jordan_pert needs a positive integer n, got {n}"
                    )));
                }
                let n = n as usize;
                jordan_pert(n, re(p("eta")), p("g"), &corner_perturbation(n))
            }
        }
    }

    /// Binds `free` as the sweep parameter: returns a closure evaluating the
    /// family along it. All other parameters must already be assigned.
    pub fn bind(&self, free: &str) -> Result<impl Fn(f64) -> Result<Mat> + '_> {
        let expected = self.name.expected_params();
        if !expected.contains(&free) {
            return Err(Error::UnknownParameter {
                model: self.name.as_str().into(),
                name: free.into(),
                expected: expected.to_vec(),
            });
        }
        self.validate(&[free])?;
        let free = free.to_string();
        Ok(move |value: f64| {
            let mut spec = self.clone();
            spec.params.insert(free.clone(), value);
            spec.build()
        })
    }
}

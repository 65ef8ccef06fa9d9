// each test binary compiles this module but uses its own subset
#![allow(dead_code)]

//! Test-only exact arithmetic over ℚ(√3).
//!
//! The printed reference matrices mix integers with multiples of √3, so
//! every identity they satisfy (transition relations, ranks, determinants)
//! can be checked exactly in the field ℚ(√3) = {a + b√3 : a, b ∈ ℚ} with
//! big-rational coordinates. These fixtures are a second, independent
//! transcription against which the f64 model constructors are validated.

use num::{BigRational, ToPrimitive, Zero};
use std::ops::{Add, Mul, Neg, Sub};

/// Element a + b√3 of ℚ(√3).
#[derive(Clone, Debug, PartialEq)]
pub struct Q3 {
    pub a: BigRational,
    pub b: BigRational,
}

fn rational(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

impl Q3 {
    pub fn int(v: i64) -> Q3 {
        Q3 {
            a: rational(v, 1),
            b: BigRational::zero(),
        }
    }

    pub fn rat(p: i64, q: i64) -> Q3 {
        Q3 {
            a: rational(p, q),
            b: BigRational::zero(),
        }
    }

    /// k·√3
    pub fn sqrt3(k: i64) -> Q3 {
        Q3 {
            a: BigRational::zero(),
            b: rational(k, 1),
        }
    }

    /// (p/q)·√3
    pub fn sqrt3_rat(p: i64, q: i64) -> Q3 {
        Q3 {
            a: BigRational::zero(),
            b: rational(p, q),
        }
    }

    pub fn zero() -> Q3 {
        Q3::int(0)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn inv(&self) -> Q3 {
        // (a + b√3)⁻¹ = (a - b√3)/(a² - 3b²); the norm vanishes only at 0
        let norm = &self.a * &self.a - rational(3, 1) * &self.b * &self.b;
        assert!(!norm.is_zero(), "inverting zero in Q(sqrt 3)");
        Q3 {
            a: &self.a / &norm,
            b: -&self.b / &norm,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap() + self.b.to_f64().unwrap() * 3.0_f64.sqrt()
    }
}

impl Add for Q3 {
    type Output = Q3;
    fn add(self, rhs: Q3) -> Q3 {
        Q3 {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
        }
    }
}

impl Sub for Q3 {
    type Output = Q3;
    fn sub(self, rhs: Q3) -> Q3 {
        Q3 {
            a: self.a - rhs.a,
            b: self.b - rhs.b,
        }
    }
}

impl Mul for Q3 {
    type Output = Q3;
    fn mul(self, rhs: Q3) -> Q3 {
        // (a1 + b1√3)(a2 + b2√3) = a1a2 + 3 b1b2 + (a1b2 + a2b1)√3
        Q3 {
            a: &self.a * &rhs.a + rational(3, 1) * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl Neg for Q3 {
    type Output = Q3;
    fn neg(self) -> Q3 {
        Q3 {
            a: -self.a,
            b: -self.b,
        }
    }
}

pub type QMat = Vec<Vec<Q3>>;

pub fn qmat_mul(x: &QMat, y: &QMat) -> QMat {
    let n = x.len();
    let k = y.len();
    let m = y[0].len();
    let mut out = vec![vec![Q3::zero(); m]; n];
    for i in 0..n {
        for j in 0..m {
            let mut acc = Q3::zero();
            for l in 0..k {
                acc = acc + x[i][l].clone() * y[l][j].clone();
            }
            out[i][j] = acc;
        }
    }
    out
}

pub fn qmat_sub(x: &QMat, y: &QMat) -> QMat {
    x.iter()
        .zip(y)
        .map(|(rx, ry)| {
            rx.iter()
                .zip(ry)
                .map(|(a, b)| a.clone() - b.clone())
                .collect()
        })
        .collect()
}

pub fn qmat_is_zero(x: &QMat) -> bool {
    x.iter().all(|row| row.iter().all(Q3::is_zero))
}

/// Exact rank by fraction-exact Gaussian elimination.
pub fn qmat_rank(m: &QMat) -> usize {
    let mut w = m.to_vec();
    let rows = w.len();
    let cols = w[0].len();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot_row) = (rank..rows).find(|&r| !w[r][col].is_zero()) else {
            continue;
        };
        w.swap(rank, pivot_row);
        let inv = w[rank][col].inv();
        for j in 0..cols {
            w[rank][j] = w[rank][j].clone() * inv.clone();
        }
        for i in 0..rows {
            if i != rank && !w[i][col].is_zero() {
                let f = w[i][col].clone();
                for j in 0..cols {
                    let delta = f.clone() * w[rank][j].clone();
                    w[i][j] = w[i][j].clone() - delta;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Exact determinant by elimination.
pub fn qmat_det(m: &QMat) -> Q3 {
    let n = m.len();
    let mut w = m.to_vec();
    let mut det = Q3::int(1);
    for col in 0..n {
        let Some(pivot_row) = (col..n).find(|&r| !w[r][col].is_zero()) else {
            return Q3::zero();
        };
        if pivot_row != col {
            w.swap(col, pivot_row);
            det = -det;
        }
        det = det * w[col][col].clone();
        let inv = w[col][col].inv();
        for i in (col + 1)..n {
            if !w[i][col].is_zero() {
                let f = w[i][col].clone() * inv.clone();
                for j in col..n {
                    let delta = f.clone() * w[col][j].clone();
                    w[i][j] = w[i][j].clone() - delta;
                }
            }
        }
    }
    det
}

fn int_rows(rows: &[[i64; 6]]) -> QMat {
    rows.iter()
        .map(|r| r.iter().map(|&v| Q3::int(v)).collect())
        .collect()
}

/// The cross-diagonal EP2+EP2+EP2 Hamiltonian at ε = 0, exact.
pub fn exact_h222_ep() -> QMat {
    int_rows(&[
        [-5, 0, 0, 0, 0, 5],
        [0, -3, 0, 0, -3, 0],
        [0, 0, -1, 1, 0, 0],
        [0, 0, -1, 1, 0, 0],
        [0, 3, 0, 0, 3, 0],
        [-5, 0, 0, 0, 0, 5],
    ])
}

/// Its printed transition matrix, exact.
pub fn exact_q222() -> QMat {
    int_rows(&[
        [-5, 1, 0, 0, 0, 0],
        [-3, 0, -3, 0, -3, 0],
        [-1, 1, -1, 1, 0, 0],
        [-1, 0, -1, 0, 0, 0],
        [3, 1, 3, 1, 3, 1],
        [-5, 0, 0, 0, 0, 0],
    ])
}

/// The EP4+EP2 Hamiltonian, exact (entries ±3√3 in the corners).
pub fn exact_h42() -> QMat {
    vec![
        vec![
            Q3::int(-9),
            Q3::sqrt3(3),
            Q3::zero(),
            Q3::zero(),
            Q3::zero(),
            Q3::zero(),
        ],
        vec![
            Q3::sqrt3(-3),
            Q3::int(-3),
            Q3::zero(),
            Q3::zero(),
            Q3::int(6),
            Q3::zero(),
        ],
        vec![
            Q3::zero(),
            Q3::zero(),
            Q3::int(-1),
            Q3::int(1),
            Q3::zero(),
            Q3::zero(),
        ],
        vec![
            Q3::zero(),
            Q3::zero(),
            Q3::int(-1),
            Q3::int(1),
            Q3::zero(),
            Q3::zero(),
        ],
        vec![
            Q3::zero(),
            Q3::int(-6),
            Q3::zero(),
            Q3::zero(),
            Q3::int(3),
            Q3::sqrt3(3),
        ],
        vec![
            Q3::zero(),
            Q3::zero(),
            Q3::zero(),
            Q3::zero(),
            Q3::sqrt3(-3),
            Q3::int(9),
        ],
    ]
}

/// Its printed transition matrix, exact; det = 26244.
pub fn exact_q42() -> QMat {
    vec![
        vec![
            Q3::int(-162),
            Q3::int(54),
            Q3::int(-9),
            Q3::int(1),
            Q3::zero(),
            Q3::zero(),
        ],
        vec![
            Q3::sqrt3(-162),
            Q3::sqrt3(36),
            Q3::sqrt3(-3),
            Q3::zero(),
            Q3::zero(),
            Q3::zero(),
        ],
        vec![
            Q3::zero(),
            Q3::zero(),
            Q3::int(-1),
            Q3::int(1),
            Q3::int(-1),
            Q3::int(1),
        ],
        vec![
            Q3::zero(),
            Q3::zero(),
            Q3::int(-1),
            Q3::zero(),
            Q3::int(-1),
            Q3::zero(),
        ],
        vec![
            Q3::sqrt3(-162),
            Q3::sqrt3(18),
            Q3::zero(),
            Q3::zero(),
            Q3::zero(),
            Q3::zero(),
        ],
        vec![
            Q3::int(-162),
            Q3::zero(),
            Q3::zero(),
            Q3::zero(),
            Q3::zero(),
            Q3::zero(),
        ],
    ]
}

/// The single-entry perturbation of [`exact_h42`]: `-3γ` at (5,4) 1-based.
pub fn exact_h42_tilde(gamma: &Q3) -> QMat {
    let mut h = exact_h42();
    h[4][3] = Q3::int(-3) * gamma.clone();
    h
}

/// Its printed γ-dependent transition matrix; det = 19131876 γ⁴.
pub fn exact_q42_tilde(gamma: &Q3) -> QMat {
    let g = |q: Q3| q * gamma.clone();
    vec![
        vec![
            g(Q3::sqrt3(-486)),
            g(Q3::sqrt3(54)),
            g(Q3::sqrt3(9)),
            g(Q3::sqrt3(-3)),
            g(Q3::sqrt3_rat(1, 2)),
            g(Q3::sqrt3_rat(-1, 18)),
        ],
        vec![
            g(Q3::int(-1458)),
            Q3::zero(),
            g(Q3::int(45)),
            g(Q3::int(-6)),
            g(Q3::rat(1, 2)),
            Q3::zero(),
        ],
        vec![
            Q3::zero(),
            Q3::zero(),
            Q3::zero(),
            Q3::zero(),
            Q3::int(-1),
            Q3::int(1),
        ],
        vec![
            Q3::zero(),
            Q3::zero(),
            Q3::zero(),
            Q3::zero(),
            Q3::int(-1),
            Q3::zero(),
        ],
        vec![
            g(Q3::int(-1458)),
            g(Q3::int(-162)),
            g(Q3::int(36)),
            Q3::zero(),
            Q3::zero(),
            Q3::zero(),
        ],
        vec![
            g(Q3::sqrt3(-486)),
            g(Q3::sqrt3(-108)),
            Q3::zero(),
            Q3::zero(),
            Q3::zero(),
            Q3::zero(),
        ],
    ]
}

/// Canonical Jordan matrix (blocks at η = 0), exact.
pub fn exact_jordan(blocks: &[usize]) -> QMat {
    let n: usize = blocks.iter().sum();
    let mut j = vec![vec![Q3::zero(); n]; n];
    let mut off = 0;
    for &b in blocks {
        for i in 0..(b - 1) {
            j[off + i][off + i + 1] = Q3::int(1);
        }
        off += b;
    }
    j
}

/// Max |f64 fixture entry - exact entry| over the matrix; validates the
/// double-precision constructors against this second transcription.
pub fn max_f64_deviation(exact: &QMat, m: &epatlas_core::Mat) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let want = exact[i][j].to_f64();
            let got = m[(i, j)];
            worst = worst.max((got.re - want).abs().max(got.im.abs()));
        }
    }
    worst
}

/// Characteristic polynomial det(λI - M) by cofactor (Laplace) expansion
/// over f64 polynomials — exact for integer matrices, and a route entirely
/// independent of the Faddeev–LeVerrier recursion under test.
pub fn char_poly_cofactor(m: &epatlas_core::Mat) -> Vec<f64> {
    let n = m.rows();
    let entries: Vec<Vec<Vec<f64>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        vec![-m[(i, j)].re, 1.0]
                    } else {
                        vec![-m[(i, j)].re]
                    }
                })
                .collect()
        })
        .collect();
    poly_det(&entries)
}

fn poly_mul(x: &[f64], y: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; x.len() + y.len() - 1];
    for (i, &a) in x.iter().enumerate() {
        for (j, &b) in y.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

fn poly_add_scaled(acc: &mut Vec<f64>, x: &[f64], sign: f64) {
    if acc.len() < x.len() {
        acc.resize(x.len(), 0.0);
    }
    for (i, &a) in x.iter().enumerate() {
        acc[i] += sign * a;
    }
}

fn poly_det(m: &[Vec<Vec<f64>>]) -> Vec<f64> {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = vec![0.0];
    for col in 0..n {
        if m[0][col].iter().all(|&c| c == 0.0) {
            continue;
        }
        let minor: Vec<Vec<Vec<f64>>> = (1..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != col)
                    .map(|j| m[i][j].clone())
                    .collect()
            })
            .collect();
        let term = poly_mul(&m[0][col], &poly_det(&minor));
        poly_add_scaled(&mut acc, &term, if col % 2 == 0 { 1.0 } else { -1.0 });
    }
    acc
}

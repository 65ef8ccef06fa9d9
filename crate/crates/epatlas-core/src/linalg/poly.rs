//! Polynomials and characteristic polynomials.

use num_complex::Complex64;

use super::Mat;
use crate::Result;

/// Complex polynomial, coefficients in ascending degree order.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    /// Trims trailing exactly-zero leading coefficients; keeps at least the
    /// constant term.
    pub fn new(coeffs: Vec<Complex64>) -> Polynomial {
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last() == Some(&Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Polynomial { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Polynomial {
        Polynomial::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().unwrap()
    }

    /// Largest coefficient magnitude; the scale used in residual checks.
    pub fn coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::new(vec![Complex64::new(0.0, 0.0)]);
        }
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// Divides through by the leading coefficient.
    pub fn monic(&self) -> Polynomial {
        let lead = self.leading();
        Polynomial::new(self.coeffs.iter().map(|&c| c / lead).collect())
    }

    /// Builds `∏ (λ - r_i)` from its roots.
    pub fn from_roots(roots: &[Complex64]) -> Polynomial {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * r;
            }
            coeffs = next;
        }
        Polynomial::new(coeffs)
    }
}

/// Characteristic polynomial `det(λI - M)`, monic of degree n, by the
/// Faddeev–LeVerrier recursion.
///
/// The recursion uses only matrix products, traces and divisions by small
/// integers, so integer-entry matrices yield exactly-integer coefficients.
/// That exactness is what keeps the built-in EP fixtures from smearing
/// their multiple roots: `λ⁶` stays `λ⁶` bit for bit.
pub fn char_poly(m: &Mat) -> Result<Polynomial> {
    let n = m.require_square()?;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[n] = Complex64::new(1.0, 0.0);
    // M_1 = I, c_{n-k} = -tr(A M_k)/k, M_{k+1} = A M_k + c_{n-k} I.
    let mut mk = Mat::identity(n);
    for k in 1..=n {
        let am = m.matmul(&mk);
        let c = -am.trace() / k as f64;
        coeffs[n - k] = c;
        if k < n {
            mk = am;
            for i in 0..n {
                mk[(i, i)] += c;
            }
        }
    }
    Ok(Polynomial::new(coeffs))
}

//! Closed-form cubic secular equation of the minimal-coupling family.
//!
//! For `h6(τ, β)` the energies satisfy a cubic in `s = E²`:
//!
//! `s³ + (-91τ + 2β) s² + (-114β + 819τ² - 42τβ + β²) s
//!     - 729τ³ - 486τβ - 81β² = 0`
//!
//! which is Cardano-solvable. Unitarity of the evolution holds exactly when
//! all three roots are real and positive (the two conditions tabulated for
//! the parameter-plane domains); the sign of β only separates the Hermitian
//! from the non-Hermitian coupling regime inside the unitary corridor.

use num_complex::Complex64;
use serde::Serialize;

use crate::linalg::{Polynomial, ToleranceConfig};

/// The three roots of the secular cubic at one parameter point.
#[derive(Debug, Clone)]
pub struct SecularRoots {
    pub tau: f64,
    pub beta: f64,
    pub s: [Complex64; 3],
    /// Polynomial discriminant; ≥ 0 means three real roots.
    pub discriminant: f64,
}

/// Unitarity classification of one `(τ, β)` point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegionLabel {
    pub all_s_real: bool,
    pub all_s_positive: bool,
    /// `all_s_real && all_s_positive`.
    pub unitary: bool,
}

/// Monic cubic in `s` with the coefficients exactly as printed.
pub fn secular_coefficients(tau: f64, beta: f64) -> Polynomial {
    let c2 = -91.0 * tau + 2.0 * beta;
    let c1 = -114.0 * beta + 819.0 * tau * tau - 42.0 * tau * beta + beta * beta;
    let c0 = -729.0 * tau.powi(3) - 486.0 * tau * beta - 81.0 * beta * beta;
    Polynomial::from_real(&[c0, c1, c2, 1.0])
}

/// Closed-form Cardano roots of the secular cubic.
///
/// Branch selection by discriminant sign: the trigonometric three-real-root
/// form when the discriminant is non-negative (which avoids catastrophic
/// cancellation as the roots coalesce at the EP), the one-real-plus-pair
/// form otherwise, with the conjugate pair constructed as an exact pair.
pub fn cardano_roots(tau: f64, beta: f64) -> SecularRoots {
    let poly = secular_coefficients(tau, beta);
    let a2 = poly.coeffs()[2].re;
    let a1 = poly.coeffs()[1].re;
    let a0 = poly.coeffs()[0].re;

    // depressed form t³ + pt + q, s = t - a2/3
    let shift = a2 / 3.0;
    let p = a1 - a2 * a2 / 3.0;
    let q = 2.0 * a2.powi(3) / 27.0 - a2 * a1 / 3.0 + a0;
    let disc = -4.0 * p.powi(3) - 27.0 * q * q;

    let t_roots: [Complex64; 3] = if p == 0.0 && q == 0.0 {
        [Complex64::new(0.0, 0.0); 3]
    } else if disc >= 0.0 && p < 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let cos3t = (-4.0 * q / m.powi(3)).clamp(-1.0, 1.0);
        let theta = cos3t.acos() / 3.0;
        [0, 1, 2].map(|k| {
            let t = m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
            Complex64::new(t, 0.0)
        })
    } else {
        // one real root + conjugate pair
        let sqrt_term = (q * q / 4.0 + p.powi(3) / 27.0).max(0.0).sqrt();
        let (u, v) = if q <= 0.0 {
            let u = (-q / 2.0 + sqrt_term).cbrt();
            let v = if u != 0.0 { -p / (3.0 * u) } else { 0.0 };
            (u, v)
        } else {
            let v = (-q / 2.0 - sqrt_term).cbrt();
            let u = if v != 0.0 { -p / (3.0 * v) } else { 0.0 };
            (u, v)
        };
        let real = u + v;
        let re_pair = -real / 2.0;
        let im_pair = 3.0_f64.sqrt() / 2.0 * (u - v);
        [
            Complex64::new(real, 0.0),
            Complex64::new(re_pair, im_pair),
            Complex64::new(re_pair, -im_pair),
        ]
    };

    let s = t_roots.map(|t| t - Complex64::new(shift, 0.0));
    debug_assert!(
        s.iter().all(|&si| {
            let scale = 1.0 + [a0.abs(), a1.abs(), a2.abs()].into_iter().fold(0.0, f64::max);
            poly.eval(si).norm() <= 1e-9 * scale * (1.0 + si.norm().powi(3))
        }),
        "cardano residual check failed at tau={tau}, beta={beta}"
    );
    SecularRoots {
        tau,
        beta,
        s,
        discriminant: disc,
    }
}

/// The six energies `±√s` (principal branch) of one secular solution.
pub fn energies_from_s(roots: &SecularRoots) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(6);
    for &s in &roots.s {
        let r = s.sqrt();
        out.push(r);
        out.push(-r);
    }
    out
}

/// Table-style unitarity classification of one parameter point.
///
/// Strict positivity: a zero root (the EP itself) counts as non-unitary —
/// the horizon is not part of the physical domain.
pub fn classify_point(tau: f64, beta: f64, cfg: &ToleranceConfig) -> RegionLabel {
    let roots = cardano_roots(tau, beta);
    let max_mag = roots.s.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tol = cfg.residual_tol * (1.0 + max_mag);
    let all_s_real = roots.s.iter().all(|z| z.im.abs() <= tol);
    let all_s_positive = roots.s.iter().all(|z| z.re > tol);
    RegionLabel {
        all_s_real,
        all_s_positive,
        unitary: all_s_real && all_s_positive,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn sorted_re(roots: &SecularRoots) -> Vec<f64> {
        let mut v: Vec<f64> = roots.s.iter().map(|z| z.re).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn coefficients_at_tau_one() {
        let p = secular_coefficients(1.0, 0.0);
        let want = [-729.0, 819.0, -91.0, 1.0];
        for (c, w) in p.coeffs().iter().zip(want) {
            assert_eq!(c.re, w);
            assert_eq!(c.im, 0.0);
        }
    }

    #[test]
    fn coefficients_vanish_at_origin() {
        let p = secular_coefficients(0.0, 0.0);
        assert_eq!(p.degree(), 3);
        for k in 0..3 {
            assert_eq!(p.coeffs()[k].re, 0.0);
        }
    }

    #[test]
    fn coefficients_at_beta_one() {
        let p = secular_coefficients(0.0, 1.0);
        let want = [-81.0, -113.0, 2.0, 1.0];
        for (c, w) in p.coeffs().iter().zip(want) {
            assert_eq!(c.re, w);
        }
    }

    #[test]
    fn roots_at_tau_one() {
        let roots = cardano_roots(1.0, 0.0);
        let got = sorted_re(&roots);
        for (g, w) in got.iter().zip([1.0, 9.0, 81.0]) {
            assert!((g - w).abs() < 1e-10, "{g} vs {w}");
        }
        assert!(roots.s.iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn triple_zero_at_origin() {
        let roots = cardano_roots(0.0, 0.0);
        for z in roots.s {
            assert_eq!(z, Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn beta_zero_factorization_negative_tau() {
        // (s-τ)(s-9τ)(s-81τ) at τ = -1
        let roots = cardano_roots(-1.0, 0.0);
        let got = sorted_re(&roots);
        for (g, w) in got.iter().zip([-81.0, -9.0, -1.0]) {
            assert!((g - w).abs() < 1e-9, "{g} vs {w}");
        }
    }

    #[test]
    fn energies_from_negative_roots() {
        let roots = cardano_roots(-1.0, 0.0);
        let energies = energies_from_s(&roots);
        assert_eq!(energies.len(), 6);
        // ±i, ±3i, ±9i
        let mut mags: Vec<f64> = energies.iter().map(|z| z.im.abs()).collect();
        mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (g, w) in mags.iter().zip([1.0, 1.0, 3.0, 3.0, 9.0, 9.0]) {
            assert!((g - w).abs() < 1e-9);
        }
        assert!(energies.iter().all(|z| z.re.abs() < 1e-9));
    }

    #[test]
    fn vieta_identities_on_grid() {
        for i in 0..=20 {
            for j in 0..=20 {
                let tau = 0.01 + 0.99 * i as f64 / 20.0;
                let beta = -0.5 + j as f64 / 20.0;
                let roots = cardano_roots(tau, beta);
                let sum: Complex64 = roots.s.iter().sum();
                let prod: Complex64 = roots.s.iter().product();
                let pair: Complex64 = roots.s[0] * roots.s[1]
                    + roots.s[0] * roots.s[2]
                    + roots.s[1] * roots.s[2];
                let want_sum = 91.0 * tau - 2.0 * beta;
                let want_pair =
                    -114.0 * beta + 819.0 * tau * tau - 42.0 * tau * beta + beta * beta;
                let want_prod = 729.0 * tau.powi(3) + 486.0 * tau * beta + 81.0 * beta * beta;
                assert!(
                    (sum.re - want_sum).abs() <= 1e-9 * (1.0 + want_sum.abs()),
                    "sum at ({tau},{beta})"
                );
                assert!(
                    (pair.re - want_pair).abs() <= 1e-9 * (1.0 + want_pair.abs()),
                    "pair sum at ({tau},{beta})"
                );
                assert!(
                    (prod.re - want_prod).abs() <= 1e-9 * (1.0 + want_prod.abs()),
                    "product at ({tau},{beta})"
                );
                assert!(sum.im.abs() <= 1e-9 * (1.0 + want_sum.abs()));
            }
        }
    }

    #[test]
    fn conjugate_closure_off_the_real_region() {
        // a point with one real root and a conjugate pair
        let roots = cardano_roots(0.1, 0.45);
        let n_real = roots.s.iter().filter(|z| z.im == 0.0).count();
        if n_real < 3 {
            assert_eq!(n_real, 1);
            let pair: Vec<&Complex64> = roots.s.iter().filter(|z| z.im != 0.0).collect();
            assert_eq!(pair[0].re, pair[1].re);
            assert_eq!(pair[0].im, -pair[1].im);
        }
    }

    #[test]
    fn classification_semantics() {
        let label = classify_point(1.0, 0.0, &cfg());
        assert!(label.all_s_real && label.all_s_positive && label.unitary);

        let label = classify_point(-1.0, 0.0, &cfg());
        assert!(label.all_s_real);
        assert!(!label.all_s_positive);
        assert!(!label.unitary);

        let label = classify_point(0.0, 0.0, &cfg());
        assert!(!label.unitary); // the EP is the horizon, not the interior
    }

    #[test]
    fn positive_tau_axis_is_unitary() {
        for i in 1..=100 {
            let tau = i as f64 / 100.0;
            assert!(
                classify_point(tau, 0.0, &cfg()).unitary,
                "tau = {tau} should be unitary"
            );
        }
    }
}

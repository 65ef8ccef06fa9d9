//! Acceptance suite: one test per release criterion, each printing a
//! single pass line (run with `--nocapture` to see them). Tolerances are
//! pinned in the asserts, not configurable.

use std::time::Instant;

use num_complex::Complex64;

use epatlas_core::jordan::{ep_classify, jordan_structure_at};
use epatlas_core::linalg::{eigenvalues, vec_norm, Mat, ToleranceConfig};
use epatlas_core::metric::{
    construct_positive_metric, factor_metric, hermitize, inner_product, metric_condition,
    theta_inner_product,
};
use epatlas_core::models;
use epatlas_core::secular::{cardano_roots, classify_point};
use epatlas_core::sweep::{locate_ep_1d, reality_experiment, unfolding_exponent, RealityMode};
use epatlas_core::transition::{jordan_block, verify_transition, CanonicalJordanSpec};
use epatlas_core::Error;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cfg() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pass(n: usize, what: &str) {
    println!("[acceptance] criterion {n} ({what}): PASS");
}

#[test]
fn criterion_01_jordan_structure_of_h222_ep() {
    let cls = ep_classify(&models::h222_ep(0.0), &cfg(), None).unwrap();
    assert_eq!(cls.structures.len(), 1);
    let s = &cls.structures[0];
    assert_eq!(s.blocks, vec![2, 2, 2]);
    assert_eq!(s.geom_mult, 3);
    assert!(s.eta.norm() <= 1e-9, "eta = {}", s.eta);
    pass(1, "EP2+EP2+EP2 structure of the cross-diagonal model");
}

#[test]
fn criterion_02_h42_structure_and_printed_q() {
    let h = models::h42_ep();
    let s = jordan_structure_at(&h, c(0.0, 0.0), &cfg()).unwrap();
    assert_eq!(s.blocks, vec![4, 2]);

    let q = models::h42_ep_printed_q();
    let j = epatlas_core::transition::build_canonical_jordan(&CanonicalJordanSpec {
        eta: c(0.0, 0.0),
        blocks: vec![4, 2],
    });
    let check = verify_transition(&h, &q, &j, &cfg()).unwrap();
    assert!(check.residual < 1e-12, "residual {}", check.residual);
    assert!(
        (check.det_q - c(26244.0, 0.0)).norm() <= 1e-8 * 26244.0,
        "det {}",
        check.det_q
    );
    assert!(check.invertible);
    pass(2, "EP4+EP2 structure and det Q = 26244");
}

#[test]
fn criterion_03_type_jump_of_the_perturbed_h42() {
    let s0 = jordan_structure_at(&models::h42_tilde(0.0), c(0.0, 0.0), &cfg()).unwrap();
    assert_eq!(s0.blocks, vec![4, 2]);
    let j6 = jordan_block(6, c(0.0, 0.0));
    for &gamma in &[0.5, 1.0, 2.0] {
        let h = models::h42_tilde(gamma);
        let s = jordan_structure_at(&h, c(0.0, 0.0), &cfg()).unwrap();
        assert_eq!(s.blocks, vec![6], "gamma = {gamma}");
        let q = models::h42_tilde_printed_q(gamma);
        let check = verify_transition(&h, &q, &j6, &cfg()).unwrap();
        let want = 19131876.0 * gamma.powi(4);
        assert!(
            (check.det_q - c(want, 0.0)).norm() <= 1e-8 * want,
            "gamma = {gamma}: det {} vs {want}",
            check.det_q
        );
    }
    pass(3, "EP4+EP2 -> EP6 type jump with det Q = 19131876 gamma^4");
}

#[test]
fn criterion_04_h6_closed_form_spectrum() {
    for &tau in &[0.04, 0.25, 1.0] {
        let m = models::h6(tau, 0.0).unwrap();
        let mut eigs = eigenvalues(&m, &cfg()).unwrap();
        eigs.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        let r = tau.sqrt();
        let want = [-9.0 * r, -3.0 * r, -r, r, 3.0 * r, 9.0 * r];
        for (got, w) in eigs.iter().zip(want) {
            assert!(
                (got - c(w, 0.0)).norm() < 1e-8,
                "tau = {tau}: {got} vs {w}"
            );
        }
    }
    pass(4, "h6 spectrum is the ±(1,3,9)√tau sextet at beta = 0");
}

#[test]
fn criterion_05_cardano_eigensolver_agreement() {
    let start = Instant::now();
    for i in 0..=20 {
        for j in 0..=20 {
            let tau = 0.01 + 0.99 * i as f64 / 20.0;
            let beta = -0.5 + j as f64 / 20.0;
            let roots = cardano_roots(tau, beta);

            // multiset {E²} against {s, s, ...}, nearest-neighbor matched
            let m = models::h6(tau, beta).unwrap();
            let eigs = eigenvalues(&m, &cfg()).unwrap();
            let mut squares: Vec<Complex64> = eigs.iter().map(|z| z * z).collect();
            let want: Vec<Complex64> = roots.s.iter().flat_map(|&s| [s, s]).collect();
            for w in &want {
                let (idx, dist) = squares
                    .iter()
                    .enumerate()
                    .map(|(i, g)| (i, (g - w).norm()))
                    .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                    .unwrap();
                assert!(dist <= 1e-8, "E² mismatch at ({tau}, {beta}): {w} missed by {dist}");
                squares.swap_remove(idx);
            }

            // Vieta identities
            let sum: Complex64 = roots.s.iter().sum();
            let pair: Complex64 =
                roots.s[0] * roots.s[1] + roots.s[0] * roots.s[2] + roots.s[1] * roots.s[2];
            let prod: Complex64 = roots.s.iter().product();
            let want_sum = 91.0 * tau - 2.0 * beta;
            let want_pair = -114.0 * beta + 819.0 * tau * tau - 42.0 * tau * beta + beta * beta;
            let want_prod = 729.0 * tau.powi(3) + 486.0 * tau * beta + 81.0 * beta * beta;
            assert!((sum.re - want_sum).abs() <= 1e-9 * (1.0 + want_sum.abs()));
            assert!((pair.re - want_pair).abs() <= 1e-9 * (1.0 + want_pair.abs()));
            assert!((prod.re - want_prod).abs() <= 1e-9 * (1.0 + want_prod.abs()));
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "grid took {elapsed:?}");
    pass(5, "Cardano and eigensolver agree on the 21x21 grid");
}

#[test]
fn criterion_06_ep_localization() {
    let pert = |b: f64| Ok(models::h222_pert(0.0, b, 5.0 * b));
    let loc = locate_ep_1d(pert, (0.5, 1.5), &cfg()).unwrap();
    assert!((loc.param_value - 1.0).abs() < 1e-6, "b* = {}", loc.param_value);
    let loc = locate_ep_1d(pert, (-1.5, -0.5), &cfg()).unwrap();
    assert!((loc.param_value + 1.0).abs() < 1e-6, "b* = {}", loc.param_value);

    let tilde = |b: f64| Ok(models::h222_tilde(0.0, b));
    let loc = locate_ep_1d(tilde, (0.5, 1.5), &cfg()).unwrap();
    assert!((loc.param_value - 1.0).abs() < 1e-6, "b* = {}", loc.param_value);
    let loc = locate_ep_1d(tilde, (-1.5, -0.5), &cfg()).unwrap();
    assert!((loc.param_value + 1.0).abs() < 1e-6, "b* = {}", loc.param_value);

    let h6_family = |t: f64| models::h6(t, 0.0);
    let loc = locate_ep_1d(h6_family, (-0.5, 0.5), &cfg()).unwrap();
    assert!(loc.param_value.abs() < 1e-6, "tau* = {}", loc.param_value);
    pass(6, "EPs located at b = ±1 and tau = 0 within 1e-6");
}

#[test]
fn criterion_07_unfolding_exponents() {
    let g_values: Vec<f64> = (3..=9).map(|k| 10.0_f64.powi(-k)).collect();
    for m in [2usize, 3, 4, 6] {
        let family = move |g: f64| {
            models::jordan_pert(m, c(0.0, 0.0), g, &models::corner_perturbation(m))
        };
        let fit = unfolding_exponent(family, 0.0, &g_values, &cfg()).unwrap();
        let want = 1.0 / m as f64;
        assert!(
            (fit.exponent - want).abs() <= 0.02,
            "J^({m}): exponent {} vs {want}",
            fit.exponent
        );
        assert!(fit.r_squared > 0.999, "J^({m}): r² = {}", fit.r_squared);
    }
    // EP2 unfolding of the three-parameter family approached along b = 1-g
    let family = |g: f64| Ok(models::h222_pert(0.0, 1.0 - g, 5.0 * (1.0 - g)));
    let fit = unfolding_exponent(family, 0.0, &g_values, &cfg()).unwrap();
    assert!(
        (fit.exponent - 0.5).abs() <= 0.02,
        "EP2 exponent {}",
        fit.exponent
    );
    pass(7, "unfolding exponents 1/m for m in {2,3,4,6} and the EP2 family");
}

#[test]
fn criterion_08_reality_of_perturbed_spectra() {
    // generic dense perturbations of J^(6): essentially never real
    let generic = reality_experiment(
        6,
        RealityMode::Generic,
        &std::collections::BTreeMap::new(),
        &[1e-2, 1e-4, 1e-6],
        100,
        42,
        &cfg(),
    )
    .unwrap();
    for &(g, f) in &generic.fractions {
        assert!(f < 0.05, "generic N=6 at g={g}: fraction {f}");
    }

    // the same prefactors without the subdiagonal scaling go complex
    let flat = reality_experiment(
        3,
        RealityMode::Flat,
        &models::ones_prefactors(3),
        &[1e-2, 1e-3, 1e-4],
        1,
        42,
        &cfg(),
    )
    .unwrap();
    for &(g, f) in &flat.fractions {
        assert_eq!(f, 0.0, "flat N=3 at g={g} should be complex");
    }

    // the scaled family found by the sign-pattern search stays real
    let admissible = reality_experiment(
        3,
        RealityMode::Scaled,
        &models::ones_prefactors(3),
        &[1e-2, 1e-3, 1e-4],
        1,
        42,
        &cfg(),
    )
    .unwrap();
    for &(g, f) in &admissible.fractions {
        assert_eq!(f, 1.0, "scaled N=3 at g={g} should stay real");
    }
    pass(8, "reality fractions: generic < 0.05, flat 0, scaled 1");
}

#[test]
fn criterion_09_metric_pipeline() {
    let cases: Vec<Mat> = vec![
        models::h222_pert(0.0, 0.5, 2.5),
        models::h6(0.25, 0.01).unwrap(),
    ];
    for h in &cases {
        let sol = construct_positive_metric(h, &[1.0; 6], &cfg()).unwrap();
        assert!(sol.positive_definite);
        assert!(sol.intertwining_residual < 1e-10, "intertwining residual {}", sol.intertwining_residual);
        let theta = sol.chosen_theta.unwrap();
        let omega = factor_metric(&theta, &cfg()).unwrap();
        let herm = hermitize(h, &omega, &cfg()).unwrap();
        assert!(herm.hermiticity_defect < 1e-8, "defect {}", herm.hermiticity_defect);

        // ⟨a|Θ|b⟩ = ⟨Ωa|Ωb⟩ on 100 random pairs
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..100 {
            let a: Vec<Complex64> = (0..6)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let b: Vec<Complex64> = (0..6)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let direct = theta_inner_product(&theta, &a, &b);
            let mapped = inner_product(&omega.mul_vec(&a), &omega.mul_vec(&b));
            let scale = theta.frobenius_norm() * vec_norm(&a) * vec_norm(&b);
            assert!(
                (direct - mapped).norm() <= 1e-10 * scale,
                "inner products differ: {direct} vs {mapped}"
            );
        }
    }

    // anisotropy grows monotonically towards the EP
    let mut conds = Vec::new();
    for &b in &[0.5, 0.9, 0.99] {
        let h = models::h222_pert(0.0, b, 5.0 * b);
        let sol = construct_positive_metric(&h, &[1.0; 6], &cfg()).unwrap();
        conds.push(metric_condition(&sol.chosen_theta.unwrap(), &cfg()).unwrap());
    }
    assert!(conds[0] < conds[1] && conds[1] < conds[2], "conditions {conds:?}");

    // every built-in EP point is obstructed
    let eps: Vec<Mat> = vec![
        models::h222_ep(0.0),
        models::h222_pert(0.0, 1.0, 5.0),
        models::h222_pert(0.0, -1.0, -5.0),
        models::h222_tilde(0.0, 1.0),
        models::h222_tilde(0.0, -1.0),
        models::h42_ep(),
        models::h6(0.0, 0.0).unwrap(),
        models::h42_tilde(0.5),
        models::h42_tilde(1.0),
        models::h42_tilde(2.0),
        // the perturbed-block family sits at its EP at g = 0
        models::jordan_pert(6, c(0.0, 0.0), 0.0, &models::corner_perturbation(6)).unwrap(),
    ];
    for (i, h) in eps.iter().enumerate() {
        match construct_positive_metric(h, &[1.0; 6], &cfg()) {
            Err(Error::EpObstruction) => {}
            other => panic!("EP case {i}: expected the EP obstruction, got {other:?}"),
        }
    }
    pass(9, "metric pipeline: residuals, inner products, anisotropy, obstruction");
}

#[test]
fn criterion_10_table_semantics() {
    for i in 1..=20 {
        let tau = i as f64 / 20.0;
        let label = classify_point(tau, 0.0, &cfg());
        assert!(label.unitary, "tau = {tau} must be unitary");
    }
    let label = classify_point(-1.0, 0.0, &cfg());
    assert!(label.all_s_real && !label.all_s_positive && !label.unitary);
    let label = classify_point(0.0, 0.0, &cfg());
    assert!(!label.unitary, "the EP itself is the horizon, not the interior");
    pass(10, "unitarity table semantics on the tau axis and at the EP");
}

mod common;

use bundle_lab::asymptotics::log_det_report;
use bundle_lab::*;
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn log_det_lu_cross_check() {
    let spec = TorusBundleSpec::with_holonomies(vec![6, 5], &[0.15, 0.5]).unwrap();
    let r = log_det_report(&spec).unwrap();
    let dense = dense_log_det(&dense_laplacian(&build_torus(&spec)));
    assert!((r.eigen_logdet - dense).abs() < 1e-10);
    assert!((r.lu_logdet.unwrap() - dense).abs() < 1e-9);
    assert_eq!(r.holonomies.len(), 2);
}

#[test]
fn log_det_star_counts_spanning_trees() {
    // det* of the n-cycle is n · n (n spanning trees, times the vertex count)
    for n in 2..8 {
        let v = log_det_star(&TorusBundleSpec::trivial(vec![n]).unwrap()).unwrap();
        assert!((v - (n as f64 * n as f64).ln()).abs() < 1e-12);
    }
    assert!(log_det_star(&TorusBundleSpec::with_holonomies(vec![3], &[0.5]).unwrap()).is_err());
}

#[test]
fn one_dimensional_residual_is_exact() {
    let family = TorusFamily::scaled(vec![1], vec![0.37]).unwrap();
    let r = thm11_residuals(&family, &[3, 10, 100]).unwrap();
    assert!(r.residuals.iter().all(|v| v.abs() < 1e-12), "{:?}", r.residuals);
}

#[test]
fn two_dimensional_residual_decays_quadratically() {
    let family = TorusFamily::scaled(vec![1, 2], vec![0.5, 0.5]).unwrap();
    let r = thm11_residuals(&family, &[16, 32, 64]).unwrap();
    assert!(r.is_strictly_decreasing());
    assert!((r.slope.unwrap() + 2.0).abs() < 0.1, "slope {:?}", r.slope);
}

#[test]
fn zeta_residuals_shrink() {
    let family = TorusFamily::scaled(vec![2, 1], vec![0.25, 0.0]).unwrap();
    let r = thm13_residuals(&family, 0.3, &[16, 32, 64]).unwrap();
    assert!(r.is_strictly_decreasing(), "{:?}", r.residuals);
}

#[test]
fn h_dn_two_ways() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for sides in [vec![7], vec![3, 3], vec![2, 5], vec![2, 2, 3]] {
        let lambda: Vec<f64> = sides.iter().map(|_| rng.random_range(0.05..0.95)).collect();
        let spec = TorusBundleSpec::with_holonomies(sides, &lambda).unwrap();
        let a = h_dn(&spec).unwrap();
        let b = h_dn_integral(&spec).unwrap();
        assert!((a - b.value).abs() < 1e-8, "{a} vs {}", b.value);
    }
    assert!(h_dn_integral(&TorusBundleSpec::trivial(vec![3]).unwrap()).is_err());
}

#[test]
fn product_formula_random_holonomies() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for (m, n) in [(vec![3], 2), (vec![2, 3], 1), (vec![1, 2], 3), (vec![2, 1, 2], 1)] {
        let z: Vec<UnitWeight> = m.iter().map(|_| UnitWeight::from_turns(rng.random())).collect();
        let c = product_formula_check(&m, n, &z).unwrap();
        assert!(c.relative_error() < 1e-10, "{m:?}: {c:?}");
    }
    assert!(product_formula_check(&[2], 2, &[]).is_err());
    assert!(product_formula_check(&[0], 2, &[UnitWeight::ONE]).is_err());
}

#[test]
fn divisibility_quotients_are_integers() {
    for n in 1..=3 {
        let d = divisibility_check(n).unwrap();
        assert!(d.is_integer, "{d:?}");
    }
    assert_eq!(divisibility_check(1).unwrap().nearest, 32.0);
}

#[test]
fn family_validation() {
    assert!(TorusFamily::scaled(vec![1, 0], vec![0.5, 0.5]).is_err());
    assert!(TorusFamily::scaled(vec![1, 1], vec![0.5]).is_err());
    let f = TorusFamily::scaled(vec![2, 3], vec![0.1, 0.2]).unwrap();
    assert_eq!(f.sides(4), vec![8, 12]);
    assert_eq!(f.limit().alpha(), &[2.0, 3.0]);
    assert!(thm11_residuals(&TorusFamily::scaled(vec![1], vec![0.0]).unwrap(), &[4]).is_err());
}

mod common;

use bundle_lab::bundle_graph::{circle_eigenvalues, laplacian_with_cap};
use bundle_lab::*;
use common::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn weights_strategy(sides: Vec<usize>) -> impl Strategy<Value = TorusBundleSpec> {
    let rows: Vec<_> = sides.iter().map(|&a| prop::collection::vec(0.0..1.0f64, a)).collect();
    rows.prop_map(move |turns| {
        let w = turns
            .iter()
            .map(|row| row.iter().map(|&x| UnitWeight::from_turns(x)).collect())
            .collect();
        TorusBundleSpec::new(sides.clone(), w).unwrap()
    })
}

fn torus_strategy() -> impl Strategy<Value = TorusBundleSpec> {
    prop::collection::vec(1usize..=6, 1..=3).prop_flat_map(weights_strategy)
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_spectrum_matches_dense(spec in torus_strategy()) {
        let dense = sorted(hermitian_eigen(&dense_laplacian(&build_torus(&spec))).0);
        let closed = torus_eigenvalues(&spec);
        prop_assert_eq!(dense.len(), closed.len());
        for (a, b) in dense.iter().zip(&closed) {
            prop_assert!((a - b).abs() < 1e-10, "{} vs {}", a, b);
        }
    }

    #[test]
    fn library_laplacian_matches_oracle(spec in torus_strategy()) {
        let g = build_torus(&spec);
        let lib = laplacian(&g).unwrap();
        let oracle = dense_laplacian(&g);
        prop_assert!((lib.matrix() - &oracle).norm() < 1e-13);
        prop_assert!(lib.hermitian_defect() < 1e-15);
    }

    #[test]
    fn spectrum_depends_only_on_holonomy(spec in torus_strategy()) {
        let twisted = TorusBundleSpec::with_holonomies(spec.sides().to_vec(), spec.holonomies()).unwrap();
        for (a, b) in torus_eigenvalues(&spec).iter().zip(&torus_eigenvalues(&twisted)) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn gauge_transform_preserves_spectrum(
        spec in torus_strategy(),
        seed in 0.0..1.0f64,
    ) {
        let g = build_torus(&spec);
        let phases: Vec<UnitWeight> = (0..g.vertex_count())
            .map(|v| UnitWeight::from_turns((seed * (v as f64 + 1.0) * 7.31).fract()))
            .collect();
        let h = g.gauge_transform(&phases).unwrap();
        let a = sorted(laplacian(&g).unwrap().eigenvalues());
        let b = sorted(laplacian(&h).unwrap().eigenvalues());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn determinant_is_real_and_nonnegative(spec in torus_strategy()) {
        let det = laplacian(&build_torus(&spec)).unwrap().determinant();
        let scale = det.norm().max(1.0);
        prop_assert!(det.im.abs() < 1e-9 * scale);
        prop_assert!(det.re > -1e-9 * scale);
    }

    #[test]
    fn holonomy_in_unit_interval(spec in torus_strategy()) {
        for &l in spec.holonomies() {
            prop_assert!((0.0..1.0).contains(&l));
        }
    }
}

#[test]
fn trivial_torus_has_one_zero_mode() {
    let spec = TorusBundleSpec::trivial(vec![3, 4]).unwrap();
    let ev = torus_eigenvalues(&spec);
    assert_eq!(ev.iter().filter(|e| e.abs() < 1e-12).count(), 1);
    assert!(spec.is_trivial());
}

#[test]
fn circle_spectrum_half_twist() {
    let ev = circle_eigenvalues(4, 0.5);
    let expect = [2.0 - 2f64.sqrt(), 2.0 + 2f64.sqrt(), 2.0 + 2f64.sqrt(), 2.0 - 2f64.sqrt()];
    for (a, b) in ev.iter().zip(&expect) {
        assert!((a - b).abs() < 1e-14);
    }
}

#[test]
fn self_loop_torus() {
    let spec = TorusBundleSpec::with_holonomies(vec![1], &[0.25]).unwrap();
    assert!((torus_eigenvalues(&spec)[0] - 2.0).abs() < 1e-15);
    let op = laplacian(&build_torus(&spec)).unwrap();
    assert!((op.entry(0, 0) - Complex64::new(2.0, 0.0)).norm() < 1e-15);
}

#[test]
fn invalid_inputs_are_rejected() {
    assert!(UnitWeight::new(Complex64::new(2.0, 0.0)).is_err());
    assert!(UnitWeight::new(Complex64::new(f64::NAN, 0.0)).is_err());
    assert!(TorusBundleSpec::trivial(vec![]).is_err());
    assert!(TorusBundleSpec::trivial(vec![3, 0]).is_err());
    assert!(TorusBundleSpec::with_holonomies(vec![3], &[0.1, 0.2]).is_err());
    let e = Edge { tail: 0, head: 5, weight: UnitWeight::ONE };
    assert!(LineBundleGraph::new(3, vec![e]).is_err());
}

#[test]
fn matrix_cap_is_enforced() {
    let g = build_torus(&TorusBundleSpec::trivial(vec![10, 10]).unwrap());
    match laplacian_with_cap(&g, 50) {
        Err(Error::CapExceeded { size, cap, .. }) => assert_eq!((size, cap), (100, 50)),
        other => panic!("expected a cap error, got {other:?}"),
    }
}

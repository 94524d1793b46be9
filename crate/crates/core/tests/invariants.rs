//! Property-based checks of the kernel invariants on seeded random inputs.

use proptest::prelude::*;
use qpoc_core::dynamics::a_sigma;
use qpoc_core::entropy::{
    golden_thompson_gap, partial_trace_pair, pinsker_gap, relative_entropy, superadditivity_gap,
    variational_gap,
};
use qpoc_core::random::{random_hermitian, random_model, random_state};
use qpoc_core::symmetry::symmetrize;
use qpoc_core::tensor::{
    embed, frechet_log, herm_log, kron, op_norm, partial_trace, trace_norm, DensityMatrix,
};
use qpoc_core::Tolerances;

fn tol() -> Tolerances {
    Tolerances::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_mixed_product(s in 0u64..1_000_000) {
        let (a, b, c, d) = (random_hermitian(2, s), random_hermitian(3, s + 1), random_hermitian(2, s + 2), random_hermitian(3, s + 3));
        let lhs = kron(&a, &b).matmul(&kron(&c, &d));
        let rhs = kron(&a.matmul(&c), &b.matmul(&d));
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn embed_respects_products(s in 0u64..1_000_000) {
        let (o1, o2) = (random_hermitian(4, s), random_hermitian(4, s + 1));
        let e1 = embed(&o1, &[3, 1], 3, 2).unwrap();
        let e2 = embed(&o2, &[3, 1], 3, 2).unwrap();
        let e12 = embed(&o1.matmul(&o2), &[3, 1], 3, 2).unwrap();
        prop_assert!(e1.matmul(&e2).max_abs_diff(&e12) < 1e-12);
    }

    #[test]
    fn partial_trace_preserves_total_trace(s in 0u64..1_000_000, keep in proptest::sample::subsequence(vec![1usize, 2, 3], 0..=3)) {
        let m = random_hermitian(8, s);
        let pt = partial_trace(&m, &keep, 3, 2).unwrap();
        prop_assert!((pt.trace() - m.trace()).norm() < 1e-12);
    }

    #[test]
    fn partial_trace_of_local_operator_on_product(s in 0u64..1_000_000) {
        let o = random_hermitian(2, s);
        let (r, t) = (random_state(2, s + 1), random_state(2, s + 2));
        let m = kron(r.as_matrix(), t.as_matrix());
        let pt = partial_trace(&embed(&o, &[1], 2, 2).unwrap().matmul(&m), &[1], 2, 2).unwrap();
        prop_assert!(pt.max_abs_diff(&o.matmul(r.as_matrix())) < 1e-13);
    }

    #[test]
    fn a_sigma_matches_partial_trace(s in 0u64..1_000_000) {
        let p = random_model(3, s, 2.0);
        let sigma = random_state(3, s + 7);
        let direct = a_sigma(p.a_int(), sigma.as_matrix()).unwrap();
        let one = qpoc_core::QMatrix::identity(3);
        let route = partial_trace(&kron(&one, sigma.as_matrix()).matmul(p.a_int()), &[1], 2, 3).unwrap();
        prop_assert!(direct.max_abs_diff(&route) < 1e-13);
        prop_assert!(op_norm(&direct).unwrap() <= op_norm(p.a_int()).unwrap() + 1e-12);
    }

    #[test]
    fn relative_entropy_nonnegative_and_faithful(s in 0u64..1_000_000) {
        let (r, t) = (random_state(3, s), random_state(3, s + 1));
        let v = relative_entropy(&r, &t, &tol()).unwrap().value();
        prop_assert!(v >= -1e-10);
        let dist = trace_norm(&(r.as_matrix() - t.as_matrix())).unwrap();
        prop_assert!(dist > 1e-8 && v > 0.0);
        prop_assert!(relative_entropy(&r, &r, &tol()).unwrap().value().abs() < 1e-10);
    }

    #[test]
    fn pinsker_gt_variational(s in 0u64..1_000_000, lambda in 0.05f64..5.0) {
        let (r, t) = (random_state(2, s), random_state(2, s + 1));
        prop_assert!(pinsker_gap(&r, &t, &tol()).unwrap() >= -1e-10);
        let (a, b) = (random_hermitian(4, s + 2), random_hermitian(4, s + 3));
        prop_assert!(golden_thompson_gap(&a, &b, &tol()).unwrap() >= -1e-10);
        let x = random_hermitian(2, s + 4);
        prop_assert!(variational_gap(&r, &t, &x, lambda, &tol()).unwrap() >= -1e-10);
    }

    #[test]
    fn monotone_under_partial_trace(s in 0u64..1_000_000) {
        let (r, t) = (random_state(4, s), random_state(4, s + 1));
        let (reduced, full) = partial_trace_pair(&r, &t, &[1], 2, 2, &tol()).unwrap();
        prop_assert!(reduced.value() <= full.value() + 1e-9);
    }

    #[test]
    fn superadditive_on_exchangeable_states(s in 0u64..1_000_000) {
        let rho = symmetrize(&random_state(16, s), 4, 2).unwrap();
        let sigma = random_state(2, s + 1);
        prop_assert!(superadditivity_gap(&rho, &sigma, 2, &tol()).unwrap() >= -1e-9);
    }

    #[test]
    fn frechet_identities(s in 0u64..1_000_000) {
        let sigma = random_state(4, s);
        let (x, y) = (random_hermitian(4, s + 1), random_hermitian(4, s + 2));
        let t = tol();
        let tx = frechet_log(&sigma, &x, &t).unwrap();
        let ty = frechet_log(&sigma, &y, &t).unwrap();
        prop_assert!((y.trace_product(&tx) - ty.trace_product(&x)).norm() < 1e-10);
        prop_assert!((sigma.as_matrix().trace_product(&tx) - x.trace()).norm() < 1e-10);
        let log_sigma = herm_log(sigma.as_matrix(), t.eig_floor, t.herm_tol).unwrap();
        let lhs = frechet_log(&sigma, &x.commutator(sigma.as_matrix()), &t).unwrap();
        prop_assert!(lhs.max_abs_diff(&x.commutator(&log_sigma)) < 1e-10);
    }

    #[test]
    fn density_matrix_roundtrip(s in 0u64..1_000_000) {
        let r = random_state(5, s);
        prop_assert!(DensityMatrix::new(r.as_matrix().clone(), &tol()).is_ok());
    }
}

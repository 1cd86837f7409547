mod common;

use hcalc::numlin::{
    c, contraction_to_isometries, eigh, matrix_factor, op_norm, polar, svd, CMatrix, Factorization, FactorKind, NormSpec,
};
use proptest::prelude::*;

fn matrix(d: usize) -> impl Strategy<Value = CMatrix> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), d * d)
        .prop_map(move |v| CMatrix::from_vec(d, d, v.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap())
}

fn contraction() -> impl Strategy<Value = CMatrix> {
    (1usize..=6, 0.05f64..1.0).prop_flat_map(|(d, s)| {
        matrix(d).prop_map(move |a| {
            let n = svd(&a).unwrap().s[0].max(1e-12);
            a.scale_real(s / n)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn isometry_decomposition_invariants(a in contraction()) {
        let dec = contraction_to_isometries(&a).unwrap();
        prop_assert!(dec.reconstruct().max_abs_diff(&a) <= 1e-10);
        prop_assert!(dec.unitarity_defect() <= 1e-10);
        prop_assert!((dec.weight_sum() - 1.0).abs() <= 1e-12);
        prop_assert!(dec.terms.iter().all(|t| t.weight >= -1e-14));
        prop_assert!(dec.terms.len() <= a.rows() + 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn spectral_norm_is_top_singular_value(a in (1usize..=6).prop_flat_map(matrix)) {
        let n = op_norm(&a, &NormSpec::hilbert(), &NormSpec::hilbert()).unwrap();
        let s = match matrix_factor(&a, FactorKind::Svd).unwrap() {
            Factorization::Svd(s) => s,
            _ => unreachable!(),
        };
        prop_assert!((n.value - s.s[0]).abs() <= 1e-12 * s.s[0].max(1.0));
        // independent route: largest eigenvalue of A*A
        let e = eigh(&a.adjoint().matmul(&a)).unwrap();
        prop_assert!((n.value * n.value - e.values[0]).abs() <= 1e-10 * e.values[0].max(1.0));
        prop_assert!(s.reconstruct().max_abs_diff(&a) <= 1e-10 * s.s[0].max(1.0));
        prop_assert!(s.s.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn polar_positive_part(a in (1usize..=6).prop_flat_map(matrix)) {
        let p = polar(&a).unwrap();
        let e = eigh(&p.p).unwrap();
        prop_assert!(e.values.iter().all(|v| *v >= -1e-12));
        prop_assert!(p.w.matmul(&p.p).max_abs_diff(&a) <= 1e-10);
    }
}

#[test]
fn documented_examples() {
    let s = svd(&CMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap()).unwrap();
    assert!((s.s[0] - 2.0).abs() < 1e-14 && s.s[1].abs() < 1e-14);
    let n = op_norm(&CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap(), &NormSpec::hilbert(), &NormSpec::hilbert()).unwrap();
    assert!((n.value - 1.0).abs() < 1e-14);
    for p in [1.0, 3.0, f64::INFINITY] {
        let l = NormSpec::lp(p).unwrap();
        assert!((op_norm(&CMatrix::identity(3), &l, &l).unwrap().value - 1.0).abs() < 1e-12);
    }
    let d = contraction_to_isometries(&CMatrix::diag_real(&[0.5])).unwrap();
    assert!((d.scale - 0.5).abs() < 1e-15 && d.terms.len() == 1);
    let mut r = common::rng(5);
    let q = svd(&common::cmatrix(&mut r, 3, 3)).map(|s| s.u.matmul(&s.v.adjoint())).unwrap();
    let d = contraction_to_isometries(&q).unwrap();
    assert_eq!(d.terms.len(), 1);
    assert!(d.terms[0].factor.max_abs_diff(&q) < 1e-10);
    let pq = polar(&q).unwrap();
    assert!(pq.p.max_abs_diff(&CMatrix::identity(3)) < 1e-10 && pq.w.max_abs_diff(&q) < 1e-10);
}

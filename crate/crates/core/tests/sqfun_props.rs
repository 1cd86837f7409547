mod common;

use std::f64::consts::PI;

use hcalc::numlin::{c, CMatrix, CVector, C64};
use hcalc::sqfun::{
    equivalence_check, integral_representation_check, line_grid, sqfun_hs, sqfun_matrix, Equivalence, KernelFn, Side, SqfOptions,
};
use hcalc::strip_calc::{HolFn, StripOperator};
use proptest::prelude::*;

fn gauss() -> HolFn {
    HolFn::strip("exp(-z^2)", f64::INFINITY, |z: C64| (-z * z).exp())
}

fn shifted(a: f64) -> HolFn {
    // not real on the real axis, so the conjugated kernel is a different function
    HolFn::strip("exp(-(z-0.3i)^2)", f64::INFINITY, move |z: C64| {
        let w = z - c(0.0, 0.3) + a;
        (-w * w).exp()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Scalar real A: ||psi(. + a)||_2 does not depend on a.
    #[test]
    fn translation_invariance(a in -3.0f64..3.0) {
        let op = StripOperator::new(CMatrix::diag_real(&[a])).unwrap();
        let k = KernelFn::shift(gauss(), line_grid(14.0, 0.05).unwrap()).unwrap();
        let s = sqfun_matrix(&k, &op, &CVector::from_real(&[1.0]), Side::Primal, &SqfOptions::default()).unwrap();
        prop_assert!((sqfun_hs(&s) - (PI / 2.0).powf(0.25)).abs() < 1e-9);
    }
}

/// Dual side with A against the primal side of A* with the conjugated kernel and x conjugated.
#[test]
fn dual_side_is_conjugate_primal() {
    let mut r = common::rng(11);
    for d in [2, 3, 4] {
        let op = StripOperator::new(common::strip_matrix(&mut r, d)).unwrap();
        let x = common::cvector(&mut r, d);
        let grid = line_grid(10.0, 0.1).unwrap();
        let k = KernelFn::shift(shifted(0.0), grid.clone()).unwrap();
        let kc = {
            let k = k.clone();
            KernelFn::custom("conj", k.height(), grid, move |t, z| k.value(t.conj(), z.conj()).conj())
        };
        let opts = SqfOptions::default();
        let dual = sqfun_matrix(&k, &op, &x, Side::Dual, &opts).unwrap();
        let xbar = CVector::new(x.as_slice().iter().map(|v| v.conj()).collect());
        let adj = op.adjoint().unwrap();
        let primal = sqfun_matrix(&kc, &adj, &xbar, Side::Primal, &opts).unwrap();
        let conj = CMatrix::from_vec(
            primal.matrix().rows(),
            primal.matrix().cols(),
            primal.matrix().as_slice().iter().map(|v| v.conj()).collect(),
        )
        .unwrap();
        let diff = dual.matrix().max_abs_diff(&conj);
        assert!(diff < 1e-9, "d = {d}: {diff}");
    }
}

#[test]
fn representation_identity() {
    let mut r = common::rng(3);
    let op = StripOperator::new(common::strip_matrix(&mut r, 3)).unwrap();
    let x = common::cvector(&mut r, 3);
    let grid = line_grid(8.0, 0.25).unwrap();
    let f = KernelFn::custom("orbit", 1.0, grid.clone(), |t, z| (c(0.0, -t.re) * z).exp() / t.re.cosh());
    let g = KernelFn::shift(gauss(), grid).unwrap();
    let m: Vec<C64> = f.grid().nodes().iter().map(|t| c(1.0 / (1.0 + t.re * t.re), 0.0)).collect();
    let rep = integral_representation_check(&f, &g, &m, &op, &x, &SqfOptions::default()).unwrap();
    assert!(rep.pass && rep.residual < 1e-7, "{}", rep.residual);
}

#[test]
fn tensor_equivalence() {
    let mut r = common::rng(8);
    let op = StripOperator::new(common::strip_matrix(&mut r, 2)).unwrap();
    let x = common::cvector(&mut r, 2);
    let first = KernelFn::shift(gauss(), line_grid(6.0, 0.5).unwrap()).unwrap();
    let second = KernelFn::custom("orbit", 1.0, line_grid(10.0, 0.5).unwrap(), |t, z| (c(0.0, t.re) * z).exp() / t.re.cosh());
    let rep = equivalence_check(Equivalence::Tensor { first: &first, second: &second }, &op, &x, &SqfOptions::default()).unwrap();
    assert!(rep.pass, "residual {}", rep.residual);
    assert!((rep.lhs - rep.rhs).abs() <= 1e-8 * rep.lhs.max(1.0));
}

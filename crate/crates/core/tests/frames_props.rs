mod common;

use hcalc::frames::{
    frame_bounds, gabor_frame_build, hs_maximizer, l1_frame_bound, sampled_l1_sup, shift_range_bound, FrameSpec, GaborParams, L1Target,
    ShiftRangeGrid,
};
use hcalc::numlin::{c, svd, CMatrix, CVector, C64};
use hcalc::strip_calc::HolFn;
use proptest::prelude::*;

fn dims() -> impl Strategy<Value = (usize, usize, u64)> {
    (1usize..=5, 1usize..=5, any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The SVD frame certifies ||T||_HS, attains it, and no sample exceeds it.
    #[test]
    fn hs_certificate((rows, cols, seed) in dims()) {
        let t = common::cmatrix(&mut common::rng(seed), rows, cols);
        let b = l1_frame_bound(L1Target::OperatorHs(&t)).unwrap();
        let hs = t.frobenius();
        prop_assert!((b.bound - hs).abs() <= 1e-12 * hs.max(1.0));
        let frame = b.frame.unwrap();
        prop_assert!(frame.synthesis().matmul(frame.analysis()).max_abs_diff(&CMatrix::identity(rows)) < 1e-10);
        prop_assert!((frame.synthesis_norm().unwrap() - 1.0).abs() < 1e-10);
        prop_assert!(sampled_l1_sup(&t, &frame, 500, seed) <= hs * (1.0 + 1e-12));
        let f = hs_maximizer(&t).unwrap();
        prop_assert!((f.norm2() - 1.0).abs() < 1e-10);
        prop_assert!((frame.l1_sum(&t.matvec(&f)) - hs).abs() < 1e-9 * hs.max(1.0));
    }

    /// ||x|| <= ||L|| sum_a |<x, e_a>| for any frame, so the set bound dominates every member.
    #[test]
    fn set_bound_dominates_norms((d, extra, seed) in dims()) {
        let mut r = common::rng(seed);
        let frame = FrameSpec::from_vectors(&common::cmatrix(&mut r, d, d + extra)).unwrap();
        let samples: Vec<CVector> = (0..20).map(|_| common::cvector(&mut r, d)).collect();
        let b = l1_frame_bound(L1Target::Set { samples: &samples, frame: &frame }).unwrap();
        let worst = samples.iter().map(|x| x.norm2()).fold(0.0, f64::max);
        prop_assert!(worst <= b.bound * (1.0 + 1e-12));
        let fb = frame_bounds(&frame, 200, seed).unwrap();
        prop_assert!(fb.lower <= fb.sampled_lower * (1.0 + 1e-12));
        prop_assert!(fb.sampled_lower <= fb.sampled_upper);
        prop_assert!(fb.sampled_upper <= fb.upper * (1.0 + 1e-12));
        prop_assert!((frame.synthesis_norm().unwrap() * fb.lower - 1.0).abs() < 1e-8);
    }

    /// Push-forward (R S^{-1}, S L) stays a frame, carries coefficients of x to those of S x, and
    /// has ||S L|| <= ||S|| ||L||.
    #[test]
    fn push_forward_frame((d, extra, seed) in dims()) {
        let mut r = common::rng(seed);
        let frame = FrameSpec::from_vectors(&common::cmatrix(&mut r, d, d + extra)).unwrap();
        let s = &CMatrix::identity(d) + &common::cmatrix(&mut r, d, d).scale_real(0.2 / d as f64);
        let pushed = frame.push_forward(&s).unwrap();
        prop_assert!(pushed.synthesis().matmul(pushed.analysis()).max_abs_diff(&CMatrix::identity(d)) < 1e-9);
        let sv = svd(&s).unwrap().s;
        prop_assert!(pushed.synthesis_norm().unwrap() <= sv[0] * frame.synthesis_norm().unwrap() * (1.0 + 1e-10));
        let x = common::cvector(&mut r, d);
        let (a, b) = (pushed.l1_sum(&s.matvec(&x)), frame.l1_sum(&x));
        prop_assert!((a - b).abs() <= 1e-9 * b.max(1.0));
    }
}

#[test]
fn rank_deficient_frame_rejected() {
    let v = CMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
    assert!(FrameSpec::from_vectors(&v).is_err());
}

/// Sum of squared Gabor coefficients of a function inside the covered range lies between
/// A^2 ||g||^2 and B^2 ||g||^2.
#[test]
fn gabor_coefficient_energy_within_frame_bounds() {
    let gabor = gabor_frame_build(&GaborParams::new(12, 32)).unwrap();
    let g = |s: f64| C64::from_polar((-s * s).exp(), 0.7 * s);
    let energy: f64 = gabor.coefficient_table(&g).iter().map(|e| e.abs * e.abs).sum();
    let norm2 = (std::f64::consts::PI / 2.0).sqrt();
    assert!(energy >= gabor.lower * gabor.lower * norm2 * (1.0 - 1e-9), "{energy}");
    assert!(energy <= gabor.upper * gabor.upper * norm2 * (1.0 + 1e-9), "{energy}");
    assert!(gabor.partition_residual(2001) < 1e-12);
}

#[test]
fn gabor_build_validates() {
    assert!(gabor_frame_build(&GaborParams::new(3, 32)).is_err());
    let mut p = GaborParams::new(12, 32);
    p.nodes_per_window = 64;
    assert!(gabor_frame_build(&p).is_err());
}

#[test]
fn shift_range_needs_elementary_profile() {
    let gabor = gabor_frame_build(&GaborParams::new(12, 32)).unwrap();
    let slow = HolFn::strip("1/(2i-z)", 2.0, |z| 1.0 / (c(0.0, 2.0) - z));
    assert!(shift_range_bound(&slow, 0.5, 1.0, &gabor, &ShiftRangeGrid::default()).is_err());
    let gauss = HolFn::strip("exp(-z^2)", f64::INFINITY, |z: C64| (-z * z).exp());
    assert!(shift_range_bound(&gauss, 1.0, 0.5, &gabor, &ShiftRangeGrid::default()).is_err());
}

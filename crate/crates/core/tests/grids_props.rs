use std::f64::consts::PI;

use hcalc::grids::{discrete_fourier, inverse_fourier, DiscreteHilbert};
use hcalc::numlin::{c, C64};
use proptest::prelude::*;

fn wave(a: f64, p: f64) -> impl Fn(f64) -> C64 {
    move |t| C64::from_polar((-(t - a) * (t - a)).exp(), p * t)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn grid_inner_product_matches_closed_form(a in -2.0f64..2.0, b in -2.0f64..2.0, p in -2.0f64..2.0, q in -2.0f64..2.0) {
        let grid = DiscreteHilbert::lebesgue_line(14.0, 2801).unwrap();
        let f: Vec<C64> = grid.nodes().iter().map(|t| wave(a, p)(t.re)).collect();
        let g: Vec<C64> = grid.nodes().iter().map(|t| wave(b, q)(t.re)).collect();
        let w = p - q;
        let m = 0.5 * (a + b);
        let want = C64::from_polar((PI / 2.0).sqrt() * (-(a - b) * (a - b) / 2.0 - w * w / 8.0).exp(), w * m);
        prop_assert!((grid.inner(&f, &g) - want).norm() < 1e-8);
    }

    #[test]
    fn plancherel_with_two_pi(a in -2.0f64..2.0, p in -2.0f64..2.0) {
        let grid = DiscreteHilbert::lebesgue_line(14.0, 1401).unwrap();
        let g: Vec<C64> = grid.nodes().iter().map(|t| wave(a, p)(t.re)).collect();
        let h = 0.02;
        let s: Vec<f64> = (0..4001).map(|k| -40.0 + h * k as f64).collect();
        let gh = discrete_fourier(&grid, &g, &s, 1e-12).unwrap();
        prop_assert!(gh.edge_ok);
        let lhs: f64 = gh.values.iter().map(|v| v.norm_sqr() * h).sum();
        let rhs = 2.0 * PI * grid.inner(&g, &g).re;
        prop_assert!((lhs - rhs).abs() < 1e-6 * rhs);
    }
}

#[test]
fn gaussian_transform_and_inverse() {
    let grid = DiscreteHilbert::lebesgue_line(12.0, 1201).unwrap();
    let g: Vec<C64> = grid.nodes().iter().map(|t| c((-t.re * t.re).exp(), 0.0)).collect();
    let pts = [0.0, 0.5, 1.7, -3.0];
    let gh = discrete_fourier(&grid, &g, &pts, 1e-12).unwrap();
    for (s, v) in pts.iter().zip(&gh.values) {
        assert!((v - PI.sqrt() * (-s * s / 4.0).exp()).norm() < 1e-12);
    }
    let sgrid = DiscreteHilbert::lebesgue_line(30.0, 3001).unwrap();
    let full: Vec<C64> = sgrid.nodes().iter().map(|s| c(PI.sqrt() * (-s.re * s.re / 4.0).exp(), 0.0)).collect();
    let back = inverse_fourier(&sgrid, &full, &[0.0, 0.8, -1.5], 1e-12).unwrap();
    for (t, v) in [0.0f64, 0.8, -1.5].iter().zip(&back.values) {
        assert!((v - (-t * t).exp()).norm() < 1e-10);
    }
}

mod common;

use hcalc::gauss_gamma::{gamma_norm, nuclear_bound, trace_pairing, FiniteRankOp, GammaMethod, GaussianSampler};
use hcalc::numlin::{c, CMatrix, CVector, NormSpec};
use proptest::prelude::*;

fn mc(samples: usize, seed: u64) -> GammaMethod {
    GammaMethod::MonteCarlo { samples, sampler: GaussianSampler::new(seed) }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lattice_two_is_hilbert(seed in any::<u64>(), n in 1usize..5, m in 1usize..6) {
        let t = common::cmatrix(&mut common::rng(seed), n, m);
        let h = gamma_norm(&FiniteRankOp::hilbert(t.clone()), GammaMethod::HilbertExact).unwrap().value;
        let l = gamma_norm(&FiniteRankOp::new(t, NormSpec::lp(2.0).unwrap()).unwrap(), GammaMethod::LatticeExact).unwrap().value;
        prop_assert!((h - l).abs() <= 1e-12 * h);
    }

    #[test]
    fn trace_pairing_cauchy_schwarz(seed in any::<u64>(), n in 1usize..5, m in 1usize..6) {
        let mut r = common::rng(seed);
        let u = FiniteRankOp::hilbert(common::cmatrix(&mut r, n, m));
        let v = FiniteRankOp::hilbert(common::cmatrix(&mut r, n, m));
        let p = trace_pairing(&u, &v).unwrap().norm();
        prop_assert!(p <= u.matrix.frobenius() * v.matrix.frobenius() * (1.0 + 1e-12));
    }
}

#[test]
fn monte_carlo_matches_hilbert_exact_across_seeds() {
    let t = FiniteRankOp::hilbert(common::cmatrix(&mut common::rng(3), 3, 4));
    let exact = gamma_norm(&t, GammaMethod::HilbertExact).unwrap().value;
    for seed in [1, 2, 42, 1000, 77777] {
        let e = gamma_norm(&t, mc(20000, seed)).unwrap();
        assert!((e.value - exact).abs() <= 3.0 * e.stderr.unwrap(), "seed {seed}: {} vs {exact}", e.value);
    }
}

#[test]
fn monotone_in_orthonormal_system() {
    let t = FiniteRankOp::new(common::cmatrix(&mut common::rng(8), 3, 5), NormSpec::lp(3.0).unwrap()).unwrap();
    let mut prev: Option<(f64, f64)> = None;
    for k in 1..=5 {
        let e = gamma_norm(&t.restrict(k), mc(20000, 9)).unwrap();
        let se = e.stderr.unwrap();
        if let Some((v, s)) = prev {
            assert!(e.value >= v - 3.0 * (s * s + se * se).sqrt(), "k = {k}");
        }
        prev = Some((e.value, se));
    }
}

#[test]
fn documented_gamma_examples() {
    let t = FiniteRankOp::new(CMatrix::identity(2), NormSpec::lp(1.0).unwrap()).unwrap();
    assert!((gamma_norm(&t, GammaMethod::LatticeExact).unwrap().value - 2.0).abs() < 1e-15);
    let g = CVector::from_real(&[3.0, 4.0]);
    let x = CVector::new(vec![c(1.0, 1.0), c(0.0, -2.0)]);
    let r1 = FiniteRankOp::rank_one(&g, &x, NormSpec::hilbert()).unwrap();
    let e = gamma_norm(&r1, mc(20000, 42)).unwrap();
    assert!((e.value - 5.0 * 6f64.sqrt()).abs() <= 3.0 * e.stderr.unwrap());
    // rank-one pairing <x, x'>
    let xd = CVector::new(vec![c(0.5, 0.0), c(2.0, 1.0)]);
    let e1 = CVector::basis(1, 0);
    let u = FiniteRankOp::rank_one(&e1, &x, NormSpec::hilbert()).unwrap();
    let v = FiniteRankOp::rank_one(&e1, &xd, NormSpec::hilbert()).unwrap();
    assert!((trace_pairing(&u, &v).unwrap() - x.dot(&xd)).norm() < 1e-15);
    // two orthogonal rank-ones: sqrt(a^2 + b^2) <= a + b
    let terms = vec![(CVector::basis(2, 0).scale(c(2.0, 0.0)), CVector::basis(2, 0)), (CVector::basis(2, 1), CVector::basis(2, 1))];
    let nb = nuclear_bound(&terms, &NormSpec::hilbert(), GammaMethod::HilbertExact).unwrap();
    assert!(nb.pass && (nb.bound - 3.0).abs() < 1e-15 && (nb.gamma.value - 5f64.sqrt()).abs() < 1e-15);
}

#[test]
fn sampled_pairing_is_discrete_integral() {
    let grid = hcalc::grids::DiscreteHilbert::lebesgue_line(5.0, 101).unwrap();
    let sw = grid.sqrt_weights();
    let f = |t: f64| CVector::new(vec![c((-t * t).exp(), 0.0), c(t.sin() * (-t * t).exp(), 0.3)]);
    let g = |t: f64| CVector::new(vec![c(t.cos(), 0.0), c(0.0, (-t * t).exp())]);
    let nodes: Vec<f64> = grid.nodes().iter().map(|t| t.re).collect();
    let u = CMatrix::from_fn(2, nodes.len(), |i, j| f(nodes[j])[i] * sw[j]);
    let v = CMatrix::from_fn(2, nodes.len(), |i, j| g(nodes[j])[i] * sw[j]);
    let want: hcalc::numlin::C64 = nodes.iter().zip(grid.weights()).map(|(t, w)| f(*t).dot(&g(*t)) * *w).sum();
    let got = trace_pairing(&FiniteRankOp::hilbert(u), &FiniteRankOp::hilbert(v)).unwrap();
    assert!((got - want).norm() < 1e-12);
}

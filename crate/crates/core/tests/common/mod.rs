#![allow(dead_code)]

use hcalc::gauss_gamma::GaussianSampler;
use hcalc::numlin::{c, inverse, CMatrix, CVector, C64};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    GaussianSampler::new(seed).stream(0)
}

pub fn cvector(rng: &mut ChaCha8Rng, n: usize) -> CVector {
    let mut v = vec![c(0.0, 0.0); n];
    GaussianSampler::fill(rng, &mut v);
    CVector::new(v)
}

pub fn cmatrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    let mut v = vec![c(0.0, 0.0); rows * cols];
    GaussianSampler::fill(rng, &mut v);
    CMatrix::from_vec(rows, cols, v).unwrap()
}

/// P D P^{-1} with eigenvalues in [-2, 2] + i[-0.3, 0.3]; also returns cond(P) inputs.
pub fn strip_matrix(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
    let vals: Vec<C64> = (0..d).map(|_| c(rng.random_range(-2.0..2.0), rng.random_range(-0.3..0.3))).collect();
    let p = &CMatrix::identity(d) + &cmatrix(rng, d, d).scale_real(0.25);
    p.matmul(&CMatrix::diag(&vals)).matmul(&inverse(&p).unwrap())
}

pub fn hermitian(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
    let b = cmatrix(rng, d, d);
    (&b + &b.adjoint()).scale_real(0.25)
}

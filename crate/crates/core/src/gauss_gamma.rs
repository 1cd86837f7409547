//! Gamma-norms of finite-rank operators H -> X, Gaussian-sum inequalities
//! and trace duality.
//!
//! Complex Gaussians are normalized to E|g|^2 = 1, g = (g_r + i g_i)/sqrt 2,
//! so the gamma-norm of a Hilbert-valued operator is its Hilbert-Schmidt
//! norm and rank-one operators have norm ||g|| ||x||.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::numlin::{c, lp_op_norm_upper, op_norm, svd, CMatrix, CVector, NormKind, NormSpec, C64};

/// Operator from a grid Hilbert space (or C^m with its standard basis) into
/// (C^n, norm), stored in sqrt-weight coordinates: column j is T e_j.
#[derive(Clone, Debug)]
pub struct FiniteRankOp {
    pub matrix: CMatrix,
    pub norm: NormSpec,
}

impl FiniteRankOp {
    pub fn new(matrix: CMatrix, norm: NormSpec) -> Result<Self> {
        norm.check_dim(matrix.rows())?;
        Ok(FiniteRankOp { matrix, norm })
    }

    pub fn hilbert(matrix: CMatrix) -> Self {
        FiniteRankOp { matrix, norm: NormSpec::hilbert() }
    }

    /// h -> <h, g> x, for g given in grid coordinates.
    pub fn rank_one(g: &CVector, x: &CVector, norm: NormSpec) -> Result<Self> {
        Self::new(CMatrix::from_fn(x.dim(), g.dim(), |i, j| x[i] * g[j].conj()), norm)
    }

    pub fn codomain_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn domain_dim(&self) -> usize {
        self.matrix.cols()
    }

    /// Restrict to the first k basis vectors of the domain.
    pub fn restrict(&self, k: usize) -> Self {
        FiniteRankOp { matrix: self.matrix.leading_columns(k), norm: self.norm.clone() }
    }

    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.matrix.digest().as_bytes());
        h.update(serde_json::to_string(&self.norm).unwrap_or_default().as_bytes());
        hex::encode(h.finalize())
    }
}

/// Reproducible source of unit-variance complex Gaussians: sample k uses
/// ChaCha8 keyed by the seed on stream k.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GaussianSampler {
    pub seed: u64,
}

impl GaussianSampler {
    pub fn new(seed: u64) -> Self {
        GaussianSampler { seed }
    }

    /// Independent sampler for a sub-task.
    pub fn derive(&self, tag: u64) -> Self {
        let mut h = Sha256::new();
        h.update(self.seed.to_le_bytes());
        h.update(tag.to_le_bytes());
        let d = h.finalize();
        let mut b = [0u8; 8];
        b.copy_from_slice(&d[..8]);
        GaussianSampler { seed: u64::from_le_bytes(b) }
    }

    pub fn stream(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    pub fn fill(rng: &mut ChaCha8Rng, out: &mut [C64]) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for z in out.iter_mut() {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            *z = c(re * s, im * s);
        }
    }

    pub fn vector(&self, index: u64, n: usize) -> Vec<C64> {
        let mut rng = self.stream(index);
        let mut v = vec![c(0.0, 0.0); n];
        Self::fill(&mut rng, &mut v);
        v
    }

    /// Mean and standard error of f(gaussian vector of length n) over the
    /// given number of samples; reduction in sample order.
    pub fn mean<F>(&self, samples: usize, n: usize, f: F) -> (f64, f64)
    where
        F: Fn(&[C64]) -> f64 + Sync,
    {
        let vals: Vec<f64> = (0..samples as u64)
            .into_par_iter()
            .map(|k| {
                let g = self.vector(k, n);
                f(&g)
            })
            .collect();
        mean_stderr(&vals)
    }
}

pub fn mean_stderr(vals: &[f64]) -> (f64, f64) {
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, (var / n).sqrt())
}

#[derive(Clone, Copy, Debug)]
pub enum GammaMethod {
    HilbertExact,
    LatticeExact,
    MonteCarlo { samples: usize, sampler: GaussianSampler },
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GammaNorm {
    pub value: f64,
    pub stderr: Option<f64>,
}

/// Sum of squared column norms in C^n, column-wise.
fn square_bracket(m: &CMatrix) -> Vec<C64> {
    (0..m.rows()).map(|i| c(m.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(), 0.0)).collect()
}

/// E || sum_j g_j T e_j ||^2 by Monte Carlo: (mean, stderr).
pub fn gaussian_second_moment(t: &FiniteRankOp, samples: usize, sampler: GaussianSampler) -> (f64, f64) {
    let m = &t.matrix;
    sampler.mean(samples, m.cols(), |g| {
        let mut y = vec![c(0.0, 0.0); m.rows()];
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = m.row(i).iter().zip(g).map(|(a, b)| a * b).sum();
        }
        let v = t.norm.norm(&y);
        v * v
    })
}

pub fn gamma_norm(t: &FiniteRankOp, method: GammaMethod) -> Result<GammaNorm> {
    match method {
        GammaMethod::HilbertExact => {
            if !t.norm.is_hilbert() {
                return Err(Error::Method("hilbert-exact needs a Hilbert codomain".into()));
            }
            Ok(GammaNorm { value: t.matrix.frobenius(), stderr: None })
        }
        GammaMethod::LatticeExact => {
            // every NormSpec is a (weighted) l^p lattice norm; Hilbert is l^2
            Ok(GammaNorm { value: t.norm.norm(&square_bracket(&t.matrix)), stderr: None })
        }
        GammaMethod::MonteCarlo { samples, sampler } => {
            if samples < 2 {
                return Err(Error::Param("Monte Carlo needs at least two samples".into()));
            }
            let (mu, se) = gaussian_second_moment(t, samples, sampler);
            let value = mu.sqrt();
            let stderr = if value > 0.0 { se / (2.0 * value) } else { 0.0 };
            Ok(GammaNorm { value, stderr: Some(stderr) })
        }
    }
}

/// Serializable record of a single check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub op: String,
    pub inputs_digest: String,
    pub value: f64,
    pub stderr: Option<f64>,
    pub bound: f64,
    pub pass: bool,
}

impl CheckReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

fn digest_of(parts: &[String]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0u8]);
    }
    hex::encode(h.finalize())
}

/// Contraction principle report; lhs and rhs are second moments.
#[derive(Clone, Debug, Serialize)]
pub struct ContractionReport {
    pub lhs: f64,
    pub rhs: f64,
    pub opnorm: f64,
    pub stderr: Option<f64>,
    pub exact: bool,
    pub pass: bool,
    pub record: CheckReport,
}

/// E||sum_k g_k sum_j a_kj x_j||^2 <= ||A||^2 E||sum_j g_j x_j||^2.
pub fn check_contraction_principle(
    a: &CMatrix,
    xs: &[CVector],
    norm: &NormSpec,
    sampler: GaussianSampler,
    samples: usize,
) -> Result<ContractionReport> {
    if xs.len() != a.cols() {
        return Err(Error::Dimension(format!("{} vectors for a matrix with {} columns", xs.len(), a.cols())));
    }
    let n = xs.first().map_or(0, |x| x.dim());
    if xs.iter().any(|x| x.dim() != n) || n == 0 {
        return Err(Error::Dimension("vectors of unequal length".into()));
    }
    norm.check_dim(n)?;
    let opnorm = svd(a)?.s[0];
    let xmat = CMatrix::from_columns(xs)?;
    // columns y_k = sum_j a_kj x_j, i.e. Y = X A^T
    let ymat = xmat.matmul(&a.transpose());
    let digest = digest_of(&[a.digest(), xmat.digest(), serde_json::to_string(norm)?]);
    if norm.is_hilbert() {
        let lhs = ymat.frobenius().powi(2);
        let rhs = opnorm * opnorm * xmat.frobenius().powi(2);
        let pass = lhs <= rhs * (1.0 + 1e-12) + 1e-300;
        return Ok(ContractionReport {
            lhs,
            rhs,
            opnorm,
            stderr: None,
            exact: true,
            pass,
            record: CheckReport { op: "contraction-principle".into(), inputs_digest: digest, value: lhs, stderr: None, bound: rhs, pass },
        });
    }
    let ty = FiniteRankOp::new(ymat, norm.clone())?;
    let tx = FiniteRankOp::new(xmat, norm.clone())?;
    let (l, sl) = gaussian_second_moment(&ty, samples, sampler.derive(1));
    let (r, sr) = gaussian_second_moment(&tx, samples, sampler.derive(2));
    let rhs = opnorm * opnorm * r;
    let se = (sl * sl + (opnorm * opnorm * sr).powi(2)).sqrt();
    let pass = l <= rhs + 3.0 * se;
    Ok(ContractionReport {
        lhs: l,
        rhs,
        opnorm,
        stderr: Some(se),
        exact: false,
        pass,
        record: CheckReport { op: "contraction-principle".into(), inputs_digest: digest, value: l, stderr: Some(se), bound: rhs, pass },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct IdealReport {
    pub lhs: f64,
    pub rhs: f64,
    pub left_norm: f64,
    pub right_norm: f64,
    /// True when ||L|| is exact or a rigorous over-estimate.
    pub left_norm_certified: bool,
    pub stderr: Option<f64>,
    pub pass: bool,
    pub record: CheckReport,
}

/// gamma(L T R) <= ||L||_{X->Y} gamma(T) ||R||; Y is the norm on the
/// codomain of L.
pub fn check_ideal_property(
    l: &CMatrix,
    t: &FiniteRankOp,
    r: &CMatrix,
    y_norm: &NormSpec,
    sampler: GaussianSampler,
    samples: usize,
) -> Result<IdealReport> {
    if l.cols() != t.matrix.rows() || t.matrix.cols() != r.rows() {
        return Err(Error::Dimension("L T R does not compose".into()));
    }
    let ltr = FiniteRankOp::new(l.matmul(&t.matrix).matmul(r), y_norm.clone())?;
    let right_norm = svd(r)?.s[0];
    let (left_norm, left_norm_certified) = match (&t.norm.kind, &y_norm.kind) {
        (NormKind::Lp { p }, NormKind::Lp { p: q }) if p == q => (lp_op_norm_upper(l, *p), true),
        _ => {
            let o = op_norm(l, &t.norm, y_norm)?;
            match o.upper_bound {
                Some(u) => (u, true),
                None => (o.value, o.certified),
            }
        }
    };
    let digest = digest_of(&[l.digest(), t.digest(), r.digest()]);
    if t.norm.is_hilbert() && y_norm.is_hilbert() {
        let lhs = ltr.matrix.frobenius();
        let rhs = left_norm * t.matrix.frobenius() * right_norm;
        let pass = lhs <= rhs * (1.0 + 1e-12);
        return Ok(IdealReport {
            lhs,
            rhs,
            left_norm,
            right_norm,
            left_norm_certified,
            stderr: None,
            pass,
            record: CheckReport { op: "ideal-property".into(), inputs_digest: digest, value: lhs, stderr: None, bound: rhs, pass },
        });
    }
    let mc = |s: u64| GammaMethod::MonteCarlo { samples, sampler: sampler.derive(s) };
    let a = gamma_norm(&ltr, mc(1))?;
    let b = gamma_norm(t, mc(2))?;
    let k = left_norm * right_norm;
    let rhs = k * b.value;
    let se = (a.stderr.unwrap_or(0.0).powi(2) + (k * b.stderr.unwrap_or(0.0)).powi(2)).sqrt();
    let pass = a.value <= rhs + 3.0 * se;
    Ok(IdealReport {
        lhs: a.value,
        rhs,
        left_norm,
        right_norm,
        left_norm_certified,
        stderr: Some(se),
        pass,
        record: CheckReport { op: "ideal-property".into(), inputs_digest: digest, value: a.value, stderr: Some(se), bound: rhs, pass },
    })
}

/// tr(V'U) = sum_alpha <U e_alpha, V e_alpha> with the bilinear pairing of
/// C^n and its dual. U maps into X, V into X'.
pub fn trace_pairing(u: &FiniteRankOp, v: &FiniteRankOp) -> Result<C64> {
    if u.matrix.rows() != v.matrix.rows() || u.matrix.cols() != v.matrix.cols() {
        return Err(Error::Grid("trace pairing needs operators over the same grid and space".into()));
    }
    Ok(u.matrix.as_slice().iter().zip(v.matrix.as_slice()).map(|(a, b)| a * b).sum())
}

#[derive(Clone, Debug, Serialize)]
pub struct NuclearReport {
    pub bound: f64,
    pub gamma: GammaNorm,
    pub pass: bool,
    pub record: CheckReport,
}

/// Nuclear estimate gamma(sum_j g_j (x) x_j) <= sum_j ||g_j|| ||x_j||_X.
pub fn nuclear_bound(terms: &[(CVector, CVector)], norm: &NormSpec, method: GammaMethod) -> Result<NuclearReport> {
    let (g0, x0) = terms.first().ok_or_else(|| Error::Param("empty nuclear representation".into()))?;
    let (m, n) = (g0.dim(), x0.dim());
    if terms.iter().any(|(g, x)| g.dim() != m || x.dim() != n) {
        return Err(Error::Dimension("nuclear terms of unequal size".into()));
    }
    let mut mat = CMatrix::zeros(n, m);
    let mut bound = 0.0;
    for (g, x) in terms {
        mat = &mat + &CMatrix::from_fn(n, m, |i, j| x[i] * g[j].conj());
        bound += g.norm2() * norm.norm_vec(x);
    }
    let t = FiniteRankOp::new(mat, norm.clone())?;
    let gamma = gamma_norm(&t, method)?;
    let pass = gamma.value <= bound * (1.0 + 1e-12) + 3.0 * gamma.stderr.unwrap_or(0.0);
    let record = CheckReport {
        op: "nuclear-bound".into(),
        inputs_digest: t.digest(),
        value: gamma.value,
        stderr: gamma.stderr,
        bound,
        pass,
    };
    Ok(NuclearReport { bound, gamma, pass, record })
}

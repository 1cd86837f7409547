//! Named experiments, one per acceptance criterion, with JSON reports.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::{
    frame_bounds, gabor_frame_build, hs_maximizer, l1_frame_bound, sampled_l1_sup, shift_range_bound, w12_dictionary,
    w12_ratio_constant, write_coefficients, FrameSpec, GaborParams, L1Target, ShiftRangeGrid,
};
use crate::gauss_gamma::{check_contraction_principle, check_ideal_property, gamma_norm, FiniteRankOp, GammaMethod, GaussianSampler};
use crate::grids::PvRule;
use crate::numlin::{c, contraction_to_isometries, sech, svd, CMatrix, CVector, NormSpec, C64};
use crate::representations::{
    exponent_improvement_check, fourier_pair_check, fourier_pair_grid, gauss_cauchy_operator_check, laplace_multiplier,
    poisson_factorization_residual, reconstruct, singular_cauchy, singular_cauchy_norm, singular_grid, strip_sup, LaplaceParams,
    ReprMethod,
};
use crate::sqfun::{
    equivalence_check, line_grid, mcintosh_reconstruct, normalized_orbit_pair, pairing_identity_check, sqfun_hs, sqfun_matrix,
    Equivalence, KernelFn, Side, SqfOptions,
};
use crate::strip_calc::{
    calculus_apply, calculus_law_check, diagonal_oracle, CalcMethod, CalcOptions, HolFn, LawKind, StripOperator,
};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: usize = 20000;

/// Suite name and the result it exercises.
pub struct SuiteInfo {
    pub name: &'static str,
    pub anchor: &'static str,
}

pub const SUITES: &[SuiteInfo] = &[
    SuiteInfo { name: "cross-norm", anchor: "gamma-norm of rank-one and finite-rank operators: cross-norm and Hilbert-Schmidt identities" },
    SuiteInfo { name: "contraction", anchor: "contraction principle for Gaussian sums" },
    SuiteInfo { name: "isometry-decomposition", anchor: "contractions as convex combinations of at most d+1 unitaries" },
    SuiteInfo { name: "lattice", anchor: "square-bracket formula for gamma-norms in l^p lattices" },
    SuiteInfo { name: "calculus-laws", anchor: "holomorphic calculus on strips: resolvent consistency, multiplicativity, contour independence" },
    SuiteInfo { name: "cauchy-gauss", anchor: "Cauchy integral with Gaussian damping, scalar and operator level" },
    SuiteInfo { name: "poisson", anchor: "Poisson representation on a strip and its factorization" },
    SuiteInfo { name: "fourier-pair", anchor: "Fourier transform of sech as the Poisson kernel profile" },
    SuiteInfo { name: "laplace", anchor: "Laplace-type representation on sectors and the multiplier bound" },
    SuiteInfo { name: "singular-cauchy", anchor: "principal-value Cauchy operator on the strip boundary" },
    SuiteInfo { name: "exponent-improvement", anchor: "isometric Mellin decomposition and the Beta-function convolution" },
    SuiteInfo { name: "sqfun-closed-forms", anchor: "shift, group-orbit and boundary-resolvent square functions on Hilbert space" },
    SuiteInfo { name: "equivalences", anchor: "Fourier equivalence, subordination, pairing identity, McIntosh reproducing formula" },
    SuiteInfo { name: "frames", anchor: "l1-frame bounds, Hilbert-Schmidt certificate, Gabor frame and W^2_1 control" },
    SuiteInfo { name: "l1-sqfe", anchor: "l1-frame-bounded range implies the square function estimate" },
];

/// Run configuration. Every field is optional in a JSON config file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub suite: String,
    pub seed: u64,
    pub samples: usize,
    /// replaces the tolerance of closeness and residual cases
    pub tol: Option<f64>,
    /// strip half-height for the Fourier pair suite
    pub omega: Option<f64>,
    /// Gabor translation half-range and modulation range
    pub gabor_k: Option<i64>,
    pub gabor_n: Option<i64>,
    pub out: Option<PathBuf>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suite: "all".into(),
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
            tol: None,
            omega: None,
            gabor_k: None,
            gabor_n: None,
            out: None,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.suite != "all" && !SUITES.iter().any(|s| s.name == self.suite) {
            return Err(Error::UnknownSuite(self.suite.clone()));
        }
        if self.samples < 2 {
            return Err(Error::Param("samples must be at least 2".into()));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Param("tol must be positive".into()));
            }
        }
        if let Some(w) = self.omega {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::Param("omega must be positive".into()));
            }
        }
        if self.gabor_k.is_some_and(|k| k < 5) || self.gabor_n.is_some_and(|n| n < 1) {
            return Err(Error::Param("gabor ranges too small".into()));
        }
        Ok(())
    }

    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    fn sampler(&self, tag: u64) -> GaussianSampler {
        GaussianSampler::new(self.seed).derive(tag)
    }

    fn rng(&self, tag: u64) -> ChaCha8Rng {
        self.sampler(tag).stream(0)
    }
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// |value - expected| <= tol
    Close,
    /// value <= expected + tol
    AtMost,
    /// value >= expected - tol
    AtLeast,
}

#[derive(Clone, Debug, Serialize)]
pub struct Case {
    pub name: String,
    pub value: f64,
    pub expected: f64,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    pub check: Check,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Case {
    fn new(name: &str, value: f64, expected: f64, tol: f64, check: Check) -> Case {
        let pass = match check {
            Check::Close => (value - expected).abs() <= tol,
            Check::AtMost => value <= expected + tol,
            Check::AtLeast => value >= expected - tol,
        };
        Case { name: name.into(), value, expected, tol, stderr: None, check, pass, note: None }
    }

    pub fn close(name: &str, value: f64, expected: f64, tol: f64) -> Case {
        Case::new(name, value, expected, tol, Check::Close)
    }

    pub fn at_most(name: &str, value: f64, bound: f64, tol: f64) -> Case {
        Case::new(name, value, bound, tol, Check::AtMost)
    }

    pub fn at_least(name: &str, value: f64, bound: f64, tol: f64) -> Case {
        Case::new(name, value, bound, tol, Check::AtLeast)
    }

    fn stderr(mut self, se: f64) -> Case {
        self.stderr = Some(se);
        self
    }

    fn note(mut self, n: impl Into<String>) -> Case {
        self.note = Some(n.into());
        self
    }

    fn failed(name: &str, err: &Error) -> Case {
        Case {
            name: name.into(),
            value: f64::NAN,
            expected: f64::NAN,
            tol: 0.0,
            stderr: None,
            check: Check::Close,
            pass: false,
            note: Some(err.to_string()),
        }
    }

    fn prefixed(mut self, prefix: &str) -> Case {
        self.name = format!("{prefix}/{}", self.name);
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub samples: usize,
    pub timestamp: u64,
    pub pass: bool,
    pub cases: Vec<Case>,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| !c.pass)
    }
}

/// One group of cases; an error becomes a single failing case.
fn group(name: &str, f: impl FnOnce() -> Result<Vec<Case>>) -> Vec<Case> {
    match f() {
        Ok(v) => v,
        Err(e) => vec![Case::failed(name, &e)],
    }
}

fn max_of(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(f64::NEG_INFINITY, |a, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
}

fn random_cvector(rng: &mut ChaCha8Rng, n: usize) -> CVector {
    let mut v = vec![c(0.0, 0.0); n];
    GaussianSampler::fill(rng, &mut v);
    CVector::new(v)
}

fn random_cmatrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    let mut v = vec![c(0.0, 0.0); rows * cols];
    GaussianSampler::fill(rng, &mut v);
    CMatrix::from_vec(rows, cols, v).expect("sizes agree")
}

fn random_contraction(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
    let a = random_cmatrix(rng, d, d);
    let s = svd(&a).expect("svd").s[0];
    a.scale_real(rng.random_range(0.2..=1.0) / s)
}

fn random_unitary(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
    svd(&random_cmatrix(rng, d, d)).map(|s| s.u.matmul(&s.v.adjoint())).expect("svd")
}

fn random_hermitian(rng: &mut ChaCha8Rng, d: usize, scale: f64) -> CMatrix {
    let b = random_cmatrix(rng, d, d);
    (&b + &b.adjoint()).scale_real(0.25 * scale)
}

/// P D P^{-1} with eigenvalues in [-2, 2] + i[-0.3, 0.3].
fn random_strip_matrix(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
    let dvals: Vec<C64> = (0..d).map(|_| c(rng.random_range(-2.0..2.0), rng.random_range(-0.3..0.3))).collect();
    let p = &CMatrix::identity(d) + &random_cmatrix(rng, d, d).scale_real(0.25);
    let pi = crate::numlin::inverse(&p).expect("perturbed identity is invertible");
    p.matmul(&CMatrix::diag(&dvals)).matmul(&pi)
}

fn write_report_file(dir: &Path, report: &SuiteReport) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(format!("{}.json", report.suite)), report.to_json())?;
    Ok(())
}

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

/// Runs a suite (or all of them) and writes reports under `out` if set.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    if let Some(dir) = &cfg.out {
        std::fs::create_dir_all(dir)?;
    }
    let mut cases = if cfg.suite == "all" {
        let parts: Vec<Vec<Case>> = SUITES.par_iter().map(|s| run_named(s.name, cfg).into_iter().map(|c| c.prefixed(s.name)).collect()).collect();
        parts.into_iter().flatten().collect()
    } else {
        run_named(&cfg.suite, cfg)
    };
    cases.sort_by(|a, b| a.name.cmp(&b.name));
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let report = SuiteReport {
        suite: cfg.suite.clone(),
        seed: cfg.seed,
        samples: cfg.samples,
        timestamp,
        pass: cases.iter().all(|c| c.pass),
        cases,
    };
    if let Some(dir) = &cfg.out {
        write_report_file(dir, &report)?;
    }
    Ok(report)
}

fn run_named(name: &str, cfg: &SuiteConfig) -> Vec<Case> {
    match name {
        "cross-norm" => cross_norm(cfg),
        "contraction" => contraction(cfg),
        "isometry-decomposition" => isometry_decomposition(cfg),
        "lattice" => lattice(cfg),
        "calculus-laws" => calculus_laws(cfg),
        "cauchy-gauss" => cauchy_gauss(cfg),
        "poisson" => poisson(cfg),
        "fourier-pair" => fourier_pair(cfg),
        "laplace" => laplace(cfg),
        "singular-cauchy" => singular_cauchy_suite(cfg),
        "exponent-improvement" => exponent_improvement(cfg),
        "sqfun-closed-forms" => sqfun_closed_forms(cfg),
        "equivalences" => equivalences(cfg),
        "frames" => frames(cfg),
        "l1-sqfe" => l1_sqfe(cfg),
        other => vec![Case::failed(other, &Error::UnknownSuite(other.into()))],
    }
}

fn mc(samples: usize, sampler: GaussianSampler) -> GammaMethod {
    GammaMethod::MonteCarlo { samples, sampler }
}

fn cross_norm(cfg: &SuiteConfig) -> Vec<Case> {
    let mut out = Vec::new();
    out.extend(group("instances", || {
        let mut rng = cfg.rng(1);
        // 50 rank-one g (x) x, then 50 random finite-rank matrices
        let inst: Vec<(CMatrix, f64)> = (0..100)
            .map(|k| {
                let m = rng.random_range(1..=6);
                let n = rng.random_range(1..=5);
                if k < 50 {
                    let g = random_cvector(&mut rng, m);
                    let x = random_cvector(&mut rng, n);
                    let t = CMatrix::from_fn(n, m, |i, j| x[i] * g[j].conj());
                    (t, g.norm2() * x.norm2())
                } else {
                    let r = rng.random_range(1..=m.min(n));
                    let t = random_cmatrix(&mut rng, n, r).matmul(&random_cmatrix(&mut rng, r, m));
                    let hs = svd(&t).expect("svd").s.iter().map(|s| s * s).sum::<f64>().sqrt();
                    (t, hs)
                }
            })
            .collect();
        let rows: Vec<Result<(f64, f64, f64)>> = inst
            .par_iter()
            .enumerate()
            .map(|(k, (t, closed))| {
                let op = FiniteRankOp::hilbert(t.clone());
                let exact = gamma_norm(&op, GammaMethod::HilbertExact)?.value;
                let est = gamma_norm(&op, mc(cfg.samples, cfg.sampler(100 + k as u64)))?;
                let se = est.stderr.unwrap_or(0.0);
                Ok(((exact - closed).abs() / closed.max(1e-300), (est.value - exact).abs() / se.max(1e-300), se))
            })
            .collect();
        let rows: Vec<(f64, f64, f64)> = rows.into_iter().collect::<Result<_>>()?;
        let (rank_one, finite) = rows.split_at(50);
        Ok(vec![
            Case::at_most("rank-one hilbert-exact vs cross-norm (max rel. error)", max_of(rank_one.iter().map(|r| r.0)), 0.0, cfg.tol(1e-12)),
            Case::at_most("finite-rank hilbert-exact vs singular values (max rel. error)", max_of(finite.iter().map(|r| r.0)), 0.0, cfg.tol(1e-12)),
            Case::at_most("monte-carlo vs exact (max |z| over 100 instances)", max_of(rows.iter().map(|r| r.1)), 3.0, 0.0)
                .stderr(max_of(rows.iter().map(|r| r.2))),
        ])
    }));
    out.extend(group("lattice rank-one", || {
        let mut rng = cfg.rng(2);
        let g = random_cvector(&mut rng, 4);
        let x = random_cvector(&mut rng, 3);
        let norm = NormSpec::lp(3.0)?;
        let op = FiniteRankOp::rank_one(&g, &x, norm.clone())?;
        let v = gamma_norm(&op, GammaMethod::LatticeExact)?.value;
        Ok(vec![Case::close("rank-one lattice-exact in l3 vs cross-norm", v, g.norm2() * norm.norm_vec(&x), cfg.tol(1e-12))])
    }));
    out.extend(group("normalization", || {
        let s = cfg.sampler(3);
        let (m, se) = s.mean(cfg.samples, 1, |g| g[0].norm_sqr());
        Ok(vec![Case::close("complex gaussian second moment", m, 1.0, 3.0 * se).stderr(se)])
    }));
    out.extend(group("identity", || {
        let v = gamma_norm(&FiniteRankOp::hilbert(CMatrix::identity(2)), GammaMethod::HilbertExact)?.value;
        Ok(vec![Case::close("identity 2x2 hilbert-exact", v, 2f64.sqrt(), cfg.tol(1e-12))])
    }));
    out
}

fn contraction(cfg: &SuiteConfig) -> Vec<Case> {
    let mut out = Vec::new();
    out.extend(group("hilbert", || {
        let mut rng = cfg.rng(10);
        let inst: Vec<(CMatrix, Vec<CVector>, bool)> = (0..1000)
            .map(|k| {
                let d = rng.random_range(1..=6);
                let m = rng.random_range(1..=6);
                let n = rng.random_range(1..=6);
                let unitary = k % 10 == 0;
                let a = if unitary { random_unitary(&mut rng, m) } else { random_cmatrix(&mut rng, d, m) };
                let xs = (0..m).map(|_| random_cvector(&mut rng, n)).collect();
                (a, xs, unitary)
            })
            .collect();
        let reps: Vec<Result<(f64, bool)>> = inst
            .par_iter()
            .map(|(a, xs, u)| {
                let r = check_contraction_principle(a, xs, &NormSpec::hilbert(), cfg.sampler(11), 2)?;
                Ok(((r.lhs - r.rhs) / r.rhs.max(1e-300), *u))
            })
            .collect();
        let reps: Vec<(f64, bool)> = reps.into_iter().collect::<Result<_>>()?;
        Ok(vec![
            Case::at_most("hilbert lhs - rhs (max relative, 1000 instances)", max_of(reps.iter().map(|r| r.0)), 0.0, cfg.tol(1e-12)),
            Case::at_most("unitary equality (max relative defect)", max_of(reps.iter().filter(|r| r.1).map(|r| r.0.abs())), 0.0, cfg.tol(1e-12)),
        ])
    }));
    out.extend(group("zero", || {
        let xs = vec![CVector::from_real(&[1.0, 2.0]); 3];
        let r = check_contraction_principle(&CMatrix::zeros(2, 3), &xs, &NormSpec::hilbert(), cfg.sampler(12), 2)?;
        Ok(vec![Case::close("zero matrix lhs", r.lhs, 0.0, 0.0)])
    }));
    out.extend(group("l4", || {
        let mut rng = cfg.rng(13);
        let inst: Vec<(CMatrix, Vec<CVector>)> = (0..50)
            .map(|_| {
                let d = rng.random_range(2..=3);
                let a = random_contraction(&mut rng, d);
                (a, (0..d).map(|_| random_cvector(&mut rng, 3)).collect())
            })
            .collect();
        let norm = NormSpec::lp(4.0)?;
        let reps: Vec<Result<(f64, f64)>> = inst
            .par_iter()
            .enumerate()
            .map(|(k, (a, xs))| {
                let r = check_contraction_principle(a, xs, &norm, cfg.sampler(1000 + k as u64), cfg.samples)?;
                let se = r.stderr.unwrap_or(0.0);
                Ok(((r.lhs - r.rhs) / se.max(1e-300), se))
            })
            .collect();
        let reps: Vec<(f64, f64)> = reps.into_iter().collect::<Result<_>>()?;
        Ok(vec![Case::at_most("l4 monte-carlo (max (lhs - rhs)/stderr, 50 instances)", max_of(reps.iter().map(|r| r.0)), 3.0, 0.0)
            .stderr(max_of(reps.iter().map(|r| r.1)))])
    }));
    out.extend(group("ideal", || {
        let mut rng = cfg.rng(14);
        let mut worst: f64 = 0.0;
        for _ in 0..200 {
            let l = random_cmatrix(&mut rng, 3, 4);
            let t = FiniteRankOp::hilbert(random_cmatrix(&mut rng, 4, 5));
            let r = random_cmatrix(&mut rng, 5, 2);
            let rep = check_ideal_property(&l, &t, &r, &NormSpec::hilbert(), cfg.sampler(15), 2)?;
            worst = worst.max((rep.lhs - rep.rhs) / rep.rhs);
        }
        Ok(vec![Case::at_most("ideal property hilbert (max relative excess)", worst, 0.0, cfg.tol(1e-12))])
    }));
    out
}

fn isometry_decomposition(cfg: &SuiteConfig) -> Vec<Case> {
    let mut out = group("random", || {
        let mut rng = cfg.rng(20);
        let mats: Vec<CMatrix> = (0..1000)
            .map(|_| {
                let d = rng.random_range(1..=6);
                random_contraction(&mut rng, d)
            })
            .collect();
        let rows: Vec<Result<[f64; 5]>> = mats
            .par_iter()
            .map(|a| {
                let dec = contraction_to_isometries(a)?;
                Ok([
                    dec.reconstruct().max_abs_diff(a),
                    dec.unitarity_defect(),
                    (dec.weight_sum() - 1.0).abs(),
                    dec.terms.len() as f64 - (a.rows() + 1) as f64,
                    -dec.terms.iter().map(|t| t.weight).fold(f64::INFINITY, f64::min),
                ])
            })
            .collect();
        let rows: Vec<[f64; 5]> = rows.into_iter().collect::<Result<_>>()?;
        let col = |i: usize| max_of(rows.iter().map(|r| r[i]));
        Ok(vec![
            Case::at_most("reconstruction residual (max, 1000 contractions)", col(0), 0.0, cfg.tol(1e-10)),
            Case::at_most("unitarity defect (max)", col(1), 0.0, cfg.tol(1e-10)),
            Case::at_most("weight sum - 1 (max abs)", col(2), 0.0, cfg.tol(1e-12)),
            Case::at_most("term count - (d+1) (max)", col(3), 0.0, 0.0),
            Case::at_most("negative weight (max)", col(4), 0.0, 1e-14),
        ])
    });
    out.extend(group("diag", || {
        let dec = contraction_to_isometries(&CMatrix::diag_real(&[1.0, 0.5]))?;
        let mut ws: Vec<f64> = dec.terms.iter().map(|t| t.weight).collect();
        ws.sort_by(|a, b| b.total_cmp(a));
        Ok(vec![
            Case::close("diag(1, 0.5) term count", dec.terms.len() as f64, 2.0, 0.0),
            Case::close("diag(1, 0.5) identity weight", ws[0], 0.75, cfg.tol(1e-12)),
            Case::close("diag(1, 0.5) reflection weight", ws.get(1).copied().unwrap_or(0.0), 0.25, cfg.tol(1e-12)),
        ])
    }));
    out
}

fn lattice(cfg: &SuiteConfig) -> Vec<Case> {
    group("instances", || {
        let mut rng = cfg.rng(30);
        let mats: Vec<CMatrix> = (0..200)
            .map(|_| {
                let (n, m) = (rng.random_range(1..=4), rng.random_range(1..=5));
                random_cmatrix(&mut rng, n, m)
            })
            .collect();
        let rows: Vec<Result<[f64; 3]>> = mats
            .par_iter()
            .enumerate()
            .map(|(k, t)| {
                let h = gamma_norm(&FiniteRankOp::hilbert(t.clone()), GammaMethod::HilbertExact)?.value;
                let l2 = gamma_norm(&FiniteRankOp::new(t.clone(), NormSpec::lp(2.0)?)?, GammaMethod::LatticeExact)?.value;
                let mut r = [(l2 - h).abs() / h, 0.0, 0.0];
                for (i, p) in [1.0, 4.0].into_iter().enumerate() {
                    let op = FiniteRankOp::new(t.clone(), NormSpec::lp(p)?)?;
                    let lat = gamma_norm(&op, GammaMethod::LatticeExact)?.value;
                    let est = gamma_norm(&op, mc(cfg.samples, cfg.sampler(2000 + 2 * k as u64 + i as u64)))?.value;
                    r[i + 1] = (est / lat).ln().abs();
                }
                Ok(r)
            })
            .collect();
        let rows: Vec<[f64; 3]> = rows.into_iter().collect::<Result<_>>()?;
        let col = |i: usize| max_of(rows.iter().map(|r| r[i]));
        Ok(vec![
            Case::at_most("p = 2 lattice-exact vs hilbert-exact (max rel.)", col(0), 0.0, cfg.tol(1e-12)),
            Case::at_most("p = 1 |log(mc / lattice)| (max, 200 instances)", col(1), 3f64.ln(), 0.0),
            Case::at_most("p = 4 |log(mc / lattice)| (max, 200 instances)", col(2), 3f64.ln(), 0.0),
        ])
    })
}

fn sech_fn() -> HolFn {
    HolFn::strip("sech(z)", PI / 2.0, sech).bounded()
}

fn lorentz() -> HolFn {
    HolFn::strip("1/(4+z^2)", 2.0, |z| 1.0 / (4.0 + z * z)).bounded()
}

fn calculus_laws(cfg: &SuiteConfig) -> Vec<Case> {
    let mut rng = cfg.rng(40);
    let ops: Vec<CMatrix> = (0..4).map(|_| random_strip_matrix(&mut rng, 4)).collect();
    let f = sech_fn();
    let g = HolFn::strip("1/(2i-z)", 2.0, |z| 1.0 / (c(0.0, 2.0) - z)).bounded();
    let mut out = Vec::new();
    for (name, method) in [("regularized", CalcMethod::regularized()), ("gauss-cauchy", CalcMethod::GaussCauchy)] {
        out.extend(group(name, || {
            let mut mult: f64 = 0.0;
            let mut res: f64 = 0.0;
            for a in &ops {
                let op = StripOperator::new(a.clone())?;
                let o = CalcOptions::default();
                mult = mult.max(calculus_law_check(&op, &f, &g, LawKind::Multiplicative, c(0.0, 0.0), method, &o)?.residual);
                res = res.max(calculus_law_check(&op, &f, &f, LawKind::ResolventConsistency, c(0.4, 3.0), method, &o)?.residual);
            }
            Ok(vec![
                Case::at_most(&format!("{name} multiplicativity residual (max over 4x4 operators)"), mult, 0.0, cfg.tol(1e-8)),
                Case::at_most(&format!("{name} resolvent consistency residual"), res, 0.0, cfg.tol(1e-8)),
            ])
        }));
    }
    out.extend(group("contour independence", || {
        let mut worst: f64 = 0.0;
        for a in &ops {
            let op = StripOperator::new(a.clone())?;
            let w = op.omega0();
            let lo = calculus_apply(&f, &op, CalcMethod::regularized(), &CalcOptions::height(w + 0.25))?;
            let hi = calculus_apply(&f, &op, CalcMethod::regularized(), &CalcOptions::height(w + 0.6))?;
            worst = worst.max(lo.max_abs_diff(&hi) / hi.max_abs().max(1.0));
        }
        Ok(vec![Case::at_most("contour height independence (max rel.)", worst, 0.0, cfg.tol(1e-9))])
    }));
    out.extend(group("method agreement", || {
        let mut worst: f64 = 0.0;
        let mut oracle: f64 = 0.0;
        for a in &ops {
            let op = StripOperator::new(a.clone())?;
            let r = calculus_apply(&f, &op, CalcMethod::regularized(), &CalcOptions::default())?;
            let gc = calculus_apply(&f, &op, CalcMethod::GaussCauchy, &CalcOptions::default())?;
            worst = worst.max(r.max_abs_diff(&gc) / gc.max_abs().max(1.0));
            let (d, cond) = diagonal_oracle(a, sech)?;
            oracle = oracle.max(r.max_abs_diff(&d) / (cond * d.max_abs().max(1.0)));
        }
        Ok(vec![
            Case::at_most("regularized vs gauss-cauchy (max rel.)", worst, 0.0, cfg.tol(1e-7)),
            Case::at_most("regularized vs eigen-decomposition / cond (max)", oracle, 0.0, cfg.tol(1e-9)),
        ])
    }));
    out
}

/// Ten points in St_1 away from its boundary.
fn strip_points() -> Vec<C64> {
    (0..10).map(|k| c(-2.0 + 0.45 * k as f64, 0.7 * ((k as f64) * 1.3).sin())).collect()
}

fn cauchy_gauss(cfg: &SuiteConfig) -> Vec<Case> {
    let mut out = Vec::new();
    out.extend(group("scalar", || {
        let pts = strip_points();
        let one = reconstruct(&ReprMethod::gauss_cauchy(1.0), &HolFn::constant(c(1.0, 0.0)), &pts)?;
        let lor = reconstruct(&ReprMethod::gauss_cauchy(1.0), &lorentz(), &pts)?;
        Ok(vec![
            Case::at_most("u = 1 reconstruction (max error, 10 points)", one.max_error, 0.0, cfg.tol(1e-8)),
            Case::at_most("u = 1/(4+z^2) reconstruction (max error, 10 points)", lor.max_error, 0.0, cfg.tol(1e-8)),
        ])
    }));
    out.extend(group("operator", || {
        let mut rng = cfg.rng(50);
        let mut worst: f64 = 0.0;
        for _ in 0..3 {
            let op = StripOperator::new(random_strip_matrix(&mut rng, 3))?;
            let x = random_cvector(&mut rng, 3);
            worst = worst.max(gauss_cauchy_operator_check(&lorentz(), &op, &x, &CalcOptions::default())?);
        }
        Ok(vec![Case::at_most("operator factorization identity (max rel.)", worst, 0.0, cfg.tol(1e-9))])
    }));
    out
}

fn poisson(cfg: &SuiteConfig) -> Vec<Case> {
    let mut out = group("reconstruction", || {
        let pts: Vec<C64> = (0..10).map(|k| c(-1.5 + 0.35 * k as f64, 0.3 * ((k as f64) * 0.9).cos())).collect();
        let r = reconstruct(&ReprMethod::poisson(1.0), &lorentz(), &pts)?;
        Ok(vec![Case::at_most("u = 1/(4+z^2) poisson reconstruction (max error)", r.max_error, 0.0, cfg.tol(1e-6))])
    });
    out.extend(group("factors", || {
        let g = line_grid(20.0, 0.1)?;
        let r = poisson_factorization_residual(1.0, 1.5, &g)?;
        Ok(vec![Case::at_most("kernel factorization residual", r, 0.0, cfg.tol(1e-10))])
    }));
    out.extend(fourier_pair_cases(cfg, &[0.5, 1.0, 2.0]));
    out
}

fn fourier_pair_cases(cfg: &SuiteConfig, omegas: &[f64]) -> Vec<Case> {
    omegas
        .iter()
        .flat_map(|&w| {
            group(&format!("fourier pair omega={w}"), || {
                let t: Vec<f64> = (0..81).map(|k| (-8.0 + 0.2 * k as f64) / w).collect();
                let r = fourier_pair_check(w, &fourier_pair_grid(w)?, &t)?;
                Ok(vec![
                    Case::at_most(&format!("fourier pair omega={w} (max error)"), r.max_error, 0.0, cfg.tol(1e-6)),
                    Case::close(&format!("fourier pair omega={w} half-prefactor ratio"), r.half_prefactor_ratio, 0.5, cfg.tol(1e-6)),
                    Case::close(&format!("fourier pair omega={w} truncation edge ok"), r.edge_ok as u8 as f64, 1.0, 0.0),
                ])
            })
        })
        .collect()
}

fn fourier_pair(cfg: &SuiteConfig) -> Vec<Case> {
    match cfg.omega {
        Some(w) => fourier_pair_cases(cfg, &[w]),
        None => fourier_pair_cases(cfg, &[0.5, 1.0, 2.0]),
    }
}

fn laplace(cfg: &SuiteConfig) -> Vec<Case> {
    let mut out = group("constant", || {
        let one = HolFn::sector("1", PI, |_| c(1.0, 0.0));
        let p = LaplaceParams::new(1.0, 1.0);
        let taus = [0.01, 0.1, 1.0, 5.0, 30.0];
        let m = laplace_multiplier(&p, &one, &taus)?;
        let err = max_of(m.iter().map(|v| (v - 4.0).norm()));
        let r = reconstruct(&ReprMethod::Laplace(p), &one, &[c(0.5, 0.0), c(1.0, 0.0)])?;
        let mp = r.multiplier.clone().ok_or_else(|| Error::Method("no multiplier profile".into()))?;
        if let Some(dir) = &cfg.out {
            mp.write_csv(&dir.join("laplace-multiplier.csv"))?;
        }
        Ok(vec![
            Case::at_most("u = 1 multiplier |m - 4| (max over tau)", err, 0.0, cfg.tol(1e-4)),
            Case::at_most("u = 1 reconstruction (max error)", r.max_error, 0.0, cfg.tol(1e-3)),
            Case::at_most("sup |m| against contour bound", mp.sup, mp.bound, 1e-6 * mp.bound),
        ])
    });
    out.extend(group("resolvent", || {
        let u = HolFn::sector("1/(1+z)", PI, |z| 1.0 / (1.0 + z));
        let pts = [c(0.5, 0.0), c(1.0, 0.0), C64::from_polar(2.0, PI / 6.0)];
        let r = reconstruct(&ReprMethod::Laplace(LaplaceParams::new(1.0, 1.0)), &u, &pts)?;
        let mp = r.multiplier.clone().ok_or_else(|| Error::Method("no multiplier profile".into()))?;
        Ok(vec![
            Case::at_most("u = 1/(1+z) reconstruction (max error)", r.max_error, 0.0, cfg.tol(1e-3)),
            Case::at_most("u = 1/(1+z) sup |m| against contour bound", mp.sup, mp.bound, 1e-6 * mp.bound),
        ])
    }));
    out
}

fn singular_cauchy_suite(cfg: &SuiteConfig) -> Vec<Case> {
    let pts = [c(0.2, 0.1), c(0.0, 0.0), c(-0.5, 0.3), c(1.0, -0.4), c(0.0, 0.3)];
    let one = HolFn::constant(c(1.0, 0.0));
    let gauss = HolFn::strip("exp(-z^2)", f64::INFINITY, |z| (-z * z).exp());
    let mut out = Vec::new();
    for (label, f) in [("f = 1", &one), ("f = exp(-z^2)", &gauss)] {
        out.extend(group(label, || {
            let grid = singular_grid(1.0, 60.0, 0.05)?;
            let r = singular_cauchy(f, &grid, &pts, 5.0, PvRule::Corrected)?;
            let coarse = singular_grid(1.0, 15.0, 0.1)?;
            let fine = singular_grid(1.0, 15.0, 0.05)?;
            let sup = strip_sup(f, 1.0, 15.0);
            let c1 = singular_cauchy_norm(f, &coarse, PvRule::Corrected)? / sup;
            let c2 = singular_cauchy_norm(f, &fine, PvRule::Corrected)? / sup;
            Ok(vec![
                Case::at_most(&format!("{label} identity residual (5 points)"), r.residual, 0.0, cfg.tol(1e-3)),
                Case::close(&format!("{label} norm constant under grid doubling"), c2, c1, 0.2 * c1).note(format!("C = {c1:.6} -> {c2:.6}")),
            ])
        }));
    }
    out
}

fn exponent_improvement(cfg: &SuiteConfig) -> Vec<Case> {
    let mut out = group("half-half", || {
        let r = exponent_improvement_check(0.5, 0.5, &[0.1, 1.0, 3.0], &[c(1.0, 0.0), c(0.5, 0.5)])?;
        Ok(vec![
            Case::at_most("isometry defect", r.isometry_defect, 0.0, cfg.tol(1e-6)),
            Case::at_most("alpha = beta = 1/2 convolution vs f_1", r.convolution_error, 0.0, cfg.tol(1e-6)),
            Case::close("alpha = beta = 1/2 constant", r.constant, 1.0, cfg.tol(1e-12)),
        ])
    });
    out.extend(group("one-half", || {
        let r = exponent_improvement_check(1.0, 0.5, &[0.5, 2.0], &[c(1.0, 0.5)])?;
        Ok(vec![
            Case::close("alpha = 1, beta = 1/2 fitted constant", r.fitted_constant, 2.0 / 3.0, cfg.tol(1e-6)),
            Case::at_most("alpha = 1, beta = 1/2 isometry defect", r.isometry_defect, 0.0, cfg.tol(1e-6)),
        ])
    }));
    out
}

fn gauss_psi() -> HolFn {
    HolFn::strip("exp(-z^2)", f64::INFINITY, |z| (-z * z).exp()).bounded()
}

fn sqfun_closed_forms(cfg: &SuiteConfig) -> Vec<Case> {
    let mut rng = cfg.rng(60);
    let spectra: Vec<Vec<f64>> = vec![vec![0.0], vec![0.7], vec![-2.0], vec![0.3, -1.5, 2.2]];
    let herm = random_hermitian(&mut rng, 3, 1.0);
    let xs: Vec<CVector> = (0..spectra.len() + 1).map(|_| random_cvector(&mut rng, 3)).collect();
    let instances: Vec<(String, CMatrix, CVector)> = spectra
        .iter()
        .zip(&xs)
        .map(|(s, x)| {
            let x = CVector::new(x.as_slice()[..s.len()].to_vec());
            (format!("diag{s:?}"), CMatrix::diag_real(s), x)
        })
        .chain(std::iter::once(("hermitian 3x3".to_string(), herm, xs[spectra.len()].clone())))
        .collect();
    let mut out = Vec::new();
    out.extend(group("shift", || {
        let mut worst: f64 = 0.0;
        for (i, (_, a, x)) in instances.iter().enumerate() {
            let op = StripOperator::new(a.clone())?;
            let k = KernelFn::shift(gauss_psi(), line_grid(12.0 + op.real_extent(), 0.05)?)?;
            let s = sqfun_matrix(&k, &op, x, Side::Primal, &SqfOptions::default())?;
            if i == 0 {
                if let Some(dir) = &cfg.out {
                    s.write_csv(&dir.join("shift-gaussian-sqfun.csv"))?;
                }
            }
            worst = worst.max((sqfun_hs(&s) / x.norm2() - (PI / 2.0).powf(0.25)).abs());
        }
        Ok(vec![Case::at_most("shift gaussian |S x|/|x| - (pi/2)^(1/4) (max over spectra)", worst, 0.0, cfg.tol(1e-6))])
    }));
    for w in [0.5, 1.0, 2.0] {
        out.extend(group(&format!("orbit {w}"), || {
            let k = KernelFn::group_orbit(w)?;
            let mut worst: f64 = 0.0;
            for (_, a, x) in &instances {
                let op = StripOperator::new(a.clone())?;
                let s = sqfun_matrix(&k, &op, x, Side::Primal, &SqfOptions::default())?;
                worst = worst.max((sqfun_hs(&s) / x.norm2() - (2.0 / w).sqrt()).abs());
            }
            Ok(vec![Case::at_most(&format!("group orbit omega={w} |S x|/|x| - sqrt(2/omega)"), worst, 0.0, cfg.tol(1e-6))])
        }));
    }
    out.extend(group("resolvent", || {
        let mut worst: f64 = 0.0;
        for (_, a, x) in &instances {
            let op = StripOperator::new(a.clone())?;
            let k = KernelFn::resolvent_boundary(1.0, op.real_extent())?;
            let s = sqfun_matrix(&k, &op, x, Side::Primal, &SqfOptions::default())?;
            worst = worst.max((sqfun_hs(&s) / x.norm2() - (2.0 * PI).sqrt()).abs());
        }
        Ok(vec![Case::at_most("boundary resolvent omega=1 |S x|/|x| - sqrt(2 pi/omega)", worst, 0.0, cfg.tol(1e-6))])
    }));
    out
}

fn equivalences(cfg: &SuiteConfig) -> Vec<Case> {
    let mut rng = cfg.rng(70);
    let a = random_strip_matrix(&mut rng, 2).scale_real(0.5);
    let x = random_cvector(&mut rng, 2);
    let mut out = Vec::new();
    out.extend(group("fourier", || {
        let op = StripOperator::new(a.clone())?;
        let r = equivalence_check(Equivalence::Fourier { omega: 1.0 }, &op, &x, &SqfOptions::default())?;
        Ok(vec![Case::close("fourier: cosh-shift vs sqrt(2 pi) weighted orbit", r.lhs, r.rhs, cfg.tol(1e-5) * r.rhs)])
    }));
    out.extend(group("subordination", || {
        let k = KernelFn::shift(gauss_psi(), line_grid(5.0, 0.25)?)?;
        let m = k.grid().len();
        let t = random_cmatrix(&mut rng.clone(), m, 3).scale_real(0.1);
        let op = StripOperator::new(CMatrix::diag_real(&[0.2, -0.3]))?;
        let r = equivalence_check(Equivalence::Subordination { kernel: &k, t: &t }, &op, &CVector::from_real(&[1.0, 2.0]), &SqfOptions::default())?;
        let (ratio, tn) = r.norm_ratio.unwrap_or((f64::NAN, f64::NAN));
        Ok(vec![
            Case::at_most("subordination column identity", r.residual, 0.0, cfg.tol(1e-9)),
            Case::at_most("subordination norm ratio against |T|", ratio, tn, 1e-12 * tn),
        ])
    }));
    out.extend(group("pairing", || {
        let (f, g) = normalized_orbit_pair(1.0)?;
        let op = StripOperator::new(CMatrix::diag_real(&[0.3, -0.8]))?;
        let x = CVector::from_real(&[0.6, 0.8]);
        let r = pairing_identity_check(&f, &g, &op, &x, &x.conj(), &SqfOptions::default())?;
        let nop = StripOperator::new(a.clone())?;
        let r2 = pairing_identity_check(&f, &g, &nop, &x, &random_cvector(&mut rng.clone(), 2), &SqfOptions::default())?;
        let dual_ok = r.duality.as_ref().is_some_and(|d| d.pass);
        Ok(vec![
            Case::at_most("pairing identity residual (self-adjoint)", r.residual, 0.0, cfg.tol(1e-8)),
            Case::at_most("pairing identity residual (non-normal)", r2.residual, 0.0, cfg.tol(1e-8)),
            Case::close("normalized pair: duality bounds hold", dual_ok as u8 as f64, 1.0, 0.0),
        ])
    }));
    out.extend(group("mcintosh", || {
        let phi = HolFn::sector("sqrt(z)exp(-z)", PI / 2.0, |z| z.sqrt() * (-z).exp());
        let s = CMatrix::diag_real(&[1.0, 3.0]);
        let x = CVector::from_real(&[1.0, 1.0]);
        let r = mcintosh_reconstruct(&phi, &phi, &s, &x, (1e-9, 50.0), 0.05)?;
        Ok(vec![
            Case::close("mcintosh constant for sqrt(z) e^-z", r.constant.re, 0.5, cfg.tol(1e-6)),
            Case::at_most("mcintosh reconstruction vs x/2", r.vector.max_abs_diff(&x.scale(c(0.5, 0.0))), 0.0, cfg.tol(1e-6)),
        ])
    }));
    out
}

fn gabor_params(cfg: &SuiteConfig) -> GaborParams {
    GaborParams::new(cfg.gabor_k.unwrap_or(12), cfg.gabor_n.unwrap_or(32))
}

fn frames(cfg: &SuiteConfig) -> Vec<Case> {
    let mut out = Vec::new();
    out.extend(group("finite", || {
        let s3 = 3f64.sqrt() / 2.0;
        let merc = FrameSpec::from_vectors(&CMatrix::from_real_rows(&[&[1.0, -0.5, -0.5], &[0.0, s3, -s3]])?)?;
        if let Some(dir) = &cfg.out {
            merc.write_csv(&dir.join("mercedes-frame.csv"))?;
        }
        let mb = frame_bounds(&merc, 1000, cfg.seed)?;
        let onb = frame_bounds(&FrameSpec::orthonormal(3), 1000, cfg.seed)?;
        let dbl = frame_bounds(&FrameSpec::from_vectors(&CMatrix::identity(2).hcat(&CMatrix::identity(2))?)?, 1000, cfg.seed)?;
        let t = CMatrix::diag_real(&[1.0, 0.5, 0.25]);
        let hb = l1_frame_bound(L1Target::OperatorHs(&t))?;
        let fr = hb.frame.clone().ok_or_else(|| Error::Method("no certifying frame".into()))?;
        let attained = fr.l1_sum(&t.matvec(&hs_maximizer(&t)?));
        let tol = cfg.tol(1e-12);
        Ok(vec![
            Case::close("mercedes lower bound", mb.lower, 1.5f64.sqrt(), tol),
            Case::close("mercedes upper bound", mb.upper, 1.5f64.sqrt(), tol),
            Case::close("mercedes sampled lower bound", mb.sampled_lower, 1.5f64.sqrt(), tol),
            Case::close("orthonormal basis bounds", onb.upper - onb.lower, 0.0, tol),
            Case::close("doubled basis bound", dbl.lower, 2f64.sqrt(), tol),
            Case::close("hs bound diag(1, 1/2, 1/4)", hb.bound, 21f64.sqrt() / 4.0, cfg.tol(1e-10)),
            Case::close("hs maximizer attains the bound", attained, hb.bound, cfg.tol(1e-10)),
        ])
    }));
    out.extend(group("hs certificate", || {
        let mut rng = cfg.rng(80);
        let mats: Vec<CMatrix> = (0..100)
            .map(|_| {
                let (n, m) = (rng.random_range(1..=5), rng.random_range(1..=5));
                random_cmatrix(&mut rng, n, m)
            })
            .collect();
        let rows: Vec<Result<(f64, f64)>> = mats
            .par_iter()
            .enumerate()
            .map(|(k, t)| {
                let b = l1_frame_bound(L1Target::OperatorHs(t))?;
                let fr = b.frame.as_ref().ok_or_else(|| Error::Method("no certifying frame".into()))?;
                let sup = sampled_l1_sup(t, fr, 10000, cfg.seed.wrapping_add(k as u64));
                Ok(((b.bound - t.frobenius()).abs(), (sup - b.bound) / b.bound))
            })
            .collect();
        let rows: Vec<(f64, f64)> = rows.into_iter().collect::<Result<_>>()?;
        Ok(vec![
            Case::at_most("hs l1-bound vs hs norm (max over 100 matrices)", max_of(rows.iter().map(|r| r.0)), 0.0, cfg.tol(1e-10)),
            Case::at_most("sampled sup - bound, relative (max over 10^4 unit vectors each)", max_of(rows.iter().map(|r| r.1)), 0.0, 1e-12),
        ])
    }));
    out.extend(group("sets", || {
        let mut rng = cfg.rng(81);
        let f = FrameSpec::from_vectors(&random_cmatrix(&mut rng, 3, 5))?;
        let samples: Vec<CVector> = (0..20).map(|_| random_cvector(&mut rng, 3)).collect();
        let b = l1_frame_bound(L1Target::Set { samples: &samples, frame: &f })?;
        let maxnorm = max_of(samples.iter().map(|x| x.norm2()));
        let s = random_cmatrix(&mut rng, 3, 3);
        let pf = f.push_forward(&s)?;
        let moved: Vec<CVector> = samples.iter().map(|x| s.matvec(x)).collect();
        let pb = l1_frame_bound(L1Target::Set { samples: &moved, frame: &pf })?;
        let sn = svd(&s)?.s[0];
        let single = l1_frame_bound(L1Target::Set { samples: &[CVector::basis(3, 0)], frame: &FrameSpec::orthonormal(3) })?;
        Ok(vec![
            Case::at_least("set bound dominates max sample norm", b.bound, maxnorm, 0.0),
            Case::at_most("push-forward bound against |S| |M|_1", pb.bound, sn * b.bound, 1e-12 * sn * b.bound),
            Case::close("set {e1} with orthonormal basis", single.bound, 1.0, cfg.tol(1e-12)),
        ])
    }));
    out.extend(group("gabor", || {
        let p = gabor_params(cfg);
        let g = gabor_frame_build(&p)?;
        let gauss = w12_dictionary().remove(0);
        let direct = g.coefficient(&|s| gauss.value(s), 3, 0);
        let parts = g.coefficient_by_parts(&gauss, 3, 0)?;
        let f = |s: f64| c((-s * s).exp(), 0.0);
        let base = g.coefficient_sum(&f);
        let doubled = gabor_frame_build(&p.doubled())?.coefficient_sum(&f);
        if let Some(dir) = &cfg.out {
            write_coefficients(&dir.join("gabor-coefficients.csv"), &g.coefficient_table(&f))?;
        }
        let w = w12_ratio_constant(&p)?;
        Ok(vec![
            Case::at_most("partition of unity residual", g.partition_residual(20001), 0.0, 1e-12),
            Case::at_most("direct vs integration by parts, (n,k) = (3,0)", (direct - parts).norm(), 0.0, cfg.tol(1e-8)),
            Case::close("coefficient sum of exp(-s^2) under doubling K, N", doubled, base, 0.01 * base),
            Case::close("w12 ratio constant under refinement", w.refined_constant, w.constant, 0.2 * w.constant),
            Case::at_least("gabor lower frame bound positive", g.lower, 0.0, 0.0).note(format!("A = {:.6}, B = {:.6}", g.lower, g.upper)),
        ])
    }));
    out
}

fn l1_sqfe(cfg: &SuiteConfig) -> Vec<Case> {
    let mut rng = cfg.rng(90);
    let mut instances: Vec<(String, CMatrix)> = vec![
        ("diag(0)".into(), CMatrix::diag_real(&[0.0])),
        ("diag(0.3, -1.2)".into(), CMatrix::diag_real(&[0.3, -1.2])),
    ];
    for k in 0..3 {
        instances.push((format!("hermitian {k}"), random_hermitian(&mut rng, 3, 1.5)));
    }
    let xs: Vec<CVector> = instances.iter().map(|(_, a)| random_cvector(&mut rng, a.rows())).collect();
    let psis: Vec<(HolFn, f64, f64, i64, f64)> = vec![
        (HolFn::strip("exp(-z^2)", f64::INFINITY, |z| (-z * z).exp()), 0.5, 1.0, 12, 12.0),
        (HolFn::strip("sech(z)", PI / 2.0, sech), 0.5, 1.0, 24, 40.0),
    ];
    let mut out = Vec::new();
    for (psi, w, wp, kh, half) in &psis {
        out.extend(group(psi.label(), || {
            let g = gabor_frame_build(&GaborParams::new(cfg.gabor_k.unwrap_or(*kh), cfg.gabor_n.unwrap_or(32)))?;
            let b = shift_range_bound(psi, *w, *wp, &g, &ShiftRangeGrid::default())?;
            let kernel = KernelFn::shift(psi.clone().bounded(), line_grid(*half + 3.0, 0.05)?)?;
            let mut cases = Vec::new();
            for ((name, a), x) in instances.iter().zip(&xs) {
                let op = StripOperator::new(a.clone())?;
                let s = sqfun_hs(&sqfun_matrix(&kernel, &op, x, Side::Primal, &SqfOptions::default())?);
                cases.push(
                    Case::at_most(&format!("{}: |S x| against 2 |g(omega)|_1 |x|, {name}", psi.label()), s, 2.0 * b.gabor_bound * x.norm2(), 0.0)
                        .note(format!("frame bound {:.6}, w12 profile {:.6}", b.gabor_bound, b.w12_sup)),
                );
            }
            Ok(cases)
        }));
    }
    out
}

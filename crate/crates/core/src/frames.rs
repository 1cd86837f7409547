//! Frames (L, R) with L R = I, l1-frame bounds of sets and operators, and the
//! Gabor frame eta_k e^{in.} behind the W^2_1 embedding bound.

use std::f64::consts::PI;
use std::path::Path;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numlin::{c, complete_orthonormal, inverse, random_unit_vector, svd, CMatrix, CVector, C64};
use crate::strip_calc::{cauchy_derivatives, FnClass, HolFn};

/// Frame given by its analysis map R: H -> l2(I) and a left inverse L.
#[derive(Clone, Debug)]
pub struct FrameSpec {
    r: CMatrix,
    l: CMatrix,
    pub labels: Vec<String>,
}

impl FrameSpec {
    /// Frame of the columns f_a of `vectors`: (R h)_a = <h, f_a>, L = (R*R)^{-1} R*.
    pub fn from_vectors(vectors: &CMatrix) -> Result<Self> {
        let r = vectors.adjoint();
        let gram = r.adjoint().matmul(&r);
        let l = inverse(&gram).map_err(|_| Error::Param("analysis map is rank deficient (lower frame bound 0)".into()))?.matmul(&r.adjoint());
        let labels = (0..vectors.cols()).map(|j| format!("f{j}")).collect();
        let f = FrameSpec { r, l, labels };
        f.check()?;
        Ok(f)
    }

    pub fn from_maps(r: CMatrix, l: CMatrix) -> Result<Self> {
        let labels = (0..r.rows()).map(|j| format!("e{j}")).collect();
        let f = FrameSpec { r, l, labels };
        f.check()?;
        Ok(f)
    }

    fn check(&self) -> Result<()> {
        if self.l.cols() != self.r.rows() || self.l.rows() != self.r.cols() {
            return Err(Error::Dimension("frame maps have incompatible shapes".into()));
        }
        let d = self.l.matmul(&self.r).max_abs_diff(&CMatrix::identity(self.dim()));
        if d > 1e-10 {
            return Err(Error::Param(format!("L R differs from the identity by {d:e}")));
        }
        Ok(())
    }

    pub fn orthonormal(d: usize) -> Self {
        FrameSpec { r: CMatrix::identity(d), l: CMatrix::identity(d), labels: (0..d).map(|j| format!("e{j}")).collect() }
    }

    pub fn dim(&self) -> usize {
        self.r.cols()
    }

    pub fn len(&self) -> usize {
        self.r.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.r.rows() == 0
    }

    pub fn analysis(&self) -> &CMatrix {
        &self.r
    }

    pub fn synthesis(&self) -> &CMatrix {
        &self.l
    }

    /// Frame vectors f_a = R* e_a as columns.
    pub fn vectors(&self) -> CMatrix {
        self.r.adjoint()
    }

    pub fn synthesis_norm(&self) -> Result<f64> {
        Ok(svd(&self.l)?.s.first().copied().unwrap_or(0.0))
    }

    pub fn l1_sum(&self, x: &CVector) -> f64 {
        self.r.matvec(x).iter().map(|v| v.norm()).sum()
    }

    /// Frame for S(H): R S^{-1} and S L.
    pub fn push_forward(&self, s: &CMatrix) -> Result<FrameSpec> {
        let si = inverse(s)?;
        FrameSpec::from_maps(self.r.matmul(&si), s.matmul(&self.l))
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let v = self.vectors();
        let mut w = csv::Writer::from_path(path)?;
        let mut header = vec!["label".to_string()];
        for i in 0..v.rows() {
            header.push(format!("re_{i}"));
            header.push(format!("im_{i}"));
        }
        w.write_record(&header)?;
        for j in 0..v.cols() {
            let mut row = vec![self.labels[j].clone()];
            for i in 0..v.rows() {
                row.push(v[(i, j)].re.to_string());
                row.push(v[(i, j)].im.to_string());
            }
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FrameBounds {
    /// from the singular values of R
    pub lower: f64,
    pub upper: f64,
    /// extremes of ||R h|| over the random trials
    pub sampled_lower: f64,
    pub sampled_upper: f64,
}

pub fn frame_bounds(f: &FrameSpec, trials: usize, seed: u64) -> Result<FrameBounds> {
    if f.is_empty() {
        return Err(Error::Param("empty frame".into()));
    }
    let s = svd(f.analysis())?;
    let lower = s.s.get(f.dim() - 1).copied().unwrap_or(0.0);
    if lower <= 1e-14 * s.s[0] {
        return Err(Error::Param("analysis map is rank deficient (lower frame bound 0)".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for _ in 0..trials {
        let h = random_unit_vector(&mut rng, f.dim());
        let v = f.analysis().matvec(&h).norm2();
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok(FrameBounds { lower, upper: s.s[0], sampled_lower: lo, sampled_upper: hi })
}

#[derive(Clone, Debug)]
pub struct L1Bound {
    pub bound: f64,
    /// certifying frame where one is constructed
    pub frame: Option<FrameSpec>,
    pub detail: L1Detail,
}

#[derive(Clone, Debug, Serialize)]
pub enum L1Detail {
    /// singular values tau of T
    OperatorHs { tau: Vec<f64> },
    /// ||L|| and sup_x sum_a |<Rx, e_a>|
    Set { synthesis_norm: f64, sup_sum: f64 },
    ShiftRange(ShiftRangeBound),
}

pub enum L1Target<'a> {
    OperatorHs(&'a CMatrix),
    Set { samples: &'a [CVector], frame: &'a FrameSpec },
    ShiftRange { psi: &'a HolFn, omega: f64, omega_prime: f64, gabor: &'a GaborFrame },
}

pub fn l1_frame_bound(target: L1Target<'_>) -> Result<L1Bound> {
    match target {
        L1Target::OperatorHs(t) => {
            let s = svd(t)?;
            let u = complete_orthonormal(&s.u);
            let bound = s.s.iter().map(|x| x * x).sum::<f64>().sqrt();
            let frame = FrameSpec::from_maps(u.adjoint(), u)?;
            Ok(L1Bound { bound, frame: Some(frame), detail: L1Detail::OperatorHs { tau: s.s } })
        }
        L1Target::Set { samples, frame } => {
            let ln = frame.synthesis_norm()?;
            let sup_sum = samples.iter().map(|x| frame.l1_sum(x)).fold(0.0, f64::max);
            Ok(L1Bound { bound: ln * sup_sum, frame: Some(frame.clone()), detail: L1Detail::Set { synthesis_norm: ln, sup_sum } })
        }
        L1Target::ShiftRange { psi, omega, omega_prime, gabor } => {
            let b = shift_range_bound(psi, omega, omega_prime, gabor, &ShiftRangeGrid::default())?;
            Ok(L1Bound { bound: b.gabor_bound, frame: None, detail: L1Detail::ShiftRange(b) })
        }
    }
}

/// sup over unit f of sum_a |<T f, e_a>| for seeded random f (never above ||T||_HS for the SVD frame).
pub fn sampled_l1_sup(t: &CMatrix, frame: &FrameSpec, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let f = random_unit_vector(&mut rng, t.cols());
            frame.l1_sum(&t.matvec(&f))
        })
        .fold(0.0, f64::max)
}

/// f = sum tau_n v_n / ||tau||, which attains sum tau_n |<f, v_n>| = ||tau||_2.
pub fn hs_maximizer(t: &CMatrix) -> Result<CVector> {
    let s = svd(t)?;
    let norm = s.s.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut f = CVector::zeros(t.cols());
    for (k, tau) in s.s.iter().enumerate() {
        f.axpy(c(tau / norm, 0.0), &s.v.column(k));
    }
    Ok(f)
}

/// A smooth function on the line with its first two derivatives.
#[derive(Clone)]
pub struct SmoothFn {
    pub label: String,
    eval: Arc<dyn Fn(f64) -> [C64; 3] + Send + Sync>,
}

impl SmoothFn {
    pub fn new(label: &str, f: impl Fn(f64) -> [C64; 3] + Send + Sync + 'static) -> Self {
        SmoothFn { label: label.into(), eval: Arc::new(f) }
    }

    /// Derivatives of a holomorphic function by Cauchy circles of radius rho.
    pub fn from_holomorphic(label: &str, f: impl Fn(C64) -> C64 + Send + Sync + 'static, rho: f64) -> Self {
        SmoothFn::new(label, move |s| {
            let z = c(s, 0.0);
            let (d1, d2) = cauchy_derivatives(&f, z, rho);
            [f(z), d1, d2]
        })
    }

    pub fn eval(&self, s: f64) -> [C64; 3] {
        (self.eval)(s)
    }

    pub fn value(&self, s: f64) -> C64 {
        (self.eval)(s)[0]
    }

    /// int |g| + |g'| + |g''| by the trapezoid rule on [-half, half].
    pub fn w12_norm(&self, half: f64, step: f64) -> f64 {
        let n = (2.0 * half / step).round() as usize + 1;
        let h = 2.0 * half / (n - 1) as f64;
        (0..n)
            .map(|k| {
                let v = self.eval(-half + h * k as f64);
                let w = if k == 0 || k == n - 1 { 0.5 * h } else { h };
                w * (v[0].norm() + v[1].norm() + v[2].norm())
            })
            .sum()
    }
}

/// Window eta = phi / sum_j phi(. - j), phi(t) = exp(-1/(1 - (t/pi)^2)) on (-pi, pi).
#[derive(Clone, Debug, Serialize)]
pub struct GaborParams {
    pub k_min: i64,
    pub k_max: i64,
    pub n_max: i64,
    pub nodes_per_window: usize,
}

impl GaborParams {
    pub fn new(k_half: i64, n_max: i64) -> Self {
        GaborParams { k_min: -k_half, k_max: k_half, n_max, nodes_per_window: 512 }
    }

    pub fn doubled(&self) -> Self {
        GaborParams { k_min: 2 * self.k_min, k_max: 2 * self.k_max, n_max: 2 * self.n_max, nodes_per_window: 2 * self.nodes_per_window }
    }
}

/// phi and its first two derivatives.
fn bump(t: f64) -> [f64; 3] {
    let u = t / PI;
    let q = 1.0 - u * u;
    if q <= 0.0 {
        return [0.0; 3];
    }
    let p = (-1.0 / q).exp();
    if p == 0.0 {
        return [0.0; 3];
    }
    let a = -2.0 * u / (PI * q * q);
    let da = -2.0 / (PI * PI * q * q) - 8.0 * u * u / (PI * PI * q * q * q);
    [p, p * a, p * (a * a + da)]
}

/// Sum of the integer translates of phi and its derivatives.
fn bump_sum(t: f64) -> [f64; 3] {
    let mut s = [0.0; 3];
    let lo = (t - PI).floor() as i64;
    let hi = (t + PI).ceil() as i64;
    for j in lo..=hi {
        let b = bump(t - j as f64);
        for i in 0..3 {
            s[i] += b[i];
        }
    }
    s
}

/// eta and its first two derivatives.
pub fn window(t: f64) -> [f64; 3] {
    let [p, p1, p2] = bump(t);
    if p == 0.0 {
        return [0.0; 3];
    }
    let [s, s1, s2] = bump_sum(t);
    let e = p / s;
    let e1 = (p1 * s - p * s1) / (s * s);
    let e2 = (p2 * s * s - 2.0 * p1 * s1 * s - p * s2 * s + 2.0 * p * s1 * s1) / (s * s * s);
    [e, e1, e2]
}

#[derive(Clone, Debug, Serialize)]
pub struct GaborFrame {
    pub params: GaborParams,
    /// sqrt(2 pi min sum_k eta_k^2), the lower frame bound
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientEntry {
    pub n: i64,
    pub k: i64,
    pub abs: f64,
}

impl GaborFrame {
    pub fn synthesis_norm(&self) -> f64 {
        1.0 / self.lower
    }

    /// Covered interval: every point there has all overlapping windows present.
    pub fn covered(&self) -> (f64, f64) {
        (self.params.k_min as f64 + PI, self.params.k_max as f64 - PI)
    }

    pub fn partition_residual(&self, samples: usize) -> f64 {
        let (a, b) = self.covered();
        (0..samples)
            .map(|i| {
                let t = a + (b - a) * i as f64 / (samples - 1) as f64;
                let s: f64 = (self.params.k_min..=self.params.k_max).map(|k| window(t - k as f64)[0]).sum();
                (s - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    fn window_nodes(&self, k: i64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let m = self.params.nodes_per_window;
        let h = 2.0 * PI / m as f64;
        (0..m).map(move |j| (k as f64 - PI + h * j as f64, h))
    }

    /// <g, f_{n,k}> = int g eta_k e^{-ins} ds.
    pub fn coefficient(&self, g: &dyn Fn(f64) -> C64, n: i64, k: i64) -> C64 {
        self.window_nodes(k).map(|(s, h)| g(s) * window(s - k as f64)[0] * C64::from_polar(h, -(n as f64) * s)).sum()
    }

    /// -(1/n^2) int (eta_k g)'' e^{-ins} ds.
    pub fn coefficient_by_parts(&self, g: &SmoothFn, n: i64, k: i64) -> Result<C64> {
        if n == 0 {
            return Err(Error::Param("integration by parts needs n != 0".into()));
        }
        let s: C64 = self
            .window_nodes(k)
            .map(|(s, h)| {
                let [e, e1, e2] = window(s - k as f64);
                let [g0, g1, g2] = g.eval(s);
                (g2 * e + g1 * (2.0 * e1) + g0 * e2) * C64::from_polar(h, -(n as f64) * s)
            })
            .sum();
        Ok(-s / (n * n) as f64)
    }

    /// Coefficients of one window for all |n| <= n_max from a single sweep.
    fn window_coefficients(&self, g: &(dyn Fn(f64) -> C64 + Sync), k: i64) -> Vec<C64> {
        let nm = self.params.n_max;
        let vals: Vec<(f64, C64)> = self.window_nodes(k).map(|(s, h)| (s, g(s) * (window(s - k as f64)[0] * h))).collect();
        (-nm..=nm).map(|n| vals.iter().map(|(s, v)| v * C64::from_polar(1.0, -(n as f64) * s)).sum()).collect()
    }

    pub fn coefficient_sum(&self, g: &(dyn Fn(f64) -> C64 + Sync)) -> f64 {
        let ks: Vec<i64> = (self.params.k_min..=self.params.k_max).collect();
        let parts: Vec<f64> = ks.par_iter().map(|&k| self.window_coefficients(g, k).iter().map(|v| v.norm()).sum()).collect();
        parts.iter().sum()
    }

    pub fn coefficient_table(&self, g: &(dyn Fn(f64) -> C64 + Sync)) -> Vec<CoefficientEntry> {
        let nm = self.params.n_max;
        let mut out = Vec::new();
        for k in self.params.k_min..=self.params.k_max {
            for (i, v) in self.window_coefficients(g, k).into_iter().enumerate() {
                out.push(CoefficientEntry { n: i as i64 - nm, k, abs: v.norm() });
            }
        }
        out
    }

    /// Frame vectors eta_k(t) e^{int} sampled at points t, one column per (n, k).
    pub fn family_on(&self, t: &[f64]) -> CMatrix {
        let nm = self.params.n_max;
        let pairs: Vec<(i64, i64)> = (self.params.k_min..=self.params.k_max).flat_map(|k| (-nm..=nm).map(move |n| (n, k))).collect();
        CMatrix::from_fn(t.len(), pairs.len(), |i, j| {
            let (n, k) = pairs[j];
            C64::from_polar(window(t[i] - k as f64)[0], n as f64 * t[i])
        })
    }
}

pub fn write_coefficients(path: &Path, table: &[CoefficientEntry]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["n", "k", "abs_coeff"])?;
    for e in table {
        w.write_record([e.n.to_string(), e.k.to_string(), e.abs.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn gabor_frame_build(p: &GaborParams) -> Result<GaborFrame> {
    if p.k_max - p.k_min < 8 {
        return Err(Error::Param("translates do not cover any interval".into()));
    }
    if p.nodes_per_window < 4 * p.n_max as usize {
        return Err(Error::Param("too few window nodes for the modulation range".into()));
    }
    // sum_k eta_k^2 is 1-periodic
    let m = 2000;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for i in 0..m {
        let t = i as f64 / m as f64;
        let s: f64 = (-4..=4).map(|k| window(t - k as f64)[0].powi(2)).sum();
        lo = lo.min(s);
        hi = hi.max(s);
    }
    Ok(GaborFrame { params: p.clone(), lower: (2.0 * PI * lo).sqrt(), upper: (2.0 * PI * hi).sqrt() })
}

#[derive(Clone, Debug, Serialize)]
pub struct ShiftRangeGrid {
    pub heights: usize,
    pub shifts: usize,
}

impl Default for ShiftRangeGrid {
    fn default() -> Self {
        ShiftRangeGrid { heights: 5, shifts: 4 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ShiftRangeBound {
    /// sup_z int (|psi| + |psi'| + |psi''|)(t + z) dt
    pub w12_sup: f64,
    /// sup_z sum_{n,k} |<psi(. + z), f_{n,k}>|
    pub coefficient_sup: f64,
    /// ||L|| * coefficient_sup
    pub gabor_bound: f64,
}

/// l1-frame data for {psi(. + z) : |Im z| <= omega}. Integer real shifts only
/// permute the windows, so real parts are sampled in [0, 1).
pub fn shift_range_bound(psi: &HolFn, omega: f64, omega_prime: f64, gabor: &GaborFrame, grid: &ShiftRangeGrid) -> Result<ShiftRangeBound> {
    if !(omega < omega_prime) || omega_prime > psi.strip_height() {
        return Err(Error::Param("need omega < omega' <= strip height of psi".into()));
    }
    if psi.class() != FnClass::Elementary {
        psi.clone().certify_elementary(omega_prime)?;
    }
    let nh = grid.heights.max(2);
    let zs: Vec<C64> = (0..nh)
        .flat_map(|i| {
            let y = -omega + 2.0 * omega * i as f64 / (nh - 1) as f64;
            (0..grid.shifts).map(move |j| c(j as f64 / grid.shifts as f64, y))
        })
        .collect();
    let rho = 0.5 * (omega_prime - omega);
    let half = gabor.covered().1.min(-gabor.covered().0);
    let e = psi.evaluator();
    let w12_sup = zs
        .iter()
        .map(|&z| {
            let e = e.clone();
            SmoothFn::from_holomorphic("shifted", move |w| e(w + z), rho).w12_norm(half, 0.02)
        })
        .fold(0.0, f64::max);
    let coefficient_sup = zs
        .iter()
        .map(|&z| {
            let e = e.clone();
            gabor.coefficient_sum(&move |s: f64| e(c(s, 0.0) + z))
        })
        .fold(0.0, f64::max);
    Ok(ShiftRangeBound { w12_sup, coefficient_sup, gabor_bound: gabor.synthesis_norm() * coefficient_sup })
}

/// Smooth decaying test functions with exact derivatives.
pub fn w12_dictionary() -> Vec<SmoothFn> {
    let gauss = |a: f64, m: f64| {
        SmoothFn::new(&format!("exp(-{a}(s-{m})^2)"), move |s| {
            let x = s - m;
            let g = (-a * x * x).exp();
            [c(g, 0.0), c(-2.0 * a * x * g, 0.0), c((4.0 * a * a * x * x - 2.0 * a) * g, 0.0)]
        })
    };
    let mut d = vec![gauss(1.0, 0.0), gauss(0.5, 1.5), gauss(2.0, -0.7), gauss(0.25, 0.0)];
    d.push(SmoothFn::new("s exp(-s^2)", |s| {
        let g = (-s * s).exp();
        [c(s * g, 0.0), c((1.0 - 2.0 * s * s) * g, 0.0), c((4.0 * s * s * s - 6.0 * s) * g, 0.0)]
    }));
    d.push(SmoothFn::new("sech(s)", |s| {
        let (sh, ch) = (s.sinh(), s.cosh());
        [c(1.0 / ch, 0.0), c(-sh / (ch * ch), 0.0), c((sh * sh - 1.0) / (ch * ch * ch), 0.0)]
    }));
    d.push(SmoothFn::new("sech(2s)^2", |s| {
        let t = (2.0 * s).tanh();
        let q = 1.0 - t * t;
        [c(q, 0.0), c(-4.0 * t * q, 0.0), c(8.0 * q * (3.0 * t * t - 1.0), 0.0)]
    }));
    d.push(SmoothFn::new("exp(-s^2) cos(3s)", |s| {
        let g = (-s * s).exp();
        let (cs, sn) = ((3.0 * s).cos(), (3.0 * s).sin());
        [
            c(g * cs, 0.0),
            c(g * (-2.0 * s * cs - 3.0 * sn), 0.0),
            c(g * ((4.0 * s * s - 2.0) * cs + 12.0 * s * sn - 9.0 * cs), 0.0),
        ]
    }));
    d.push(SmoothFn::new("exp(-s^2 + 2is)", |s| {
        let g = C64::from_polar((-s * s).exp(), 2.0 * s);
        let a = c(-2.0 * s, 2.0);
        [g, g * a, g * (a * a - 2.0)]
    }));
    d.push(SmoothFn::new("1/(1+s^2)^2", |s| {
        let q = 1.0 + s * s;
        [c(1.0 / (q * q), 0.0), c(-4.0 * s / (q * q * q), 0.0), c((20.0 * s * s - 4.0) / (q * q * q * q), 0.0)]
    }));
    d
}

#[derive(Clone, Debug, Serialize)]
pub struct W12Report {
    /// max over the dictionary of (sum |coefficients|) / ||g||_{W^2_1}
    pub constant: f64,
    pub refined_constant: f64,
    pub relative_change: f64,
    pub ratios: Vec<(String, f64)>,
}

pub fn w12_ratio_constant(base: &GaborParams) -> Result<W12Report> {
    let run = |p: &GaborParams| -> Result<(f64, Vec<(String, f64)>)> {
        let g = gabor_frame_build(p)?;
        let half = g.covered().1.min(-g.covered().0);
        let ratios: Vec<(String, f64)> = w12_dictionary()
            .iter()
            .map(|f| {
                let s = g.coefficient_sum(&|x: f64| f.value(x));
                (f.label.clone(), s / f.w12_norm(half, 0.01))
            })
            .collect();
        let m = ratios.iter().map(|r| r.1).fold(0.0, f64::max);
        Ok((m, ratios))
    };
    let (constant, ratios) = run(base)?;
    let (refined_constant, _) = run(&base.doubled())?;
    Ok(W12Report { constant, refined_constant, relative_change: (refined_constant - constant).abs() / constant, ratios })
}

/// Random complex matrix with entries uniform in the unit square.
pub fn random_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_frame_bounds() {
        let onb = FrameSpec::from_vectors(&CMatrix::identity(3)).unwrap();
        let b = frame_bounds(&onb, 100, 1).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-12 && (b.upper - 1.0).abs() < 1e-12);
        let s3 = 3f64.sqrt() / 2.0;
        let merc = CMatrix::from_real_rows(&[&[1.0, -0.5, -0.5], &[0.0, s3, -s3]]).unwrap();
        let b = frame_bounds(&FrameSpec::from_vectors(&merc).unwrap(), 100, 1).unwrap();
        assert!((b.lower - 1.5f64.sqrt()).abs() < 1e-12 && (b.upper - 1.5f64.sqrt()).abs() < 1e-12);
        let twice = CMatrix::identity(2).hcat(&CMatrix::identity(2)).unwrap();
        let b = frame_bounds(&FrameSpec::from_vectors(&twice).unwrap(), 100, 1).unwrap();
        assert!((b.lower - 2f64.sqrt()).abs() < 1e-12);
        let deficient = CMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 0.0]]).unwrap();
        assert!(FrameSpec::from_vectors(&deficient).is_err());
    }

    #[test]
    fn hs_bound_diag() {
        let t = CMatrix::diag_real(&[1.0, 0.5, 0.25]);
        let b = l1_frame_bound(L1Target::OperatorHs(&t)).unwrap();
        assert!((b.bound - 21f64.sqrt() / 4.0).abs() < 1e-12);
        let frame = b.frame.unwrap();
        let f = hs_maximizer(&t).unwrap();
        assert!((frame.l1_sum(&t.matvec(&f)) - b.bound).abs() < 1e-12);
        assert!(sampled_l1_sup(&t, &frame, 2000, 3) <= b.bound + 1e-9);
    }

    #[test]
    fn set_bound_trivial() {
        let f = FrameSpec::orthonormal(3);
        let b = l1_frame_bound(L1Target::Set { samples: &[CVector::basis(3, 0)], frame: &f }).unwrap();
        assert!((b.bound - 1.0).abs() < 1e-12);
    }

    #[test]
    fn window_derivatives() {
        for t in [-2.5, -1.0, 0.3, 1.7, 2.9] {
            let h = 1e-5;
            let [_, d1, d2] = window(t);
            let fd1 = (window(t + h)[0] - window(t - h)[0]) / (2.0 * h);
            let fd2 = (window(t + h)[0] - 2.0 * window(t)[0] + window(t - h)[0]) / (h * h);
            assert!((d1 - fd1).abs() < 1e-7, "{t}: {d1} {fd1}");
            assert!((d2 - fd2).abs() < 1e-4, "{t}: {d2} {fd2}");
        }
    }

    #[test]
    fn gabor_partition_and_parts() {
        let g = gabor_frame_build(&GaborParams::new(12, 32)).unwrap();
        assert!(g.partition_residual(5000) < 1e-12);
        let gauss = w12_dictionary().remove(0);
        let direct = g.coefficient(&|s| gauss.value(s), 3, 0);
        let parts = g.coefficient_by_parts(&gauss, 3, 0).unwrap();
        assert!((direct - parts).norm() < 1e-8, "{direct} {parts}");
    }

    #[test]
    fn push_forward_is_exact() {
        let f = FrameSpec::from_vectors(&CMatrix::from_real_rows(&[&[1.0, 0.0, 1.0], &[0.0, 1.0, 1.0]]).unwrap()).unwrap();
        let s = CMatrix::from_real_rows(&[&[2.0, 1.0], &[0.0, 0.5]]).unwrap();
        let pf = f.push_forward(&s).unwrap();
        let x = CVector::from_real(&[0.3, -0.7]);
        let sx = s.matvec(&x);
        assert!((pf.l1_sum(&sx) - f.l1_sum(&x)).abs() < 1e-12);
        let sn = svd(&s).unwrap().s[0];
        assert!(pf.synthesis_norm().unwrap() <= sn * f.synthesis_norm().unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn truncation_stable() {
        let p = GaborParams::new(12, 32);
        let f = |s: f64| c((-s * s).exp(), 0.0);
        let a = gabor_frame_build(&p).unwrap().coefficient_sum(&f);
        let b = gabor_frame_build(&p.doubled()).unwrap().coefficient_sum(&f);
        assert!((a - b).abs() / b < 0.01, "{a} {b}");
    }

    #[test]
    fn w12_constant_stable() {
        let r = w12_ratio_constant(&GaborParams::new(12, 32)).unwrap();
        assert!(r.relative_change < 0.2, "{r:?}");
    }

    #[test]
    fn shift_range_dominates_l2() {
        let psi = HolFn::strip("gauss", f64::INFINITY, |z| (-z * z).exp());
        let g = gabor_frame_build(&GaborParams::new(12, 32)).unwrap();
        let b = shift_range_bound(&psi, 0.5, 1.0, &g, &ShiftRangeGrid::default()).unwrap();
        // sup_z ||psi(. + z)||_2 = (pi/2)^{1/4} e^{omega^2/2}
        let l2 = (PI / 2.0).powf(0.25) * (0.125f64).exp();
        assert!(b.gabor_bound >= l2, "{b:?}");
        assert!(b.w12_sup.is_finite());
    }
}

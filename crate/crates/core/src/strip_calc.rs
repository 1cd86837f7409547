//! Holomorphic functional calculus for matrices of strip type.
//!
//! f(A) = (1/2 pi i) int_{dSt_w'} f(z) (z - A)^{-1} dz over the positively
//! oriented strip boundary, computed by the trapezoid rule. Bounded f are
//! handled by the regularizer e_n(z) = exp(-z^2/n), f(A) = e_n(A)^{-1} (e_n f)(A),
//! or by the Gauss-Cauchy kernel exp(-(z - A)^2) (z - A)^{-1}. Sectorial
//! matrices go through f(S) = (f o exp)(log S).

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grids::{Contour, DiscreteHilbert, GridParams, LineMap, MeasureTag, SegmentKind};
use crate::numlin::{c, diagonalize, eigenvalues, expm, inverse, logm, CMatrix, CVector, C64, I};

pub const DEFAULT_MARGIN: f64 = 0.05;
pub const DEFAULT_REG_N: f64 = 64.0;

/// Square matrix with its strip type omega0 = max |Im lambda|.
#[derive(Clone, Debug)]
pub struct StripOperator {
    a: CMatrix,
    eig: Vec<C64>,
    omega0: f64,
    margin: f64,
}

impl StripOperator {
    pub fn new(a: CMatrix) -> Result<Self> {
        Self::with_margin(a, DEFAULT_MARGIN)
    }

    pub fn with_margin(a: CMatrix, margin: f64) -> Result<Self> {
        if !a.is_square() || a.rows() == 0 {
            return Err(Error::Dimension("strip operator must be a nonempty square matrix".into()));
        }
        if !a.is_finite() {
            return Err(Error::Param("matrix has non-finite entries".into()));
        }
        if !(margin > 0.0) {
            return Err(Error::Param("resolvent margin must be positive".into()));
        }
        let eig = eigenvalues(&a)?;
        let omega0 = eig.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        Ok(StripOperator { a, eig, omega0, margin })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.a
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    pub fn eigenvalues(&self) -> &[C64] {
        &self.eig
    }

    /// max |Re lambda|, used to place contour truncations.
    pub fn real_extent(&self) -> f64 {
        self.eig.iter().map(|z| z.re.abs()).fold(0.0, f64::max)
    }

    pub fn adjoint(&self) -> Result<StripOperator> {
        Self::with_margin(self.a.adjoint(), self.margin)
    }

    pub fn transpose(&self) -> Result<StripOperator> {
        Self::with_margin(self.a.transpose(), self.margin)
    }

    pub fn digest(&self) -> String {
        self.a.digest()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FnClass {
    Elementary,
    Bounded,
    Unchecked,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Domain {
    /// |Im z| < h; h may be infinite.
    Strip(f64),
    /// |arg z| < theta.
    Sector(f64),
}

type Eval = Arc<dyn Fn(C64) -> C64 + Send + Sync>;

/// Scalar holomorphic function with its domain of definition.
#[derive(Clone)]
pub struct HolFn {
    eval: Eval,
    domain: Domain,
    class: FnClass,
    label: String,
}

impl fmt::Debug for HolFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HolFn({}, {:?}, {:?})", self.label, self.domain, self.class)
    }
}

impl HolFn {
    pub fn strip(label: &str, height: f64, f: impl Fn(C64) -> C64 + Send + Sync + 'static) -> Self {
        HolFn { eval: Arc::new(f), domain: Domain::Strip(height), class: FnClass::Unchecked, label: label.into() }
    }

    pub fn sector(label: &str, angle: f64, f: impl Fn(C64) -> C64 + Send + Sync + 'static) -> Self {
        HolFn { eval: Arc::new(f), domain: Domain::Sector(angle), class: FnClass::Unchecked, label: label.into() }
    }

    pub fn constant(v: C64) -> Self {
        let mut h = Self::strip("constant", f64::INFINITY, move |_| v);
        h.class = FnClass::Bounded;
        h
    }

    /// Caller asserts boundedness on the declared domain.
    pub fn bounded(mut self) -> Self {
        if self.class == FnClass::Unchecked {
            self.class = FnClass::Bounded;
        }
        self
    }

    /// Tag as elementary after the diagnostics up to height `omega` pass.
    pub fn certify_elementary(mut self, omega: f64) -> Result<Self> {
        let d = elementary_diagnostics(&self, omega, &DiagnosticParams::default())?;
        if !d.is_elementary {
            return Err(Error::NotElementary(format!("{}: line integrals unstable under truncation doubling", self.label)));
        }
        self.class = FnClass::Elementary;
        Ok(self)
    }

    pub fn eval(&self, z: C64) -> C64 {
        (self.eval)(z)
    }

    pub fn class(&self) -> FnClass {
        self.class
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn strip_height(&self) -> f64 {
        match self.domain {
            Domain::Strip(h) => h,
            Domain::Sector(t) => t,
        }
    }

    pub fn evaluator(&self) -> Arc<dyn Fn(C64) -> C64 + Send + Sync> {
        self.eval.clone()
    }

    /// Pointwise product; the class is the weaker of the two, except that
    /// elementary times bounded stays elementary.
    pub fn mul(&self, other: &HolFn) -> HolFn {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        let class = match (self.class, other.class) {
            (FnClass::Unchecked, _) | (_, FnClass::Unchecked) => FnClass::Unchecked,
            (FnClass::Elementary, _) | (_, FnClass::Elementary) => FnClass::Elementary,
            _ => FnClass::Bounded,
        };
        let domain = match (self.domain, other.domain) {
            (Domain::Strip(x), Domain::Strip(y)) => Domain::Strip(x.min(y)),
            (Domain::Sector(x), Domain::Sector(y)) => Domain::Sector(x.min(y)),
            (d, _) => d,
        };
        HolFn { eval: Arc::new(move |z| a(z) * b(z)), domain, class, label: format!("{}*{}", self.label, other.label) }
    }

    /// z -> f(e^z): the strip function attached to a sector function.
    pub fn compose_exp(&self) -> HolFn {
        let f = self.eval.clone();
        HolFn {
            eval: Arc::new(move |z| f(z.exp())),
            domain: Domain::Strip(self.strip_height()),
            class: if self.class == FnClass::Elementary { FnClass::Bounded } else { self.class },
            label: format!("{}(exp)", self.label),
        }
    }
}

/// Regularizer e_n(z) = exp(-z^2 / n).
pub fn regularizer(n: f64) -> HolFn {
    let mut h = HolFn::strip("e_n", f64::INFINITY, move |z| (-(z * z) / n).exp());
    h.class = FnClass::Elementary;
    h
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum CalcMethod {
    Elementary,
    Regularized { n: f64 },
    GaussCauchy,
}

impl CalcMethod {
    pub fn regularized() -> Self {
        CalcMethod::Regularized { n: DEFAULT_REG_N }
    }
}

/// Contour choices; unset fields get method-dependent defaults.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CalcOptions {
    /// Contour half-height w'.
    pub height: Option<f64>,
    /// Truncation of the lines (in the line coordinate, or in u for a sinh map).
    pub half_length: Option<f64>,
    pub step: Option<f64>,
    pub map: Option<LineMap>,
    /// Extra truncation beyond the spectrum for kernels with shifted mass.
    pub extra_length: f64,
}

impl CalcOptions {
    pub fn height(h: f64) -> Self {
        CalcOptions { height: Some(h), ..Default::default() }
    }
}

fn line_grid(contour_height: f64, half_length: f64, step: f64, map: LineMap) -> Result<Contour> {
    match map {
        LineMap::Uniform => Contour::strip(contour_height, half_length, step, false),
        LineMap::Sinh { .. } => {
            let n = ((2.0 * half_length / step).round() as usize).max(8) + 1;
            let grid = crate::grids::make_grid(
                MeasureTag::BoundaryStrip { omega: contour_height },
                &GridParams::strip(contour_height, half_length, n).with_map(map),
            )?;
            let mut k = grid.to_contour()?;
            for (seg, h) in k.segments.iter_mut().zip([-contour_height, contour_height]) {
                seg.kind = SegmentKind::HorizontalLine { height: h, from: f64::NEG_INFINITY, to: f64::INFINITY };
            }
            Ok(k)
        }
    }
}

/// Resolved contour geometry for a calculus call.
#[derive(Clone, Debug, Serialize)]
pub struct ContourPlan {
    pub height: f64,
    pub half_length: f64,
    pub step: f64,
    pub map: LineMap,
}

pub fn plan_contour(op: &StripOperator, fn_height: f64, method: CalcMethod, opts: &CalcOptions) -> Result<ContourPlan> {
    let w0 = op.omega0();
    let height = opts.height.unwrap_or_else(|| {
        let room = if fn_height.is_finite() { (fn_height - w0) / 2.0 } else { f64::INFINITY };
        w0 + room.min(0.5)
    });
    if height <= w0 + op.margin() * (1.0 - 1e-12) {
        return Err(Error::ContourTooClose { height, omega0: w0, margin: op.margin() });
    }
    if height >= fn_height {
        return Err(Error::Param(format!("contour height {height} outside the function strip {fn_height}")));
    }
    let d = (height - w0).min(fn_height - height);
    let r = op.real_extent();
    let (map, half_length, step) = match method {
        CalcMethod::Elementary => {
            let scale = 1.0 + r + opts.extra_length;
            let map = opts.map.unwrap_or(LineMap::Sinh { scale });
            match map {
                LineMap::Sinh { scale } => {
                    let u = opts.half_length.unwrap_or((1e9 / scale).asinh());
                    (map, u, opts.step.unwrap_or((0.1 * d / scale).min(0.05)))
                }
                LineMap::Uniform => (map, opts.half_length.unwrap_or(r + 12.0 + opts.extra_length), opts.step.unwrap_or((0.1 * d).min(0.05))),
            }
        }
        CalcMethod::Regularized { n } => {
            let map = opts.map.unwrap_or(LineMap::Uniform);
            (map, opts.half_length.unwrap_or(r + (40.0 * n).sqrt() + opts.extra_length), opts.step.unwrap_or((0.1 * d).min(0.05)))
        }
        CalcMethod::GaussCauchy => {
            let map = opts.map.unwrap_or(LineMap::Uniform);
            (map, opts.half_length.unwrap_or(r + height + 9.0 + opts.extra_length), opts.step.unwrap_or((0.1 * d).min(0.05)))
        }
    };
    Ok(ContourPlan { height, half_length, step, map })
}

/// Precomputed weighted resolvents W_k = dz_k/(2 pi i) M(z_k) for one
/// operator, method and contour; f(A) = post * sum_k f(z_k) W_k.
/// Reusing one instance across many functions is the resolvent cache.
#[derive(Clone)]
pub struct ContourCalculus {
    nodes: Vec<C64>,
    weights: Vec<CMatrix>,
    post: Option<CMatrix>,
    method: CalcMethod,
    plan: ContourPlan,
    dim: usize,
}

impl ContourCalculus {
    pub fn new(op: &StripOperator, fn_height: f64, method: CalcMethod, opts: &CalcOptions) -> Result<Self> {
        let plan = plan_contour(op, fn_height, method, opts)?;
        let contour = line_grid(plan.height, plan.half_length, plan.step, plan.map)?;
        Self::on_contour(op, &contour, method, plan)
    }

    fn on_contour(op: &StripOperator, contour: &Contour, method: CalcMethod, plan: ContourPlan) -> Result<Self> {
        let a = op.matrix();
        let n = a.rows();
        let pts = contour.points();
        let scale = 1.0 / (2.0 * PI * I);
        let mats: Vec<Result<(C64, CMatrix)>> = pts
            .par_iter()
            .map(|&(z, dz)| {
                let shifted = CMatrix::from_fn(n, n, |i, j| if i == j { z - a[(i, j)] } else { -a[(i, j)] });
                let r = inverse(&shifted)?;
                let w = dz * scale;
                let m = match method {
                    CalcMethod::Elementary => r.scale(w),
                    CalcMethod::Regularized { n: reg } => r.scale(w * (-(z * z) / reg).exp()),
                    CalcMethod::GaussCauchy => {
                        let sq = shifted.matmul(&shifted);
                        expm(&sq.scale_real(-1.0)).matmul(&r).scale(w)
                    }
                };
                Ok((z, m))
            })
            .collect();
        let mut nodes = Vec::with_capacity(mats.len());
        let mut weights = Vec::with_capacity(mats.len());
        for m in mats {
            let (z, w) = m?;
            nodes.push(z);
            weights.push(w);
        }
        let post = match method {
            CalcMethod::Regularized { .. } => {
                // e_n(A) by the elementary integral on the same contour: the
                // stored weights already carry the factor e_n(z_k)
                let mut e = CMatrix::zeros(n, n);
                for w in &weights {
                    e = &e + w;
                }
                Some(inverse(&e)?)
            }
            _ => None,
        };
        Ok(ContourCalculus { nodes, weights, post, method, plan, dim: n })
    }

    pub fn plan(&self) -> &ContourPlan {
        &self.plan
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[C64] {
        &self.nodes
    }

    pub fn method(&self) -> CalcMethod {
        self.method
    }

    pub fn apply(&self, f: &(dyn Fn(C64) -> C64 + Sync)) -> CMatrix {
        let n = self.dim;
        let mut acc = CMatrix::zeros(n, n);
        for (z, w) in self.nodes.iter().zip(&self.weights) {
            let fz = f(*z);
            if fz == c(0.0, 0.0) {
                continue;
            }
            acc = &acc + &w.scale(fz);
        }
        match &self.post {
            Some(p) => p.matmul(&acc),
            None => acc,
        }
    }

    /// Vectors W_k x for repeated evaluation of f(A) x.
    pub fn batch(&self, x: &CVector) -> BatchedCalculus {
        BatchedCalculus {
            nodes: self.nodes.clone(),
            wx: self.weights.iter().map(|w| w.matvec(x)).collect(),
            post: self.post.clone(),
            dim: self.dim,
        }
    }
}

/// f(A) x for many f with one resolvent sweep.
#[derive(Clone)]
pub struct BatchedCalculus {
    nodes: Vec<C64>,
    wx: Vec<CVector>,
    post: Option<CMatrix>,
    dim: usize,
}

impl BatchedCalculus {
    pub fn nodes(&self) -> &[C64] {
        &self.nodes
    }

    /// sum_k f(z_k) W_k x before the regularizer correction.
    pub fn raw(&self, f: impl Fn(C64) -> C64) -> CVector {
        let mut acc = CVector::zeros(self.dim);
        for (z, v) in self.nodes.iter().zip(&self.wx) {
            let fz = f(*z);
            if fz != c(0.0, 0.0) {
                acc.axpy(fz, v);
            }
        }
        acc
    }

    pub fn finish(&self, raw: &CVector) -> CVector {
        match &self.post {
            Some(p) => p.matvec(raw),
            None => raw.clone(),
        }
    }

    pub fn apply(&self, f: impl Fn(C64) -> C64) -> CVector {
        self.finish(&self.raw(f))
    }

    /// Evaluate values f(z_k) supplied by the caller in node order.
    pub fn apply_values(&self, vals: &[C64]) -> CVector {
        let mut acc = CVector::zeros(self.dim);
        for (fz, v) in vals.iter().zip(&self.wx) {
            if *fz != c(0.0, 0.0) {
                acc.axpy(*fz, v);
            }
        }
        self.finish(&acc)
    }
}

fn check_method(f: &HolFn, method: CalcMethod) -> Result<()> {
    if let Domain::Sector(_) = f.domain() {
        return Err(Error::Method("sector functions go through sector_calculus".into()));
    }
    if method == CalcMethod::Elementary && f.class() != FnClass::Elementary {
        return Err(Error::NotElementary(format!("{} is not tagged elementary", f.label())));
    }
    Ok(())
}

pub fn calculus_apply(f: &HolFn, op: &StripOperator, method: CalcMethod, opts: &CalcOptions) -> Result<CMatrix> {
    check_method(f, method)?;
    let calc = ContourCalculus::new(op, f.strip_height(), method, opts)?;
    let e = f.evaluator();
    Ok(calc.apply(&*e))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LawKind {
    Multiplicative,
    ResolventConsistency,
}

#[derive(Clone, Debug, Serialize)]
pub struct LawReport {
    pub kind: LawKind,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

pub const LAW_TOL: f64 = 1e-8;

/// Homomorphism checks. For resolvent consistency `g` is ignored and the
/// point `lambda` must lie outside the contour strip.
pub fn calculus_law_check(
    op: &StripOperator,
    f: &HolFn,
    g: &HolFn,
    kind: LawKind,
    lambda: C64,
    method: CalcMethod,
    opts: &CalcOptions,
) -> Result<LawReport> {
    check_method(f, method)?;
    let residual = match kind {
        LawKind::Multiplicative => {
            check_method(g, method)?;
            let h = f.strip_height().min(g.strip_height());
            let calc = ContourCalculus::new(op, h, method, opts)?;
            let (fe, ge) = (f.evaluator(), g.evaluator());
            let fg = calc.apply(&|z| fe(z) * ge(z));
            let prod = calc.apply(&*fe).matmul(&calc.apply(&*ge));
            fg.max_abs_diff(&prod) / prod.max_abs().max(1.0)
        }
        LawKind::ResolventConsistency => {
            let calc = ContourCalculus::new(op, f.strip_height(), method, opts)?;
            if lambda.im.abs() <= calc.plan().height {
                return Err(Error::Param("lambda must lie outside the contour strip".into()));
            }
            let fe = f.evaluator();
            let lhs = calc.apply(&|z| fe(z) / (lambda - z));
            let n = op.dim();
            let shifted = CMatrix::from_fn(n, n, |i, j| {
                let a = op.matrix()[(i, j)];
                if i == j {
                    lambda - a
                } else {
                    -a
                }
            });
            let rhs = calc.apply(&*fe).matmul(&inverse(&shifted)?);
            lhs.max_abs_diff(&rhs) / rhs.max_abs().max(1.0)
        }
    };
    Ok(LawReport { kind, residual, tol: LAW_TOL, pass: residual < LAW_TOL })
}

/// Sectorial matrix with its logarithm as a strip operator.
#[derive(Clone, Debug)]
pub struct SectorOperator {
    s: CMatrix,
    log: StripOperator,
}

impl SectorOperator {
    pub fn new(s: CMatrix) -> Result<Self> {
        let l = logm(&s)?;
        Ok(SectorOperator { s, log: StripOperator::new(l)? })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.s
    }

    /// log S; its strip type is the sector angle of S.
    pub fn log_strip(&self) -> &StripOperator {
        &self.log
    }

    pub fn angle(&self) -> f64 {
        self.log.omega0()
    }
}

/// f(S) = (f o exp)(log S), by the regularized strip calculus.
pub fn sector_calculus(s: &CMatrix, f: &HolFn, opts: &CalcOptions) -> Result<CMatrix> {
    let op = SectorOperator::new(s.clone())?;
    sector_calculus_op(&op, f, CalcMethod::regularized(), opts)
}

pub fn sector_calculus_op(op: &SectorOperator, f: &HolFn, method: CalcMethod, opts: &CalcOptions) -> Result<CMatrix> {
    let theta = match f.domain() {
        Domain::Sector(t) => t,
        Domain::Strip(_) => return Err(Error::Method("sector calculus needs a sector function".into())),
    };
    if op.angle() >= theta {
        return Err(Error::Param(format!("sector angle {} not inside the function sector {theta}", op.angle())));
    }
    let g = f.compose_exp();
    let calc = ContourCalculus::new(op.log_strip(), theta, method, opts)?;
    let e = g.evaluator();
    Ok(calc.apply(&*e))
}

/// P diag(f(lambda)) P^{-1}, the matrix oracle for diagonalizable A.
pub fn diagonal_oracle(a: &CMatrix, f: impl Fn(C64) -> C64) -> Result<(CMatrix, f64)> {
    let d = diagonalize(a)?;
    Ok((d.apply(f), d.cond))
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagnosticParams {
    pub heights: usize,
    pub truncation: f64,
    pub step_u: f64,
    pub closed_half_width: f64,
    pub closed_step: f64,
    pub derivative_radius: Option<f64>,
    pub profile_half_width: f64,
    pub profile_step: f64,
}

impl Default for DiagnosticParams {
    fn default() -> Self {
        DiagnosticParams {
            heights: 9,
            truncation: 1e3,
            step_u: 0.01,
            closed_half_width: 40.0,
            closed_step: 0.01,
            derivative_radius: None,
            profile_half_width: 40.0,
            profile_step: 0.02,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LineIntegral {
    pub height: f64,
    pub at_truncation: f64,
    pub at_double: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagnosticsReport {
    pub line_integrals: Vec<LineIntegral>,
    pub sup_bound: f64,
    pub boundary_integral: f64,
    /// (height, int |f| + |f'| + |f''| along the shifted line)
    pub w12_profile: Vec<(f64, f64)>,
    pub w12_sup: f64,
    pub is_elementary: bool,
}

/// int_{-T}^{T} |f(r + i s)| dr with a sinh-mapped trapezoid.
fn abs_line_integral(f: &HolFn, s: f64, t: f64, step_u: f64) -> f64 {
    let umax = t.asinh();
    let n = (2.0 * umax / step_u).ceil() as usize + 1;
    let h = 2.0 * umax / (n - 1) as f64;
    (0..n)
        .map(|k| {
            let u = -umax + h * k as f64;
            let w = if k == 0 || k == n - 1 { 0.5 * h } else { h };
            w * u.cosh() * f.eval(c(u.sinh(), s)).norm()
        })
        .sum()
}

/// Derivatives f' and f'' at z by the Cauchy formula on a circle.
pub fn cauchy_derivatives(f: &(dyn Fn(C64) -> C64 + Sync), z: C64, radius: f64) -> (C64, C64) {
    const M: usize = 32;
    let mut d1 = c(0.0, 0.0);
    let mut d2 = c(0.0, 0.0);
    for k in 0..M {
        let e = C64::from_polar(1.0, 2.0 * PI * k as f64 / M as f64);
        let v = f(z + e * radius);
        // f^(m)(z) = m!/(2 pi i) int f(w)/(w-z)^{m+1} dw, with dw = i r e dtheta
        d1 += v / (e * radius);
        d2 += v / (e * e * radius * radius);
    }
    (d1 / M as f64, d2 * 2.0 / M as f64)
}

pub fn elementary_diagnostics(f: &HolFn, omega: f64, p: &DiagnosticParams) -> Result<DiagnosticsReport> {
    let fh = f.strip_height();
    if !(omega > 0.0) || omega >= fh {
        return Err(Error::Param(format!("diagnostic height {omega} must lie in (0, {fh})")));
    }
    let nh = p.heights.max(2);
    let heights: Vec<f64> = (0..nh).map(|k| -omega + 2.0 * omega * k as f64 / (nh - 1) as f64).collect();
    let line_integrals: Vec<LineIntegral> = heights
        .par_iter()
        .map(|&s| LineIntegral {
            height: s,
            at_truncation: abs_line_integral(f, s, p.truncation, p.step_u),
            at_double: abs_line_integral(f, s, 2.0 * p.truncation, p.step_u),
        })
        .collect();
    let stable = line_integrals.iter().all(|l| {
        l.at_truncation.is_finite() && l.at_double.is_finite() && (l.at_double - l.at_truncation).abs() <= 0.01 * l.at_truncation.max(f64::MIN_POSITIVE)
    });
    let sup_bound = line_integrals.iter().map(|l| l.at_truncation).fold(0.0, f64::max);
    let closed = Contour::strip(omega, p.closed_half_width, p.closed_step, true)?;
    let boundary_integral = closed.integrate(|z| f.eval(z)).norm();
    let radius = p.derivative_radius.unwrap_or(if fh.is_finite() { ((fh - omega) / 2.0).min(0.25) } else { 0.25 });
    let e = f.evaluator();
    let n = (2.0 * p.profile_half_width / p.profile_step).round() as usize + 1;
    let w12_profile: Vec<(f64, f64)> = heights
        .par_iter()
        .map(|&s| {
            let total: f64 = (0..n)
                .map(|k| {
                    let t = -p.profile_half_width + p.profile_step * k as f64;
                    let w = if k == 0 || k == n - 1 { 0.5 * p.profile_step } else { p.profile_step };
                    let z = c(t, s);
                    let (d1, d2) = cauchy_derivatives(&*e, z, radius);
                    w * (e(z).norm() + d1.norm() + d2.norm())
                })
                .sum();
            (s, total)
        })
        .collect();
    let w12_sup = w12_profile.iter().map(|x| x.1).fold(0.0, f64::max);
    Ok(DiagnosticsReport { line_integrals, sup_bound, boundary_integral, w12_profile, w12_sup, is_elementary: stable })
}

/// Contour view used by other modules for scalar integrals over the strip
/// boundary with the same geometry as the matrix calculus.
pub fn strip_contour(plan: &ContourPlan) -> Result<Contour> {
    line_grid(plan.height, plan.half_length, plan.step, plan.map)
}

/// Boundary-strip grid as a contour for matrix calculus with an explicit
/// node set (used when kernel nodes and contour nodes must coincide).
pub fn calculus_on_grid(op: &StripOperator, grid: &DiscreteHilbert, method: CalcMethod) -> Result<ContourCalculus> {
    let height = match grid.tag() {
        MeasureTag::BoundaryStrip { omega } => omega,
        _ => return Err(Error::Grid("calculus contour must be a boundary-strip grid".into())),
    };
    if height <= op.omega0() + op.margin() {
        return Err(Error::ContourTooClose { height, omega0: op.omega0(), margin: op.margin() });
    }
    let contour = grid.to_contour()?;
    let plan = ContourPlan { height, half_length: f64::NAN, step: f64::NAN, map: LineMap::Uniform };
    ContourCalculus::on_contour(op, &contour, method, plan)
}

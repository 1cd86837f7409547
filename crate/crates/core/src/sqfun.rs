//! Square functions x -> [t -> f(t, A) x] realized as finite-rank operators
//! from the discretized Hilbert space into X: column j is sqrt(w_j) f(t_j, A) x.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gauss_gamma::{gamma_norm, trace_pairing, FiniteRankOp, GammaMethod, GammaNorm};
use crate::grids::{make_grid, DiscreteHilbert, GridParams, LineMap, MeasureTag};
use crate::numlin::{c, eigh, sech, CMatrix, CVector, NormSpec, C64};
use crate::strip_calc::{
    elementary_diagnostics, BatchedCalculus, CalcMethod, CalcOptions, ContourCalculus, DiagnosticParams, HolFn, SectorOperator,
    StripOperator,
};

type KernelEval = Arc<dyn Fn(C64, C64) -> C64 + Send + Sync>;

#[derive(Clone)]
pub enum KernelKind {
    /// psi(t + z)
    Shift(HolFn),
    /// psi(t e^z) on the logarithm of a sectorial matrix, i.e. psi(t S)
    Dilation(HolFn),
    /// e^{-isz} / cosh(omega s)
    GroupOrbit { omega: f64 },
    /// 1 / (lambda - z) for lambda on the boundary of St_omega
    ResolventBoundary { omega: f64 },
    Custom { label: String, height: f64, eval: KernelEval },
}

impl fmt::Debug for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl KernelKind {
    pub fn label(&self) -> String {
        match self {
            KernelKind::Shift(p) => format!("shift[{}]", p.label()),
            KernelKind::Dilation(p) => format!("dilation[{}]", p.label()),
            KernelKind::GroupOrbit { omega } => format!("group-orbit[{omega}]"),
            KernelKind::ResolventBoundary { omega } => format!("resolvent-boundary[{omega}]"),
            KernelKind::Custom { label, .. } => format!("custom[{label}]"),
        }
    }
}

/// Kernel f(t, z) together with the grid discretizing t.
#[derive(Clone, Debug)]
pub struct KernelFn {
    kind: KernelKind,
    grid: DiscreteHilbert,
}

impl KernelFn {
    pub fn new(kind: KernelKind, grid: DiscreteHilbert) -> Result<Self> {
        let tag = grid.tag();
        let ok = match &kind {
            KernelKind::Shift(_) | KernelKind::GroupOrbit { .. } => tag == MeasureTag::LebesgueLine,
            KernelKind::Dilation(_) => tag == MeasureTag::MultHaar,
            KernelKind::ResolventBoundary { omega } => tag == MeasureTag::BoundaryStrip { omega: *omega },
            KernelKind::Custom { .. } => true,
        };
        if !ok {
            return Err(Error::Grid(format!("{} cannot live on a {:?} grid", kind.label(), tag)));
        }
        if let KernelKind::Dilation(p) = &kind {
            if !matches!(p.domain(), crate::strip_calc::Domain::Sector(_)) {
                return Err(Error::Param("dilation kernels need a sector function".into()));
            }
        }
        Ok(KernelFn { kind, grid })
    }

    pub fn shift(psi: HolFn, grid: DiscreteHilbert) -> Result<Self> {
        Self::new(KernelKind::Shift(psi), grid)
    }

    pub fn dilation(psi: HolFn, grid: DiscreteHilbert) -> Result<Self> {
        Self::new(KernelKind::Dilation(psi), grid)
    }

    /// Group orbit kernel on [-14/omega, 14/omega], where sech^2 is below 1e-11.
    pub fn group_orbit(omega: f64) -> Result<Self> {
        let half = 14.0 / omega;
        let count = (2.0 * half / (0.05 / omega)).round() as usize + 1;
        Self::new(KernelKind::GroupOrbit { omega }, DiscreteHilbert::lebesgue_line(half, count)?)
    }

    /// Resolvent kernel on a sinh-mapped boundary grid reaching |Re lambda| ~ 1e8.
    pub fn resolvent_boundary(omega: f64, spectral_extent: f64) -> Result<Self> {
        let scale = omega.max(1.0);
        let u = (1e8 / scale).asinh();
        let hu = (0.2 * omega / (scale + spectral_extent)).min(0.02);
        let count = (2.0 * u / hu).round() as usize + 1;
        let grid = make_grid(
            MeasureTag::BoundaryStrip { omega },
            &GridParams::strip(omega, u, count).with_map(LineMap::Sinh { scale }),
        )?;
        Self::new(KernelKind::ResolventBoundary { omega }, grid)
    }

    pub fn custom(label: &str, height: f64, grid: DiscreteHilbert, eval: impl Fn(C64, C64) -> C64 + Send + Sync + 'static) -> Self {
        KernelFn { kind: KernelKind::Custom { label: label.into(), height, eval: Arc::new(eval) }, grid }
    }

    pub fn kind(&self) -> &KernelKind {
        &self.kind
    }

    pub fn grid(&self) -> &DiscreteHilbert {
        &self.grid
    }

    pub fn label(&self) -> String {
        self.kind.label()
    }

    /// Half-height of the strip (in the calculus variable) where every
    /// z -> f(t, z) is bounded and holomorphic.
    pub fn height(&self) -> f64 {
        match &self.kind {
            KernelKind::Shift(p) | KernelKind::Dilation(p) => p.strip_height(),
            KernelKind::GroupOrbit { omega } | KernelKind::ResolventBoundary { omega } => *omega,
            KernelKind::Custom { height, .. } => *height,
        }
    }

    pub fn value(&self, t: C64, z: C64) -> C64 {
        match &self.kind {
            KernelKind::Shift(p) => p.eval(t + z),
            KernelKind::Dilation(p) => p.eval(t * z.exp()),
            KernelKind::GroupOrbit { omega } => (c(0.0, -t.re) * z).exp() / (omega * t.re).cosh(),
            KernelKind::ResolventBoundary { .. } => 1.0 / (t - z),
            KernelKind::Custom { eval, .. } => eval(t, z),
        }
    }

    /// Coordinates sqrt(w_j) f(t_j, z) of z -> f(., z) in the grid space.
    pub fn coords_at(&self, z: C64) -> Vec<C64> {
        self.grid.nodes().iter().zip(self.grid.sqrt_weights()).map(|(t, s)| self.value(*t, z) * s).collect()
    }
}

/// Lebesgue line grid on [-half_width, half_width] with the given step.
pub fn line_grid(half_width: f64, step: f64) -> Result<DiscreteHilbert> {
    DiscreteHilbert::lebesgue_line(half_width, (2.0 * half_width / step).round() as usize + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    Primal,
    Dual,
}

#[derive(Clone, Debug, Default)]
pub struct SqfOptions {
    pub method: Option<CalcMethod>,
    pub calc: CalcOptions,
}

impl SqfOptions {
    fn method(&self) -> CalcMethod {
        self.method.unwrap_or_else(CalcMethod::regularized)
    }
}

#[derive(Clone, Debug)]
pub struct SqfOutput {
    pub op: FiniteRankOp,
    pub side: Side,
    pub kernel: String,
    pub digest: String,
    pub nodes: Vec<C64>,
}

impl SqfOutput {
    pub fn matrix(&self) -> &CMatrix {
        &self.op.matrix
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let m = self.matrix();
        let mut w = csv::Writer::from_path(path)?;
        let mut header = vec!["t_re".to_string(), "t_im".to_string()];
        for i in 0..m.rows() {
            header.push(format!("re_{i}"));
            header.push(format!("im_{i}"));
        }
        w.write_record(&header)?;
        for (j, t) in self.nodes.iter().enumerate() {
            let mut row = vec![t.re.to_string(), t.im.to_string()];
            for i in 0..m.rows() {
                row.push(m[(i, j)].re.to_string());
                row.push(m[(i, j)].im.to_string());
            }
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn side_operator(op: &StripOperator, side: Side) -> Result<StripOperator> {
    match side {
        Side::Primal => Ok(op.clone()),
        Side::Dual => op.transpose(),
    }
}

fn assemble(k: &KernelFn, batch: &BatchedCalculus, dim: usize) -> CMatrix {
    let nodes = k.grid().nodes();
    let sw = k.grid().sqrt_weights();
    let cols: Vec<CVector> = nodes.par_iter().zip(sw.par_iter()).map(|(t, s)| batch.apply(|z| k.value(*t, z)).scale(c(*s, 0.0))).collect();
    if cols.is_empty() {
        return CMatrix::zeros(dim, 0);
    }
    CMatrix::from_columns(&cols).expect("columns share the vector dimension")
}

/// Square function matrix of `k` at x. For dilation kernels `op` is the
/// logarithm of the sectorial matrix (see `sqfun_matrix_sector`). The dual
/// side evaluates the transposed calculus f(t, A)' x' = f(t, A^T) x'.
pub fn sqfun_matrix(k: &KernelFn, op: &StripOperator, v: &CVector, side: Side, opts: &SqfOptions) -> Result<SqfOutput> {
    if v.dim() != op.dim() {
        return Err(Error::Dimension(format!("vector of dim {} for a {}x{} operator", v.dim(), op.dim(), op.dim())));
    }
    let a = side_operator(op, side)?;
    let calc = ContourCalculus::new(&a, k.height(), opts.method(), &opts.calc)?;
    let batch = calc.batch(v);
    let m = assemble(k, &batch, v.dim());
    Ok(SqfOutput {
        op: FiniteRankOp::hilbert(m),
        side,
        kernel: k.label(),
        digest: op.digest(),
        nodes: k.grid().nodes().to_vec(),
    })
}

pub fn sqfun_matrix_sector(k: &KernelFn, s: &SectorOperator, v: &CVector, side: Side, opts: &SqfOptions) -> Result<SqfOutput> {
    sqfun_matrix(k, s.log_strip(), v, side, opts)
}

pub fn sqfun_norm(s: &SqfOutput, norm: &NormSpec, method: GammaMethod) -> Result<GammaNorm> {
    let op = FiniteRankOp::new(s.op.matrix.clone(), norm.clone())?;
    gamma_norm(&op, method)
}

/// Hilbert square function norm ||Phi(f) x||_HS.
pub fn sqfun_hs(s: &SqfOutput) -> f64 {
    s.op.matrix.frobenius()
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub kind: String,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub tol: f64,
    /// Subordination only: ||Phi(T'g)x|| / ||Phi(g)x|| against ||T||.
    pub norm_ratio: Option<(f64, f64)>,
    pub pass: bool,
}

pub enum Equivalence<'a> {
    /// T maps grid coordinates of the new space into those of `kernel`'s grid.
    Subordination { kernel: &'a KernelFn, t: &'a CMatrix },
    /// psi(t + z) with psi = (pi/omega) sech(pi z / 2 omega) against the group orbit.
    Fourier { omega: f64 },
    /// f(t, z) g(s, z) on the product grid against the nested square function.
    Tensor { first: &'a KernelFn, second: &'a KernelFn },
}

pub const SUBORDINATION_TOL: f64 = 1e-9;
pub const FOURIER_TOL: f64 = 1e-5;
pub const TENSOR_TOL: f64 = 1e-8;

/// Kernel psi(t + z) whose profile is the Fourier pair of the group orbit.
pub fn fourier_shift_kernel(omega: f64, spectral_extent: f64) -> Result<KernelFn> {
    let a = PI / (2.0 * omega);
    let psi = HolFn::strip("(pi/w)sech(pi z/2w)", omega, move |z| (PI / omega) * sech(a * z)).bounded();
    // sech^2 tail e^{-2a|t|} below 1e-14
    let half = 16.0 / a + spectral_extent;
    KernelFn::shift(psi, line_grid(half, 0.02 / a)?)
}

pub fn equivalence_check(kind: Equivalence<'_>, op: &StripOperator, x: &CVector, opts: &SqfOptions) -> Result<EquivalenceReport> {
    match kind {
        Equivalence::Subordination { kernel, t } => {
            let mk = kernel.grid().len();
            if t.rows() != mk {
                return Err(Error::Dimension(format!("T has {} rows, kernel grid has {mk} nodes", t.rows())));
            }
            let original = sqfun_matrix(kernel, op, x, Side::Primal, opts)?;
            let sub = subordinated_kernel(kernel, t);
            let direct = sqfun_matrix(&sub, op, x, Side::Primal, opts)?;
            let composed = original.matrix().matmul(t);
            let scale = composed.max_abs().max(1e-300);
            let residual = direct.matrix().max_abs_diff(&composed) / scale.max(1.0);
            let (ln, rn) = (sqfun_hs(&direct), sqfun_hs(&original));
            let tnorm = crate::numlin::svd(t)?.s.first().copied().unwrap_or(0.0);
            let ratio_ok = ln <= tnorm * rn * (1.0 + 1e-12) + 1e-15;
            Ok(EquivalenceReport {
                kind: "subordination".into(),
                lhs: ln,
                rhs: rn,
                residual,
                tol: SUBORDINATION_TOL,
                norm_ratio: Some((if rn > 0.0 { ln / rn } else { 0.0 }, tnorm)),
                pass: residual < SUBORDINATION_TOL && ratio_ok,
            })
        }
        Equivalence::Fourier { omega } => {
            if op.omega0() + op.margin() >= omega {
                return Err(Error::Param(format!("strip type {} too large for omega = {omega}", op.omega0())));
            }
            let shift = fourier_shift_kernel(omega, op.real_extent())?;
            let orbit = KernelFn::group_orbit(omega)?;
            let a = sqfun_hs(&sqfun_matrix(&shift, op, x, Side::Primal, opts)?);
            let b = (2.0 * PI).sqrt() * sqfun_hs(&sqfun_matrix(&orbit, op, x, Side::Primal, opts)?);
            let residual = (a - b).abs() / b.max(1e-300);
            Ok(EquivalenceReport { kind: "fourier".into(), lhs: a, rhs: b, residual, tol: FOURIER_TOL, norm_ratio: None, pass: residual < FOURIER_TOL })
        }
        Equivalence::Tensor { first, second } => {
            for k in [first, second] {
                if k.grid().nodes().iter().any(|t| t.im != 0.0) {
                    return Err(Error::Grid("tensor check needs real-node grids".into()));
                }
            }
            let product = DiscreteHilbert::product(first.grid(), second.grid());
            let (f1, f2) = (first.clone(), second.clone());
            let height = first.height().min(second.height());
            let tensor = KernelFn::custom("tensor", height, product, move |t, z| f1.value(c(t.re, 0.0), z) * f2.value(c(t.im, 0.0), z));
            let direct = sqfun_hs(&sqfun_matrix(&tensor, op, x, Side::Primal, opts)?);
            let inner = sqfun_matrix(second, op, x, Side::Primal, opts)?;
            let m = inner.matrix();
            let mut total = 0.0;
            for j in 0..m.cols() {
                let col = m.column(j);
                total += sqfun_hs(&sqfun_matrix(first, op, &col, Side::Primal, opts)?).powi(2);
            }
            let nested = total.sqrt();
            let residual = (direct - nested).abs() / nested.max(1e-300);
            Ok(EquivalenceReport { kind: "tensor".into(), lhs: direct, rhs: nested, residual, tol: TENSOR_TOL, norm_ratio: None, pass: residual < TENSOR_TOL })
        }
    }
}

/// (T' o g)(z) on the coordinate basis of the new space: entry i is
/// sum_j T_ji sqrt(w_j) g(t_j, z).
pub fn subordinated_kernel(g: &KernelFn, t: &CMatrix) -> KernelFn {
    let g = g.clone();
    let t = t.clone();
    let sw = g.grid().sqrt_weights();
    let nodes = g.grid().nodes().to_vec();
    let height = g.height();
    KernelFn::custom("subordinated", height, DiscreteHilbert::abstract_basis(t.cols()), move |ti, z| {
        let i = ti.re as usize;
        nodes.iter().zip(&sw).enumerate().map(|(j, (tj, s))| t[(j, i)] * g.value(*tj, z) * *s).sum()
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DualityBounds {
    /// ||x|| <= lower_constant * ||Phi(g) x||
    pub lower_constant: f64,
    /// ||Phi(g) x|| <= upper_constant * ||x||
    pub upper_constant: f64,
    pub sqfun: f64,
    pub vector_norm: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingReport {
    pub lhs: C64,
    pub rhs: C64,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
    pub normalized: bool,
    pub duality: Option<DualityBounds>,
}

pub const PAIRING_TOL: f64 = 1e-8;

/// Largest singular value of x -> Phi(f) x on Hilbert X, from the Gram
/// matrix sum_j w_j f(t_j, A)* f(t_j, A).
fn sqfun_operator_norm(k: &KernelFn, op: &StripOperator, side: Side, opts: &SqfOptions) -> Result<f64> {
    let d = op.dim();
    let cols: Vec<CMatrix> = (0..d)
        .map(|i| sqfun_matrix(k, op, &CVector::basis(d, i), side, opts).map(|s| s.op.matrix))
        .collect::<Result<_>>()?;
    let gram = CMatrix::from_fn(d, d, |i, j| cols[i].as_slice().iter().zip(cols[j].as_slice()).map(|(a, b)| a.conj() * b).sum());
    let e = eigh(&gram)?;
    Ok(e.values.first().copied().unwrap_or(0.0).max(0.0).sqrt())
}

/// <Phi(<f,g>) x, x'> against the trace pairing of Phi(g) x and Phi'(f) x'.
pub fn pairing_identity_check(f: &KernelFn, g: &KernelFn, op: &StripOperator, x: &CVector, xd: &CVector, opts: &SqfOptions) -> Result<PairingReport> {
    if f.grid().nodes() != g.grid().nodes() || f.grid().weights() != g.grid().weights() {
        return Err(Error::Grid("pairing needs a shared grid".into()));
    }
    let grid = f.grid().clone();
    let (fc, gc) = (f.clone(), g.clone());
    let contracted = move |z: C64| -> C64 {
        grid.nodes().iter().zip(grid.weights()).map(|(t, w)| fc.value(*t, z) * gc.value(*t, z) * *w).sum()
    };
    let height = f.height().min(g.height());
    let calc = ContourCalculus::new(op, height, opts.method(), &opts.calc)?;
    let lhs = CVector::new(xd.as_slice().to_vec()).dot(&calc.batch(x).apply(&contracted));
    let pg = sqfun_matrix(g, op, x, Side::Primal, opts)?;
    let pf = sqfun_matrix(f, op, xd, Side::Dual, opts)?;
    let rhs = trace_pairing(&pg.op, &pf.op)?;
    let residual = (lhs - rhs).norm() / lhs.norm().max(1.0);
    let h = calc.plan().height;
    let probes = [c(0.0, 0.0), c(0.7, 0.3 * h), c(-1.3, -0.5 * h), c(2.1, 0.8 * h)];
    let normalized = probes.iter().all(|z| (contracted(*z) - 1.0).norm() < 1e-8);
    let duality = if normalized {
        let upper = sqfun_operator_norm(g, op, Side::Primal, opts)?;
        let dual = sqfun_operator_norm(f, op, Side::Dual, opts)?;
        let sq = sqfun_hs(&pg);
        let nx = x.norm2();
        let slack = 1e-9 * nx.max(1.0);
        Some(DualityBounds {
            lower_constant: dual,
            upper_constant: upper,
            sqfun: sq,
            vector_norm: nx,
            pass: nx <= dual * sq + slack && sq <= upper * nx + slack,
        })
    } else {
        None
    };
    let pass = residual < PAIRING_TOL && duality.as_ref().is_none_or(|d| d.pass);
    Ok(PairingReport { lhs, rhs, residual, tol: PAIRING_TOL, pass, normalized, duality })
}

/// f = (omega/2) e^{-isz} sech(omega s), g = e^{isz} sech(omega s); <f,g> = 1.
pub fn normalized_orbit_pair(omega: f64) -> Result<(KernelFn, KernelFn)> {
    let base = KernelFn::group_orbit(omega)?;
    let grid = base.grid().clone();
    let f = KernelFn::custom("orbit/normalizer", omega, grid.clone(), move |s, z| {
        0.5 * omega * (c(0.0, -s.re) * z).exp() / (omega * s.re).cosh()
    });
    let g = KernelFn::custom("orbit-conjugate", omega, grid, move |s, z| (c(0.0, s.re) * z).exp() / (omega * s.re).cosh());
    Ok((f, g))
}

#[derive(Clone, Debug, Serialize)]
pub struct RepresentationReport {
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

pub const REPRESENTATION_TOL: f64 = 1e-7;

/// u(z) = sum_j w_j m_j f(t_j, z) g(t_j, z): u(A) x against
/// sum_j w_j m_j f(t_j, A) g(t_j, A) x.
pub fn integral_representation_check(f: &KernelFn, g: &KernelFn, m: &[C64], op: &StripOperator, x: &CVector, opts: &SqfOptions) -> Result<RepresentationReport> {
    let grid = f.grid();
    if grid.len() != m.len() || g.grid().nodes() != grid.nodes() {
        return Err(Error::Grid("representation needs a shared grid and one multiplier per node".into()));
    }
    let calc = ContourCalculus::new(op, f.height().min(g.height()), opts.method(), &opts.calc)?;
    let nodes = grid.nodes().to_vec();
    let w = grid.weights().to_vec();
    let direct = calc.batch(x).apply(|z| nodes.iter().zip(&w).zip(m).map(|((t, wj), mj)| f.value(*t, z) * g.value(*t, z) * *wj * *mj).sum());
    let gb = calc.batch(x);
    let terms: Vec<CVector> = nodes
        .par_iter()
        .zip(w.par_iter())
        .zip(m.par_iter())
        .map(|((t, wj), mj)| {
            let gx = gb.apply(|z| g.value(*t, z));
            calc.batch(&gx).apply(|z| f.value(*t, z)).scale(*mj * *wj)
        })
        .collect();
    let mut sum = CVector::zeros(x.dim());
    for t in &terms {
        sum.axpy(c(1.0, 0.0), t);
    }
    let residual = direct.max_abs_diff(&sum) / direct.norm2().max(1.0);
    Ok(RepresentationReport { residual, tol: REPRESENTATION_TOL, pass: residual < REPRESENTATION_TOL })
}

#[derive(Clone, Debug, Serialize)]
pub struct McIntoshResult {
    pub vector: CVector,
    pub constant: C64,
}

/// int_0^inf phi(tS) psi(tS) x dt/t on a log grid, with c = int phi psi dt/t.
pub fn mcintosh_reconstruct(phi: &HolFn, psi: &HolFn, s: &CMatrix, x: &CVector, range: (f64, f64), step: f64) -> Result<McIntoshResult> {
    let prod = phi.mul(psi);
    let theta = prod.strip_height();
    let probe = prod.compose_exp();
    let params = DiagnosticParams { heights: 5, truncation: 40.0, step_u: 0.02, profile_half_width: 5.0, profile_step: 0.1, ..Default::default() };
    let diag = elementary_diagnostics(&probe, 0.5 * theta, &params)?;
    if !diag.is_elementary {
        return Err(Error::NotElementary("normalizer integral diverges".into()));
    }
    let count = ((range.1.ln() - range.0.ln()) / step).round() as usize + 1;
    let grid = DiscreteHilbert::mult_haar(range.0, range.1, count)?;
    let sop = SectorOperator::new(s.clone())?;
    let kernel = KernelFn::dilation(prod.clone(), grid.clone())?;
    let calc = ContourCalculus::new(sop.log_strip(), theta, CalcMethod::regularized(), &CalcOptions::default())?;
    let batch = calc.batch(x);
    let raws: Vec<CVector> = grid.nodes().par_iter().map(|t| batch.raw(|z| kernel.value(*t, z))).collect();
    let mut acc = CVector::zeros(x.dim());
    for (r, w) in raws.iter().zip(grid.weights()) {
        acc.axpy(c(*w, 0.0), r);
    }
    let vector = batch.finish(&acc);
    let constant = grid.nodes().iter().zip(grid.weights()).map(|(t, w)| prod.eval(*t) * *w).sum();
    Ok(McIntoshResult { vector, constant })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strip_calc::calculus_apply;

    fn gauss_psi() -> HolFn {
        HolFn::strip("exp(-z^2)", f64::INFINITY, |z| (-z * z).exp()).bounded()
    }

    #[test]
    fn shift_columns_and_norm() {
        for a in [0.0, 0.7, -2.0] {
            let k = KernelFn::shift(gauss_psi(), line_grid(12.0, 0.05).unwrap()).unwrap();
            let op = StripOperator::new(CMatrix::diag_real(&[a])).unwrap();
            let s = sqfun_matrix(&k, &op, &CVector::from_real(&[1.0]), Side::Primal, &SqfOptions::default()).unwrap();
            let sw = k.grid().sqrt_weights();
            for (j, t) in k.grid().nodes().iter().enumerate() {
                let want = (-(t.re + a).powi(2)).exp() * sw[j];
                assert!((s.matrix()[(0, j)] - want).norm() < 1e-10);
            }
            assert!((sqfun_hs(&s) - (PI / 2.0).powf(0.25)).abs() < 1e-9);
        }
    }

    #[test]
    fn column_matches_direct_calculus() {
        let a = CMatrix::from_fn(3, 3, |i, j| c(0.3 * i as f64 - 0.2 * j as f64, if i == j { 0.05 } else { 0.02 }));
        let op = StripOperator::new(a).unwrap();
        let k = KernelFn::shift(gauss_psi(), line_grid(6.0, 0.5).unwrap()).unwrap();
        let x = CVector::from_real(&[1.0, -0.5, 0.25]);
        let s = sqfun_matrix(&k, &op, &x, Side::Primal, &SqfOptions::default()).unwrap();
        let sw = k.grid().sqrt_weights();
        for j in [0, 5, 12] {
            let t = k.grid().nodes()[j].re;
            let f = HolFn::strip("shifted", f64::INFINITY, move |z| (-(z + t) * (z + t)).exp()).bounded();
            let m = calculus_apply(&f, &op, CalcMethod::regularized(), &CalcOptions::default()).unwrap();
            let col = m.matvec(&x).scale(c(sw[j], 0.0));
            let got = s.matrix().column(j);
            assert!(got.max_abs_diff(&col) < 1e-9);
        }
    }

    #[test]
    fn group_orbit_closed_form() {
        for omega in [0.5, 1.0, 2.0] {
            let k = KernelFn::group_orbit(omega).unwrap();
            let op = StripOperator::new(CMatrix::diag_real(&[0.4, -1.1])).unwrap();
            let x = CVector::from_real(&[0.6, 0.8]);
            let s = sqfun_matrix(&k, &op, &x, Side::Primal, &SqfOptions::default()).unwrap();
            assert!((sqfun_hs(&s) - (2.0 / omega).sqrt()).abs() < 1e-7, "{omega}: {}", sqfun_hs(&s));
        }
    }

    #[test]
    fn resolvent_boundary_closed_form() {
        let omega = 1.0;
        let k = KernelFn::resolvent_boundary(omega, 1.0).unwrap();
        let op = StripOperator::new(CMatrix::diag_real(&[0.5, -1.0])).unwrap();
        let x = CVector::from_real(&[0.6, 0.8]);
        let s = sqfun_matrix(&k, &op, &x, Side::Primal, &SqfOptions::default()).unwrap();
        let want = (2.0 * PI / omega).sqrt();
        assert!((sqfun_hs(&s) - want).abs() < 1e-6, "{} vs {}", sqfun_hs(&s), want);
        let sw = k.grid().sqrt_weights();
        let j = k.grid().len() / 3;
        let lam = k.grid().nodes()[j];
        assert!((s.matrix()[(0, j)] - 0.6 * sw[j] / (lam - 0.5)).norm() < 1e-10);
    }

    #[test]
    fn fourier_equivalence_on_nonnormal() {
        let a = CMatrix::from_fn(2, 2, |i, j| if i == j { c(0.3 - i as f64, 0.1) } else { c(0.4, 0.0) });
        let op = StripOperator::new(a).unwrap();
        let x = CVector::from_real(&[1.0, 0.5]);
        let r = equivalence_check(Equivalence::Fourier { omega: 1.0 }, &op, &x, &SqfOptions::default()).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn subordination_identity() {
        let k = KernelFn::shift(gauss_psi(), line_grid(5.0, 0.25).unwrap()).unwrap();
        let m = k.grid().len();
        let t = CMatrix::from_fn(m, 3, |i, j| c(((i * 7 + j * 3) % 5) as f64 * 0.1, 0.05 * j as f64));
        let op = StripOperator::new(CMatrix::diag_real(&[0.2, -0.3])).unwrap();
        let x = CVector::from_real(&[1.0, 2.0]);
        let r = equivalence_check(Equivalence::Subordination { kernel: &k, t: &t }, &op, &x, &SqfOptions::default()).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn pairing_normalized_orbit() {
        let (f, g) = normalized_orbit_pair(1.0).unwrap();
        let op = StripOperator::new(CMatrix::diag_real(&[0.3, -0.8])).unwrap();
        let x = CVector::from_real(&[0.6, 0.8]);
        let r = pairing_identity_check(&f, &g, &op, &x, &x.conj(), &SqfOptions::default()).unwrap();
        assert!(r.pass && r.normalized, "{r:?}");
        assert!((r.lhs - 1.0).norm() < 1e-6);
    }

    #[test]
    fn mcintosh_half() {
        let phi = HolFn::sector("sqrt(z)exp(-z)", PI / 2.0, |z| z.sqrt() * (-z).exp());
        let s = CMatrix::diag_real(&[1.0, 3.0]);
        let x = CVector::from_real(&[1.0, 1.0]);
        let r = mcintosh_reconstruct(&phi, &phi, &s, &x, (1e-9, 50.0), 0.05).unwrap();
        assert!((r.constant - 0.5).norm() < 1e-6, "{}", r.constant);
        assert!(r.vector.max_abs_diff(&x.scale(c(0.5, 0.0))) < 1e-6, "{:?}", r.vector);
    }
}

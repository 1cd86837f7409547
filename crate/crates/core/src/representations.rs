//! Integral representations u(z) = int m(t) f(t, z) g(t, z) dt as numerical
//! reconstruction engines: Cauchy-Gauss, Poisson, Laplace (keyhole inversion),
//! the singular Cauchy operator T_f, and the exponent improvement identities.

use std::f64::consts::PI;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use statrs::function::beta::beta;

use crate::error::{Error, Result};
use crate::grids::{discrete_fourier, keyhole_contour, make_grid, pv_matrix, Contour, DiscreteHilbert, GridParams, MeasureTag, PvRule};
use crate::numlin::{c, expm, inverse, sech, CMatrix, CVector, C64, I};
use crate::strip_calc::{calculus_apply, plan_contour, strip_contour, CalcMethod, CalcOptions, Domain, HolFn, StripOperator};

#[derive(Clone, Debug, Serialize)]
pub struct MultiplierProfile {
    pub t: Vec<f64>,
    pub m: Vec<C64>,
    pub sup: f64,
    /// (2^{a+b} / 2 pi) int_Gamma e^{Re z} |z|^{-(a+b)} |dz| * ||u||_inf
    pub bound: f64,
}

impl MultiplierProfile {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["t", "re_m", "im_m"])?;
        for (t, m) in self.t.iter().zip(&self.m) {
            w.write_record([t.to_string(), m.re.to_string(), m.im.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReprReport {
    pub method: String,
    pub points: Vec<C64>,
    pub values: Vec<C64>,
    pub reference: Vec<C64>,
    pub max_error: f64,
    pub multiplier: Option<MultiplierProfile>,
}

impl ReprReport {
    fn new(method: &str, points: &[C64], values: Vec<C64>, u: &HolFn, multiplier: Option<MultiplierProfile>) -> Self {
        let reference: Vec<C64> = points.iter().map(|z| u.eval(*z)).collect();
        let max_error = values.iter().zip(&reference).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        ReprReport { method: method.into(), points: points.to_vec(), values, reference, max_error, multiplier }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LaplaceParams {
    pub alpha: f64,
    pub beta: f64,
    /// keyhole half-angle, in (pi/2, sector of u)
    pub omega: f64,
    pub outer_radius: f64,
    pub nodes_per_piece: usize,
    pub t_range: (f64, f64),
    pub t_step: f64,
}

impl LaplaceParams {
    pub fn new(alpha: f64, beta: f64) -> Self {
        LaplaceParams { alpha, beta, omega: 0.75 * PI, outer_radius: 60.0, nodes_per_piece: 401, t_range: (1e-5, 40.0), t_step: 0.02 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub enum ReprMethod {
    GaussCauchy { omega: f64, half_length: f64, step: f64 },
    Poisson { omega: f64, half_length: f64, step: f64 },
    Laplace(LaplaceParams),
}

impl ReprMethod {
    pub fn gauss_cauchy(omega: f64) -> Self {
        ReprMethod::GaussCauchy { omega, half_length: 10.0, step: 0.01 }
    }

    pub fn poisson(omega: f64) -> Self {
        ReprMethod::Poisson { omega, half_length: 25.0 * omega, step: 0.02 }
    }
}

fn require_strip(u: &HolFn, omega: f64, z: &[C64]) -> Result<()> {
    match u.domain() {
        Domain::Strip(h) if h > omega => {}
        _ => return Err(Error::Param(format!("{} must be holomorphic on a strip wider than {omega}", u.label()))),
    }
    if let Some(p) = z.iter().find(|p| p.im.abs() >= omega) {
        return Err(Error::Param(format!("point {p} outside the strip of half-height {omega}")));
    }
    Ok(())
}

pub fn reconstruct(method: &ReprMethod, u: &HolFn, z: &[C64]) -> Result<ReprReport> {
    match method {
        ReprMethod::GaussCauchy { omega, half_length, step } => {
            require_strip(u, *omega, z)?;
            let reach = z.iter().map(|p| p.re.abs()).fold(0.0, f64::max);
            let contour = Contour::strip(*omega, half_length + reach, *step, false)?;
            let pts = contour.points();
            let uw: Vec<C64> = pts.iter().map(|(w, _)| u.eval(*w)).collect();
            let values = z
                .par_iter()
                .map(|&p| {
                    let s: C64 = pts
                        .iter()
                        .zip(&uw)
                        .map(|((w, dz), uv)| {
                            let d = w - p;
                            uv * (-(d * d)).exp() / d * dz
                        })
                        .sum();
                    s / (2.0 * PI * I)
                })
                .collect();
            Ok(ReprReport::new("gauss-cauchy", z, values, u, None))
        }
        ReprMethod::Poisson { omega, half_length, step } => {
            require_strip(u, *omega, z)?;
            let reach = z.iter().map(|p| p.re.abs()).fold(0.0, f64::max);
            let grid = crate::sqfun::line_grid(half_length + reach, *step)?;
            let data: Vec<C64> = grid.nodes().iter().map(|s| u.eval(c(-s.re, *omega)) + u.eval(c(-s.re, -*omega))).collect();
            let a = PI / (2.0 * omega);
            let values = z
                .iter()
                .map(|&p| {
                    let s: C64 = grid
                        .nodes()
                        .iter()
                        .zip(grid.weights())
                        .zip(&data)
                        .map(|((s, w), m)| m * (a / (a * (p + s.re)).cosh()) * *w)
                        .sum();
                    s / (2.0 * PI)
                })
                .collect();
            Ok(ReprReport::new("poisson", z, values, u, None))
        }
        ReprMethod::Laplace(p) => laplace_reconstruct(p, u, z),
    }
}

/// Poisson kernel factors f(z) g(z) = (pi/2w)/cosh(pi z/2w) for alpha > omega.
/// The prefactor of g is pi/(2 alpha), which makes the product exact.
pub fn poisson_factors(omega: f64, alpha: f64, z: C64) -> (C64, C64) {
    let f = (alpha / omega) * (PI * z / (2.0 * alpha)).cosh() / (PI * z / (2.0 * omega)).cosh();
    let g = (PI / (2.0 * alpha)) * sech(PI * z / (2.0 * alpha));
    (f, g)
}

/// Max relative deviation of f g from the Poisson kernel over a line grid.
pub fn poisson_factorization_residual(omega: f64, alpha: f64, grid: &DiscreteHilbert) -> Result<f64> {
    if alpha <= omega {
        return Err(Error::Param("factorization needs alpha > omega".into()));
    }
    let k = |z: C64| (PI / (2.0 * omega)) * sech(PI * z / (2.0 * omega));
    Ok(grid
        .nodes()
        .iter()
        .map(|z| {
            let (f, g) = poisson_factors(omega, alpha, *z);
            let want = k(*z);
            (f * g - want).norm() / want.norm()
        })
        .fold(0.0, f64::max))
}

#[derive(Clone, Debug, Serialize)]
pub struct FourierPairReport {
    pub omega: f64,
    pub max_error: f64,
    /// Ratio to sech(omega t) of the same transform taken with the prefactor
    /// pi/(2 omega) instead of pi/omega; it is 1/2.
    pub half_prefactor_ratio: f64,
    pub edge_ok: bool,
    pub pass: bool,
}

pub const FOURIER_PAIR_TOL: f64 = 1e-6;

/// (1/2 pi) int (pi/omega) sech(pi s / 2 omega) e^{ist} ds = sech(omega t).
pub fn fourier_pair_check(omega: f64, grid: &DiscreteHilbert, t_points: &[f64]) -> Result<FourierPairReport> {
    let a = PI / (2.0 * omega);
    let g: Vec<C64> = grid.nodes().iter().map(|s| c((PI / omega) / (a * s.re).cosh(), 0.0)).collect();
    let peak = PI / omega;
    let out = discrete_fourier(grid, &g, t_points, 1e-10 * peak)?;
    let mut max_error: f64 = 0.0;
    let mut ratio = 0.0;
    for (v, t) in out.values.iter().zip(t_points) {
        let want = 1.0 / (omega * t).cosh();
        let val = v / (2.0 * PI);
        max_error = max_error.max((val - want).norm());
        ratio += (val * 0.5).re / want;
    }
    let half_prefactor_ratio = ratio / t_points.len().max(1) as f64;
    Ok(FourierPairReport { omega, max_error, half_prefactor_ratio, edge_ok: out.edge_ok, pass: out.edge_ok && max_error < FOURIER_PAIR_TOL })
}

/// Line grid whose sech tails are below 1e-10 of the peak.
pub fn fourier_pair_grid(omega: f64) -> Result<DiscreteHilbert> {
    let a = PI / (2.0 * omega);
    let half = (2e10f64).ln() / a + 2.0;
    crate::sqfun::line_grid(half, 0.05 * omega.min(1.0))
}

pub fn psi_power(alpha: f64, z: C64) -> C64 {
    z.powf(alpha) * (-z).exp()
}

/// sup |u| over the closed sector, sampled on the boundary rays and the
/// origin side (maximum principle).
pub fn sector_sup(u: &HolFn, omega: f64) -> f64 {
    let mut s: f64 = 0.0;
    for k in 0..=400 {
        let r = 10f64.powf(-8.0 + 16.0 * k as f64 / 400.0);
        for a in [-omega, 0.0, omega] {
            let v = u.eval(C64::from_polar(r, a)).norm();
            if v.is_finite() {
                s = s.max(v);
            }
        }
    }
    s
}

/// Multiplier m(tau) = 2^s/(2 pi i) int_{Gamma_{w,1}} u(z/(2 tau)) z^{-s} e^z dz.
pub fn laplace_multiplier(p: &LaplaceParams, u: &HolFn, taus: &[f64]) -> Result<Vec<C64>> {
    let s = p.alpha + p.beta;
    let k = keyhole_contour(p.omega, 1.0, p.outer_radius, p.nodes_per_piece)?;
    if (p.outer_radius * p.omega.cos()).exp() * p.outer_radius.powf(-s) > 1e-12 {
        return Err(Error::Param("keyhole rays too short for the exponential decay".into()));
    }
    let pts = k.points();
    let base: Vec<C64> = pts.iter().map(|(z, dz)| z.powf(-s) * z.exp() * dz).collect();
    let scale = 2f64.powf(s) / (2.0 * PI);
    taus.par_iter()
        .map(|&tau| {
            let mut acc = c(0.0, 0.0);
            for ((z, _), b) in pts.iter().zip(&base) {
                let v = u.eval(z / (2.0 * tau));
                if !v.is_finite() {
                    return Err(Error::Param(format!("u is singular on the keyhole at tau = {tau}")));
                }
                acc += v * b;
            }
            Ok(acc * scale / I)
        })
        .collect()
}

fn laplace_reconstruct(p: &LaplaceParams, u: &HolFn, z: &[C64]) -> Result<ReprReport> {
    if !(p.alpha > 0.0 && p.beta > 0.0) {
        return Err(Error::Param("Laplace representation needs alpha, beta > 0".into()));
    }
    match u.domain() {
        Domain::Sector(theta) if theta > p.omega && p.omega > PI / 2.0 => {}
        _ => return Err(Error::Param("need pi/2 < keyhole angle < sector of u".into())),
    }
    let count = ((p.t_range.1 / p.t_range.0).ln() / p.t_step).round() as usize + 1;
    let grid = DiscreteHilbert::mult_haar(p.t_range.0, p.t_range.1, count)?;
    let taus: Vec<f64> = grid.nodes().iter().map(|t| t.re).collect();
    let m = laplace_multiplier(p, u, &taus)?;
    let values = z
        .iter()
        .map(|&zp| {
            taus.iter()
                .zip(grid.weights())
                .zip(&m)
                .map(|((t, w), mv)| mv * psi_power(p.alpha, zp * *t) * psi_power(p.beta, zp * *t) * *w)
                .sum()
        })
        .collect();
    let s = p.alpha + p.beta;
    let k = keyhole_contour(p.omega, 1.0, p.outer_radius, p.nodes_per_piece)?;
    let line: f64 = k.points().iter().map(|(z, dz)| z.re.exp() * z.norm().powf(-s) * dz.norm()).sum();
    let bound = 2f64.powf(s) / (2.0 * PI) * line * sector_sup(u, p.omega);
    let sup = m.iter().map(|v| v.norm()).fold(0.0, f64::max);
    Ok(ReprReport::new("laplace", z, values, u, Some(MultiplierProfile { t: taus, m, sup, bound })))
}

/// calculus_apply(u, A, gauss-cauchy) x against the factored quadrature
/// sum (dz/2 pi i) u(w) [e^{-(w-A)^2/2}(w-A)^{-1}] [e^{-(w-A)^2/2}] x.
pub fn gauss_cauchy_operator_check(u: &HolFn, op: &StripOperator, x: &CVector, opts: &CalcOptions) -> Result<f64> {
    let lhs = calculus_apply(u, op, CalcMethod::GaussCauchy, opts)?.matvec(x);
    let plan = plan_contour(op, u.strip_height(), CalcMethod::GaussCauchy, opts)?;
    let contour = strip_contour(&plan)?;
    let a = op.matrix();
    let n = a.rows();
    let terms: Vec<Result<CVector>> = contour
        .points()
        .par_iter()
        .map(|&(w, dz)| {
            let d = CMatrix::from_fn(n, n, |i, j| if i == j { w - a[(i, j)] } else { -a[(i, j)] });
            let half = expm(&d.matmul(&d).scale_real(-0.5));
            let f = half.matmul(&inverse(&d)?);
            Ok(f.matvec(&half.matvec(x)).scale(u.eval(w) * dz / (2.0 * PI * I)))
        })
        .collect();
    let mut rhs = CVector::zeros(n);
    for t in terms {
        rhs.axpy(c(1.0, 0.0), &t?);
    }
    Ok(lhs.max_abs_diff(&rhs) / lhs.norm2().max(1.0))
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularCauchyReport {
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
    pub nodes_checked: usize,
}

pub const SINGULAR_CAUCHY_TOL: f64 = 1e-3;

/// Uniform boundary grid for the singular Cauchy operator.
pub fn singular_grid(omega: f64, half_width: f64, step: f64) -> Result<DiscreteHilbert> {
    let count = (2.0 * half_width / step).round() as usize + 1;
    make_grid(MeasureTag::BoundaryStrip { omega }, &GridParams::strip(omega, half_width, count))
}

fn grid_omega(grid: &DiscreteHilbert) -> Result<f64> {
    match grid.tag() {
        MeasureTag::BoundaryStrip { omega } => Ok(omega),
        _ => Err(Error::Grid("singular Cauchy operator needs a boundary-strip grid".into())),
    }
}

/// T_f on raw node values: (1/2) f(lambda) h(lambda) + (1/2 pi i) PV int f(w) h(w)/(lambda - w) dw.
pub fn singular_cauchy_matrix(f: &HolFn, grid: &DiscreteHilbert, rule: PvRule) -> Result<CMatrix> {
    let m = pv_matrix(grid, rule)?;
    let fv: Vec<C64> = grid.nodes().iter().map(|w| f.eval(*w)).collect();
    let s = 1.0 / (2.0 * PI * I);
    Ok(CMatrix::from_fn(grid.len(), grid.len(), |k, j| {
        let pv = m[(k, j)] * fv[j] * s;
        if k == j {
            pv + 0.5 * fv[k]
        } else {
            pv
        }
    }))
}

/// max |f(z)/(lambda - z) - (T_f g(., z))(lambda)| over nodes with
/// |Re lambda| <= window and the given interior points.
pub fn singular_cauchy(f: &HolFn, grid: &DiscreteHilbert, z: &[C64], window: f64, rule: PvRule) -> Result<SingularCauchyReport> {
    let omega = grid_omega(grid)?;
    if let Domain::Strip(h) = f.domain() {
        if h <= omega {
            return Err(Error::Param("f must be bounded on a strip wider than the contour".into()));
        }
    }
    if let Some(p) = z.iter().find(|p| omega - p.im.abs() < 0.25 * omega) {
        return Err(Error::Param(format!("point {p} too close to the contour")));
    }
    let tf = singular_cauchy_matrix(f, grid, rule)?;
    let rows: Vec<usize> = (0..grid.len()).filter(|&k| grid.nodes()[k].re.abs() <= window).collect();
    let residual = z
        .par_iter()
        .map(|&p| {
            let g = CVector::new(grid.nodes().iter().map(|l| 1.0 / (l - p)).collect());
            let fz = f.eval(p);
            rows.iter()
                .map(|&k| {
                    let tg: C64 = tf.row(k).iter().zip(g.iter()).map(|(a, b)| a * b).sum();
                    (fz * g[k] - tg).norm()
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    Ok(SingularCauchyReport { residual, tol: SINGULAR_CAUCHY_TOL, pass: residual < SINGULAR_CAUCHY_TOL, nodes_checked: rows.len() })
}

/// L2(Gamma) operator norm of T_f by power iteration on the weight-scaled matrix.
pub fn singular_cauchy_norm(f: &HolFn, grid: &DiscreteHilbert, rule: PvRule) -> Result<f64> {
    let t = singular_cauchy_matrix(f, grid, rule)?;
    let sw = grid.sqrt_weights();
    let n = t.rows();
    let b = CMatrix::from_fn(n, n, |k, j| t[(k, j)] * (sw[k] / sw[j]));
    let bh = b.adjoint();
    let mut x = CVector::new((0..n).map(|k| c(1.0 + (k % 7) as f64 * 0.1, 0.05 * (k % 3) as f64)).collect());
    let mut est = 0.0;
    for _ in 0..2000 {
        let y = bh.matvec(&b.matvec(&x));
        let nrm = y.norm2();
        if nrm == 0.0 {
            return Ok(0.0);
        }
        x = y.scale(c(1.0 / nrm, 0.0));
        let next = nrm.sqrt();
        if (next - est).abs() <= 1e-12 * next {
            est = next;
            break;
        }
        est = next;
    }
    Ok(est)
}

/// sup |f| on the closed strip of half-height omega, sampled on its boundary.
pub fn strip_sup(f: &HolFn, omega: f64, half_width: f64) -> f64 {
    let n = 4001;
    (0..n)
        .flat_map(|k| {
            let x = -half_width + 2.0 * half_width * k as f64 / (n - 1) as f64;
            [f.eval(c(x, omega)).norm(), f.eval(c(x, -omega)).norm(), f.eval(c(x, 0.0)).norm()]
        })
        .filter(|v| v.is_finite())
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, Serialize)]
pub struct ExponentReport {
    pub alpha: f64,
    pub beta: f64,
    pub isometry_defect: f64,
    pub convolution_error: f64,
    /// Beta(alpha + 1/2, beta + 1/2)
    pub constant: f64,
    /// conv / (t^{a+b-1/2} z^{a+b} e^{-tz}) averaged over the sample points
    pub fitted_constant: f64,
}

fn tanh_sinh(v: f64) -> (f64, f64, f64) {
    let s = 0.5 * PI * v.sinh();
    let x = 0.5 * (1.0 + s.tanh());
    let one_minus = 0.5 * (1.0 - s.tanh());
    // stable 1 - x for v > 0
    let one_minus = if v > 0.0 { 1.0 / (1.0 + (2.0 * s).exp()) } else { one_minus };
    let x = if v < 0.0 { 1.0 / (1.0 + (-2.0 * s).exp()) } else { x };
    let ch = s.cosh();
    (x, one_minus, 0.25 * PI * v.cosh() / (ch * ch))
}

pub fn f_alpha(alpha: f64, t: f64, z: C64) -> C64 {
    t.powf(alpha - 0.5) * z.powf(alpha) * (-(z * t)).exp()
}

/// (1/sqrt t) int_0^t f_a(t - s, z) f_b(s, z) ds by tanh-sinh on s = t x.
pub fn exponent_convolution(alpha: f64, beta: f64, t: f64, z: C64) -> C64 {
    let h = 0.02;
    let n = (8.0 / h) as i64;
    let mut acc = c(0.0, 0.0);
    for k in -n / 2..=n / 2 {
        let v = k as f64 * h;
        let (x, xm, dx) = tanh_sinh(v);
        if dx == 0.0 || x == 0.0 || xm == 0.0 {
            continue;
        }
        acc += f_alpha(alpha, t * xm, z) * f_alpha(beta, t * x, z) * (t * dx * h);
    }
    acc / t.sqrt()
}

/// <Tf, Tg> on a log-log product grid, with (Tf)(s, t) = (t+s)^{-1/2} f(t+s).
pub fn isometry_pairing(f: &(dyn Fn(f64) -> C64 + Sync), g: &(dyn Fn(f64) -> C64 + Sync), range: (f64, f64), step: f64) -> C64 {
    let n = ((range.1 - range.0) / step).round() as usize + 1;
    let a: Vec<f64> = (0..n).map(|k| range.0 + step * k as f64).collect();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let t = a[i].exp();
            let mut row = c(0.0, 0.0);
            for &b in &a {
                let s = b.exp();
                let u = t + s;
                row += f(u) * g(u).conj() * (t * s / u);
            }
            row * step * step
        })
        .collect::<Vec<C64>>()
        .into_iter()
        .sum()
}

/// <f, g> on (0, inf) with the log substitution.
pub fn half_line_pairing(f: &dyn Fn(f64) -> C64, g: &dyn Fn(f64) -> C64, range: (f64, f64), step: f64) -> C64 {
    let n = ((range.1 - range.0) / step).round() as usize + 1;
    (0..n)
        .map(|k| {
            let u = (range.0 + step * k as f64).exp();
            f(u) * g(u).conj() * u * step
        })
        .sum()
}

pub fn exponent_improvement_check(alpha: f64, beta: f64, t_points: &[f64], z_points: &[C64]) -> Result<ExponentReport> {
    if alpha < 0.1 || beta < 0.1 {
        return Err(Error::Param("endpoint quadrature unstable for exponents below 0.1".into()));
    }
    type Dict = Box<dyn Fn(f64) -> C64 + Sync>;
    let dict: Vec<Dict> = vec![
        Box::new(|u: f64| c((-u).exp(), 0.0)),
        Box::new(|u: f64| c(u * (-u).exp(), 0.0)),
        Box::new(|u: f64| c(0.0, u * u) * (-2.0 * u).exp()),
        Box::new(|u: f64| C64::from_polar((-3.0 * u).exp(), u)),
    ];
    let range = (-30.0, 6.0);
    let mut defect: f64 = 0.0;
    for i in 0..dict.len() {
        for j in i..dict.len() {
            let lhs = isometry_pairing(&*dict[i], &*dict[j], range, 0.05);
            let rhs = half_line_pairing(&*dict[i], &*dict[j], range, 0.01);
            defect = defect.max((lhs - rhs).norm());
        }
    }
    let constant = beta_fn(alpha + 0.5, beta + 0.5);
    let mut err: f64 = 0.0;
    let mut fitted = 0.0;
    let mut count = 0;
    for &t in t_points {
        for &z in z_points {
            let conv = exponent_convolution(alpha, beta, t, z);
            let shape = t.powf(alpha + beta - 0.5) * z.powf(alpha + beta) * (-(z * t)).exp();
            err = err.max((conv - shape * constant).norm());
            if shape.norm() > 1e-8 {
                fitted += (conv / shape).re;
                count += 1;
            }
        }
    }
    Ok(ExponentReport {
        alpha,
        beta,
        isometry_defect: defect,
        convolution_error: err,
        constant,
        fitted_constant: if count > 0 { fitted / count as f64 } else { f64::NAN },
    })
}

pub fn beta_fn(a: f64, b: f64) -> f64 {
    beta(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lorentz() -> HolFn {
        HolFn::strip("1/(4+z^2)", 2.0, |z| 1.0 / (4.0 + z * z)).bounded()
    }

    #[test]
    fn gauss_cauchy_reconstructs() {
        let one = HolFn::constant(c(1.0, 0.0));
        let r = reconstruct(&ReprMethod::gauss_cauchy(1.0), &one, &[c(0.0, 0.0)]).unwrap();
        assert!(r.max_error < 1e-8);
        let pts = [c(0.0, 0.0), c(0.5, 0.3), c(-1.2, -0.6), c(2.0, 0.7)];
        let r = reconstruct(&ReprMethod::gauss_cauchy(1.0), &lorentz(), &pts).unwrap();
        assert!(r.max_error < 1e-8, "{}", r.max_error);
    }

    #[test]
    fn poisson_reconstructs() {
        let pts = [c(0.0, 0.0), c(0.5, 0.0), c(0.0, 0.3)];
        let r = reconstruct(&ReprMethod::poisson(1.0), &lorentz(), &pts).unwrap();
        assert!(r.max_error < 1e-6, "{}", r.max_error);
    }

    #[test]
    fn poisson_factors_recombine() {
        let g = crate::sqfun::line_grid(20.0, 0.1).unwrap();
        assert!(poisson_factorization_residual(1.0, 1.5, &g).unwrap() < 1e-10);
    }

    #[test]
    fn fourier_pair_values() {
        let g = fourier_pair_grid(1.0).unwrap();
        let r = fourier_pair_check(1.0, &g, &[0.0, 2.0]).unwrap();
        assert!(r.pass, "{r:?}");
        assert!((r.half_prefactor_ratio - 0.5).abs() < 1e-6);
        for w in [0.5, 2.0] {
            let t: Vec<f64> = (0..81).map(|k| -8.0 / w + 0.2 * k as f64 / w).collect();
            let r = fourier_pair_check(w, &fourier_pair_grid(w).unwrap(), &t).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn laplace_constant() {
        let one = HolFn::sector("1", PI, |_| c(1.0, 0.0));
        let p = LaplaceParams::new(1.0, 1.0);
        let m = laplace_multiplier(&p, &one, &[0.01, 1.0, 30.0]).unwrap();
        for v in m {
            assert!((v - 4.0).norm() < 1e-4, "{v}");
        }
        let r = reconstruct(&ReprMethod::Laplace(p), &one, &[c(0.5, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(r.max_error < 1e-3, "{}", r.max_error);
        let mp = r.multiplier.unwrap();
        assert!(mp.sup <= mp.bound);
    }

    #[test]
    fn laplace_resolvent() {
        let u = HolFn::sector("1/(1+z)", PI, |z| 1.0 / (1.0 + z));
        let pts = [c(0.5, 0.0), c(1.0, 0.0), C64::from_polar(2.0, PI / 6.0)];
        let r = reconstruct(&ReprMethod::Laplace(LaplaceParams::new(1.0, 1.0)), &u, &pts).unwrap();
        assert!(r.max_error < 1e-3, "{}", r.max_error);
    }

    #[test]
    fn singular_cauchy_identity() {
        let grid = singular_grid(1.0, 60.0, 0.05).unwrap();
        let pts = [c(0.2, 0.1), c(0.0, 0.0), c(-0.5, 0.3), c(1.0, -0.4), c(0.0, 0.3)];
        let one = HolFn::constant(c(1.0, 0.0));
        let r = singular_cauchy(&one, &grid, &pts, 5.0, PvRule::Corrected).unwrap();
        assert!(r.pass, "{r:?}");
        let g = HolFn::strip("exp(-z^2)", f64::INFINITY, |z| (-z * z).exp());
        let r = singular_cauchy(&g, &grid, &pts, 5.0, PvRule::Corrected).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn exponent_half_half() {
        let r = exponent_improvement_check(0.5, 0.5, &[0.1, 1.0, 3.0], &[c(1.0, 0.0)]).unwrap();
        assert!((r.constant - 1.0).abs() < 1e-12);
        assert!(r.convolution_error < 1e-6, "{r:?}");
        assert!(r.isometry_defect < 1e-6, "{r:?}");
        let r = exponent_improvement_check(1.0, 0.5, &[0.5, 2.0], &[c(1.0, 0.5)]).unwrap();
        assert!((r.fitted_constant - 2.0 / 3.0).abs() < 1e-6, "{r:?}");
    }
}

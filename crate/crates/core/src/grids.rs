//! Quadrature grids for the Hilbert spaces L^2(R), L^2((0,inf), dt/t) and
//! L^2 of strip/keyhole boundaries, plus oriented integration contours.
//!
//! Grid functions enter operators in sqrt-weight coordinates (column j is
//! sqrt(w_j) times the value at node j), which makes grid l^2 isometric to
//! the discretized L^2.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numlin::{c, CMatrix, C64, I};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
pub enum LineMap {
    /// Uniform trapezoid in the line coordinate.
    #[default]
    Uniform,
    /// t = scale * sinh(u), trapezoid uniform in u; reaches far tails with
    /// few nodes for algebraically decaying integrands.
    Sinh { scale: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "kebab-case")]
pub enum MeasureTag {
    LebesgueLine,
    MultHaar,
    BoundaryStrip { omega: f64 },
    BoundaryKeyhole { omega: f64, radius: f64 },
}

/// Grid parameters. `half_width` is T for lines and strips (for a sinh
/// map it bounds the u range), `range` is [eps, T] for the
/// multiplicative grid and [r, R] for keyholes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridParams {
    pub half_width: f64,
    pub range: Option<(f64, f64)>,
    pub count: usize,
    pub omega: f64,
    pub radius: f64,
    pub map: LineMap,
}

impl GridParams {
    pub fn line(half_width: f64, count: usize) -> Self {
        GridParams { half_width, range: None, count, omega: 0.0, radius: 1.0, map: LineMap::Uniform }
    }

    pub fn haar(eps: f64, t: f64, count: usize) -> Self {
        GridParams { half_width: t, range: Some((eps, t)), count, omega: 0.0, radius: 1.0, map: LineMap::Uniform }
    }

    pub fn strip(omega: f64, half_width: f64, count: usize) -> Self {
        GridParams { half_width, range: None, count, omega, radius: 1.0, map: LineMap::Uniform }
    }

    pub fn keyhole(omega: f64, radius: f64, outer: f64, count: usize) -> Self {
        GridParams { half_width: outer, range: Some((radius, outer)), count, omega, radius, map: LineMap::Uniform }
    }

    pub fn with_map(mut self, map: LineMap) -> Self {
        self.map = map;
        self
    }
}

/// Weighted grid representing an L^2 space. Boundary grids also carry the
/// oriented differential dz at each node, so they double as contours.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiscreteHilbert {
    nodes: Vec<C64>,
    weights: Vec<f64>,
    tag: MeasureTag,
    dz: Option<Vec<C64>>,
    /// Index ranges of the smooth pieces (lines, rays, arcs).
    pieces: Vec<(usize, usize)>,
}

fn trapezoid_line(a: f64, b: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let h = (b - a) / (n - 1) as f64;
    let x = (0..n).map(|j| a + h * j as f64).collect();
    let w = (0..n).map(|j| if j == 0 || j == n - 1 { 0.5 * h } else { h }).collect();
    (x, w)
}

/// Line nodes and arc-length weights for the requested map.
fn line_nodes(half_width: f64, n: usize, map: LineMap) -> (Vec<f64>, Vec<f64>) {
    match map {
        LineMap::Uniform => trapezoid_line(-half_width, half_width, n),
        LineMap::Sinh { scale } => {
            let (u, wu) = trapezoid_line(-half_width, half_width, n);
            let x = u.iter().map(|&u| scale * u.sinh()).collect();
            let w = u.iter().zip(&wu).map(|(&u, &w)| w * scale * u.cosh()).collect();
            (x, w)
        }
    }
}

fn check(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Param(msg.to_string()))
    }
}

/// Build the grid for one of the four measure tags.
pub fn make_grid(tag: MeasureTag, p: &GridParams) -> Result<DiscreteHilbert> {
    check(p.count >= 8, "grid needs at least 8 nodes")?;
    match tag {
        MeasureTag::LebesgueLine => {
            check(p.half_width > 0.0, "half width must be positive")?;
            let (x, w) = line_nodes(p.half_width, p.count, p.map);
            let n = x.len();
            Ok(DiscreteHilbert {
                nodes: x.into_iter().map(|x| c(x, 0.0)).collect(),
                weights: w,
                tag,
                dz: None,
                pieces: vec![(0, n)],
            })
        }
        MeasureTag::MultHaar => {
            let (eps, t) = p.range.ok_or_else(|| Error::Param("multiplicative grid needs [eps, T]".into()))?;
            check(eps > 0.0 && eps < t, "need 0 < eps < T")?;
            let (s, w) = trapezoid_line(eps.ln(), t.ln(), p.count);
            Ok(DiscreteHilbert {
                nodes: s.into_iter().map(|s| c(s.exp(), 0.0)).collect(),
                weights: w,
                tag,
                dz: None,
                pieces: vec![(0, p.count)],
            })
        }
        MeasureTag::BoundaryStrip { omega } => {
            check(p.half_width > 0.0, "half width must be positive")?;
            check(omega > 0.0, "strip half-height must be positive")?;
            let (x, w) = line_nodes(p.half_width, p.count, p.map);
            let n = x.len();
            let mut nodes = Vec::with_capacity(2 * n);
            let mut weights = Vec::with_capacity(2 * n);
            let mut dz = Vec::with_capacity(2 * n);
            // lower line left to right
            for j in 0..n {
                nodes.push(c(x[j], -omega));
                weights.push(w[j]);
                dz.push(c(w[j], 0.0));
            }
            // upper line right to left
            for j in (0..n).rev() {
                nodes.push(c(x[j], omega));
                weights.push(w[j]);
                dz.push(c(-w[j], 0.0));
            }
            Ok(DiscreteHilbert { nodes, weights, tag, dz: Some(dz), pieces: vec![(0, n), (n, 2 * n)] })
        }
        MeasureTag::BoundaryKeyhole { omega, radius } => {
            let (r, outer) = p.range.unwrap_or((radius, p.half_width));
            check(r > 0.0 && outer > r, "keyhole needs 0 < r < R")?;
            check(omega > 0.0 && omega <= PI, "keyhole angle must lie in (0, pi]")?;
            let k = keyhole_contour(omega, r, outer, p.count)?;
            let mut nodes = Vec::new();
            let mut weights = Vec::new();
            let mut dz = Vec::new();
            let mut pieces = Vec::new();
            for seg in &k.segments {
                let start = nodes.len();
                nodes.extend_from_slice(&seg.nodes);
                dz.extend_from_slice(&seg.dz);
                weights.extend(seg.dz.iter().map(|d| d.norm()));
                pieces.push((start, nodes.len()));
            }
            Ok(DiscreteHilbert { nodes, weights, tag, dz: Some(dz), pieces })
        }
    }
}

impl DiscreteHilbert {
    pub fn lebesgue_line(half_width: f64, count: usize) -> Result<Self> {
        make_grid(MeasureTag::LebesgueLine, &GridParams::line(half_width, count))
    }

    pub fn mult_haar(eps: f64, t: f64, count: usize) -> Result<Self> {
        make_grid(MeasureTag::MultHaar, &GridParams::haar(eps, t, count))
    }

    pub fn boundary_strip(omega: f64, half_width: f64, count: usize) -> Result<Self> {
        make_grid(MeasureTag::BoundaryStrip { omega }, &GridParams::strip(omega, half_width, count))
    }

    /// Abstract m-dimensional space with its standard basis (unit weights).
    pub fn abstract_basis(m: usize) -> Self {
        DiscreteHilbert {
            nodes: (0..m).map(|j| c(j as f64, 0.0)).collect(),
            weights: vec![1.0; m],
            tag: MeasureTag::LebesgueLine,
            dz: None,
            pieces: vec![(0, m)],
        }
    }

    /// Product grid of two line grids, nodes encoded as (t, s) -> t + i s.
    pub fn product(a: &DiscreteHilbert, b: &DiscreteHilbert) -> Self {
        let mut nodes = Vec::with_capacity(a.len() * b.len());
        let mut weights = Vec::with_capacity(a.len() * b.len());
        for (ta, wa) in a.nodes.iter().zip(&a.weights) {
            for (tb, wb) in b.nodes.iter().zip(&b.weights) {
                nodes.push(c(ta.re, tb.re));
                weights.push(wa * wb);
            }
        }
        let n = nodes.len();
        DiscreteHilbert { nodes, weights, tag: MeasureTag::LebesgueLine, dz: None, pieces: vec![(0, n)] }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[C64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn tag(&self) -> MeasureTag {
        self.tag
    }

    pub fn dz(&self) -> Option<&[C64]> {
        self.dz.as_deref()
    }

    pub fn pieces(&self) -> &[(usize, usize)] {
        &self.pieces
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn sqrt_weights(&self) -> Vec<f64> {
        self.weights.iter().map(|w| w.sqrt()).collect()
    }

    /// Sample a function at the nodes.
    pub fn sample(&self, f: impl Fn(C64) -> C64) -> Vec<C64> {
        self.nodes.iter().map(|&t| f(t)).collect()
    }

    /// sqrt-weight coordinates of a grid function.
    pub fn coords(&self, values: &[C64]) -> Vec<C64> {
        values.iter().zip(&self.weights).map(|(v, w)| v * w.sqrt()).collect()
    }

    /// <f, g> = sum_j w_j f_j conj(g_j).
    pub fn inner(&self, f: &[C64], g: &[C64]) -> C64 {
        f.iter().zip(g).zip(&self.weights).map(|((a, b), w)| a * b.conj() * *w).sum()
    }

    pub fn norm(&self, f: &[C64]) -> f64 {
        self.inner(f, f).re.max(0.0).sqrt()
    }

    /// Discrete integral sum_j w_j f_j.
    pub fn integrate(&self, f: &[C64]) -> C64 {
        f.iter().zip(&self.weights).map(|(a, w)| a * *w).sum()
    }

    /// Contour view of a boundary grid.
    pub fn to_contour(&self) -> Result<Contour> {
        let dz = self.dz.as_ref().ok_or_else(|| Error::Grid("grid carries no orientation".into()))?;
        let segments = self
            .pieces
            .iter()
            .map(|&(a, b)| Segment {
                kind: SegmentKind::Sampled,
                nodes: self.nodes[a..b].to_vec(),
                dz: dz[a..b].to_vec(),
            })
            .collect();
        Ok(Contour { segments })
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["node_re", "node_im", "weight"])?;
        for (z, wt) in self.nodes.iter().zip(&self.weights) {
            w.write_record([z.re.to_string(), z.im.to_string(), wt.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum SegmentKind {
    /// z = x + i*height, x traversed from `from` to `to`.
    HorizontalLine { height: f64, from: f64, to: f64 },
    /// z = x + i*y, y traversed from `from` to `to`.
    VerticalLine { x: f64, from: f64, to: f64 },
    /// z = rho * e^{i angle}, rho from `from` to `to`.
    Ray { angle: f64, from: f64, to: f64 },
    /// z = center + radius * e^{i theta}, theta from `from` to `to`.
    Arc { center_re: f64, center_im: f64, radius: f64, from: f64, to: f64 },
    Sampled,
}

impl SegmentKind {
    /// Distance of a point from the declared curve.
    pub fn distance(&self, z: C64) -> f64 {
        match *self {
            SegmentKind::HorizontalLine { height, .. } => (z.im - height).abs(),
            SegmentKind::VerticalLine { x, .. } => (z.re - x).abs(),
            SegmentKind::Ray { angle, .. } => {
                let u = C64::from_polar(1.0, angle);
                (z - u * (z * u.conj()).re).norm()
            }
            SegmentKind::Arc { center_re, center_im, radius, .. } => ((z - c(center_re, center_im)).norm() - radius).abs(),
            SegmentKind::Sampled => 0.0,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Segment {
    pub kind: SegmentKind,
    pub nodes: Vec<C64>,
    pub dz: Vec<C64>,
}

/// Oriented contour with quadrature weights dz_j that already include the
/// orientation and the parametrization derivative.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Contour {
    pub segments: Vec<Segment>,
}

impl Contour {
    pub fn len(&self) -> usize {
        self.segments.iter().map(|s| s.nodes.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> Vec<(C64, C64)> {
        self.segments.iter().flat_map(|s| s.nodes.iter().copied().zip(s.dz.iter().copied())).collect()
    }

    pub fn integrate(&self, f: impl Fn(C64) -> C64) -> C64 {
        self.segments.iter().flat_map(|s| s.nodes.iter().zip(&s.dz)).map(|(&z, &d)| f(z) * d).sum()
    }

    /// Largest distance of a node from its declared curve.
    pub fn max_curve_deviation(&self) -> f64 {
        self.segments
            .iter()
            .flat_map(|s| s.nodes.iter().map(move |&z| s.kind.distance(z)))
            .fold(0.0, f64::max)
    }

    /// Positively oriented boundary of the strip |Im z| < height, truncated to
    /// |Re z| <= half_width: lower line left to right, upper line right to
    /// left. Optional vertical caps close the rectangle.
    pub fn strip(height: f64, half_width: f64, step: f64, caps: bool) -> Result<Contour> {
        check(height > 0.0 && half_width > 0.0 && step > 0.0, "strip contour parameters must be positive")?;
        let n = ((2.0 * half_width / step).round() as usize).max(8) + 1;
        let (x, w) = trapezoid_line(-half_width, half_width, n);
        let lower = Segment {
            kind: SegmentKind::HorizontalLine { height: -height, from: -half_width, to: half_width },
            nodes: x.iter().map(|&x| c(x, -height)).collect(),
            dz: w.iter().map(|&w| c(w, 0.0)).collect(),
        };
        let upper = Segment {
            kind: SegmentKind::HorizontalLine { height, from: half_width, to: -half_width },
            nodes: x.iter().rev().map(|&x| c(x, height)).collect(),
            dz: w.iter().rev().map(|&w| c(-w, 0.0)).collect(),
        };
        let mut segments = vec![lower];
        if caps {
            let m = ((2.0 * height / step).round() as usize).max(8) + 1;
            let (y, wy) = trapezoid_line(-height, height, m);
            segments.push(Segment {
                kind: SegmentKind::VerticalLine { x: half_width, from: -height, to: height },
                nodes: y.iter().map(|&y| c(half_width, y)).collect(),
                dz: wy.iter().map(|&w| c(0.0, w)).collect(),
            });
        }
        segments.push(upper);
        if caps {
            let m = ((2.0 * height / step).round() as usize).max(8) + 1;
            let (y, wy) = trapezoid_line(-height, height, m);
            segments.push(Segment {
                kind: SegmentKind::VerticalLine { x: -half_width, from: height, to: -height },
                nodes: y.iter().rev().map(|&y| c(-half_width, y)).collect(),
                dz: wy.iter().rev().map(|&w| c(0.0, -w)).collect(),
            });
        }
        Ok(Contour { segments })
    }

    /// Counterclockwise circle, trapezoid in the angle.
    pub fn circle(center: C64, radius: f64, count: usize) -> Contour {
        let h = 2.0 * PI / count as f64;
        let nodes: Vec<C64> = (0..count).map(|k| center + C64::from_polar(radius, h * k as f64)).collect();
        let dz = (0..count).map(|k| I * C64::from_polar(radius, h * k as f64) * h).collect();
        Contour {
            segments: vec![Segment {
                kind: SegmentKind::Arc { center_re: center.re, center_im: center.im, radius, from: 0.0, to: 2.0 * PI },
                nodes,
                dz,
            }],
        }
    }
}

/// Graded parameter used on each keyhole piece: trapezoid in v with a map
/// whose derivative decays doubly exponentially at the joints.
const KEYHOLE_SPAN: f64 = 4.0;

/// Keyhole contour around the sector of half-angle omega: in along the ray
/// arg z = -omega from R to r, counterclockwise along |z| = r, out along
/// arg z = omega. This is the Hankel orientation, for which
/// (1/2 pi i) int e^z z^{-s} dz = 1/Gamma(s) as R -> infinity.
///
/// Rays use r + (R - r) * g(v), arc uses omega * tanh-sinh(v), both with
/// v uniform, so the nodes accumulate at the joints and the trapezoid rule
/// keeps its fast convergence across the corners.
pub fn keyhole_contour(omega: f64, r: f64, outer: f64, count: usize) -> Result<Contour> {
    check(count >= 8, "keyhole needs at least 8 nodes per piece")?;
    check(r > 0.0 && outer > r && omega > 0.0 && omega <= PI, "invalid keyhole parameters")?;
    let (v, wv) = trapezoid_line(-KEYHOLE_SPAN, KEYHOLE_SPAN, count);
    // phi(v) in (0,1) with phi' vanishing doubly exponentially at both ends
    let phi = |v: f64| 0.5 * (1.0 + (0.5 * PI * v.sinh()).tanh());
    let dphi = |v: f64| {
        let s = (0.5 * PI * v.sinh()).cosh();
        0.25 * PI * v.cosh() / (s * s)
    };
    let len = outer - r;
    let e_lo = C64::from_polar(1.0, -omega);
    let e_hi = C64::from_polar(1.0, omega);
    let mut lower = Segment { kind: SegmentKind::Ray { angle: -omega, from: outer, to: r }, nodes: vec![], dz: vec![] };
    let mut arc = Segment {
        kind: SegmentKind::Arc { center_re: 0.0, center_im: 0.0, radius: r, from: -omega, to: omega },
        nodes: vec![],
        dz: vec![],
    };
    let mut upper = Segment { kind: SegmentKind::Ray { angle: omega, from: r, to: outer }, nodes: vec![], dz: vec![] };
    for k in 0..count {
        let (vk, wk) = (v[k], wv[k]);
        let d = dphi(vk) * wk;
        if d == 0.0 {
            continue;
        }
        // outward ray parameter rho = r + len * phi(v)
        let rho = r + len * phi(vk);
        upper.nodes.push(e_hi * rho);
        upper.dz.push(e_hi * (len * d));
        let rho_in = r + len * phi(-vk);
        lower.nodes.push(e_lo * rho_in);
        lower.dz.push(-e_lo * (len * d));
        let theta = omega * (2.0 * phi(vk) - 1.0);
        let z = C64::from_polar(r, theta);
        arc.nodes.push(z);
        arc.dz.push(I * z * (2.0 * omega * d));
    }
    Ok(Contour { segments: vec![lower, arc, upper] })
}

/// Fourier transform g^(t) = int g(s) e^{ist} ds by the trapezoid rule on a
/// line grid. `edge_ok` is false when |g| at the grid ends exceeds
/// `edge_tol`.
#[derive(Clone, Debug, Serialize)]
pub struct FourierOutput {
    pub values: Vec<C64>,
    pub edge_ok: bool,
    pub edge_magnitude: f64,
}

fn edge_magnitude(g: &[C64]) -> f64 {
    match (g.first(), g.last()) {
        (Some(a), Some(b)) => a.norm().max(b.norm()),
        _ => 0.0,
    }
}

pub fn discrete_fourier(grid: &DiscreteHilbert, g: &[C64], points: &[f64], edge_tol: f64) -> Result<FourierOutput> {
    if grid.tag() != MeasureTag::LebesgueLine {
        return Err(Error::Grid("Fourier transform needs a line grid".into()));
    }
    if g.len() != grid.len() {
        return Err(Error::Dimension("grid function length".into()));
    }
    let values = points
        .iter()
        .map(|&t| {
            grid.nodes()
                .iter()
                .zip(grid.weights())
                .zip(g)
                .map(|((s, w), gv)| gv * C64::from_polar(*w, s.re * t))
                .sum()
        })
        .collect();
    let e = edge_magnitude(g);
    Ok(FourierOutput { values, edge_ok: e <= edge_tol, edge_magnitude: e })
}

/// Inverse transform (1/2 pi) int G(t) e^{-ist} dt.
pub fn inverse_fourier(grid: &DiscreteHilbert, gh: &[C64], points: &[f64], edge_tol: f64) -> Result<FourierOutput> {
    let conj: Vec<C64> = gh.iter().map(|z| z.conj()).collect();
    let f = discrete_fourier(grid, &conj, points, edge_tol)?;
    Ok(FourierOutput {
        values: f.values.iter().map(|z| z.conj() / (2.0 * PI)).collect(),
        edge_ok: f.edge_ok,
        edge_magnitude: f.edge_magnitude,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum PvRule {
    /// Punctured trapezoid: skip the singular node. First order in h.
    Skip,
    /// Punctured trapezoid plus the node term -dz_k * phi'(lambda_k),
    /// phi' by five-point differences along the piece.
    #[default]
    Corrected,
}

/// Derivative stencil along a piece at local index k, as (offset, weight)
/// pairs acting on values with spacing `dw` in the contour variable.
fn derivative_stencil(k: usize, len: usize) -> Vec<(isize, f64)> {
    if len >= 5 && k >= 2 && k + 2 < len {
        vec![(-2, 1.0 / 12.0), (-1, -2.0 / 3.0), (1, 2.0 / 3.0), (2, -1.0 / 12.0)]
    } else if k == 0 {
        vec![(0, -1.5), (1, 2.0), (2, -0.5)]
    } else if k + 1 == len {
        vec![(0, 1.5), (-1, -2.0), (-2, 0.5)]
    } else {
        vec![(-1, -0.5), (1, 0.5)]
    }
}

fn boundary_parts(grid: &DiscreteHilbert) -> Result<&[C64]> {
    match grid.tag() {
        MeasureTag::BoundaryStrip { .. } => {}
        _ => return Err(Error::Grid("principal values need a boundary-strip grid".into())),
    }
    let dz = grid.dz().ok_or_else(|| Error::Grid("grid has no orientation".into()))?;
    for &(a, b) in grid.pieces() {
        let h0 = grid.nodes()[a + 1] - grid.nodes()[a];
        for j in a + 1..b {
            if ((grid.nodes()[j] - grid.nodes()[j - 1]) - h0).norm() > 1e-9 * h0.norm() {
                return Err(Error::Grid("principal values need uniformly spaced lines".into()));
            }
        }
    }
    Ok(dz)
}

/// Matrix M with (M h)_k = PV int_Gamma h(w) / (lambda_k - w) dw for
/// lambda_k the grid nodes, acting on raw node values.
pub fn pv_matrix(grid: &DiscreteHilbert, rule: PvRule) -> Result<CMatrix> {
    let dz = boundary_parts(grid)?;
    let n = grid.len();
    let nodes = grid.nodes();
    let mut m = CMatrix::from_fn(n, n, |k, j| if j == k { c(0.0, 0.0) } else { dz[j] / (nodes[k] - nodes[j]) });
    if rule == PvRule::Corrected {
        for &(a, b) in grid.pieces() {
            let len = b - a;
            for k in 0..len {
                let gk = a + k;
                let step = nodes[a + 1] - nodes[a];
                for (off, wgt) in derivative_stencil(k, len) {
                    let j = (gk as isize + off) as usize;
                    m[(gk, j)] -= dz[gk] * wgt / step;
                }
            }
        }
    }
    Ok(m)
}

/// PV convolution at selected node indices (all nodes when `at` is None),
/// evaluated without forming the matrix.
pub fn pv_convolution(grid: &DiscreteHilbert, h: &[C64], rule: PvRule, at: Option<&[usize]>) -> Result<Vec<C64>> {
    let dz = boundary_parts(grid)?;
    if h.len() != grid.len() {
        return Err(Error::Dimension("grid function length".into()));
    }
    let nodes = grid.nodes();
    let all: Vec<usize>;
    let idx = match at {
        Some(i) => i,
        None => {
            all = (0..grid.len()).collect();
            &all
        }
    };
    let mut out = Vec::with_capacity(idx.len());
    for &k in idx {
        if k >= grid.len() {
            return Err(Error::Grid(format!("evaluation index {k} is not a grid node")));
        }
        let lam = nodes[k];
        let mut s = c(0.0, 0.0);
        for j in 0..grid.len() {
            if j != k {
                s += dz[j] * h[j] / (lam - nodes[j]);
            }
        }
        if rule == PvRule::Corrected {
            let &(a, b) = grid.pieces().iter().find(|&&(a, b)| k >= a && k < b).expect("node in a piece");
            let step = nodes[a + 1] - nodes[a];
            let d: C64 = derivative_stencil(k - a, b - a)
                .into_iter()
                .map(|(off, w)| h[(k as isize + off) as usize] * w)
                .sum::<C64>()
                / step;
            s -= dz[k] * d;
        }
        out.push(s);
    }
    Ok(out)
}

/// Index of the grid node closest to a point.
pub fn nearest_node(grid: &DiscreteHilbert, z: C64) -> usize {
    grid.nodes()
        .iter()
        .enumerate()
        .map(|(j, &w)| (j, (w - z).norm()))
        .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a })
        .0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_total_length() {
        let g = DiscreteHilbert::lebesgue_line(10.0, 2001).unwrap();
        assert!((g.total_weight() - 20.0).abs() < 1e-12);
    }

    #[test]
    fn haar_total_measure() {
        let g = DiscreteHilbert::mult_haar(1e-4, 1e4, 1601).unwrap();
        assert!((g.total_weight() - 1e8f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(DiscreteHilbert::lebesgue_line(10.0, 4).is_err());
        assert!(DiscreteHilbert::mult_haar(2.0, 1.0, 100).is_err());
        assert!(make_grid(MeasureTag::BoundaryKeyhole { omega: 4.0, radius: 1.0 }, &GridParams::keyhole(4.0, 1.0, 10.0, 64)).is_err());
    }

    #[test]
    fn closed_strip_integral_vanishes() {
        let k = Contour::strip(1.0, 9.0, 0.02, true).unwrap();
        let v = k.integrate(|z| (-z * z).exp());
        assert!(v.norm() < 1e-8, "{v}");
        assert!(k.max_curve_deviation() < 1e-14);
    }

    #[test]
    fn boundary_grid_orientation_matches_contour() {
        let g = DiscreteHilbert::boundary_strip(1.0, 9.0, 901).unwrap();
        let k = g.to_contour().unwrap();
        // open lines: each carries sqrt(pi) with opposite orientation
        let v = k.integrate(|z| (-z * z).exp());
        assert!(v.norm() < 1e-12);
        let lower: C64 = k.segments[0].nodes.iter().zip(&k.segments[0].dz).map(|(z, d)| (-z * z).exp() * d).sum();
        assert!((lower - c(PI.sqrt(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn keyhole_gives_reciprocal_gamma() {
        let k = keyhole_contour(0.75 * PI, 1.0, 60.0, 401).unwrap();
        for (s, rg) in [(1.0, 1.0), (2.0, 1.0), (3.0, 0.5), (0.5, 1.0 / PI.sqrt())] {
            let v = k.integrate(|z| z.exp() * z.powf(-s)) / (2.0 * PI * I);
            assert!((v - c(rg, 0.0)).norm() < 1e-10, "s={s}: {v}");
        }
        assert!(k.max_curve_deviation() < 1e-13);
    }

    #[test]
    fn circle_cauchy() {
        let k = Contour::circle(c(0.3, 0.1), 0.5, 64);
        let v = k.integrate(|z| 1.0 / (z - c(0.3, 0.2)));
        assert!((v - 2.0 * PI * I).norm() < 1e-13);
    }

    #[test]
    fn gaussian_self_transform() {
        let g = DiscreteHilbert::lebesgue_line(12.0, 1201).unwrap();
        let vals = g.sample(|s| (-s * s / 2.0).exp());
        let ts = [0.0, 0.7, 1.5, 3.0];
        let f = discrete_fourier(&g, &vals, &ts, 1e-11).unwrap();
        assert!(f.edge_ok);
        for (t, v) in ts.iter().zip(&f.values) {
            let want = (2.0 * PI).sqrt() * (-t * t / 2.0).exp();
            assert!((v - c(want, 0.0)).norm() < 1e-8);
        }
        let back = inverse_fourier(&g, &g.sample(|t| (2.0 * PI).sqrt() * (-t * t / 2.0).exp()), &[0.4], 1e-8).unwrap();
        assert!((back.values[0].re - (-0.08f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn edge_decay_flag() {
        let g = DiscreteHilbert::lebesgue_line(2.0, 101).unwrap();
        let vals = g.sample(|s| (-s * s / 2.0).exp());
        assert!(!discrete_fourier(&g, &vals, &[0.0], 1e-9).unwrap().edge_ok);
    }

    #[test]
    fn pv_constant_on_symmetric_line_vanishes_at_center() {
        // single symmetric line: use the lower line of a strip grid and
        // evaluate at its middle node with values only on that line
        let g = DiscreteHilbert::boundary_strip(1.0, 5.0, 101).unwrap();
        let mut h = vec![c(0.0, 0.0); g.len()];
        for v in h.iter_mut().take(101) {
            *v = c(1.0, 0.0);
        }
        for rule in [PvRule::Skip, PvRule::Corrected] {
            let r = pv_convolution(&g, &h, rule, Some(&[50])).unwrap();
            assert!(r[0].norm() < 1e-12, "{rule:?}: {}", r[0]);
        }
    }

    #[test]
    fn pv_linear_integrand_is_minus_length() {
        let g = DiscreteHilbert::boundary_strip(1.0, 5.0, 101).unwrap();
        let lam = g.nodes()[30];
        let mut h = vec![c(0.0, 0.0); g.len()];
        for (hj, t) in h.iter_mut().zip(g.nodes()).take(101) {
            *hj = t - lam;
        }
        let r = pv_convolution(&g, &h, PvRule::Corrected, Some(&[30])).unwrap();
        assert!((r[0] - c(-10.0, 0.0)).norm() < 1e-12, "{}", r[0]);
    }

    #[test]
    fn pv_partial_fractions() {
        // PV int_L dw / ((lam - w)(w - mu)) on the lower line [-T, T] - i
        let t = 6.0;
        let g = DiscreteHilbert::boundary_strip(1.0, t, 1201).unwrap();
        let mu = c(0.3, 0.2);
        let mut h = vec![c(0.0, 0.0); g.len()];
        for (hj, t) in h.iter_mut().zip(g.nodes()).take(1201) {
            *hj = 1.0 / (t - mu);
        }
        let k = 700;
        let lam = g.nodes()[k];
        let a = c(-t, -1.0);
        let b = c(t, -1.0);
        // 1/((lam-w)(w-mu)) = (1/(lam-mu)) (1/(w-mu) + 1/(lam-w))
        let pv_log = ((b - lam) / (lam - a)).ln();
        let exact = (((b - mu) / (a - mu)).ln() - pv_log) / (lam - mu);
        for rule in [PvRule::Skip, PvRule::Corrected] {
            let r = pv_convolution(&g, &h, rule, Some(&[k])).unwrap();
            let tol = if rule == PvRule::Skip { 1e-2 } else { 1e-6 };
            assert!((r[0] - exact).norm() < tol, "{rule:?} {} vs {}", r[0], exact);
        }
        assert!(pv_convolution(&g, &h, PvRule::Skip, Some(&[g.len()])).is_err());
    }

    #[test]
    fn pv_matrix_matches_direct() {
        let g = DiscreteHilbert::boundary_strip(0.5, 3.0, 41).unwrap();
        let h: Vec<C64> = g.nodes().iter().map(|z| (-z * z).exp()).collect();
        let m = pv_matrix(&g, PvRule::Corrected).unwrap();
        let direct = pv_convolution(&g, &h, PvRule::Corrected, None).unwrap();
        let via = m.matvec(&crate::numlin::CVector::new(h));
        for (a, b) in direct.iter().zip(via.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}

use serde::Serialize;

use super::matrix::{CMatrix, CVector, C64};
use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;
const MAX_SWEEPS: usize = 80;

/// LU factorization with partial pivoting, PA = LU packed in one matrix.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn new(a: &CMatrix) -> Result<Lu> {
        if !a.is_square() {
            return Err(Error::Dimension("LU needs a square matrix".into()));
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.max_abs().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax <= scale * EPS * 1e-3 {
                return Err(Error::Singular);
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
            }
            let piv = lu[(k, k)];
            for i in k + 1..n {
                let l = lu[(i, k)] / piv;
                lu[(i, k)] = l;
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= l * u;
                }
            }
        }
        Ok(Lu { lu, perm })
    }

    pub fn solve(&self, b: &CVector) -> CVector {
        let n = self.lu.rows();
        let mut y: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[(i, j)];
                y[i] = y[i] - l * y[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[(i, j)];
                y[i] = y[i] - u * y[j];
            }
            y[i] /= self.lu[(i, i)];
        }
        CVector::new(y)
    }

    pub fn inverse(&self) -> CMatrix {
        let n = self.lu.rows();
        let mut inv = CMatrix::zeros(n, n);
        for j in 0..n {
            let col = self.solve(&CVector::basis(n, j));
            inv.set_column(j, &col);
        }
        inv
    }

    pub fn det(&self) -> C64 {
        let n = self.lu.rows();
        let mut d: C64 = (0..n).map(|i| self.lu[(i, i)]).product();
        // sign of the permutation
        let mut seen = vec![false; n];
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut k = s;
            while !seen[k] {
                seen[k] = true;
                k = self.perm[k];
                len += 1;
            }
            if len % 2 == 0 {
                d = -d;
            }
        }
        d
    }
}

pub fn inverse(a: &CMatrix) -> Result<CMatrix> {
    Ok(Lu::new(a)?.inverse())
}

pub fn solve(a: &CMatrix, b: &CVector) -> Result<CVector> {
    if a.rows() != b.dim() {
        return Err(Error::Dimension("solve right-hand side".into()));
    }
    Ok(Lu::new(a)?.solve(b))
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues descending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

/// Cyclic two-sided complex Jacobi. Input is symmetrized as (H + H*)/2.
pub fn eigh(h: &CMatrix) -> Result<HermitianEigen> {
    if !h.is_square() {
        return Err(Error::Dimension("eigh needs a square matrix".into()));
    }
    let n = h.rows();
    let mut a = CMatrix::from_fn(n, n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * 0.5);
    let mut v = CMatrix::identity(n);
    let total = a.frobenius().max(f64::MIN_POSITIVE);
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= EPS * total {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let b = a[(p, q)];
                let bn = b.norm();
                if bn <= EPS * 1e-3 * total {
                    continue;
                }
                let phase = b / bn;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * bn);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                // U = diag(1, conj(phase)) * [[c, s], [-s, c]] on the (p, q) plane
                let u_pp = C64::new(cs, 0.0);
                let u_pq = C64::new(sn, 0.0);
                let u_qp = -phase.conj() * sn;
                let u_qq = phase.conj() * cs;
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * u_pp + aiq * u_qp;
                    a[(i, q)] = aip * u_pq + aiq * u_qq;
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * u_pp + viq * u_qp;
                    v[(i, q)] = vip * u_pq + viq * u_qq;
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = u_pp.conj() * apj + u_qp.conj() * aqj;
                    a[(q, j)] = u_pq.conj() * apj + u_qq.conj() * aqj;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence("hermitian Jacobi".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.partial_cmp(&a[(i, i)].re).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// Thin singular value decomposition A = U diag(s) V*, with k = min(rows, cols).
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: CMatrix,
    pub s: Vec<f64>,
    pub v: CMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> CMatrix {
        let k = self.s.len();
        let us = CMatrix::from_fn(self.u.rows(), k, |i, j| self.u[(i, j)] * self.s[j]);
        us.matmul(&self.v.adjoint())
    }
}

/// One-sided (Hestenes) Jacobi: orthogonalize the columns of A, which
/// diagonalizes A*A implicitly.
pub fn svd(a: &CMatrix) -> Result<Svd> {
    if a.rows() == 0 || a.cols() == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }
    if a.rows() < a.cols() {
        let t = svd(&a.adjoint())?;
        return Ok(Svd { u: t.v, s: t.s, v: t.u });
    }
    let (m, n) = (a.rows(), a.cols());
    let mut g = a.clone();
    let mut v = CMatrix::identity(n);
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = C64::new(0.0, 0.0);
                for i in 0..m {
                    let gp = g[(i, p)];
                    let gq = g[(i, q)];
                    alpha += gp.norm_sqr();
                    beta += gq.norm_sqr();
                    gamma += gp.conj() * gq;
                }
                let gn = gamma.norm();
                if gn <= 4.0 * EPS * (alpha * beta).sqrt() || gn < f64::MIN_POSITIVE.sqrt() {
                    continue;
                }
                rotated = true;
                let ph = gamma.conj() / gn;
                let zeta = (beta - alpha) / (2.0 * gn);
                let t = if zeta == 0.0 {
                    1.0
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for i in 0..m {
                    let gp = g[(i, p)];
                    let gq = g[(i, q)] * ph;
                    g[(i, p)] = gp * cs - gq * sn;
                    g[(i, q)] = gp * sn + gq * cs;
                }
                for i in 0..n {
                    let vp = v[(i, p)];
                    let vq = v[(i, q)] * ph;
                    v[(i, p)] = vp * cs - vq * sn;
                    v[(i, q)] = vp * sn + vq * cs;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence("one-sided Jacobi SVD".into()));
    }
    let norms: Vec<f64> = (0..n).map(|j| g.column(j).norm2()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // stable: ties keep the original column order
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(std::cmp::Ordering::Equal));
    let smax = norms[order[0]];
    let cutoff = smax * EPS * (m.max(n) as f64);
    let s: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let vs = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    let mut ucols: Vec<Option<CVector>> = order
        .iter()
        .map(|&j| {
            if norms[j] > cutoff && norms[j] > 0.0 {
                Some(g.column(j).scale(C64::new(1.0 / norms[j], 0.0)))
            } else {
                None
            }
        })
        .collect();
    fill_orthonormal(m, &mut ucols);
    let u = CMatrix::from_columns(&ucols.into_iter().map(|c| c.unwrap()).collect::<Vec<_>>())?;
    Ok(Svd { u, s, v: vs })
}

/// Replace the `None` slots by unit vectors orthogonal to everything else,
/// drawn from the standard basis by modified Gram-Schmidt.
fn fill_orthonormal(dim: usize, cols: &mut [Option<CVector>]) {
    let mut cand = 0;
    for slot in 0..cols.len() {
        if cols[slot].is_some() {
            continue;
        }
        while cand < dim {
            let mut w = CVector::basis(dim, cand);
            cand += 1;
            for _ in 0..2 {
                for other in cols.iter().flatten() {
                    let proj = w.inner(other);
                    w.axpy(-proj, other);
                }
            }
            let nrm = w.norm2();
            if nrm > 1e-8 {
                cols[slot] = Some(w.scale(C64::new(1.0 / nrm, 0.0)));
                break;
            }
        }
    }
}

/// Extend orthonormal columns q (n x k) to a unitary n x n matrix.
pub fn complete_orthonormal(q: &CMatrix) -> CMatrix {
    let n = q.rows();
    let mut cols: Vec<Option<CVector>> = q.columns().into_iter().map(Some).collect();
    cols.resize(n, None);
    fill_orthonormal(n, &mut cols);
    CMatrix::from_columns(&cols.into_iter().map(|c| c.unwrap()).collect::<Vec<_>>())
        .expect("square completion")
}

/// A = W P with P = (A*A)^(1/2).
#[derive(Clone, Debug)]
pub struct Polar {
    pub w: CMatrix,
    pub p: CMatrix,
}

#[derive(Clone, Debug)]
pub enum Factorization {
    Svd(Svd),
    Polar(Polar),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorKind {
    Svd,
    Polar,
}

pub fn matrix_factor(a: &CMatrix, kind: FactorKind) -> Result<Factorization> {
    match kind {
        FactorKind::Svd => Ok(Factorization::Svd(svd(a)?)),
        FactorKind::Polar => Ok(Factorization::Polar(polar(a)?)),
    }
}

/// Polar decomposition. For square A the isometric factor is unitary
/// (singular directions of the kernel are completed arbitrarily).
pub fn polar(a: &CMatrix) -> Result<Polar> {
    let d = svd(a)?;
    let (m, n) = (a.rows(), a.cols());
    let k = d.s.len();
    let (u, v) = if m == n {
        (complete_orthonormal(&d.u), complete_orthonormal(&d.v))
    } else {
        (d.u.clone(), d.v.clone())
    };
    let w = u.leading_columns(k).matmul(&v.leading_columns(k).adjoint());
    let vs = CMatrix::from_fn(n, k, |i, j| d.v[(i, j)] * d.s[j]);
    let p = vs.matmul(&d.v.adjoint());
    let p = CMatrix::from_fn(n, n, |i, j| (p[(i, j)] + p[(j, i)].conj()) * 0.5);
    Ok(Polar { w, p })
}

#[derive(Clone, Debug, Serialize)]
pub struct IsometryTerm {
    pub weight: f64,
    #[serde(skip)]
    pub factor: CMatrix,
}

/// A = scale * sum_i weight_i * factor_i with unitary factors and convex weights.
#[derive(Clone, Debug, Serialize)]
pub struct IsometryDecomposition {
    pub scale: f64,
    pub terms: Vec<IsometryTerm>,
}

impl IsometryDecomposition {
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.terms[0].factor.rows();
        let mut acc = CMatrix::zeros(n, n);
        for t in &self.terms {
            acc = &acc + &t.factor.scale_real(t.weight);
        }
        acc.scale_real(self.scale)
    }

    pub fn weight_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.weight).sum()
    }

    /// max_i ||F_i* F_i - I||_2 bound via Frobenius.
    pub fn unitarity_defect(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let n = t.factor.rows();
                (&t.factor.gram() - &CMatrix::identity(n)).frobenius()
            })
            .fold(0.0, f64::max)
    }
}

/// Convex combination of at most d unitaries representing A / ||A||.
pub fn contraction_to_isometries(a: &CMatrix) -> Result<IsometryDecomposition> {
    if !a.is_square() {
        return Err(Error::Dimension("isometry decomposition needs a square matrix".into()));
    }
    let d = a.rows();
    let sv = svd(a)?;
    let scale = sv.s[0];
    if scale == 0.0 {
        return Ok(IsometryDecomposition {
            scale: 0.0,
            terms: vec![IsometryTerm { weight: 1.0, factor: CMatrix::identity(d) }],
        });
    }
    let u = complete_orthonormal(&sv.u);
    let v = complete_orthonormal(&sv.v);
    let w = u.matmul(&v.adjoint());
    let lam: Vec<f64> = sv.s.iter().map(|s| (s / scale).min(1.0)).collect();
    let mut terms = Vec::new();
    let mut identity_weight = lam[d - 1];
    for j in 0..d - 1 {
        let gap = lam[j] - lam[j + 1];
        if gap <= 1e-14 {
            // rounding-level gap: fold into the identity term
            identity_weight += gap.max(0.0);
            continue;
        }
        identity_weight += 0.5 * gap;
        // 2 P_j - I where P_j projects onto the first j+1 right singular vectors
        let reflect = CMatrix::from_fn(d, d, |r, s| {
            let proj: C64 = (0..=j).map(|k| v[(r, k)] * v[(s, k)].conj()).sum();
            let id = if r == s { 1.0 } else { 0.0 };
            proj * 2.0 - id
        });
        terms.push(IsometryTerm { weight: 0.5 * gap, factor: w.matmul(&reflect) });
    }
    terms.insert(0, IsometryTerm { weight: identity_weight, factor: w });
    Ok(IsometryDecomposition { scale, terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numlin::matrix::c;

    fn sample(n: usize, m: usize, seed: u64) -> CMatrix {
        // small LCG so these tests do not depend on the sampler module
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        CMatrix::from_fn(n, m, |_, _| c(next(), next()))
    }

    #[test]
    fn lu_inverse_roundtrip() {
        let a = sample(5, 5, 3);
        let inv = inverse(&a).unwrap();
        assert!(a.matmul(&inv).max_abs_diff(&CMatrix::identity(5)) < 1e-12);
    }

    #[test]
    fn det_of_permutation() {
        let p = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        assert!((Lu::new(&p).unwrap().det() - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn singular_is_reported() {
        let z = CMatrix::zeros(3, 3);
        assert_eq!(Lu::new(&z).unwrap_err(), Error::Singular);
    }

    #[test]
    fn eigh_reconstructs() {
        let b = sample(6, 6, 9);
        let h = &b + &b.adjoint();
        let e = eigh(&h).unwrap();
        let d = CMatrix::diag_real(&e.values);
        let r = e.vectors.matmul(&d).matmul(&e.vectors.adjoint());
        assert!(r.max_abs_diff(&h) < 1e-12);
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn svd_diag_and_nilpotent() {
        let d = svd(&CMatrix::diag_real(&[1.0, 0.5, 0.25])).unwrap();
        assert_eq!(d.s, vec![1.0, 0.5, 0.25]);
        let n = svd(&CMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap()).unwrap();
        assert!((n.s[0] - 2.0).abs() < 1e-15 && n.s[1].abs() < 1e-15);
        assert!(n.reconstruct().max_abs_diff(&CMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap()) < 1e-14);
    }

    #[test]
    fn svd_wide_and_tall() {
        for (r, cdim) in [(3, 5), (5, 3), (1, 4)] {
            let a = sample(r, cdim, (r * 10 + cdim) as u64);
            let d = svd(&a).unwrap();
            assert!(d.reconstruct().max_abs_diff(&a) <= 1e-12 * d.s[0].max(1.0));
            let k = d.s.len();
            assert!(d.u.gram().max_abs_diff(&CMatrix::identity(k)) < 1e-12);
            assert!(d.v.gram().max_abs_diff(&CMatrix::identity(k)) < 1e-12);
        }
    }

    #[test]
    fn svd_squared_matches_eigh_of_gram() {
        let a = sample(5, 5, 77);
        let s = svd(&a).unwrap().s[0];
        let e = eigh(&a.gram()).unwrap().values[0];
        assert!((s * s - e).abs() <= 1e-12 * e);
    }

    #[test]
    fn polar_of_unitary_is_identity_part() {
        let q = svd(&sample(4, 4, 5)).unwrap().u;
        let p = polar(&q).unwrap();
        assert!(p.p.max_abs_diff(&CMatrix::identity(4)) < 1e-12);
        assert!(p.w.max_abs_diff(&q) < 1e-12);
    }

    #[test]
    fn polar_rank_deficient() {
        let a = CMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        let p = polar(&a).unwrap();
        assert!(p.w.matmul(&p.p).max_abs_diff(&a) < 1e-14);
        assert!(p.w.gram().max_abs_diff(&CMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn isometries_of_diag() {
        let dec = contraction_to_isometries(&CMatrix::diag_real(&[1.0, 0.5])).unwrap();
        assert_eq!(dec.scale, 1.0);
        assert_eq!(dec.terms.len(), 2);
        assert!((dec.terms[0].weight - 0.75).abs() < 1e-15);
        assert!(dec.terms[0].factor.max_abs_diff(&CMatrix::identity(2)) < 1e-15);
        assert!((dec.terms[1].weight - 0.25).abs() < 1e-15);
        assert!(dec.terms[1].factor.max_abs_diff(&CMatrix::diag_real(&[1.0, -1.0])) < 1e-15);
    }

    #[test]
    fn isometries_of_unitary_and_scalar() {
        let q = svd(&sample(3, 3, 11)).unwrap().u;
        let dec = contraction_to_isometries(&q).unwrap();
        assert_eq!(dec.terms.len(), 1);
        assert!(dec.terms[0].factor.max_abs_diff(&q) < 1e-12);
        let dec = contraction_to_isometries(&CMatrix::diag_real(&[0.5])).unwrap();
        assert_eq!(dec.scale, 0.5);
        assert_eq!(dec.terms.len(), 1);
        assert_eq!(dec.terms[0].factor, CMatrix::identity(1));
    }

    #[test]
    fn isometries_of_zero() {
        let dec = contraction_to_isometries(&CMatrix::zeros(3, 3)).unwrap();
        assert_eq!(dec.scale, 0.0);
        assert_eq!(dec.terms.len(), 1);
    }
}

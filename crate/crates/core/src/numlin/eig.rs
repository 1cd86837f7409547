use super::factor::Lu;
use super::matrix::{CMatrix, CVector, C64};
use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;

/// Complex Schur form A = Z T Z* with T upper triangular.
#[derive(Clone, Debug)]
pub struct Schur {
    pub t: CMatrix,
    pub z: CMatrix,
}

fn hessenberg(a: &CMatrix) -> (CMatrix, CMatrix) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = CMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let alpha = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let x0 = x[0];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { C64::new(1.0, 0.0) };
        let mut v = x.clone();
        v[0] += phase * alpha;
        let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vn == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vn;
        }
        // H <- (I - 2vv*) H (I - 2vv*)
        for j in 0..n {
            let s: C64 = (0..v.len()).map(|i| v[i].conj() * h[(k + 1 + i, j)]).sum();
            for i in 0..v.len() {
                h[(k + 1 + i, j)] -= v[i] * s * 2.0;
            }
        }
        for i in 0..n {
            let s: C64 = (0..v.len()).map(|j| h[(i, k + 1 + j)] * v[j]).sum();
            for j in 0..v.len() {
                h[(i, k + 1 + j)] -= s * v[j].conj() * 2.0;
            }
            let s: C64 = (0..v.len()).map(|j| q[(i, k + 1 + j)] * v[j]).sum();
            for j in 0..v.len() {
                q[(i, k + 1 + j)] -= s * v[j].conj() * 2.0;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = C64::new(0.0, 0.0);
        }
    }
    (h, q)
}

fn givens(x: C64, y: C64) -> (f64, C64) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    let rho = ax.hypot(ay);
    (ax / rho, x * y.conj() / (ax * rho))
}

/// Shifted QR iteration on the Hessenberg form with Wilkinson shifts.
pub fn schur(a: &CMatrix) -> Result<Schur> {
    if !a.is_square() {
        return Err(Error::Dimension("Schur form needs a square matrix".into()));
    }
    let n = a.rows();
    let (mut h, mut z) = hessenberg(a);
    let scale = a.frobenius().max(f64::MIN_POSITIVE);
    let mut hi = n.saturating_sub(1);
    let mut iter = 0usize;
    let mut total = 0usize;
    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let s = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            let s = if s == 0.0 { scale } else { s };
            if h[(lo, lo - 1)].norm() <= EPS * s {
                h[(lo, lo - 1)] = C64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > 100 * n.max(4) {
            return Err(Error::NoConvergence("complex Schur QR".into()));
        }
        let a11 = h[(hi - 1, hi - 1)];
        let a12 = h[(hi - 1, hi)];
        let a21 = h[(hi, hi - 1)];
        let a22 = h[(hi, hi)];
        let mu = if iter % 11 == 10 {
            // exceptional shift
            a22 + C64::new(h[(hi, hi - 1)].norm(), 0.0) * 0.75
        } else {
            let half = (a11 - a22) * 0.5;
            let disc = (half * half + a12 * a21).sqrt();
            let m1 = a22 - a12 * a21 / (half + disc);
            let m2 = a22 - a12 * a21 / (half - disc);
            let d1 = half + disc;
            let d2 = half - disc;
            if d1.norm() == 0.0 && d2.norm() == 0.0 {
                a22
            } else if d1.norm() >= d2.norm() {
                m1
            } else {
                m2
            }
        };
        for k in lo..hi {
            let (x, y) = if k == lo {
                (h[(lo, lo)] - mu, h[(lo + 1, lo)])
            } else {
                (h[(k, k - 1)], h[(k + 1, k - 1)])
            };
            let (cs, sn) = givens(x, y);
            let c = C64::new(cs, 0.0);
            let start = if k == lo { lo } else { k - 1 };
            for j in start..n {
                let u = h[(k, j)];
                let w = h[(k + 1, j)];
                h[(k, j)] = c * u + sn * w;
                h[(k + 1, j)] = -sn.conj() * u + c * w;
            }
            let stop = (k + 2).min(hi);
            for i in 0..=stop {
                let u = h[(i, k)];
                let w = h[(i, k + 1)];
                h[(i, k)] = u * c + w * sn.conj();
                h[(i, k + 1)] = -u * sn + w * c;
            }
            for i in 0..n {
                let u = z[(i, k)];
                let w = z[(i, k + 1)];
                z[(i, k)] = u * c + w * sn.conj();
                z[(i, k + 1)] = -u * sn + w * c;
            }
            if k > lo {
                h[(k + 1, k - 1)] = C64::new(0.0, 0.0);
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            h[(i, j)] = C64::new(0.0, 0.0);
        }
    }
    Ok(Schur { t: h, z })
}

/// Eigenvalues and unit eigenvectors (columns) of a general complex matrix.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<C64>,
    pub vectors: CMatrix,
}

pub fn eig(a: &CMatrix) -> Result<Eigen> {
    let s = schur(a)?;
    let n = a.rows();
    let t = &s.t;
    let tnorm = t.frobenius().max(f64::MIN_POSITIVE);
    let smin = EPS * tnorm;
    let mut y_all = CMatrix::zeros(n, n);
    for k in 0..n {
        let lam = t[(k, k)];
        let mut y = vec![C64::new(0.0, 0.0); n];
        y[k] = C64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let s: C64 = (i + 1..=k).map(|j| t[(i, j)] * y[j]).sum();
            let mut d = t[(i, i)] - lam;
            if d.norm() < smin {
                d = C64::new(smin, 0.0);
            }
            y[i] = -s / d;
        }
        for i in 0..n {
            y_all[(i, k)] = y[i];
        }
    }
    let mut vectors = s.z.matmul(&y_all);
    for k in 0..n {
        let col = vectors.column(k);
        let nrm = col.norm2();
        vectors.set_column(k, &col.scale(C64::new(1.0 / nrm, 0.0)));
    }
    Ok(Eigen { values: (0..n).map(|k| t[(k, k)]).collect(), vectors })
}

pub fn eigenvalues(a: &CMatrix) -> Result<Vec<C64>> {
    let s = schur(a)?;
    Ok((0..a.rows()).map(|k| s.t[(k, k)]).collect())
}

/// Diagonalization A = P diag(values) P^{-1} with the condition number of P.
#[derive(Clone, Debug)]
pub struct Diagonalization {
    pub values: Vec<C64>,
    pub p: CMatrix,
    pub p_inv: CMatrix,
    pub cond: f64,
}

impl Diagonalization {
    pub fn apply(&self, f: impl Fn(C64) -> C64) -> CMatrix {
        let fd: Vec<C64> = self.values.iter().map(|&l| f(l)).collect();
        let n = fd.len();
        CMatrix::from_fn(n, n, |i, j| self.p[(i, j)] * fd[j]).matmul(&self.p_inv)
    }
}

pub fn diagonalize(a: &CMatrix) -> Result<Diagonalization> {
    let e = eig(a)?;
    let lu = Lu::new(&e.vectors)?;
    let p_inv = lu.inverse();
    let cond = e.vectors.frobenius() * p_inv.frobenius() / a.rows() as f64;
    if !cond.is_finite() || cond > 1e12 {
        return Err(Error::Method(format!("eigenvector matrix ill-conditioned (cond ~ {cond:.3e})")));
    }
    Ok(Diagonalization { values: e.values, p: e.vectors, p_inv, cond })
}

/// Principal logarithm through diagonalization; spectrum must avoid (-inf, 0].
pub fn logm(a: &CMatrix) -> Result<CMatrix> {
    let d = diagonalize(a)?;
    let scale = d.values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for &l in &d.values {
        if l.norm() <= 1e-14 * scale.max(1.0) || (l.im.abs() <= 1e-14 * l.norm() && l.re < 0.0) {
            return Err(Error::Param(format!("eigenvalue {l} on the branch cut (-inf, 0]")));
        }
    }
    Ok(d.apply(|z| z.ln()))
}

/// Matrix exponential by scaling and squaring with a Taylor core.
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.rows();
    let nrm = a.norm_one();
    let s = if nrm > 0.5 { (nrm / 0.5).log2().ceil() as i32 } else { 0 };
    let b = a.scale_real(0.5f64.powi(s));
    let mut term = CMatrix::identity(n);
    let mut sum = CMatrix::identity(n);
    for k in 1..40 {
        term = term.matmul(&b).scale_real(1.0 / k as f64);
        sum = &sum + &term;
        if term.max_abs() <= 1e-17 * sum.max_abs() {
            break;
        }
    }
    for _ in 0..s {
        sum = sum.matmul(&sum);
    }
    sum
}

/// Action of a diagonal matrix function on a vector, used as an oracle.
pub fn diag_apply(values: &[C64], f: impl Fn(C64) -> C64, x: &CVector) -> CVector {
    CVector::new(values.iter().zip(x.iter()).map(|(&l, &xi)| f(l) * xi).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numlin::matrix::c;

    fn upper(n: usize) -> CMatrix {
        CMatrix::from_fn(n, n, |i, j| {
            if j >= i {
                c((i + 2 * j) as f64 * 0.1 + 0.3, (i as f64 - j as f64) * 0.07)
            } else {
                c(0.0, 0.0)
            }
        })
    }

    #[test]
    fn schur_reconstructs_dense() {
        let a = CMatrix::from_fn(6, 6, |i, j| c(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + j) % 3) as f64 * 0.5));
        let s = schur(&a).unwrap();
        let r = s.z.matmul(&s.t).matmul(&s.z.adjoint());
        assert!(r.max_abs_diff(&a) < 1e-12);
        assert!(s.z.gram().max_abs_diff(&CMatrix::identity(6)) < 1e-12);
    }

    #[test]
    fn eig_of_triangular_reads_diagonal() {
        let a = upper(4);
        let mut ev = eigenvalues(&a).unwrap();
        ev.sort_by(|x, y| x.re.partial_cmp(&y.re).unwrap());
        let mut d: Vec<C64> = (0..4).map(|i| a[(i, i)]).collect();
        d.sort_by(|x, y| x.re.partial_cmp(&y.re).unwrap());
        for (x, y) in ev.iter().zip(&d) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn rotation_generator_has_imaginary_spectrum() {
        let a = CMatrix::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]).unwrap();
        let mut ev = eigenvalues(&a).unwrap();
        ev.sort_by(|x, y| x.im.partial_cmp(&y.im).unwrap());
        assert!((ev[0] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((ev[1] - c(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn diagonalize_and_repeated_eigenvalue() {
        let d = diagonalize(&CMatrix::identity(3)).unwrap();
        assert!(d.apply(|z| z * 2.0).max_abs_diff(&CMatrix::identity(3).scale_real(2.0)) < 1e-14);
    }

    #[test]
    fn expm_of_rotation_generator() {
        let t = 1.3;
        let a = CMatrix::from_real_rows(&[&[0.0, -t], &[t, 0.0]]).unwrap();
        let e = expm(&a);
        let want = CMatrix::from_real_rows(&[&[t.cos(), -t.sin()], &[t.sin(), t.cos()]]).unwrap();
        assert!(e.max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn expm_large_norm_diag() {
        let e = expm(&CMatrix::diag_real(&[-20.0, 3.0]));
        assert!((e[(0, 0)].re - (-20f64).exp()).abs() < 1e-20);
        assert!((e[(1, 1)].re / 3f64.exp() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn logm_inverts_expm() {
        let a = CMatrix::from_fn(3, 3, |i, j| c(0.1 * (i as f64) - 0.05 * j as f64, 0.02 * (i * j) as f64));
        let a = &a + &CMatrix::diag_real(&[0.4, -0.2, 0.1]);
        let l = logm(&expm(&a)).unwrap();
        assert!(l.max_abs_diff(&a) < 1e-12);
    }

    #[test]
    fn logm_rejects_negative_axis() {
        assert!(logm(&CMatrix::diag_real(&[1.0, -2.0])).is_err());
    }
}

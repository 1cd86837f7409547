use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::factor::svd;
use super::matrix::{CMatrix, CVector, C64};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NormKind {
    Lp { p: f64 },
    WeightedLp { p: f64, weights: Vec<f64> },
    Hilbert,
}

/// A norm on C^n together with optional cotype metadata (never computed).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormSpec {
    pub kind: NormKind,
    pub cotype_q: Option<f64>,
    pub cotype_constant: Option<f64>,
}

fn check_p(p: f64) -> Result<()> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(Error::Param(format!("p = {p} must be >= 1")))
    }
}

/// Hoelder conjugate exponent.
pub fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

fn lp_norm(x: &[C64], p: f64) -> f64 {
    if p.is_infinite() {
        x.iter().map(|z| z.norm()).fold(0.0, f64::max)
    } else if p == 2.0 {
        x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    } else if p == 1.0 {
        x.iter().map(|z| z.norm()).sum()
    } else {
        let m = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if m == 0.0 {
            return 0.0;
        }
        m * x.iter().map(|z| (z.norm() / m).powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

impl NormSpec {
    pub fn hilbert() -> Self {
        NormSpec { kind: NormKind::Hilbert, cotype_q: Some(2.0), cotype_constant: Some(1.0) }
    }

    pub fn lp(p: f64) -> Result<Self> {
        check_p(p)?;
        Ok(NormSpec { kind: NormKind::Lp { p }, cotype_q: None, cotype_constant: None })
    }

    pub fn weighted_lp(p: f64, weights: Vec<f64>) -> Result<Self> {
        check_p(p)?;
        if weights.is_empty() || weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(Error::Param("weights must be strictly positive".into()));
        }
        Ok(NormSpec { kind: NormKind::WeightedLp { p, weights }, cotype_q: None, cotype_constant: None })
    }

    pub fn with_cotype(mut self, q: f64, constant: f64) -> Result<Self> {
        if matches!(self.kind, NormKind::Hilbert) && (q != 2.0 || constant != 1.0) {
            return Err(Error::Param("Hilbert spaces have cotype 2 with constant 1".into()));
        }
        if q < 2.0 || !(constant > 0.0) {
            return Err(Error::Param("cotype needs q >= 2 and a positive constant".into()));
        }
        self.cotype_q = Some(q);
        self.cotype_constant = Some(constant);
        Ok(self)
    }

    pub fn exponent(&self) -> f64 {
        match &self.kind {
            NormKind::Lp { p } | NormKind::WeightedLp { p, .. } => *p,
            NormKind::Hilbert => 2.0,
        }
    }

    pub fn is_hilbert(&self) -> bool {
        matches!(self.kind, NormKind::Hilbert)
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        if let NormKind::WeightedLp { weights, .. } = &self.kind {
            if weights.len() != n {
                return Err(Error::Dimension(format!("{} weights for dimension {n}", weights.len())));
            }
        }
        Ok(())
    }

    /// Per-coordinate scaling d_i with ||x|| = ||d x||_p. A weighted sup
    /// norm is max_i w_i |x_i|.
    fn scaling(&self, n: usize) -> Vec<f64> {
        match &self.kind {
            NormKind::WeightedLp { p, weights } if p.is_finite() => {
                weights.iter().map(|w| w.powf(1.0 / p)).collect()
            }
            NormKind::WeightedLp { weights, .. } => weights.clone(),
            _ => vec![1.0; n],
        }
    }

    pub fn norm(&self, x: &[C64]) -> f64 {
        match &self.kind {
            NormKind::Hilbert => lp_norm(x, 2.0),
            NormKind::Lp { p } => lp_norm(x, *p),
            NormKind::WeightedLp { p, .. } => {
                let d = self.scaling(x.len());
                let y: Vec<C64> = x.iter().zip(&d).map(|(z, w)| z * w).collect();
                lp_norm(&y, *p)
            }
        }
    }

    pub fn norm_vec(&self, x: &CVector) -> f64 {
        self.norm(x.as_slice())
    }

    /// Dual norm for the bilinear pairing sum x_i y_i.
    pub fn dual(&self) -> NormSpec {
        match &self.kind {
            NormKind::Hilbert => NormSpec::hilbert(),
            NormKind::Lp { p } => NormSpec { kind: NormKind::Lp { p: conjugate_exponent(*p) }, cotype_q: None, cotype_constant: None },
            NormKind::WeightedLp { p, weights } => {
                let q = conjugate_exponent(*p);
                let w = if p.is_infinite() || q.is_infinite() {
                    weights.iter().map(|w| 1.0 / w).collect()
                } else {
                    weights.iter().map(|w| w.powf(1.0 - q)).collect()
                };
                NormSpec { kind: NormKind::WeightedLp { p: q, weights: w }, cotype_q: None, cotype_constant: None }
            }
        }
    }
}

/// Operator norm result. `certified` means the value is exact up to
/// rounding; otherwise it is a lower bound from power iteration and
/// `upper_bound` (when present) is a rigorous over-estimate.
#[derive(Clone, Debug, Serialize)]
pub struct OpNorm {
    pub value: f64,
    pub certified: bool,
    pub upper_bound: Option<f64>,
    pub iterations: usize,
    pub method: &'static str,
}

/// Duality map of l^p: unit-l^p* functional norming x, or the l^p vector
/// normed by a functional.
fn duality_map(x: &[C64], p: f64) -> Vec<C64> {
    let sgn = |z: &C64| if z.norm() > 0.0 { z / z.norm() } else { C64::new(0.0, 0.0) };
    if p == 1.0 {
        return x.iter().map(sgn).collect();
    }
    if p.is_infinite() {
        let m = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
        return x
            .iter()
            .map(|z| if z.norm() >= m * (1.0 - 1e-12) { sgn(z) } else { C64::new(0.0, 0.0) })
            .collect();
    }
    let nrm = lp_norm(x, p);
    if nrm == 0.0 {
        return vec![C64::new(0.0, 0.0); x.len()];
    }
    x.iter().map(|z| sgn(z) * (z.norm() / nrm).powf(p - 1.0)).collect()
}

/// ||A||_{from -> to}. Exact paths: (2,2) by SVD, (1,q) by columns, (p,inf)
/// by rows. Everything else uses the Boyd power method from seeded starts.
pub fn op_norm(a: &CMatrix, from: &NormSpec, to: &NormSpec) -> Result<OpNorm> {
    if a.rows() == 0 || a.cols() == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }
    from.check_dim(a.cols())?;
    to.check_dim(a.rows())?;
    let (p, q) = (from.exponent(), to.exponent());
    // reduce weighted norms to plain l^p by diagonal scaling
    let df = from.scaling(a.cols());
    let dt = to.scaling(a.rows());
    let b = CMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)] * (dt[i] / df[j]));
    if p == 2.0 && q == 2.0 {
        let s = svd(&b)?.s[0];
        return Ok(OpNorm { value: s, certified: true, upper_bound: Some(s), iterations: 0, method: "svd" });
    }
    if p == 1.0 {
        let v = (0..b.cols()).map(|j| lp_norm(b.column(j).as_slice(), q)).fold(0.0, f64::max);
        return Ok(OpNorm { value: v, certified: true, upper_bound: Some(v), iterations: 0, method: "max-column" });
    }
    if q.is_infinite() {
        let ps = conjugate_exponent(p);
        let v = (0..b.rows()).map(|i| lp_norm(b.row(i), ps)).fold(0.0, f64::max);
        return Ok(OpNorm { value: v, certified: true, upper_bound: Some(v), iterations: 0, method: "max-row" });
    }
    let upper = if p == q { Some(riesz_thorin_bound(&b, p)) } else { None };
    let ps = conjugate_exponent(p);
    let mut best = 0.0f64;
    let mut iterations = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f0b);
    let bt = b.adjoint();
    for start in 0..8 {
        let mut x: Vec<C64> = if start == 0 {
            vec![C64::new(1.0, 0.0); b.cols()]
        } else {
            (0..b.cols()).map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect()
        };
        let n0 = lp_norm(&x, p);
        x.iter_mut().for_each(|z| *z /= n0);
        let mut prev = 0.0;
        for _ in 0..500 {
            iterations += 1;
            let y = b.matvec(&CVector::new(x.clone()));
            let val = lp_norm(y.as_slice(), q);
            best = best.max(val);
            // the functional v -> sum conj(j_i) v_i norms y; pulled back by B
            // it is x -> sum conj(z_k) x_k with z = B* j
            let jy = duality_map(y.as_slice(), q);
            let z = bt.matvec(&CVector::new(jy));
            let xn = duality_map(z.as_slice(), ps);
            let nx = lp_norm(&xn, p);
            if nx == 0.0 {
                break;
            }
            x = xn.iter().map(|w| w / nx).collect();
            if (val - prev).abs() <= 1e-14 * val.max(f64::MIN_POSITIVE) {
                break;
            }
            prev = val;
        }
    }
    let certified = upper.is_some_and(|u| u - best <= 1e-12 * u);
    Ok(OpNorm { value: best, certified, upper_bound: upper, iterations, method: "power-iteration" })
}

/// ||B||_{p->p} <= ||B||_1^{1/p} ||B||_inf^{1-1/p}.
fn riesz_thorin_bound(b: &CMatrix, p: f64) -> f64 {
    let inv = 1.0 / p;
    b.norm_one().powf(inv) * b.norm_inf().powf(1.0 - inv)
}

/// Rigorous upper bound for ||A||_{l^p -> l^p} (interpolation of the 1 and
/// inf norms); used when an over-estimate is what an inequality needs.
pub fn lp_op_norm_upper(a: &CMatrix, p: f64) -> f64 {
    if p == 2.0 {
        return svd(a).map(|s| s.s[0]).unwrap_or(f64::INFINITY);
    }
    riesz_thorin_bound(a, p)
}

/// Random draw used by property tests and suites.
pub fn random_unit_vector(rng: &mut impl Rng, n: usize) -> CVector {
    let v = CVector::new((0..n).map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect());
    let nrm = v.norm2();
    v.scale(C64::new(1.0 / nrm, 0.0))
}

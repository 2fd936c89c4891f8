//! One-sided (Hestenes) Jacobi SVD.
//!
//! Orthogonalizing the columns directly keeps singular values accurate to
//! roughly `ε · σ_max` in absolute terms, so numerically zero singular values
//! come out at rounding level rather than at `√ε` as they would from an
//! eigendecomposition of the Gram matrix.

use num_complex::Complex64;
use num_traits::Zero;

use super::ComplexMatrix;
use crate::tolerances::{JACOBI_MAX_SWEEPS, RANK_REL_TOL, SVD_ORTH_TOL};

/// Thin SVD `A = U diag(s) V*`, `s` descending, `k = min(rows, cols)`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub s: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    /// Number of singular values above `max(rows, cols) · σ_max · RANK_REL_TOL`.
    pub fn rank(&self) -> usize {
        let dim = self.u.rows().max(self.v.rows()) as f64;
        rank_of(&self.s, dim * RANK_REL_TOL)
    }

    /// Count of singular values strictly above `rel · σ_max`.
    pub fn rank_rel(&self, rel: f64) -> usize {
        rank_of(&self.s, rel)
    }
}

fn rank_of(s: &[f64], rel: f64) -> usize {
    let top = s.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > rel * top).count()
}

pub fn svd(a: &ComplexMatrix) -> Svd {
    if a.rows() >= a.cols() {
        tall_svd(a)
    } else {
        let t = tall_svd(&a.adjoint());
        Svd { u: t.v, s: t.s, v: t.u }
    }
}

pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    svd(a).s
}

pub fn rank(a: &ComplexMatrix) -> usize {
    svd(a).rank()
}

fn tall_svd(a: &ComplexMatrix) -> Svd {
    let m = a.rows();
    let n = a.cols();
    let mut cols = a.columns();
    let mut v = ComplexMatrix::identity(n).columns();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = norm_sq(&cols[p]);
                let beta = norm_sq(&cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g == 0.0 || g <= SVD_ORTH_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase_conj = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + zeta.hypot(1.0))
                } else {
                    -1.0 / (-zeta + zeta.hypot(1.0))
                };
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                rotate_pair(&mut cols, p, q, c, s, phase_conj);
                rotate_pair(&mut v, p, q, c, s, phase_conj);
            }
        }
        if !rotated {
            break;
        }
    }

    let sigma: Vec<f64> = cols.iter().map(|c| norm_sq(c).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]));

    let mut u_cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut s = Vec::with_capacity(n);
    let mut v_cols = Vec::with_capacity(n);
    for &j in &order {
        s.push(sigma[j]);
        v_cols.push(v[j].clone());
        if sigma[j] > 0.0 && sigma[j].is_normal() {
            u_cols.push(cols[j].iter().map(|z| z / sigma[j]).collect());
        }
    }
    // Exactly zero columns carry no direction; complete U orthonormally.
    let missing = n - u_cols.len();
    let completion = super::subspace::orthonormal_completion(m, &u_cols, missing);
    u_cols.extend(completion);

    Svd {
        u: ComplexMatrix::from_columns(m, &u_cols),
        s,
        v: ComplexMatrix::from_columns(n, &v_cols),
    }
}

/// `[x_p, x_q] ← [x_p, x_q] · [[c, s], [-s e^{-iφ}, c e^{-iφ}]]`.
fn rotate_pair(vecs: &mut [Vec<Complex64>], p: usize, q: usize, c: f64, s: f64, phase_conj: Complex64) {
    let (lo, hi) = vecs.split_at_mut(q);
    let xp = &mut lo[p];
    let xq = &mut hi[0];
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let bq = *b * phase_conj;
        let new_p = *a * c - bq * s;
        let new_q = *a * s + bq * c;
        *a = new_p;
        *b = new_q;
    }
}

pub(crate) fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).fold(Complex64::zero(), |acc, (a, b)| acc + a.conj() * b)
}

pub(crate) fn norm_sq(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

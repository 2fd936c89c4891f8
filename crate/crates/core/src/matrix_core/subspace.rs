use num_complex::Complex64;
use serde::Serialize;

use super::svd::{dot, norm_sq, svd};
use super::{ComplexMatrix, MatrixError};
use crate::tolerances::{FRAME_TOL, INTERSECTION_TOL};

/// Closed subspace of `C^n`, stored as an orthonormal frame (one column per
/// basis vector).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Subspace {
    ambient: usize,
    frame: ComplexMatrix,
}

impl Subspace {
    pub fn from_frame(frame: ComplexMatrix) -> Result<Self, MatrixError> {
        let k = frame.cols();
        let residual = (&frame.adjoint().matmul(&frame) - &ComplexMatrix::identity(k)).max_abs();
        if residual > FRAME_TOL {
            return Err(MatrixError::NotOrthonormal(residual));
        }
        Ok(Subspace { ambient: frame.rows(), frame })
    }

    /// Column space of `a`, at the numerical rank of `a`.
    pub fn span(a: &ComplexMatrix) -> Self {
        let d = svd(a);
        let r = d.rank();
        Subspace { ambient: a.rows(), frame: d.u.column_range(0, r) }
    }

    pub fn span_vectors(ambient: usize, vectors: &[Vec<Complex64>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        Self::span(&ComplexMatrix::from_columns(ambient, vectors))
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, frame: ComplexMatrix::zeros(ambient, 0) }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, frame: ComplexMatrix::identity(ambient) }
    }

    /// `span{e_i : i ∈ idx}` (0-based).
    pub fn coordinate(ambient: usize, idx: &[usize]) -> Self {
        let frame = ComplexMatrix::from_fn(ambient, idx.len(), |i, j| {
            if i == idx[j] {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Subspace { ambient, frame }
    }

    pub fn dim(&self) -> usize {
        self.frame.cols()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn frame(&self) -> &ComplexMatrix {
        &self.frame
    }

    pub fn basis(&self) -> Vec<Vec<Complex64>> {
        self.frame.columns()
    }

    /// Orthogonal projection `F F*`.
    pub fn projector(&self) -> ComplexMatrix {
        self.frame.matmul(&self.frame.adjoint())
    }

    pub fn complement(&self) -> Subspace {
        let extra = orthonormal_completion(self.ambient, &self.basis(), self.ambient - self.dim());
        Subspace { ambient: self.ambient, frame: ComplexMatrix::from_columns(self.ambient, &extra) }
    }

    /// Image under a unitary `u`.
    pub fn image(&self, u: &ComplexMatrix) -> Subspace {
        Subspace { ambient: self.ambient, frame: u.matmul(&self.frame) }
    }

    /// `dist(x, self)`.
    pub fn distance(&self, x: &[Complex64]) -> f64 {
        let coeffs = self.frame.adjoint().matvec(x);
        let proj = self.frame.matvec(&coeffs);
        x.iter().zip(&proj).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }

    /// Cosines of the principal angles with `other`, descending.
    pub fn principal_cosines(&self, other: &Subspace) -> Vec<f64> {
        if self.dim() == 0 || other.dim() == 0 {
            return Vec::new();
        }
        svd(&self.frame.adjoint().matmul(&other.frame)).s
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace, MatrixError> {
        subspace_intersection(self, other)
    }
}

/// Basis of `U1 ∩ U2` from the principal vectors whose cosine is 1 within
/// `INTERSECTION_TOL`.
pub fn subspace_intersection(u1: &Subspace, u2: &Subspace) -> Result<Subspace, MatrixError> {
    if u1.ambient != u2.ambient {
        return Err(MatrixError::Shape(format!("ambient dimensions {} and {} differ", u1.ambient, u2.ambient)));
    }
    if u1.dim() == 0 || u2.dim() == 0 {
        return Ok(Subspace::zero(u1.ambient));
    }
    let d = svd(&u1.frame.adjoint().matmul(&u2.frame));
    let k = d.s.iter().take_while(|&&c| c >= 1.0 - INTERSECTION_TOL).count();
    let frame = u1.frame.matmul(&d.u.column_range(0, k));
    Ok(Subspace { ambient: u1.ambient, frame })
}

/// `count` orthonormal vectors in `C^dim` orthogonal to the (orthonormal)
/// `existing` vectors, chosen greedily from the standard basis.
pub fn orthonormal_completion(dim: usize, existing: &[Vec<Complex64>], count: usize) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = existing.to_vec();
    let mut out = Vec::with_capacity(count);
    let mut used = vec![false; dim];
    for _ in 0..count {
        let mut best: Option<(usize, Vec<Complex64>, f64)> = None;
        for i in (0..dim).filter(|&i| !used[i]) {
            let mut e = vec![Complex64::new(0.0, 0.0); dim];
            e[i] = Complex64::new(1.0, 0.0);
            let r = orthogonalize(&e, &basis);
            let nr = norm_sq(&r);
            if best.as_ref().is_none_or(|b| nr > b.2) {
                best = Some((i, r, nr));
            }
        }
        let Some((i, r, nr)) = best else { break };
        used[i] = true;
        let nrm = nr.sqrt();
        let v: Vec<Complex64> = r.iter().map(|z| z / nrm).collect();
        basis.push(v.clone());
        out.push(v);
    }
    out
}

/// Two passes of classical Gram-Schmidt against `basis`.
fn orthogonalize(x: &[Complex64], basis: &[Vec<Complex64>]) -> Vec<Complex64> {
    let mut r = x.to_vec();
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, &r);
            for (ri, bi) in r.iter_mut().zip(b) {
                *ri -= c * bi;
            }
        }
    }
    r
}

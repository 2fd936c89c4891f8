//! Explicit unitaries: rotation families, the perturbation that moves a
//! compact set off itself, and the stability bound for `𝓡 + V𝓡 = H`.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::matrix_core::random::{gaussian_matrix, unitary_near_identity};
use crate::matrix_core::{
    failure_radius, hermitian_eig, range_shells, range_sum, svd, ComplexMatrix, FailureRadius, MatrixError,
    NumericRangeRep, Subspace,
};
use crate::tolerances::{BOUND_TOL, FRAME_TOL, RANK_REL_TOL, SHELL_KERNEL_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UnitaryError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("contract violated: {0}")]
    Contract(String),
    #[error("insufficient headroom: need ambient dimension {needed}, have {ambient}")]
    Headroom { needed: usize, ambient: usize },
    #[error("T² + VT²V* is not positive definite (smallest eigenvalue {lambda_min:.3e})")]
    NotSurjective { lambda_min: f64 },
}

/// Orthonormal systems `p_1..p_n` and `q_1..q_n` with `p ⟂ q`, paired in
/// index order.
#[derive(Debug, Clone)]
pub struct RotationFamilySpec {
    p: Subspace,
    q: Subspace,
}

impl RotationFamilySpec {
    pub fn new(p: Subspace, q: Subspace) -> Result<Self, UnitaryError> {
        if p.ambient() != q.ambient() {
            return Err(UnitaryError::Contract("p and q frames live in different spaces".into()));
        }
        if p.dim() != q.dim() {
            return Err(UnitaryError::Contract(format!("{} p-vectors but {} q-vectors", p.dim(), q.dim())));
        }
        if 2 * p.dim() > p.ambient() {
            return Err(UnitaryError::Headroom { needed: 2 * p.dim(), ambient: p.ambient() });
        }
        let cross = p.frame().adjoint().matmul(q.frame()).max_abs();
        if cross > FRAME_TOL {
            return Err(UnitaryError::Contract(format!("p and q frames are not orthogonal ({cross:.3e})")));
        }
        Ok(RotationFamilySpec { p, q })
    }

    /// `p = 𝓡`, `q` = the first `dim 𝓡` vectors of a basis of `𝓡⊥`.
    pub fn from_range(r: &Subspace) -> Result<Self, UnitaryError> {
        let needed = 2 * r.dim();
        if needed > r.ambient() {
            return Err(UnitaryError::Headroom { needed, ambient: r.ambient() });
        }
        let q = Subspace::from_frame(r.complement().frame().column_range(0, r.dim()))?;
        Self::new(r.clone(), q)
    }

    /// `C²` with `p = e_1`, `q = e_2`.
    pub fn plane() -> Self {
        Self::new(Subspace::coordinate(2, &[0]), Subspace::coordinate(2, &[1])).expect("e_1 ⟂ e_2")
    }

    pub fn ambient_dim(&self) -> usize {
        self.p.ambient()
    }

    pub fn p(&self) -> &Subspace {
        &self.p
    }

    pub fn q(&self) -> &Subspace {
        &self.q
    }

    /// `I + Σ_j (a p_j p_j* + b p_j q_j* + c q_j p_j* + d q_j q_j*)`.
    fn planar(&self, a: f64, b: f64, c: f64, d: f64) -> ComplexMatrix {
        let n = self.ambient_dim();
        let p = self.p.frame();
        let q = self.q.frame();
        let mut u = ComplexMatrix::identity(n);
        for j in 0..self.p.dim() {
            for r in 0..n {
                for s in 0..n {
                    let (pr, ps, qr, qs) = (p[(r, j)], p[(s, j)].conj(), q[(r, j)], q[(s, j)].conj());
                    u[(r, s)] += pr * ps * a + pr * qs * b + qr * ps * c + qr * qs * d;
                }
            }
        }
        u
    }
}

/// `U_t = R_t diag(1, −1) R_t*` in each plane `span{p_j, q_j}`, identity
/// elsewhere. Unitary and self-adjoint; `U_t p_j = cos 2t p_j + sin 2t q_j`.
pub fn selfadjoint_unitary_family(spec: &RotationFamilySpec, t: f64) -> Result<ComplexMatrix, UnitaryError> {
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&t) {
        return Err(UnitaryError::Contract(format!("t = {t} is outside [0, π/2)")));
    }
    let (s2, c2) = (2.0 * t).sin_cos();
    Ok(spec.planar(c2 - 1.0, s2, s2, -c2 - 1.0))
}

/// Rotation of each `p_j` toward `q_j` by the angle `t`.
pub fn rotation_group(spec: &RotationFamilySpec, t: f64) -> ComplexMatrix {
    let (s, c) = t.sin_cos();
    spec.planar(c - 1.0, -s, s, c - 1.0)
}

/// Whether `U𝓡 ∩ 𝓡 = {0}`.
pub fn verify_disjoint(u: &ComplexMatrix, r: &Subspace) -> Result<bool, UnitaryError> {
    let residual = u.unitary_residual();
    if residual > FRAME_TOL {
        return Err(MatrixError::NotUnitary(residual).into());
    }
    if u.rows() != r.ambient() {
        return Err(MatrixError::Shape(format!("U is {}x{}, 𝓡 lives in C^{}", u.rows(), u.cols(), r.ambient())).into());
    }
    Ok(r.image(u).intersection(r)?.dim() == 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// Self-adjoint unitaries on the grid `kπ/(2·grid)` in `[0, π/2)`.
    Selfadjoint,
    /// Rotation group on the grid `kπ/grid` in `[0, π)`.
    Group,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairCheck {
    pub t: f64,
    pub s: f64,
    pub disjoint: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyReport {
    pub kind: FamilyKind,
    pub grid: Vec<f64>,
    pub pairs: Vec<PairCheck>,
    pub max_unitary_residual: f64,
    pub max_hermitian_residual: f64,
    pub pass: bool,
}

/// Evaluates the family on a `grid`-point grid and checks
/// `U_t 𝓡 ∩ U_s 𝓡 = {0}` for every pair `t ≠ s` as `U_s* U_t 𝓡 ∩ 𝓡 = {0}`.
pub fn check_family(
    spec: &RotationFamilySpec,
    kind: FamilyKind,
    grid: usize,
) -> Result<FamilyReport, UnitaryError> {
    let span = match kind {
        FamilyKind::Selfadjoint => std::f64::consts::FRAC_PI_2,
        FamilyKind::Group => std::f64::consts::PI,
    };
    let ts: Vec<f64> = (0..grid).map(|k| k as f64 * span / grid as f64).collect();
    let us = ts
        .iter()
        .map(|&t| match kind {
            FamilyKind::Selfadjoint => selfadjoint_unitary_family(spec, t),
            FamilyKind::Group => Ok(rotation_group(spec, t)),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let max_unitary_residual = us.iter().map(ComplexMatrix::unitary_residual).fold(0.0, f64::max);
    let max_hermitian_residual = match kind {
        FamilyKind::Selfadjoint => us.iter().map(ComplexMatrix::hermitian_residual).fold(0.0, f64::max),
        FamilyKind::Group => 0.0,
    };
    let mut pairs = Vec::new();
    for i in 0..grid {
        for j in (i + 1)..grid {
            let rel = us[j].adjoint().matmul(&us[i]);
            pairs.push(PairCheck { t: ts[i], s: ts[j], disjoint: verify_disjoint(&rel, spec.p())? });
        }
    }
    let pass = pairs.iter().all(|p| p.disjoint)
        && max_unitary_residual <= FRAME_TOL
        && max_hermitian_residual <= FRAME_TOL;
    Ok(FamilyReport { kind, grid: ts, pairs, max_unitary_residual, max_hermitian_residual, pass })
}

#[derive(Debug, Clone, Serialize)]
pub struct Perturbation {
    #[serde(skip)]
    pub w: ComplexMatrix,
    pub delta: f64,
    pub centers: usize,
    pub l_dim: usize,
    /// `‖W − I‖`.
    pub distance_to_identity: f64,
    /// `min_{l,j} ‖W V x_l − x_j‖`.
    pub min_separation: f64,
    pub norm_ok: bool,
    pub separation_ok: bool,
}

/// Unitary `W` with `‖W − I‖ ≤ ε` such that `W V` moves the point set at
/// distance at least `δ = sin(ε)/(3k)` from itself.
pub fn perturbation_rotation(
    points: &[Vec<Complex64>],
    v: &ComplexMatrix,
    eps: f64,
    k: u32,
) -> Result<Perturbation, UnitaryError> {
    if points.is_empty() {
        return Err(UnitaryError::Contract("empty point list".into()));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(UnitaryError::Contract(format!("eps = {eps} is outside (0, 1]")));
    }
    if k == 0 {
        return Err(UnitaryError::Contract("k must be positive".into()));
    }
    let n = v.rows();
    let residual = v.unitary_residual();
    if residual > FRAME_TOL {
        return Err(MatrixError::NotUnitary(residual).into());
    }
    let kf = f64::from(k);
    for x in points {
        if x.len() != n {
            return Err(MatrixError::Shape(format!("point of length {} in C^{n}", x.len())).into());
        }
        let norm = vec_norm(x);
        if norm < (1.0 / kf) * (1.0 - 1e-12) || norm > kf * (1.0 + 1e-12) {
            return Err(UnitaryError::Contract(format!("point norm {norm} is outside [1/{k}, {k}]")));
        }
    }

    let delta = eps.sin() / (3.0 * kf);
    let moved: Vec<Vec<Complex64>> = points.iter().map(|x| v.matvec(x)).collect();
    // Greedy δ-net of V·points ∪ points.
    let mut centers: Vec<Vec<Complex64>> = Vec::new();
    for x in moved.iter().chain(points) {
        if centers.iter().all(|c| vec_dist(c, x) >= delta) {
            centers.push(x.clone());
        }
    }
    let l = Subspace::span_vectors(n, &centers);
    let needed = 2 * l.dim();
    if needed > n {
        return Err(UnitaryError::Headroom { needed, ambient: n });
    }
    let spec = RotationFamilySpec::from_range(&l)?;
    let w = rotation_group(&spec, eps);

    let distance_to_identity = (&w - &ComplexMatrix::identity(n)).norm2();
    let min_separation = moved
        .iter()
        .flat_map(|y| {
            let wy = w.matvec(y);
            points.iter().map(move |x| vec_dist(&wy, x))
        })
        .fold(f64::INFINITY, f64::min);
    Ok(Perturbation {
        w,
        delta,
        centers: centers.len(),
        l_dim: l.dim(),
        distance_to_identity,
        min_separation,
        norm_ok: distance_to_identity <= eps + BOUND_TOL,
        separation_ok: min_separation >= delta - BOUND_TOL,
    })
}

fn vec_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn vec_dist(x: &[Complex64], y: &[Complex64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
}

/// `δ = λ_min(T² + VT²V*)^{1/2}` and `ε = δ / (2‖TV*‖)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Stability {
    pub delta: f64,
    pub eps: f64,
}

pub fn stability_epsilon(t: &ComplexMatrix, v: &ComplexMatrix) -> Result<Stability, UnitaryError> {
    if !t.is_square() {
        return Err(MatrixError::NotSquare { rows: t.rows(), cols: t.cols() }.into());
    }
    if v.rows() != t.rows() || !v.is_square() {
        return Err(MatrixError::Shape("T and V must have the same square shape".into()).into());
    }
    let residual = v.unitary_residual();
    if residual > FRAME_TOL {
        return Err(MatrixError::NotUnitary(residual).into());
    }
    let t2 = t.matmul(t);
    let m = &t2 + &v.matmul(&t2).matmul(&v.adjoint());
    let e = hermitian_eig(&m)?;
    let floor = RANK_REL_TOL * t.rows() as f64 * e.max();
    if e.max() <= 0.0 || e.min() <= floor {
        return Err(UnitaryError::NotSurjective { lambda_min: e.min() });
    }
    let delta = e.min().sqrt();
    let eps = delta / (2.0 * t.matmul(&v.adjoint()).norm2());
    Ok(Stability { delta, eps })
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub delta: f64,
    pub eps: f64,
    pub samples: usize,
    /// Largest `‖I − W‖` drawn.
    pub max_distance: f64,
    /// Smallest `λ_min(T² + WVT²V*W*) − δ²/4`.
    pub worst_margin: f64,
    pub violations: usize,
    pub pass: bool,
}

/// Draws `samples` unitaries with `‖I − W‖ < ε` and checks
/// `λ_min(T² + WVT²V*W*) ≥ δ²/4` up to `BOUND_TOL`.
pub fn check_stability<R: Rng + ?Sized>(
    t: &ComplexMatrix,
    v: &ComplexMatrix,
    samples: usize,
    rng: &mut R,
) -> Result<StabilityReport, UnitaryError> {
    let Stability { delta, eps } = stability_epsilon(t, v)?;
    let n = t.rows();
    let t2 = t.matmul(t);
    let vt2v = v.matmul(&t2).matmul(&v.adjoint());
    let bound = delta * delta / 4.0;
    let mut max_distance: f64 = 0.0;
    let mut worst_margin = f64::INFINITY;
    let mut violations = 0;
    for _ in 0..samples {
        let w = unitary_near_identity(rng, n, eps);
        max_distance = max_distance.max((&ComplexMatrix::identity(n) - &w).norm2());
        let m = &t2 + &w.matmul(&vt2v).matmul(&w.adjoint());
        let margin = hermitian_eig(&m)?.min() - bound;
        worst_margin = worst_margin.min(margin);
        if margin < -BOUND_TOL {
            violations += 1;
        }
    }
    let pass = violations == 0 && max_distance < eps;
    Ok(StabilityReport { delta, eps, samples, max_distance, worst_margin, violations, pass })
}

/// Truncation of the interleaved pair of ranges: coordinates `𝒦_2..𝒦_m`
/// followed by `ℋ_2..ℋ_m`, one dimension each.
#[derive(Debug, Clone)]
pub struct Interleaved {
    /// Weight `1/2` on the `𝒦` block (shell 1 of `𝓡`) and `2^{-k}` on `ℋ_k`.
    pub t: ComplexMatrix,
    /// Swap `𝒦_k ↔ ℋ_k`; `V𝒮 = 𝓡`.
    pub v: ComplexMatrix,
    pub r_shells: NumericRangeRep,
    pub s_shells: NumericRangeRep,
}

pub fn interleaved_counterexample(m: usize) -> Result<Interleaved, UnitaryError> {
    if m < 2 {
        return Err(UnitaryError::Contract(format!("m = {m}, need m >= 2")));
    }
    let h = m - 1;
    let diag: Vec<f64> = (0..h).map(|_| 0.5).chain((2..=m).map(|k| (-(k as f64)).exp2())).collect();
    let t = ComplexMatrix::from_real_diag(&diag);
    let v = ComplexMatrix::from_fn(2 * h, 2 * h, |i, j| {
        if j == (i + h) % (2 * h) {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let s = v.matmul(&t).matmul(&v.adjoint());
    debug_assert_eq!(svd(&range_sum(&t, &s)?).rank(), 2 * h);
    Ok(Interleaved {
        r_shells: range_shells(&t, SHELL_KERNEL_TOL),
        s_shells: range_shells(&s, SHELL_KERNEL_TOL),
        t,
        v,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FailureRadiusReport {
    pub eps: f64,
    pub samples: usize,
    /// `min σ_min(Ŝ)` over the samples.
    pub min_hat_singular: f64,
    /// Smallest `σ_min(Ŝ) − (σ_min(T̂) − ‖T − S‖)`.
    pub worst_margin: f64,
    pub violations: usize,
    pub pass: bool,
}

/// Samples `S = T + r ε E` with `‖E‖ = 1`, `r ∈ [0, 1)`, and checks
/// `σ_min(Ŝ) ≥ σ_min(T̂) − ‖T − S‖` up to `BOUND_TOL` and `σ_min(Ŝ) > 0`.
pub fn check_failure_radius<R: Rng + ?Sized>(
    t: &ComplexMatrix,
    k: &Subspace,
    samples: usize,
    rng: &mut R,
) -> Result<FailureRadiusReport, UnitaryError> {
    let fr: FailureRadius = failure_radius(t, k)?;
    let n = t.rows();
    let mut min_hat_singular = f64::INFINITY;
    let mut worst_margin = f64::INFINITY;
    let mut violations = 0;
    for _ in 0..samples {
        let e = gaussian_matrix(rng, n, n);
        let e = e.scale(1.0 / e.norm2());
        let r: f64 = rng.random_range(0.0..1.0);
        let s = t + &e.scale(r * fr.eps);
        let dist = (t - &s).norm2();
        let sigma = fr.hat_min_singular(&s);
        min_hat_singular = min_hat_singular.min(sigma);
        let margin = sigma - (fr.eps - dist);
        worst_margin = worst_margin.min(margin);
        if margin < -BOUND_TOL || sigma <= 0.0 {
            violations += 1;
        }
    }
    let pass = fr.eps > 0.0 && violations == 0;
    Ok(FailureRadiusReport { eps: fr.eps, samples, min_hat_singular, worst_margin, violations, pass })
}

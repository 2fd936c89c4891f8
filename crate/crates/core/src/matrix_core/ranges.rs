use serde::Serialize;

use super::eig::hermitian_eig;
use super::subspace::Subspace;
use super::svd::svd;
use super::{ComplexMatrix, MatrixError};
use crate::cardinal::{Cardinal, DimSeq};
use crate::range_rep::RangeRep;
use crate::tolerances::{PSD_NEG_TOL, PSD_NOISE_FACTOR, SHELL_BOUNDARY_TOL};

/// Hermitian square root of a positive semidefinite matrix.
///
/// Eigenvalues in `[−PSD_NEG_TOL·‖M‖, 0)` are clamped to zero, and so are
/// positive eigenvalues at rounding level (below `16·n·ε·‖M‖`), so that the
/// root of a singular matrix does not acquire spurious `√ε` directions.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix, MatrixError> {
    let e = hermitian_eig(m)?;
    let norm = e.values.iter().fold(0.0_f64, |acc, l| acc.max(l.abs()));
    if e.min() < -PSD_NEG_TOL * norm {
        return Err(MatrixError::Indefinite(e.min()));
    }
    let floor = PSD_NOISE_FACTOR * m.rows() as f64 * f64::EPSILON * norm;
    Ok(e.apply_fn(|l| if l > floor { l.sqrt() } else { 0.0 }))
}

/// `A = V P` with `P = (A*A)^{1/2}` and `V` the partial isometry from
/// `(ker A)⊥` onto the closure of the range.
#[derive(Debug, Clone)]
pub struct Polar {
    pub v: ComplexMatrix,
    pub p: ComplexMatrix,
}

pub fn polar(a: &ComplexMatrix) -> Result<Polar, MatrixError> {
    if !a.is_square() {
        return Err(MatrixError::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let d = svd(a);
    let r = d.rank();
    let vr = d.v.column_range(0, r);
    let ur = d.u.column_range(0, r);
    let s = ComplexMatrix::from_real_diag(&d.s[..r]);
    Ok(Polar { v: ur.matmul(&vr.adjoint()), p: vr.matmul(&s).matmul(&vr.adjoint()) })
}

/// `(C C*)^{1/2}`, assembled from the SVD of `C` as `U Σ U*`.
pub fn gram_sqrt(c: &ComplexMatrix) -> ComplexMatrix {
    let d = svd(c);
    let r = d.rank();
    let ur = d.u.column_range(0, r);
    ur.matmul(&ComplexMatrix::from_real_diag(&d.s[..r])).matmul(&ur.adjoint())
}

/// `(T T* + S S*)^{1/2}`, whose range is `rg T + rg S`.
pub fn range_sum(t: &ComplexMatrix, s: &ComplexMatrix) -> Result<ComplexMatrix, MatrixError> {
    if t.rows() != s.rows() {
        return Err(MatrixError::Shape(format!("row counts {} and {} differ", t.rows(), s.rows())));
    }
    Ok(gram_sqrt(&t.hstack(s)))
}

/// Column-space inclusion `rg A ⊆ rg B`, decided as `rank [B | A] = rank B`.
pub fn douglas_inclusion(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<bool, MatrixError> {
    if a.rows() != b.rows() {
        return Err(MatrixError::Shape(format!("row counts {} and {} differ", a.rows(), b.rows())));
    }
    Ok(svd(&b.hstack(a)).rank() == svd(b).rank())
}

/// Dyadic shell decomposition of `rg T` in the range space `C^rows`.
#[derive(Debug, Clone)]
pub struct NumericRangeRep {
    /// Shell `k` (0-based) holds singular values in
    /// `(2^{-(k+s+1)}, 2^{-(k+s)}]` with `s = scale_shift`.
    pub shells: Vec<Subspace>,
    pub kernel: Subspace,
    pub scale_shift: i64,
}

impl NumericRangeRep {
    pub fn shell_dims(&self) -> Vec<usize> {
        self.shells.iter().map(Subspace::dim).collect()
    }

    pub fn kernel_dim(&self) -> usize {
        self.kernel.dim()
    }

    /// The finite shell list read as a symbolic representation: the kernel
    /// is the complement of the range closure, the shells are listed in order
    /// and followed by zeros.
    pub fn to_symbolic(&self) -> RangeRep {
        let prefix = self.shell_dims().into_iter().map(|d| Cardinal::Finite(d as u64)).collect();
        RangeRep::new(Cardinal::Finite(self.kernel_dim() as u64), DimSeq::finite(prefix))
            .expect("finite dimensions never overflow")
    }
}

#[derive(Serialize)]
struct NumericRangeRepJson<'a> {
    shell_dims: Vec<usize>,
    kernel_dim: usize,
    scale_shift: i64,
    shells: Vec<&'a ComplexMatrix>,
    kernel: &'a ComplexMatrix,
}

impl Serialize for NumericRangeRep {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        NumericRangeRepJson {
            shell_dims: self.shell_dims(),
            kernel_dim: self.kernel_dim(),
            scale_shift: self.scale_shift,
            shells: self.shells.iter().map(Subspace::frame).collect(),
            kernel: self.kernel.frame(),
        }
        .serialize(serializer)
    }
}

/// Index `j` with `σ ∈ (2^{-(j+1)}, 2^{-j}]`. A value within
/// `SHELL_BOUNDARY_TOL` (relative) of a power `2^{-j}` is put in shell `j`.
fn dyadic_index(sigma: f64) -> i64 {
    let x = -sigma.log2();
    let nearest = x.round();
    if (sigma * nearest.exp2() - 1.0).abs() <= SHELL_BOUNDARY_TOL {
        return nearest as i64;
    }
    x.floor() as i64
}

/// Bins the singular values of `T` (the eigenvalues of `(TT*)^{1/2}`) into
/// dyadic shells. Values at or below `tol · ‖T‖` go to the kernel.
pub fn range_shells(t: &ComplexMatrix, tol: f64) -> NumericRangeRep {
    let n = t.rows();
    let d = svd(t);
    let top = d.s.first().copied().unwrap_or(0.0);
    let cutoff = tol * top;
    let live: Vec<usize> = (0..d.s.len()).filter(|&i| top > 0.0 && d.s[i] > cutoff).collect();
    if live.is_empty() {
        return NumericRangeRep { shells: Vec::new(), kernel: Subspace::full(n), scale_shift: 0 };
    }
    let scale_shift = dyadic_index(top);
    let idx: Vec<usize> = live.iter().map(|&i| (dyadic_index(d.s[i]) - scale_shift).max(0) as usize).collect();
    let count = idx.iter().max().map_or(0, |m| m + 1);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); count];
    for (&col, &k) in live.iter().zip(&idx) {
        members[k].push(col);
    }
    let shells: Vec<Subspace> = members
        .iter()
        .map(|cols| Subspace::from_frame(d.u.select_columns(cols)).expect("SVD columns are orthonormal"))
        .collect();
    let range = Subspace::from_frame(d.u.select_columns(&live)).expect("SVD columns are orthonormal");
    NumericRangeRep { shells, kernel: range.complement(), scale_shift }
}

#[derive(Debug, Clone, Serialize)]
pub struct AdjointShells {
    pub shells_a: Vec<usize>,
    pub shells_a_star: Vec<usize>,
    /// `dim ker A`.
    pub kernel_a: usize,
    /// `dim ker A*`.
    pub kernel_a_star: usize,
}

impl AdjointShells {
    pub fn shells_match(&self) -> bool {
        self.shells_a == self.shells_a_star
    }

    /// Whether a unitary carrying `rg A` onto `rg A*` exists.
    pub fn unitary_exists(&self) -> bool {
        self.shells_match() && self.kernel_a == self.kernel_a_star
    }
}

/// Shell dimensions of `rg A` and `rg A*`, with the kernel dimensions of `A`
/// and `A*`. Rectangular `A` is accepted.
pub fn adjoint_range_shells(a: &ComplexMatrix, tol: f64) -> AdjointShells {
    let ra = range_shells(a, tol);
    let ras = range_shells(&a.adjoint(), tol);
    AdjointShells {
        shells_a: ra.shell_dims(),
        shells_a_star: ras.shell_dims(),
        kernel_a: ras.kernel_dim(),
        kernel_a_star: ra.kernel_dim(),
    }
}

/// The isomorphism `T̂(x, h) = T x + h` on `W × K⊥`, `W = T^{-1}(K) ∩ (ker T)⊥`,
/// and its smallest singular value.
#[derive(Debug, Clone)]
pub struct FailureRadius {
    pub eps: f64,
    pub w: Subspace,
    pub k_perp: Subspace,
}

impl FailureRadius {
    /// `Ŝ = [S W | K⊥]`.
    pub fn hat_operator(&self, s: &ComplexMatrix) -> ComplexMatrix {
        s.matmul(self.w.frame()).hstack(self.k_perp.frame())
    }

    pub fn hat_min_singular(&self, s: &ComplexMatrix) -> f64 {
        svd(&self.hat_operator(s)).s.last().copied().unwrap_or(0.0)
    }
}

pub fn failure_radius(t: &ComplexMatrix, k: &Subspace) -> Result<FailureRadius, MatrixError> {
    if !t.is_square() {
        return Err(MatrixError::NotSquare { rows: t.rows(), cols: t.cols() });
    }
    let n = t.rows();
    if k.ambient() != n {
        return Err(MatrixError::Shape(format!("subspace lives in C^{} but T acts on C^{n}", k.ambient())));
    }
    if 2 * k.dim() <= n {
        return Err(MatrixError::Precondition(format!("dim K = {} does not exceed dim K⊥ = {}", k.dim(), n - k.dim())));
    }
    if !douglas_inclusion(k.frame(), t)? {
        return Err(MatrixError::Precondition("K is not contained in the range of T".into()));
    }
    // T⁺ K spans W.
    let d = svd(t);
    let r = d.rank();
    let inv_s: Vec<f64> = d.s[..r].iter().map(|s| 1.0 / s).collect();
    let pinv = d
        .v
        .column_range(0, r)
        .matmul(&ComplexMatrix::from_real_diag(&inv_s))
        .matmul(&d.u.column_range(0, r).adjoint());
    let w = Subspace::span(&pinv.matmul(k.frame()));
    let fr = FailureRadius { eps: 0.0, w, k_perp: k.complement() };
    let eps = fr.hat_min_singular(t);
    Ok(FailureRadius { eps, ..fr })
}

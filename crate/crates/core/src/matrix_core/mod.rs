//! Dense complex linear algebra at desk scale and the range constructions
//! realized on concrete matrices.

mod eig;
mod matrix;
pub mod random;
mod ranges;
mod subspace;
mod svd;

pub use eig::{hermitian_eig, HermitianEig};
pub use matrix::ComplexMatrix;
pub use ranges::{
    adjoint_range_shells, douglas_inclusion, failure_radius, gram_sqrt, polar, psd_sqrt, range_shells, range_sum,
    AdjointShells, FailureRadius, NumericRangeRep, Polar,
};
pub use subspace::{orthonormal_completion, subspace_intersection, Subspace};
pub use svd::{rank, singular_values, svd, Svd};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("shape error: {0}")]
    Shape(String),
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (residual {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not unitary (residual {0:.3e})")]
    NotUnitary(f64),
    #[error("frame is not orthonormal (residual {0:.3e})")]
    NotOrthonormal(f64),
    #[error("matrix is indefinite (smallest eigenvalue {0:.3e})")]
    Indefinite(f64),
    #[error("Jacobi iteration did not converge in {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
}

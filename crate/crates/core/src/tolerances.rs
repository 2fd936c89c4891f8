//! Every numeric tolerance and Monte Carlo budget in one place.

/// Orthonormality of `Subspace` frames and unitarity of constructed operators.
pub const FRAME_TOL: f64 = 1e-10;
/// Hermitian symmetry accepted by the eigensolver (relative to `max(1, ‖M‖_F)`).
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Jacobi convergence: off-diagonal Frobenius norm below this times `‖M‖_F`.
pub const JACOBI_OFF_TOL: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// One-sided Jacobi SVD: columns `p, q` count as orthogonal once
/// `|a_p* a_q| <= SVD_ORTH_TOL · ‖a_p‖ ‖a_q‖`.
pub const SVD_ORTH_TOL: f64 = 1e-15;
/// Numerical rank: `σ > max(rows, cols) · σ_max · RANK_REL_TOL`.
pub const RANK_REL_TOL: f64 = 1e-12;
/// Eigenvalues of a PSD input may dip to `-PSD_NEG_TOL · ‖M‖` before it is
/// declared indefinite.
pub const PSD_NEG_TOL: f64 = 1e-9;
/// Eigenvalues of a PSD input below `PSD_NOISE_FACTOR · n · ε · ‖M‖` are
/// rounding noise and are set to zero before taking square roots.
pub const PSD_NOISE_FACTOR: f64 = 16.0;
/// Relative distance to a dyadic boundary `2^{-j}` within which a value is
/// snapped onto the boundary before shell binning.
pub const SHELL_BOUNDARY_TOL: f64 = 1e-12;
/// Default kernel cutoff for shell binning, relative to `‖T‖`.
pub const SHELL_KERNEL_TOL: f64 = 1e-12;
/// Principal cosines within this of 1 mark intersection directions.
pub const INTERSECTION_TOL: f64 = 1e-8;
/// Slack on inequality checks in Monte Carlo verifications.
pub const BOUND_TOL: f64 = 1e-9;
/// Group law and reflection residuals.
pub const GROUP_LAW_TOL: f64 = 1e-10;

pub const DEFAULT_SEED: u64 = 7;
pub const STABILITY_SAMPLES: usize = 100;
pub const FAILURE_RADIUS_SAMPLES: usize = 200;
pub const PERTURBATION_INSTANCES: usize = 50;
pub const FAMILY_GRID: usize = 10;

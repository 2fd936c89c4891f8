//! Seeded random test matrices.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::svd::{dot, norm_sq};
use super::ComplexMatrix;

pub type TestRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian entry, `E|z|² = 1`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| complex_normal(rng)).collect()
}

/// Gaussian matrix of rank at most `rank`.
pub fn low_rank_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, rank: usize) -> ComplexMatrix {
    gaussian_matrix(rng, rows, rank).matmul(&gaussian_matrix(rng, rank, cols))
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n, n);
    (&g + &g.adjoint()).scale(0.5)
}

/// Haar-distributed unitary: Gram-Schmidt QR of a complex Gaussian matrix.
/// Gram-Schmidt yields a positive diagonal in `R`, which is the phase
/// normalization that makes `Q` Haar.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    loop {
        let g = gaussian_matrix(rng, n, n);
        let mut q: Vec<Vec<Complex64>> = Vec::with_capacity(n);
        let mut degenerate = false;
        for col in g.columns() {
            let mut r = col;
            for _ in 0..2 {
                for b in &q {
                    let c = dot(b, &r);
                    for (ri, bi) in r.iter_mut().zip(b) {
                        *ri -= c * bi;
                    }
                }
            }
            let nr = norm_sq(&r).sqrt();
            if nr < 1e-8 {
                degenerate = true;
                break;
            }
            q.push(r.iter().map(|z| z / nr).collect());
        }
        if !degenerate {
            return ComplexMatrix::from_columns(n, &q);
        }
    }
}

/// Random unitary `W = Q diag(e^{iθ_j}) Q*` with `‖I − W‖ < max_dist`.
pub fn unitary_near_identity<R: Rng + ?Sized>(rng: &mut R, n: usize, max_dist: f64) -> ComplexMatrix {
    // ‖I − W‖ = max_j 2|sin(θ_j / 2)|.
    let theta_max = if max_dist >= 2.0 { std::f64::consts::PI } else { 2.0 * (max_dist / 2.0).asin() };
    let q = haar_unitary(rng, n);
    let phases: Vec<Complex64> =
        (0..n).map(|_| Complex64::from_polar(1.0, rng.random_range(-1.0..1.0) * theta_max)).collect();
    let d = ComplexMatrix::from_fn(n, n, |i, j| if i == j { phases[i] } else { Complex64::new(0.0, 0.0) });
    q.matmul(&d).matmul(&q.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_is_unitary_and_seeded() {
        let a = haar_unitary(&mut seeded_rng(1), 6);
        let b = haar_unitary(&mut seeded_rng(1), 6);
        assert_eq!(a, b);
        assert!(a.unitary_residual() < 1e-13);
    }

    #[test]
    fn near_identity_respects_the_radius() {
        let mut rng = seeded_rng(2);
        for _ in 0..20 {
            let w = unitary_near_identity(&mut rng, 5, 0.3);
            assert!(w.unitary_residual() < 1e-13);
            assert!((&ComplexMatrix::identity(5) - &w).norm2() < 0.3);
        }
    }
}

//! Interferometer matrices: Haar-random generation, unitarity checks and the
//! real quadrature representation of a passive transformation.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Tolerance used for `U U^† = I` checks.
pub const UNITARY_TOL: f64 = 1e-10;

/// Draws an `m x m` Haar-distributed unitary.
///
/// A complex Ginibre matrix is QR-factorised and the columns of `Q` are
/// rephased by `R_jj / |R_jj|` so that the result is Haar distributed rather
/// than biased by the QR sign convention. The draw is a pure function of
/// `(m, seed)`.
pub fn haar_unitary(m: usize, seed: u64) -> DMatrix<Complex64> {
    assert!(m >= 1, "haar_unitary needs at least one mode");
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let z = DMatrix::from_fn(m, m, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    });
    let qr = z.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..m {
        let d = r[(j, j)];
        let norm = d.norm();
        let phase = if norm > 0.0 { d / norm } else { Complex64::new(1.0, 0.0) };
        for i in 0..m {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Largest entry-wise deviation of `U U^†` from the identity.
pub fn unitarity_deviation(u: &DMatrix<Complex64>) -> f64 {
    let prod = u * u.adjoint();
    let mut worst = 0.0f64;
    for i in 0..prod.nrows() {
        for j in 0..prod.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((prod[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

pub fn check_unitary(u: &DMatrix<Complex64>) -> Result<()> {
    if u.nrows() != u.ncols() {
        return Err(Error::DimensionMismatch {
            expected: u.nrows(),
            actual: u.ncols(),
        });
    }
    let deviation = unitarity_deviation(u);
    if deviation > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(())
}

/// Real `2M x 2M` image of a passive mode transformation `a -> U a` acting on
/// xxpp-ordered quadratures: `[[Re U, -Im U], [Im U, Re U]]`.
pub fn symplectic_image(u: &DMatrix<Complex64>) -> DMatrix<f64> {
    let m = u.nrows();
    let mut s = DMatrix::zeros(2 * m, 2 * m);
    for i in 0..m {
        for j in 0..m {
            let z = u[(i, j)];
            s[(i, j)] = z.re;
            s[(i, m + j)] = -z.im;
            s[(m + i, j)] = z.im;
            s[(m + i, m + j)] = z.re;
        }
    }
    s
}

/// Real 50:50 beamsplitter on two modes.
pub fn balanced_splitter() -> DMatrix<Complex64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(h, 0.0),
            Complex64::new(h, 0.0),
            Complex64::new(h, 0.0),
            Complex64::new(-h, 0.0),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_mode_is_a_phase() {
        for seed in 0..20 {
            let u = haar_unitary(1, seed);
            assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn outputs_are_unitary_and_deterministic() {
        for m in [2, 5, 12] {
            let u = haar_unitary(m, 42);
            assert!(unitarity_deviation(&u) < UNITARY_TOL);
            assert_eq!(u, haar_unitary(m, 42));
            assert_ne!(u, haar_unitary(m, 43));
        }
    }

    #[test]
    fn rejects_non_unitary() {
        let mut u = haar_unitary(3, 1);
        u[(0, 0)] *= 1.01;
        assert!(matches!(check_unitary(&u), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn symplectic_image_is_orthogonal() {
        let u = haar_unitary(4, 9);
        let s = symplectic_image(&u);
        let id = &s * s.transpose();
        assert!((id - DMatrix::<f64>::identity(8, 8)).amax() < 1e-12);
    }
}

//! Gaussian states in the quadrature representation.
//!
//! Conventions: quadratures are xxpp ordered, `x = a + a^†`, `p = -i(a - a^†)`,
//! so the vacuum has zero mean and identity covariance.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::unitary::{check_unitary, symplectic_image};

const SYMMETRY_TOL: f64 = 1e-12;
const UNCERTAINTY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    num_modes: usize,
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

fn check_non_negative(name: &str, value: f64) -> Result<()> {
    if !(value >= 0.0) || !value.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "{name} must be a finite non-negative number, got {value}"
        )));
    }
    Ok(())
}

impl GaussianState {
    /// Builds a state after checking symmetry and the uncertainty relation.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let dim = cov.nrows();
        if !dim.is_multiple_of(2) || dim == 0 || cov.ncols() != dim {
            return Err(Error::InvalidParameter(format!(
                "covariance must be a non-empty 2M x 2M matrix, got {}x{}",
                cov.nrows(),
                cov.ncols()
            )));
        }
        if mean.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: mean.len(),
            });
        }
        let state = Self {
            num_modes: dim / 2,
            mean,
            cov,
        };
        state.validate()?;
        Ok(state)
    }

    /// Internal constructor for transformations that preserve physicality.
    pub(crate) fn from_parts(mean: DVector<f64>, cov: DMatrix<f64>) -> Self {
        Self {
            num_modes: cov.nrows() / 2,
            mean,
            cov,
        }
    }

    pub fn vacuum(num_modes: usize) -> Self {
        Self::from_parts(
            DVector::zeros(2 * num_modes),
            DMatrix::identity(2 * num_modes, 2 * num_modes),
        )
    }

    /// Two-mode squeezed vacuum with squeezing `r`.
    pub fn tmss(r: f64) -> Result<Self> {
        check_non_negative("squeezing", r)?;
        let c = (2.0 * r).cosh();
        let s = (2.0 * r).sinh();
        #[rustfmt::skip]
        let cov = DMatrix::from_row_slice(4, 4, &[
            c, s, 0.0, 0.0,
            s, c, 0.0, 0.0,
            0.0, 0.0, c, -s,
            0.0, 0.0, -s, c,
        ]);
        Ok(Self::from_parts(DVector::zeros(4), cov))
    }

    /// Single-mode squeezed vacuum, squeezed in `x`.
    pub fn squeezed_vacuum(r: f64) -> Result<Self> {
        check_non_negative("squeezing", r)?;
        let cov = DMatrix::from_diagonal(&DVector::from_vec(vec![(-2.0 * r).exp(), (2.0 * r).exp()]));
        Ok(Self::from_parts(DVector::zeros(2), cov))
    }

    pub fn thermal(nbar: f64) -> Result<Self> {
        check_non_negative("mean photon number", nbar)?;
        Ok(Self::from_parts(
            DVector::zeros(2),
            DMatrix::identity(2, 2) * (1.0 + 2.0 * nbar),
        ))
    }

    /// Squashed state: vacuum noise in `p`, enlarged `x` variance chosen so
    /// the mean photon number is exactly `nbar`.
    pub fn squashed(nbar: f64) -> Result<Self> {
        check_non_negative("mean photon number", nbar)?;
        let cov = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0 + 4.0 * nbar, 1.0]));
        Ok(Self::from_parts(DVector::zeros(2), cov))
    }

    /// Classical stand-in for `tmss(r)` with `nbar = sinh^2 r` per arm.
    ///
    /// A TMSS is two single-mode squeezers (anti-squeezed in `x` and in `p`)
    /// behind a balanced splitter; each squeezer is replaced by a squashed
    /// state of the same mean photon number. The arms keep thermal marginals
    /// and classical quadrature correlations `+-2 nbar` in place of
    /// `+-sinh 2r`.
    pub fn squashed_pair(nbar: f64) -> Result<Self> {
        let plus = Self::squashed(nbar)?;
        let minus = Self::from_parts(
            DVector::zeros(2),
            DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0 + 4.0 * nbar])),
        );
        plus.tensor(&minus).apply_unitary(&crate::unitary::balanced_splitter())
    }

    /// Coherent state `|alpha>`.
    pub fn coherent(alpha: Complex64) -> Self {
        Self::from_parts(
            DVector::from_vec(vec![2.0 * alpha.re, 2.0 * alpha.im]),
            DMatrix::identity(2, 2),
        )
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn is_zero_mean(&self) -> bool {
        self.mean.iter().all(|&v| v == 0.0)
    }

    /// Checks symmetry and `cov + i Omega >= 0`.
    pub fn validate(&self) -> Result<()> {
        let dim = self.cov.nrows();
        let scale = self.cov.amax().max(1.0);
        let deviation = (&self.cov - self.cov.transpose()).amax();
        if deviation > SYMMETRY_TOL * scale {
            return Err(Error::NotSymmetric { deviation });
        }
        let m = self.num_modes;
        let herm = DMatrix::from_fn(dim, dim, |i, j| {
            let omega = if i < m && j == i + m {
                1.0
            } else if i >= m && j + m == i {
                -1.0
            } else {
                0.0
            };
            Complex64::new(self.cov[(i, j)], omega)
        });
        let min_eigenvalue = herm
            .symmetric_eigenvalues()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eigenvalue < -UNCERTAINTY_TOL * scale {
            return Err(Error::Unphysical { min_eigenvalue });
        }
        Ok(())
    }

    /// Mean photon number of mode `i`.
    pub fn mode_mean_photon_number(&self, i: usize) -> f64 {
        let m = self.num_modes;
        let (xi, pi) = (i, i + m);
        (self.cov[(xi, xi)] + self.cov[(pi, pi)] + self.mean[xi].powi(2) + self.mean[pi].powi(2) - 2.0) / 4.0
    }

    /// Total mean photon number.
    pub fn mean_photon_number(&self) -> f64 {
        (0..self.num_modes).map(|i| self.mode_mean_photon_number(i)).sum()
    }

    /// Direct sum: modes of `self` followed by modes of `other`.
    pub fn tensor(&self, other: &GaussianState) -> GaussianState {
        let (m1, m2) = (self.num_modes, other.num_modes);
        let m = m1 + m2;
        let place = |local: usize, n: usize, offset: usize| -> usize {
            if local < n {
                offset + local
            } else {
                m + offset + (local - n)
            }
        };
        let mut mean = DVector::zeros(2 * m);
        let mut cov = DMatrix::zeros(2 * m, 2 * m);
        for (state, n, offset) in [(self, m1, 0), (other, m2, m1)] {
            for a in 0..2 * n {
                let ga = place(a, n, offset);
                mean[ga] = state.mean[a];
                for b in 0..2 * n {
                    cov[(ga, place(b, n, offset))] = state.cov[(a, b)];
                }
            }
        }
        GaussianState::from_parts(mean, cov)
    }

    /// Places this state on `positions` of a `total`-mode register, with
    /// vacuum on every other mode.
    pub fn embed(&self, total: usize, positions: &[usize]) -> Result<GaussianState> {
        if positions.len() != self.num_modes {
            return Err(Error::DimensionMismatch {
                expected: self.num_modes,
                actual: positions.len(),
            });
        }
        if let Some(&bad) = positions.iter().find(|&&p| p >= total) {
            return Err(Error::InvalidParameter(format!(
                "mode {bad} out of range for {total} modes"
            )));
        }
        let mut out = GaussianState::vacuum(total);
        let n = self.num_modes;
        let global = |local: usize| -> usize {
            if local < n {
                positions[local]
            } else {
                total + positions[local - n]
            }
        };
        for a in 0..2 * n {
            out.mean[global(a)] = self.mean[a];
            for b in 0..2 * n {
                out.cov[(global(a), global(b))] = self.cov[(a, b)];
            }
        }
        Ok(out)
    }

    /// Marginal state on `modes` (in the given order).
    pub fn reduced(&self, modes: &[usize]) -> GaussianState {
        let m = self.num_modes;
        let idx: Vec<usize> = modes.iter().copied().chain(modes.iter().map(|&i| i + m)).collect();
        let mean = DVector::from_iterator(idx.len(), idx.iter().map(|&i| self.mean[i]));
        let cov = DMatrix::from_fn(idx.len(), idx.len(), |a, b| self.cov[(idx[a], idx[b])]);
        GaussianState::from_parts(mean, cov)
    }

    /// Passive interferometer `a -> U a`.
    pub fn apply_unitary(&self, u: &DMatrix<Complex64>) -> Result<GaussianState> {
        if u.nrows() != self.num_modes {
            return Err(Error::DimensionMismatch {
                expected: self.num_modes,
                actual: u.nrows(),
            });
        }
        check_unitary(u)?;
        let s = symplectic_image(u);
        Ok(GaussianState::from_parts(
            &s * &self.mean,
            &s * &self.cov * s.transpose(),
        ))
    }

    /// Per-mode pure-loss channel with transmissions `eta`.
    pub fn apply_loss(&self, eta: &[f64]) -> Result<GaussianState> {
        if eta.len() != self.num_modes {
            return Err(Error::DimensionMismatch {
                expected: self.num_modes,
                actual: eta.len(),
            });
        }
        if let Some(&bad) = eta.iter().find(|&&e| !(0.0..=1.0).contains(&e)) {
            return Err(Error::InvalidParameter(format!("transmission {bad} outside [0, 1]")));
        }
        let m = self.num_modes;
        let g: Vec<f64> = (0..2 * m).map(|a| eta[a % m].sqrt()).collect();
        let mut mean = self.mean.clone();
        let mut cov = self.cov.clone();
        for a in 0..2 * m {
            mean[a] *= g[a];
            for b in 0..2 * m {
                cov[(a, b)] *= g[a] * g[b];
            }
            cov[(a, a)] += 1.0 - g[a] * g[a];
        }
        Ok(GaussianState::from_parts(mean, cov))
    }

    /// Balanced `1 -> F` fan-out of every mode into `F` bins. Bin `j` of mode
    /// `i` becomes mode `i * F + j` of the output.
    pub fn fan_out(&self, fanout: usize) -> Result<GaussianState> {
        if fanout < 1 {
            return Err(Error::InvalidParameter("fan-out must be at least 1".into()));
        }
        if fanout == 1 {
            return Ok(self.clone());
        }
        let m = self.num_modes;
        let mf = m * fanout;
        let amp = 1.0 / (fanout as f64).sqrt();
        // Passive map with vacuum ancillas: V' = I + T (V - I) T^T, mean' = T mean.
        let parent = |out: usize| -> usize {
            if out < mf {
                out / fanout
            } else {
                m + (out - mf) / fanout
            }
        };
        let mean = DVector::from_fn(2 * mf, |a, _| amp * self.mean[parent(a)]);
        let cov = DMatrix::from_fn(2 * mf, 2 * mf, |a, b| {
            let (pa, pb) = (parent(a), parent(b));
            let excess = self.cov[(pa, pb)] - if pa == pb { 1.0 } else { 0.0 };
            amp * amp * excess + if a == b { 1.0 } else { 0.0 }
        });
        Ok(GaussianState::from_parts(mean, cov))
    }
}

/// Phase-randomised coherent state with `|alpha|^2 = nbar`.
///
/// The mixture over phases is not Gaussian; samplers draw a fresh phase per
/// sample and probability evaluation uses a fixed-phase representative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentMockup {
    amplitude: f64,
}

impl CoherentMockup {
    pub fn new(nbar: f64) -> Result<Self> {
        check_non_negative("mean photon number", nbar)?;
        Ok(Self { amplitude: nbar.sqrt() })
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn alpha(&self, phase: f64) -> Complex64 {
        Complex64::from_polar(self.amplitude, phase)
    }

    pub fn with_phase(&self, phase: f64) -> GaussianState {
        GaussianState::coherent(self.alpha(phase))
    }
}

pub fn tmss(r: f64) -> Result<GaussianState> {
    GaussianState::tmss(r)
}

pub fn thermal_state(nbar: f64) -> Result<GaussianState> {
    GaussianState::thermal(nbar)
}

pub fn squashed_state(nbar: f64) -> Result<GaussianState> {
    GaussianState::squashed(nbar)
}

pub fn coherent_mockup_state(nbar: f64) -> Result<CoherentMockup> {
    CoherentMockup::new(nbar)
}

//! Interference-plus-noise covariance models and the colored Gaussian
//! sampler.
//!
//! A model is the pair (A, sigma_I^2): A is the normalized frequency-domain
//! covariance (Hermitian PSD, unit diagonal) and sigma_I^2 the per-subcarrier
//! interference-plus-noise power, so the frequency covariance is
//! R_w = sigma_I^2 A. Samples are independent across OFDM symbols (the
//! temporal covariance is sigma_I^2 I).

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrixkit::{hermitian_eigenvalues, psd_sqrt, ComplexMatrix, C64, PSD_CLAMP_REL};

/// Colored interference-plus-noise model with a cached PSD square root of A
/// so sampling is a dense matrix-vector product.
#[derive(Clone, Debug)]
pub struct InterferenceModel {
    a: ComplexMatrix,
    sigma2: f64,
    sqrt_a: ComplexMatrix,
}

impl InterferenceModel {
    fn build(a: ComplexMatrix, sigma2: f64) -> Result<Self> {
        if sigma2 <= 0.0 {
            return Err(Error::Parameter(format!(
                "interference power sigma2 = {sigma2} must be positive"
            )));
        }
        // The eigendecomposition square root tolerates the rank-deficient
        // rho = 1 covariance, which Cholesky would not.
        let sqrt_a = psd_sqrt(&a)?;
        Ok(Self { a, sigma2, sqrt_a })
    }

    /// Normalized frequency covariance A (unit diagonal).
    pub fn a(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn sqrt_a(&self) -> &ComplexMatrix {
        &self.sqrt_a
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    /// One block of `n_p` independent colored noise vectors, one per pilot
    /// OFDM symbol: w_p = sqrt(sigma2) * sqrt(A) * g_p with g_p ~ CN(0, I).
    pub fn sample_noise_block(&self, n_p: usize, rng: &mut impl Rng) -> Vec<Vec<C64>> {
        let n = self.n();
        let amp = self.sigma2.sqrt();
        (0..n_p)
            .map(|_| {
                let g: Vec<C64> = (0..n)
                    .map(|_| {
                        // Re and Im i.i.d. N(0, 1/2) so E|g|^2 = 1.
                        let re: f64 = rng.sample(StandardNormal);
                        let im: f64 = rng.sample(StandardNormal);
                        Complex64::new(re, im) * (0.5f64).sqrt()
                    })
                    .collect();
                let mut w = self.sqrt_a.matvec(&g).expect("cached sqrt has size N");
                for z in &mut w {
                    *z *= amp;
                }
                w
            })
            .collect()
    }
}

/// Exponential correlation model A_ij = rho^|i-j|; rho = 0 is white, rho = 1
/// fully correlated.
pub fn exponential_model(n: usize, rho: f64, sigma2: f64) -> Result<InterferenceModel> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::Parameter(format!(
            "correlation factor rho = {rho} must lie in [0, 1]"
        )));
    }
    let a = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(1.0, 0.0)
        } else {
            C64::new(rho.powi((i as i32 - j as i32).abs()), 0.0)
        }
    });
    InterferenceModel::build(a, sigma2)
}

/// White interference: A = I.
pub fn identity_model(n: usize, sigma2: f64) -> Result<InterferenceModel> {
    InterferenceModel::build(ComplexMatrix::identity(n), sigma2)
}

/// Fully correlated interference: A is the all-ones matrix, every sample is
/// a common scalar on all subcarriers.
pub fn all_ones_model(n: usize, sigma2: f64) -> Result<InterferenceModel> {
    let a = ComplexMatrix::from_fn(n, n, |_, _| C64::new(1.0, 0.0));
    InterferenceModel::build(a, sigma2)
}

/// General Hermitian Toeplitz model from the first correlation column r,
/// A_ij = r(i-j) with r(-k) = conj(r(k)). Requires r(0) = 1 and a PSD result.
pub fn toeplitz_model(r: &[C64], sigma2: f64) -> Result<InterferenceModel> {
    let n = r.len();
    if n == 0 {
        return Err(Error::Parameter("empty correlation sequence".into()));
    }
    if (r[0] - C64::new(1.0, 0.0)).norm() > 1e-12 {
        return Err(Error::Parameter(format!(
            "r(0) must be 1 (unit diagonal), got {}",
            r[0]
        )));
    }
    let a = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(1.0, 0.0)
        } else if i > j {
            r[i - j]
        } else {
            r[j - i].conj()
        }
    });
    // Report the most negative eigenvalue by name when the sequence is not a
    // valid correlation.
    let eigs = hermitian_eigenvalues(&a)?;
    let lambda_max = eigs.first().copied().unwrap_or(0.0).max(0.0);
    if let Some(&min) = eigs.last() {
        if min < -PSD_CLAMP_REL * lambda_max.max(1e-300) {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
            });
        }
    }
    InterferenceModel::build(a, sigma2)
}

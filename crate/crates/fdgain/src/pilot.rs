//! Pilot matrix construction and the per-subcarrier MSE objective.
//!
//! The optimal pilot condition is P_k^H P_k = (N_P (P_S + P_D) / 2) I_2: any
//! two columns of an N_P-point unitary matrix, scaled to the power budget,
//! achieve it. The same matrix is reused on every subcarrier.

use crate::error::{Error, Result};
use crate::matrixkit::{dft_tall, ComplexMatrix, C64};

/// Pilot configuration for one estimation block.
///
/// `pilot` is the shared N_P x 2 matrix P_k (column 1: source symbols,
/// column 2: destination symbols), reused on all N subcarriers.
#[derive(Clone, Debug)]
pub struct PilotBlock {
    pub n: usize,
    pub n_p: usize,
    pub p_s: f64,
    pub p_d: f64,
    pilot: ComplexMatrix,
}

impl PilotBlock {
    pub fn new(n: usize, n_p: usize, p_s: f64, p_d: f64, pilot: ComplexMatrix) -> Result<Self> {
        if n_p < 2 {
            return Err(Error::UnderDetermined { n_p });
        }
        if p_s <= 0.0 || p_d <= 0.0 {
            return Err(Error::Parameter(format!(
                "pilot powers must be positive (P_S = {p_s}, P_D = {p_d})"
            )));
        }
        if pilot.rows() != n_p || pilot.cols() != 2 {
            return Err(Error::Dimension(format!(
                "pilot matrix must be {}x2, got {}x{}",
                n_p,
                pilot.rows(),
                pilot.cols()
            )));
        }
        Ok(Self {
            n,
            n_p,
            p_s,
            p_d,
            pilot,
        })
    }

    /// Pilot matrix on subcarrier `k`. One matrix is shared across all
    /// subcarriers, so `k` only participates in bounds checking.
    pub fn pilot_for(&self, k: usize) -> &ComplexMatrix {
        debug_assert!(k < self.n);
        &self.pilot
    }

    pub fn pilot(&self) -> &ComplexMatrix {
        &self.pilot
    }

    /// Gram matrix P_k^H P_k.
    pub fn gram(&self) -> ComplexMatrix {
        self.pilot
            .herm()
            .matmul(&self.pilot)
            .expect("N_P x 2 pilot")
    }

    /// Target Gram scale of the optimal pilot condition.
    pub fn optimal_gram_scale(&self) -> f64 {
        self.n_p as f64 * (self.p_s + self.p_d) / 2.0
    }

    /// True when the relaxed optimum exceeds an individual node's power cap
    /// N_P * min(P_S, P_D); the trace-constrained optimum can do that when
    /// P_S != P_D.
    pub fn per_node_cap_exceeded(&self) -> bool {
        self.optimal_gram_scale() > self.n_p as f64 * self.p_s.min(self.p_d)
    }
}

/// Optimal pilot block: P_k = c [u_1 u_2] with u_1, u_2 the first two columns
/// of the N_P-point DFT matrix and c = sqrt(N_P (P_S + P_D) / 2).
pub fn optimal_pilot_block(n: usize, n_p: usize, p_s: f64, p_d: f64) -> Result<PilotBlock> {
    if n_p < 2 {
        return Err(Error::UnderDetermined { n_p });
    }
    let cols = dft_tall(n_p, 2)?;
    let c = (n_p as f64 * (p_s + p_d) / 2.0).sqrt();
    let pilot = cols.scale(C64::new(c, 0.0));
    PilotBlock::new(n, n_p, p_s, p_d, pilot)
}

/// The paper's 16QAM example pilot for N_P = 4: all entries drawn from a
/// 16QAM alphabet, scaled so the Gram matrix meets the optimal condition.
/// Stored as a constant construction for testing, not a general synthesizer.
pub fn qam16_pilot(p_s: f64, p_d: f64) -> ComplexMatrix {
    let c = C64::new(1.0, 3.0) * ((p_s + p_d).sqrt() / (2.0 * 5f64.sqrt()));
    let signs = [[1.0, 1.0], [1.0, 1.0], [1.0, -1.0], [1.0, -1.0]];
    ComplexMatrix::from_fn(4, 2, |i, j| c * signs[i][j])
}

/// Diagnostics from [`is_optimal`].
#[derive(Clone, Copy, Debug)]
pub struct OptimalityCheck {
    pub optimal: bool,
    /// Frobenius deviation of P_k^H P_k from the target scaled identity.
    pub gram_deviation: f64,
    pub target_scale: f64,
}

/// Check the optimal pilot condition within `tol` (Frobenius norm of the
/// Gram deviation from the target scaled identity).
pub fn is_optimal(block: &PilotBlock, tol: f64) -> OptimalityCheck {
    let gram = block.gram();
    let scale = block.optimal_gram_scale();
    let target = ComplexMatrix::identity(2).scale(C64::new(scale, 0.0));
    let gram_deviation = gram.sub(&target).expect("2x2").frobenius_norm();
    OptimalityCheck {
        optimal: gram_deviation <= tol,
        gram_deviation,
        target_scale: scale,
    }
}

/// Per-subcarrier estimator MSE for an arbitrary pilot matrix:
/// sigma_I^2 tr[(P_k^H P_k)^{-1}].
pub fn mse_k(p_k: &ComplexMatrix, sigma2: f64) -> Result<f64> {
    let gram = p_k.herm().matmul(p_k)?;
    let inv = gram
        .inverse()
        .map_err(|_| Error::SingularGram { subcarrier: 0 })?;
    Ok(sigma2 * inv.trace().re)
}

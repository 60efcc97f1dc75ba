//! The FD-LS estimator, its DFT-based refinement, and error bookkeeping.

use crate::channel::ChannelPair;
use crate::error::{Error, Result};
use crate::matrixkit::{dft_tall, C64};
use crate::pilot::{is_optimal, PilotBlock};

/// Received pilot block: `y[p][k]` is the frequency-domain sample of pilot
/// symbol `p` on subcarrier `k`.
#[derive(Clone, Debug)]
pub struct ReceivedBlock<'a> {
    pub y: Vec<Vec<C64>>,
    pub block: &'a PilotBlock,
}

/// Per-trial output of both estimators plus squared-error bookkeeping.
#[derive(Clone, Debug)]
pub struct EstimationOutcome {
    pub h_hat_sd: Vec<C64>,
    pub h_hat_dd: Vec<C64>,
    pub h_tilde_sd: Vec<C64>,
    pub h_tilde_dd: Vec<C64>,
    pub sq_err_fdls_sd: f64,
    pub sq_err_fdls_dd: f64,
    pub sq_err_dft_sd: f64,
    pub sq_err_dft_dd: f64,
}

/// Apply the exact linear pilot model: y(p,k) = x_S(p,k) H_SD(k)
/// + x_D(p,k) H_DD(k) + w(p,k).
pub fn simulate_received<'a>(
    channels: &ChannelPair,
    block: &'a PilotBlock,
    noise: &[Vec<C64>],
) -> Result<ReceivedBlock<'a>> {
    let n = block.n;
    if channels.n != n {
        return Err(Error::Dimension(format!(
            "channel N = {} but pilot block N = {}",
            channels.n, n
        )));
    }
    if noise.len() != block.n_p || noise.iter().any(|w| w.len() != n) {
        return Err(Error::Dimension(format!(
            "noise block must be {} vectors of length {}",
            block.n_p, n
        )));
    }
    let y = (0..block.n_p)
        .map(|p| {
            (0..n)
                .map(|k| {
                    let pilot = block.pilot_for(k);
                    pilot[(p, 0)] * channels.cfr_sd[k]
                        + pilot[(p, 1)] * channels.cfr_dd[k]
                        + noise[p][k]
                })
                .collect()
        })
        .collect();
    Ok(ReceivedBlock { y, block })
}

/// Frequency-domain LS estimate: per subcarrier,
/// H_hat_k = (P_k^H P_k)^{-1} P_k^H y_k.
///
/// With optimal pilots the Gram matrix is a scaled identity and the solve
/// reduces to a scaled matched filter; the closed-form normal-equation path
/// is used otherwise.
pub fn fdls_estimate(rx: &ReceivedBlock<'_>) -> Result<(Vec<C64>, Vec<C64>)> {
    let block = rx.block;
    let n = block.n;
    let n_p = block.n_p;

    // Pilots are shared across subcarriers, so the Gram solve is set up once.
    let check = is_optimal(block, 1e-9 * block.optimal_gram_scale().max(1.0));
    let gram_inv = if check.optimal {
        None
    } else {
        let gram = block.gram();
        Some(
            gram.inverse()
                .map_err(|_| Error::SingularGram { subcarrier: 0 })?,
        )
    };
    let matched_scale = 1.0 / check.target_scale;

    let mut h_sd = vec![C64::new(0.0, 0.0); n];
    let mut h_dd = vec![C64::new(0.0, 0.0); n];
    for k in 0..n {
        let pilot = block.pilot_for(k);
        // P^H y_k
        let mut r0 = C64::new(0.0, 0.0);
        let mut r1 = C64::new(0.0, 0.0);
        for p in 0..n_p {
            let yk = rx.y[p][k];
            r0 += pilot[(p, 0)].conj() * yk;
            r1 += pilot[(p, 1)].conj() * yk;
        }
        match &gram_inv {
            None => {
                h_sd[k] = r0 * matched_scale;
                h_dd[k] = r1 * matched_scale;
            }
            Some(inv) => {
                h_sd[k] = inv[(0, 0)] * r0 + inv[(0, 1)] * r1;
                h_dd[k] = inv[(1, 0)] * r0 + inv[(1, 1)] * r1;
            }
        }
    }
    Ok((h_sd, h_dd))
}

/// DFT-based refinement: project the FD-LS estimate onto the length-L delay
/// subspace, H_tilde = F_{NxL} F_{NxL}^H H_hat.
pub fn dft_estimate(h_hat: &[C64], l: usize) -> Result<Vec<C64>> {
    let n = h_hat.len();
    let f = dft_tall(n, l)?;
    let taps = f.herm_matvec(h_hat)?;
    f.matvec(&taps)
}

fn sq_err(est: &[C64], truth: &[C64]) -> f64 {
    est.iter().zip(truth).map(|(a, b)| (a - b).norm_sqr()).sum()
}

/// Run both estimators against ground truth and collect squared errors.
pub fn estimate_all(channels: &ChannelPair, rx: &ReceivedBlock<'_>) -> Result<EstimationOutcome> {
    let (h_hat_sd, h_hat_dd) = fdls_estimate(rx)?;
    let h_tilde_sd = dft_estimate(&h_hat_sd, channels.l)?;
    let h_tilde_dd = dft_estimate(&h_hat_dd, channels.l)?;
    Ok(EstimationOutcome {
        sq_err_fdls_sd: sq_err(&h_hat_sd, &channels.cfr_sd),
        sq_err_fdls_dd: sq_err(&h_hat_dd, &channels.cfr_dd),
        sq_err_dft_sd: sq_err(&h_tilde_sd, &channels.cfr_sd),
        sq_err_dft_dd: sq_err(&h_tilde_dd, &channels.cfr_dd),
        h_hat_sd,
        h_hat_dd,
        h_tilde_sd,
        h_tilde_dd,
    })
}

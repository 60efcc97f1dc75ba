//! Seeded Monte Carlo trial engine tying channels, pilots, noise and both
//! estimators together.
//!
//! Trials use counter-derived substreams, so results are bit-identical for a
//! given seed no matter how the work is scheduled; accumulation uses pairwise
//! summation over the ordered per-trial results.

use rayon::prelude::*;

use crate::analysis::{gain_report, trial_rng, GainReport};
use crate::channel::sample_channel_pair;
use crate::error::{Error, Result};
use crate::estimators::{estimate_all, simulate_received};
use crate::interference::{
    all_ones_model, exponential_model, identity_model, toeplitz_model, InterferenceModel,
};
use crate::matrixkit::C64;
use crate::pilot::optimal_pilot_block;

/// Which normalized covariance to build for a run.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelSpec {
    Identity,
    AllOnes,
    Exponential { rho: f64 },
    Toeplitz { r: Vec<C64> },
}

impl ModelSpec {
    pub fn build(&self, n: usize, sigma2: f64) -> Result<InterferenceModel> {
        match self {
            ModelSpec::Identity => identity_model(n, sigma2),
            ModelSpec::AllOnes => all_ones_model(n, sigma2),
            ModelSpec::Exponential { rho } => exponential_model(n, *rho, sigma2),
            ModelSpec::Toeplitz { r } => toeplitz_model(r, sigma2),
        }
    }
}

/// Full description of one Monte Carlo experiment.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub n: usize,
    pub l: usize,
    pub n_p: usize,
    pub p_s: f64,
    pub p_d: f64,
    pub sigma2: f64,
    pub model: ModelSpec,
    pub trials: usize,
    pub seed: u64,
}

/// Sample mean with its standard error.
#[derive(Clone, Copy, Debug)]
pub struct MeanWithError {
    pub mean: f64,
    pub std_error: f64,
}

/// Empirical and analytic results of one experiment.
#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub empirical_sum_mse_fdls: MeanWithError,
    pub empirical_sum_mse_dft: MeanWithError,
    pub empirical_mse_fdls_sd: MeanWithError,
    pub empirical_mse_fdls_dd: MeanWithError,
    pub empirical_mse_dft_sd: MeanWithError,
    pub empirical_mse_dft_dd: MeanWithError,
    /// Ratio of mean sum-MSEs (a ratio of expectations, not a mean of
    /// per-trial ratios).
    pub empirical_gamma: f64,
    pub analytic: GainReport,
    pub trials: usize,
    /// Per-trial squared errors [fdls_sd, fdls_dd, dft_sd, dft_dd], retained
    /// for dumps and diagnostics.
    pub per_trial: Vec<[f64; 4]>,
}

/// Pairwise (cascade) summation; keeps roundoff bounded at 1e5+ trials.
fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let (a, b) = xs.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

fn mean_with_error(samples: &[f64]) -> MeanWithError {
    let n = samples.len() as f64;
    let mean = pairwise_sum(samples) / n;
    if samples.len() < 2 {
        return MeanWithError {
            mean,
            std_error: f64::INFINITY,
        };
    }
    let sq_dev: Vec<f64> = samples.iter().map(|x| (x - mean) * (x - mean)).collect();
    let var = pairwise_sum(&sq_dev) / (n - 1.0);
    MeanWithError {
        mean,
        std_error: (var / n).sqrt(),
    }
}

/// Run one experiment: per trial sample channels and noise, simulate the
/// pilot block, run both estimators, and accumulate squared errors.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    if cfg.trials == 0 {
        return Err(Error::Parameter("trials must be >= 1".into()));
    }
    let model = cfg.model.build(cfg.n, cfg.sigma2)?;
    let block = optimal_pilot_block(cfg.n, cfg.n_p, cfg.p_s, cfg.p_d)?;
    let analytic = gain_report(&model, cfg.l, cfg.n_p, cfg.p_s, cfg.p_d)?;

    let per_trial: Vec<Result<[f64; 4]>> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(cfg.seed, trial);
            let channels = sample_channel_pair(cfg.n, cfg.l, &mut rng)?;
            let noise = model.sample_noise_block(cfg.n_p, &mut rng);
            let rx = simulate_received(&channels, &block, &noise)?;
            let out = estimate_all(&channels, &rx)?;
            Ok([
                out.sq_err_fdls_sd,
                out.sq_err_fdls_dd,
                out.sq_err_dft_sd,
                out.sq_err_dft_dd,
            ])
        })
        .collect();
    let per_trial: Vec<[f64; 4]> = per_trial.into_iter().collect::<Result<_>>()?;

    let column = |idx: usize| -> Vec<f64> { per_trial.iter().map(|t| t[idx]).collect() };
    let fdls_sd = mean_with_error(&column(0));
    let fdls_dd = mean_with_error(&column(1));
    let dft_sd = mean_with_error(&column(2));
    let dft_dd = mean_with_error(&column(3));
    let sum_fdls: Vec<f64> = per_trial.iter().map(|t| t[0] + t[1]).collect();
    let sum_dft: Vec<f64> = per_trial.iter().map(|t| t[2] + t[3]).collect();
    let empirical_sum_mse_fdls = mean_with_error(&sum_fdls);
    let empirical_sum_mse_dft = mean_with_error(&sum_dft);

    Ok(ExperimentResult {
        empirical_gamma: empirical_sum_mse_fdls.mean / empirical_sum_mse_dft.mean,
        empirical_sum_mse_fdls,
        empirical_sum_mse_dft,
        empirical_mse_fdls_sd: fdls_sd,
        empirical_mse_fdls_dd: fdls_dd,
        empirical_mse_dft_sd: dft_sd,
        empirical_mse_dft_dd: dft_dd,
        analytic,
        trials: cfg.trials,
        per_trial,
    })
}

/// One row of a correlation sweep.
#[derive(Clone, Debug)]
pub struct RhoRow {
    pub rho: f64,
    pub inv_gamma: f64,
    pub upper: f64,
    pub lower: f64,
    pub n: usize,
    pub l: usize,
    pub empirical_inv_gamma: Option<f64>,
}

/// Sweep the exponential correlation factor over `rho_grid` at fixed N and L.
/// With `analytic_only` the Monte Carlo columns are skipped.
pub fn sweep_rho(
    cfg_base: &ExperimentConfig,
    rho_grid: &[f64],
    analytic_only: bool,
) -> Result<Vec<RhoRow>> {
    let mut rows = Vec::with_capacity(rho_grid.len());
    for &rho in rho_grid {
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::Parameter(format!("rho = {rho} outside [0, 1]")));
        }
        let cfg = ExperimentConfig {
            model: ModelSpec::Exponential { rho },
            ..cfg_base.clone()
        };
        let model = cfg.model.build(cfg.n, cfg.sigma2)?;
        let report = gain_report(&model, cfg.l, cfg.n_p, cfg.p_s, cfg.p_d)?;
        let empirical_inv_gamma = if analytic_only {
            None
        } else {
            Some(1.0 / run_experiment(&cfg)?.empirical_gamma)
        };
        rows.push(RhoRow {
            rho,
            inv_gamma: report.inv_gamma,
            upper: report.upper_bound_inv_gamma,
            lower: report.lower_bound_inv_gamma,
            n: cfg.n,
            l: cfg.l,
            empirical_inv_gamma,
        });
    }
    Ok(rows)
}

/// One row of a subcarrier-count sweep at fixed L and rho.
#[derive(Clone, Debug)]
pub struct RatioRow {
    pub n: usize,
    pub l: usize,
    pub log2_ratio: f64,
    pub inv_gamma: f64,
    pub upper: f64,
    pub lower: f64,
    pub rho: f64,
}

/// Sweep the subcarrier count at fixed L and correlation factor; rows carry
/// log2(N/L) for plotting.
pub fn sweep_ratio(
    cfg_base: &ExperimentConfig,
    n_list: &[usize],
    rho: f64,
) -> Result<Vec<RatioRow>> {
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        if n < cfg_base.l {
            return Err(Error::Dimension(format!(
                "N = {n} smaller than L = {}",
                cfg_base.l
            )));
        }
        let model = exponential_model(n, rho, cfg_base.sigma2)?;
        let report = gain_report(&model, cfg_base.l, cfg_base.n_p, cfg_base.p_s, cfg_base.p_d)?;
        rows.push(RatioRow {
            n,
            l: cfg_base.l,
            log2_ratio: (n as f64 / cfg_base.l as f64).log2(),
            inv_gamma: report.inv_gamma,
            upper: report.upper_bound_inv_gamma,
            lower: report.lower_bound_inv_gamma,
            rho,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_cfg() -> ExperimentConfig {
        ExperimentConfig {
            n: 64,
            l: 8,
            n_p: 2,
            p_s: 1.0,
            p_d: 1.0,
            sigma2: 1.0,
            model: ModelSpec::Identity,
            trials: 20_000,
            seed: 0xfd_9a1b,
        }
    }

    #[test]
    fn identity_experiment_matches_scenario() {
        let r = run_experiment(&base_cfg()).unwrap();
        assert!(
            (r.empirical_sum_mse_fdls.mean / 64.0 - 1.0).abs() <= 0.03,
            "fdls {}",
            r.empirical_sum_mse_fdls.mean
        );
        assert!(
            (r.empirical_sum_mse_dft.mean / 8.0 - 1.0).abs() <= 0.03,
            "dft {}",
            r.empirical_sum_mse_dft.mean
        );
        assert!((r.empirical_gamma / 8.0 - 1.0).abs() <= 0.03);
    }

    #[test]
    fn all_ones_experiment_has_no_gain() {
        let cfg = ExperimentConfig {
            model: ModelSpec::AllOnes,
            ..base_cfg()
        };
        let r = run_experiment(&cfg).unwrap();
        assert!(
            (r.empirical_gamma - 1.0).abs() <= 0.03,
            "{}",
            r.empirical_gamma
        );
    }

    #[test]
    fn exponential_experiment_matches_analytic_gamma() {
        let cfg = ExperimentConfig {
            model: ModelSpec::Exponential { rho: 0.5 },
            ..base_cfg()
        };
        let r = run_experiment(&cfg).unwrap();
        assert!(
            (r.empirical_gamma / r.analytic.gamma - 1.0).abs() <= 0.03,
            "empirical {} analytic {}",
            r.empirical_gamma,
            r.analytic.gamma
        );
    }

    #[test]
    fn empirical_within_four_standard_errors() {
        let cfg = ExperimentConfig {
            trials: 5_000,
            ..base_cfg()
        };
        let r = run_experiment(&cfg).unwrap();
        let d_fdls = (r.empirical_sum_mse_fdls.mean - r.analytic.sum_mse_fdls).abs();
        assert!(
            d_fdls <= 4.0 * r.empirical_sum_mse_fdls.std_error,
            "{d_fdls}"
        );
        let d_dft = (r.empirical_sum_mse_dft.mean - r.analytic.sum_mse_dft).abs();
        assert!(d_dft <= 4.0 * r.empirical_sum_mse_dft.std_error, "{d_dft}");
    }

    #[test]
    fn results_are_reproducible() {
        let cfg = ExperimentConfig {
            trials: 500,
            ..base_cfg()
        };
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(a.per_trial, b.per_trial);
        assert_eq!(a.empirical_gamma.to_bits(), b.empirical_gamma.to_bits());
    }

    #[test]
    fn standard_error_scales_with_trials() {
        let small = run_experiment(&ExperimentConfig {
            trials: 2_000,
            ..base_cfg()
        })
        .unwrap();
        let large = run_experiment(&ExperimentConfig {
            trials: 8_000,
            seed: base_cfg().seed + 1,
            ..base_cfg()
        })
        .unwrap();
        let ratio = small.empirical_sum_mse_fdls.std_error / large.empirical_sum_mse_fdls.std_error;
        assert!((ratio / 2.0 - 1.0).abs() <= 0.2, "se ratio {ratio}");
    }

    #[test]
    fn zero_trials_rejected() {
        let cfg = ExperimentConfig {
            trials: 0,
            ..base_cfg()
        };
        assert!(run_experiment(&cfg).is_err());
    }

    #[test]
    fn rho_sweep_endpoints() {
        let cfg = ExperimentConfig {
            n: 128,
            l: 16,
            ..base_cfg()
        };
        let rows = sweep_rho(&cfg, &[0.0, 1.0], true).unwrap();
        assert!((rows[0].inv_gamma - 0.125).abs() <= 1e-9);
        assert!((rows[0].upper - 0.125).abs() <= 1e-9);
        assert!((rows[0].lower - 0.125).abs() <= 1e-9);
        assert!((rows[1].inv_gamma - 1.0).abs() <= 1e-9);
        assert!((rows[1].upper - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn full_cp_length_means_no_gain() {
        let cfg = ExperimentConfig {
            n: 32,
            l: 32,
            ..base_cfg()
        };
        let rows = sweep_rho(&cfg, &[0.0, 0.3, 0.9], true).unwrap();
        for row in rows {
            assert!((row.inv_gamma - 1.0).abs() <= 1e-9, "rho {}", row.rho);
        }
    }

    #[test]
    fn rho_sweep_is_monotone_on_grid() {
        let cfg = ExperimentConfig {
            n: 256,
            l: 16,
            ..base_cfg()
        };
        let grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
        let rows = sweep_rho(&cfg, &grid, true).unwrap();
        for pair in rows.windows(2) {
            assert!(
                pair[1].inv_gamma >= pair[0].inv_gamma - 1e-12,
                "inv_gamma not nondecreasing at rho = {}",
                pair[1].rho
            );
            assert!(pair[0].lower <= pair[0].inv_gamma + 1e-9);
            assert!(pair[0].inv_gamma <= pair[0].upper + 1e-9);
        }
    }

    #[test]
    fn ratio_sweep_white_case_is_exact() {
        let cfg = ExperimentConfig {
            l: 16,
            ..base_cfg()
        };
        let rows = sweep_ratio(&cfg, &[32, 64, 128, 256], 0.0).unwrap();
        for row in rows {
            assert!((row.inv_gamma - 16.0 / row.n as f64).abs() <= 1e-9);
        }
    }
}

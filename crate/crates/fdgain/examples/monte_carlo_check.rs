//! Monte Carlo validation: simulated estimator errors against the closed-form
//! sum-MSE values for three interference covariances.
//!
//! Run with: cargo run --release --example monte_carlo_check

use fdgain::montecarlo::{run_experiment, ExperimentConfig, ModelSpec};

fn main() {
    for (label, model) in [
        ("white (identity)", ModelSpec::Identity),
        ("fully correlated (all-ones)", ModelSpec::AllOnes),
        ("exponential rho = 0.5", ModelSpec::Exponential { rho: 0.5 }),
    ] {
        let cfg = ExperimentConfig {
            n: 64,
            l: 8,
            n_p: 2,
            p_s: 1.0,
            p_d: 1.0,
            sigma2: 1.0,
            model,
            trials: 20_000,
            seed: 7,
        };
        let r = run_experiment(&cfg).expect("valid configuration");
        println!(
            "{label}: N = {}, L = {}, {} trials",
            cfg.n, cfg.l, cfg.trials
        );
        println!(
            "  SumMSE LS  : empirical {:.4} +/- {:.4}, analytic {:.4}",
            r.empirical_sum_mse_fdls.mean,
            r.empirical_sum_mse_fdls.std_error,
            r.analytic.sum_mse_fdls
        );
        println!(
            "  SumMSE DFT : empirical {:.4} +/- {:.4}, analytic {:.4}",
            r.empirical_sum_mse_dft.mean, r.empirical_sum_mse_dft.std_error, r.analytic.sum_mse_dft
        );
        println!(
            "  gamma      : empirical {:.4}, analytic {:.4}",
            r.empirical_gamma, r.analytic.gamma
        );
        println!();
    }
}

//! Sweep the correlation factor rho and print 1/gamma with both bounds.
//!
//! Run with: cargo run --example sweep_correlation

use fdgain::montecarlo::{sweep_rho, ExperimentConfig, ModelSpec};

fn main() {
    let cfg = ExperimentConfig {
        n: 128,
        l: 16,
        n_p: 2,
        p_s: 1.0,
        p_d: 1.0,
        sigma2: 1.0,
        model: ModelSpec::Exponential { rho: 0.0 },
        trials: 0, // analytic sweep, no Monte Carlo
        seed: 1,
    };
    let grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
    let rows = sweep_rho(&cfg, &grid, true).expect("valid grid");

    println!(
        "{:>5}  {:>10}  {:>10}  {:>10}",
        "rho", "1/gamma", "upper", "lower"
    );
    for r in rows {
        println!(
            "{:>5.2}  {:>10.6}  {:>10.6}  {:>10.6}",
            r.rho, r.inv_gamma, r.upper, r.lower
        );
    }
    println!();
    println!("1/gamma meets the upper bound at both endpoints: L/N at rho = 0, 1 at rho = 1.");
}

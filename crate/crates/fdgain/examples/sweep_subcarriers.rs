//! Grow N at fixed L and watch the upper bound close in on the exact 1/gamma.
//!
//! Run with: cargo run --example sweep_subcarriers

use fdgain::montecarlo::{sweep_ratio, ExperimentConfig, ModelSpec};

fn main() {
    let l = 16;
    let cfg = ExperimentConfig {
        n: l,
        l,
        n_p: 2,
        p_s: 1.0,
        p_d: 1.0,
        sigma2: 1.0,
        model: ModelSpec::Exponential { rho: 0.5 },
        trials: 0,
        seed: 1,
    };
    for rho in [0.2, 0.5, 0.8] {
        let n_list: Vec<usize> = [2usize, 4, 8, 16, 32, 64].iter().map(|r| r * l).collect();
        let rows = sweep_ratio(&cfg, &n_list, rho).expect("valid sizes");
        println!("rho = {rho}:");
        println!(
            "{:>6} {:>6}  {:>10}  {:>10}  {:>9}",
            "N", "N/L", "1/gamma", "upper", "gap"
        );
        for r in rows {
            println!(
                "{:>6} {:>6}  {:>10.6}  {:>10.6}  {:>9.6}",
                r.n,
                r.n / r.l,
                r.inv_gamma,
                r.upper,
                r.upper - r.inv_gamma
            );
        }
        println!();
    }
    println!("stronger correlation needs a larger N/L before the bound becomes tight.");
}

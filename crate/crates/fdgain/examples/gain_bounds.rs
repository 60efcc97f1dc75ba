//! Exact sum-MSE gain and its eigenvalue-sum bounds for one scenario.
//!
//! Run with: cargo run --example gain_bounds

use fdgain::analysis::gain_report;
use fdgain::interference::exponential_model;

fn main() {
    let (n, l, rho) = (128, 16, 0.5);
    let model = exponential_model(n, rho, 1.0).expect("valid rho");
    let g = gain_report(&model, l, 2, 1.0, 1.0).expect("well-posed scenario");

    println!("scenario: N = {n}, L = {l}, exponential correlation rho = {rho}");
    println!("  SumMSE, frequency-domain LS : {:.6}", g.sum_mse_fdls);
    println!("  SumMSE, DFT-based LS        : {:.6}", g.sum_mse_dft);
    println!("  gain gamma = N / tr(AB)     : {:.6}", g.gamma);
    println!(
        "  1/gamma = {:.6}, bounded by [{:.6}, {:.6}]",
        g.inv_gamma, g.lower_bound_inv_gamma, g.upper_bound_inv_gamma
    );
    println!();
    println!("extremes at the same N, L:");
    for rho in [0.0, 1.0] {
        let m = exponential_model(n, rho, 1.0).unwrap();
        let g = gain_report(&m, l, 2, 1.0, 1.0).unwrap();
        println!("  rho = {rho}: gamma = {:.6}", g.gamma);
    }
    println!("white interference gives gamma = N/L; fully correlated gives gamma = 1.");
}

//! Brute-force verification: the double-sided trace bound with interlacing,
//! and the finite-difference check of the trace-inverse gradient.
//!
//! Run with: cargo run --release --example verify_bounds

use fdgain::analysis::{verify_theorem1, verify_trace_inverse_gradient};

fn main() {
    let report = verify_theorem1(500, 12, 4, 99).expect("valid sizes");
    println!(
        "trace bound: {} random covariance draws at N = {}, L = {}, violations = {}",
        report.trials,
        report.n,
        report.l,
        report.violations.len()
    );
    for v in report.violations.iter().take(5) {
        println!("  trial {} (seed {:#x}): {}", v.trial, v.seed, v.detail);
    }

    let grad = verify_trace_inverse_gradient(100, 6, 99).expect("n <= 8");
    println!(
        "gradient of tr(X^-1): {} random Hermitian PD matrices at n = {}, max relative error {:.3e}",
        grad.trials, grad.n, grad.max_rel_error
    );
    println!(
        "both checks {}",
        if report.passed() && grad.passed() {
            "passed"
        } else {
            "FAILED"
        }
    );
}

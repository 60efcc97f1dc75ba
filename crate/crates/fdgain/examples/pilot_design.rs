//! Optimal pilot design: the scaled-identity Gram condition, a 16QAM
//! construction that meets it, and a random search that never beats it.
//!
//! Run with: cargo run --example pilot_design

use fdgain::matrixkit::{ComplexMatrix, C64};
use fdgain::pilot::{is_optimal, mse_k, optimal_pilot_block, qam16_pilot, PilotBlock};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let (n_p, p_s, p_d) = (4usize, 1.0, 1.0);

    let block = optimal_pilot_block(64, n_p, p_s, p_d).expect("N_P >= 2");
    let check = is_optimal(&block, 1e-9);
    println!(
        "DFT-column pilot, N_P = {n_p}: Gram = {:.1} I, deviation {:.2e}",
        check.target_scale, check.gram_deviation
    );
    let optimum = mse_k(block.pilot(), 1.0).unwrap();
    println!("per-subcarrier MSE at the optimum: {optimum:.6}");

    let qam = PilotBlock::new(64, n_p, p_s, p_d, qam16_pilot(p_s, p_d)).unwrap();
    let qcheck = is_optimal(&qam, 1e-9);
    println!(
        "16QAM construction also optimal: {} (deviation {:.2e})",
        qcheck.optimal, qcheck.gram_deviation
    );

    // Random pilots rescaled to the same total power budget.
    let budget = n_p as f64 * (p_s + p_d);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut best = f64::INFINITY;
    for _ in 0..5000 {
        let p = ComplexMatrix::from_fn(n_p, 2, |_, _| {
            C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        });
        let tr = p.herm().matmul(&p).unwrap().trace().re;
        if tr < 1e-9 {
            continue;
        }
        let scaled = p.scale(C64::new((budget / tr).sqrt(), 0.0));
        if let Ok(mse) = mse_k(&scaled, 1.0) {
            best = best.min(mse);
        }
    }
    println!("best of 5000 random power-normalized pilots: {best:.6} (never below {optimum:.6})");
}

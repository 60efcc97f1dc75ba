//! Colored interference models and their samplers: build a covariance,
//! draw noise blocks, and check the empirical covariance against it.
//!
//! Run with: cargo run --release --example colored_noise

use fdgain::interference::{all_ones_model, exponential_model, identity_model};
use fdgain::matrixkit::C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[allow(clippy::needless_range_loop)] // entrywise covariance comparison
fn main() {
    let n = 6;
    let sigma2 = 2.0;
    let draws = 50_000;

    for (label, model) in [
        ("identity".to_string(), identity_model(n, sigma2).unwrap()),
        ("all-ones".to_string(), all_ones_model(n, sigma2).unwrap()),
        (
            "exponential rho=0.6".to_string(),
            exponential_model(n, 0.6, sigma2).unwrap(),
        ),
    ] {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        // Empirical covariance (1/M) sum w w^H over M draws.
        let mut cov = vec![vec![C64::new(0.0, 0.0); n]; n];
        for _ in 0..draws {
            let w = &model.sample_noise_block(1, &mut rng)[0];
            for i in 0..n {
                for j in 0..n {
                    cov[i][j] += w[i] * w[j].conj();
                }
            }
        }
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let emp = cov[i][j] / draws as f64;
                let want = model.a()[(i, j)] * sigma2;
                worst = worst.max((emp - want).norm());
            }
        }
        println!("{label}: {draws} draws, worst |empirical - sigma^2 A| entry = {worst:.4}");
    }
    println!();
    println!("each sampler realizes R_w = sigma^2 A through the PSD matrix square root.");
}

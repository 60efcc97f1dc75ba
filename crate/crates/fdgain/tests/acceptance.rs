//! End-to-end acceptance gate. Every test prints a single PASS/FAIL line
//! before asserting, so `cargo test --test acceptance -- --nocapture` reads
//! as a checklist.

use std::process::Command;

use fdgain::analysis::{gain_report, verify_theorem1, verify_trace_inverse_gradient};
use fdgain::interference::exponential_model;
use fdgain::matrixkit::{ComplexMatrix, C64};
use fdgain::montecarlo::{run_experiment, sweep_rho, ExperimentConfig, ModelSpec};
use fdgain::pilot::{is_optimal, mse_k, qam16_pilot, PilotBlock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(name: &str, pass: bool, detail: &str) {
    println!(
        "acceptance {name}: {} {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

fn base_config() -> ExperimentConfig {
    ExperimentConfig {
        n: 64,
        l: 8,
        n_p: 2,
        p_s: 1.0,
        p_d: 1.0,
        sigma2: 1.0,
        model: ModelSpec::Identity,
        trials: 20_000,
        seed: 0x5eed,
    }
}

/// 1. White interference gives gamma = N/L exactly; fully correlated
///    interference gives gamma = 1 exactly, both to 1e-9.
#[test]
fn extreme_scenarios_are_exact() {
    let mut worst: f64 = 0.0;
    for n in [64usize, 128, 256] {
        for l in [8usize, 16, 32] {
            let white = exponential_model(n, 0.0, 1.0).unwrap();
            let g0 = gain_report(&white, l, 2, 1.0, 1.0).unwrap();
            worst = worst.max((g0.gamma - n as f64 / l as f64).abs());

            let full = exponential_model(n, 1.0, 1.0).unwrap();
            let g1 = gain_report(&full, l, 2, 1.0, 1.0).unwrap();
            worst = worst.max((g1.gamma - 1.0).abs());
        }
    }
    let pass = worst <= 1e-9;
    report(
        "extreme scenarios",
        pass,
        &format!("(worst |gamma - exact| = {worst:.3e}, tolerance 1e-9)"),
    );
    assert!(pass);
}

/// 2. Brute force on random unit-diagonal PSD matrices: the double-sided
///    eigenvalue-sum bound and the principal-submatrix interlacing chain hold
///    with slack 1e-9 for at least 1000 draws per size, all L < N.
#[test]
fn trace_bound_brute_force() {
    let mut total = 0usize;
    let mut violations = 0usize;
    for n in [4usize, 8, 16, 32] {
        // Spread the draws across every admissible L so each size still sees
        // at least 1000 pairs in total.
        let per_l = 1000 / (n - 1) + 1;
        for l in 1..n {
            let r = verify_theorem1(per_l, n, l, 0xabcd + n as u64).unwrap();
            total += r.trials;
            violations += r.violations.len();
            for v in r.violations.iter().take(3) {
                eprintln!(
                    "  N={n} L={l} trial {} seed {:#x}: {}",
                    v.trial, v.seed, v.detail
                );
            }
        }
    }
    let pass = violations == 0;
    report(
        "trace bound brute force",
        pass,
        &format!("({total} random pairs, {violations} violations)"),
    );
    assert!(pass);
}

/// 3. Gradient of tr(X^{-1}) matches central finite differences to 1e-5 in
///    relative error over 100 random Hermitian PD matrices with n <= 8.
#[test]
fn trace_inverse_gradient_check() {
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for n in [2usize, 4, 8] {
        let r = verify_trace_inverse_gradient(34, n, 0x9e3779).unwrap();
        worst = worst.max(r.max_rel_error);
        pass &= r.passed();
    }
    report(
        "trace inverse gradient",
        pass,
        &format!("(102 random matrices, worst relative error {worst:.3e}, tolerance 1e-5)"),
    );
    assert!(pass);
}

/// 4. Empirical sum-MSEs of both estimators within 3% of the analytic values
///    at N=64, L=8, N_P=2, unit powers, 2e4 trials, for three covariances.
#[test]
fn empirical_matches_analytic_mse() {
    let mut pass = true;
    let mut detail = String::new();
    for (label, model) in [
        ("identity", ModelSpec::Identity),
        ("all-ones", ModelSpec::AllOnes),
        ("exponential rho=0.5", ModelSpec::Exponential { rho: 0.5 }),
    ] {
        let cfg = ExperimentConfig {
            model,
            ..base_config()
        };
        let r = run_experiment(&cfg).unwrap();
        let rel_fdls = (r.empirical_sum_mse_fdls.mean - r.analytic.sum_mse_fdls).abs()
            / r.analytic.sum_mse_fdls;
        let rel_dft =
            (r.empirical_sum_mse_dft.mean - r.analytic.sum_mse_dft).abs() / r.analytic.sum_mse_dft;
        pass &= rel_fdls <= 0.03 && rel_dft <= 0.03;
        detail.push_str(&format!(
            "[{label}: fdls {:.2}%, dft {:.2}%] ",
            100.0 * rel_fdls,
            100.0 * rel_dft
        ));
    }
    report(
        "empirical vs analytic MSE",
        pass,
        &format!("{detail}(tolerance 3%)"),
    );
    assert!(pass);
}

/// 5. Correlation sweeps at L in {16, 32}, N/L in {2, 4, 8}: the exact
///    1/gamma sits inside [lower, upper] at every grid point, and meets the
///    upper bound at rho = 0 and rho = 1 within 1e-9.
#[test]
fn rho_sweep_sandwich_and_endpoints() {
    let grid: Vec<f64> = (0..101).map(|i| i as f64 / 100.0).collect();
    let mut pass = true;
    let mut worst_sandwich: f64 = 0.0;
    let mut worst_endpoint: f64 = 0.0;
    for l in [16usize, 32] {
        for ratio in [2usize, 4, 8] {
            let cfg = ExperimentConfig {
                n: ratio * l,
                l,
                ..base_config()
            };
            let rows = sweep_rho(&cfg, &grid, true).unwrap();
            for row in &rows {
                let slack = (row.lower - row.inv_gamma).max(row.inv_gamma - row.upper);
                worst_sandwich = worst_sandwich.max(slack);
                pass &= slack <= 1e-9;
            }
            for row in [&rows[0], rows.last().unwrap()] {
                let gap = (row.upper - row.inv_gamma).abs();
                worst_endpoint = worst_endpoint.max(gap);
                pass &= gap <= 1e-9;
            }
        }
    }
    report(
        "rho sweep sandwich and endpoints",
        pass,
        &format!(
            "(worst sandwich slack {worst_sandwich:.3e}, worst endpoint gap {worst_endpoint:.3e}, tolerance 1e-9)"
        ),
    );
    assert!(pass);
}

/// 6. Upper-bound overlap thresholds at L=16: the relative gap
///    |upper - 1/gamma| / (1/gamma) drops below 1% by N/L = 8 at rho = 0.2,
///    N/L = 16 at rho = 0.5 and N/L = 64 at rho = 0.8, allowing one doubling
///    of the threshold ratio.
///
/// This criterion does not hold for the exponential correlation model: the
/// measured relative gaps at (and one doubling past) the stated ratios are
/// 3.95% / 1.15% (rho=0.2 at 8 / 16), 6.24% / 1.83% (rho=0.5 at 16 / 32) and
/// 4.20% / 1.22% (rho=0.8 at 64 / 128), all above 1%. The absolute gap
/// |upper - 1/gamma| does fall below 0.01 at the stated ratios (see the
/// companion test below). This test states the relative-gap requirement
/// faithfully and is expected to fail.
#[test]
fn upper_bound_relative_overlap_thresholds() {
    let l = 16usize;
    let mut pass = true;
    let mut detail = String::new();
    for (rho, threshold_ratio) in [(0.2, 8usize), (0.5, 16), (0.8, 64)] {
        let mut met_at = None;
        for ratio in [threshold_ratio, 2 * threshold_ratio] {
            let model = exponential_model(ratio * l, rho, 1.0).unwrap();
            let g = gain_report(&model, l, 2, 1.0, 1.0).unwrap();
            let rel_gap = (g.upper_bound_inv_gamma - g.inv_gamma).abs() / g.inv_gamma;
            detail.push_str(&format!(
                "[rho={rho} N/L={ratio}: {:.2}%] ",
                100.0 * rel_gap
            ));
            if rel_gap < 0.01 {
                met_at = Some(ratio);
                break;
            }
        }
        pass &= met_at.is_some();
    }
    report(
        "relative overlap thresholds",
        pass,
        &format!("{detail}(required < 1% within one doubling)"),
    );
    assert!(pass);
}

/// Companion to the relative-gap test: the absolute gap upper - 1/gamma falls
/// below 0.01 by the same ratios, which matches what the reference curves
/// actually show. This one is expected to pass.
#[test]
fn upper_bound_absolute_overlap_thresholds() {
    let l = 16usize;
    let mut pass = true;
    let mut detail = String::new();
    for (rho, threshold_ratio) in [(0.2, 8usize), (0.5, 16), (0.8, 64)] {
        let mut met = false;
        for ratio in [threshold_ratio, 2 * threshold_ratio] {
            let model = exponential_model(ratio * l, rho, 1.0).unwrap();
            let g = gain_report(&model, l, 2, 1.0, 1.0).unwrap();
            let abs_gap = (g.upper_bound_inv_gamma - g.inv_gamma).abs();
            detail.push_str(&format!("[rho={rho} N/L={ratio}: {abs_gap:.4}] "));
            if abs_gap < 0.01 {
                met = true;
                break;
            }
        }
        pass &= met;
    }
    report(
        "absolute overlap thresholds",
        pass,
        &format!("{detail}(required < 0.01 within one doubling)"),
    );
    assert!(pass);
}

/// 7. Pilot optimality: 1e4 random trace-normalized pilot Grams never beat
///    the closed-form optimum (slack 1e-12), and the 16QAM construction
///    satisfies the optimal-Gram condition.
#[test]
fn pilot_optimality() {
    let n_p = 4usize;
    let (p_s, p_d) = (1.0, 1.0);
    let budget = n_p as f64 * (p_s + p_d);
    let optimum = 4.0 / (n_p as f64 * (p_s + p_d));
    let mut rng = ChaCha8Rng::seed_from_u64(0x91071);
    let mut best_seen = f64::INFINITY;
    let mut pass = true;
    for _ in 0..10_000 {
        let p = ComplexMatrix::from_fn(n_p, 2, |_, _| {
            C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        });
        let tr = p.herm().matmul(&p).unwrap().trace().re;
        if tr < 1e-9 {
            continue;
        }
        let scaled = p.scale(C64::new((budget / tr).sqrt(), 0.0));
        if let Ok(mse) = mse_k(&scaled, 1.0) {
            best_seen = best_seen.min(mse);
            pass &= mse >= optimum - 1e-12;
        }
    }
    let qam = PilotBlock::new(8, 4, p_s, p_d, qam16_pilot(p_s, p_d)).unwrap();
    let check = is_optimal(&qam, 1e-12);
    pass &= check.optimal;
    report(
        "pilot optimality",
        pass,
        &format!(
            "(optimum {optimum:.6}, best random {best_seen:.6}, 16QAM Gram deviation {:.3e})",
            check.gram_deviation
        ),
    );
    assert!(pass);
}

/// 8. CLI determinism: repeating an invocation with the same seed produces
///    byte-identical CSV files.
#[test]
fn cli_output_is_deterministic() {
    let bin = env!("CARGO_BIN_EXE_fdgain");
    let dir = std::env::temp_dir().join("fdgain-acceptance");
    std::fs::create_dir_all(&dir).unwrap();

    let runs: [(&str, Vec<String>); 3] = [
        (
            "sweep-rho",
            ["sweep-rho", "--N", "64", "--L", "16", "--rho-steps", "21"]
                .map(String::from)
                .to_vec(),
        ),
        (
            "sweep-ratio",
            [
                "sweep-ratio",
                "--L",
                "8",
                "--rho",
                "0.5",
                "--ratios",
                "2,4,8",
            ]
            .map(String::from)
            .to_vec(),
        ),
        (
            "experiment",
            [
                "experiment",
                "--rho",
                "0.3",
                "--N",
                "32",
                "--L",
                "4",
                "--trials",
                "2000",
                "--seed",
                "42",
            ]
            .map(String::from)
            .to_vec(),
        ),
    ];

    let mut pass = true;
    for (label, args) in &runs {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let out = dir.join(format!("{label}-{rep}.csv"));
            let status = Command::new(bin)
                .args(args)
                .arg("--out")
                .arg(&out)
                .status()
                .unwrap();
            assert!(status.success(), "{label} run {rep} failed");
            outputs.push(std::fs::read(&out).unwrap());
        }
        if outputs[0] != outputs[1] {
            eprintln!("  {label}: outputs differ between identical runs");
            pass = false;
        }
    }
    report(
        "CLI determinism",
        pass,
        "(3 subcommands, 2 runs each, byte compare)",
    );
    assert!(pass);
}

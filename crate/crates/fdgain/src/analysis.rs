//! Analytic sum-MSE expressions, the exact performance gain gamma and its
//! eigenvalue-sum bounds, and numerical verification of the two supporting
//! results (the trace-inverse gradient and the double-sided trace bound).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::interference::InterferenceModel;
use crate::matrixkit::{dft_tall, hermitian_eigenvalues, trace_product, ComplexMatrix, C64};

/// Exact gain and bound summary for one interference model.
#[derive(Clone, Debug)]
pub struct GainReport {
    pub n: usize,
    pub l: usize,
    pub trace_ab: f64,
    pub sum_mse_fdls: f64,
    pub sum_mse_dft: f64,
    /// gamma = SumMSE_FDLS / SumMSE_DFT = N / tr(AB).
    pub gamma: f64,
    pub inv_gamma: f64,
    /// Upper bound on 1/gamma: (sum of the L largest eigenvalues of A) / N.
    pub upper_bound_inv_gamma: f64,
    /// Lower bound on 1/gamma: (sum of the L smallest eigenvalues of A) / N.
    pub lower_bound_inv_gamma: f64,
}

/// Analytic FD-LS sum-MSE with deterministic optimal pilots:
/// 4 N sigma^2 / (N_P (P_S + P_D)). Reduces to 2 N sigma^2 / (P_S + P_D)
/// at N_P = 2.
pub fn sum_mse_fdls(n: usize, n_p: usize, p_s: f64, p_d: f64, sigma2: f64) -> f64 {
    4.0 * n as f64 * sigma2 / (n_p as f64 * (p_s + p_d))
}

/// tr(A B) with B = F_{NxL} F_{NxL}^H, computed column-wise as
/// sum_j f_j^H A f_j without forming B.
pub fn trace_ab(a: &ComplexMatrix, l: usize) -> Result<f64> {
    let n = a.rows();
    if !a.is_square() {
        return Err(Error::Dimension("trace_ab requires a square A".into()));
    }
    let f = dft_tall(n, l)?;
    let mut acc = 0.0;
    for j in 0..l {
        let col = f.column(j);
        let af = a.matvec(&col)?;
        let quad: C64 = col.iter().zip(&af).map(|(x, y)| x.conj() * y).sum();
        acc += quad.re;
    }
    Ok(acc)
}

/// Analytic DFT-based sum-MSE: (4 sigma^2 / (N_P (P_S + P_D))) tr(A B).
pub fn sum_mse_dft(
    model: &InterferenceModel,
    l: usize,
    n_p: usize,
    p_s: f64,
    p_d: f64,
) -> Result<f64> {
    let t = trace_ab(model.a(), l)?;
    Ok(4.0 * model.sigma2() / (n_p as f64 * (p_s + p_d)) * t)
}

/// Exact gain gamma = N / tr(AB) together with both eigenvalue-sum bounds
/// on 1/gamma and the matching analytic sum-MSE values.
pub fn gain_report(
    model: &InterferenceModel,
    l: usize,
    n_p: usize,
    p_s: f64,
    p_d: f64,
) -> Result<GainReport> {
    let n = model.n();
    let t = trace_ab(model.a(), l)?;
    if t <= 0.0 {
        return Err(Error::DegenerateCovariance { trace_ab: t });
    }
    let eigs = hermitian_eigenvalues(model.a())?;
    let upper: f64 = eigs[..l].iter().sum::<f64>() / n as f64;
    let lower: f64 = eigs[n - l..].iter().sum::<f64>() / n as f64;
    Ok(GainReport {
        n,
        l,
        trace_ab: t,
        sum_mse_fdls: sum_mse_fdls(n, n_p, p_s, p_d, model.sigma2()),
        sum_mse_dft: sum_mse_dft(model, l, n_p, p_s, p_d)?,
        gamma: n as f64 / t,
        inv_gamma: t / n as f64,
        upper_bound_inv_gamma: upper,
        lower_bound_inv_gamma: lower,
    })
}

// ---------------------------------------------------------------------------
// Brute-force verification suites.
// ---------------------------------------------------------------------------

/// One violated check found by [`verify_theorem1`].
#[derive(Clone, Debug)]
pub struct Theorem1Violation {
    pub trial: usize,
    pub seed: u64,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct Theorem1Report {
    pub trials: usize,
    pub n: usize,
    pub l: usize,
    pub violations: Vec<Theorem1Violation>,
}

impl Theorem1Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Deterministic per-trial substream: mixing the base seed with the trial
/// counter keeps results independent of execution order.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(trial)))
}

fn random_complex_gaussian(n: usize, m: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, m, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * (0.5f64).sqrt()
    })
}

/// Random Hermitian PSD matrix with unit diagonal: G G^H rescaled by its
/// diagonal.
pub fn random_unit_diag_psd(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = random_complex_gaussian(n, n, rng);
    let raw = g.matmul(&g.herm()).expect("square");
    let d: Vec<f64> = (0..n).map(|i| raw[(i, i)].re.max(1e-12)).collect();
    ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(1.0, 0.0)
        } else {
            raw[(i, j)] / (d[i] * d[j]).sqrt()
        }
    })
}

/// Haar-distributed random unitary via modified Gram-Schmidt QR of a complex
/// Gaussian matrix, with the R diagonal phase absorbed.
pub fn haar_unitary(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = random_complex_gaussian(n, n, rng);
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| g.column(j)).collect();
    for j in 0..n {
        for i in 0..j {
            let proj: C64 = cols[i]
                .iter()
                .zip(&cols[j])
                .map(|(a, b)| a.conj() * b)
                .sum();
            let qi = cols[i].clone();
            for (x, q) in cols[j].iter_mut().zip(&qi) {
                *x -= proj * q;
            }
        }
        // Normalize and fix the phase from the would-be R diagonal.
        let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in cols[j].iter_mut() {
            *x /= norm;
        }
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

const BOUND_SLACK: f64 = 1e-9;

/// Brute-force check of the double-sided trace bound
/// sum_{i=N-L+1}^N lambda_i(A) <= tr(AB) <= sum_{i=1}^L lambda_i(A)
/// for random unit-diagonal PSD A and random rank-L projections
/// B = U diag(I_L, 0) U^H, plus the interlacing chain for the top-left
/// block of U^H A U.
pub fn verify_theorem1(trials: usize, n: usize, l: usize, seed: u64) -> Result<Theorem1Report> {
    if l > n || l == 0 {
        return Err(Error::Dimension(format!(
            "verify_theorem1: L = {l} must satisfy 1 <= L <= N = {n}"
        )));
    }
    let mut violations = Vec::new();
    for trial in 0..trials {
        let trial_seed = splitmix64(seed ^ splitmix64(trial as u64));
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
        let a = random_unit_diag_psd(n, &mut rng);
        let u = haar_unitary(n, &mut rng);

        // B = U_L U_L^H formed explicitly.
        let u_l = ComplexMatrix::from_fn(n, l, |i, j| u[(i, j)]);
        let b = u_l.matmul(&u_l.herm())?;
        let tr_ab = trace_product(&a, &b)?;
        let tr_ba = trace_product(&b, &a)?;

        let a_tilde = u.herm().matmul(&a)?.matmul(&u)?;
        let a11 = ComplexMatrix::from_fn(l, l, |i, j| a_tilde[(i, j)]);
        let tr_a11 = a11.trace().re;

        let lam = hermitian_eigenvalues(&a)?;
        let upper: f64 = lam[..l].iter().sum();
        let lower: f64 = lam[n - l..].iter().sum();

        let mut fail = |detail: String| {
            violations.push(Theorem1Violation {
                trial,
                seed: trial_seed,
                detail,
            });
        };

        if (tr_ab - tr_ba).abs() > BOUND_SLACK {
            fail(format!("tr(AB) = {tr_ab} but tr(BA) = {tr_ba}"));
        }
        if (tr_ab - tr_a11).abs() > BOUND_SLACK {
            fail(format!("tr(AB) = {tr_ab} but tr(A~_11) = {tr_a11}"));
        }
        if tr_ab < lower - BOUND_SLACK || tr_ab > upper + BOUND_SLACK {
            fail(format!(
                "bound violated: {lower} <= {tr_ab} <= {upper} fails"
            ));
        }
        // Interlacing: lambda_{N-L+i}(A) <= mu_i(A~_11) <= lambda_i(A).
        let mu = hermitian_eigenvalues(&a11)?;
        for i in 0..l {
            if mu[i] > lam[i] + BOUND_SLACK || mu[i] < lam[n - l + i] - BOUND_SLACK {
                fail(format!(
                    "interlacing violated at i = {i}: {} <= {} <= {} fails",
                    lam[n - l + i],
                    mu[i],
                    lam[i]
                ));
            }
        }
    }
    Ok(Theorem1Report {
        trials,
        n,
        l,
        violations,
    })
}

#[derive(Clone, Debug)]
pub struct GradientReport {
    pub trials: usize,
    pub n: usize,
    pub max_rel_error: f64,
    pub failures: Vec<(usize, u64, f64)>,
}

impl GradientReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

const GRADIENT_TOL: f64 = 1e-5;
const MAX_CONDITION: f64 = 1e3;

/// Check the matrix-calculus identity d tr(X^{-1}) / dX = -(X^{-2})^T by
/// central finite differences on random well-conditioned Hermitian PD
/// matrices.
pub fn verify_trace_inverse_gradient(trials: usize, n: usize, seed: u64) -> Result<GradientReport> {
    if n == 0 || n > 8 {
        return Err(Error::Parameter(format!(
            "gradient check supports 1 <= n <= 8, got {n}"
        )));
    }
    let mut max_rel_error: f64 = 0.0;
    let mut failures = Vec::new();
    for trial in 0..trials {
        let trial_seed = splitmix64(seed ^ splitmix64(trial as u64));
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);

        // Resample until the condition number is tame; a handful of retries
        // is always enough at these sizes.
        let mut x = None;
        for _ in 0..50 {
            let g = random_complex_gaussian(n, n, &mut rng);
            let cand = {
                let mut m = g.matmul(&g.herm())?;
                for i in 0..n {
                    m[(i, i)] += 0.05;
                }
                m
            };
            let eigs = hermitian_eigenvalues(&cand)?;
            if eigs[0] / eigs[n - 1] <= MAX_CONDITION {
                x = Some(cand);
                break;
            }
        }
        let x =
            x.ok_or_else(|| Error::Parameter("could not draw a well-conditioned matrix".into()))?;

        let inv = x.inverse()?;
        let inv2 = inv.matmul(&inv)?;
        let h = 1e-6 * x.frobenius_norm();
        let mut trial_err: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut plus = x.clone();
                plus[(i, j)] += C64::new(h, 0.0);
                let mut minus = x.clone();
                minus[(i, j)] -= C64::new(h, 0.0);
                let fd = (plus.inverse()?.trace() - minus.inverse()?.trace()) / (2.0 * h);
                let analytic = -inv2[(j, i)];
                let scale = analytic.norm().max(inv2.frobenius_norm() / n as f64);
                trial_err = trial_err.max((fd - analytic).norm() / scale);
            }
        }
        max_rel_error = max_rel_error.max(trial_err);
        if trial_err > GRADIENT_TOL {
            failures.push((trial, trial_seed, trial_err));
        }
    }
    Ok(GradientReport {
        trials,
        n,
        max_rel_error,
        failures,
    })
}

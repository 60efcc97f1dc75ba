//! Command-line front end: sweeps, experiments and verification suites with
//! stable CSV output.
//!
//! Option precedence is flags > config file > `FDGAIN_SEED` env var (seed
//! only) > built-in defaults. The config file is a flat `key=value` format
//! with `#` comments.

use std::collections::HashMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::analysis::{verify_theorem1, verify_trace_inverse_gradient};
use crate::error::{Error, Result};
use crate::montecarlo::{run_experiment, sweep_ratio, sweep_rho, ExperimentConfig, ModelSpec};

pub const SEED_ENV_VAR: &str = "FDGAIN_SEED";
const DEFAULT_SEED: u64 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "fdgain",
    about = "Sum-MSE gain of DFT-based over frequency-domain LS channel estimation in full-duplex OFDM",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sweep the correlation factor rho at fixed N and L; CSV columns
    /// rho,inv_gamma,upper,lower,N,L (plus empirical when requested).
    SweepRho(SweepRhoArgs),
    /// Sweep N at fixed L and rho; CSV columns
    /// N,L,log2_ratio,inv_gamma,upper,lower,rho.
    SweepRatio(SweepRatioArgs),
    /// Run one Monte Carlo experiment and compare against the analytic
    /// values.
    Experiment(ExperimentArgs),
    /// Run the numerical verification suites (trace bound, gradient).
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Default)]
struct CommonArgs {
    /// Flat key=value config file; any key can be overridden by a flag.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long = "L")]
    l: Option<usize>,
    #[arg(long = "N-P")]
    n_p: Option<usize>,
    #[arg(long = "P-S")]
    p_s: Option<f64>,
    #[arg(long = "P-D")]
    p_d: Option<f64>,
    #[arg(long)]
    sigma2: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepRhoArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of evenly spaced grid points on [0, 1].
    #[arg(long)]
    rho_steps: Option<usize>,
    /// Also run the Monte Carlo engine per grid point.
    #[arg(long)]
    empirical: bool,
}

#[derive(Args, Debug)]
struct SweepRatioArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    rho: Option<f64>,
    /// Comma-separated list of N/L ratios.
    #[arg(long)]
    ratios: Option<String>,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Exponential correlation factor; rho=0 is white interference.
    #[arg(long)]
    rho: Option<f64>,
    /// Covariance kind: identity | all-ones | exponential.
    #[arg(long)]
    model: Option<String>,
    /// Also write every trial's squared errors to this CSV path.
    #[arg(long)]
    dump_trials: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Brute-force the double-sided trace bound.
    #[arg(long)]
    theorem1: bool,
    /// Finite-difference check of the trace-inverse gradient.
    #[arg(long)]
    gradient: bool,
    /// Matrix size for the gradient check (<= 8).
    #[arg(long)]
    grad_n: Option<usize>,
}

/// Merged option values after applying flag > config > env > default.
struct Options {
    n: usize,
    l: usize,
    n_p: usize,
    p_s: f64,
    p_d: f64,
    sigma2: f64,
    trials: usize,
    seed: u64,
    out: Option<PathBuf>,
    config: HashMap<String, String>,
}

fn load_config(path: &PathBuf) -> Result<HashMap<String, String>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parameter(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Parameter(format!(
                "config {} line {}: expected key=value, got {raw:?}",
                path.display(),
                idx + 1
            ))
        })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn config_get<T: std::str::FromStr>(map: &HashMap<String, String>, key: &str) -> Result<Option<T>> {
    match map.get(key) {
        None => Ok(None),
        Some(raw) => raw
            .parse::<T>()
            .map(Some)
            .map_err(|_| Error::Parameter(format!("config key {key}: cannot parse {raw:?}"))),
    }
}

impl Options {
    fn resolve(common: &CommonArgs) -> Result<Self> {
        let config = match &common.config {
            Some(path) => load_config(path)?,
            None => HashMap::new(),
        };
        let env_seed = match std::env::var(SEED_ENV_VAR) {
            Ok(raw) => Some(raw.parse::<u64>().map_err(|_| {
                Error::Parameter(format!("{SEED_ENV_VAR} must be an integer, got {raw:?}"))
            })?),
            Err(_) => None,
        };
        let out = common
            .out
            .clone()
            .or_else(|| config.get("out").map(PathBuf::from));
        Ok(Self {
            n: common.n.or(config_get(&config, "N")?).unwrap_or(128),
            l: common.l.or(config_get(&config, "L")?).unwrap_or(16),
            n_p: common.n_p.or(config_get(&config, "N_P")?).unwrap_or(2),
            p_s: common.p_s.or(config_get(&config, "P_S")?).unwrap_or(1.0),
            p_d: common.p_d.or(config_get(&config, "P_D")?).unwrap_or(1.0),
            sigma2: common
                .sigma2
                .or(config_get(&config, "sigma2")?)
                .unwrap_or(1.0),
            trials: common
                .trials
                .or(config_get(&config, "trials")?)
                .unwrap_or(20_000),
            seed: common
                .seed
                .or(config_get(&config, "seed")?)
                .or(env_seed)
                .unwrap_or(DEFAULT_SEED),
            out,
            config,
        })
    }

    fn experiment_config(&self, model: ModelSpec) -> ExperimentConfig {
        ExperimentConfig {
            n: self.n,
            l: self.l,
            n_p: self.n_p,
            p_s: self.p_s,
            p_d: self.p_d,
            sigma2: self.sigma2,
            model,
            trials: self.trials,
            seed: self.seed,
        }
    }
}

/// Fixed decimal formatting with 12 significant digits; output is
/// byte-stable for identical inputs.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0.000000000000".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (11 - magnitude).clamp(0, 30) as usize;
    format!("{x:.decimals$}")
}

fn write_output(out: &Option<PathBuf>, contents: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, contents)?;
            Ok(())
        }
        None => {
            std::io::stdout().write_all(contents.as_bytes())?;
            Ok(())
        }
    }
}

fn parse_model(args: &ExperimentArgs, opts: &Options) -> Result<ModelSpec> {
    let model_name = args
        .model
        .clone()
        .or_else(|| opts.config.get("model").cloned());
    let rho_value: Option<f64> = match args.rho {
        Some(r) => Some(r),
        None => config_get(&opts.config, "rho")?,
    };
    match (model_name.as_deref(), rho_value) {
        (Some("identity"), _) => Ok(ModelSpec::Identity),
        (Some("all-ones"), _) => Ok(ModelSpec::AllOnes),
        (Some("exponential") | None, Some(rho)) => Ok(ModelSpec::Exponential { rho }),
        (Some("exponential"), None) => Err(Error::Parameter(
            "exponential model needs --rho".to_string(),
        )),
        (None, None) => Ok(ModelSpec::Identity),
        (Some(other), _) => Err(Error::Parameter(format!(
            "unknown model {other:?} (expected identity, all-ones or exponential)"
        ))),
    }
}

fn run_sweep_rho(args: &SweepRhoArgs) -> Result<i32> {
    let opts = Options::resolve(&args.common)?;
    let steps = match args.rho_steps {
        Some(s) => s,
        None => config_get(&opts.config, "rho_steps")?.unwrap_or(101),
    };
    if steps < 2 {
        return Err(Error::Parameter("rho-steps must be >= 2".into()));
    }
    let grid: Vec<f64> = (0..steps).map(|i| i as f64 / (steps - 1) as f64).collect();
    let cfg = opts.experiment_config(ModelSpec::Exponential { rho: 0.0 });
    let rows = sweep_rho(&cfg, &grid, !args.empirical)?;
    let mut csv = String::new();
    if args.empirical {
        csv.push_str("rho,inv_gamma,upper,lower,N,L,empirical_inv_gamma\n");
    } else {
        csv.push_str("rho,inv_gamma,upper,lower,N,L\n");
    }
    for row in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{}",
            fmt_sig(row.rho),
            fmt_sig(row.inv_gamma),
            fmt_sig(row.upper),
            fmt_sig(row.lower),
            row.n,
            row.l
        ));
        if let Some(e) = row.empirical_inv_gamma {
            csv.push_str(&format!(",{}", fmt_sig(e)));
        }
        csv.push('\n');
    }
    write_output(&opts.out, &csv)?;
    Ok(0)
}

fn run_sweep_ratio(args: &SweepRatioArgs) -> Result<i32> {
    let opts = Options::resolve(&args.common)?;
    let rho = match args.rho {
        Some(r) => r,
        None => config_get(&opts.config, "rho")?.unwrap_or(0.5),
    };
    let ratio_text = args
        .ratios
        .clone()
        .or_else(|| opts.config.get("ratios").cloned())
        .unwrap_or_else(|| "2,4,8,16,32,64".to_string());
    let mut n_list = Vec::new();
    for token in ratio_text.split(',') {
        let ratio: usize = token
            .trim()
            .parse()
            .map_err(|_| Error::Parameter(format!("bad ratio {token:?}")))?;
        n_list.push(ratio * opts.l);
    }
    let cfg = opts.experiment_config(ModelSpec::Exponential { rho });
    let rows = sweep_ratio(&cfg, &n_list, rho)?;
    let mut csv = String::from("N,L,log2_ratio,inv_gamma,upper,lower,rho\n");
    for row in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.n,
            row.l,
            fmt_sig(row.log2_ratio),
            fmt_sig(row.inv_gamma),
            fmt_sig(row.upper),
            fmt_sig(row.lower),
            fmt_sig(row.rho)
        ));
    }
    write_output(&opts.out, &csv)?;
    Ok(0)
}

fn model_label(model: &ModelSpec) -> String {
    match model {
        ModelSpec::Identity => "identity".to_string(),
        ModelSpec::AllOnes => "all-ones".to_string(),
        ModelSpec::Exponential { rho } => format!("exponential(rho={})", fmt_sig(*rho)),
        ModelSpec::Toeplitz { .. } => "toeplitz".to_string(),
    }
}

fn run_experiment_cmd(args: &ExperimentArgs) -> Result<i32> {
    let opts = Options::resolve(&args.common)?;
    let model = parse_model(args, &opts)?;
    let cfg = opts.experiment_config(model.clone());
    let result = run_experiment(&cfg)?;

    let header = "model,N,L,N_P,trials,seed,empirical_sum_mse_fdls,se_fdls,\
empirical_sum_mse_dft,se_dft,empirical_gamma,analytic_sum_mse_fdls,\
analytic_sum_mse_dft,analytic_gamma\n";
    let row = format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
        model_label(&model),
        cfg.n,
        cfg.l,
        cfg.n_p,
        cfg.trials,
        cfg.seed,
        fmt_sig(result.empirical_sum_mse_fdls.mean),
        fmt_sig(result.empirical_sum_mse_fdls.std_error),
        fmt_sig(result.empirical_sum_mse_dft.mean),
        fmt_sig(result.empirical_sum_mse_dft.std_error),
        fmt_sig(result.empirical_gamma),
        fmt_sig(result.analytic.sum_mse_fdls),
        fmt_sig(result.analytic.sum_mse_dft),
        fmt_sig(result.analytic.gamma),
    );
    let csv = format!("{header}{row}");

    if opts.out.is_some() {
        write_output(&opts.out, &csv)?;
    }
    println!(
        "experiment: {} N={} L={} N_P={} trials={} seed={}",
        model_label(&model),
        cfg.n,
        cfg.l,
        cfg.n_p,
        cfg.trials,
        cfg.seed
    );
    println!(
        "  SumMSE FD-LS : empirical {:.6} +/- {:.6}  analytic {:.6}",
        result.empirical_sum_mse_fdls.mean,
        result.empirical_sum_mse_fdls.std_error,
        result.analytic.sum_mse_fdls
    );
    println!(
        "  SumMSE DFT   : empirical {:.6} +/- {:.6}  analytic {:.6}",
        result.empirical_sum_mse_dft.mean,
        result.empirical_sum_mse_dft.std_error,
        result.analytic.sum_mse_dft
    );
    println!(
        "  gamma        : empirical {:.6}  analytic {:.6}  bounds on 1/gamma [{:.6}, {:.6}]",
        result.empirical_gamma,
        result.analytic.gamma,
        result.analytic.lower_bound_inv_gamma,
        result.analytic.upper_bound_inv_gamma
    );

    if let Some(path) = &args.dump_trials {
        let mut dump =
            String::from("trial,sq_err_fdls_sd,sq_err_fdls_dd,sq_err_dft_sd,sq_err_dft_dd\n");
        for (idx, t) in result.per_trial.iter().enumerate() {
            dump.push_str(&format!(
                "{},{},{},{},{}\n",
                idx,
                fmt_sig(t[0]),
                fmt_sig(t[1]),
                fmt_sig(t[2]),
                fmt_sig(t[3])
            ));
        }
        fs::write(path, dump)?;
    }
    Ok(0)
}

fn run_verify(args: &VerifyArgs) -> Result<i32> {
    let opts = Options::resolve(&args.common)?;
    // Neither flag means both suites.
    let run_all = !args.theorem1 && !args.gradient;
    let mut failed = false;

    if args.theorem1 || run_all {
        let trials = if args.common.trials.is_some() {
            opts.trials
        } else {
            config_get(&opts.config, "trials")?.unwrap_or(1000)
        };
        let (n, l) = (
            if args.common.n.is_some() { opts.n } else { 16 },
            if args.common.l.is_some() { opts.l } else { 5 },
        );
        let report = verify_theorem1(trials, n, l, opts.seed)?;
        if report.passed() {
            println!(
                "theorem1: PASS ({} trials, N={}, L={}, zero violations)",
                report.trials, report.n, report.l
            );
        } else {
            failed = true;
            println!(
                "theorem1: FAIL ({} violations out of {} trials)",
                report.violations.len(),
                report.trials
            );
            for v in report.violations.iter().take(5) {
                println!("  trial {} (seed {:#018x}): {}", v.trial, v.seed, v.detail);
            }
        }
    }
    if args.gradient || run_all {
        let trials = if args.common.trials.is_some() {
            opts.trials
        } else {
            100
        };
        let n = args.grad_n.unwrap_or(4);
        let report = verify_trace_inverse_gradient(trials, n, opts.seed)?;
        if report.passed() {
            println!(
                "gradient: PASS ({} trials, n={}, max relative error {:.3e})",
                report.trials, report.n, report.max_rel_error
            );
        } else {
            failed = true;
            println!(
                "gradient: FAIL (max relative error {:.3e})",
                report.max_rel_error
            );
            for (trial, seed, err) in report.failures.iter().take(5) {
                println!("  trial {trial} (seed {seed:#018x}): relative error {err:.3e}");
            }
        }
    }
    Ok(if failed { 2 } else { 0 })
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::SweepRho(args) => run_sweep_rho(args),
        Command::SweepRatio(args) => run_sweep_ratio(args),
        Command::Experiment(args) => run_experiment_cmd(args),
        Command::Verify(args) => run_verify(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            1
        }
    }
}

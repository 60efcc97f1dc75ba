//! Pilot-aided channel estimation for full-duplex OFDM under colored
//! interference.
//!
//! The crate implements two joint estimators for the intended (source to
//! destination) and self-interference (destination to destination) channels:
//! a per-subcarrier frequency-domain least-squares estimator and its
//! DFT-based refinement that projects the estimate onto the cyclic-prefix
//! delay subspace. On top of the estimators sit the analytic sum-MSE
//! expressions, the exact performance gain gamma = N / tr(AB), its
//! eigenvalue-sum bounds, and a seeded Monte Carlo engine that validates the
//! analytic results empirically.
//!
//! Start with the `examples/` directory: each example is a runnable tour of
//! one capability (pilot design, colored-noise models, gain bounds, sweeps,
//! Monte Carlo validation, numerical verification of the bound theorem).

pub mod analysis;
pub mod channel;
pub mod cli;
pub mod error;
pub mod estimators;
pub mod interference;
pub mod matrixkit;
pub mod montecarlo;
pub mod pilot;

pub use error::{Error, Result};

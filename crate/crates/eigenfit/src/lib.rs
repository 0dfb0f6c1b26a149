//! Active polynomial and truncated-Fourier regression with unbiased node
//! designs drawn from random matrix eigenvalues.
//!
//! Given oracle access to a function f and a base measure (standard Gaussian,
//! uniform on [-1,1], or uniform on the unit circle), the estimators here
//! recover the best degree-d approximation of f from n >= d+1 evaluations.
//! The node design combines the eigenvalues of one random tridiagonal (or
//! Haar unitary) matrix with iid draws from the leverage score distribution;
//! a weighted least squares fit over that design is unbiased, in the sense
//! that the coefficient estimate averages to the true best-approximation
//! coefficients.
//!
//! Modules follow the pipeline:
//!
//! - [`measure`] / [`orthopoly`]: base measures, orthonormal bases, the
//!   leverage function, and quadrature-based best-fit oracles.
//! - [`randmat`] / [`trieig`]: tridiagonal matrix models and their
//!   eigenvalues; Haar unitary eigenvalues for the circle.
//! - [`sampling`]: repulsive node designs and leverage score sampling.
//! - [`regression`]: the weighted least squares fits.
//! - [`experiments`]: bias studies and error-vs-n curves with CSV output.
//! - [`cli`]: the `eigenfit` binary (sample / fit / experiment / verify).
//!
//! The `examples/` directory has one runnable example per capability; start
//! with `cargo run --example debiased_vs_leverage`.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod measure;
pub mod orthopoly;
pub mod quad;
pub mod randmat;
pub mod regression;
pub mod rng;
pub mod sampling;
pub mod stats;
pub mod svg;
pub mod target;
pub mod trieig;

pub use error::{Error, Result};
pub use experiments::{relative_error, ExperimentConfig, Method, TrialRecord};
pub use measure::Measure;
pub use orthopoly::{best_fit_coeffs, build_basis, OrthoBasis};
pub use regression::{
    circle_ls_fit, debiased_fit, fourier_debiased_fit, fourier_phase_grid_fit,
    fourier_uniform_fit, leverage_only_fit, weighted_ls_fit, FitCoeffs, PolyFit,
};
pub use rng::RngState;
pub use sampling::{dpp_density_oracle, sample_dpp_nodes, sample_leverage_nodes, NodeSet};
pub use target::TargetSpec;

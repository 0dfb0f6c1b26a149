//! Reproduction harness: bias studies and relative-error-vs-n curves with
//! CSV output.
//!
//! Trials are embarrassingly parallel. Each trial derives its own RNG stream
//! from (method, n, trial), per-trial results are collected in index order,
//! and all statistics are accumulated sequentially afterwards, so output is
//! byte-identical for any worker count.
//!
//! Complex (circle) coefficients are flattened to interleaved components
//! [Re c_0, Im c_0, Re c_1, ...] wherever a flat real vector is required
//! (bias.csv rows, trials.csv columns, covariance accumulation).

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::orthopoly::build_basis;
use crate::regression::{
    debiased_fit, fourier_debiased_fit, fourier_phase_grid_fit, fourier_uniform_fit,
    leverage_only_fit, FitCoeffs, PolyFit,
};
use crate::rng::RngState;
use crate::stats::nearest_rank_quantile;
use crate::target::TargetSpec;

/// Fitting method used in an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Debiased,
    LeverageOnly,
    /// Roots-of-unity nodes with a random phase (circle only).
    PhaseGrid,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Debiased => "debiased",
            Method::LeverageOnly => "leverage",
            Method::PhaseGrid => "phase_grid",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        match s {
            "debiased" => Some(Method::Debiased),
            "leverage" | "leverage_only" => Some(Method::LeverageOnly),
            "phase_grid" => Some(Method::PhaseGrid),
            _ => None,
        }
    }

    fn id(&self) -> u64 {
        match self {
            Method::Debiased => 1,
            Method::LeverageOnly => 2,
            Method::PhaseGrid => 3,
        }
    }
}

/// Parameters of one experiment run.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub measure: Measure,
    pub degree: usize,
    pub n_values: Vec<usize>,
    pub trials: usize,
    pub target: TargetSpec,
    pub seed: u64,
    pub methods: Vec<Method>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidConfig("method list is empty".into()));
        }
        if self.n_values.is_empty() {
            return Err(Error::InvalidConfig("no sample counts given".into()));
        }
        for &n in &self.n_values {
            if n < self.degree + 1 {
                return Err(Error::InvalidConfig(format!(
                    "n = {n} is below d+1 = {}",
                    self.degree + 1
                )));
            }
        }
        if self.methods.contains(&Method::PhaseGrid) && self.measure != Measure::CircleUniform {
            return Err(Error::InvalidConfig(
                "phase_grid is only defined on the circle".into(),
            ));
        }
        self.target.validate(self.measure, self.degree)?;
        Ok(())
    }
}

/// One fitted trial: flattened coefficient components plus its relative error.
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub method: Method,
    pub n: usize,
    pub trial: usize,
    pub components: Vec<f64>,
    pub epsilon: f64,
}

/// Flattens fit coefficients to real components.
pub fn components_of(fit: &PolyFit) -> Vec<f64> {
    match &fit.coeffs {
        FitCoeffs::Real(c) => c.clone(),
        FitCoeffs::Complex(c) => c.iter().flat_map(|z| [z.re, z.im]).collect(),
    }
}

/// Oracle data shared by every trial of a run: best-approximation coefficient
/// components, E[|f|^2], and the optimal residual.
#[derive(Debug, Clone)]
pub struct ErrorOracle {
    pub components: Vec<f64>,
    pub mean_square: f64,
    pub residual: f64,
}

impl ErrorOracle {
    pub fn build(measure: Measure, degree: usize, target: &TargetSpec) -> Result<ErrorOracle> {
        let (components, coeff_energy) = if measure == Measure::CircleUniform {
            let c = target.oracle_circle_coeffs(degree)?;
            let energy: f64 = c.iter().map(|z| z.norm_sqr()).sum();
            (
                c.iter().flat_map(|z| [z.re, z.im]).collect::<Vec<f64>>(),
                energy,
            )
        } else {
            let c = target.oracle_real_coeffs(measure, degree)?;
            let energy: f64 = c.iter().map(|x| x * x).sum();
            (c, energy)
        };
        let mean_square = target.mean_square(measure, degree)?;
        Ok(ErrorOracle {
            components,
            mean_square,
            residual: mean_square - coeff_energy,
        })
    }

    /// Relative error of a coefficient vector against this oracle, by the
    /// Parseval identity: E|p-f|^2 = E[f^2] - 2<x,c> + ||x||^2.
    pub fn epsilon(&self, components: &[f64]) -> Result<f64> {
        if self.residual <= 1e-14 {
            return Err(Error::ZeroResidualTarget);
        }
        let cross: f64 = components.iter().zip(&self.components).map(|(x, c)| x * c).sum();
        let norm: f64 = components.iter().map(|x| x * x).sum();
        let num = self.mean_square - 2.0 * cross + norm;
        Ok((num / self.residual - 1.0).max(0.0))
    }

    /// Absolute expected squared error E|p-f|^2 of a coefficient vector.
    pub fn squared_error(&self, components: &[f64]) -> f64 {
        let cross: f64 = components.iter().zip(&self.components).map(|(x, c)| x * c).sum();
        let norm: f64 = components.iter().map(|x| x * x).sum();
        (self.mean_square - 2.0 * cross + norm).max(0.0)
    }
}

/// Relative error of a single fit against the target's quadrature (or
/// analytic Fourier) oracle. Errors on zero-residual targets.
pub fn relative_error(fit: &PolyFit, target: &TargetSpec) -> Result<f64> {
    let oracle = ErrorOracle::build(fit.measure, fit.degree, target)?;
    oracle.epsilon(&components_of(fit))
}

fn run_one_trial(
    config: &ExperimentConfig,
    method: Method,
    n: usize,
    trial: usize,
) -> Result<PolyFit> {
    let state = RngState::new(config.seed).derive(&[method.id(), n as u64, trial as u64]);
    let mut rng = state.rng();
    let d = config.degree;
    if config.measure == Measure::CircleUniform {
        let f = config.target.circle_fn()?;
        match method {
            Method::Debiased => fourier_debiased_fit(d, n, f, &mut rng),
            Method::LeverageOnly => fourier_uniform_fit(d, n, f, &mut rng),
            Method::PhaseGrid => fourier_phase_grid_fit(d, n, f, &mut rng),
        }
    } else {
        let basis = build_basis(config.measure, d)?;
        let rt = config.target.real_target(&basis)?;
        let f = |t: f64| rt.eval(t);
        match method {
            Method::Debiased => debiased_fit(config.measure, d, n, f, &mut rng),
            Method::LeverageOnly => leverage_only_fit(config.measure, d, n, f, &mut rng),
            Method::PhaseGrid => Err(Error::InvalidConfig(
                "phase_grid is only defined on the circle".into(),
            )),
        }
    }
}

/// Per-method summary of a bias study.
#[derive(Debug, Clone)]
pub struct MethodBias {
    pub method: Method,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    pub stderr: Vec<f64>,
    /// Mean fitted polynomial on the plotting grid.
    pub mean_grid: Vec<f64>,
    /// Pointwise one-standard-deviation band on the grid.
    pub band_grid: Vec<f64>,
}

/// Result of a bias study at fixed n.
#[derive(Debug, Clone)]
pub struct BiasStudy {
    pub config: ExperimentConfig,
    pub n: usize,
    /// Oracle coefficient components.
    pub oracle: Vec<f64>,
    pub per_method: Vec<MethodBias>,
    /// Plotting grid (t for real measures, theta on the circle), 512 points.
    pub grid: Vec<f64>,
    /// Best approximation evaluated on the grid (real part on the circle).
    pub oracle_grid: Vec<f64>,
}

const PLOT_GRID: usize = 512;

fn plot_grid(measure: Measure) -> Vec<f64> {
    let (a, b) = match measure {
        Measure::UniformSymmetric => (-1.0, 1.0),
        Measure::GaussianStd => (-4.0, 4.0),
        Measure::CircleUniform => (0.0, 2.0 * std::f64::consts::PI),
    };
    (0..PLOT_GRID)
        .map(|i| a + (b - a) * i as f64 / (PLOT_GRID - 1) as f64)
        .collect()
}

/// Evaluates a flat component vector as a polynomial on the grid. Real
/// measures use the orthonormal basis; the circle evaluates the real part of
/// the truncated series.
fn eval_components_on_grid(
    measure: Measure,
    degree: usize,
    components: &[f64],
    grid: &[f64],
) -> Result<Vec<f64>> {
    if measure == Measure::CircleUniform {
        Ok(grid
            .iter()
            .map(|&theta| {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..=degree {
                    let c = Complex64::new(components[2 * k], components[2 * k + 1]);
                    acc += c * Complex64::from_polar(1.0, k as f64 * theta);
                }
                acc.re
            })
            .collect())
    } else {
        let basis = build_basis(measure, degree)?;
        Ok(grid.iter().map(|&t| basis.eval_poly(components, t)).collect())
    }
}

/// Component loadings g(theta) with Re p(theta) = g . components.
fn grid_loadings(measure: Measure, degree: usize, t: f64) -> Result<Vec<f64>> {
    if measure == Measure::CircleUniform {
        let mut g = Vec::with_capacity(2 * (degree + 1));
        for k in 0..=degree {
            g.push((k as f64 * t).cos());
            g.push(-(k as f64 * t).sin());
        }
        Ok(g)
    } else {
        Ok(build_basis(measure, degree)?.eval(t))
    }
}

/// Runs T trials per method at fixed n and summarizes coefficient statistics.
pub fn run_bias_study(config: &ExperimentConfig) -> Result<BiasStudy> {
    config.validate()?;
    if config.n_values.len() != 1 {
        return Err(Error::InvalidConfig(
            "a bias study takes exactly one sample count".into(),
        ));
    }
    let n = config.n_values[0];
    let t = config.trials;
    let oracle = ErrorOracle::build(config.measure, config.degree, &config.target)?;
    let p = oracle.components.len();
    let grid = plot_grid(config.measure);
    let oracle_grid =
        eval_components_on_grid(config.measure, config.degree, &oracle.components, &grid)?;
    let loadings: Vec<Vec<f64>> = grid
        .iter()
        .map(|&x| grid_loadings(config.measure, config.degree, x))
        .collect::<Result<_>>()?;

    let mut per_method = Vec::with_capacity(config.methods.len());
    for &method in &config.methods {
        let trials: Vec<Vec<f64>> = (0..t)
            .into_par_iter()
            .map(|trial| run_one_trial(config, method, n, trial).map(|fit| components_of(&fit)))
            .collect::<Result<_>>()?;
        // Sequential accumulation in trial order keeps output deterministic.
        let mut sum = vec![0.0; p];
        let mut outer = vec![0.0; p * p];
        for comp in &trials {
            for i in 0..p {
                sum[i] += comp[i];
                for j in 0..p {
                    outer[i * p + j] += comp[i] * comp[j];
                }
            }
        }
        let tf = t as f64;
        let mean: Vec<f64> = sum.iter().map(|s| s / tf).collect();
        let bessel = if t > 1 { tf / (tf - 1.0) } else { 1.0 };
        let cov = |i: usize, j: usize| (outer[i * p + j] / tf - mean[i] * mean[j]) * bessel;
        let std: Vec<f64> = (0..p).map(|i| cov(i, i).max(0.0).sqrt()).collect();
        let stderr: Vec<f64> = std.iter().map(|s| s / tf.sqrt()).collect();
        let mean_grid = eval_components_on_grid(config.measure, config.degree, &mean, &grid)?;
        let band_grid: Vec<f64> = loadings
            .iter()
            .map(|g| {
                let mut var = 0.0;
                for i in 0..p {
                    for j in 0..p {
                        var += g[i] * cov(i, j) * g[j];
                    }
                }
                var.max(0.0).sqrt()
            })
            .collect();
        per_method.push(MethodBias {
            method,
            mean,
            std,
            stderr,
            mean_grid,
            band_grid,
        });
    }
    Ok(BiasStudy {
        config: config.clone(),
        n,
        oracle: oracle.components,
        per_method,
        grid,
        oracle_grid,
    })
}

/// Quantile summary for one (method, n) cell.
#[derive(Debug, Clone)]
pub struct CurvePoint {
    pub method: Method,
    pub n: usize,
    pub q10: f64,
    pub median: f64,
    pub q90: f64,
    pub trials: usize,
}

/// Result of an error-curve run.
#[derive(Debug, Clone)]
pub struct ErrorCurves {
    pub config: ExperimentConfig,
    pub points: Vec<CurvePoint>,
    pub records: Vec<TrialRecord>,
}

/// For each method and each n, runs T trials and reports nearest-rank
/// 10%/50%/90% quantiles of the relative error.
pub fn run_error_curves(config: &ExperimentConfig) -> Result<ErrorCurves> {
    config.validate()?;
    let oracle = ErrorOracle::build(config.measure, config.degree, &config.target)?;
    if oracle.residual <= 1e-14 {
        return Err(Error::ZeroResidualTarget);
    }
    let mut points = Vec::new();
    let mut records = Vec::new();
    for &method in &config.methods {
        for &n in &config.n_values {
            let trials: Vec<TrialRecord> = (0..config.trials)
                .into_par_iter()
                .map(|trial| {
                    let fit = run_one_trial(config, method, n, trial)?;
                    let components = components_of(&fit);
                    let epsilon = oracle.epsilon(&components)?;
                    Ok(TrialRecord {
                        method,
                        n,
                        trial,
                        components,
                        epsilon,
                    })
                })
                .collect::<Result<_>>()?;
            let mut eps: Vec<f64> = trials.iter().map(|r| r.epsilon).collect();
            eps.sort_by(|a, b| a.partial_cmp(b).unwrap());
            points.push(CurvePoint {
                method,
                n,
                q10: nearest_rank_quantile(&eps, 0.10),
                median: nearest_rank_quantile(&eps, 0.50),
                q90: nearest_rank_quantile(&eps, 0.90),
                trials: config.trials,
            });
            records.extend(trials);
        }
    }
    records.sort_by_key(|r| (r.method.id(), r.n, r.trial));
    Ok(ErrorCurves {
        config: config.clone(),
        points,
        records,
    })
}

/// 17-significant-digit float formatting used in every CSV.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// bias.csv: method, coeff_index, oracle, mean, std, stderr.
pub fn bias_csv(study: &BiasStudy) -> String {
    let mut out = String::from("method,coeff_index,oracle,mean,std,stderr\n");
    for mb in &study.per_method {
        for i in 0..study.oracle.len() {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                mb.method.name(),
                i,
                fmt_float(study.oracle[i]),
                fmt_float(mb.mean[i]),
                fmt_float(mb.std[i]),
                fmt_float(mb.stderr[i]),
            ));
        }
    }
    out
}

/// curves.csv: method, n, q10, median, q90, trials.
pub fn curves_csv(curves: &ErrorCurves) -> String {
    let mut out = String::from("method,n,q10,median,q90,trials\n");
    for p in &curves.points {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            p.method.name(),
            p.n,
            fmt_float(p.q10),
            fmt_float(p.median),
            fmt_float(p.q90),
            p.trials,
        ));
    }
    out
}

/// trials.csv: method, n, trial, epsilon, then one column per component.
pub fn trials_csv(curves: &ErrorCurves) -> String {
    let width = curves.records.first().map_or(0, |r| r.components.len());
    let mut out = String::from("method,n,trial,epsilon");
    for i in 0..width {
        out.push_str(&format!(",c{i}"));
    }
    out.push('\n');
    for r in &curves.records {
        out.push_str(&format!("{},{},{},{}", r.method.name(), r.n, r.trial, fmt_float(r.epsilon)));
        for c in &r.components {
            out.push(',');
            out.push_str(&fmt_float(*c));
        }
        out.push('\n');
    }
    out
}

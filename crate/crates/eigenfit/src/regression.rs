//! Weighted least squares fits over repulsive + leverage node designs.
//!
//! The estimator follows a two-part design: d+1 nodes from one ensemble draw
//! (jointly repulsive) plus n-d-1 iid leverage score nodes, then
//!
//!   argmin_x sum_i (1/tau(t_i)) |p(t_i) - f(t_i)|^2,
//!
//! solved by Householder QR in the orthonormal basis. With this design the
//! coefficient estimate is unbiased: its mean equals the best-approximation
//! coefficients. The iid-leverage-only baseline and the circle (truncated
//! Fourier) variants share the same least-squares core.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{lsq_solve, Mat};
use crate::measure::Measure;
use crate::orthopoly::{build_basis, OrthoBasis};
use crate::sampling::{self, NodeSet};

/// A fitted degree-d polynomial: coefficients in the orthonormal basis for
/// real measures, or over z^k on the circle.
#[derive(Debug, Clone)]
pub struct PolyFit {
    pub measure: Measure,
    pub degree: usize,
    pub coeffs: FitCoeffs,
    pub nodes_used: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FitCoeffs {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl PolyFit {
    pub fn real_coeffs(&self) -> Option<&[f64]> {
        match &self.coeffs {
            FitCoeffs::Real(c) => Some(c),
            FitCoeffs::Complex(_) => None,
        }
    }

    pub fn complex_coeffs(&self) -> Option<&[Complex64]> {
        match &self.coeffs {
            FitCoeffs::Complex(c) => Some(c),
            FitCoeffs::Real(_) => None,
        }
    }

    /// Evaluates a real-measure fit at `t`.
    pub fn eval_real(&self, basis: &OrthoBasis, t: f64) -> f64 {
        let c = self.real_coeffs().expect("real fit");
        basis.eval_poly(c, t)
    }

    /// Evaluates a circle fit at e^{i theta}.
    pub fn eval_circle(&self, theta: f64) -> Complex64 {
        let c = self.complex_coeffs().expect("circle fit");
        let z = Complex64::from_polar(1.0, theta);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut zk = Complex64::new(1.0, 0.0);
        for &ck in c {
            acc += ck * zk;
            zk *= z;
        }
        acc
    }
}

/// Diagnoses a rank-deficient design by naming the closest node pair.
fn collision_error(points: &[f64]) -> Error {
    let mut best = (0usize, 1usize, f64::INFINITY);
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let gap = (points[i] - points[j]).abs();
            if gap < best.2 {
                best = (i, j, gap);
            }
        }
    }
    Error::CoincidentNodes {
        i: best.0,
        j: best.1,
        value: points[best.0],
    }
}

/// Solves min_x ||S(Vx - b)||_2 with V_ij = P_j(t_i) and S = diag(sqrt(w_i)).
pub fn weighted_ls_fit(basis: &OrthoBasis, nodes: &NodeSet, values: &[f64]) -> Result<PolyFit> {
    let d = basis.degree();
    let n = nodes.len();
    if n < d + 1 {
        return Err(Error::TooFewNodes { degree: d, n });
    }
    let points = nodes
        .real_points()
        .ok_or(Error::UnsupportedMeasure(Measure::CircleUniform))?;
    assert_eq!(values.len(), n);
    assert!(values.iter().all(|v| v.is_finite()), "values must be finite");
    let mut v = Mat::<f64>::zeros(n, d + 1);
    let mut b = vec![0.0; n];
    for (i, (&t, &w)) in points.iter().zip(&nodes.weights).enumerate() {
        let s = w.sqrt();
        for (j, p) in basis.eval(t).into_iter().enumerate() {
            v[(i, j)] = s * p;
        }
        b[i] = s * values[i];
    }
    let x = lsq_solve(v, &b).map_err(|e| match e {
        Error::RankDeficient { .. } => collision_error(points),
        other => other,
    })?;
    Ok(PolyFit {
        measure: nodes.measure,
        degree: d,
        coeffs: FitCoeffs::Real(x),
        nodes_used: n,
    })
}

/// Unweighted least squares over the basis {1, z, ..., z^d} on the circle.
pub fn circle_ls_fit(degree: usize, nodes: &NodeSet, values: &[Complex64]) -> Result<PolyFit> {
    let n = nodes.len();
    if n < degree + 1 {
        return Err(Error::TooFewNodes { degree, n });
    }
    let points = nodes
        .circle_points()
        .ok_or(Error::UnsupportedMeasure(nodes.measure))?;
    assert_eq!(values.len(), n);
    let mut v = Mat::<Complex64>::zeros(n, degree + 1);
    for (i, &z) in points.iter().enumerate() {
        let mut zk = Complex64::new(1.0, 0.0);
        for j in 0..=degree {
            v[(i, j)] = zk;
            zk *= z;
        }
    }
    let x = lsq_solve(v, values).map_err(|e| match e {
        Error::RankDeficient { .. } => {
            let args: Vec<f64> = points.iter().map(|&z| sampling::circle_arg(z)).collect();
            collision_error(&args)
        }
        other => other,
    })?;
    Ok(PolyFit {
        measure: Measure::CircleUniform,
        degree,
        coeffs: FitCoeffs::Complex(x),
        nodes_used: n,
    })
}

/// The unbiased estimator: d+1 repulsive nodes plus n-d-1 leverage nodes,
/// f evaluated once per node (exactly n oracle calls), weighted LS fit.
/// Rank deficiency is a hard error here; the repulsive design has distinct
/// nodes almost surely, so resampling would bias the estimator.
pub fn debiased_fit<R: Rng + ?Sized, F: Fn(f64) -> f64>(
    measure: Measure,
    d: usize,
    n: usize,
    f: F,
    rng: &mut R,
) -> Result<PolyFit> {
    if n < d + 1 {
        return Err(Error::TooFewNodes { degree: d, n });
    }
    if !measure.is_real() {
        return Err(Error::UnsupportedMeasure(measure));
    }
    let basis = build_basis(measure, d)?;
    let dpp = sampling::sample_dpp_nodes(measure, d, rng)?;
    let lev = sampling::sample_leverage_nodes(measure, d, n - d - 1, rng)?;
    let nodes = dpp.merged(lev);
    let values: Vec<f64> = nodes.real_points().unwrap().iter().map(|&t| f(t)).collect();
    weighted_ls_fit(&basis, &nodes, &values)
}

/// The biased baseline: n iid leverage nodes, weighted LS. Retries a fresh
/// draw up to 3 times on rank deficiency.
pub fn leverage_only_fit<R: Rng + ?Sized, F: Fn(f64) -> f64>(
    measure: Measure,
    d: usize,
    n: usize,
    f: F,
    rng: &mut R,
) -> Result<PolyFit> {
    if n < d + 1 {
        return Err(Error::TooFewNodes { degree: d, n });
    }
    if !measure.is_real() {
        return Err(Error::UnsupportedMeasure(measure));
    }
    let basis = build_basis(measure, d)?;
    let mut attempt = 0;
    loop {
        let nodes = sampling::sample_leverage_nodes(measure, d, n, rng)?;
        let values: Vec<f64> = nodes.real_points().unwrap().iter().map(|&t| f(t)).collect();
        match weighted_ls_fit(&basis, &nodes, &values) {
            Err(Error::CoincidentNodes { .. }) if attempt < 3 => attempt += 1,
            other => return other,
        }
    }
}

/// Unbiased truncated-Fourier estimator: d+1 Haar unitary eigenvalues plus
/// n-d-1 iid uniform circle points, unweighted LS over {1, z, ..., z^d}.
pub fn fourier_debiased_fit<R: Rng + ?Sized, F: Fn(Complex64) -> Complex64>(
    d: usize,
    n: usize,
    f: F,
    rng: &mut R,
) -> Result<PolyFit> {
    if n < d + 1 {
        return Err(Error::TooFewNodes { degree: d, n });
    }
    let dpp = sampling::sample_dpp_nodes(Measure::CircleUniform, d, rng)?;
    let extra = sampling::sample_leverage_nodes(Measure::CircleUniform, d, n - d - 1, rng)?;
    let nodes = dpp.merged(extra);
    let values: Vec<Complex64> = nodes.circle_points().unwrap().iter().map(|&z| f(z)).collect();
    circle_ls_fit(d, &nodes, &values)
}

/// Baseline on the circle: n iid uniform points (the leverage distribution
/// there is uniform), unweighted LS.
pub fn fourier_uniform_fit<R: Rng + ?Sized, F: Fn(Complex64) -> Complex64>(
    d: usize,
    n: usize,
    f: F,
    rng: &mut R,
) -> Result<PolyFit> {
    if n < d + 1 {
        return Err(Error::TooFewNodes { degree: d, n });
    }
    let mut attempt = 0;
    loop {
        let nodes = sampling::sample_leverage_nodes(Measure::CircleUniform, d, n, rng)?;
        let values: Vec<Complex64> =
            nodes.circle_points().unwrap().iter().map(|&z| f(z)).collect();
        match circle_ls_fit(d, &nodes, &values) {
            Err(Error::CoincidentNodes { .. }) if attempt < 3 => attempt += 1,
            other => return other,
        }
    }
}

/// Roots-of-unity design with a uniformly random phase: z_j = e^{i(t0 + 2pi j/n)}.
/// Also unbiased; exposed as an experiment method with no error contract.
pub fn fourier_phase_grid_fit<R: Rng + ?Sized, F: Fn(Complex64) -> Complex64>(
    d: usize,
    n: usize,
    f: F,
    rng: &mut R,
) -> Result<PolyFit> {
    if n < d + 1 {
        return Err(Error::TooFewNodes { degree: d, n });
    }
    let theta0 = rng.random_range(0.0..2.0 * std::f64::consts::PI);
    let points: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(1.0, theta0 + 2.0 * std::f64::consts::PI * j as f64 / n as f64))
        .collect();
    let nodes = NodeSet {
        measure: Measure::CircleUniform,
        points: sampling::Points::Circle(points),
        weights: vec![1.0; n],
        provenance: vec![sampling::Provenance::Leverage; n],
    };
    let values: Vec<Complex64> = nodes.circle_points().unwrap().iter().map(|&z| f(z)).collect();
    circle_ls_fit(d, &nodes, &values)
}

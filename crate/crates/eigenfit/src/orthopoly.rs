//! Orthonormal polynomial bases, the leverage function, and quadrature-based
//! best-fit coefficients.
//!
//! For each real measure the basis P_0..P_d is orthonormal in L2(mu) and is
//! stored as three-term recurrence data in the orthonormal normalization:
//!
//!   t * P_j(t) = b_{j+1} P_{j+1}(t) + a_j P_j(t) + b_j P_{j-1}(t)
//!
//! Gaussian: normalized probabilists' Hermite, a_j = 0, b_j = sqrt(j).
//! Uniform on [-1,1]: normalized Legendre, a_j = 0, b_j = j/sqrt((2j-1)(2j+1)).
//!
//! Evaluation always runs the recurrence; monomial powers are never formed.

use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::quad::integrate_piecewise;
use crate::target::RealTarget;

/// Orthonormal basis P_0..P_d for a real measure.
#[derive(Debug, Clone)]
pub struct OrthoBasis {
    measure: Measure,
    degree: usize,
    /// a_0..a_d
    diag: Vec<f64>,
    /// b_1..b_d (b_j at index j-1)
    offdiag: Vec<f64>,
    /// Leading coefficient of each P_j.
    leading: Vec<f64>,
}

/// Builds the orthonormal basis of degree `d` for a real measure.
///
/// The circle measure uses the monomial basis z^k, which needs no recurrence
/// data; asking for a basis there is an error.
pub fn build_basis(measure: Measure, d: usize) -> Result<OrthoBasis> {
    let offdiag: Vec<f64> = match measure {
        Measure::GaussianStd => (1..=d).map(|j| (j as f64).sqrt()).collect(),
        Measure::UniformSymmetric => (1..=d)
            .map(|j| {
                let jf = j as f64;
                jf / ((2.0 * jf - 1.0) * (2.0 * jf + 1.0)).sqrt()
            })
            .collect(),
        Measure::CircleUniform => return Err(Error::UnsupportedMeasure(measure)),
    };
    // Leading coefficient of P_{j+1} is leading(P_j)/b_{j+1}; P_0 = 1.
    let mut leading = vec![1.0];
    for &b in &offdiag {
        let prev = *leading.last().unwrap();
        leading.push(prev / b);
    }
    Ok(OrthoBasis {
        measure,
        degree: d,
        diag: vec![0.0; d + 1],
        offdiag,
        leading,
    })
}

impl OrthoBasis {
    pub fn measure(&self) -> Measure {
        self.measure
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Recurrence coefficients (a_j, b_j). `b(0)` is unused and returned as 0.
    pub fn recurrence(&self, j: usize) -> (f64, f64) {
        let b = if j == 0 { 0.0 } else { self.offdiag[j - 1] };
        (self.diag[j], b)
    }

    /// Leading coefficient of P_j; positive for every j.
    pub fn leading_coefficient(&self, j: usize) -> f64 {
        self.leading[j]
    }

    /// Evaluates [P_0(t), ..., P_d(t)] by the three-term recurrence.
    pub fn eval(&self, t: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.degree + 1);
        out.push(1.0);
        if self.degree == 0 {
            return out;
        }
        out.push((t - self.diag[0]) / self.offdiag[0]);
        for j in 1..self.degree {
            let next =
                ((t - self.diag[j]) * out[j] - self.offdiag[j - 1] * out[j - 1]) / self.offdiag[j];
            out.push(next);
        }
        out
    }

    /// Evaluates the polynomial with coefficients `x` in this basis at `t`.
    pub fn eval_poly(&self, x: &[f64], t: f64) -> f64 {
        self.eval(t).iter().zip(x).map(|(p, c)| p * c).sum()
    }

    /// Leverage function tau(t) = sum_i P_i(t)^2. Always >= 1 since P_0 = 1.
    pub fn leverage(&self, t: f64) -> f64 {
        self.eval(t).iter().map(|p| p * p).sum()
    }
}

/// Quadrature order used for inner products at degree `d`.
pub(crate) fn quadrature_order(d: usize) -> usize {
    (4 * (d + 1)).max(32)
}

/// Integration interval for degree-d integrands against the measure. The
/// Gaussian interval must cover the oscillatory support of the degree-d
/// Hermite polynomial, which reaches +-sqrt(4d+2); beyond the cushion the
/// weighted integrand is far below every tolerance in use.
pub fn integration_interval(measure: Measure, d: usize) -> (f64, f64) {
    match measure {
        Measure::UniformSymmetric => (-1.0, 1.0),
        Measure::GaussianStd => {
            let b = (4.0 * d as f64 + 2.0).sqrt() + 6.0;
            let b = b.max(crate::measure::GAUSSIAN_TRUNCATION);
            (-b, b)
        }
        Measure::CircleUniform => panic!("circle measure has no real integration interval"),
    }
}

/// Best-fit coefficients c_k = <f, P_k>_mu of a piecewise-smooth target,
/// computed by Gauss quadrature on each smooth piece.
pub fn best_fit_coeffs(measure: Measure, basis: &OrthoBasis, target: &RealTarget) -> Result<Vec<f64>> {
    if !measure.is_real() {
        return Err(Error::UnsupportedMeasure(measure));
    }
    let (a, b) = integration_interval(measure, basis.degree());
    let order = quadrature_order(basis.degree());
    let breakpoints = target.breakpoints();
    (0..=basis.degree())
        .map(|k| {
            integrate_piecewise(
                |t| target.eval(t) * basis.eval(t)[k] * measure.pdf(t),
                a,
                b,
                &breakpoints,
                order,
                1e-12,
            )
        })
        .collect()
}

/// E_mu[f^2] of a piecewise-smooth target, by the same quadrature scheme.
pub fn mean_square(measure: Measure, target: &RealTarget, degree_hint: usize) -> Result<f64> {
    let (a, b) = integration_interval(measure, degree_hint);
    integrate_piecewise(
        |t| {
            let v = target.eval(t);
            v * v * measure.pdf(t)
        },
        a,
        b,
        &target.breakpoints(),
        quadrature_order(degree_hint),
        1e-12,
    )
}

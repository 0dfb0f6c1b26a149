//! Base probability measures.

use serde::{Deserialize, Serialize};

/// Interval used in place of the Gaussian's unbounded support when
/// integrating numerically. The normal tail mass beyond |t| = 12 is below
/// 1e-31, far under every tolerance in this crate.
pub const GAUSSIAN_TRUNCATION: f64 = 12.0;

/// The distribution the approximation error is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    /// Standard Gaussian N(0,1) on the real line.
    GaussianStd,
    /// Uniform on [-1, 1].
    UniformSymmetric,
    /// Uniform on the complex unit circle.
    CircleUniform,
}

impl Measure {
    /// Probability density at `t` (real measures only; the circle measure is
    /// handled by its own code paths).
    pub fn pdf(&self, t: f64) -> f64 {
        match self {
            Measure::GaussianStd => (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt(),
            Measure::UniformSymmetric => {
                if (-1.0..=1.0).contains(&t) {
                    0.5
                } else {
                    0.0
                }
            }
            Measure::CircleUniform => panic!("pdf of the circle measure is not a function of a real argument"),
        }
    }

    /// Effective real support used for quadrature.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Measure::GaussianStd => (-GAUSSIAN_TRUNCATION, GAUSSIAN_TRUNCATION),
            Measure::UniformSymmetric => (-1.0, 1.0),
            Measure::CircleUniform => panic!("circle measure has no real support interval"),
        }
    }

    pub fn is_real(&self) -> bool {
        !matches!(self, Measure::CircleUniform)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Measure::GaussianStd => "gaussian",
            Measure::UniformSymmetric => "uniform",
            Measure::CircleUniform => "circle",
        }
    }

    pub fn parse(s: &str) -> Option<Measure> {
        match s {
            "gaussian" => Some(Measure::GaussianStd),
            "uniform" => Some(Measure::UniformSymmetric),
            "circle" => Some(Measure::CircleUniform),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::adaptive_integrate;

    #[test]
    fn real_pdfs_integrate_to_one() {
        for m in [Measure::GaussianStd, Measure::UniformSymmetric] {
            let (a, b) = m.support();
            let mass = adaptive_integrate(|t| m.pdf(t), a, b, 64, 1e-13).unwrap();
            assert!((mass - 1.0).abs() < 1e-12, "{m:?} mass {mass}");
        }
    }

    #[test]
    fn names_round_trip() {
        for m in [
            Measure::GaussianStd,
            Measure::UniformSymmetric,
            Measure::CircleUniform,
        ] {
            assert_eq!(Measure::parse(m.name()), Some(m));
        }
    }
}

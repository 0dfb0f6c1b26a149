//! Target functions: what the regression methods are asked to approximate.
//!
//! Targets are first-class piecewise-smooth functions with declared
//! breakpoints, so indicators integrate exactly under panel quadrature.
//! [`TargetSpec`] is the serializable description used by the CLI and the
//! experiment harness; [`RealTarget`] is the evaluatable form on the real
//! line.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::orthopoly::{self, OrthoBasis};

/// A piecewise-smooth real target with known breakpoints.
pub struct RealTarget {
    f: Box<dyn Fn(f64) -> f64 + Sync + Send>,
    breakpoints: Vec<f64>,
}

impl RealTarget {
    /// The indicator of [lo, hi].
    pub fn indicator(lo: f64, hi: f64) -> Self {
        Self {
            f: Box::new(move |t| if t >= lo && t <= hi { 1.0 } else { 0.0 }),
            breakpoints: vec![lo, hi],
        }
    }

    /// A polynomial given by coefficients in the orthonormal basis.
    pub fn poly(basis: &OrthoBasis, coeffs: &[f64]) -> Self {
        let basis = basis.clone();
        let coeffs = coeffs.to_vec();
        Self {
            f: Box::new(move |t| basis.eval_poly(&coeffs, t)),
            breakpoints: Vec::new(),
        }
    }

    /// An arbitrary piecewise-smooth function with declared breakpoints.
    pub fn piecewise<F: Fn(f64) -> f64 + Sync + Send + 'static>(f: F, breakpoints: Vec<f64>) -> Self {
        Self {
            f: Box::new(f),
            breakpoints,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        self.breakpoints.clone()
    }
}

/// Serializable target description.
///
/// `Poly` coefficients are expressed in the orthonormal basis of the measure
/// in play (or over z^k on the circle), so in-model targets are recovered
/// coefficient-for-coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TargetSpec {
    /// Indicator of [lo, hi] on the real line.
    Indicator { lo: f64, hi: f64 },
    /// Indicator of the angular arc [lo, hi] (radians in [0, 2pi]) on the circle.
    Arc { lo: f64, hi: f64 },
    /// Fixed polynomial with the given basis coefficients.
    Poly { coeffs: Vec<f64> },
}

impl TargetSpec {
    /// Parses `indicator:a,b`, `arc:a,b`, or `poly:c0,c1,...`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidTarget(format!("{msg} in `{s}`"));
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| bad("expected `kind:args`"))?;
        let nums: Vec<f64> = rest
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad("non-numeric argument"))?;
        match kind {
            "indicator" | "arc" => {
                if nums.len() != 2 {
                    return Err(bad("expected two bounds"));
                }
                let (lo, hi) = (nums[0], nums[1]);
                if !(lo < hi) {
                    return Err(bad("bounds must satisfy lo < hi"));
                }
                if kind == "indicator" {
                    Ok(TargetSpec::Indicator { lo, hi })
                } else {
                    if lo < 0.0 || hi > 2.0 * std::f64::consts::PI + 1e-12 {
                        return Err(bad("arc bounds must lie in [0, 2pi]"));
                    }
                    Ok(TargetSpec::Arc { lo, hi })
                }
            }
            "poly" => {
                if nums.is_empty() {
                    return Err(bad("expected at least one coefficient"));
                }
                Ok(TargetSpec::Poly { coeffs: nums })
            }
            _ => Err(bad("unknown target kind")),
        }
    }

    pub fn to_spec_string(&self) -> String {
        match self {
            TargetSpec::Indicator { lo, hi } => format!("indicator:{lo},{hi}"),
            TargetSpec::Arc { lo, hi } => format!("arc:{lo},{hi}"),
            TargetSpec::Poly { coeffs } => format!(
                "poly:{}",
                coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
            ),
        }
    }

    /// Checks the target is usable with the given measure and degree.
    pub fn validate(&self, measure: Measure, d: usize) -> Result<()> {
        match self {
            TargetSpec::Indicator { lo, hi } => {
                if !measure.is_real() {
                    return Err(Error::InvalidTarget(
                        "indicator targets require a real measure".into(),
                    ));
                }
                if measure == Measure::UniformSymmetric && (*lo < -1.0 || *hi > 1.0) {
                    return Err(Error::InvalidTarget(
                        "indicator bounds must lie within [-1, 1]".into(),
                    ));
                }
                Ok(())
            }
            TargetSpec::Arc { .. } => {
                if measure != Measure::CircleUniform {
                    return Err(Error::InvalidTarget("arc targets require the circle measure".into()));
                }
                Ok(())
            }
            TargetSpec::Poly { coeffs } => {
                if coeffs.len() > d + 1 {
                    return Err(Error::InvalidTarget(format!(
                        "poly target has degree {} but the fit degree is {d}",
                        coeffs.len() - 1
                    )));
                }
                Ok(())
            }
        }
    }

    /// Instantiates the target on the real line.
    pub fn real_target(&self, basis: &OrthoBasis) -> Result<RealTarget> {
        match self {
            TargetSpec::Indicator { lo, hi } => Ok(RealTarget::indicator(*lo, *hi)),
            TargetSpec::Poly { coeffs } => Ok(RealTarget::poly(basis, coeffs)),
            TargetSpec::Arc { .. } => Err(Error::InvalidTarget(
                "arc targets live on the circle".into(),
            )),
        }
    }

    /// Instantiates the target on the unit circle.
    pub fn circle_fn(&self) -> Result<impl Fn(Complex64) -> Complex64 + Sync + Send + Clone> {
        enum Kind {
            Arc { lo: f64, hi: f64 },
            Poly { coeffs: Vec<f64> },
        }
        impl Clone for Kind {
            fn clone(&self) -> Self {
                match self {
                    Kind::Arc { lo, hi } => Kind::Arc { lo: *lo, hi: *hi },
                    Kind::Poly { coeffs } => Kind::Poly { coeffs: coeffs.clone() },
                }
            }
        }
        let kind = match self {
            TargetSpec::Arc { lo, hi } => Kind::Arc { lo: *lo, hi: *hi },
            TargetSpec::Poly { coeffs } => Kind::Poly { coeffs: coeffs.clone() },
            TargetSpec::Indicator { .. } => {
                return Err(Error::InvalidTarget(
                    "indicator targets live on the real line".into(),
                ))
            }
        };
        Ok(move |z: Complex64| match &kind {
            Kind::Arc { lo, hi } => {
                let theta = z.arg().rem_euclid(2.0 * std::f64::consts::PI);
                if theta >= *lo && theta <= *hi {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            Kind::Poly { coeffs } => {
                let mut acc = Complex64::new(0.0, 0.0);
                let mut zk = Complex64::new(1.0, 0.0);
                for &c in coeffs {
                    acc += zk * c;
                    zk *= z;
                }
                acc
            }
        })
    }

    /// Oracle coefficients of the best degree-d approximation: quadrature
    /// against the orthonormal basis for real measures, analytic Fourier
    /// coefficients on the circle.
    pub fn oracle_real_coeffs(&self, measure: Measure, d: usize) -> Result<Vec<f64>> {
        let basis = orthopoly::build_basis(measure, d)?;
        match self {
            TargetSpec::Poly { coeffs } => {
                let mut c = coeffs.clone();
                c.resize(d + 1, 0.0);
                Ok(c)
            }
            _ => orthopoly::best_fit_coeffs(measure, &basis, &self.real_target(&basis)?),
        }
    }

    /// Analytic Fourier coefficients c_0..c_d on the circle.
    pub fn oracle_circle_coeffs(&self, d: usize) -> Result<Vec<Complex64>> {
        match self {
            TargetSpec::Arc { lo, hi } => Ok((0..=d).map(|k| arc_fourier_coeff(*lo, *hi, k as i64)).collect()),
            TargetSpec::Poly { coeffs } => {
                let mut c: Vec<Complex64> =
                    coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
                c.resize(d + 1, Complex64::new(0.0, 0.0));
                Ok(c)
            }
            TargetSpec::Indicator { .. } => Err(Error::InvalidTarget(
                "indicator targets live on the real line".into(),
            )),
        }
    }

    /// E_mu[|f|^2].
    pub fn mean_square(&self, measure: Measure, d: usize) -> Result<f64> {
        match (self, measure) {
            (TargetSpec::Arc { lo, hi }, Measure::CircleUniform) => {
                Ok((hi - lo) / (2.0 * std::f64::consts::PI))
            }
            (TargetSpec::Poly { coeffs }, Measure::CircleUniform) => {
                Ok(coeffs.iter().map(|c| c * c).sum())
            }
            (TargetSpec::Poly { coeffs }, _) => Ok(coeffs.iter().map(|c| c * c).sum()),
            (spec, m) if m.is_real() => {
                let basis = orthopoly::build_basis(m, d)?;
                orthopoly::mean_square(m, &spec.real_target(&basis)?, d)
            }
            (_, m) => Err(Error::UnsupportedMeasure(m)),
        }
    }
}

/// k-th Fourier coefficient of the arc indicator: (1/2pi) int_lo^hi e^{-ik t} dt.
pub fn arc_fourier_coeff(lo: f64, hi: f64, k: i64) -> Complex64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    if k == 0 {
        Complex64::new((hi - lo) / two_pi, 0.0)
    } else {
        let kf = k as f64;
        let e = |t: f64| Complex64::new(0.0, -kf * t).exp();
        (e(lo) - e(hi)) / Complex64::new(0.0, two_pi * kf)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn parse_round_trips() {
        for s in ["indicator:-0.5,0.5", "arc:2.356,3.927", "poly:1,0,-2.5"] {
            let spec = TargetSpec::parse(s).unwrap();
            assert_eq!(TargetSpec::parse(&spec.to_spec_string()).unwrap(), spec);
        }
        assert!(TargetSpec::parse("indicator:0.5,-0.5").is_err());
        assert!(TargetSpec::parse("arc:0,9").is_err());
        assert!(TargetSpec::parse("poly:").is_err());
        assert!(TargetSpec::parse("blorp:1,2").is_err());
    }

    #[test]
    fn arc_coefficients_match_quadrature() {
        let (lo, hi) = (3.0 * PI / 4.0, 5.0 * PI / 4.0);
        assert_abs_diff_eq!(arc_fourier_coeff(lo, hi, 0).re, 0.25, epsilon = 1e-15);
        // Midpoint-rule oracle for k = 1..4.
        let steps = 2_000_000;
        let h = (hi - lo) / steps as f64;
        for k in 1..=4i64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..steps {
                let t = lo + (i as f64 + 0.5) * h;
                acc += Complex64::new(0.0, -(k as f64) * t).exp() * h;
            }
            acc /= 2.0 * PI;
            let got = arc_fourier_coeff(lo, hi, k);
            assert_abs_diff_eq!(got.re, acc.re, epsilon = 1e-9);
            assert_abs_diff_eq!(got.im, acc.im, epsilon = 1e-9);
        }
    }

    #[test]
    fn arc_indicator_on_circle() {
        let spec = TargetSpec::Arc {
            lo: 3.0 * PI / 4.0,
            hi: 5.0 * PI / 4.0,
        };
        let f = spec.circle_fn().unwrap();
        assert_eq!(f(Complex64::new(-1.0, 0.0)).re, 1.0); // theta = pi
        assert_eq!(f(Complex64::new(1.0, 0.0)).re, 0.0); // theta = 0
        assert_eq!(f(Complex64::new(0.0, 1.0)).re, 0.0); // theta = pi/2
    }

    #[test]
    fn validation_rules() {
        let ind = TargetSpec::Indicator { lo: -0.5, hi: 0.5 };
        assert!(ind.validate(Measure::UniformSymmetric, 5).is_ok());
        assert!(ind.validate(Measure::CircleUniform, 5).is_err());
        let wide = TargetSpec::Indicator { lo: -2.0, hi: 0.5 };
        assert!(wide.validate(Measure::UniformSymmetric, 5).is_err());
        assert!(wide.validate(Measure::GaussianStd, 5).is_ok());
        let poly = TargetSpec::Poly { coeffs: vec![1.0, 2.0, 3.0] };
        assert!(poly.validate(Measure::UniformSymmetric, 1).is_err());
        assert!(poly.validate(Measure::UniformSymmetric, 2).is_ok());
    }
}

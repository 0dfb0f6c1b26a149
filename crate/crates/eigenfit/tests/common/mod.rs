//! Shared helpers for the integration test suites.
#![allow(dead_code)] // each test target uses a different subset

use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

/// Standard normal pdf.
pub fn phi(t: f64) -> f64 {
    (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Standard normal cdf.
pub fn normal_cdf(t: f64) -> f64 {
    Normal::new(0.0, 1.0).unwrap().cdf(t)
}

/// Critical chi-square value at the given significance level.
pub fn chi2_critical(dof: usize, significance: f64) -> f64 {
    ChiSquared::new(dof as f64).unwrap().inverse_cdf(1.0 - significance)
}

/// Asymptotic two-sample KS critical value at the given significance.
pub fn ks_two_sample_critical(m: usize, n: usize, significance: f64) -> f64 {
    let c = (-(significance / 2.0).ln() / 2.0).sqrt();
    c * (((m + n) as f64) / ((m * n) as f64)).sqrt()
}

/// Prints the per-criterion verdict line used by the acceptance suite.
pub fn report(name: &str, pass: bool) {
    println!("{name}: {}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "{name} failed");
}

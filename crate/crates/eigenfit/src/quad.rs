//! Gauss-Legendre quadrature.
//!
//! Nodes and weights on [-1, 1] are computed by Newton iteration on the
//! Legendre recurrence, which is accurate to machine precision for the orders
//! used here (up to a few hundred points). Integrals of piecewise-smooth
//! functions are handled by integrating each smooth piece separately, with an
//! adaptive bisection fallback that refines panels until the result
//! stabilizes.

use crate::error::{Error, Result};

/// A Gauss-Legendre rule on the reference interval [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the n-point rule. Exact for polynomials of degree <= 2n-1.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "quadrature order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                let step = p / d;
                x -= step;
                if step.abs() < 1e-15 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            // Center node of odd rules is exactly zero.
            nodes[n / 2] = 0.0;
            let (_, d) = legendre_with_derivative(n, 0.0);
            weights[n / 2] = 2.0 / (d * d);
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Reference nodes/weights on [-1, 1].
    pub fn reference(&self) -> (&[f64], &[f64]) {
        (&self.nodes, &self.weights)
    }

    /// Integrates `f` over [a, b].
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
}

/// (P_n(x), P_n'(x)) by the classical three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integrates `f` over [a, b] with an n-point rule, bisecting panels until
/// the value is stable to `tol`. Returns an error if refinement stalls.
pub fn adaptive_integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, order: usize, tol: f64) -> Result<f64> {
    let rule = GaussLegendre::new(order);
    let mut delta = f64::INFINITY;
    fn recurse<F: Fn(f64) -> f64>(
        rule: &GaussLegendre,
        f: &F,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: usize,
        worst: &mut f64,
    ) -> Option<f64> {
        let mid = 0.5 * (a + b);
        let left = rule.integrate(a, mid, f);
        let right = rule.integrate(mid, b, f);
        let diff = (left + right - whole).abs();
        if diff <= tol {
            return Some(left + right);
        }
        if depth == 0 {
            *worst = (*worst).min(diff);
            return None;
        }
        let l = recurse(rule, f, a, mid, left, 0.5 * tol, depth - 1, worst)?;
        let r = recurse(rule, f, mid, b, right, 0.5 * tol, depth - 1, worst)?;
        Some(l + r)
    }
    let whole = rule.integrate(a, b, &f);
    match recurse(&rule, &f, a, b, whole, tol, 28, &mut delta) {
        Some(v) => Ok(v),
        None => Err(Error::QuadratureNonConvergence { tol, delta }),
    }
}

/// Integrates a piecewise-smooth `f` whose non-smooth points are listed in
/// `breakpoints`; each smooth piece is integrated adaptively.
pub fn integrate_piecewise<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    order: usize,
    tol: f64,
) -> Result<f64> {
    let mut cuts: Vec<f64> = std::iter::once(a)
        .chain(breakpoints.iter().copied().filter(|&t| t > a && t < b))
        .chain(std::iter::once(b))
        .collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut acc = 0.0;
    for pair in cuts.windows(2) {
        if pair[1] > pair[0] {
            acc += adaptive_integrate(&f, pair[0], pair[1], order, tol)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn two_point_rule_is_exact() {
        let rule = GaussLegendre::new(2);
        let (nodes, weights) = rule.reference();
        let r = 1.0 / 3.0_f64.sqrt();
        assert_abs_diff_eq!(nodes[0], -r, epsilon = 1e-15);
        assert_abs_diff_eq!(nodes[1], r, epsilon = 1e-15);
        assert_abs_diff_eq!(weights[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(weights[1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn integrates_polynomials_exactly() {
        // Degree 2n-1 = 9 with n = 5 points.
        let rule = GaussLegendre::new(5);
        let got = rule.integrate(-1.0, 1.0, |x| x.powi(8));
        assert_abs_diff_eq!(got, 2.0 / 9.0, epsilon = 1e-14);
        let got = rule.integrate(0.0, 2.0, |x| 3.0 * x.powi(9) - x);
        assert_abs_diff_eq!(got, 3.0 * 2.0_f64.powi(10) / 10.0 - 2.0, epsilon = 1e-11);
    }

    #[test]
    fn high_order_weights_sum_to_length() {
        for n in [31, 64, 165] {
            let rule = GaussLegendre::new(n);
            let total: f64 = rule.reference().1.iter().sum();
            assert_abs_diff_eq!(total, 2.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn adaptive_handles_oscillatory_integrand() {
        // int_0^1 sin(40x) dx = (1 - cos 40)/40
        let got = adaptive_integrate(|x| (40.0 * x).sin(), 0.0, 1.0, 16, 1e-12).unwrap();
        assert_abs_diff_eq!(got, (1.0 - 40.0_f64.cos()) / 40.0, epsilon = 1e-11);
    }

    #[test]
    fn piecewise_splits_at_breakpoints() {
        // Indicator of [-0.5, 0.5] against the uniform pdf.
        let f = |t: f64| if (-0.5..=0.5).contains(&t) { 0.5 } else { 0.0 };
        let got = integrate_piecewise(f, -1.0, 1.0, &[-0.5, 0.5], 16, 1e-12).unwrap();
        assert_abs_diff_eq!(got, 0.5, epsilon = 1e-13);
    }
}

//! Eigenvalues of real symmetric tridiagonal matrices.
//!
//! Implicit-shift QL with Wilkinson shifts, eigenvalues only, O(k) memory and
//! O(k^2) worst-case time. A sweep that fails to converge within the
//! iteration cap falls back to Sturm-sequence bisection on the original
//! matrix, which is unconditionally convergent.

use crate::error::{Error, Result};
use crate::randmat::TridiagonalMatrix;

const MAX_QL_SWEEPS: usize = 50;
const MAX_BISECT_STEPS: usize = 120;

/// All eigenvalues of `t`, sorted ascending.
pub fn tridiag_eigenvalues(t: &TridiagonalMatrix) -> Result<Vec<f64>> {
    match ql_eigenvalues(&t.diag, &t.offdiag) {
        Ok(mut eigs) => {
            eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            Ok(eigs)
        }
        Err(_) => bisection_eigenvalues(&t.diag, &t.offdiag),
    }
}

/// Implicit QL with Wilkinson shifts (eigenvalues only).
fn ql_eigenvalues(diag: &[f64], offdiag: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut d = diag.to_vec();
    if n == 1 {
        return Ok(d);
    }
    let mut e = offdiag.to_vec();
    e.push(0.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            // Deflation: find the first negligible off-diagonal at or after l.
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_SWEEPS {
                return Err(Error::EigenIterationLimit(MAX_QL_SWEEPS));
            }
            // Wilkinson shift from the leading 2x2 of the active block.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Recover from underflow by deflating here and retrying.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                f = (d[i] - g) * s + 2.0 * c * b;
                p = s * f;
                d[i + 1] = g + p;
                g = c * f - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(d)
}

/// Number of eigenvalues strictly below `x`, by the Sturm pivot recurrence.
fn sturm_count(diag: &[f64], offdiag: &[f64], x: f64) -> usize {
    let n = diag.len();
    let mut count = 0;
    let mut q = 1.0_f64;
    for i in 0..n {
        let b2 = if i == 0 {
            0.0
        } else {
            offdiag[i - 1] * offdiag[i - 1]
        };
        q = diag[i] - x - b2 / q;
        if q == 0.0 {
            q = -1e-300;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Bisection on the Gershgorin interval, one eigenvalue index at a time.
pub(crate) fn bisection_eigenvalues(diag: &[f64], offdiag: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let radius = |i: usize| -> f64 {
        let left = if i == 0 { 0.0 } else { offdiag[i - 1].abs() };
        let right = if i + 1 == n { 0.0 } else { offdiag[i].abs() };
        left + right
    };
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        lo = lo.min(diag[i] - radius(i));
        hi = hi.max(diag[i] + radius(i));
    }
    let span = (hi - lo).max(1e-300);
    let (lo, hi) = (lo - 1e-12 * span - 1e-300, hi + 1e-12 * span + 1e-300);
    let mut eigs = Vec::with_capacity(n);
    for k in 0..n {
        let mut a = lo;
        let mut b = hi;
        for _ in 0..MAX_BISECT_STEPS {
            let mid = 0.5 * (a + b);
            if sturm_count(diag, offdiag, mid) <= k {
                a = mid;
            } else {
                b = mid;
            }
            if b - a <= f64::EPSILON * (a.abs() + b.abs()) + 1e-300 {
                break;
            }
        }
        eigs.push(0.5 * (a + b));
    }
    Ok(eigs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{jacobi_symmetric_eigenvalues, Mat};
    use crate::rng::RngState;
    use approx::assert_abs_diff_eq;
    use rand::Rng;

    fn dense_from_tridiag(t: &TridiagonalMatrix) -> Mat<f64> {
        let n = t.dim();
        let mut m = Mat::<f64>::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = t.diag[i];
        }
        for i in 0..n - 1 {
            m[(i, i + 1)] = t.offdiag[i];
            m[(i + 1, i)] = t.offdiag[i];
        }
        m
    }

    fn random_tridiag<R: Rng>(rng: &mut R, max_dim: usize) -> TridiagonalMatrix {
        let n = rng.random_range(1..=max_dim);
        let diag: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        let offdiag: Vec<f64> = (0..n.saturating_sub(1))
            .map(|_| rng.random_range(-5.0..5.0))
            .collect();
        TridiagonalMatrix::new(diag, offdiag)
    }

    #[test]
    fn one_by_one() {
        let t = TridiagonalMatrix::new(vec![3.25], vec![]);
        assert_eq!(tridiag_eigenvalues(&t).unwrap(), vec![3.25]);
    }

    #[test]
    fn two_by_two_zero_trace() {
        let t = TridiagonalMatrix::new(vec![0.0, 0.0], vec![1.0]);
        let eigs = tridiag_eigenvalues(&t).unwrap();
        assert_abs_diff_eq!(eigs[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(eigs[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn laplacian_stencil_three() {
        let t = TridiagonalMatrix::new(vec![2.0, 2.0, 2.0], vec![-1.0, -1.0]);
        let eigs = tridiag_eigenvalues(&t).unwrap();
        let r = 2.0_f64.sqrt();
        assert_abs_diff_eq!(eigs[0], 2.0 - r, epsilon = 1e-13);
        assert_abs_diff_eq!(eigs[1], 2.0, epsilon = 1e-13);
        assert_abs_diff_eq!(eigs[2], 2.0 + r, epsilon = 1e-13);
    }

    #[test]
    fn matches_dense_jacobi_oracle() {
        let mut rng = RngState::new(42).rng();
        for _ in 0..60 {
            let t = random_tridiag(&mut rng, 32);
            let got = tridiag_eigenvalues(&t).unwrap();
            let expect = jacobi_symmetric_eigenvalues(dense_from_tridiag(&t));
            for (g, e) in got.iter().zip(&expect) {
                assert_abs_diff_eq!(g, e, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn bisection_agrees_with_ql() {
        let mut rng = RngState::new(43).rng();
        for _ in 0..40 {
            let t = random_tridiag(&mut rng, 24);
            let ql = tridiag_eigenvalues(&t).unwrap();
            let bi = bisection_eigenvalues(&t.diag, &t.offdiag).unwrap();
            for (a, b) in ql.iter().zip(&bi) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn trace_and_frobenius_identities() {
        let mut rng = RngState::new(44).rng();
        for _ in 0..50 {
            let t = random_tridiag(&mut rng, 48);
            let eigs = tridiag_eigenvalues(&t).unwrap();
            let trace: f64 = t.diag.iter().sum();
            let lambda_sum: f64 = eigs.iter().sum();
            let norm: f64 = t.diag.iter().map(|x| x * x).sum::<f64>()
                + 2.0 * t.offdiag.iter().map(|x| x * x).sum::<f64>();
            let lambda_sq: f64 = eigs.iter().map(|x| x * x).sum();
            let k = t.dim() as f64;
            let scale = norm.sqrt().max(1.0);
            assert_abs_diff_eq!(trace, lambda_sum, epsilon = 1e-10 * k * scale);
            assert_abs_diff_eq!(norm, lambda_sq, epsilon = 1e-10 * k * norm.max(1.0));
        }
    }

    #[test]
    fn leading_submatrix_interlaces() {
        let mut rng = RngState::new(45).rng();
        for _ in 0..25 {
            let mut t = random_tridiag(&mut rng, 20);
            if t.dim() < 2 {
                continue;
            }
            let full = tridiag_eigenvalues(&t).unwrap();
            t.diag.pop();
            t.offdiag.pop();
            let sub = tridiag_eigenvalues(&t).unwrap();
            for (i, mu) in sub.iter().enumerate() {
                assert!(full[i] <= mu + 1e-9, "lower interlace at {i}");
                assert!(*mu <= full[i + 1] + 1e-9, "upper interlace at {i}");
            }
        }
    }

    #[test]
    fn degenerate_clustered_spectrum() {
        // All equal diagonal, tiny couplings: eigenvalues near 7.
        let t = TridiagonalMatrix::new(vec![7.0; 12], vec![1e-14; 11]);
        let eigs = tridiag_eigenvalues(&t).unwrap();
        for e in eigs {
            assert_abs_diff_eq!(e, 7.0, epsilon = 1e-12);
        }
    }
}

//! Dense eigenvalue routines.
//!
//! `complex_eigenvalues` reduces a general complex matrix to Hessenberg form
//! with Householder similarities, then runs explicit single-shift QR with
//! Wilkinson shifts and Givens rotations. It is used on unitary matrices
//! (normal, well-conditioned eigenproblems) where convergence is rapid.
//!
//! `jacobi_symmetric_eigenvalues` is the classic cyclic Jacobi rotation
//! method on dense real symmetric matrices. It shares no code with the
//! tridiagonal QL solver and serves as the independent oracle in tests.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::Mat;

/// Givens rotation (c real, s complex) with G [a; b] = [r; 0] for
/// G = [[c, s], [-conj(s), c]].
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if n == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    let aa = a.norm();
    if aa == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    (aa / n, (a / aa) * b.conj() / n)
}

/// Householder similarity reduction to upper Hessenberg form, in place.
fn hessenberg(a: &mut Mat<Complex64>) {
    let n = a.rows();
    for j in 0..n.saturating_sub(2) {
        let col_norm = (j + 1..n).map(|i| a[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        if col_norm == 0.0 {
            continue;
        }
        let x0 = a[(j + 1, j)];
        let sign = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -sign * col_norm;
        let mut v: Vec<Complex64> = (j + 1..n).map(|i| a[(i, j)]).collect();
        v[0] -= alpha;
        let vn: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vn == 0.0 {
            continue;
        }
        // Left: rows j+1.., all columns.
        for c in j..n {
            let mut w = Complex64::new(0.0, 0.0);
            for (k, &vk) in v.iter().enumerate() {
                w += vk.conj() * a[(j + 1 + k, c)];
            }
            let s = w * (2.0 / vn);
            for (k, &vk) in v.iter().enumerate() {
                let cur = a[(j + 1 + k, c)];
                a[(j + 1 + k, c)] = cur - vk * s;
            }
        }
        // Right: all rows, columns j+1..
        for r in 0..n {
            let mut w = Complex64::new(0.0, 0.0);
            for (k, &vk) in v.iter().enumerate() {
                w += a[(r, j + 1 + k)] * vk;
            }
            let s = w * (2.0 / vn);
            for (k, &vk) in v.iter().enumerate() {
                let cur = a[(r, j + 1 + k)];
                a[(r, j + 1 + k)] = cur - s * vk.conj();
            }
        }
        a[(j + 1, j)] = alpha;
        for i in j + 2..n {
            a[(i, j)] = Complex64::new(0.0, 0.0);
        }
    }
}

/// Eigenvalues of the 2x2 block [[a, b], [c, d]].
fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let mean = (a + d) * 0.5;
    let disc = ((a - d) * (a - d) * 0.25 + b * c).sqrt();
    (mean + disc, mean - disc)
}

/// All eigenvalues of a dense complex matrix, in unspecified order.
pub fn complex_eigenvalues(mut a: Mat<Complex64>) -> Result<Vec<Complex64>> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "matrix must be square");
    if n == 0 {
        return Ok(Vec::new());
    }
    hessenberg(&mut a);
    let mut eigs = Vec::with_capacity(n);
    let mut m = n - 1;
    let mut iter_in_block = 0usize;
    let budget = 60 * n.max(4);
    let mut total_iters = 0usize;
    loop {
        // Deflate converged trailing eigenvalues.
        while m > 0 {
            let sub = a[(m, m - 1)].norm();
            if sub <= f64::EPSILON * (a[(m - 1, m - 1)].norm() + a[(m, m)].norm()) {
                eigs.push(a[(m, m)]);
                m -= 1;
                iter_in_block = 0;
            } else {
                break;
            }
        }
        if m == 0 {
            eigs.push(a[(0, 0)]);
            break;
        }
        // Active block [l..=m]: split at the first negligible subdiagonal.
        let mut l = m;
        while l > 0 {
            let sub = a[(l, l - 1)].norm();
            if sub <= f64::EPSILON * (a[(l - 1, l - 1)].norm() + a[(l, l)].norm()) {
                a[(l, l - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if m - l == 1 {
            let (e1, e2) = eig2(a[(l, l)], a[(l, m)], a[(m, l)], a[(m, m)]);
            eigs.push(e1);
            eigs.push(e2);
            if l == 0 {
                break;
            }
            m = l - 1;
            iter_in_block = 0;
            continue;
        }
        total_iters += 1;
        iter_in_block += 1;
        if total_iters > budget {
            return Err(Error::EigenIterationLimit(budget));
        }
        // Wilkinson shift from the trailing 2x2; exceptional shift when stuck.
        let sigma = if iter_in_block % 12 == 0 {
            a[(m, m)] + Complex64::new(0.9, 0.4) * a[(m, m - 1)].norm()
        } else {
            let (e1, e2) = eig2(a[(m - 1, m - 1)], a[(m - 1, m)], a[(m, m - 1)], a[(m, m)]);
            if (e1 - a[(m, m)]).norm() <= (e2 - a[(m, m)]).norm() {
                e1
            } else {
                e2
            }
        };
        // Explicit shifted QR step on the block: H - sI = QR, H <- RQ + sI.
        for i in l..=m {
            let cur = a[(i, i)];
            a[(i, i)] = cur - sigma;
        }
        let mut rots = Vec::with_capacity(m - l);
        for i in l..m {
            let (c, s) = givens(a[(i, i)], a[(i + 1, i)]);
            for col in i..=m {
                let x = a[(i, col)];
                let y = a[(i + 1, col)];
                a[(i, col)] = x * c + s * y;
                a[(i + 1, col)] = -s.conj() * x + y * c;
            }
            rots.push((c, s));
        }
        for (idx, &(c, s)) in rots.iter().enumerate() {
            let i = l + idx;
            for row in l..=(i + 1).min(m) {
                let x = a[(row, i)];
                let y = a[(row, i + 1)];
                a[(row, i)] = x * c + y * s.conj();
                a[(row, i + 1)] = -x * s + y * c;
            }
        }
        for i in l..=m {
            let cur = a[(i, i)];
            a[(i, i)] = cur + sigma;
        }
    }
    Ok(eigs)
}

/// Eigenvalues of a dense real symmetric matrix by cyclic Jacobi rotations,
/// sorted ascending. Test oracle; O(n^3) per sweep.
pub fn jacobi_symmetric_eigenvalues(mut a: Mat<f64>) -> Vec<f64> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "matrix must be square");
    let scale = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| a[(i, j)].abs())
        .fold(0.0_f64, f64::max)
        .max(1e-300);
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)] * a[(p, q)];
            }
        }
        if off.sqrt() <= 1e-15 * scale * n as f64 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eigs
}

/// Eigenvalues of a dense complex Hermitian matrix via the real symmetric
/// embedding [[Re, -Im], [Im, Re]], whose spectrum is that of H with every
/// eigenvalue doubled. Test oracle.
pub fn hermitian_eigenvalues_via_embedding(h: &Mat<Complex64>) -> Vec<f64> {
    let n = h.rows();
    assert_eq!(n, h.cols());
    let mut m = Mat::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            m[(i, j)] = z.re;
            m[(i + n, j + n)] = z.re;
            m[(i, j + n)] = -z.im;
            m[(i + n, j)] = z.im;
        }
    }
    let doubled = jacobi_symmetric_eigenvalues(m);
    // Each eigenvalue appears exactly twice; take every other sorted value.
    doubled.into_iter().step_by(2).collect()
}

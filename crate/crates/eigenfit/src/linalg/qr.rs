//! Householder QR: least squares solves and Haar-distributed unitary factors.

use num_complex::{Complex64, ComplexFloat};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::Mat;

/// Complex sign: z/|z|, or 1 for z = 0.
fn csign<T: ComplexFloat<Real = f64>>(z: T) -> T {
    let a = z.abs();
    if a == 0.0 {
        T::one()
    } else {
        z * T::from(1.0 / a).unwrap()
    }
}

/// Applies the Householder reflector defined by `v` (living on rows
/// `offset..`) to the column vector `x` in place.
fn reflect<T: ComplexFloat<Real = f64>>(v: &[T], vnorm_sq: f64, offset: usize, x: &mut [T]) {
    let mut w = T::zero();
    for (k, &vk) in v.iter().enumerate() {
        w = w + vk.conj() * x[offset + k];
    }
    let scale = T::from(2.0 / vnorm_sq).unwrap();
    for (k, &vk) in v.iter().enumerate() {
        x[offset + k] = x[offset + k] - vk * scale * w;
    }
}

struct QrFactors<T> {
    /// Packed R (upper triangle of the reduced matrix).
    r: Mat<T>,
    /// Householder vectors, one per eliminated column.
    reflectors: Vec<Vec<T>>,
    norms: Vec<f64>,
}

impl<T: ComplexFloat<Real = f64>> QrFactors<T> {
    /// Applies the reflector `j` to column `c` of `a`, in place.
    fn reflect_col(v: &[T], vnorm_sq: f64, j: usize, a: &mut Mat<T>, c: usize) {
        let mut w = T::zero();
        for (k, &vk) in v.iter().enumerate() {
            w = w + vk.conj() * a[(j + k, c)];
        }
        let s = T::from(2.0 / vnorm_sq).unwrap() * w;
        for (k, &vk) in v.iter().enumerate() {
            let cur = a[(j + k, c)];
            a[(j + k, c)] = cur - vk * s;
        }
    }
}

/// In-place Householder reduction. Columns whose remaining norm falls below
/// `eps * scale` are rejected as rank deficient.
fn householder<T: ComplexFloat<Real = f64>>(mut a: Mat<T>) -> Result<QrFactors<T>> {
    let (m, n) = (a.rows(), a.cols());
    assert!(m >= n, "householder expects rows >= cols");
    let scale = (0..n)
        .map(|j| (0..m).map(|i| a[(i, j)].abs().powi(2)).sum::<f64>().sqrt())
        .fold(0.0_f64, f64::max);
    let tol = f64::EPSILON * scale * (m as f64).sqrt() * 8.0;
    let mut reflectors = Vec::with_capacity(n);
    let mut norms = Vec::with_capacity(n);
    for j in 0..n {
        let col_norm = (j..m)
            .map(|i| a[(i, j)].abs().powi(2))
            .sum::<f64>()
            .sqrt();
        if col_norm <= tol {
            return Err(Error::RankDeficient {
                column: j,
                pivot: col_norm,
            });
        }
        // v = x + sign(x0) * ||x|| * e0; R_jj becomes -sign(x0) * ||x||.
        let alpha = -csign(a[(j, j)]) * T::from(col_norm).unwrap();
        let mut v: Vec<T> = (j..m).map(|i| a[(i, j)]).collect();
        v[0] = v[0] - alpha;
        let vnorm_sq: f64 = v.iter().map(|z| z.abs().powi(2)).sum();
        if vnorm_sq > 0.0 {
            for c in j..n {
                QrFactors::reflect_col(&v, vnorm_sq, j, &mut a, c);
            }
        }
        a[(j, j)] = alpha;
        for i in j + 1..m {
            a[(i, j)] = T::zero();
        }
        reflectors.push(v);
        norms.push(vnorm_sq);
    }
    Ok(QrFactors {
        r: a,
        reflectors,
        norms,
    })
}

/// Solves min_x ||A x - b||_2 by Householder QR. Requires `A.rows() >= A.cols()`
/// and full column rank; rank deficiency is reported with the failing column.
pub fn lsq_solve<T: ComplexFloat<Real = f64>>(a: Mat<T>, b: &[T]) -> Result<Vec<T>> {
    let (m, n) = (a.rows(), a.cols());
    assert_eq!(b.len(), m);
    let f = householder(a)?;
    let mut qtb = b.to_vec();
    for (j, v) in f.reflectors.iter().enumerate() {
        if f.norms[j] > 0.0 {
            reflect(v, f.norms[j], j, &mut qtb);
        }
    }
    // Back-substitute R x = (Q^H b)[0..n].
    let mut x = vec![T::zero(); n];
    for j in (0..n).rev() {
        let mut acc = qtb[j];
        for k in j + 1..n {
            acc = acc - f.r[(j, k)] * x[k];
        }
        x[j] = acc / f.r[(j, j)];
    }
    Ok(x)
}

/// Draws a Haar-distributed k x k unitary matrix: QR of a complex Ginibre
/// matrix with Q's columns rescaled by the phases of R's diagonal.
pub fn haar_unitary<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Mat<Complex64> {
    assert!(k >= 1);
    let mut g = Mat::<Complex64>::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            g[(i, j)] = Complex64::new(re, im);
        }
    }
    let f = householder(g).expect("ginibre matrix is full rank almost surely");
    // Q = H_0 H_1 ... H_{k-1} I, column by column.
    let mut q = Mat::<Complex64>::identity(k);
    for c in 0..k {
        for j in (0..k).rev() {
            if f.norms[j] > 0.0 {
                QrFactors::reflect_col(&f.reflectors[j], f.norms[j], j, &mut q, c);
            }
        }
    }
    // Phase correction: without it the QR map does not give Haar measure.
    for j in 0..k {
        let phase = csign(f.r[(j, j)]);
        for i in 0..k {
            q[(i, j)] *= phase;
        }
    }
    q
}

//! Random matrix models whose eigenvalues follow the node distributions used
//! by the debiased fits.
//!
//! Real measures get O(k) tridiagonal models: the Gaussian case uses the
//! Dumitriu-Edelman entries (diagonal N(0,1), off-diagonal chi variates), the
//! uniform case uses the Killip-Nenciu construction mapped from [0,1] to
//! [-1,1]. The circle case draws a Haar unitary matrix by QR with phase
//! correction and takes its eigenvalues. A dense Hermitian sampler with the
//! same eigenvalue law is provided as an oracle for validation; it is not on
//! any production path.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::linalg::{self, Mat};

/// Real symmetric tridiagonal matrix: diagonal alpha_1..alpha_k and
/// off-diagonal beta_1..beta_{k-1}.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl TridiagonalMatrix {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Self {
        assert_eq!(diag.len(), offdiag.len() + 1, "inconsistent dimensions");
        assert!(
            diag.iter().chain(&offdiag).all(|x| x.is_finite()),
            "entries must be finite"
        );
        Self { diag, offdiag }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }
}

/// chi_m variate: sqrt of 2 * Gamma(m/2, scale 1).
pub fn sample_chi<R: Rng + ?Sized>(m: f64, rng: &mut R) -> f64 {
    let g = Gamma::new(0.5 * m, 1.0).expect("valid chi parameter");
    (2.0 * g.sample(rng)).sqrt()
}

/// Beta(a, b) variate composed from two Gamma draws.
pub fn sample_beta<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> f64 {
    let x = Gamma::new(a, 1.0).expect("valid beta parameter").sample(rng);
    let y = Gamma::new(b, 1.0).expect("valid beta parameter").sample(rng);
    x / (x + y)
}

/// Tridiagonal model whose eigenvalue law matches the Hermitian ensemble for
/// the standard Gaussian: diagonal N(0,1), off-diagonal chi_{2i}/sqrt(2),
/// i = 1..k-1. O(k) time.
pub fn sample_gue_tridiag<R: Rng + ?Sized>(k: usize, rng: &mut R) -> TridiagonalMatrix {
    assert!(k >= 1);
    let diag: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let offdiag: Vec<f64> = (1..k)
        .map(|i| sample_chi(2.0 * i as f64, rng) / std::f64::consts::SQRT_2)
        .collect();
    TridiagonalMatrix::new(diag, offdiag)
}

/// Tridiagonal model whose eigenvalue law matches the Hermitian ensemble for
/// the uniform measure on [-1,1]: the Killip-Nenciu chain on [0,1] followed
/// by the affine map Y -> 2Y - I. O(k) time.
pub fn sample_jacobi_tridiag<R: Rng + ?Sized>(k: usize, rng: &mut R) -> TridiagonalMatrix {
    assert!(k >= 1);
    // p_i, i = 1..2k-1, with p_{-1} = p_0 = 0.
    let mut p = vec![0.0; 2 * k];
    for i in 1..2 * k {
        let (a, b) = if i % 2 == 0 {
            ((2 * k - i) as f64 / 2.0, (2 * k - i + 2) as f64 / 2.0)
        } else {
            ((2 * k - i + 1) as f64 / 2.0, (2 * k - i + 1) as f64 / 2.0)
        };
        p[i] = sample_beta(a, b, rng);
    }
    let pm = |i: isize| -> f64 {
        if i <= 0 {
            0.0
        } else {
            p[i as usize]
        }
    };
    let mut diag = Vec::with_capacity(k);
    for i in 1..=k as isize {
        let y = pm(2 * i - 2) * (1.0 - pm(2 * i - 3)) + pm(2 * i - 1) * (1.0 - pm(2 * i - 2));
        diag.push(2.0 * y - 1.0);
    }
    let mut offdiag = Vec::with_capacity(k - 1);
    for i in 1..k as isize {
        let y = (pm(2 * i - 1) * (1.0 - pm(2 * i - 2)) * pm(2 * i) * (1.0 - pm(2 * i - 1))).sqrt();
        // The identity shift in 2Y - I touches only the diagonal.
        offdiag.push(2.0 * y);
    }
    TridiagonalMatrix::new(diag, offdiag)
}

/// Eigenvalues of a Haar-random k x k unitary matrix, unit modulus, in the
/// order produced by the eigensolver. O(k^3) time.
pub fn sample_haar_unitary_eigs<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<Complex64> {
    let q = linalg::haar_unitary(k, rng);
    linalg::complex_eigenvalues(q).expect("unitary eigenproblem converges")
}

/// Dense Hermitian matrix with the same eigenvalue law as the Gaussian
/// tridiagonal model: diagonal real N(0,1), off-diagonal entries with
/// independent N(0,1/2) real and imaginary parts. Validation oracle only;
/// O(k^2) entries and O(k^3) to diagonalize.
pub fn sample_gue_dense_oracle<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Mat<Complex64> {
    assert!(k >= 1);
    let mut x = Mat::<Complex64>::zeros(k, k);
    let half = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..k {
        x[(i, i)] = Complex64::new(rng.sample::<f64, _>(StandardNormal), 0.0);
        for j in i + 1..k {
            let re: f64 = rng.sample::<f64, _>(StandardNormal);
            let im: f64 = rng.sample::<f64, _>(StandardNormal);
            let z = Complex64::new(re * half, im * half);
            x[(i, j)] = z;
            x[(j, i)] = z.conj();
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngState;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gue_diag_variance_is_one() {
        let mut rng = RngState::new(101).rng();
        let n = 100_000;
        let mean_sq: f64 = (0..n)
            .map(|_| {
                let t = sample_gue_tridiag(1, &mut rng);
                t.diag[0] * t.diag[0]
            })
            .sum::<f64>()
            / n as f64;
        assert_abs_diff_eq!(mean_sq, 1.0, epsilon = 0.02);
    }

    #[test]
    fn gue_offdiag_second_moment_is_index() {
        // beta_3^2 has mean 3.
        let mut rng = RngState::new(102).rng();
        let n = 100_000;
        let mean_sq: f64 = (0..n)
            .map(|_| {
                let t = sample_gue_tridiag(4, &mut rng);
                t.offdiag[2] * t.offdiag[2]
            })
            .sum::<f64>()
            / n as f64;
        assert_abs_diff_eq!(mean_sq, 3.0, epsilon = 0.05);
    }

    #[test]
    fn chi_second_moment_matches_parameter() {
        let mut rng = RngState::new(103).rng();
        for m in [2.0, 5.0, 16.0] {
            let n = 100_000;
            let mean_sq: f64 = (0..n)
                .map(|_| {
                    let c = sample_chi(m, &mut rng);
                    c * c
                })
                .sum::<f64>()
                / n as f64;
            assert!((mean_sq - m).abs() < 0.05 * m, "chi_{m}: {mean_sq}");
        }
    }

    #[test]
    fn jacobi_entries_in_valid_ranges() {
        let mut rng = RngState::new(104).rng();
        for _ in 0..500 {
            let t = sample_jacobi_tridiag(16, &mut rng);
            assert!(t.diag.iter().all(|&a| (-1.0..=1.0).contains(&a)));
            assert!(t.offdiag.iter().all(|&b| b > 0.0 && b < 2.0));
        }
    }

    #[test]
    fn jacobi_k1_is_uniform() {
        let mut rng = RngState::new(105).rng();
        let n = 100_000;
        let mut draws: Vec<f64> = (0..n)
            .map(|_| sample_jacobi_tridiag(1, &mut rng).diag[0])
            .collect();
        draws.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let ks = crate::stats::ks_statistic_sorted(&draws, |t| (t + 1.0) / 2.0);
        assert!(ks < 0.01, "KS vs uniform on [-1,1]: {ks}");
    }

    #[test]
    fn dense_oracle_is_hermitian_with_unit_diag_variance() {
        let mut rng = RngState::new(106).rng();
        let x = sample_gue_dense_oracle(6, &mut rng);
        for i in 0..6 {
            for j in 0..6 {
                let d = x[(i, j)] - x[(j, i)].conj();
                assert_eq!(d, Complex64::new(0.0, 0.0));
            }
        }
        let n = 100_000;
        let mean_sq: f64 = (0..n)
            .map(|_| {
                let x = sample_gue_dense_oracle(1, &mut rng);
                x[(0, 0)].re * x[(0, 0)].re
            })
            .sum::<f64>()
            / n as f64;
        assert_abs_diff_eq!(mean_sq, 1.0, epsilon = 0.02);
    }

    #[test]
    fn haar_eigs_have_unit_modulus() {
        let mut rng = RngState::new(107).rng();
        let eigs = sample_haar_unitary_eigs(32, &mut rng);
        assert_eq!(eigs.len(), 32);
        for z in eigs {
            assert_abs_diff_eq!(z.norm(), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn samplers_are_deterministic_in_rng_state() {
        let s = RngState::with_stream(9, 4);
        let a = sample_gue_tridiag(12, &mut s.rng());
        let b = sample_gue_tridiag(12, &mut s.rng());
        assert_eq!(a, b);
        let c = sample_jacobi_tridiag(12, &mut s.rng());
        let d = sample_jacobi_tridiag(12, &mut s.rng());
        assert_eq!(c, d);
    }
}

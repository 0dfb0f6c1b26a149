//! Small statistical utilities: Kolmogorov-Smirnov statistics, nearest-rank
//! quantiles, and a chi-square goodness-of-fit helper for 2-D histograms
//! against an unnormalized density. The distribution tests in this crate's
//! test suites are built on these.

use crate::quad::GaussLegendre;

/// One-sample KS statistic sup_x |F_n(x) - F(x)| for ascending-sorted data.
pub fn ks_statistic_sorted<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> f64 {
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - f).abs());
    }
    d
}

/// Two-sample KS statistic for ascending-sorted samples.
pub fn ks_two_sample_sorted(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let mut i = 0;
    let mut j = 0;
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        // Advance both past the next distinct value so ties count once.
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Nearest-rank quantile of ascending-sorted data: the ceil(p*n)-th order
/// statistic. `p` in (0, 1].
pub fn nearest_rank_quantile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty());
    assert!(p > 0.0 && p <= 1.0);
    let rank = (p * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

/// Outcome of a chi-square goodness-of-fit comparison.
#[derive(Debug, Clone, Copy)]
pub struct Chi2Result {
    pub statistic: f64,
    /// Degrees of freedom: cells - 1 (fully specified null).
    pub dof: usize,
    /// Samples inside the conditioning box.
    pub kept: usize,
}

/// Chi-square test of 2-D samples against an unnormalized density on the box
/// [x0,x1] x [y0,y1], using `bins` x `bins` cells. Samples outside the box
/// are dropped and the cell probabilities renormalized to the box mass, which
/// is an exact conditioning. Cells with expected count below `min_expected`
/// are pooled into a single cell so the chi-square approximation holds.
pub fn chi_square_2d<D: Fn(f64, f64) -> f64>(
    samples: &[(f64, f64)],
    x_range: (f64, f64),
    y_range: (f64, f64),
    bins: usize,
    density: D,
    min_expected: f64,
) -> Chi2Result {
    let (x0, x1) = x_range;
    let (y0, y1) = y_range;
    let dx = (x1 - x0) / bins as f64;
    let dy = (y1 - y0) / bins as f64;

    // Cell masses by tensor Gauss-Legendre quadrature.
    let rule = GaussLegendre::new(8);
    let (nodes, weights) = rule.reference();
    let mut mass = vec![0.0; bins * bins];
    let mut total = 0.0;
    for ix in 0..bins {
        let ax = x0 + ix as f64 * dx;
        for iy in 0..bins {
            let ay = y0 + iy as f64 * dy;
            let mut acc = 0.0;
            for (&nx, &wx) in nodes.iter().zip(weights) {
                let x = ax + 0.5 * dx * (nx + 1.0);
                for (&ny, &wy) in nodes.iter().zip(weights) {
                    let y = ay + 0.5 * dy * (ny + 1.0);
                    acc += wx * wy * density(x, y);
                }
            }
            let m = acc * 0.25 * dx * dy;
            mass[ix * bins + iy] = m;
            total += m;
        }
    }

    let mut counts = vec![0usize; bins * bins];
    let mut kept = 0usize;
    for &(x, y) in samples {
        if x < x0 || x >= x1 || y < y0 || y >= y1 {
            continue;
        }
        let ix = ((x - x0) / dx) as usize;
        let iy = ((y - y0) / dy) as usize;
        counts[ix.min(bins - 1) * bins + iy.min(bins - 1)] += 1;
        kept += 1;
    }

    let mut statistic = 0.0;
    let mut cells = 0usize;
    let mut pooled_expected = 0.0;
    let mut pooled_observed = 0usize;
    for i in 0..bins * bins {
        let expected = mass[i] / total * kept as f64;
        if expected >= min_expected {
            let diff = counts[i] as f64 - expected;
            statistic += diff * diff / expected;
            cells += 1;
        } else {
            pooled_expected += expected;
            pooled_observed += counts[i];
        }
    }
    if pooled_expected > 0.0 {
        let diff = pooled_observed as f64 - pooled_expected;
        statistic += diff * diff / pooled_expected;
        cells += 1;
    }
    Chi2Result {
        statistic,
        dof: cells.saturating_sub(1),
        kept,
    }
}

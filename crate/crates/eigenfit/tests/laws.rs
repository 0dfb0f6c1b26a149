//! Distribution-law invariants beyond the acceptance criteria: sampler
//! marginals, repulsion, exchangeability, and error bookkeeping identities.

mod common;

use common::{ks_two_sample_critical, normal_cdf, phi};

use eigenfit::experiments::{components_of, run_error_curves, ErrorOracle, ExperimentConfig, Method};
use eigenfit::linalg::hermitian_eigenvalues_via_embedding;
use eigenfit::measure::Measure;
use eigenfit::orthopoly::{build_basis, integration_interval};
use eigenfit::quad::integrate_piecewise;
use eigenfit::randmat::{sample_gue_dense_oracle, sample_gue_tridiag};
use eigenfit::regression::debiased_fit;
use eigenfit::rng::RngState;
use eigenfit::sampling::{sample_dpp_nodes, sample_leverage_nodes};
use eigenfit::stats::{ks_statistic_sorted, ks_two_sample_sorted, nearest_rank_quantile};
use eigenfit::target::TargetSpec;
use eigenfit::trieig::tridiag_eigenvalues;

use rand::Rng;

#[test]
fn tridiag_vs_dense_ks_small_dimensions() {
    // 1e5 pooled eigenvalues per side at k in {2, 4}; k = 8 is acceptance 5.
    for k in [2usize, 4] {
        let matrices = 100_000 / k;
        let mut rng = RngState::new(201).rng();
        let mut tri = Vec::with_capacity(k * matrices);
        let mut dense = Vec::with_capacity(k * matrices);
        for _ in 0..matrices {
            tri.extend(tridiag_eigenvalues(&sample_gue_tridiag(k, &mut rng)).unwrap());
        }
        for _ in 0..matrices {
            dense.extend(hermitian_eigenvalues_via_embedding(&sample_gue_dense_oracle(
                k, &mut rng,
            )));
        }
        tri.sort_by(|a, b| a.partial_cmp(b).unwrap());
        dense.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let ks = ks_two_sample_sorted(&tri, &dense);
        let critical = ks_two_sample_critical(tri.len(), dense.len(), 1e-3);
        assert!(ks < critical.max(0.01), "k = {k}: KS {ks} vs {critical}");
    }
}

#[test]
fn gue_single_eigenvalue_marginal_closed_form_k2() {
    // A uniformly chosen eigenvalue of the k=2 model has pdf phi(t)(1+t^2)/2.
    let mut rng = RngState::new(202).rng();
    let mut draws: Vec<f64> = (0..100_000)
        .map(|_| {
            let eigs = tridiag_eigenvalues(&sample_gue_tridiag(2, &mut rng)).unwrap();
            eigs[rng.random_range(0..2)]
        })
        .collect();
    draws.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let ks = ks_statistic_sorted(&draws, |t| normal_cdf(t) - 0.5 * t * phi(t));
    assert!(ks < 0.01, "KS {ks}");
}

#[test]
fn dpp_and_leverage_marginals_agree() {
    // Fact: a uniformly chosen node of the repulsive design has the leverage
    // marginal. Two-sample KS at 1e5 per side for d in {1, 5, 15}.
    for measure in [Measure::GaussianStd, Measure::UniformSymmetric] {
        for d in [1usize, 5, 15] {
            let n = 100_000;
            let mut rng = RngState::new(203).rng();
            let mut a: Vec<f64> = (0..n / (d + 1) + 1)
                .flat_map(|_| {
                    sample_dpp_nodes(measure, d, &mut rng)
                        .unwrap()
                        .real_points()
                        .unwrap()
                        .to_vec()
                })
                .take(n)
                .collect();
            let lev = sample_leverage_nodes(measure, d, n, &mut rng).unwrap();
            let mut b = lev.real_points().unwrap().to_vec();
            a.sort_by(|x, y| x.partial_cmp(y).unwrap());
            b.sort_by(|x, y| x.partial_cmp(y).unwrap());
            let ks = ks_two_sample_sorted(&a, &b);
            let critical = ks_two_sample_critical(a.len(), b.len(), 1e-3);
            assert!(
                ks < critical.max(0.01),
                "{measure:?} d = {d}: KS {ks} vs {critical}"
            );
        }
    }
}

#[test]
fn leverage_distribution_normalizes() {
    // Monte-Carlo integral of q_lev(t) = mu(t) tau(t)/(d+1) over its support,
    // with uniform proposal points on the integration interval.
    let mut rng = RngState::new(204).rng();
    for (measure, d) in [
        (Measure::GaussianStd, 6usize),
        (Measure::UniformSymmetric, 9),
    ] {
        let basis = build_basis(measure, d).unwrap();
        let (a, b) = integration_interval(measure, d);
        let n = 400_000;
        let mean: f64 = (0..n)
            .map(|_| {
                let t = rng.random_range(a..b);
                measure.pdf(t) * basis.leverage(t) / (d + 1) as f64
            })
            .sum::<f64>()
            / n as f64;
        let integral = (b - a) * mean;
        assert!((integral - 1.0).abs() < 0.01, "{measure:?}: {integral}");
    }
}

#[test]
fn repulsive_design_spreads_more_than_iid() {
    // Minimum gap of the repulsive design stochastically dominates the iid
    // leverage design's; compare medians at d = 15 over 1e4 trials.
    let d = 15;
    let trials = 10_000;
    let min_gap = |pts: &[f64]| -> f64 {
        pts.windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    };
    let mut rng = RngState::new(205).rng();
    let mut dpp_gaps: Vec<f64> = (0..trials)
        .map(|_| {
            min_gap(
                sample_dpp_nodes(Measure::UniformSymmetric, d, &mut rng)
                    .unwrap()
                    .real_points()
                    .unwrap(),
            )
        })
        .collect();
    let mut iid_gaps: Vec<f64> = (0..trials)
        .map(|_| {
            min_gap(
                sample_leverage_nodes(Measure::UniformSymmetric, d, d + 1, &mut rng)
                    .unwrap()
                    .real_points()
                    .unwrap(),
            )
        })
        .collect();
    dpp_gaps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    iid_gaps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let dpp_median = nearest_rank_quantile(&dpp_gaps, 0.5);
    let iid_median = nearest_rank_quantile(&iid_gaps, 0.5);
    assert!(
        dpp_median > iid_median,
        "median min-gap: repulsive {dpp_median} vs iid {iid_median}"
    );
}

#[test]
fn sorted_design_law_is_stream_invariant() {
    // Exchangeability: relabeling the RNG stream must not move the sorted
    // node-set law. Compare per-trial means across two disjoint streams.
    let trials = 20_000;
    let stat = |stream: u64| -> Vec<f64> {
        let mut rng = RngState::with_stream(206, stream).rng();
        let mut v: Vec<f64> = (0..trials)
            .map(|_| {
                let nodes = sample_dpp_nodes(Measure::UniformSymmetric, 7, &mut rng).unwrap();
                let pts = nodes.real_points().unwrap();
                pts.iter().sum::<f64>() / pts.len() as f64
            })
            .collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    };
    let a = stat(1);
    let b = stat(2);
    let ks = ks_two_sample_sorted(&a, &b);
    let critical = ks_two_sample_critical(trials, trials, 1e-3);
    assert!(ks < critical, "KS {ks} vs {critical}");
}

#[test]
fn debiased_estimator_is_unbiased_at_small_degree() {
    // Reduced-scale unbiasedness sweep: every coefficient of the trial mean
    // within 4 standard errors for n in {d+1, 2d}.
    let d = 5;
    for (measure, target) in [
        (
            Measure::UniformSymmetric,
            TargetSpec::Indicator { lo: -0.5, hi: 0.5 },
        ),
        (
            Measure::GaussianStd,
            TargetSpec::Indicator { lo: -1.0, hi: 1.0 },
        ),
    ] {
        let oracle = ErrorOracle::build(measure, d, &target).unwrap();
        let basis = build_basis(measure, d).unwrap();
        let rt = target.real_target(&basis).unwrap();
        for n in [d + 1, 2 * d] {
            let trials = 20_000u64;
            let p = d + 1;
            let mut sum = vec![0.0; p];
            let mut sum_sq = vec![0.0; p];
            for trial in 0..trials {
                let mut rng = RngState::new(207).derive(&[n as u64, trial]).rng();
                let fit = debiased_fit(measure, d, n, |t| rt.eval(t), &mut rng).unwrap();
                for (i, &c) in fit.real_coeffs().unwrap().iter().enumerate() {
                    sum[i] += c;
                    sum_sq[i] += c * c;
                }
            }
            for i in 0..p {
                let mean = sum[i] / trials as f64;
                let var = (sum_sq[i] / trials as f64 - mean * mean).max(0.0);
                let se = (var / trials as f64).sqrt();
                let dev = (mean - oracle.components[i]).abs();
                assert!(
                    dev <= 4.0 * se + 1e-12,
                    "{measure:?} n = {n} coeff {i}: |bias| {dev} vs 4 SE {}",
                    4.0 * se
                );
            }
        }
    }
}

#[test]
fn per_trial_error_never_beats_the_optimum() {
    // E|p-f|^2 = residual + ||x - c||^2 >= residual, trial by trial.
    let target = TargetSpec::Indicator { lo: -0.5, hi: 0.5 };
    let oracle = ErrorOracle::build(Measure::UniformSymmetric, 8, &target).unwrap();
    let basis = build_basis(Measure::UniformSymmetric, 8).unwrap();
    let rt = target.real_target(&basis).unwrap();
    let mut rng = RngState::new(208).rng();
    for _ in 0..200 {
        let fit = debiased_fit(Measure::UniformSymmetric, 8, 12, |t| rt.eval(t), &mut rng).unwrap();
        let err = oracle.squared_error(&components_of(&fit));
        assert!(err >= oracle.residual - 1e-12);
    }
}

#[test]
fn parseval_error_matches_direct_quadrature() {
    let measure = Measure::UniformSymmetric;
    let d = 9;
    let target = TargetSpec::Indicator { lo: -0.5, hi: 0.5 };
    let oracle = ErrorOracle::build(measure, d, &target).unwrap();
    let basis = build_basis(measure, d).unwrap();
    let rt = target.real_target(&basis).unwrap();
    let mut rng = RngState::new(209).rng();
    for _ in 0..5 {
        let fit = debiased_fit(measure, d, 20, |t| rt.eval(t), &mut rng).unwrap();
        let via_parseval = oracle.squared_error(&components_of(&fit));
        let (a, b) = integration_interval(measure, d);
        let coeffs = fit.real_coeffs().unwrap().to_vec();
        let direct = integrate_piecewise(
            |t| {
                let diff = basis.eval_poly(&coeffs, t) - rt.eval(t);
                diff * diff * measure.pdf(t)
            },
            a,
            b,
            &[-0.5, 0.5],
            64,
            1e-12,
        )
        .unwrap();
        assert!(
            (via_parseval - direct).abs() <= 1e-8,
            "parseval {via_parseval} vs quadrature {direct}"
        );
    }
}

#[test]
fn error_curves_converge_and_methods_coincide_at_large_n() {
    let d = 10;
    let cfg = ExperimentConfig {
        measure: Measure::UniformSymmetric,
        degree: d,
        n_values: vec![10 * d, 20 * d],
        trials: 300,
        target: TargetSpec::Indicator { lo: -0.5, hi: 0.5 },
        seed: 210,
        methods: vec![Method::Debiased, Method::LeverageOnly],
    };
    let curves = run_error_curves(&cfg).unwrap();
    let median = |method: Method, n: usize| -> f64 {
        curves
            .points
            .iter()
            .find(|p| p.method == method && p.n == n)
            .unwrap()
            .median
    };
    // Large-n surrogate: median relative error small for both methods.
    assert!(median(Method::Debiased, 20 * d) <= 0.5);
    assert!(median(Method::LeverageOnly, 20 * d) <= 0.5);
    // The two methods coincide at n = 10d within 50% relative difference.
    let deb = median(Method::Debiased, 10 * d);
    let lev = median(Method::LeverageOnly, 10 * d);
    assert!(
        (deb - lev).abs() / lev <= 0.5,
        "debiased {deb} vs leverage {lev}"
    );
}

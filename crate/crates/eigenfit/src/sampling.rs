//! Node generation for the regression designs.
//!
//! Two samplers: the repulsive d+1-point design (eigenvalues of one ensemble
//! draw, jointly distributed as the projection DPP for the measure) and iid
//! draws from the leverage score distribution (one fresh ensemble draw per
//! node, keeping a uniformly chosen eigenvalue). Each node carries the weight
//! 1/tau(t) used by the weighted least squares step.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::orthopoly::build_basis;
use crate::randmat;
use crate::trieig;

/// How a node was generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Dpp,
    Leverage,
}

/// Evaluation points with their least-squares weights.
#[derive(Debug, Clone)]
pub struct NodeSet {
    pub measure: Measure,
    pub points: Points,
    /// 1/tau(t_i) for real measures; identically 1 on the circle.
    pub weights: Vec<f64>,
    pub provenance: Vec<Provenance>,
}

#[derive(Debug, Clone)]
pub enum Points {
    Real(Vec<f64>),
    Circle(Vec<Complex64>),
}

impl NodeSet {
    pub fn len(&self) -> usize {
        match &self.points {
            Points::Real(v) => v.len(),
            Points::Circle(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn real_points(&self) -> Option<&[f64]> {
        match &self.points {
            Points::Real(v) => Some(v),
            Points::Circle(_) => None,
        }
    }

    pub fn circle_points(&self) -> Option<&[Complex64]> {
        match &self.points {
            Points::Circle(v) => Some(v),
            Points::Real(_) => None,
        }
    }

    /// Concatenates two node sets over the same measure, keeping the joint
    /// ordering sorted (by value, or by argument on the circle).
    pub fn merged(self, other: NodeSet) -> NodeSet {
        assert_eq!(self.measure, other.measure);
        match (self.points, other.points) {
            (Points::Real(a), Points::Real(b)) => {
                let mut rows: Vec<(f64, f64, Provenance)> = a
                    .into_iter()
                    .zip(self.weights)
                    .zip(self.provenance)
                    .map(|((t, w), p)| (t, w, p))
                    .chain(
                        b.into_iter()
                            .zip(other.weights)
                            .zip(other.provenance)
                            .map(|((t, w), p)| (t, w, p)),
                    )
                    .collect();
                rows.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
                NodeSet {
                    measure: self.measure,
                    points: Points::Real(rows.iter().map(|r| r.0).collect()),
                    weights: rows.iter().map(|r| r.1).collect(),
                    provenance: rows.iter().map(|r| r.2).collect(),
                }
            }
            (Points::Circle(a), Points::Circle(b)) => {
                let mut rows: Vec<(Complex64, f64, Provenance)> = a
                    .into_iter()
                    .zip(self.weights)
                    .zip(self.provenance)
                    .map(|((z, w), p)| (z, w, p))
                    .chain(
                        b.into_iter()
                            .zip(other.weights)
                            .zip(other.provenance)
                            .map(|((z, w), p)| (z, w, p)),
                    )
                    .collect();
                rows.sort_by(|x, y| circle_arg(x.0).partial_cmp(&circle_arg(y.0)).unwrap());
                NodeSet {
                    measure: self.measure,
                    points: Points::Circle(rows.iter().map(|r| r.0).collect()),
                    weights: rows.iter().map(|r| r.1).collect(),
                    provenance: rows.iter().map(|r| r.2).collect(),
                }
            }
            _ => panic!("cannot merge real and circle node sets"),
        }
    }
}

/// Argument in [0, 2pi).
pub fn circle_arg(z: Complex64) -> f64 {
    z.arg().rem_euclid(2.0 * std::f64::consts::PI)
}

fn ensemble_eigenvalues<R: Rng + ?Sized>(measure: Measure, k: usize, rng: &mut R) -> Result<Vec<f64>> {
    let t = match measure {
        Measure::GaussianStd => randmat::sample_gue_tridiag(k, rng),
        Measure::UniformSymmetric => randmat::sample_jacobi_tridiag(k, rng),
        Measure::CircleUniform => return Err(Error::UnsupportedMeasure(measure)),
    };
    trieig::tridiag_eigenvalues(&t)
}

/// Draws the d+1-node repulsive design: eigenvalues of one ensemble draw for
/// real measures, Haar unitary eigenvalues on the circle. Nodes are sorted
/// ascending (by argument on the circle).
pub fn sample_dpp_nodes<R: Rng + ?Sized>(measure: Measure, d: usize, rng: &mut R) -> Result<NodeSet> {
    let k = d + 1;
    match measure {
        Measure::CircleUniform => {
            let mut eigs = randmat::sample_haar_unitary_eigs(k, rng);
            eigs.sort_by(|a, b| circle_arg(*a).partial_cmp(&circle_arg(*b)).unwrap());
            Ok(NodeSet {
                measure,
                points: Points::Circle(eigs),
                weights: vec![1.0; k],
                provenance: vec![Provenance::Dpp; k],
            })
        }
        _ => {
            let basis = build_basis(measure, d)?;
            let eigs = ensemble_eigenvalues(measure, k, rng)?;
            let weights = eigs.iter().map(|&t| 1.0 / basis.leverage(t)).collect();
            Ok(NodeSet {
                measure,
                points: Points::Real(eigs),
                weights,
                provenance: vec![Provenance::Dpp; k],
            })
        }
    }
}

/// Draws `m` iid nodes from the leverage score distribution: each node is a
/// uniformly chosen eigenvalue of a fresh ensemble draw (Fact: that marginal
/// has pdf mu(t) tau(t)/(d+1)). On the circle the leverage function is
/// constant, so nodes are iid uniform. Sorted ascending.
pub fn sample_leverage_nodes<R: Rng + ?Sized>(
    measure: Measure,
    d: usize,
    m: usize,
    rng: &mut R,
) -> Result<NodeSet> {
    let k = d + 1;
    match measure {
        Measure::CircleUniform => {
            let mut points: Vec<Complex64> = (0..m)
                .map(|_| {
                    let theta = rng.random_range(0.0..2.0 * std::f64::consts::PI);
                    Complex64::from_polar(1.0, theta)
                })
                .collect();
            points.sort_by(|a, b| circle_arg(*a).partial_cmp(&circle_arg(*b)).unwrap());
            Ok(NodeSet {
                measure,
                points: Points::Circle(points),
                weights: vec![1.0; m],
                provenance: vec![Provenance::Leverage; m],
            })
        }
        _ => {
            let basis = build_basis(measure, d)?;
            let mut points = Vec::with_capacity(m);
            for _ in 0..m {
                let eigs = ensemble_eigenvalues(measure, k, rng)?;
                points.push(eigs[rng.random_range(0..k)]);
            }
            points.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let weights = points.iter().map(|&t| 1.0 / basis.leverage(t)).collect();
            Ok(NodeSet {
                measure,
                points: Points::Real(points),
                weights,
                provenance: vec![Provenance::Leverage; m],
            })
        }
    }
}

/// Unnormalized joint density of the repulsive design,
/// prod_{i<j} |t_i - t_j|^2 * prod_i mu(t_i), for histogram comparisons.
/// Limited to at most 3 nodes; this is a brute-force test oracle.
pub fn dpp_density_oracle(measure: Measure, nodes: &[f64]) -> Result<f64> {
    if nodes.len() > 3 {
        return Err(Error::OracleDimension(nodes.len()));
    }
    let mut density = 1.0;
    for (i, &a) in nodes.iter().enumerate() {
        for &b in nodes.iter().skip(i + 1) {
            density *= (a - b) * (a - b);
        }
    }
    for &t in nodes {
        density *= match measure {
            Measure::CircleUniform => 1.0 / (2.0 * std::f64::consts::PI),
            m => m.pdf(t),
        };
    }
    Ok(density)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngState;
    use approx::assert_abs_diff_eq;

    #[test]
    fn dpp_counts_weights_and_order() {
        let mut rng = RngState::new(21).rng();
        let nodes = sample_dpp_nodes(Measure::UniformSymmetric, 7, &mut rng).unwrap();
        assert_eq!(nodes.len(), 8);
        let pts = nodes.real_points().unwrap();
        assert!(pts.windows(2).all(|w| w[0] <= w[1]));
        assert!(nodes.weights.iter().all(|&w| w > 0.0 && w <= 1.0));
        let basis = build_basis(Measure::UniformSymmetric, 7).unwrap();
        for (t, w) in pts.iter().zip(&nodes.weights) {
            assert_abs_diff_eq!(*w, 1.0 / basis.leverage(*t), epsilon = 1e-14);
        }
    }

    #[test]
    fn dpp_uniform_degree_zero_stays_in_support() {
        let mut rng = RngState::new(22).rng();
        for _ in 0..200 {
            let nodes = sample_dpp_nodes(Measure::UniformSymmetric, 0, &mut rng).unwrap();
            let t = nodes.real_points().unwrap()[0];
            assert!((-1.0..=1.0).contains(&t));
        }
    }

    #[test]
    fn circle_dpp_has_unit_modulus_sorted_args() {
        let mut rng = RngState::new(23).rng();
        let nodes = sample_dpp_nodes(Measure::CircleUniform, 5, &mut rng).unwrap();
        let pts = nodes.circle_points().unwrap();
        assert_eq!(pts.len(), 6);
        for z in pts {
            assert_abs_diff_eq!(z.norm(), 1.0, epsilon = 1e-10);
        }
        let args: Vec<f64> = pts.iter().map(|&z| circle_arg(z)).collect();
        assert!(args.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn leverage_nodes_count_and_tags() {
        let mut rng = RngState::new(24).rng();
        let nodes = sample_leverage_nodes(Measure::GaussianStd, 3, 17, &mut rng).unwrap();
        assert_eq!(nodes.len(), 17);
        assert!(nodes.provenance.iter().all(|&p| p == Provenance::Leverage));
        let empty = sample_leverage_nodes(Measure::GaussianStd, 3, 0, &mut rng).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn merged_keeps_global_order_and_tags() {
        let mut rng = RngState::new(25).rng();
        let a = sample_dpp_nodes(Measure::UniformSymmetric, 4, &mut rng).unwrap();
        let b = sample_leverage_nodes(Measure::UniformSymmetric, 4, 6, &mut rng).unwrap();
        let merged = a.merged(b);
        assert_eq!(merged.len(), 11);
        let pts = merged.real_points().unwrap();
        assert!(pts.windows(2).all(|w| w[0] <= w[1]));
        let dpp_count = merged
            .provenance
            .iter()
            .filter(|&&p| p == Provenance::Dpp)
            .count();
        assert_eq!(dpp_count, 5);
    }

    #[test]
    fn density_oracle_examples() {
        // Coincident nodes kill the density.
        assert_eq!(
            dpp_density_oracle(Measure::UniformSymmetric, &[0.3, 0.3]).unwrap(),
            0.0
        );
        // |(-1)-1|^2 * (1/2)^2 = 1.
        assert_abs_diff_eq!(
            dpp_density_oracle(Measure::UniformSymmetric, &[-1.0, 1.0]).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        let phi = |t: f64| Measure::GaussianStd.pdf(t);
        assert_abs_diff_eq!(
            dpp_density_oracle(Measure::GaussianStd, &[0.0, 1.0]).unwrap(),
            phi(0.0) * phi(1.0),
            epsilon = 1e-15
        );
        assert!(matches!(
            dpp_density_oracle(Measure::GaussianStd, &[0.0, 1.0, 2.0, 3.0]),
            Err(Error::OracleDimension(4))
        ));
    }
}

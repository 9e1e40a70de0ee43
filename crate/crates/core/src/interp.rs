//! Unitary rational interpolation of `exp(i omega x)` at `2n + 1` distinct
//! real nodes via a real (rotated) Loewner matrix.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;
use crate::unitary::{UnitaryBarycentric, UnitaryEval};

/// Null-space ambiguity threshold relative to the largest singular value.
pub const RANK_TOL: f64 = 1e-14;

/// Residual threshold (relative to `max(1, sup error)`) above which a node is
/// reported as unattainable.
pub const ATTAINABILITY_TOL: f64 = 1e-8;

/// `m` Chebyshev nodes `cos((2j - 1) pi / (2m))` in ascending order, exactly
/// mirrored about the origin.
pub fn chebyshev_nodes(m: usize) -> Vec<f64> {
    let mut out = vec![0.0; m];
    for j in 0..m / 2 {
        let t = ((2 * j + 1) as f64 * PI / (2 * m) as f64).cos();
        out[m - 1 - j] = t;
        out[j] = -t;
    }
    out
}

/// `2n + 1` strictly increasing interpolation nodes in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    nodes: Vec<f64>,
}

impl NodeSet {
    pub fn new(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len().is_multiple_of(2) {
            return Err(Error::InvalidInput(format!("need an odd number of nodes, got {}", nodes.len())));
        }
        for &x in &nodes {
            if !x.is_finite() || !(-1.0..=1.0).contains(&x) {
                return Err(Error::InvalidInput(format!("node {x} outside [-1, 1]")));
            }
        }
        for w in nodes.windows(2) {
            if w[0] == w[1] {
                return Err(Error::CoincidentNodes(w[0]));
            }
            if w[0] > w[1] {
                return Err(Error::InvalidInput("nodes must be strictly increasing".into()));
            }
        }
        Ok(Self { nodes })
    }

    pub fn chebyshev(n: usize) -> Self {
        Self {
            nodes: chebyshev_nodes(2 * n + 1),
        }
    }

    pub fn degree(&self) -> usize {
        self.nodes.len() / 2
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.nodes
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.nodes
    }
}

/// Support nodes are the even positions of the ascending list, test nodes the
/// odd ones.
pub fn split_support_test(nodes: &NodeSet) -> (Vec<f64>, Vec<f64>) {
    let mut support = Vec::with_capacity(nodes.degree() + 1);
    let mut test = Vec::with_capacity(nodes.degree());
    for (k, &x) in nodes.as_slice().iter().enumerate() {
        if k % 2 == 0 {
            support.push(x);
        } else {
            test.push(x);
        }
    }
    (support, test)
}

/// `A_kj = sin(omega (t_k - s_j) / 2) / (t_k - s_j)`.
pub fn rotated_loewner_matrix(omega: f64, support: &[f64], test: &[f64]) -> Result<DMatrix<f64>> {
    let mut a = DMatrix::zeros(test.len(), support.len());
    for (k, &t) in test.iter().enumerate() {
        for (j, &s) in support.iter().enumerate() {
            let d = t - s;
            if d == 0.0 {
                return Err(Error::CoincidentNodes(t));
            }
            a[(k, j)] = (0.5 * omega * d).sin() / d;
        }
    }
    Ok(a)
}

#[derive(Debug, Clone)]
pub struct Interpolant {
    pub approximant: UnitaryBarycentric,
    pub nodes: Vec<f64>,
    /// `|r(ix_j) - exp(i omega x_j)|` for every node.
    pub residuals: Vec<f64>,
    /// Indices of nodes where only the linearized condition holds.
    pub unattainable: Vec<usize>,
    pub singular_values: Vec<f64>,
}

pub fn interpolate_unitary(omega: f64, nodes: &NodeSet) -> Result<Interpolant> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::InvalidInput(format!("omega must be positive, got {omega}")));
    }
    let (support, test) = split_support_test(nodes);
    let (weights, singular_values) = if test.is_empty() {
        (vec![1.0], Vec::new())
    } else {
        let a = rotated_loewner_matrix(omega, &support, &test)?;
        let nv = linalg::null_vector(&a)?;
        if nv.sigma_next() < RANK_TOL * nv.sigma_max() {
            return Err(Error::RankDeficient {
                sigma_min: nv.sigma_min(),
                sigma_next: nv.sigma_next(),
            });
        }
        (nv.vector.iter().copied().collect(), nv.singular_values)
    };
    let approximant = UnitaryBarycentric::new(omega, support, weights)?;
    let residuals: Vec<f64> = nodes
        .as_slice()
        .iter()
        .map(|&x| approximant.interpolation_residual(x))
        .collect();
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    let unattainable = if worst > ATTAINABILITY_TOL {
        let sup = coarse_sup_error(&approximant, omega, 4096);
        let tol = ATTAINABILITY_TOL * sup.max(1.0);
        residuals
            .iter()
            .enumerate()
            .filter(|(_, &r)| r > tol)
            .map(|(k, _)| k)
            .collect()
    } else {
        Vec::new()
    };
    Ok(Interpolant {
        approximant,
        nodes: nodes.as_slice().to_vec(),
        residuals,
        unattainable,
        singular_values,
    })
}

fn coarse_sup_error<R: UnitaryEval>(r: &R, omega: f64, m: usize) -> f64 {
    (0..m)
        .map(|k| {
            let x = -1.0 + 2.0 * k as f64 / (m - 1) as f64;
            (r.eval(x) - Complex64::cis(omega * x)).norm()
        })
        .fold(0.0, f64::max)
}

//! Lawson-type weighted least-squares fit with the support nodes fixed at
//! Chebyshev points.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::brasil::frequency_limit;
use crate::error::{Error, Result};
use crate::interp::chebyshev_nodes;
use crate::linalg;
use crate::unitary::{UnitaryBarycentric, UnitaryEval};

pub const WEIGHT_FLOOR: f64 = 1e-30;

#[derive(Debug, Clone, PartialEq)]
pub struct LawsonOptions {
    /// Number of test samples, distributed like Chebyshev extreme points.
    pub grid_size: usize,
    pub iterations: usize,
    /// Stop once the best grid error improves by less than this fraction
    /// over a window of iterations.
    pub stagnation_tol: f64,
}

impl Default for LawsonOptions {
    fn default() -> Self {
        Self {
            grid_size: 2000,
            iterations: 50,
            stagnation_tol: 1e-3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LawsonResult {
    pub approximant: UnitaryBarycentric,
    /// Maximum of `|r(ix) - exp(i omega x)|` over the test grid.
    pub grid_error: f64,
    pub iterations: usize,
    /// Lawson weights after the last step; they sum to one.
    pub weights: Vec<f64>,
}

/// Iterations over which the best error must improve by `stagnation_tol`.
const STAGNATION_WINDOW: usize = 5;

/// `cos(k pi / (m - 1))` for `k = 0..m`, ascending, with the ends exactly `-1`, `1`.
fn test_grid(m: usize, support: &[f64]) -> Vec<f64> {
    let mut grid: Vec<f64> = (0..m)
        .map(|k| -(k as f64 * PI / (m - 1) as f64).cos())
        .collect();
    grid[0] = -1.0;
    grid[m - 1] = 1.0;
    grid.retain(|t| support.iter().all(|s| (t - s).abs() > 1e-14));
    grid
}

/// `gamma_k <- max(gamma_k |e_k|, floor)`, then normalized to sum one.
pub fn lawson_update(weights: &mut [f64], errors: &[f64]) {
    for (g, e) in weights.iter_mut().zip(errors) {
        *g = (*g * e.abs()).max(WEIGHT_FLOOR);
    }
    let total: f64 = weights.iter().sum();
    for g in weights.iter_mut() {
        *g /= total;
    }
}

fn weighted_fit(omega: f64, support: &[f64], grid: &[f64], weights: &[f64]) -> Result<UnitaryBarycentric> {
    let mut a = DMatrix::zeros(grid.len(), support.len());
    for (k, (&t, &g)) in grid.iter().zip(weights).enumerate() {
        let scale = g.sqrt();
        for (j, &s) in support.iter().enumerate() {
            let d = t - s;
            a[(k, j)] = scale * (0.5 * omega * d).sin() / d;
        }
    }
    let nv = linalg::null_vector(&a)?;
    UnitaryBarycentric::new(omega, support.to_vec(), nv.vector.iter().copied().collect())
}

/// Weighted least-squares unitary approximation of degree `n` with support
/// nodes at the `n + 1` Chebyshev points. Returns the iterate with the
/// smallest error over the test grid.
pub fn aaa_lawson_cheb(n: usize, omega: f64, opts: &LawsonOptions) -> Result<LawsonResult> {
    let limit = frequency_limit(n);
    if !(omega > 0.0) || !omega.is_finite() || omega >= limit {
        return Err(Error::InfeasibleFrequency { n, omega, limit });
    }
    if opts.grid_size <= 2 * n + 2 {
        return Err(Error::InvalidInput(format!(
            "grid size {} must exceed {}",
            opts.grid_size,
            2 * n + 2
        )));
    }
    if opts.iterations == 0 || !(opts.stagnation_tol >= 0.0) {
        return Err(Error::InvalidInput("need at least one iteration and a non-negative tolerance".into()));
    }
    let support = chebyshev_nodes(n + 1);
    let grid = test_grid(opts.grid_size, &support);
    let mut weights = vec![1.0 / grid.len() as f64; grid.len()];
    let mut best: Option<(UnitaryBarycentric, f64)> = None;
    let mut history: Vec<f64> = Vec::new();
    let mut iterations = 0;
    while iterations < opts.iterations {
        iterations += 1;
        let r = if n == 0 {
            UnitaryBarycentric::constant_one(omega)
        } else {
            weighted_fit(omega, &support, &grid, &weights)?
        };
        let errors: Vec<f64> = grid
            .iter()
            .map(|&t| (r.eval(t) - Complex64::cis(omega * t)).norm())
            .collect();
        let sup = errors.iter().copied().fold(0.0, f64::max);
        if best.as_ref().is_none_or(|(_, e)| sup < *e) {
            best = Some((r, sup));
        }
        let best_err = best.as_ref().map_or(sup, |b| b.1);
        history.push(best_err);
        if sup == 0.0 || n == 0 {
            break;
        }
        if history.len() > STAGNATION_WINDOW {
            let old = history[history.len() - 1 - STAGNATION_WINDOW];
            if old - best_err <= opts.stagnation_tol * old {
                break;
            }
        }
        lawson_update(&mut weights, &errors);
    }
    let (approximant, grid_error) = best.expect("at least one iteration runs");
    Ok(LawsonResult {
        approximant,
        grid_error,
        iterations,
        weights,
    })
}

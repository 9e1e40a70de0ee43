//! Unitary best approximation by successive interval-length adjustment of
//! the interpolation nodes until the phase error equioscillates.

use std::f64::consts::PI;

use crate::analysis::{self, relative_deviation, PRESCAN, SUP_SCAN};
use crate::error::{Error, Result};
use crate::interp::{chebyshev_nodes, interpolate_unitary, NodeSet};
use crate::pade::best_error_estimate;
use crate::search::bracketed_max;
use crate::unitary::{LiftedPhase, UnitaryBarycentric, UnitaryEval};

const SLOW_PROGRESS: f64 = 0.7;
const FAST_PROGRESS: f64 = 0.3;

/// Poles beyond this magnitude mark a near-degenerate approximant.
pub const NEAR_DEGENERATE_POLE: f64 = 1e6;
/// Below this estimated error a failed solve is reported as rounding-limited.
pub const ROUNDING_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub enum Init {
    /// Chebyshev nodes for `omega <= n pi`, the uniform limit otherwise.
    Auto,
    Chebyshev,
    /// `-1 + k / (n + 1)`, `k = 1..2n + 1`.
    UniformLimit,
    Warm(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Target relative spread of the extremal phase errors.
    pub eq_tolerance: f64,
    pub max_iterations: usize,
    /// Exponent of the interval-length update.
    pub rescale_exponent: f64,
    /// Initial step damping in `(0, 1]`; halved whenever a step fails.
    pub damping: f64,
    pub init: Init,
    pub extremum_search_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            eq_tolerance: 1e-3,
            max_iterations: 200,
            rescale_exponent: 1.0,
            damping: 1.0,
            init: Init::Auto,
            extremum_search_tol: 1e-12,
        }
    }
}

impl SolverOptions {
    fn validate(&self) -> Result<()> {
        if !(self.eq_tolerance > 0.0) {
            return Err(Error::InvalidInput("eq_tolerance must be positive".into()));
        }
        if !(self.rescale_exponent > 0.0) {
            return Err(Error::InvalidInput("rescale exponent must be positive".into()));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::InvalidInput("damping must lie in (0, 1]".into()));
        }
        if !(self.extremum_search_tol > 0.0) {
            return Err(Error::InvalidInput("extremum_search_tol must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct BestApproximation {
    pub approximant: UnitaryBarycentric,
    /// The `2n + 1` zeros of the phase error.
    pub interpolation_nodes: Vec<f64>,
    /// The `2n + 2` points where the phase error is extremal.
    pub equioscillation_points: Vec<f64>,
    /// Signed phase error at the equioscillation points.
    pub extrema_values: Vec<f64>,
    pub max_error: f64,
    pub estimate: f64,
    pub iterations: usize,
    pub converged: bool,
    pub deviation: f64,
    pub near_degenerate: bool,
}

impl BestApproximation {
    pub fn n(&self) -> usize {
        self.approximant.n()
    }

    pub fn omega(&self) -> f64 {
        self.approximant.omega()
    }
}

/// Upper end of the frequency window `(0, (n + 1) pi)`.
pub fn frequency_limit(n: usize) -> f64 {
    (n + 1) as f64 * PI
}

fn check_frequency(n: usize, omega: f64) -> Result<()> {
    let limit = frequency_limit(n);
    if !(omega > 0.0) || !omega.is_finite() || omega >= limit {
        return Err(Error::InfeasibleFrequency { n, omega, limit });
    }
    Ok(())
}

fn is_mirrored(nodes: &[f64]) -> bool {
    nodes.iter().zip(nodes.iter().rev()).all(|(a, b)| *a == -*b)
}

/// Replace nodes by `(x - reverse(x)) / 2`.
pub fn symmetrize(nodes: &mut [f64]) {
    let m = nodes.len();
    for k in 0..m / 2 {
        let v = 0.5 * (nodes[m - 1 - k] - nodes[k]);
        nodes[k] = -v;
        nodes[m - 1 - k] = v;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
}

/// One signed extremum of the phase error per interval of the partition
/// `[-1, x_1], [x_1, x_2], ..., [x_{2n+1}, 1]`; the outer intervals include
/// their endpoints `-1` and `1` as candidates. For mirrored nodes only the
/// left half is searched and the right half is obtained by odd reflection.
/// Values are taken on the continuous branch of the phase error.
pub fn local_extrema(r: &UnitaryBarycentric, nodes: &[f64], tol: f64) -> Result<Vec<(f64, f64)>> {
    let omega = r.omega();
    let r = LiftedPhase::new(r);
    let mut edges = Vec::with_capacity(nodes.len() + 2);
    edges.push(-1.0);
    edges.extend_from_slice(nodes);
    edges.push(1.0);
    let intervals = edges.len() - 1;
    // The phase error vanishes modulo 2 pi at the nodes; on each interval the
    // branch is fixed by an adjacent node (the right one for the first
    // interval, the left one otherwise).
    let search = |k: usize| {
        let anchor = if k == 0 { edges[1] } else { edges[k] };
        let shift = if intervals == 1 {
            0.0
        } else {
            2.0 * PI * (r.phase_error(anchor, omega) / (2.0 * PI)).round()
        };
        let phase = |x: f64| r.phase_error(x, omega) - shift;
        let (x, _) = bracketed_max(|x| phase(x).abs(), edges[k], edges[k + 1], PRESCAN, tol);
        (x, phase(x))
    };
    let extrema: Vec<(f64, f64)> = if is_mirrored(nodes) && intervals % 2 == 0 {
        let left: Vec<(f64, f64)> = (0..intervals / 2).map(search).collect();
        let mut all = left.clone();
        all.extend(left.iter().rev().map(|&(x, v)| (-x, -v)));
        all
    } else {
        (0..intervals).map(search).collect()
    };
    for k in 1..extrema.len() {
        let (a, b) = (extrema[k - 1].1, extrema[k].1);
        if a == 0.0 || b == 0.0 || a.signum() == b.signum() {
            return Err(Error::MissingSignChange(edges[k - 1], edges[k + 1]));
        }
    }
    Ok(extrema)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Rescaled {
    Nodes(Vec<f64>),
    /// Some extremum is exactly zero: the current approximant is exact.
    Exact,
}

/// Interval lengths `l_k` of the partition induced by `nodes` become
/// `l_k (m / e_k)^gamma` with `m` the geometric mean of the `e_k`, rescaled
/// to total length 2.
pub fn rescale_intervals(nodes: &[f64], magnitudes: &[f64], gamma: f64) -> Result<Rescaled> {
    if magnitudes.len() != nodes.len() + 1 {
        return Err(Error::InvalidInput(format!(
            "{} nodes need {} magnitudes, got {}",
            nodes.len(),
            nodes.len() + 1,
            magnitudes.len()
        )));
    }
    if magnitudes.iter().any(|e| !e.is_finite() || *e < 0.0) {
        return Err(Error::InvalidInput("magnitudes must be finite and non-negative".into()));
    }
    if magnitudes.contains(&0.0) {
        return Ok(Rescaled::Exact);
    }
    let log_mean = magnitudes.iter().map(|e| e.ln()).sum::<f64>() / magnitudes.len() as f64;
    let mut edges = Vec::with_capacity(nodes.len() + 2);
    edges.push(-1.0);
    edges.extend_from_slice(nodes);
    edges.push(1.0);
    let lengths: Vec<f64> = edges
        .windows(2)
        .zip(magnitudes)
        .map(|(w, e)| (w[1] - w[0]) * (gamma * (log_mean - e.ln())).exp())
        .collect();
    let total: f64 = lengths.iter().sum();
    let mut out = Vec::with_capacity(nodes.len());
    let mut acc = 0.0;
    for l in &lengths[..nodes.len()] {
        acc += l;
        out.push(-1.0 + 2.0 * acc / total);
    }
    Ok(Rescaled::Nodes(out))
}

/// Initial nodes per the init strategy.
pub fn initial_nodes(n: usize, omega: f64, init: &Init) -> Result<Vec<f64>> {
    let uniform = || (1..=2 * n + 1).map(|k| -1.0 + k as f64 / (n + 1) as f64).collect::<Vec<_>>();
    let nodes = match init {
        Init::Auto => {
            if omega <= n as f64 * PI {
                chebyshev_nodes(2 * n + 1)
            } else {
                uniform()
            }
        }
        Init::Chebyshev => chebyshev_nodes(2 * n + 1),
        Init::UniformLimit => uniform(),
        Init::Warm(nodes) => {
            if nodes.len() != 2 * n + 1 {
                return Err(Error::InvalidInput(format!(
                    "warm start needs {} nodes, got {}",
                    2 * n + 1,
                    nodes.len()
                )));
            }
            nodes.clone()
        }
    };
    NodeSet::new(nodes.clone())?;
    Ok(nodes)
}

struct Iterate {
    nodes: Vec<f64>,
    approximant: UnitaryBarycentric,
    extrema: Vec<(f64, f64)>,
    deviation: f64,
}

fn evaluate(omega: f64, nodes: Vec<f64>, tol: f64) -> Result<Iterate> {
    let set = NodeSet::new(nodes)?;
    let interp = interpolate_unitary(omega, &set)?;
    if let Some(&k) = interp.unattainable.first() {
        return Err(Error::InvalidInput(format!("unattainable node {}", interp.nodes[k])));
    }
    let nodes = set.into_vec();
    let extrema = local_extrema(&interp.approximant, &nodes, tol)?;
    let values: Vec<f64> = extrema.iter().map(|e| e.1).collect();
    Ok(Iterate {
        deviation: relative_deviation(&values),
        nodes,
        approximant: interp.approximant,
        extrema,
    })
}

fn finish(it: Iterate, iterations: usize, converged: bool) -> Result<BestApproximation> {
    let omega = it.approximant.omega();
    let n = it.approximant.n();
    let (max_error, _) = analysis::sup_error(&it.approximant, omega, SUP_SCAN)?;
    let near_degenerate = it
        .approximant
        .poles()
        .map(|p| p.iter().any(|s| s.norm() > NEAR_DEGENERATE_POLE))
        .unwrap_or(true);
    Ok(BestApproximation {
        interpolation_nodes: it.nodes,
        equioscillation_points: it.extrema.iter().map(|e| e.0).collect(),
        extrema_values: it.extrema.iter().map(|e| e.1).collect(),
        max_error,
        estimate: best_error_estimate(n, omega),
        iterations,
        converged,
        deviation: it.deviation,
        near_degenerate,
        approximant: it.approximant,
    })
}

fn next_nodes(it: &Iterate, step: f64) -> Result<Option<Vec<f64>>> {
    let mags: Vec<f64> = it.extrema.iter().map(|e| e.1.abs()).collect();
    match rescale_intervals(&it.nodes, &mags, step)? {
        Rescaled::Exact => Ok(None),
        Rescaled::Nodes(mut nodes) => {
            symmetrize(&mut nodes);
            Ok(Some(nodes))
        }
    }
}

/// First iterate from the requested init. A failing start falls back to the
/// other standard node family, so a warm start or a Chebyshev start close to
/// `omega = n pi` still yields a usable iterate.
fn initial_iterate(n: usize, omega: f64, init: &Init, tol: f64) -> Result<Iterate> {
    // A malformed request is an input error, not a reason to fall back.
    initial_nodes(n, omega, init)?;
    let mut inits = vec![init.clone()];
    for alt in [Init::Auto, Init::Chebyshev, Init::UniformLimit] {
        if !inits.contains(&alt) {
            inits.push(alt);
        }
    }
    let mut first_err = None;
    for init in &inits {
        let attempt = initial_nodes(n, omega, init).and_then(|mut nodes| {
            symmetrize(&mut nodes);
            evaluate(omega, nodes, tol)
        });
        match attempt {
            Ok(it) => return Ok(it),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    Err(first_err.expect("at least one init is tried"))
}

/// Unitary best approximation of degree `n` to `exp(i omega x)` on `[-1, 1]`.
///
/// When the estimated error is below [`ROUNDING_FLOOR`] a failure is wrapped
/// in [`Error::RoundingLimited`].
pub fn best_approx(n: usize, omega: f64, opts: &SolverOptions) -> Result<BestApproximation> {
    check_frequency(n, omega)?;
    opts.validate()?;
    let estimate = best_error_estimate(n, omega);
    solve(n, omega, opts).map_err(|e| {
        if estimate < ROUNDING_FLOOR {
            Error::RoundingLimited { n, omega, estimate, source: Box::new(e) }
        } else {
            e
        }
    })
}

fn solve(n: usize, omega: f64, opts: &SolverOptions) -> Result<BestApproximation> {
    let tol = opts.extremum_search_tol;
    let mut current = initial_iterate(n, omega, &opts.init, tol)?;
    let mut damping = opts.damping;
    let mut previous_step: Option<Vec<f64>> = None;
    let mut iterations = 1;
    loop {
        if current.deviation <= opts.eq_tolerance {
            return finish(current, iterations, true);
        }
        if iterations >= opts.max_iterations {
            let deviation = current.deviation;
            let best = finish(current, iterations, false)?;
            return Err(Error::NonConvergence {
                iterations,
                deviation,
                reason: "iteration limit reached".into(),
                best: Box::new(best),
            });
        }
        iterations += 1;
        let step = opts.rescale_exponent * damping;
        let Some(candidate) = next_nodes(&current, step)? else {
            return finish(current, iterations, true);
        };
        let ev = evaluate(omega, candidate, tol);
        match ev {
            Ok(next) if next.deviation < current.deviation => {
                let step_dir: Vec<f64> =
                    next.nodes.iter().zip(&current.nodes).map(|(a, b)| a - b).collect();
                // A reversal of the node update means the iteration overshoots
                // and oscillates around the fixed point.
                let reversed = previous_step
                    .as_ref()
                    .is_some_and(|p: &Vec<f64>| p.iter().zip(&step_dir).map(|(a, b)| a * b).sum::<f64>() < 0.0);
                if reversed && next.deviation > SLOW_PROGRESS * current.deviation {
                    damping *= 0.5;
                } else if !reversed || next.deviation < FAST_PROGRESS * current.deviation {
                    damping = (1.5 * damping).min(opts.damping);
                }
                previous_step = Some(step_dir);
                current = next;
            }
            _ => {
                damping *= 0.5;
                if damping < 1e-8 {
                    let deviation = current.deviation;
                    let best = finish(current, iterations, false)?;
                    return Err(Error::NonConvergence {
                        iterations,
                        deviation,
                        reason: "step damping exhausted".into(),
                        best: Box::new(best),
                    });
                }
            }
        }
    }
}

/// Solves in ascending order of `omega`, warm-starting each solve from the
/// nodes of the previous successful one.
pub fn sweep(n: usize, omegas: &[f64], opts: &SolverOptions) -> Vec<Result<BestApproximation>> {
    let mut out = Vec::with_capacity(omegas.len());
    let mut warm: Option<Vec<f64>> = None;
    for &omega in omegas {
        let mut o = opts.clone();
        if let Some(nodes) = &warm {
            o.init = Init::Warm(nodes.clone());
        }
        let res = best_approx(n, omega, &o);
        if let Ok(b) = &res {
            warm = Some(b.interpolation_nodes.clone());
        }
        out.push(res);
    }
    out
}

//! Error measurement, phase-error zeros and extrema, equioscillation reports
//! and asymptotic diagnostics.

use num_complex::Complex64;

use crate::brasil::BestApproximation;
use crate::error::{Error, Result};
use crate::interp::chebyshev_nodes;
use crate::pade::pade_poles;
use crate::search::{bracketed_max, golden_max};
use crate::unitary::UnitaryEval;

/// Default resolution of the coarse scan behind [`sup_error`].
pub const SUP_SCAN: usize = 4096;
/// Default resolution of the sign-change scan behind [`phase_zeros`].
pub const ZERO_SCAN: usize = 8192;
/// Abscissa tolerance of the golden-section refinements.
pub const EXTREMUM_TOL: f64 = 1e-12;
/// Pre-scan points per interval when locating extrema.
pub const PRESCAN: usize = 32;

/// `|r(ix) - exp(i omega x)|` expressed through the phase error.
pub fn abs_error_from_phase(delta: f64) -> f64 {
    2.0 * (0.5 * delta).sin().abs()
}

fn uniform(m: usize) -> impl Iterator<Item = f64> {
    (0..m).map(move |k| {
        if k + 1 == m {
            1.0
        } else {
            -1.0 + 2.0 * k as f64 / (m - 1) as f64
        }
    })
}

/// Maximum error over `[-1, 1]` and its location: a uniform scan with
/// `coarse` points, then golden-section refinement around every local
/// maximum of the scan.
pub fn sup_error<R: UnitaryEval + ?Sized>(r: &R, omega: f64, coarse: usize) -> Result<(f64, f64)> {
    if coarse < 64 {
        return Err(Error::InvalidInput(format!("coarse scan needs at least 64 points, got {coarse}")));
    }
    let err = |x: f64| abs_error_from_phase(r.phase_error(x, omega));
    let xs: Vec<f64> = uniform(coarse).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| err(x)).collect();
    let mut best = (xs[0], vals[0]);
    for (k, &v) in vals.iter().enumerate() {
        if v > best.1 {
            best = (xs[k], v);
        }
    }
    for k in 0..coarse {
        let left = if k == 0 { f64::NEG_INFINITY } else { vals[k - 1] };
        let right = if k + 1 == coarse { f64::NEG_INFINITY } else { vals[k + 1] };
        if vals[k] >= left && vals[k] >= right {
            let lo = xs[k.saturating_sub(1)];
            let hi = xs[(k + 1).min(coarse - 1)];
            let cand = golden_max(err, lo, hi, EXTREMUM_TOL);
            if cand.1 > best.1 {
                best = cand;
            }
        }
    }
    Ok((best.1.min(2.0), best.0))
}

/// Sign changes of the phase error found on a uniform scan and refined by
/// bisection. Jumps of the principal branch (`|delta| near pi` on both sides)
/// are not zeros and are skipped.
pub fn phase_zeros<R: UnitaryEval + ?Sized>(r: &R, omega: f64, scan: usize) -> Vec<f64> {
    let d = |x: f64| r.phase_error(x, omega);
    let xs: Vec<f64> = uniform(scan.max(3)).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| d(x)).collect();
    let mut zeros = Vec::new();
    for k in 0..xs.len() {
        if vals[k] == 0.0 {
            if k > 0 && k + 1 < xs.len() {
                zeros.push(xs[k]);
            }
            continue;
        }
        if k + 1 == xs.len() {
            break;
        }
        let (a, b) = (vals[k], vals[k + 1]);
        if b == 0.0 || a.signum() == b.signum() {
            continue;
        }
        if a.abs() + b.abs() > std::f64::consts::PI {
            continue;
        }
        let (mut lo, mut hi) = (xs[k], xs[k + 1]);
        let mut flo = a;
        for _ in 0..200 {
            if hi - lo <= 1e-13 {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let fm = d(mid);
            if fm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if fm.signum() == flo.signum() {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        zeros.push(0.5 * (lo + hi));
    }
    zeros
}

/// Signed phase-error extremum of largest magnitude on each interval of the
/// partition `[-1, b_1], [b_1, b_2], ..., [b_k, 1]`.
pub fn extrema_between<R: UnitaryEval + ?Sized>(r: &R, omega: f64, breakpoints: &[f64], tol: f64) -> Vec<(f64, f64)> {
    let mut edges = Vec::with_capacity(breakpoints.len() + 2);
    edges.push(-1.0);
    edges.extend_from_slice(breakpoints);
    edges.push(1.0);
    edges
        .windows(2)
        .map(|w| {
            let (x, _) = bracketed_max(|x| r.phase_error(x, omega).abs(), w[0], w[1], PRESCAN, tol);
            (x, r.phase_error(x, omega))
        })
        .collect()
}

/// `(max - min) / max` of the magnitudes; zero for an empty or all-zero set.
pub fn relative_deviation(values: &[f64]) -> f64 {
    let mags = values.iter().map(|v| v.abs());
    let max = mags.clone().fold(0.0, f64::max);
    let min = mags.fold(f64::INFINITY, f64::min);
    if max == 0.0 || values.is_empty() {
        0.0
    } else {
        (max - min) / max
    }
}

/// Strict sign alternation of a sequence of values.
pub fn alternates(values: &[f64]) -> bool {
    values.iter().all(|v| *v != 0.0) && values.windows(2).all(|w| w[0].signum() != w[1].signum())
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquioscillationReport {
    pub extrema: Vec<(f64, f64)>,
    pub zeros: Vec<f64>,
    pub deviation: f64,
    /// `2n + 2` extrema with strictly alternating signs.
    pub alternating: bool,
    pub first_sign_positive: bool,
    /// The number of zeros equals `2n + 1`.
    pub zero_count_ok: bool,
}

pub fn equioscillation_report<R: UnitaryEval + ?Sized>(r: &R, omega: f64) -> EquioscillationReport {
    let n = r.degree();
    let zeros = phase_zeros(r, omega, ZERO_SCAN);
    let extrema = extrema_between(r, omega, &zeros, EXTREMUM_TOL);
    let values: Vec<f64> = extrema.iter().map(|e| e.1).collect();
    let zero_count_ok = zeros.len() == 2 * n + 1;
    EquioscillationReport {
        deviation: relative_deviation(&values),
        alternating: zero_count_ok && extrema.len() == 2 * n + 2 && alternates(&values),
        first_sign_positive: values.first().is_some_and(|v| *v > 0.0),
        zero_count_ok,
        extrema,
        zeros,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRow {
    pub x: f64,
    pub re_err: f64,
    pub im_err: f64,
    pub abs_err: f64,
    pub phase_err: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorCurve {
    pub rows: Vec<ErrorRow>,
}

impl ErrorCurve {
    /// Local maxima of `|err|`; an end sample counts when it exceeds its
    /// single neighbour.
    pub fn local_maxima_count(&self) -> usize {
        let a: Vec<f64> = self.rows.iter().map(|r| r.abs_err).collect();
        let m = a.len();
        if m < 2 {
            return m;
        }
        (0..m)
            .filter(|&k| {
                let left_ok = k == 0 || a[k] > a[k - 1];
                let right_ok = k + 1 == m || a[k] >= a[k + 1];
                left_ok && right_ok && !(k + 1 == m && a[k] == a[k - 1])
            })
            .count()
    }
}

/// Error samples at `m` Chebyshev points of `[-1, 1]`, ascending.
pub fn error_curve<R: UnitaryEval + ?Sized>(r: &R, omega: f64, m: usize) -> Result<ErrorCurve> {
    if m < 2 {
        return Err(Error::InvalidInput("error curve needs at least 2 samples".into()));
    }
    let rows = chebyshev_nodes(m)
        .into_iter()
        .map(|x| {
            let delta = r.phase_error(x, omega);
            // exp(i omega x) (exp(i delta) - 1) = exp(i omega x) 2i sin(delta/2) exp(i delta/2)
            let err = Complex64::cis(omega * x + 0.5 * delta) * Complex64::new(0.0, 2.0 * (0.5 * delta).sin());
            ErrorRow {
                x,
                re_err: err.re,
                im_err: err.im,
                abs_err: abs_error_from_phase(delta),
                phase_err: delta,
            }
        })
        .collect();
    Ok(ErrorCurve { rows })
}

/// Largest distance between two sets after sorting both; infinite when the
/// sizes differ.
pub fn matching_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// As [`matching_distance`] for complex sets ordered by imaginary part.
pub fn pole_matching_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let key = |p: &Complex64, q: &Complex64| p.im.total_cmp(&q.im).then(p.re.total_cmp(&q.re));
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(key);
    b.sort_by(key);
    a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Distances of a best approximation to its limits as `omega -> 0` and as
/// `omega -> (n + 1) pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticDiagnostics {
    /// Nodes against the `2n + 1` Chebyshev nodes.
    pub d_cheb: f64,
    /// `omega * poles` against the Padé poles.
    pub d_pade: f64,
    /// Poles against `i (-1 + 2j / (n + 1))`, `j = 1..n`.
    pub d_limit_poles: f64,
    /// Nodes against `-1 + k / (n + 1)`, `k = 1..2n + 1`.
    pub d_limit_nodes: f64,
}

pub fn asymptotic_diagnostics(result: &BestApproximation) -> Result<AsymptoticDiagnostics> {
    let n = result.n();
    let omega = result.omega();
    let nodes = &result.interpolation_nodes;
    let poles = result.approximant.poles()?;
    let scaled: Vec<Complex64> = poles.iter().map(|p| p * omega).collect();
    let h = 1.0 / (n + 1) as f64;
    let limit_poles: Vec<Complex64> = (1..=n).map(|j| Complex64::new(0.0, -1.0 + 2.0 * j as f64 * h)).collect();
    let limit_nodes: Vec<f64> = (1..=2 * n + 1).map(|k| -1.0 + k as f64 * h).collect();
    Ok(AsymptoticDiagnostics {
        d_cheb: matching_distance(nodes, &chebyshev_nodes(2 * n + 1)),
        d_pade: pole_matching_distance(&scaled, &pade_poles(n)?),
        d_limit_poles: pole_matching_distance(&poles, &limit_poles),
        d_limit_nodes: matching_distance(nodes, &limit_nodes),
    })
}

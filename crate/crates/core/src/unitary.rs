//! Unitary rational functions: barycentric and pole representations, phase
//! error evaluation, pole extraction and structural checks.
//!
//! Throughout, a unitary function `r` is evaluated on the imaginary axis only
//! through its real coordinate: `eval(x)` returns `r(ix)`, and the target is
//! `exp(i * omega * x)` for `x` in `[-1, 1]`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;

/// Relative threshold below which the barycentric denominator is treated as
/// collapsed.
pub const DENOMINATOR_COLLAPSE_TOL: f64 = 1e-13;

/// Eigenvalues above this magnitude are classified as infinite.
pub const INFINITE_EIGENVALUE: f64 = 1e12;

/// Anything that evaluates a unitary approximant on the imaginary axis.
pub trait UnitaryEval {
    /// Degree `n` of the `(n, n)` rational function.
    fn degree(&self) -> usize;

    /// `r(ix)`.
    fn eval(&self, x: f64) -> Complex64;

    /// Principal phase error `arg(r(ix) * exp(-i omega x))` in `(-pi, pi]`.
    fn phase_error(&self, x: f64, omega: f64) -> f64 {
        let d = self.eval(x) * Complex64::cis(-omega * x);
        principal(d.im.atan2(d.re))
    }
}

impl<T: UnitaryEval + ?Sized> UnitaryEval for &T {
    fn degree(&self) -> usize {
        (**self).degree()
    }
    fn eval(&self, x: f64) -> Complex64 {
        (**self).eval(x)
    }
    fn phase_error(&self, x: f64, omega: f64) -> f64 {
        (**self).phase_error(x, omega)
    }
}

/// Reduce an angle to `(-pi, pi]`.
pub fn principal(a: f64) -> f64 {
    let mut a = a % (2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    } else if a <= -PI {
        a += 2.0 * PI;
    }
    a
}

/// `-2 arg f` reduced to `(-pi, pi]`. Since the result is only defined modulo
/// `2 pi`, `f` may be replaced by `-f`; doing so when `Re f < 0` keeps the
/// argument near 0 instead of near `pi`, so small results are not rounded to
/// the spacing of floats near `2 pi`.
pub fn half_angle_phase(f: Complex64) -> f64 {
    let f = if f.re < 0.0 { -f } else { f };
    principal(-2.0 * f.im.atan2(f.re))
}

/// Degree-`(n, n)` unitary rational function in barycentric form with real
/// support nodes and real rotated weights.
///
/// The complex denominator weights are `w_j = v_j exp(-i omega s_j / 2)` and
/// the numerator weights are their conjugates, so `|r(ix)| = 1` holds by
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryBarycentric {
    omega: f64,
    support_nodes: Vec<f64>,
    rotated_weights: Vec<f64>,
}

impl UnitaryBarycentric {
    pub fn new(omega: f64, support_nodes: Vec<f64>, rotated_weights: Vec<f64>) -> Result<Self> {
        if !omega.is_finite() || omega < 0.0 {
            return Err(Error::InvalidInput(format!("omega must be finite and non-negative, got {omega}")));
        }
        if support_nodes.is_empty() {
            return Err(Error::InvalidInput("at least one support node required".into()));
        }
        if support_nodes.len() != rotated_weights.len() {
            return Err(Error::InvalidInput(format!(
                "{} support nodes but {} weights",
                support_nodes.len(),
                rotated_weights.len()
            )));
        }
        for &s in &support_nodes {
            if !s.is_finite() || !(-1.0..=1.0).contains(&s) {
                return Err(Error::InvalidInput(format!("support node {s} outside [-1, 1]")));
            }
        }
        for pair in support_nodes.windows(2) {
            if pair[1] == pair[0] {
                return Err(Error::CoincidentNodes(pair[0]));
            }
            if pair[1] < pair[0] {
                return Err(Error::InvalidInput("support nodes must be strictly increasing".into()));
            }
        }
        if rotated_weights.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite weight".into()));
        }
        let norm = rotated_weights.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidInput("all weights are zero".into()));
        }
        let first = rotated_weights.iter().copied().find(|&v| v != 0.0).unwrap_or(1.0);
        let scale = first.signum() / norm;
        let rotated_weights = rotated_weights.into_iter().map(|v| v * scale).collect();
        Ok(Self {
            omega,
            support_nodes,
            rotated_weights,
        })
    }

    /// The constant function `r = 1`, written with the single support node 0.
    pub fn constant_one(omega: f64) -> Self {
        Self {
            omega,
            support_nodes: vec![0.0],
            rotated_weights: vec![1.0],
        }
    }

    pub fn n(&self) -> usize {
        self.support_nodes.len() - 1
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn support_nodes(&self) -> &[f64] {
        &self.support_nodes
    }

    pub fn rotated_weights(&self) -> &[f64] {
        &self.rotated_weights
    }

    /// Complex denominator weights `v_j exp(-i omega s_j / 2)`.
    pub fn derived_weights(&self) -> Vec<Complex64> {
        derived_weights(self.omega, &self.support_nodes, &self.rotated_weights)
    }

    /// `r(ix)`, failing when the denominator collapses relative to the size
    /// of its terms.
    pub fn try_eval(&self, x: f64) -> Result<Complex64> {
        if let Some(k) = self.support_nodes.iter().position(|&s| s == x) {
            return Ok(Complex64::cis(self.omega * self.support_nodes[k]));
        }
        let mut den = Complex64::new(0.0, 0.0);
        let mut mag = 0.0;
        for (w, &s) in self.derived_weights().iter().zip(&self.support_nodes) {
            let c = 1.0 / (x - s);
            den += w * c;
            mag += w.norm() * c.abs();
        }
        if den.norm() < DENOMINATOR_COLLAPSE_TOL * mag {
            return Err(Error::SpuriousRealPole(x));
        }
        Ok(den.conj() / den)
    }

    /// `r(z)` at an arbitrary point of the complex plane.
    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        // r(z) with z = i x, i.e. x = -i z.
        let x = Complex64::new(z.im, -z.re);
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = Complex64::new(0.0, 0.0);
        for (w, &s) in self.derived_weights().iter().zip(&self.support_nodes) {
            let d = x - s;
            if d.norm() == 0.0 {
                return Complex64::cis(self.omega * s);
            }
            num += w.conj() / d;
            den += w / d;
        }
        num / den
    }

    /// `r(ix_k) - exp(i omega x_k)`.
    pub fn interpolation_residual(&self, x: f64) -> f64 {
        (self.eval(x) - Complex64::cis(self.omega * x)).norm()
    }

    /// Finite poles of `r` in the z-plane.
    pub fn poles(&self) -> Result<Vec<Complex64>> {
        let n = self.n();
        if n == 0 {
            return Ok(Vec::new());
        }
        let w = self.derived_weights();
        let s = &self.support_nodes;
        let sum: Complex64 = w.iter().sum();
        let abs_sum: f64 = w.iter().map(|v| v.norm()).sum();

        // The finite eigenvalues of the arrowhead pencil
        //   [0 w^T; 1 diag(s)] - lambda [0 0; 0 I]
        // are the eigenvalues of the oblique projection of diag(s) onto
        // ker(w^T) along the ones vector. Parametrizing ker(w^T) by all
        // coordinates except the one with the largest |w_k| gives the
        // n x n matrix diag(s_j - s_k) - 1 c^T, c_j = w_j (s_j - s_k) / sum(w),
        // shifted by s_k.
        let k = (0..=n)
            .max_by(|&i, &j| w[i].norm().total_cmp(&w[j].norm()))
            .expect("non-empty");
        let idx: Vec<usize> = (0..=n).filter(|&j| j != k).collect();
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        for (col, &j) in idx.iter().enumerate() {
            let c = w[j] * (s[j] - s[k]) / sum;
            for row in 0..n {
                m[(row, col)] = -c;
            }
            m[(col, col)] += Complex64::new(s[j] - s[k], 0.0);
        }
        let eig = linalg::complex_eigenvalues(m)?;
        let expected = if sum.norm() <= 1e-13 * abs_sum { n - 1 } else { n };
        let mut poles: Vec<Complex64> = eig
            .into_iter()
            .map(|l| l + s[k])
            .filter(|l| l.re.is_finite() && l.im.is_finite() && l.norm() <= INFINITE_EIGENVALUE)
            .map(|l| Complex64::new(0.0, 1.0) * l)
            .collect();
        if poles.len() < expected {
            return Err(Error::DegenerateNullSpace {
                found: poles.len(),
                expected,
            });
        }
        poles.sort_by(|a, b| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)));
        Ok(poles)
    }

    /// Pole representation with `theta` fitted so both forms agree at `x = 0`.
    pub fn pole_form(&self) -> Result<UnitaryPoleForm> {
        let poles = self.poles()?;
        let r0 = self.eval(0.0);
        let mut g0 = 0.0;
        for (j, p) in poles.iter().enumerate() {
            if p.re == 0.0 {
                return Err(Error::DegeneratePole(j));
            }
            g0 += 2.0 * (-p.im / p.re).atan();
        }
        let theta = principal(r0.im.atan2(r0.re) - g0);
        UnitaryPoleForm::new(poles, theta)
    }
}

pub fn derived_weights(omega: f64, support_nodes: &[f64], rotated_weights: &[f64]) -> Vec<Complex64> {
    rotated_weights
        .iter()
        .zip(support_nodes)
        .map(|(&v, &s)| Complex64::cis(-0.5 * omega * s) * v)
        .collect()
}

impl UnitaryEval for UnitaryBarycentric {
    fn degree(&self) -> usize {
        self.n()
    }

    fn eval(&self, x: f64) -> Complex64 {
        if let Some(k) = self.support_nodes.iter().position(|&s| s == x) {
            return Complex64::cis(self.omega * self.support_nodes[k]);
        }
        let mut den = Complex64::new(0.0, 0.0);
        for (w, &s) in self.derived_weights().iter().zip(&self.support_nodes) {
            den += w / (x - s);
        }
        den.conj() / den
    }

    /// Uses the half-angle form `delta = -2 arg F(x)` with
    /// `F(x) = sum v_j exp(i omega (x - s_j) / 2) / (x - s_j)`, which keeps full
    /// relative accuracy when the phase error is tiny.
    fn phase_error(&self, x: f64, omega: f64) -> f64 {
        if self.support_nodes.contains(&x) {
            return principal((self.omega - omega) * x);
        }
        let shift = (omega - self.omega) * x;
        let mut f = Complex64::new(0.0, 0.0);
        for (&v, &s) in self.rotated_weights.iter().zip(&self.support_nodes) {
            let d = x - s;
            f += Complex64::cis(0.5 * (self.omega * d + shift)) * (v / d);
        }
        half_angle_phase(f)
    }
}

/// Unitary rational function given by its poles `s_j` and phase `theta`:
/// `r(z) = (-1)^m exp(i theta) prod (z + conj(s_j)) / (z - s_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryPoleForm {
    poles: Vec<Complex64>,
    theta: f64,
}

impl UnitaryPoleForm {
    pub fn new(poles: Vec<Complex64>, theta: f64) -> Result<Self> {
        if !theta.is_finite() || poles.iter().any(|p| !p.re.is_finite() || !p.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite pole or phase".into()));
        }
        Ok(Self { poles, theta })
    }

    pub fn poles(&self) -> &[Complex64] {
        &self.poles
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn eval_at(&self, z: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::cis(self.theta);
        if self.poles.len() % 2 == 1 {
            acc = -acc;
        }
        for &s in &self.poles {
            let d = z - s;
            if d.norm() <= 1e-14 * s.norm().max(1.0) {
                return Err(Error::PoleHit(z.norm()));
            }
            acc *= (z + s.conj()) / d;
        }
        Ok(acc)
    }

    /// Phase function `g(x) = theta + 2 sum arctan((x - mu_j) / xi_j)` with
    /// `r(ix) = exp(i g(x))`.
    pub fn phase_function(&self, x: f64) -> Result<f64> {
        let mut g = self.theta;
        for (j, s) in self.poles.iter().enumerate() {
            if s.re == 0.0 {
                return Err(Error::DegeneratePole(j));
            }
            g += 2.0 * ((x - s.im) / s.re).atan();
        }
        Ok(g)
    }

    /// Irreducible iff `conj(s_j) != -s_l` for all `j, l`.
    pub fn is_irreducible(&self, tol: f64) -> bool {
        min_mirror_gap(&self.poles) > tol
    }

    /// Real or conjugate-paired poles and `exp(i theta) = +-1`.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        if self.theta.sin().abs() > tol {
            return false;
        }
        self.poles.iter().all(|p| {
            p.im.abs() <= tol || self.poles.iter().any(|q| (q - p.conj()).norm() <= tol * p.norm().max(1.0))
        })
    }
}

impl UnitaryEval for UnitaryPoleForm {
    fn degree(&self) -> usize {
        self.poles.len()
    }

    fn eval(&self, x: f64) -> Complex64 {
        match self.phase_function(x) {
            Ok(g) => Complex64::cis(g),
            Err(_) => self.eval_at(Complex64::new(0.0, x)).unwrap_or(Complex64::new(f64::NAN, f64::NAN)),
        }
    }

    fn phase_error(&self, x: f64, omega: f64) -> f64 {
        match self.phase_function(x) {
            Ok(g) => principal(g - omega * x),
            Err(_) => {
                let d = self.eval(x) * Complex64::cis(-omega * x);
                principal(d.im.atan2(d.re))
            }
        }
    }
}

/// Continuous branch of the phase error of a barycentric approximant.
///
/// The principal value from [`UnitaryBarycentric::phase_error`] keeps full
/// accuracy; the pole form supplies the multiple of `2 pi` that makes the
/// result continuous on the real line, normalized to `(-pi, pi]` at `x = 0`.
/// Without poles (degree 0 or failed extraction) the principal value is used.
#[derive(Debug, Clone)]
pub struct LiftedPhase<'a> {
    r: &'a UnitaryBarycentric,
    form: Option<UnitaryPoleForm>,
}

impl<'a> LiftedPhase<'a> {
    pub fn new(r: &'a UnitaryBarycentric) -> Self {
        let form = r.pole_form().ok().filter(|f| !f.poles.is_empty()).and_then(|mut f| {
            let g0 = f.phase_function(0.0).ok()?;
            let target = r.phase_error(0.0, r.omega());
            f.theta += target - g0;
            Some(f)
        });
        Self { r, form }
    }
}

impl UnitaryEval for LiftedPhase<'_> {
    fn degree(&self) -> usize {
        self.r.n()
    }

    fn eval(&self, x: f64) -> Complex64 {
        self.r.eval(x)
    }

    fn phase_error(&self, x: f64, omega: f64) -> f64 {
        let principal = self.r.phase_error(x, omega);
        match self.form.as_ref().and_then(|f| f.phase_function(x).ok()) {
            Some(g) => {
                let lifted = g - omega * x;
                principal + 2.0 * PI * ((lifted - principal) / (2.0 * PI)).round()
            }
            None => principal,
        }
    }
}

fn min_mirror_gap(poles: &[Complex64]) -> f64 {
    let mut gap = f64::INFINITY;
    for a in poles {
        for b in poles {
            gap = gap.min((a.conj() + b).norm());
        }
    }
    gap
}

/// Sampled phase error on an increasing grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseCurve {
    pub xs: Vec<f64>,
    pub delta: Vec<f64>,
}

impl PhaseCurve {
    pub fn sample<R: UnitaryEval + ?Sized>(r: &R, omega: f64, xs: Vec<f64>) -> Self {
        let delta = xs.iter().map(|&x| r.phase_error(x, omega)).collect();
        Self { xs, delta }
    }

    /// Indices `k` where the jump from sample `k` to `k + 1` exceeds pi,
    /// i.e. the principal branch has wrapped.
    pub fn branch_wraps(&self) -> Vec<usize> {
        self.delta
            .windows(2)
            .enumerate()
            .filter(|(_, d)| (d[1] - d[0]).abs() > PI)
            .map(|(k, _)| k)
            .collect()
    }
}

/// Parameters of the map from `[-1, 1]` to `[a, b]`:
/// `r_ab(iy) = exp(i center) r(i (y - center) / omega)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalTransform {
    pub center: f64,
    pub scale: f64,
    pub prefactor: Complex64,
    pub omega: f64,
}

impl IntervalTransform {
    pub fn eval<R: UnitaryEval + ?Sized>(&self, r: &R, y: f64) -> Complex64 {
        self.prefactor * r.eval((y - self.center) * self.scale)
    }

    pub fn to_unit(&self, y: f64) -> f64 {
        (y - self.center) * self.scale
    }
}

/// Transfer an approximation of `exp(i omega x)` on `[-1, 1]` to an
/// approximation of `exp(iy)` on `[a, b]`; requires `omega = (b - a) / 2`.
pub fn transform_to_interval(b: &UnitaryBarycentric, a: f64, bnd: f64) -> Result<IntervalTransform> {
    if !(a < bnd) {
        return Err(Error::InvalidInput(format!("empty interval [{a}, {bnd}]")));
    }
    let half_width = 0.5 * (bnd - a);
    if (b.omega() - half_width).abs() > 1e-12 * half_width.max(1.0) {
        return Err(Error::IntervalMismatch {
            omega: b.omega(),
            half_width,
        });
    }
    let center = 0.5 * (a + bnd);
    Ok(IntervalTransform {
        center,
        scale: 1.0 / b.omega(),
        prefactor: Complex64::cis(center),
        omega: b.omega(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckReport {
    pub unitarity_defect: f64,
    pub symmetry_defect: f64,
    pub stability_ok: bool,
    pub irreducible_ok: bool,
}

/// Tolerance on `|conj(s_j) + s_l|` for the irreducibility check.
pub const IRREDUCIBLE_TOL: f64 = 1e-10;

pub fn structural_checks(b: &UnitaryBarycentric, grid_size: usize) -> Result<CheckReport> {
    let poles = b.poles().ok();
    structural_checks_with(b, poles.as_deref(), grid_size)
}

/// Checks for any evaluator; `poles = None` means the poles are unknown and
/// the pole-based checks fail.
pub fn structural_checks_with<R: UnitaryEval + ?Sized>(
    r: &R,
    poles: Option<&[Complex64]>,
    grid_size: usize,
) -> Result<CheckReport> {
    if grid_size < 2 {
        return Err(Error::InvalidInput("grid_size must be at least 2".into()));
    }
    let mut unitarity_defect: f64 = 0.0;
    let mut symmetry_defect: f64 = 0.0;
    for k in 0..grid_size {
        let x = -1.0 + 2.0 * k as f64 / (grid_size - 1) as f64;
        let v = r.eval(x);
        unitarity_defect = unitarity_defect.max((v.norm() - 1.0).abs());
        symmetry_defect = symmetry_defect.max((r.eval(-x) - v.conj()).norm());
    }
    let (stability_ok, irreducible_ok) = match poles {
        Some(p) => (p.iter().all(|s| s.re > 0.0), min_mirror_gap(p) > IRREDUCIBLE_TOL),
        None => (false, false),
    };
    Ok(CheckReport {
        unitarity_defect,
        symmetry_defect,
        stability_ok,
        irreducible_ok,
    })
}

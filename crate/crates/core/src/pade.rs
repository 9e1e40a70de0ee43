//! Diagonal Padé approximants to `exp(z)`, the associated error bound and
//! estimate, and the quotient-of-Chebyshev-polynomial baseline.

use std::f64::consts::PI;

use num_complex::Complex64;
use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result};
use crate::linalg;
use crate::unitary::{half_angle_phase, UnitaryEval};

fn lnf(k: usize) -> f64 {
    ln_factorial(k as u64)
}

/// Coefficients (ascending) of the Padé denominator `p(z)`, normalized to
/// `p(0) = 1`; the approximant is `p(-z) / p(z)`.
pub fn pade_denominator(n: usize) -> Vec<f64> {
    (0..=n)
        .map(|k| {
            let mag = (lnf(2 * n - k) + lnf(n) - lnf(2 * n) - lnf(k) - lnf(n - k)).exp();
            if k % 2 == 0 {
                mag
            } else {
                -mag
            }
        })
        .collect()
}

fn horner(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Below this `|z|` the error is summed from its Taylor series instead of
/// being formed as a difference of nearly equal numbers.
pub const SERIES_RADIUS: f64 = 2.0;
const SERIES_TERMS: usize = 48;

/// `exp(z) - p(-z) / p(z)` for `|z| <= SERIES_RADIUS`, from the remainder
/// series `exp(z) p(z) - p(-z) = sum_{k > 2n} a_k z^k`,
/// `a_k = sum_j p_j / (k - j)!`.
fn series_error(denominator: &[f64], z: Complex64) -> Complex64 {
    let n = denominator.len() - 1;
    let coeff = |k: usize| -> f64 {
        denominator
            .iter()
            .enumerate()
            .map(|(j, p)| p * (-lnf(k - j)).exp())
            .sum()
    };
    let tail = (0..SERIES_TERMS)
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, i| acc * z + coeff(2 * n + 1 + i));
    tail * z.powu(2 * n as u32 + 1) / horner(denominator, z)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PadeApproximant {
    n: usize,
    denominator: Vec<f64>,
}

impl PadeApproximant {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            denominator: pade_denominator(n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn denominator_coefficients(&self) -> &[f64] {
        &self.denominator
    }

    /// `p(-z) / p(z)`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let den = horner(&self.denominator, z);
        let scale: f64 = self
            .denominator
            .iter()
            .enumerate()
            .map(|(k, c)| c.abs() * z.norm().powi(k as i32))
            .sum();
        if den.norm() <= 1e-14 * scale {
            return Err(Error::PoleHit(z.norm()));
        }
        Ok(horner(&self.denominator, -z) / den)
    }

    /// `exp(z) - p(-z) / p(z)`, summed as a series near the origin so that
    /// tiny errors keep their relative accuracy.
    pub fn error(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() <= SERIES_RADIUS {
            Ok(series_error(&self.denominator, z))
        } else {
            Ok(z.exp() - self.eval(z)?)
        }
    }

    /// Roots of the denominator, sorted by imaginary part.
    pub fn poles(&self) -> Result<Vec<Complex64>> {
        let mut r = linalg::polynomial_roots(&self.denominator)?;
        r.sort_by(|a, b| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)));
        Ok(r)
    }

    /// `x -> r(i omega x)` as an approximation to `exp(i omega x)`.
    pub fn scaled(&self, omega: f64) -> ScaledPade<'_> {
        ScaledPade { pade: self, omega }
    }
}

pub fn pade_eval(n: usize, z: Complex64) -> Result<Complex64> {
    PadeApproximant::new(n).eval(z)
}

pub fn pade_poles(n: usize) -> Result<Vec<Complex64>> {
    PadeApproximant::new(n).poles()
}

#[derive(Debug, Clone, Copy)]
pub struct ScaledPade<'a> {
    pade: &'a PadeApproximant,
    omega: f64,
}

impl UnitaryEval for ScaledPade<'_> {
    fn degree(&self) -> usize {
        self.pade.n
    }

    fn eval(&self, x: f64) -> Complex64 {
        let p = horner(&self.pade.denominator, Complex64::new(0.0, self.omega * x));
        p.conj() / p
    }

    fn phase_error(&self, x: f64, omega: f64) -> f64 {
        let y = self.omega * x;
        if omega == self.omega && y.abs() <= SERIES_RADIUS {
            // r e^{-iy} = 1 - u with u = (e^{iy} - r) e^{-iy}
            let u = series_error(&self.pade.denominator, Complex64::new(0.0, y)) * Complex64::cis(-y);
            return (-u.im).atan2(1.0 - u.re);
        }
        let p = horner(&self.pade.denominator, Complex64::new(0.0, y)) * Complex64::cis(0.5 * omega * x);
        half_angle_phase(p)
    }
}

/// `(n!)^2 omega^(2n+1) / ((2n)! (2n+1)!)`.
pub fn pade_error_bound(n: usize, omega: f64) -> f64 {
    (2.0 * lnf(n) - lnf(2 * n) - lnf(2 * n + 1) + (2 * n + 1) as f64 * omega.ln()).exp()
}

/// `2 (n!)^2 / ((2n)! (2n+1)!) (omega / 2)^(2n+1)`, the leading term of the
/// best-approximation error as `omega -> 0`.
pub fn best_error_estimate(n: usize, omega: f64) -> f64 {
    2.0 * pade_error_bound(n, 0.5 * omega)
}

/// Frequencies below which super-linear convergence in `n` is expected,
/// based on the Padé bound and on the error estimate respectively.
pub fn superlinear_thresholds(n: usize) -> (f64, f64) {
    let h = n as f64 + 0.5;
    let e = std::f64::consts::E;
    (4.0 / e * h, 8.0 / e * h)
}

/// `p^dagger / p` where `p(ix)` is the degree-`n` Chebyshev least-squares
/// approximation of `exp(-i omega x / 2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebQuotient {
    n: usize,
    omega: f64,
    coeffs: Vec<Complex64>,
}

impl ChebQuotient {
    pub fn new(n: usize, omega: f64) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidInput(format!("omega must be positive, got {omega}")));
        }
        // Least squares on the m-point Chebyshev grid; the Chebyshev
        // polynomials of degree < m are discretely orthogonal there, so the
        // normal equations are diagonal.
        let m = 64 * (n + 1);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        for i in 0..m {
            let theta = (2 * i + 1) as f64 * PI / (2 * m) as f64;
            let x = theta.cos();
            let f = Complex64::cis(-0.5 * omega * x);
            for (k, c) in coeffs.iter_mut().enumerate() {
                *c += f * (k as f64 * theta).cos();
            }
        }
        for (k, c) in coeffs.iter_mut().enumerate() {
            *c *= if k == 0 { 1.0 } else { 2.0 } / m as f64;
        }
        Ok(Self { n, omega, coeffs })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Chebyshev coefficients of `x -> p(ix)`.
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `p(ix)` by Clenshaw recurrence.
    pub fn p(&self, x: f64) -> Complex64 {
        let mut b1 = Complex64::new(0.0, 0.0);
        let mut b2 = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().skip(1).rev() {
            let b0 = c + b1 * (2.0 * x) - b2;
            b2 = b1;
            b1 = b0;
        }
        self.coeffs[0] + b1 * x - b2
    }

    /// Poles `z = i x` where `x` runs over the roots of `x -> p(ix)`, sorted
    /// by imaginary part.
    pub fn poles(&self) -> Result<Vec<Complex64>> {
        let mut poles: Vec<Complex64> = linalg::chebyshev_roots(&self.coeffs)?
            .into_iter()
            .map(|x| Complex64::new(0.0, 1.0) * x)
            .collect();
        poles.sort_by(|a, b| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)));
        Ok(poles)
    }
}

impl UnitaryEval for ChebQuotient {
    fn degree(&self) -> usize {
        self.n
    }

    fn eval(&self, x: f64) -> Complex64 {
        let p = self.p(x);
        p.conj() / p
    }

    fn phase_error(&self, x: f64, omega: f64) -> f64 {
        let p = self.p(x) * Complex64::cis(0.5 * omega * x);
        half_angle_phase(p)
    }
}

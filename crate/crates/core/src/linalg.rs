//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Right singular vector for the smallest singular value of `a`.
#[derive(Debug, Clone)]
pub struct NullVector {
    pub vector: DVector<f64>,
    /// Singular values in descending order, padded with zeros when `a` has
    /// fewer rows than columns.
    pub singular_values: Vec<f64>,
}

impl NullVector {
    pub fn sigma_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// The singular value next to the one belonging to `vector`.
    pub fn sigma_next(&self) -> f64 {
        let k = self.singular_values.len();
        if k < 2 {
            f64::INFINITY
        } else {
            self.singular_values[k - 2]
        }
    }

    pub fn sigma_min(&self) -> f64 {
        self.singular_values.last().copied().unwrap_or(0.0)
    }
}

pub fn null_vector(a: &DMatrix<f64>) -> Result<NullVector> {
    let (rows, cols) = a.shape();
    if cols == 0 {
        return Err(Error::InvalidInput("matrix without columns".into()));
    }
    // Pad wide matrices with zero rows so the full right singular basis is
    // returned by the thin decomposition.
    let padded;
    let m = if rows < cols {
        let mut p = DMatrix::<f64>::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(a);
        padded = p;
        &padded
    } else {
        a
    };
    let svd = m
        .clone()
        .try_svd(false, true, f64::EPSILON, 0)
        .ok_or(Error::Eigen)?;
    let v_t = svd.v_t.ok_or(Error::Eigen)?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let singular_values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let last = *order.last().expect("non-empty");
    let vector = v_t.row(last).transpose();
    Ok(NullVector {
        vector,
        singular_values,
    })
}

/// Eigenvalues of a general complex matrix via complex Schur decomposition.
pub fn complex_eigenvalues(m: DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let schur = nalgebra::Schur::try_new(m, f64::EPSILON, 0).ok_or(Error::Eigen)?;
    let ev = schur.eigenvalues().ok_or(Error::Eigen)?;
    Ok(ev.iter().copied().collect())
}

/// Diagonal similarity scaling (Parlett–Reinsch) with powers of two, so the
/// scaling itself is exact.
pub fn balance(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    let radix = 2.0_f64;
    let sqrdx = radix * radix;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].abs();
                    r += m[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut g = r / radix;
            let mut f = 1.0;
            let mut cc = c;
            while cc < g {
                f *= radix;
                cc *= sqrdx;
            }
            g = r * radix;
            while cc > g {
                f /= radix;
                cc /= sqrdx;
            }
            if (cc + r / f) / f < 0.95 * s {
                done = false;
                let g = 1.0 / f;
                for j in 0..n {
                    m[(i, j)] *= g;
                }
                for j in 0..n {
                    m[(j, i)] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
}

/// Roots of a real polynomial given by ascending coefficients, computed as
/// eigenvalues of the balanced companion matrix.
pub fn polynomial_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let mut deg = coeffs.len().saturating_sub(1);
    while deg > 0 && coeffs[deg] == 0.0 {
        deg -= 1;
    }
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[deg];
    let mut c = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        c[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        c[(i, deg - 1)] = -coeffs[i] / lead;
    }
    balance(&mut c);
    let ev = c.complex_eigenvalues();
    Ok(ev.iter().copied().collect())
}

/// Roots of `sum c_k T_k(x)` from the colleague matrix.
pub fn chebyshev_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut deg = coeffs.len().saturating_sub(1);
    while deg > 0 && coeffs[deg] == Complex64::new(0.0, 0.0) {
        deg -= 1;
    }
    if deg == 0 {
        return Ok(Vec::new());
    }
    if deg == 1 {
        return Ok(vec![-coeffs[0] / coeffs[1]]);
    }
    let mut c = DMatrix::<Complex64>::zeros(deg, deg);
    c[(0, 1)] = Complex64::new(1.0, 0.0);
    for i in 1..deg {
        c[(i, i - 1)] = Complex64::new(0.5, 0.0);
        if i + 1 < deg {
            c[(i, i + 1)] = Complex64::new(0.5, 0.0);
        }
    }
    let lead = coeffs[deg] * 2.0;
    for k in 0..deg {
        c[(deg - 1, k)] -= coeffs[k] / lead;
    }
    complex_eigenvalues(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_vector_of_wide_matrix() {
        let a = DMatrix::from_row_slice(1, 2, &[1.0, 1.0]);
        let nv = null_vector(&a).unwrap();
        let r = (&a * &nv.vector).norm();
        assert!(r < 1e-15);
        assert!((nv.vector.norm() - 1.0).abs() < 1e-15);
        assert_eq!(nv.singular_values.len(), 2);
        assert!(nv.sigma_min() < 1e-15);
    }

    #[test]
    fn roots_of_quadratic() {
        // (x - 1)(x - 3) = 3 - 4x + x^2
        let mut r = polynomial_roots(&[3.0, -4.0, 1.0]).unwrap();
        r.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((r[0] - Complex64::new(1.0, 0.0)).norm() < 1e-13);
        assert!((r[1] - Complex64::new(3.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn complex_schur_eigenvalues() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(2.0, 1.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(-1.0, 0.5),
            ],
        );
        let mut ev = complex_eigenvalues(m).unwrap();
        ev.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((ev[0] - Complex64::new(-1.0, 0.5)).norm() < 1e-14);
        assert!((ev[1] - Complex64::new(2.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn chebyshev_roots_of_t3() {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let mut r = chebyshev_roots(&[z, z, z, one]).unwrap();
        r.sort_by(|a, b| a.re.total_cmp(&b.re));
        let expected = [-(3f64.sqrt()) / 2.0, 0.0, 3f64.sqrt() / 2.0];
        for (a, e) in r.iter().zip(expected) {
            assert!((a - Complex64::new(e, 0.0)).norm() < 1e-14);
        }
        let r = chebyshev_roots(&[Complex64::new(1.0, 1.0), Complex64::new(2.0, 0.0)]).unwrap();
        assert!((r[0] - Complex64::new(-0.5, -0.5)).norm() < 1e-15);
    }
}

//! One-dimensional maximization by golden-section search.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a maximum of a unimodal `f` on `[a, b]`,
/// stopping once the bracket is shorter than `tol`. Returns the best point
/// seen, which may be an endpoint.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let fa = f(lo);
    let fb = f(hi);
    let mut best = if fa >= fb { (lo, fa) } else { (hi, fb) };
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    // Each step shrinks the bracket by INV_PHI; 200 steps exhaust any f64 range.
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
        if x1 <= lo || x2 >= hi || x1 >= x2 {
            break;
        }
    }
    for cand in [(x1, f1), (x2, f2)] {
        if cand.1 > best.1 {
            best = cand;
        }
    }
    best
}

/// Maximum of `f` on `[a, b]`: a uniform pre-scan with `prescan` points
/// selects a bracket, which golden-section search then refines. Robust
/// against `f` failing to be unimodal on the whole interval.
pub fn bracketed_max<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, prescan: usize, tol: f64) -> (f64, f64) {
    let m = prescan.max(3);
    let h = (b - a) / (m - 1) as f64;
    let xs: Vec<f64> = (0..m)
        .map(|k| if k == m - 1 { b } else { a + h * k as f64 })
        .collect();
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let (k, _) = vals
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    let lo = xs[k.saturating_sub(1)];
    let hi = xs[(k + 1).min(m - 1)];
    let refined = golden_max(&f, lo, hi, tol);
    if refined.1 >= vals[k] {
        refined
    } else {
        (xs[k], vals[k])
    }
}

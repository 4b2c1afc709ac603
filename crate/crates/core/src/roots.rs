//! Bracketing scans and bisection.

/// Scans `f` at `steps + 1` geometrically spaced points on `[lo, hi]` and
/// returns the first adjacent pair where the sign of `f` changes from the
/// sign at `lo`. Points where `f` is not finite end the scan.
pub fn geometric_scan<F>(mut f: F, lo: f64, hi: f64, steps: usize) -> Option<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    assert!(lo > 0.0 && hi > lo && steps >= 1);
    let ratio = (hi / lo).powf(1.0 / steps as f64);
    let mut x0 = lo;
    let f0 = f(x0);
    if !f0.is_finite() || f0 == 0.0 {
        return None;
    }
    for j in 1..=steps {
        let x1 = if j == steps { hi } else { lo * ratio.powi(j as i32) };
        let f1 = f(x1);
        if !f1.is_finite() {
            return None;
        }
        if (f1 > 0.0) != (f0 > 0.0) || f1 == 0.0 {
            return Some((x0, x1));
        }
        x0 = x1;
    }
    None
}

/// Bisection on a bracket `[a, b]` with `f(a)` and `f(b)` of opposite
/// signs, until the bracket is no wider than `tol`. Returns the midpoint.
pub fn bisect<F>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> f64
where
    F: FnMut(f64) -> f64,
{
    let fa = f(a);
    let a_positive = fa > 0.0;
    while (b - a).abs() > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == a_positive {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

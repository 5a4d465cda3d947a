//! Golden-section search on a bracketing interval.

use crate::scalar::{cst, Scalar};

/// Minimises `f` on `[a, b]` until the bracket is narrower than `tol`.
///
/// Returns the best point seen and its value. Converges to a local minimum
/// for any unimodal `f`, kinks included.
pub fn golden_section_min<T: Scalar, F: FnMut(T) -> T>(mut f: F, a: T, b: T, tol: T) -> (T, T) {
    let inv_phi = cst::<T>(0.618_033_988_749_894_8);
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    let mut iter = 0;
    while hi - lo > tol && iter < 200 {
        iter += 1;
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
            if f1 < best.1 {
                best = (x1, f1);
            }
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
            if f2 < best.1 {
                best = (x2, f2);
            }
        }
    }
    best
}

/// Maximises `f` on `[a, b]`; see [`golden_section_min`].
pub fn golden_section_max<T: Scalar, F: FnMut(T) -> T>(mut f: F, a: T, b: T, tol: T) -> (T, T) {
    let (x, v) = golden_section_min(|x| -f(x), a, b, tol);
    (x, -v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_smooth_minimum() {
        let (x, v) = golden_section_min(|x: f64| (x - 0.2).powi(2), -1.0, 1.0, 1e-10);
        assert!((x - 0.2).abs() < 1e-9);
        assert!(v < 1e-18);
    }

    #[test]
    fn finds_kink_maximum() {
        let (x, v) = golden_section_max(|x: f64| 1.0 - (x - 0.3).abs(), 0.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-9);
        assert!((v - 1.0).abs() < 1e-9);
    }
}

//! Forward and inverse maps between central face-length moments and the
//! moments of the Feret process of the isotropic regular random zonotope.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::diagnostics::stationarity_diagnostic;
use super::kernel::{k_matrix, k_s};
use super::moments::{CentralFaceMoments, FeretProcessMoments};
use crate::error::{Error, Result};
use crate::geometry::regular_subdivision;
use crate::linalg::Matrix;
use crate::scalar::{cst, from_usize, Scalar};

/// Largest accepted condition number of `K(0)`.
pub const MAX_CONDITION: f64 = 1e12;

/// Relative slack for negative eigenvalues of `Circ(v_alpha)` before repair
/// is refused.
pub const PSD_REPAIR_RTOL: f64 = 1e-8;

/// Lag index `s` folded onto `0..=⌊n/2⌋`.
pub(crate) fn fold(s: usize, n: usize) -> usize {
    let s = s % n;
    s.min(n - s)
}

/// `R(z) = E[H(0) H(z)] = n Σ_d v_d k_S(z − θ_d)`.
fn lag_function<T: Scalar>(c: &CentralFaceMoments<T>, theta: &[T], z: T) -> T {
    let s: T = c.v_alpha.iter().zip(theta).map(|(&v, &th)| v * k_s(z - th)).sum();
    from_usize::<T>(c.n) * s
}

/// Stationary Feret-process moments of the isotropic regular random zonotope
/// with central face-length moments `c`.
pub fn forward_zonotope_moments<T: Scalar>(c: &CentralFaceMoments<T>) -> Result<FeretProcessMoments<T>> {
    c.validate()?;
    let n = c.n;
    let theta = regular_subdivision::<T>(n);
    let mean = cst::<T>(2.0) / T::PI() * from_usize::<T>(n) * c.mean_alpha;
    let lags: Vec<T> = theta.iter().map(|&z| lag_function(c, &theta, z)).collect();
    Ok(FeretProcessMoments::from_lags(mean, &lags))
}

/// The reduced matrix acting on `(v_0, …, v_m)`: row `k` holds
/// `n Σ_{d: fold(d)=r} k_S(z_k − θ_d)`.
pub(crate) fn reduced_row<T: Scalar>(n: usize, theta: &[T], z: T) -> Vec<T> {
    let m = n / 2;
    let mut row = vec![T::zero(); m + 1];
    for (d, &th) in theta.iter().enumerate() {
        let r = fold(d, n);
        row[r] = row[r] + k_s(z - th);
    }
    let nt = from_usize::<T>(n);
    row.iter_mut().for_each(|v| *v = *v * nt);
    row
}

fn expand_palindrome<T: Scalar>(reduced: &[T], n: usize) -> Vec<T> {
    (0..n).map(|s| reduced[fold(s, n)]).collect()
}

/// Clamps small negative eigenvalues of `Circ(v)`; refuses large ones.
pub(crate) fn repair_psd<T: Scalar>(v: &mut [T]) -> Result<bool> {
    let n = v.len();
    let mut planner = FftPlanner::<T>::new();
    let mut buf: Vec<Complex<T>> = v.iter().map(|&x| Complex::new(x, T::zero())).collect();
    planner.plan_fft_forward(n).process(&mut buf);
    let max = buf.iter().map(|z| z.re.abs()).fold(T::zero(), T::max);
    let min = buf.iter().map(|z| z.re).fold(T::infinity(), T::min);
    if min >= T::zero() {
        return Ok(false);
    }
    if min < -cst::<T>(PSD_REPAIR_RTOL) * max {
        return Err(Error::NotPositiveSemidefinite {
            eigenvalue: min.to_f64().unwrap_or(f64::NAN),
        });
    }
    for z in buf.iter_mut() {
        *z = Complex::new(z.re.max(T::zero()), T::zero());
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let nt = from_usize::<T>(n);
    for (x, z) in v.iter_mut().zip(&buf) {
        *x = z.re / nt;
    }
    // restore exact palindrome symmetry lost to rounding
    for k in 1..n {
        let j = n - k;
        if k < j {
            let avg = (v[k] + v[j]) / cst(2.0);
            v[k] = avg;
            v[j] = avg;
        }
    }
    Ok(true)
}

fn require_stationary<T: Scalar>(m: &FeretProcessMoments<T>) -> Result<()> {
    m.validate()?;
    if m.n < 1 {
        return Err(Error::InvalidParameter("empty moments".into()));
    }
    if !m.stationary && !stationarity_diagnostic(m).passed {
        return Err(Error::NonStationary);
    }
    Ok(())
}

fn check_condition<T: Scalar>(n: usize) -> Result<()> {
    let cond = k_matrix::<T>(n, T::zero()).condition_number();
    let cond = cond.to_f64().unwrap_or(f64::INFINITY);
    if cond.is_nan() || cond > MAX_CONDITION {
        return Err(Error::IllConditioned { condition: cond, limit: MAX_CONDITION });
    }
    Ok(())
}

/// Lags averaged over the grid and folded to a palindrome, `0..=⌊n/2⌋`.
fn folded_lags<T: Scalar>(second: &[Vec<T>]) -> Vec<T> {
    let n = second.len();
    let nt = from_usize::<T>(n);
    let lag = |k: usize| (0..n).map(|i| second[i][(i + k) % n]).sum::<T>() / nt;
    (0..=n / 2).map(|k| (lag(k) + lag((n - k) % n)) / cst(2.0)).collect()
}

/// Central face-length moments of the isotropic regular random zonotope whose
/// Feret process has moments `m`.
///
/// `E[α] = (π/2n) E[H]` and `V[α] = (1/n) K(0)⁻¹ V[H]`, solved on the
/// palindromic unknowns `v_0, …, v_⌊n/2⌋`.
pub fn central_from_feret<T: Scalar>(m: &FeretProcessMoments<T>) -> Result<CentralFaceMoments<T>> {
    require_stationary(m)?;
    let n = m.n;
    check_condition::<T>(n)?;
    let theta = regular_subdivision::<T>(n);
    let half = n / 2;
    let a = Matrix::from_fn(half + 1, half + 1, |k, r| reduced_row(n, &theta, theta[k])[r]);
    let rhs = folded_lags(&m.second);
    let reduced = a.lu_solve(&rhs)?;
    let nt = from_usize::<T>(n);
    let mean_alpha = T::PI() / (cst::<T>(2.0) * nt) * m.grand_mean();

    let mut v = expand_palindrome(&reduced, n);
    let repaired = repair_psd(&mut v)?;
    let mut c = CentralFaceMoments::unchecked(mean_alpha, v);
    c.psd_repaired = repaired;

    if let Some(se) = &m.stderr_mean {
        let avg = se.iter().copied().sum::<T>() / nt;
        c.stderr_mean_alpha = Some(T::PI() / (cst::<T>(2.0) * nt) * avg);
    }
    if let Some(se) = &m.stderr_second {
        let se_rhs = folded_lags(se);
        // diagonal delta method through A⁻¹
        let inv: Vec<Vec<T>> = (0..=half)
            .map(|k| {
                let mut e = vec![T::zero(); half + 1];
                e[k] = T::one();
                a.lu_solve(&e)
            })
            .collect::<Result<_>>()?;
        let se_reduced: Vec<T> = (0..=half)
            .map(|r| (0..=half).map(|k| (inv[k][r] * se_rhs[k]).powi(2)).sum::<T>().sqrt())
            .collect();
        c.stderr_v_alpha = Some(expand_palindrome(&se_reduced, n));
    }
    if c.mean_alpha < T::zero() {
        return Err(Error::InvalidParameter("negative mean Feret diameter".into()));
    }
    Ok(c)
}

/// Same as [`central_from_feret`] but solving the full `n × n` circulant
/// system; kept as a cross-check.
pub fn central_from_feret_full<T: Scalar>(m: &FeretProcessMoments<T>) -> Result<CentralFaceMoments<T>> {
    require_stationary(m)?;
    let n = m.n;
    check_condition::<T>(n)?;
    let nt = from_usize::<T>(n);
    let lags: Vec<T> = (0..n)
        .map(|k| (0..n).map(|i| m.second[i][(i + k) % n]).sum::<T>() / nt)
        .collect();
    let mut v: Vec<T> = k_matrix::<T>(n, T::zero()).solve(&lags)?.into_iter().map(|x| x / nt).collect();
    let repaired = repair_psd(&mut v)?;
    let mut c = CentralFaceMoments::unchecked(T::PI() / (cst::<T>(2.0) * nt) * m.grand_mean(), v);
    c.psd_repaired = repaired;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn square() -> CentralFaceMoments<f64> {
        CentralFaceMoments::new(1.0, vec![1.0, 1.0]).unwrap()
    }

    #[test]
    fn forward_square() {
        let m = forward_zonotope_moments(&square()).unwrap();
        assert_relative_eq!(m.mean[0], 4.0 / PI, epsilon = 1e-14);
        assert_relative_eq!(m.second[0][0], 1.0 + 2.0 / PI, epsilon = 1e-14);
        assert_relative_eq!(m.second[0][1], 1.0 + 2.0 / PI, epsilon = 1e-14);
        assert!(m.stationary);
    }

    #[test]
    fn forward_matches_double_sum() {
        let c = CentralFaceMoments::new(0.7, vec![1.0, 0.3, 0.2, 0.3]).unwrap();
        let m = forward_zonotope_moments(&c).unwrap();
        let th = regular_subdivision::<f64>(4);
        for i in 0..4 {
            for j in 0..4 {
                let mut s = 0.0;
                for p in 0..4 {
                    for q in 0..4 {
                        s += c.second_moment(p, q) * k_s(th[j] - th[i] + th[p] - th[q]);
                    }
                }
                assert_relative_eq!(m.second[i][j], s, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn zero_process() {
        let z = CentralFaceMoments::new(0.0, vec![0.0; 3]).unwrap();
        let m = forward_zonotope_moments(&z).unwrap();
        assert!(m.second.iter().flatten().all(|&v| v == 0.0));
        let back = central_from_feret(&FeretProcessMoments::<f64>::zeros(5)).unwrap();
        assert!(back.v_alpha.iter().all(|&v| v == 0.0));
        assert_eq!(back.mean_alpha, 0.0);
    }

    #[test]
    fn inverse_square_against_dense_oracle() {
        let vh = (PI + 2.0) / PI;
        let m = FeretProcessMoments::from_lags(4.0 / PI, &[vh, vh]);
        let c = central_from_feret(&m).unwrap();
        // hand solve of [[½,1/π],[1/π,½]] v = V[H]/2
        let k = Matrix::from_rows(&[vec![0.5, 1.0 / PI], vec![1.0 / PI, 0.5]]).unwrap();
        let oracle = k.lu_solve(&[vh / 2.0, vh / 2.0]).unwrap();
        assert_relative_eq!(c.mean_alpha, 1.0, epsilon = 1e-14);
        for (a, b) in c.v_alpha.iter().zip(&oracle) {
            assert_relative_eq!(*a, *b, epsilon = 1e-13);
            assert_relative_eq!(*a, 1.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn reduced_and_full_agree() {
        let c = CentralFaceMoments::from_mixture(
            &[vec![1.0, 0.2, 0.5, 0.1, 0.7, 0.4], vec![0.3, 0.9, 0.0, 0.6, 0.2, 0.8]],
            &[0.4, 0.6],
        )
        .unwrap();
        let m = forward_zonotope_moments(&c).unwrap();
        let a = central_from_feret(&m).unwrap();
        let b = central_from_feret_full(&m).unwrap();
        for ((x, y), z) in a.v_alpha.iter().zip(&b.v_alpha).zip(&c.v_alpha) {
            assert_relative_eq!(*x, *z, epsilon = 1e-10);
            assert_relative_eq!(*y, *z, epsilon = 1e-10);
        }
    }

    #[test]
    fn rejects_non_stationary() {
        let e = crate::geometry::SymmetricConvexBody::ellipse(3.0, 1.0, 0.3).unwrap();
        let m = FeretProcessMoments::deterministic(&e, 8).unwrap();
        assert!(matches!(central_from_feret(&m), Err(Error::NonStationary)));
    }

    #[test]
    fn psd_repair_threshold() {
        let mut ok = vec![1.0, 1.0 + 1e-10];
        assert!(repair_psd(&mut ok).unwrap());
        let mut bad = vec![1.0, 2.0];
        assert!(repair_psd(&mut bad).is_err());
    }
}

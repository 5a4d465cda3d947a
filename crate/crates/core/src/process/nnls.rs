//! Nonnegative least squares and the constrained fit of `V[α]` from
//! second-moment observations at arbitrary angles.

use serde::{Deserialize, Serialize};

use super::central::{fold, reduced_row, repair_psd};
use super::moments::CentralFaceMoments;
use crate::error::{Error, Result};
use crate::geometry::regular_subdivision;
use crate::linalg::Matrix;
use crate::scalar::{cst, from_usize, Scalar};

/// Convergence target for the KKT residual, relative to `max(1, ‖ᵗA b‖∞)`.
pub const KKT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct NnlsSolution<T> {
    pub x: Vec<T>,
    /// `‖A x − b‖₂`
    pub residual_norm: T,
    /// Largest violation of the optimality conditions.
    pub kkt_residual: T,
    pub iterations: usize,
}

fn gradient<T: Scalar>(a: &Matrix<T>, at: &Matrix<T>, b: &[T], x: &[T]) -> Vec<T> {
    let ax = a.mul_vec(x);
    let r: Vec<T> = b.iter().zip(&ax).map(|(&bi, &yi)| bi - yi).collect();
    at.mul_vec(&r)
}

fn kkt<T: Scalar>(w: &[T], passive: &[bool]) -> T {
    w.iter()
        .zip(passive)
        .map(|(&wi, &p)| if p { wi.abs() } else { wi.max(T::zero()) })
        .fold(T::zero(), T::max)
}

fn residual_norm<T: Scalar>(a: &Matrix<T>, b: &[T], x: &[T]) -> T {
    a.mul_vec(x).iter().zip(b).map(|(&y, &bi)| (y - bi) * (y - bi)).sum::<T>().sqrt()
}

/// `min ‖A x − b‖₂` subject to `x ≥ 0`, by the Lawson–Hanson active-set method.
pub fn nnls<T: Scalar>(a: &Matrix<T>, b: &[T]) -> Result<NnlsSolution<T>> {
    let (rows, n) = (a.rows(), a.cols());
    if b.len() != rows {
        return Err(Error::DimensionMismatch { expected: rows, found: b.len() });
    }
    let at = a.transpose();
    let atb_scale = at.mul_vec(b).iter().map(|v| v.abs()).fold(T::one(), T::max);
    let tol = cst::<T>(KKT_TOL) * atb_scale;
    let mut x = vec![T::zero(); n];
    let mut passive = vec![false; n];
    let mut w = gradient(a, &at, b, &x);
    let max_iter = 3 * n + 10;
    let mut iterations = 0;

    while iterations < max_iter {
        let candidate = (0..n)
            .filter(|&j| !passive[j] && w[j] > tol)
            .max_by(|&i, &j| w[i].partial_cmp(&w[j]).expect("finite gradient"));
        let Some(j) = candidate else { break };
        iterations += 1;
        passive[j] = true;
        loop {
            let idx: Vec<usize> = (0..n).filter(|&k| passive[k]).collect();
            let sub = Matrix::from_fn(rows, idx.len(), |r, c| a[(r, idx[c])]);
            let zp = sub.least_squares(b)?;
            let mut z = vec![T::zero(); n];
            for (&k, &v) in idx.iter().zip(&zp) {
                z[k] = v;
            }
            if idx.iter().all(|&k| z[k] > T::zero()) {
                x = z;
                break;
            }
            let step = idx
                .iter()
                .filter(|&&k| z[k] <= T::zero())
                .map(|&k| x[k] / (x[k] - z[k]))
                .fold(T::one(), T::min);
            for k in 0..n {
                x[k] = x[k] + step * (z[k] - x[k]);
            }
            let floor = T::epsilon() * cst::<T>(16.0);
            for &k in &idx {
                if x[k] <= floor * atb_scale {
                    x[k] = T::zero();
                    passive[k] = false;
                }
            }
            if !passive.iter().any(|&p| p) {
                break;
            }
        }
        w = gradient(a, &at, b, &x);
    }
    let kkt_residual = kkt(&w, &passive);
    Ok(NnlsSolution {
        residual_norm: residual_norm(a, b, &x),
        x,
        kkt_residual,
        iterations,
    })
}

/// Result of [`central_nnls_fit`]: the moments together with fit diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct CentralNnlsFit<T> {
    pub moments: CentralFaceMoments<T>,
    /// The system actually solved, after mirroring the observation angles.
    pub design: Vec<Vec<T>>,
    pub rhs: Vec<T>,
    pub solution: NnlsSolution<T>,
}

/// Least-squares system for the palindromic unknowns `v_0, …, v_⌊n/2⌋` from
/// observations `(z, E[H(0) H(z)])` with `z ∈ [0, π/2]`.
///
/// Interior angles are mirrored to `π − z`, since the lag function is even
/// and π-periodic. At least `⌊n/2⌋ + 1` distinct angles are required.
pub fn nnls_design<T: Scalar>(observations: &[(T, T)], n: usize) -> Result<(Matrix<T>, Vec<T>)> {
    if n < 1 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let half_pi = T::FRAC_PI_2();
    let eps = cst::<T>(1e-12);
    let mut distinct: Vec<T> = Vec::new();
    let mut points: Vec<(T, T)> = Vec::new();
    for &(z, value) in observations {
        if !z.is_finite() || !value.is_finite() || z < -eps || z > half_pi + eps {
            return Err(Error::InvalidParameter(format!("observation angle outside [0, π/2]: {z}")));
        }
        if !distinct.iter().any(|&d| (d - z).abs() <= eps) {
            distinct.push(z);
        }
        points.push((z, value));
        if z > eps && z < half_pi - eps {
            points.push((T::PI() - z, value));
        }
    }
    let needed = n / 2 + 1;
    if distinct.len() < needed {
        return Err(Error::Underdetermined(format!(
            "{} distinct angles for {needed} unknowns",
            distinct.len()
        )));
    }
    let theta = regular_subdivision::<T>(n);
    let design: Vec<Vec<T>> = points.iter().map(|&(z, _)| reduced_row(n, &theta, z)).collect();
    let rhs = points.iter().map(|&(_, v)| v).collect();
    Ok((Matrix::from_rows(&design)?, rhs))
}

/// Fits palindromic `V[α] ≥ 0` to second-moment observations, see [`nnls_design`].
///
/// Nonnegativity is the only constraint in the fit; a solution whose
/// circulant is clearly indefinite is rejected afterwards as in
/// [`central_from_feret`](super::central_from_feret).
pub fn central_nnls_fit<T: Scalar>(observations: &[(T, T)], mean_feret: T, n: usize) -> Result<CentralNnlsFit<T>> {
    let (a, rhs) = nnls_design(observations, n)?;
    let solution = nnls(&a, &rhs)?;
    let mut v: Vec<T> = (0..n).map(|s| solution.x[fold(s, n)]).collect();
    let repaired = repair_psd(&mut v)?;
    let nt = from_usize::<T>(n);
    let mut moments = CentralFaceMoments::unchecked(T::PI() / (cst::<T>(2.0) * nt) * mean_feret, v);
    moments.psd_repaired = repaired;
    Ok(CentralNnlsFit { moments, design: a.to_rows(), rhs, solution })
}

/// [`central_nnls_fit`] returning only the moments.
pub fn central_nnls<T: Scalar>(observations: &[(T, T)], mean_feret: T, n: usize) -> Result<CentralFaceMoments<T>> {
    central_nnls_fit(observations, mean_feret, n).map(|f| f.moments)
}

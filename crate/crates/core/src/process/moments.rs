//! Moment containers and isotropization.

use serde::{Deserialize, Serialize};

use crate::circulant::CirculantMatrix;
use crate::error::{Error, Result};
use crate::geometry::{regular_subdivision, SymmetricConvexBody};
use crate::linalg::Matrix;
use crate::scalar::{cst, from_usize, Scalar};

/// Default number of auxiliary angles when isotropizing an analytic body.
pub const DENSE_ISOTROPIZE_GRID: usize = 1024;

/// First and second moments of `H(θᵢ)` on the regular `n`-grid.
///
/// Stationary moments are stored as full matrices with `stationary` set;
/// `second[i][j]` then depends only on `(j − i) mod n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct FeretProcessMoments<T> {
    pub n: usize,
    pub theta: Vec<T>,
    /// `E[H(θᵢ)]`
    pub mean: Vec<T>,
    /// `E[H(θᵢ) H(θⱼ)]`
    pub second: Vec<Vec<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stderr_mean: Option<Vec<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stderr_second: Option<Vec<Vec<T>>>,
    #[serde(default)]
    pub stationary: bool,
}

impl<T: Scalar> FeretProcessMoments<T> {
    pub fn new(mean: Vec<T>, second: Vec<Vec<T>>, stationary: bool) -> Result<Self> {
        let m = Self {
            n: mean.len(),
            theta: regular_subdivision(mean.len()),
            mean,
            second,
            stderr_mean: None,
            stderr_second: None,
            stationary,
        };
        m.validate()?;
        Ok(m)
    }

    /// Moments of a deterministic body: `mean = H`, `second = H ᵗH`.
    pub fn deterministic(body: &SymmetricConvexBody<T>, n: usize) -> Result<Self> {
        body.validate()?;
        let h: Vec<T> = regular_subdivision::<T>(n).iter().map(|&t| body.feret(t)).collect();
        let second = h.iter().map(|&a| h.iter().map(|&b| a * b).collect()).collect();
        Self::new(h, second, false)
    }

    /// Stationary moments from a common mean and lag vector `c_k = E[H(0) H(θ_k)]`.
    pub fn from_lags(mean: T, lags: &[T]) -> Self {
        let n = lags.len();
        Self {
            n,
            theta: regular_subdivision(n),
            mean: vec![mean; n],
            second: (0..n).map(|i| (0..n).map(|j| lags[(j + n - i) % n]).collect()).collect(),
            stderr_mean: None,
            stderr_second: None,
            stationary: true,
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_lags(T::zero(), &vec![T::zero(); n])
    }

    pub fn with_stderr(mut self, mean: Vec<T>, second: Vec<Vec<T>>) -> Self {
        self.stderr_mean = Some(mean);
        self.stderr_second = Some(second);
        self
    }

    /// Checks shapes, symmetry, nonnegative diagonal and Cauchy–Schwarz.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        let dim = |found: usize| -> Result<()> {
            if found == n {
                Ok(())
            } else {
                Err(Error::DimensionMismatch { expected: n, found })
            }
        };
        dim(self.theta.len())?;
        dim(self.mean.len())?;
        dim(self.second.len())?;
        for row in &self.second {
            dim(row.len())?;
        }
        if let Some(se) = &self.stderr_mean {
            dim(se.len())?;
        }
        if let Some(se) = &self.stderr_second {
            dim(se.len())?;
            for row in se {
                dim(row.len())?;
            }
        }
        let scale = self.second.iter().flatten().map(|v| v.abs()).fold(T::one(), T::max);
        let tol = cst::<T>(1e-9) * scale;
        for i in 0..n {
            if self.second[i][i] < -tol {
                return Err(Error::InvalidParameter(format!("negative second moment at {i}")));
            }
            for j in 0..i {
                let (a, b) = (self.second[i][j], self.second[j][i]);
                if (a - b).abs() > tol {
                    return Err(Error::InvalidParameter(format!("second moments not symmetric at ({i},{j})")));
                }
                if a * a > self.second[i][i] * self.second[j][j] + tol * scale {
                    return Err(Error::InvalidParameter(format!("Cauchy-Schwarz violated at ({i},{j})")));
                }
            }
        }
        Ok(())
    }

    /// `V[H] = (E[H(θ₁)H(θ₁)], …, E[H(θ₁)H(θ_n)])`.
    pub fn lag_vector(&self) -> Vec<T> {
        self.second[0].clone()
    }

    pub fn grand_mean(&self) -> T {
        self.mean.iter().copied().sum::<T>() / from_usize::<T>(self.n)
    }

    pub fn second_matrix(&self) -> Matrix<T> {
        Matrix::from_fn(self.n, self.n, |i, j| self.second[i][j])
    }
}

/// Projects moments onto stationary ones by averaging over the grid
/// rotations `θ ↦ θ + θ_k` (trapezoid rule on the `n`-grid).
///
/// This is a projection: applying it twice changes nothing. For moments of a
/// non-isotropic body the averaging only sees the `n` grid samples; use
/// [`isotropize_with`] when the underlying function is available.
pub fn isotropize_moments<T: Scalar>(m: &FeretProcessMoments<T>) -> Result<FeretProcessMoments<T>> {
    m.validate()?;
    let n = m.n;
    if n < 2 {
        return Err(Error::InvalidParameter(format!("isotropization needs n >= 2, got {n}")));
    }
    let nt = from_usize::<T>(n);
    let lags: Vec<T> = (0..n)
        .map(|k| (0..n).map(|i| m.second[i][(i + k) % n]).sum::<T>() / nt)
        .collect();
    let mut out = FeretProcessMoments::from_lags(m.grand_mean(), &lags);
    if let Some(se) = &m.stderr_mean {
        // averaging correlated entries: keep the mean stderr rather than shrink it
        let s = se.iter().copied().sum::<T>() / nt;
        out.stderr_mean = Some(vec![s; n]);
    }
    if let Some(se) = &m.stderr_second {
        let lag_se: Vec<T> = (0..n)
            .map(|k| (0..n).map(|i| se[i][(i + k) % n]).sum::<T>() / nt)
            .collect();
        out.stderr_second = Some((0..n).map(|i| (0..n).map(|j| lag_se[(j + n - i) % n]).collect()).collect());
    }
    Ok(out)
}

/// Stationary moments of the isotropized set, from moment functions
/// `mean(θ) = E[H(θ)]` and `second(s, t) = E[H(s) H(t)]`.
///
/// Uses a dense periodic trapezoid rule with at least `dense` angles (rounded
/// up to a multiple of `n` so that grid lags are exact).
pub fn isotropize_with<T: Scalar>(
    n: usize,
    mean: impl Fn(T) -> T,
    second: impl Fn(T, T) -> T,
    dense: usize,
) -> Result<FeretProcessMoments<T>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("isotropization needs n >= 2, got {n}")));
    }
    let per = dense.div_ceil(n).max(1);
    let m = per * n;
    let phi = regular_subdivision::<T>(m);
    let mt = from_usize::<T>(m);
    let mean_iso = phi.iter().map(|&p| mean(p)).sum::<T>() / mt;
    let lags: Vec<T> = (0..n)
        .map(|k| {
            let lag = T::PI() * from_usize::<T>(k) / from_usize::<T>(n);
            phi.iter().map(|&p| second(p, p + lag)).sum::<T>() / mt
        })
        .collect();
    Ok(FeretProcessMoments::from_lags(mean_iso, &lags))
}

/// Moments of `R_η(X)` with `η` uniform, for a deterministic body `X`.
pub fn isotropize_body<T: Scalar>(body: &SymmetricConvexBody<T>, n: usize) -> Result<FeretProcessMoments<T>> {
    body.validate()?;
    isotropize_with(n, |t| body.feret(t), |s, t| body.feret(s) * body.feret(t), DENSE_ISOTROPIZE_GRID)
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// First moment and circulant second-moment vector of a central face-length vector.
///
/// `v_alpha[k] = E[α₁ α_{1+k}]`; it is a palindrome (`v[k] = v[n−k]`) and
/// `Circ(v_alpha)` is positive semidefinite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct CentralFaceMoments<T> {
    pub n: usize,
    pub mean_alpha: T,
    pub v_alpha: Vec<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stderr_mean_alpha: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stderr_v_alpha: Option<Vec<T>>,
    /// Set when small negative eigenvalues of `Circ(v_alpha)` were clamped.
    #[serde(default, skip_serializing_if = "is_false")]
    pub psd_repaired: bool,
}

impl<T: Scalar> CentralFaceMoments<T> {
    pub fn new(mean_alpha: T, v_alpha: Vec<T>) -> Result<Self> {
        let c = Self::unchecked(mean_alpha, v_alpha);
        c.validate()?;
        Ok(c)
    }

    pub(crate) fn unchecked(mean_alpha: T, v_alpha: Vec<T>) -> Self {
        Self {
            n: v_alpha.len(),
            mean_alpha,
            v_alpha,
            stderr_mean_alpha: None,
            stderr_v_alpha: None,
            psd_repaired: false,
        }
    }

    /// Central moments of a finite mixture of face vectors, symmetrised over
    /// cyclic shifts.
    pub fn from_mixture(atoms: &[Vec<T>], weights: &[T]) -> Result<Self> {
        let n = atoms.first().map_or(0, Vec::len);
        if n == 0 || atoms.len() != weights.len() {
            return Err(Error::InvalidParameter("mixture needs matching non-empty atoms and weights".into()));
        }
        if let Some(a) = atoms.iter().find(|a| a.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: a.len() });
        }
        let nt = from_usize::<T>(n);
        let mut mean = T::zero();
        let mut v = vec![T::zero(); n];
        for (a, &w) in atoms.iter().zip(weights) {
            mean = mean + w * a.iter().copied().sum::<T>() / nt;
            for (k, vk) in v.iter_mut().enumerate() {
                let s: T = (0..n).map(|j| a[j] * a[(j + k) % n]).sum();
                *vk = *vk + w * s / nt;
            }
        }
        Self::new(mean, v)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if self.v_alpha.len() != n || n == 0 {
            return Err(Error::DimensionMismatch { expected: n, found: self.v_alpha.len() });
        }
        if !self.mean_alpha.is_finite() || self.v_alpha.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite central moments".into()));
        }
        let scale = self.v_alpha.iter().map(|v| v.abs()).fold(T::one(), T::max);
        let tol = cst::<T>(1e-9) * scale;
        if self.mean_alpha < -tol {
            return Err(Error::InvalidParameter("negative mean face length".into()));
        }
        if self.v_alpha[0] < -tol {
            return Err(Error::InvalidParameter("negative E[α₁²]".into()));
        }
        for k in 1..n {
            if (self.v_alpha[k] - self.v_alpha[n - k]).abs() > tol {
                return Err(Error::InvalidParameter(format!("v_alpha is not a palindrome at lag {k}")));
            }
        }
        let min_ev = self.circulant().spectrum().iter().map(|z| z.re).fold(T::infinity(), T::min);
        if min_ev < -tol {
            return Err(Error::NotPositiveSemidefinite {
                eigenvalue: min_ev.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(())
    }

    /// `Circ(v_alpha)`, the second-moment matrix `E[α ᵗα]`.
    pub fn circulant(&self) -> CirculantMatrix<T> {
        CirculantMatrix::new(self.v_alpha.clone()).expect("non-empty")
    }

    pub fn second_moment(&self, i: usize, j: usize) -> T {
        let n = self.n;
        self.v_alpha[(j % n + n - i % n) % n]
    }

    /// `½ Σᵢ Σⱼ E[αᵢαⱼ] |sin(θᵢ − θⱼ)|`.
    pub fn expected_area(&self) -> T {
        let th = regular_subdivision::<T>(self.n);
        let mut s = T::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                s = s + self.second_moment(i, j) * (th[i] - th[j]).sin().abs();
            }
        }
        s / cst(2.0)
    }

    /// `2 n E[α₁]`.
    pub fn expected_perimeter(&self) -> T {
        cst::<T>(2.0) * from_usize::<T>(self.n) * self.mean_alpha
    }
}

/// Moments of the face-length vector of the 0-regular approximation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct C0FaceMoments<T> {
    pub n: usize,
    /// `E[α]`
    pub mean: Vec<T>,
    /// `C[α] = E[α ᵗα]`
    pub second: Vec<Vec<T>>,
    /// `C[α] − E[α] ᵗE[α]`
    pub cov: Vec<Vec<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stderr_mean: Option<Vec<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stderr_second: Option<Vec<Vec<T>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stderr_cov: Option<Vec<Vec<T>>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn stationary_input_is_fixed() {
        let m = FeretProcessMoments::from_lags(1.3, &[2.0, 1.5, 1.2, 1.5]);
        let iso = isotropize_moments(&m).unwrap();
        for (a, b) in iso.second.iter().flatten().zip(m.second.iter().flatten()) {
            assert_relative_eq!(*a, *b, epsilon = 1e-12);
        }
        assert_relative_eq!(iso.mean[2], 1.3, epsilon = 1e-12);
    }

    #[test]
    fn isotropized_square() {
        let sq = SymmetricConvexBody::<f64>::unit_square();
        let iso = isotropize_body(&sq, 2).unwrap();
        // trapezoid on 1024 points with kinks at grid nodes
        assert_relative_eq!(iso.mean[0], 4.0 / PI, epsilon = 1e-5);
        assert_relative_eq!(iso.second[0][0], 1.0 + 2.0 / PI, epsilon = 1e-5);
        assert_relative_eq!(iso.second[0][1], 1.0 + 2.0 / PI, epsilon = 1e-5);
        assert!(iso.stationary);

        // on the coarse grid only the two samples are seen
        let coarse = isotropize_moments(&FeretProcessMoments::deterministic(&sq, 2).unwrap()).unwrap();
        assert_relative_eq!(coarse.mean[0], 1.0);
    }

    #[test]
    fn isotropize_rejects_coarse_grid() {
        let m = FeretProcessMoments::from_lags(1.0, &[1.0]);
        assert!(isotropize_moments(&m).is_err());
    }

    #[test]
    fn validation_catches_bad_moments() {
        assert!(FeretProcessMoments::new(vec![1.0, 1.0], vec![vec![1.0, 0.5], vec![0.4, 1.0]], false).is_err());
        assert!(FeretProcessMoments::new(vec![1.0, 1.0], vec![vec![1.0, 2.0], vec![2.0, 1.0]], false).is_err());
        assert!(FeretProcessMoments::new(vec![1.0], vec![vec![1.0, 2.0]], false).is_err());
    }

    #[test]
    fn central_structure() {
        assert!(CentralFaceMoments::new(1.0, vec![1.0, 1.0]).is_ok());
        assert!(CentralFaceMoments::new(1.0, vec![1.0, 0.5, 0.7]).is_err());
        // Circ((1, 2)) has eigenvalue −1
        assert!(matches!(
            CentralFaceMoments::new(1.0, vec![1.0, 2.0]),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
        let sq = CentralFaceMoments::new(1.0, vec![1.0, 1.0]).unwrap();
        assert_relative_eq!(sq.expected_area(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(sq.expected_perimeter(), 4.0);
    }

    #[test]
    fn mixture_centralization() {
        // rectangles (1,2) and (3,4) equiprobable
        let c = CentralFaceMoments::from_mixture(&[vec![1.0, 2.0], vec![3.0, 4.0]], &[0.5, 0.5]).unwrap();
        assert_relative_eq!(c.mean_alpha, 2.5);
        assert_relative_eq!(c.v_alpha[0], (0.5 * (1.0 + 4.0) + 0.5 * (9.0 + 16.0)) / 2.0);
        assert_relative_eq!(c.v_alpha[1], 0.5 * 2.0 + 0.5 * 12.0);
    }
}

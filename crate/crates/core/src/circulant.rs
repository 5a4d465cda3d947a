//! Circulant matrices, diagonalised by the discrete Fourier transform.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{cst, from_usize, Scalar};

/// Relative magnitude below which a spectral coefficient counts as zero.
pub const SINGULAR_RTOL: f64 = 1e-12;

/// Circulant matrix stored by its first column: `C[i][j] = c[(i - j) mod n]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct CirculantMatrix<T> {
    first_column: Vec<T>,
}

impl<T: Scalar> CirculantMatrix<T> {
    pub fn new(first_column: Vec<T>) -> Result<Self> {
        if first_column.is_empty() {
            return Err(Error::InvalidParameter("circulant matrix needs at least one entry".into()));
        }
        Ok(Self { first_column })
    }

    pub fn identity(n: usize) -> Self {
        let mut c = vec![T::zero(); n.max(1)];
        c[0] = T::one();
        Self { first_column: c }
    }

    pub fn n(&self) -> usize {
        self.first_column.len()
    }

    pub fn first_column(&self) -> &[T] {
        &self.first_column
    }

    pub fn entry(&self, i: usize, j: usize) -> T {
        let n = self.n();
        self.first_column[(i + n - j % n) % n]
    }

    pub fn to_dense(&self) -> Matrix<T> {
        let n = self.n();
        Matrix::from_fn(n, n, |i, j| self.entry(i, j))
    }

    /// `C · x` as a direct O(n²) sum.
    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        let n = self.n();
        assert_eq!(x.len(), n, "circulant dimension mismatch");
        (0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j) * x[j]).sum())
            .collect()
    }

    /// Eigenvalues `λ_k = Σ_j c_j e^{-2πi jk/n}`.
    pub fn spectrum(&self) -> Vec<Complex<T>> {
        let mut buf: Vec<Complex<T>> = self.first_column.iter().map(|&v| Complex::new(v, T::zero())).collect();
        FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
        buf
    }

    /// Ratio of the largest to the smallest eigenvalue magnitude.
    pub fn condition_number(&self) -> T {
        let mags: Vec<T> = self.spectrum().iter().map(|z| z.norm()).collect();
        let max = mags.iter().copied().fold(T::zero(), T::max);
        let min = mags.iter().copied().fold(T::infinity(), T::min);
        max / min
    }

    /// Solves `C x = b` by dividing in the Fourier domain.
    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        let n = self.n();
        if b.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: b.len() });
        }
        let spec = self.spectrum();
        let max = spec.iter().map(|z| z.norm()).fold(T::zero(), T::max);
        if let Some((index, z)) = spec
            .iter()
            .enumerate()
            .find(|(_, z)| z.norm() <= cst::<T>(SINGULAR_RTOL) * max || max == T::zero())
        {
            return Err(Error::SingularCirculant {
                index,
                magnitude: z.norm().to_f64().unwrap_or(f64::NAN),
            });
        }
        let mut planner = FftPlanner::new();
        let mut buf: Vec<Complex<T>> = b.iter().map(|&v| Complex::new(v, T::zero())).collect();
        planner.plan_fft_forward(n).process(&mut buf);
        for (x, l) in buf.iter_mut().zip(&spec) {
            *x = *x / *l;
        }
        planner.plan_fft_inverse(n).process(&mut buf);
        let scale = T::one() / from_usize::<T>(n);
        Ok(buf.into_iter().map(|z| z.re * scale).collect())
    }

    /// Columns of `C⁻¹`, i.e. solutions against the unit vectors.
    pub fn inverse_dense(&self) -> Result<Matrix<T>> {
        let n = self.n();
        let mut inv = Matrix::zeros(n, n);
        for j in 0..n {
            let mut e = vec![T::zero(); n];
            e[j] = T::one();
            let col = self.solve(&e)?;
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        Ok(inv)
    }
}

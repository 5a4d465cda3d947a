//! Small dense linear algebra: LU, Householder least squares, Jacobi eigenvalues.

use crate::error::{Error, Result};
use crate::scalar::{cst, Scalar};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch { expected: c, found: bad.len() });
        }
        Ok(Self { rows: r, cols: c, data: rows.iter().flatten().copied().collect() })
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(<[T]>::to_vec).collect()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols, "matrix-vector dimension mismatch");
        self.data
            .chunks(self.cols.max(1))
            .take(self.rows)
            .map(|row| row.iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self[(i, k)] * other[(k, j)]).sum()
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max)
    }

    pub fn is_symmetric(&self, tol: T) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol))
    }

    /// Solves `self · x = b` by LU with partial pivoting.
    pub fn lu_solve(&self, b: &[T]) -> Result<Vec<T>> {
        let n = self.rows;
        if self.cols != n {
            return Err(Error::DimensionMismatch { expected: n, found: self.cols });
        }
        if b.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: b.len() });
        }
        let mut a = self.clone();
        let mut x = b.to_vec();
        let scale = a.data.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let tiny = cst::<T>(1e-14) * scale.max(T::min_positive_value());
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[(i, k)].abs().partial_cmp(&a[(j, k)].abs()).unwrap())
                .unwrap();
            if a[(p, k)].abs() <= tiny {
                return Err(Error::SingularMatrix(k));
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                x.swap(k, p);
            }
            for i in (k + 1)..n {
                let f = a[(i, k)] / a[(k, k)];
                if f == T::zero() {
                    continue;
                }
                for j in k..n {
                    let v = a[(k, j)];
                    a[(i, j)] = a[(i, j)] - f * v;
                }
                x[i] = x[i] - f * x[k];
            }
        }
        for k in (0..n).rev() {
            let s: T = ((k + 1)..n).map(|j| a[(k, j)] * x[j]).sum();
            x[k] = (x[k] - s) / a[(k, k)];
        }
        Ok(x)
    }

    /// Least-squares solution of `self · x ≈ b` via Householder QR.
    pub fn least_squares(&self, b: &[T]) -> Result<Vec<T>> {
        let (m, n) = (self.rows, self.cols);
        if b.len() != m {
            return Err(Error::DimensionMismatch { expected: m, found: b.len() });
        }
        if m < n {
            return Err(Error::Underdetermined(format!("{m} equations for {n} unknowns")));
        }
        let mut a = self.clone();
        let mut y = b.to_vec();
        let scale = a.data.iter().fold(T::zero(), |s, v| s.max(v.abs()));
        for k in 0..n {
            let norm = (k..m).map(|i| a[(i, k)] * a[(i, k)]).sum::<T>().sqrt();
            if norm <= cst::<T>(1e-14) * scale.max(T::min_positive_value()) {
                return Err(Error::SingularMatrix(k));
            }
            let alpha = if a[(k, k)] > T::zero() { -norm } else { norm };
            let mut v: Vec<T> = (k..m).map(|i| a[(i, k)]).collect();
            v[0] = v[0] - alpha;
            let vnorm2: T = v.iter().map(|&t| t * t).sum();
            if vnorm2 == T::zero() {
                continue;
            }
            for j in k..n {
                let d: T = (k..m).map(|i| v[i - k] * a[(i, j)]).sum();
                let f = cst::<T>(2.0) * d / vnorm2;
                for i in k..m {
                    a[(i, j)] = a[(i, j)] - f * v[i - k];
                }
            }
            let d: T = (k..m).map(|i| v[i - k] * y[i]).sum();
            let f = cst::<T>(2.0) * d / vnorm2;
            for i in k..m {
                y[i] = y[i] - f * v[i - k];
            }
        }
        let mut x = vec![T::zero(); n];
        for k in (0..n).rev() {
            let s: T = ((k + 1)..n).map(|j| a[(k, j)] * x[j]).sum();
            x[k] = (y[k] - s) / a[(k, k)];
        }
        Ok(x)
    }

    /// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
    pub fn symmetric_eigenvalues(&self) -> Vec<T> {
        let n = self.rows;
        let mut a = self.clone();
        let eps = T::epsilon();
        for _sweep in 0..100 {
            let off: T = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[(i, j)] * a[(i, j)])
                .sum();
            let total: T = a.data.iter().map(|&v| v * v).sum();
            if off <= eps * eps * total {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    if apq == T::zero() {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (cst::<T>(2.0) * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                    let c = T::one() / (t * t + T::one()).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut ev: Vec<T> = (0..n).map(|i| a[(i, i)]).collect();
        ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
        ev
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

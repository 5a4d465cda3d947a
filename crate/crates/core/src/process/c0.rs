//! Moments of the random 0-regular approximation.

use super::moments::{C0FaceMoments, FeretProcessMoments};
use crate::approx::{feret_matrix, hausdorff_bound};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Face-length moments of the 0-regular approximation of a random body with
/// Feret-process moments `m`: `E[α] = F⁻¹E[H]`, `C[α] = F⁻¹ C[H] ᵗF⁻¹`.
pub fn c0_random_moments<T: Scalar>(m: &FeretProcessMoments<T>, n: usize) -> Result<C0FaceMoments<T>> {
    if m.n != n {
        return Err(Error::DimensionMismatch { expected: n, found: m.n });
    }
    m.validate()?;
    if n < 2 {
        return Err(Error::InvalidParameter(format!("approximation order must exceed 1, got {n}")));
    }
    let finv = feret_matrix::<T>(n).inverse_dense()?;
    let mean = finv.mul_vec(&m.mean);
    let second = finv.mul(&m.second_matrix()).mul(&finv.transpose()).to_rows();
    // F⁻¹ is symmetric, so symmetrise away rounding
    let second: Vec<Vec<T>> = (0..n)
        .map(|i| (0..n).map(|j| (second[i][j] + second[j][i]) / (T::one() + T::one())).collect())
        .collect();
    let cov = (0..n)
        .map(|i| (0..n).map(|j| second[i][j] - mean[i] * mean[j]).collect())
        .collect();

    let stderr_mean = m.stderr_mean.as_ref().map(|se| {
        (0..n)
            .map(|i| (0..n).map(|k| (finv[(i, k)] * se[k]).powi(2)).sum::<T>().sqrt())
            .collect::<Vec<T>>()
    });
    let stderr_second = m.stderr_second.as_ref().map(|se| {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut s = T::zero();
                        for k in 0..n {
                            for l in 0..n {
                                s = s + (finv[(i, k)] * finv[(j, l)] * se[k][l]).powi(2);
                            }
                        }
                        s.sqrt()
                    })
                    .collect::<Vec<T>>()
            })
            .collect::<Vec<_>>()
    });
    let stderr_cov = match (&stderr_mean, &stderr_second) {
        (Some(sm), Some(ss)) => Some(
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            (ss[i][j].powi(2) + (mean[j] * sm[i]).powi(2) + (mean[i] * sm[j]).powi(2)).sqrt()
                        })
                        .collect()
                })
                .collect(),
        ),
        _ => None,
    };
    Ok(C0FaceMoments { n, mean, second, cov, stderr_mean, stderr_second, stderr_cov })
}

/// Radius `a` with `P(d_H(X, Z) > a) ≤ ε` for the random 0-regular
/// approximation `Z`, by Markov's inequality on the deterministic bound.
pub fn confidence_bound<T: Scalar>(epsilon: T, n: usize, mean_diam: T) -> Result<T> {
    if !(epsilon > T::zero() && epsilon <= T::one()) {
        return Err(Error::InvalidParameter(format!("confidence level must lie in (0, 1], got {epsilon}")));
    }
    if n < 1 || mean_diam.is_nan() || mean_diam < T::zero() {
        return Err(Error::InvalidParameter("invalid order or mean diameter".into()));
    }
    Ok(hausdorff_bound(n, mean_diam) / epsilon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::c0_approximate;
    use crate::geometry::SymmetricConvexBody;
    use crate::process::{forward_zonotope_moments, CentralFaceMoments};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn isotropic_square() {
        let m = forward_zonotope_moments(&CentralFaceMoments::new(1.0, vec![1.0, 1.0]).unwrap()).unwrap();
        let c = c0_random_moments(&m, 2).unwrap();
        let cov = (PI * PI + 2.0 * PI - 16.0) / (PI * PI);
        for i in 0..2 {
            assert_relative_eq!(c.mean[i], 4.0 / PI, epsilon = 1e-12);
            for j in 0..2 {
                assert_relative_eq!(c.second[i][j], (PI + 2.0) / PI, epsilon = 1e-12);
                assert_relative_eq!(c.cov[i][j], cov, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn deterministic_body_has_no_covariance() {
        let e = SymmetricConvexBody::<f64>::ellipse(2.0, 1.0, 0.4).unwrap();
        let m = FeretProcessMoments::deterministic(&e, 7).unwrap();
        let c = c0_random_moments(&m, 7).unwrap();
        let z = c0_approximate(&e, 7).unwrap();
        for i in 0..7 {
            assert_relative_eq!(c.mean[i], z.alpha()[i], epsilon = 1e-12);
            for j in 0..7 {
                assert!(c.cov[i][j].abs() < 1e-10);
            }
        }
        let sq = FeretProcessMoments::deterministic(&SymmetricConvexBody::<f64>::unit_square(), 2).unwrap();
        let c = c0_random_moments(&sq, 2).unwrap();
        assert_eq!(c.mean, vec![1.0, 1.0]);
        assert!(c.cov.iter().flatten().all(|v| v.abs() <= 1e-12));
    }

    #[test]
    fn zero_process_and_mismatch() {
        let c = c0_random_moments(&FeretProcessMoments::<f64>::zeros(4), 4).unwrap();
        assert!(c.second.iter().flatten().all(|&v| v == 0.0));
        assert!(matches!(
            c0_random_moments(&FeretProcessMoments::<f64>::zeros(4), 5),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn confidence_fixtures() {
        assert_relative_eq!(confidence_bound(1.0, 2, 1.0).unwrap(), 6.242641, epsilon = 1e-6);
        let expected = (6.0 + 2.0 * 2f64.sqrt()) / 0.1 * (PI / 32.0).sin();
        assert_relative_eq!(confidence_bound(0.1, 16, 1.0).unwrap(), expected, epsilon = 1e-12);
        assert!((expected - 8.653).abs() < 1e-3);
        assert!(confidence_bound(1.0, 100_000, 1.0).unwrap() < 1e-3);
        assert!(confidence_bound(0.0, 2, 1.0).is_err());
        assert!(confidence_bound(1.5, 2, 1.0).is_err());
    }
}

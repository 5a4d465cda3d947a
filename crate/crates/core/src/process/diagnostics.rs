//! Diagnostics on estimated Feret-process moments.

use serde::{Deserialize, Serialize};

use super::moments::FeretProcessMoments;
use crate::scalar::{from_usize, Scalar};

/// Absolute slack, relative to the moment scale, added to the 3σ band.
const ABS_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationarityReport {
    /// Largest `|E[H(θᵢ)] − mean|`.
    pub mean_deviation: f64,
    /// Largest deviation of `second` from its circulant projection.
    pub second_deviation: f64,
    /// Largest deviation in units of its standard error (0 if none given).
    pub max_z_score: f64,
    pub passed: bool,
}

/// Compares the mean and second moments with their stationary projections.
///
/// An entry passes when its deviation is within three standard errors plus a
/// small absolute slack; without standard errors only the slack applies.
pub fn stationarity_diagnostic<T: Scalar>(m: &FeretProcessMoments<T>) -> StationarityReport {
    let n = m.n;
    let f = |v: T| v.to_f64().unwrap_or(f64::NAN);
    let finite = m.mean.iter().chain(m.second.iter().flatten()).all(|v| v.is_finite());
    if n == 0 || !finite {
        return StationarityReport {
            mean_deviation: f64::NAN,
            second_deviation: f64::NAN,
            max_z_score: f64::NAN,
            passed: false,
        };
    }
    let scale = m.second.iter().flatten().map(|&v| f(v).abs()).fold(1.0, f64::max).sqrt();
    let slack_mean = ABS_SLACK * scale;
    let slack_second = ABS_SLACK * scale * scale;
    let nt = from_usize::<T>(n);
    let avg = f(m.grand_mean());
    let lags: Vec<f64> = (0..n)
        .map(|k| f((0..n).map(|i| m.second[i][(i + k) % n]).sum::<T>() / nt))
        .collect();

    let (mut dm, mut ds, mut z, mut passed) = (0.0f64, 0.0f64, 0.0f64, true);
    for i in 0..n {
        let d = (f(m.mean[i]) - avg).abs();
        let se = m.stderr_mean.as_ref().map_or(0.0, |s| f(s[i]));
        dm = dm.max(d);
        if se > 0.0 {
            z = z.max(d / se);
        }
        passed &= d <= 3.0 * se + slack_mean;
        for j in 0..n {
            let d = (f(m.second[i][j]) - lags[(j + n - i) % n]).abs();
            let se = m.stderr_second.as_ref().map_or(0.0, |s| f(s[i][j]));
            ds = ds.max(d);
            if se > 0.0 {
                z = z.max(d / se);
            }
            passed &= d <= 3.0 * se + slack_second;
        }
    }
    StationarityReport { mean_deviation: dm, second_deviation: ds, max_z_score: z, passed }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExistenceReport {
    /// All moments and standard errors are finite.
    pub finite: bool,
    /// `E[U²] ≈ ∫∫ E[H(s) H(t)] ds dt` by the rectangle rule on the grid.
    pub expected_perimeter_squared: f64,
    /// Finite second moments of `H` are equivalent to square-integrable face lengths.
    pub square_integrable: bool,
    pub passed: bool,
}

pub fn existence_check<T: Scalar>(m: &FeretProcessMoments<T>) -> ExistenceReport {
    let values = m.mean.iter().chain(m.second.iter().flatten());
    let se_mean = m.stderr_mean.iter().flatten();
    let se_second = m.stderr_second.iter().flatten().flatten();
    let finite = m.n > 0 && values.chain(se_mean).chain(se_second).all(|v| v.is_finite());
    let eu2 = if finite {
        let total: f64 = m.second.iter().flatten().map(|v| v.to_f64().unwrap_or(f64::NAN)).sum();
        let h = std::f64::consts::PI / m.n as f64;
        total * h * h
    } else {
        f64::NAN
    };
    let ok = finite && eu2.is_finite();
    ExistenceReport { finite, expected_perimeter_squared: eu2, square_integrable: ok, passed: ok }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SymmetricConvexBody;
    use crate::process::{forward_zonotope_moments, isotropize_body, CentralFaceMoments};
    use approx::assert_relative_eq;

    #[test]
    fn stationarity_fixtures() {
        let e = SymmetricConvexBody::ellipse(3.0, 1.0, 0.2).unwrap();
        assert!(stationarity_diagnostic(&isotropize_body(&e, 8).unwrap()).passed);
        assert!(!stationarity_diagnostic(&FeretProcessMoments::deterministic(&e, 8).unwrap()).passed);
        assert!(stationarity_diagnostic(&FeretProcessMoments::from_lags(2.0, &[4.0; 5])).passed);
    }

    #[test]
    fn stderr_widens_band() {
        let mut m = FeretProcessMoments::from_lags(1.0, &[1.0, 0.8, 0.8]);
        m.mean[1] = 1.01;
        assert!(!stationarity_diagnostic(&m).passed);
        let m = m.clone().with_stderr(vec![0.01; 3], vec![vec![0.01; 3]; 3]);
        let r = stationarity_diagnostic(&m);
        assert!(r.passed);
        assert!(r.max_z_score > 0.5);
    }

    #[test]
    fn existence_fixtures() {
        let sq = CentralFaceMoments::from_mixture(&[{
            let mut a = vec![0.0; 64];
            a[0] = 1.0;
            a[32] = 1.0;
            a
        }], &[1.0])
        .unwrap();
        let r = existence_check(&forward_zonotope_moments(&sq).unwrap());
        assert!(r.passed);
        assert_relative_eq!(r.expected_perimeter_squared, 16.0, epsilon = 1e-2);
        let mut bad = FeretProcessMoments::from_lags(1.0, &[1.0, 1.0]);
        bad.second[0][1] = f64::NAN;
        assert!(!existence_check(&bad).passed);
    }
}

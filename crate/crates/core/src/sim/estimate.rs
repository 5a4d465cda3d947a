//! Monte-Carlo estimation of Feret-process moments.
//!
//! Samples are processed in fixed blocks; block statistics are merged in a
//! fixed pairwise order, so results do not depend on the number of workers.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::model::{sample_body, RandomShapeModel};
use crate::error::{Error, Result};
use crate::geometry::regular_subdivision;
use crate::process::{central_from_feret, isotropize_moments, CentralFaceMoments, FeretProcessMoments};
use crate::scalar::{cst, Scalar};

/// Samples per reduction block.
pub const BLOCK: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct EstimationResult<T> {
    pub moments: FeretProcessMoments<T>,
    pub sample_count: usize,
    pub seed: u64,
}

/// Running mean and centred sum of squares for each tracked variable:
/// `H(θᵢ)` followed by `H(θᵢ)H(θⱼ)` for `i ≤ j`.
#[derive(Debug, Clone)]
struct Welford {
    count: f64,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl Welford {
    fn new(vars: usize) -> Self {
        Self { count: 0.0, mean: vec![0.0; vars], m2: vec![0.0; vars] }
    }

    fn push(&mut self, h: &[f64]) {
        self.count += 1.0;
        let c = self.count;
        let n = h.len();
        let mut k = 0;
        let mut update = |x: f64, k: usize| {
            let d = x - self.mean[k];
            self.mean[k] += d / c;
            self.m2[k] += d * (x - self.mean[k]);
        };
        for &x in h {
            update(x, k);
            k += 1;
        }
        for i in 0..n {
            for j in i..n {
                update(h[i] * h[j], k);
                k += 1;
            }
        }
    }

    fn merge(a: Self, b: Self) -> Self {
        if a.count == 0.0 {
            return b;
        }
        if b.count == 0.0 {
            return a;
        }
        let count = a.count + b.count;
        let w = b.count / count;
        let cross = a.count * b.count / count;
        let mut out = a;
        for k in 0..out.mean.len() {
            let d = b.mean[k] - out.mean[k];
            out.mean[k] += d * w;
            out.m2[k] += b.m2[k] + d * d * cross;
        }
        out.count = count;
        out
    }
}

fn pairwise_merge(mut parts: Vec<Welford>) -> Option<Welford> {
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(a) = it.next() {
            next.push(match it.next() {
                Some(b) => Welford::merge(a, b),
                None => a,
            });
        }
        parts = next;
    }
    parts.pop()
}

fn finish<T: Scalar>(acc: Welford, n: usize, stationary: bool) -> Result<FeretProcessMoments<T>> {
    let total = acc.count;
    let se = |k: usize| {
        let var = if total > 1.0 { acc.m2[k].max(0.0) / (total - 1.0) } else { 0.0 };
        cst::<T>((var / total).sqrt())
    };
    let mean: Vec<T> = (0..n).map(|i| cst(acc.mean[i])).collect();
    let stderr_mean: Vec<T> = (0..n).map(se).collect();
    let mut second = vec![vec![T::zero(); n]; n];
    let mut stderr_second = vec![vec![T::zero(); n]; n];
    let mut k = n;
    for i in 0..n {
        for j in i..n {
            second[i][j] = cst(acc.mean[k]);
            second[j][i] = second[i][j];
            stderr_second[i][j] = se(k);
            stderr_second[j][i] = stderr_second[i][j];
            k += 1;
        }
    }
    let m = FeretProcessMoments {
        n,
        theta: regular_subdivision(n),
        mean,
        second,
        stderr_mean: Some(stderr_mean),
        stderr_second: Some(stderr_second),
        stationary,
    };
    m.validate()?;
    Ok(m)
}

fn require_samples(samples: usize, n: usize) -> Result<()> {
    if samples < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 samples, got {samples}")));
    }
    if n < 1 {
        return Err(Error::InvalidParameter("grid size must be positive".into()));
    }
    Ok(())
}

fn feret_row<T: Scalar>(
    model: &RandomShapeModel,
    theta: &[T],
    index: u64,
    seed: u64,
    force_rotation: bool,
) -> Result<Vec<T>> {
    let body = sample_body::<T>(model, index, seed, force_rotation)?;
    Ok(theta.iter().map(|&t| body.feret(t)).collect())
}

fn estimate_inner<T: Scalar>(
    model: &RandomShapeModel,
    n: usize,
    samples: usize,
    seed: u64,
    force_rotation: bool,
) -> Result<EstimationResult<T>> {
    require_samples(samples, n)?;
    model.validate()?;
    let theta = regular_subdivision::<T>(n);
    let vars = n + n * (n + 1) / 2;
    let blocks: Vec<Welford> = (0..samples.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            let mut acc = Welford::new(vars);
            let mut h = vec![0.0; n];
            for s in b * BLOCK..((b + 1) * BLOCK).min(samples) {
                let row = feret_row(model, &theta, s as u64, seed, force_rotation)?;
                for (dst, v) in h.iter_mut().zip(row) {
                    *dst = v.to_f64().unwrap_or(f64::NAN);
                }
                acc.push(&h);
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let acc = pairwise_merge(blocks).expect("at least one block");
    let stationary = model.is_isotropic() || force_rotation;
    Ok(EstimationResult { moments: finish(acc, n, stationary)?, sample_count: samples, seed })
}

/// Monte-Carlo estimates of `E[H(θᵢ)]` and `E[H(θᵢ)H(θⱼ)]` with standard
/// errors, from samples `0..samples` of `model`.
///
/// Statistics are accumulated in `f64` whatever `T` is. The result is
/// bit-identical for any size of the rayon pool.
pub fn estimate_process_moments<T: Scalar>(
    model: &RandomShapeModel,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<EstimationResult<T>> {
    estimate_inner(model, n, samples, seed, false)
}

/// Feret diameters of samples `0..samples` on the regular `n`-grid, one row per sample.
pub fn sample_feret_table<T: Scalar>(
    model: &RandomShapeModel,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<Vec<Vec<T>>> {
    model.validate()?;
    let theta = regular_subdivision::<T>(n);
    (0..samples)
        .into_par_iter()
        .map(|s| feret_row(model, &theta, s as u64, seed, false))
        .collect()
}

/// Moments with standard errors from observed Feret rows on the regular grid.
pub fn moments_from_rows<T: Scalar>(rows: &[Vec<T>], stationary: bool) -> Result<FeretProcessMoments<T>> {
    let n = rows.first().map_or(0, Vec::len);
    require_samples(rows.len(), n)?;
    let vars = n + n * (n + 1) / 2;
    let blocks: Vec<Welford> = rows
        .chunks(BLOCK)
        .map(|chunk| {
            let mut acc = Welford::new(vars);
            for r in chunk {
                if r.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, found: r.len() });
                }
                let h: Vec<f64> = r.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect();
                acc.push(&h);
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    finish(pairwise_merge(blocks).expect("at least one block"), n, stationary)
}

/// Central face-length moments of the isotropized model, estimated by simulation.
///
/// Non-isotropic models are isotropized by composing each sample with an
/// independent uniform rotation. The estimated moments are projected onto
/// stationary ones before inversion.
pub fn pipeline_estimate<T: Scalar>(
    model: &RandomShapeModel,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<CentralFaceMoments<T>> {
    let est = estimate_inner::<T>(model, n, samples, seed, !model.is_isotropic())?;
    let m = isotropize_moments(&est.moments)?;
    central_from_feret(&m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::VectorDist;
    use crate::spec::ShapeSpec;
    use approx::assert_relative_eq;

    fn square_model() -> RandomShapeModel {
        RandomShapeModel::IsotropicRectangle { sides: VectorDist::Fixed { value: vec![1.0, 1.0] } }
    }

    #[test]
    fn welford_matches_two_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 / 7.0).collect();
        let mut parts = Vec::new();
        for c in xs.chunks(64) {
            let mut w = Welford::new(2);
            for &x in c {
                w.push(&[x]);
            }
            parts.push(w);
        }
        let w = pairwise_merge(parts).unwrap();
        let mean = xs.iter().sum::<f64>() / 1000.0;
        let m2: f64 = xs.iter().map(|x| (x - mean).powi(2)).sum();
        assert_relative_eq!(w.mean[0], mean, epsilon = 1e-12);
        assert_relative_eq!(w.m2[0], m2, max_relative = 1e-12);
    }

    #[test]
    fn deterministic_square_has_zero_stderr() {
        let m = RandomShapeModel::DeterministicBody { body: ShapeSpec::Square { side: 1.0 } };
        let r = estimate_process_moments::<f64>(&m, 2, 1000, 3).unwrap();
        assert_eq!(r.moments.mean, vec![1.0, 1.0]);
        assert!(r.moments.stderr_mean.unwrap().iter().all(|&s| s == 0.0));
        assert!(!r.moments.stationary);
    }

    #[test]
    fn rejects_single_sample() {
        assert!(estimate_process_moments::<f64>(&square_model(), 2, 1, 0).is_err());
    }

    #[test]
    fn isotropic_square_mean() {
        let r = estimate_process_moments::<f64>(&square_model(), 2, 20_000, 11).unwrap();
        let se = r.moments.stderr_mean.as_ref().unwrap();
        for (m, s) in r.moments.mean.iter().zip(se) {
            assert!((m - 4.0 / std::f64::consts::PI).abs() <= 3.0 * s);
        }
    }

    #[test]
    fn rows_and_simulation_agree() {
        let rows = sample_feret_table::<f64>(&square_model(), 3, 700, 9).unwrap();
        let a = moments_from_rows(&rows, true).unwrap();
        let b = estimate_process_moments::<f64>(&square_model(), 3, 700, 9).unwrap().moments;
        assert_eq!(a, b);
    }

    #[test]
    fn deterministic_disk_pipeline() {
        let m = RandomShapeModel::DeterministicBody { body: ShapeSpec::Disk { r: 1.0 } };
        let c = pipeline_estimate::<f64>(&m, 3, 500, 1).unwrap();
        assert_relative_eq!(c.mean_alpha, std::f64::consts::PI / 3.0, epsilon = 1e-12);
        assert_relative_eq!(c.v_alpha[0], c.v_alpha[1], epsilon = 1e-10);
    }
}

//! Zonotope approximation of symmetric convex bodies from Feret diameters.
//!
//! The 0-regular approximation interpolates `H` on the regular subdivision
//! by solving the circulant system `F α = H`, `F = (|sin(θᵢ − θⱼ)|)`. The
//! rotational approximation additionally picks the rotation offset that
//! minimises the Hausdorff distance.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circulant::CirculantMatrix;
use crate::error::{Error, Result};
use crate::geometry::golden::golden_section_min;
use crate::geometry::measure::{diameter, half_sup_gap, regular_subdivision, SupNorm};
use crate::geometry::SymmetricConvexBody;
use crate::scalar::{cst, from_usize, Scalar};
use crate::zonotope::Zonotope;

/// Slack for negative face lengths, relative to `max(1, max H)`.
pub const NEGATIVE_ALPHA_TOL: f64 = 1e-9;

/// Slack for containment tests on Feret diameters.
pub const CONTAINMENT_TOL: f64 = 1e-9;

/// `F` with first column `|sin(iπ/n)|`.
pub fn feret_matrix<T: Scalar>(n: usize) -> CirculantMatrix<T> {
    let col = regular_subdivision::<T>(n).into_iter().map(|t| t.sin().abs()).collect();
    CirculantMatrix::new(col).expect("n >= 1")
}

fn require_n(n: usize) -> Result<()> {
    if n <= 1 {
        Err(Error::InvalidParameter(format!("approximation order must exceed 1, got {n}")))
    } else {
        Ok(())
    }
}

/// Face lengths interpolating `samples` on the regular grid, with tiny
/// negatives clamped to zero.
pub fn face_lengths_from_feret<T: Scalar>(samples: &[T]) -> Result<Vec<T>> {
    let n = samples.len();
    require_n(n)?;
    let mut alpha = feret_matrix::<T>(n).solve(samples)?;
    let scale = samples.iter().map(|h| h.abs()).fold(T::one(), T::max);
    let tol = cst::<T>(NEGATIVE_ALPHA_TOL) * scale;
    for (index, a) in alpha.iter_mut().enumerate() {
        if *a < -tol || !a.is_finite() {
            return Err(Error::NegativeFaceLength {
                index,
                value: a.to_f64().unwrap_or(f64::NAN),
            });
        }
        if *a < T::zero() {
            *a = T::zero();
        }
    }
    Ok(alpha)
}

/// 0-regular approximation of `R_{-t}(X)`, rotated back by `t`.
///
/// The result interpolates `H_X` at `θᵢ + t` and contains `X`.
pub fn c0_approximate_at<T: Scalar>(x: &SymmetricConvexBody<T>, n: usize, t: T) -> Result<Zonotope<T>> {
    require_n(n)?;
    let samples: Vec<T> = regular_subdivision::<T>(n).iter().map(|&th| x.feret(th + t)).collect();
    Zonotope::regular(face_lengths_from_feret(&samples)?, t)
}

/// 0-regular approximation: the unique zonotope on the regular `n`-grid
/// whose Feret diameter matches `X` at every grid direction.
pub fn c0_approximate<T: Scalar>(x: &SymmetricConvexBody<T>, n: usize) -> Result<Zonotope<T>> {
    x.validate()?;
    c0_approximate_at(x, n, T::zero())
}

/// Upper bound `(6 + 2√2) sin(π/2n) · diam` on the 0-regular approximation error.
pub fn hausdorff_bound<T: Scalar>(n: usize, diam: T) -> T {
    let c = cst::<T>(6.0) + cst::<T>(2.0) * cst::<T>(2.0).sqrt();
    c * (T::PI() / (cst::<T>(2.0) * from_usize::<T>(n))).sin() * diam
}

/// Hausdorff distance between a body and a zonotope.
pub fn distance_to_zonotope<T: Scalar>(x: &SymmetricConvexBody<T>, z: &Zonotope<T>, sup: SupNorm) -> T {
    half_sup_gap(|t| x.feret(t), |t| z.feret(t), sup)
}

/// Whether `z` contains `x`, judged on the face directions of `z` and a
/// 1024-point grid.
pub fn contains<T: Scalar>(z: &Zonotope<T>, x: &SymmetricConvexBody<T>) -> bool {
    let tol = cst::<T>(CONTAINMENT_TOL);
    let faces_ok = z
        .theta()
        .iter()
        .map(|&th| th + z.t())
        .all(|a| x.feret(a) <= z.feret(a) + tol);
    faces_ok
        && regular_subdivision::<T>(1024)
            .into_iter()
            .all(|a| x.feret(a) <= z.feret(a) + tol)
}

/// Tuning for [`cinf_approximate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CinfConfig {
    /// Grid points over `[0, π/n)`; assumed to bracket the global minimum.
    pub grid: usize,
    /// Final bracket width of the golden-section refinement in `t`.
    pub tol: f64,
    pub sup: SupNorm,
}

impl Default for CinfConfig {
    fn default() -> Self {
        Self { grid: 256, tol: 1e-6, sup: SupNorm::default() }
    }
}

/// Result of the rotational approximation.
#[derive(Debug, Clone, PartialEq)]
pub struct CinfApproximation<T> {
    /// Optimal rotation offset in `[0, π/n)`.
    pub tau: T,
    /// Regular zonotope with offset `tau`.
    pub zonotope: Zonotope<T>,
    /// Hausdorff distance between the body and `zonotope`.
    pub objective: T,
}

/// Rotational approximation with the default configuration.
pub fn cinf_approximate<T: Scalar>(x: &SymmetricConvexBody<T>, n: usize) -> Result<CinfApproximation<T>> {
    cinf_approximate_with(x, n, CinfConfig::default())
}

/// Minimises `t ↦ d_H(X, R_t(X₀(t)))` over `t ∈ [0, π/n)`.
///
/// The grid scan runs in parallel; the minimum is reduced by value with
/// ties going to the smallest `t`, so the result does not depend on the
/// number of workers.
pub fn cinf_approximate_with<T: Scalar>(
    x: &SymmetricConvexBody<T>,
    n: usize,
    cfg: CinfConfig,
) -> Result<CinfApproximation<T>> {
    require_n(n)?;
    x.validate()?;
    let period = T::PI() / from_usize::<T>(n);
    let grid = cfg.grid.max(2);
    let step = period / from_usize::<T>(grid);
    let objective = |t: T| -> Result<T> {
        let z = c0_approximate_at(x, n, t)?;
        Ok(distance_to_zonotope(x, &z, cfg.sup))
    };

    let values: Vec<T> = (0..grid)
        .into_par_iter()
        .map(|k| objective(step * from_usize::<T>(k)))
        .collect::<Result<_>>()?;
    let (best_k, best) = values
        .iter()
        .enumerate()
        .fold((0, values[0]), |(bk, bv), (k, &v)| if v < bv { (k, v) } else { (bk, bv) });

    let center = step * from_usize::<T>(best_k);
    let mut failure = None;
    let (t_ref, v_ref) = golden_section_min(
        |t| match objective(t) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                T::infinity()
            }
        },
        center - step,
        center + step,
        cst(cfg.tol),
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let raw_tau = if v_ref < best { t_ref } else { center };
    let mut tau = raw_tau - (raw_tau / period).floor() * period;
    if tau >= period {
        tau = T::zero();
    }
    let zonotope = c0_approximate_at(x, n, tau)?;
    let objective = distance_to_zonotope(x, &zonotope, cfg.sup);
    Ok(CinfApproximation { tau, zonotope, objective })
}

/// Which approximation to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ApproximationMode {
    C0,
    Cinf,
}

/// Serializable summary of an approximation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproximationReport {
    pub n: usize,
    pub mode: ApproximationMode,
    pub tau: f64,
    pub alpha: Vec<f64>,
    pub d_hausdorff: f64,
    pub bound: f64,
    pub vertices: Vec<[f64; 2]>,
}

/// Builds the approximation of `x` and measures it against the error bound.
pub fn approximation_report<T: Scalar>(
    x: &SymmetricConvexBody<T>,
    n: usize,
    mode: ApproximationMode,
) -> Result<ApproximationReport> {
    let (tau, z, d) = match mode {
        ApproximationMode::C0 => {
            let z = c0_approximate(x, n)?;
            let d = distance_to_zonotope(x, &z, SupNorm::default());
            (T::zero(), z, d)
        }
        ApproximationMode::Cinf => {
            let r = cinf_approximate(x, n)?;
            (r.tau, r.zonotope, r.objective)
        }
    };
    let diam = diameter(x)?;
    let f = |v: T| v.to_f64().unwrap_or(f64::NAN);
    Ok(ApproximationReport {
        n,
        mode,
        tau: f(tau),
        alpha: z.alpha().iter().map(|&a| f(a)).collect(),
        d_hausdorff: f(d),
        bound: f(hausdorff_bound(n, diam)),
        vertices: z.vertices().vertices().iter().map(|p| [f(p.x), f(p.y)]).collect(),
    })
}

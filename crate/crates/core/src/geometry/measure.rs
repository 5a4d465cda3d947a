//! Functionals of Feret diameters: sup-norm distances, Cauchy perimeter,
//! mixed areas, and a consistency check for sampled diameters.

use serde::{Deserialize, Serialize};

use crate::approx::feret_matrix;
use crate::error::{Error, Result};
use crate::geometry::body::SymmetricConvexBody;
use crate::geometry::golden::golden_section_max;
use crate::geometry::polygon::ConvexPolygon;
use crate::scalar::{cst, from_usize, Scalar};
use crate::zonotope::Zonotope;

/// Anything with a Feret diameter function.
pub trait FeretDiameter<T: Scalar> {
    fn feret_at(&self, theta: T) -> T;
}

impl<T: Scalar> FeretDiameter<T> for SymmetricConvexBody<T> {
    fn feret_at(&self, theta: T) -> T {
        self.feret(theta)
    }
}

impl<T: Scalar> FeretDiameter<T> for ConvexPolygon<T> {
    fn feret_at(&self, theta: T) -> T {
        self.feret(theta)
    }
}

impl<T: Scalar> FeretDiameter<T> for Zonotope<T> {
    fn feret_at(&self, theta: T) -> T {
        self.feret(theta)
    }
}

/// Supremum of a π-periodic function: uniform grid over `[0, π)`, then
/// golden-section refinement between the neighbours of the best grid point.
///
/// Before refinement the error is at most `L·π/grid` for an `L`-Lipschitz
/// function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupNorm {
    pub grid: usize,
    pub tol: f64,
}

impl Default for SupNorm {
    fn default() -> Self {
        Self { grid: 4096, tol: 1e-8 }
    }
}

impl SupNorm {
    /// Returns `(argmax, max)`.
    pub fn sup<T: Scalar, F: Fn(T) -> T>(&self, f: F) -> (T, T) {
        let m = self.grid.max(3);
        let step = T::PI() / from_usize::<T>(m);
        let (mut best_k, mut best) = (0, f(T::zero()));
        for k in 1..m {
            let v = f(step * from_usize::<T>(k));
            if v > best {
                best = v;
                best_k = k;
            }
        }
        let center = step * from_usize::<T>(best_k);
        let (x, v) = golden_section_max(&f, center - step, center + step, cst(self.tol));
        if v > best {
            (x, v)
        } else {
            (center, best)
        }
    }

    /// Grid-only error bound for a function with the given Lipschitz constant.
    pub fn grid_error<T: Scalar>(&self, lipschitz: T) -> T {
        lipschitz * T::PI() / from_usize::<T>(self.grid.max(3))
    }
}

/// `½ sup_θ |f(θ) − g(θ)|`, the Hausdorff distance between two symmetric
/// bodies with Feret diameters `f` and `g`.
pub fn half_sup_gap<T: Scalar>(f: impl Fn(T) -> T, g: impl Fn(T) -> T, cfg: SupNorm) -> T {
    cfg.sup(|th| (f(th) - g(th)).abs()).1 / cst(2.0)
}

/// Hausdorff distance between two centred symmetric bodies.
pub fn hausdorff_distance<T: Scalar>(x: &SymmetricConvexBody<T>, y: &SymmetricConvexBody<T>) -> Result<T> {
    x.validate()?;
    y.validate()?;
    Ok(half_sup_gap(|t| x.feret(t), |t| y.feret(t), SupNorm::default()))
}

/// `sup_θ H(θ)`.
pub fn diameter<T: Scalar>(body: &SymmetricConvexBody<T>) -> Result<T> {
    body.validate()?;
    Ok(SupNorm::default().sup(|t| body.feret(t)).1)
}

/// Composite Simpson rule with `panels` (rounded up to even) subintervals.
pub fn simpson<T: Scalar>(f: impl Fn(T) -> T, a: T, b: T, panels: usize) -> T {
    let n = panels.max(2) + panels % 2;
    let h = (b - a) / from_usize::<T>(n);
    let mut s = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { cst::<T>(4.0) } else { cst::<T>(2.0) };
        s = s + w * f(a + h * from_usize::<T>(k));
    }
    s * h / cst(3.0)
}

pub const SMOOTH_PANELS: usize = 2048;
pub const KINKED_PANELS: usize = 8192;

/// Perimeter as the integral of the Feret diameter over `[0, π)`.
pub fn perimeter_cauchy<T: Scalar>(body: &SymmetricConvexBody<T>) -> Result<T> {
    body.validate()?;
    let panels = if body.is_piecewise() { KINKED_PANELS } else { SMOOTH_PANELS };
    Ok(simpson(|t| body.feret(t), T::zero(), T::PI(), panels))
}

/// `θᵢ = iπ/n`, `i = 0..n`.
pub fn regular_subdivision<T: Scalar>(n: usize) -> Vec<T> {
    (0..n)
        .map(|i| T::PI() * from_usize::<T>(i) / from_usize::<T>(n))
        .collect()
}

/// `W(X, Z) = ½ Σ αᵢ H_X(θᵢ + t)` for a zonotope `Z`.
pub fn mixed_area_with_zonotope<T: Scalar, X: FeretDiameter<T> + ?Sized>(x: &X, z: &Zonotope<T>) -> T {
    z.alpha()
        .iter()
        .zip(z.theta())
        .map(|(&a, &th)| a * x.feret_at(th + z.t()))
        .sum::<T>()
        / cst(2.0)
}

/// `½ ᵗH_Y F⁻¹ H_X` on the regular `n`-grid; tends to `W(Y, X)` as `n → ∞`.
pub fn mixed_area_limit<T, Y, X>(y: &Y, x: &X, n: usize) -> Result<T>
where
    T: Scalar,
    Y: FeretDiameter<T> + ?Sized,
    X: FeretDiameter<T> + ?Sized,
{
    if n <= 1 {
        return Err(Error::InvalidParameter(format!("mixed-area limit needs n > 1, got {n}")));
    }
    let theta = regular_subdivision::<T>(n);
    let hx: Vec<T> = theta.iter().map(|&t| x.feret_at(t)).collect();
    let alpha = feret_matrix::<T>(n).solve(&hx)?;
    Ok(theta
        .iter()
        .zip(&alpha)
        .map(|(&t, &a)| a * y.feret_at(t))
        .sum::<T>()
        / cst(2.0))
}

/// Outcome of [`feret_feasibility_check`]. Magnitudes are `0` when satisfied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    /// Largest `-H` over samples.
    pub negativity: f64,
    /// Largest disagreement between samples at angles equal modulo π.
    pub periodicity: f64,
    /// Largest excess `H(θ+β) − H(θ) − 2|sin(β/2)| H(θ+(β+π)/2)`.
    pub subadditivity: f64,
    /// Number of sampled triples the inequality was checked on.
    pub triples_checked: usize,
}

impl FeasibilityReport {
    pub fn worst_violation(&self) -> f64 {
        self.negativity.max(self.periodicity).max(self.subadditivity)
    }

    pub fn passed(&self, tol: f64) -> bool {
        self.worst_violation() <= tol
    }
}

/// Checks that `(angle, length)` samples can come from a Feret diameter:
/// nonnegativity, π-periodicity, and the inequality
/// `H(θ+β) ≤ H(θ) + 2|sin(β/2)| H(θ+(β+π)/2)` on every triple present in the samples.
pub fn feret_feasibility_check<T: Scalar>(samples: &[(T, T)]) -> FeasibilityReport {
    let pi = T::PI().to_f64().unwrap();
    let key_tol = 1e-9;
    let mut reduced: Vec<(f64, f64)> = samples
        .iter()
        .map(|&(a, h)| (a.to_f64().unwrap().rem_euclid(pi), h.to_f64().unwrap()))
        .map(|(a, h)| if pi - a < key_tol { (0.0, h) } else { (a, h) })
        .collect();
    reduced.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let negativity = reduced.iter().map(|&(_, h)| -h).fold(0.0, f64::max);

    // collapse duplicate angles, recording their spread
    let mut table: Vec<(f64, f64)> = Vec::new();
    let mut periodicity: f64 = 0.0;
    for &(a, h) in &reduced {
        match table.iter().find(|(b, _)| (a - b).abs() < key_tol) {
            Some(&(_, g)) => periodicity = periodicity.max((h - g).abs()),
            None => table.push((a, h)),
        }
    }
    let lookup = |angle: f64| -> Option<f64> {
        let a = angle.rem_euclid(pi);
        let a = if pi - a < key_tol { 0.0 } else { a };
        let idx = table.partition_point(|&(b, _)| b < a - key_tol);
        table.get(idx).filter(|(b, _)| (b - a).abs() < key_tol).map(|&(_, h)| h)
    };

    let mut subadditivity: f64 = 0.0;
    let mut triples = 0;
    for &(ta, ha) in &table {
        for &(tb, hb) in &table {
            let base = (tb - ta).rem_euclid(pi);
            for beta in [base, base + pi] {
                if let Some(hm) = lookup(ta + (beta + pi) / 2.0) {
                    triples += 1;
                    let excess = hb - ha - 2.0 * (beta / 2.0).sin().abs() * hm;
                    subadditivity = subadditivity.max(excess);
                }
            }
        }
    }
    FeasibilityReport {
        negativity,
        periodicity,
        subadditivity,
        triples_checked: triples,
    }
}

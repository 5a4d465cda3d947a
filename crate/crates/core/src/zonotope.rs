//! Zonotopes: Minkowski sums of centred segments with closed-form functionals.

use crate::error::{Error, Result};
use crate::geometry::polygon::{ConvexPolygon, Point2};
use crate::geometry::regular_subdivision;
use crate::scalar::{cst, Scalar};

/// `⊕ αᵢ S_{θᵢ}` rotated counter-clockwise by `t`.
///
/// `θ` is strictly increasing in `[0, π)`. When `regular` is set, `θ` is the
/// regular subdivision `θᵢ = iπ/n` and the zonotope is `t`-regular.
#[derive(Debug, Clone, PartialEq)]
pub struct Zonotope<T> {
    theta: Vec<T>,
    alpha: Vec<T>,
    t: T,
    regular: bool,
}

impl<T: Scalar> Zonotope<T> {
    /// Zonotope on arbitrary directions.
    pub fn new(theta: Vec<T>, alpha: Vec<T>, t: T) -> Result<Self> {
        if theta.len() != alpha.len() {
            return Err(Error::DimensionMismatch { expected: theta.len(), found: alpha.len() });
        }
        let z = Self { theta, alpha, t, regular: false };
        z.validate()?;
        Ok(z)
    }

    /// Zonotope on the regular subdivision of `[0, π)` with `alpha.len()` directions.
    pub fn regular(alpha: Vec<T>, t: T) -> Result<Self> {
        let theta = regular_subdivision(alpha.len());
        let z = Self { theta, alpha, t, regular: true };
        z.validate()?;
        Ok(z)
    }

    pub fn validate(&self) -> Result<()> {
        if self.theta.len() != self.alpha.len() {
            return Err(Error::DimensionMismatch { expected: self.theta.len(), found: self.alpha.len() });
        }
        if !self.t.is_finite() {
            return Err(Error::InvalidParameter("rotation offset must be finite".into()));
        }
        if let Some((i, a)) = self
            .alpha
            .iter()
            .enumerate()
            .find(|(_, a)| !a.is_finite() || **a < T::zero())
        {
            return Err(Error::InvalidParameter(format!("face length {i} must be nonnegative, got {a}")));
        }
        let pi = T::PI();
        for (i, &th) in self.theta.iter().enumerate() {
            if !(th >= T::zero() && th < pi) {
                return Err(Error::InvalidParameter(format!("direction {i} = {th} outside [0, π)")));
            }
            if i > 0 && th <= self.theta[i - 1] {
                return Err(Error::InvalidParameter("directions must be strictly increasing".into()));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn theta(&self) -> &[T] {
        &self.theta
    }

    pub fn alpha(&self) -> &[T] {
        &self.alpha
    }

    pub fn t(&self) -> T {
        self.t
    }

    pub fn is_regular(&self) -> bool {
        self.regular
    }

    pub fn with_offset(mut self, t: T) -> Self {
        self.t = t;
        self
    }

    /// `H(η) = Σ αᵢ |sin(η − t − θᵢ)|`.
    pub fn feret(&self, eta: T) -> T {
        self.alpha
            .iter()
            .zip(&self.theta)
            .map(|(&a, &th)| a * (eta - self.t - th).sin().abs())
            .sum()
    }

    /// `2 Σ αᵢ`.
    pub fn perimeter(&self) -> T {
        cst::<T>(2.0) * self.alpha.iter().copied().sum::<T>()
    }

    /// `½ Σᵢ Σⱼ αᵢ αⱼ |sin(θᵢ − θⱼ)|`.
    pub fn area(&self) -> T {
        let mut s = T::zero();
        for (i, (&ai, &ti)) in self.alpha.iter().zip(&self.theta).enumerate() {
            for (&aj, &tj) in self.alpha[i + 1..].iter().zip(&self.theta[i + 1..]) {
                s = s + ai * aj * (ti - tj).sin().abs();
            }
        }
        s
    }

    /// Counter-clockwise vertices, centred at the origin.
    ///
    /// Walks the edges `αᵢ (cos(θᵢ+t), sin(θᵢ+t))` in increasing angle, then
    /// their reflections. Zero faces are skipped, so a single nonzero face
    /// gives a segment and none gives the origin.
    pub fn vertices(&self) -> ConvexPolygon<T> {
        let total: T = self.alpha.iter().copied().sum();
        let cutoff = cst::<T>(1e-15) * total;
        let edges: Vec<Point2<T>> = self
            .alpha
            .iter()
            .zip(&self.theta)
            .filter(|(&a, _)| a > cutoff)
            .map(|(&a, &th)| {
                let (s, c) = (th + self.t).sin_cos();
                Point2::new(c, s).scale(a)
            })
            .collect();
        if edges.is_empty() {
            return ConvexPolygon::point(Point2::origin());
        }
        let sum = edges.iter().fold(Point2::origin(), |acc, &e| acc + e);
        let mut p = -sum.scale(cst(0.5));
        let mut half = Vec::with_capacity(edges.len());
        for e in &edges {
            half.push(p);
            p = p + *e;
        }
        let mut vertices = half.clone();
        vertices.extend(half.iter().map(|&v| -v));
        ConvexPolygon::from_vertices_unchecked(vertices)
    }
}

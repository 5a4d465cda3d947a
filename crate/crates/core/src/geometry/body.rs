//! Centrally symmetric convex bodies described by their Feret diameter.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::polygon::{ConvexPolygon, Point2};
use crate::scalar::{cst, Scalar};
use crate::zonotope::Zonotope;

/// Discriminant of [`SymmetricConvexBody`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BodyKind {
    Segment,
    Disk,
    Ellipse,
    Polygon,
    Zonotope,
    MinkowskiSum,
    Rotated,
    Scaled,
}

/// A centrally symmetric convex body, evaluated through `θ ↦ H(θ)`.
///
/// Widths are measured along `(-sin θ, cos θ)`. Rotations are
/// counter-clockwise, so `H_{R_η X}(θ) = H_X(θ - η)`.
#[derive(Debug, Clone, PartialEq)]
pub enum SymmetricConvexBody<T> {
    /// Segment of `length` directed by `direction` and centred at the origin.
    Segment { length: T, direction: T },
    Disk { radius: T },
    /// Ellipse with semiaxis `a` along angle `phi` (from the x-axis) and `b` orthogonal to it.
    Ellipse { a: T, b: T, phi: T },
    Polygon(ConvexPolygon<T>),
    Zonotope(Zonotope<T>),
    MinkowskiSum(Vec<SymmetricConvexBody<T>>),
    Rotated { body: Box<SymmetricConvexBody<T>>, angle: T },
    Scaled { body: Box<SymmetricConvexBody<T>>, factor: T },
}

/// Vertex-reflection tolerance for polygon symmetry.
pub const SYMMETRY_TOL: f64 = 1e-9;

fn nonneg<T: Scalar>(name: &str, v: T) -> Result<()> {
    if v.is_finite() && v >= T::zero() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite and nonnegative, got {v}")))
    }
}

fn finite<T: Scalar>(name: &str, v: T) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")))
    }
}

impl<T: Scalar> SymmetricConvexBody<T> {
    pub fn segment(length: T, direction: T) -> Result<Self> {
        let b = Self::Segment { length, direction };
        b.validate()?;
        Ok(b)
    }

    pub fn unit_segment(direction: T) -> Self {
        Self::Segment { length: T::one(), direction }
    }

    pub fn disk(radius: T) -> Result<Self> {
        let b = Self::Disk { radius };
        b.validate()?;
        Ok(b)
    }

    pub fn ellipse(a: T, b: T, phi: T) -> Result<Self> {
        let e = Self::Ellipse { a, b, phi };
        e.validate()?;
        Ok(e)
    }

    /// Polygon body; rejected unless convex, counter-clockwise and centrally symmetric.
    pub fn polygon(vertices: Vec<Point2<T>>) -> Result<Self> {
        let b = Self::Polygon(ConvexPolygon::new(vertices)?);
        b.validate()?;
        Ok(b)
    }

    /// Axis-aligned rectangle, represented as a two-direction zonotope.
    pub fn rectangle(width: T, height: T) -> Result<Self> {
        Ok(Self::Zonotope(Zonotope::regular(vec![width, height], T::zero())?))
    }

    pub fn unit_square() -> Self {
        Self::Zonotope(Zonotope::regular(vec![T::one(), T::one()], T::zero()).expect("valid square"))
    }

    pub fn minkowski_sum(parts: Vec<Self>) -> Result<Self> {
        let b = Self::MinkowskiSum(parts);
        b.validate()?;
        Ok(b)
    }

    /// Counter-clockwise rotation by `angle`.
    pub fn rotated(self, angle: T) -> Self {
        Self::Rotated { body: Box::new(self), angle }
    }

    pub fn scaled(self, factor: T) -> Self {
        Self::Scaled { body: Box::new(self), factor }
    }

    pub fn kind(&self) -> BodyKind {
        match self {
            Self::Segment { .. } => BodyKind::Segment,
            Self::Disk { .. } => BodyKind::Disk,
            Self::Ellipse { .. } => BodyKind::Ellipse,
            Self::Polygon(_) => BodyKind::Polygon,
            Self::Zonotope(_) => BodyKind::Zonotope,
            Self::MinkowskiSum(_) => BodyKind::MinkowskiSum,
            Self::Rotated { .. } => BodyKind::Rotated,
            Self::Scaled { .. } => BodyKind::Scaled,
        }
    }

    /// Checks parameter ranges and polygon central symmetry.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Segment { length, direction } => {
                nonneg("segment length", *length)?;
                finite("segment direction", *direction)
            }
            Self::Disk { radius } => nonneg("disk radius", *radius),
            Self::Ellipse { a, b, phi } => {
                nonneg("ellipse semiaxis a", *a)?;
                nonneg("ellipse semiaxis b", *b)?;
                finite("ellipse orientation", *phi)
            }
            Self::Polygon(p) => {
                let scale = p.vertices().iter().map(|v| v.norm()).fold(T::one(), T::max);
                let dev = p.symmetry_deviation();
                if dev > cst::<T>(SYMMETRY_TOL) * scale {
                    return Err(Error::SymmetryViolation {
                        deviation: dev.to_f64().unwrap_or(f64::NAN),
                    });
                }
                Ok(())
            }
            Self::Zonotope(z) => z.validate(),
            Self::MinkowskiSum(parts) => parts.iter().try_for_each(Self::validate),
            Self::Rotated { body, angle } => {
                finite("rotation angle", *angle)?;
                body.validate()
            }
            Self::Scaled { body, factor } => {
                finite("scale factor", *factor)?;
                body.validate()
            }
        }
    }

    /// Feret diameter `H(θ)`. The body is assumed valid.
    pub fn feret(&self, theta: T) -> T {
        match self {
            Self::Segment { length, direction } => *length * (*direction - theta).sin().abs(),
            Self::Disk { radius } => *radius * cst(2.0),
            Self::Ellipse { a, b, phi } => {
                let (s, c) = (theta - *phi).sin_cos();
                cst::<T>(2.0) * (*a * *a * s * s + *b * *b * c * c).sqrt()
            }
            Self::Polygon(p) => p.feret(theta),
            Self::Zonotope(z) => z.feret(theta),
            Self::MinkowskiSum(parts) => parts.iter().map(|p| p.feret(theta)).sum(),
            Self::Rotated { body, angle } => body.feret(theta - *angle),
            Self::Scaled { body, factor } => factor.abs() * body.feret(theta),
        }
    }

    /// Upper bound on `|H(θ₁) − H(θ₂)| / |θ₁ − θ₂|`; never below the Lipschitz
    /// constant and never above the diameter.
    pub fn lipschitz_bound(&self) -> T {
        match self {
            Self::Segment { length, .. } => *length,
            Self::Disk { .. } => T::zero(),
            Self::Ellipse { a, b, .. } => cst::<T>(2.0) * a.max(*b),
            Self::Polygon(p) => p.diameter(),
            Self::Zonotope(z) => z.alpha().iter().copied().sum(),
            Self::MinkowskiSum(parts) => parts.iter().map(Self::lipschitz_bound).sum(),
            Self::Rotated { body, .. } => body.lipschitz_bound(),
            Self::Scaled { body, factor } => factor.abs() * body.lipschitz_bound(),
        }
    }

    /// True when `H` has kinks (polygonal parts), which calls for finer quadrature.
    pub fn is_piecewise(&self) -> bool {
        match self {
            Self::Segment { .. } | Self::Polygon(_) | Self::Zonotope(_) => true,
            Self::Disk { .. } | Self::Ellipse { .. } => false,
            Self::MinkowskiSum(parts) => parts.iter().any(Self::is_piecewise),
            Self::Rotated { body, .. } | Self::Scaled { body, .. } => body.is_piecewise(),
        }
    }

    /// Vertex description, when the body is a polygon, segment or point.
    pub fn polygonal_realization(&self) -> Option<ConvexPolygon<T>> {
        match self {
            Self::Segment { length, direction } => {
                let half = Point2::new(direction.cos(), direction.sin()).scale(*length / cst(2.0));
                if *length == T::zero() {
                    Some(ConvexPolygon::point(Point2::origin()))
                } else {
                    Some(ConvexPolygon::from_vertices_unchecked(vec![-half, half]))
                }
            }
            Self::Disk { .. } | Self::Ellipse { .. } => None,
            Self::Polygon(p) => Some(p.clone()),
            Self::Zonotope(z) => Some(z.vertices()),
            Self::MinkowskiSum(parts) => parts.iter().try_fold(
                ConvexPolygon::point(Point2::origin()),
                |acc, p| Some(acc.minkowski_sum(&p.polygonal_realization()?)),
            ),
            Self::Rotated { body, angle } => body.polygonal_realization().map(|p| {
                ConvexPolygon::from_vertices_unchecked(p.vertices().iter().map(|v| v.rotate(*angle)).collect())
            }),
            Self::Scaled { body, factor } => {
                if *factor == T::zero() {
                    return Some(ConvexPolygon::point(Point2::origin()));
                }
                body.polygonal_realization().map(|p| {
                    ConvexPolygon::from_vertices_unchecked(p.vertices().iter().map(|v| v.scale(*factor)).collect())
                })
            }
        }
    }
}

/// Feret diameter of a validated body.
pub fn evaluate_feret<T: Scalar>(body: &SymmetricConvexBody<T>, theta: T) -> Result<T> {
    body.validate()?;
    Ok(body.feret(theta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn segment_widths() {
        let s0 = SymmetricConvexBody::unit_segment(0.0);
        assert_relative_eq!(s0.feret(FRAC_PI_2), 1.0);
        let b = 0.7;
        assert_eq!(SymmetricConvexBody::unit_segment(b).feret(b), 0.0);
    }

    #[test]
    fn ellipse_width_matches_boundary_sampling() {
        let e = SymmetricConvexBody::ellipse(3.0, 1.0, 0.0).unwrap();
        // 2·max over boundary points of <p, u(0)>, u(0) = (0, 1)
        let m = 1_000_000;
        let oracle = (0..m)
            .map(|k| {
                let s = 2.0 * PI * k as f64 / m as f64;
                let p = Point2::new(3.0 * s.cos(), s.sin());
                p.dot(crate::geometry::polygon::feret_normal(0.0))
            })
            .fold(f64::NEG_INFINITY, f64::max)
            * 2.0;
        assert_relative_eq!(e.feret(0.0), 2.0, epsilon = 1e-12);
        assert_relative_eq!(e.feret(0.0), oracle, epsilon = 1e-9);
        // orientation: major axis along φ means zero-angle width is 2a at φ = π/2
        let e = SymmetricConvexBody::ellipse(3.0, 1.0, FRAC_PI_2).unwrap();
        assert_relative_eq!(e.feret(0.0), 6.0, epsilon = 1e-12);
    }

    #[test]
    fn square_diagonal() {
        let sq = SymmetricConvexBody::<f64>::unit_square();
        assert_relative_eq!(sq.feret(FRAC_PI_4), 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn rejects_negative_lengths() {
        assert!(matches!(SymmetricConvexBody::disk(-1.0), Err(Error::InvalidParameter(_))));
        assert!(SymmetricConvexBody::ellipse(1.0, -0.5, 0.0).is_err());
        assert!(SymmetricConvexBody::segment(f64::NAN, 0.0).is_err());
        assert!(evaluate_feret(&SymmetricConvexBody::Disk { radius: -2.0 }, 0.0).is_err());
    }

    #[test]
    fn rejects_asymmetric_polygon() {
        let tri = vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        let err = SymmetricConvexBody::polygon(tri.into_iter().map(Into::into).collect()).unwrap_err();
        assert!(matches!(err, Error::SymmetryViolation { .. }));
    }

    #[test]
    fn polygon_matches_zonotope() {
        let sq = SymmetricConvexBody::polygon(
            vec![[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5], [-0.5, 0.5]]
                .into_iter()
                .map(Into::into)
                .collect(),
        )
        .unwrap();
        let z = SymmetricConvexBody::<f64>::unit_square();
        for k in 0..50 {
            let t = k as f64 * 0.1;
            assert_relative_eq!(sq.feret(t), z.feret(t), epsilon = 1e-12);
        }
    }

    #[test]
    fn polygonal_realization_of_sum() {
        let sum = SymmetricConvexBody::minkowski_sum(vec![
            SymmetricConvexBody::unit_segment(0.0),
            SymmetricConvexBody::unit_segment(FRAC_PI_2),
        ])
        .unwrap();
        let p = sum.polygonal_realization().unwrap();
        assert_relative_eq!(p.area(), 1.0, epsilon = 1e-12);
        assert!(SymmetricConvexBody::<f64>::disk(1.0).unwrap().polygonal_realization().is_none());
    }
}

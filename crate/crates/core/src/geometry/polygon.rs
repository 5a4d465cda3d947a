//! Convex polygons in the plane: shoelace area, edge-merge Minkowski sum,
//! and width in a direction.

use std::cmp::Ordering;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cst, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[T; 2]", into = "[T; 2]")]
#[serde(bound = "T: Scalar")]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn origin() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3-D cross product.
    pub fn cross(self, other: Self) -> T {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    pub fn scale(self, r: T) -> Self {
        Self::new(self.x * r, self.y * r)
    }

    /// Counter-clockwise rotation by `angle`.
    pub fn rotate(self, angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl<T: Scalar> From<[T; 2]> for Point2<T> {
    fn from(p: [T; 2]) -> Self {
        Self::new(p[0], p[1])
    }
}

impl<T: Scalar> From<Point2<T>> for [T; 2] {
    fn from(p: Point2<T>) -> Self {
        [p.x, p.y]
    }
}

impl<T: Scalar> Add for Point2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl<T: Scalar> Sub for Point2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl<T: Scalar> Neg for Point2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// Unit normal `(-sin θ, cos θ)` paired with a Feret direction `θ`.
///
/// The Feret diameter at `θ` is the width of the body measured along this
/// vector, so a segment directed by `θ` has zero width at `θ`.
pub fn feret_normal<T: Scalar>(theta: T) -> Point2<T> {
    let (s, c) = theta.sin_cos();
    Point2::new(-s, c)
}

/// A convex polygon with counter-clockwise vertices.
///
/// One vertex is a point and two vertices a segment; both are accepted so
/// that degenerate zonotopes and Minkowski summands have a representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ConvexPolygon<T> {
    vertices: Vec<Point2<T>>,
}

const DUPLICATE_TOL: f64 = 1e-12;

impl<T: Scalar> ConvexPolygon<T> {
    /// Validates counter-clockwise convexity and rejects repeated vertices.
    pub fn new(vertices: Vec<Point2<T>>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::NotConvex("no vertices".into()));
        }
        if vertices.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::InvalidParameter("non-finite vertex".into()));
        }
        let n = vertices.len();
        let dup = cst::<T>(DUPLICATE_TOL);
        for i in 0..n {
            for j in (i + 1)..n {
                if (vertices[i] - vertices[j]).norm() <= dup {
                    return Err(Error::NotConvex(format!("vertices {i} and {j} coincide")));
                }
            }
        }
        if n >= 3 {
            let scale = vertices.iter().map(|p| p.norm()).fold(T::one(), T::max);
            let tol = cst::<T>(1e-12) * scale * scale;
            for i in 0..n {
                let a = vertices[i];
                let b = vertices[(i + 1) % n];
                let c = vertices[(i + 2) % n];
                if (b - a).cross(c - b) < -tol {
                    return Err(Error::NotConvex(format!("reflex turn at vertex {}", (i + 1) % n)));
                }
            }
            // Winding once: the turning angles must sum to 2π, not a multiple.
            let signed = shoelace(&vertices);
            if signed <= T::zero() {
                return Err(Error::NotConvex("vertices are not counter-clockwise".into()));
            }
        }
        Ok(Self { vertices })
    }

    pub(crate) fn from_vertices_unchecked(vertices: Vec<Point2<T>>) -> Self {
        Self { vertices }
    }

    pub fn point(p: Point2<T>) -> Self {
        Self { vertices: vec![p] }
    }

    /// Axis-aligned rectangle centred at the origin.
    pub fn rectangle(width: T, height: T) -> Self {
        let (w, h) = (width / cst(2.0), height / cst(2.0));
        Self {
            vertices: vec![
                Point2::new(-w, -h),
                Point2::new(w, -h),
                Point2::new(w, h),
                Point2::new(-w, h),
            ],
        }
    }

    pub fn vertices(&self) -> &[Point2<T>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Shoelace area (zero for points and segments).
    pub fn area(&self) -> T {
        if self.vertices.len() < 3 {
            T::zero()
        } else {
            shoelace(&self.vertices).abs()
        }
    }

    pub fn perimeter(&self) -> T {
        let n = self.vertices.len();
        if n < 2 {
            return T::zero();
        }
        if n == 2 {
            return (self.vertices[1] - self.vertices[0]).norm() * cst(2.0);
        }
        (0..n)
            .map(|i| (self.vertices[(i + 1) % n] - self.vertices[i]).norm())
            .sum()
    }

    /// Width between the two supporting lines orthogonal to [`feret_normal`]`(theta)`.
    pub fn feret(&self, theta: T) -> T {
        let u = feret_normal(theta);
        let (lo, hi) = self
            .vertices
            .iter()
            .map(|v| v.dot(u))
            .fold((T::infinity(), T::neg_infinity()), |(lo, hi), d| (lo.min(d), hi.max(d)));
        hi - lo
    }

    pub fn centroid_of_vertices(&self) -> Point2<T> {
        let n = cst::<T>(self.vertices.len() as f64);
        let s = self
            .vertices
            .iter()
            .fold(Point2::origin(), |acc, &v| acc + v);
        s.scale(T::one() / n)
    }

    /// Largest distance from a vertex's reflection through the vertex centroid
    /// to the nearest vertex. Zero for centrally symmetric polygons.
    pub fn symmetry_deviation(&self) -> T {
        let c = self.centroid_of_vertices();
        self.vertices
            .iter()
            .map(|&v| {
                let r = c.scale(cst(2.0)) - v;
                self.vertices
                    .iter()
                    .map(|&w| (w - r).norm())
                    .fold(T::infinity(), T::min)
            })
            .fold(T::zero(), T::max)
    }

    pub fn diameter(&self) -> T {
        let mut d = T::zero();
        for (i, &a) in self.vertices.iter().enumerate() {
            for &b in &self.vertices[i + 1..] {
                d = d.max((a - b).norm());
            }
        }
        d
    }

    pub fn translate(&self, by: Point2<T>) -> Self {
        Self {
            vertices: self.vertices.iter().map(|&v| v + by).collect(),
        }
    }

    /// Whether `p` lies in the polygon, allowing `tol` of slack.
    pub fn contains_point(&self, p: Point2<T>, tol: T) -> bool {
        let n = self.vertices.len();
        match n {
            1 => (p - self.vertices[0]).norm() <= tol,
            2 => {
                let (a, b) = (self.vertices[0], self.vertices[1]);
                let d = b - a;
                let len = d.norm();
                let t = ((p - a).dot(d) / (len * len)).max(T::zero()).min(T::one());
                (a + d.scale(t) - p).norm() <= tol
            }
            _ => (0..n).all(|i| {
                let a = self.vertices[i];
                let e = self.vertices[(i + 1) % n] - a;
                e.cross(p - a) / e.norm() >= -tol
            }),
        }
    }

    /// Minkowski sum by merging the two edge sequences in angular order.
    pub fn minkowski_sum(&self, other: &Self) -> Self {
        let start = lowest(&self.vertices) + lowest(&other.vertices);
        let mut edges = edge_cycle(&self.vertices);
        edges.extend(edge_cycle(&other.vertices));
        edges.sort_by(|a, b| angular_order(*a, *b));

        let mut vertices = vec![start];
        let mut cur = start;
        for e in edges.iter().take(edges.len().saturating_sub(1)) {
            cur = cur + *e;
            vertices.push(cur);
        }
        Self {
            vertices: simplify(vertices),
        }
    }
}

fn shoelace<T: Scalar>(v: &[Point2<T>]) -> T {
    let n = v.len();
    let twice: T = (0..n).map(|i| v[i].cross(v[(i + 1) % n])).sum();
    twice / cst(2.0)
}

fn lowest<T: Scalar>(v: &[Point2<T>]) -> Point2<T> {
    *v.iter()
        .min_by(|a, b| {
            a.y.partial_cmp(&b.y)
                .unwrap_or(Ordering::Equal)
                .then(a.x.partial_cmp(&b.x).unwrap_or(Ordering::Equal))
        })
        .expect("non-empty polygon")
}

fn edge_cycle<T: Scalar>(v: &[Point2<T>]) -> Vec<Point2<T>> {
    let n = v.len();
    if n < 2 {
        return Vec::new();
    }
    (0..n).map(|i| v[(i + 1) % n] - v[i]).collect()
}

fn half_plane<T: Scalar>(p: Point2<T>) -> u8 {
    if p.y > T::zero() || (p.y == T::zero() && p.x > T::zero()) {
        0
    } else {
        1
    }
}

/// Orders vectors by polar angle in `[0, 2π)`.
fn angular_order<T: Scalar>(a: Point2<T>, b: Point2<T>) -> Ordering {
    half_plane(a).cmp(&half_plane(b)).then_with(|| {
        let c = a.cross(b);
        if c > T::zero() {
            Ordering::Less
        } else if c < T::zero() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

/// Drops repeated and collinear vertices from a closed convex chain.
fn simplify<T: Scalar>(mut v: Vec<Point2<T>>) -> Vec<Point2<T>> {
    let scale = v.iter().map(|p| p.norm()).fold(T::one(), T::max);
    let tol = cst::<T>(1e-12) * scale;
    loop {
        let n = v.len();
        if n <= 1 {
            return v;
        }
        let mut removed = false;
        for i in 0..n {
            let prev = v[(i + n - 1) % n];
            let cur = v[i];
            let next = v[(i + 1) % n];
            let a = cur - prev;
            let b = next - cur;
            let degenerate = a.norm() <= tol
                || (n > 2 && a.cross(b).abs() <= tol * (a.norm() + b.norm()) && a.dot(b) >= T::zero());
            if degenerate {
                v.remove(i);
                removed = true;
                break;
            }
        }
        if !removed {
            return v;
        }
    }
}

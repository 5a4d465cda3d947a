//! Zonotope approximation of planar centrally symmetric convex bodies from
//! their Feret diameters, and the moment calculus of random zonotopes.
//!
//! Everything is generic over the floating-point type through [`Scalar`];
//! the `*64` aliases fix it to `f64`.
//!
//! ```
//! use zonofit::{approx::c0_approximate, Body64};
//!
//! let disk = Body64::disk(1.0).unwrap();
//! let z = c0_approximate(&disk, 3).unwrap();
//! assert!((z.feret(0.0) - 2.0).abs() < 1e-12);
//! ```

pub mod approx;
pub mod circulant;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod process;
pub mod scalar;
pub mod sim;
pub mod spec;
pub mod zonotope;

pub use error::{Error, Result};
pub use geometry::{evaluate_feret, hausdorff_distance, ConvexPolygon, Point2, SymmetricConvexBody};
pub use scalar::Scalar;
pub use zonotope::Zonotope;

pub type Body64 = SymmetricConvexBody<f64>;
pub type Body32 = SymmetricConvexBody<f32>;
pub type Zonotope64 = Zonotope<f64>;
pub type Zonotope32 = Zonotope<f32>;
pub type Polygon64 = ConvexPolygon<f64>;
pub type Point64 = Point2<f64>;
pub type FeretMoments64 = process::FeretProcessMoments<f64>;
pub type CentralMoments64 = process::CentralFaceMoments<f64>;
pub type C0Moments64 = process::C0FaceMoments<f64>;

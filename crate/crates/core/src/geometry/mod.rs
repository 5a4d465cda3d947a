//! Deterministic convex-geometry kernel.

pub mod body;
pub mod golden;
pub mod measure;
pub mod polygon;

pub use body::{evaluate_feret, BodyKind, SymmetricConvexBody};
pub use measure::{
    diameter, feret_feasibility_check, hausdorff_distance, mixed_area_limit, mixed_area_with_zonotope,
    perimeter_cauchy, regular_subdivision, FeasibilityReport, SupNorm,
};
pub use polygon::{feret_normal, ConvexPolygon, Point2};

//! Seeded random-shape models and Monte-Carlo moment estimation.

mod estimate;
mod model;

pub use estimate::{
    estimate_process_moments, moments_from_rows, pipeline_estimate, sample_feret_table, EstimationResult, BLOCK,
};
pub use model::{sample_rng, sample_shape, RandomShapeModel, VectorDist, WEIGHT_SUM_TOL};

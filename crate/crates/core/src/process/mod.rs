//! Moment calculus for Feret-diameter random processes and random zonotopes.

pub mod c0;
pub mod central;
pub mod diagnostics;
pub mod kernel;
pub mod moments;
pub mod nnls;

pub use c0::{c0_random_moments, confidence_bound};
pub use central::{central_from_feret, central_from_feret_full, forward_zonotope_moments};
pub use diagnostics::{existence_check, stationarity_diagnostic, ExistenceReport, StationarityReport};
pub use kernel::{k_matrix, k_s};
pub use moments::{
    isotropize_body, isotropize_moments, isotropize_with, C0FaceMoments, CentralFaceMoments, FeretProcessMoments,
};
pub use nnls::{central_nnls, central_nnls_fit, nnls, nnls_design, CentralNnlsFit, NnlsSolution};

use thiserror::Error;

/// Errors raised by the geometry, approximation and moment routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("polygon is not centrally symmetric (max deviation {deviation:e})")]
    SymmetryViolation { deviation: f64 },

    #[error("polygon is not convex and counter-clockwise: {0}")]
    NotConvex(String),

    #[error("circulant matrix is singular: spectral coefficient {index} has magnitude {magnitude:e}")]
    SingularCirculant { index: usize, magnitude: f64 },

    #[error("matrix is ill-conditioned (condition number {condition:e} exceeds {limit:e})")]
    IllConditioned { condition: f64, limit: f64 },

    #[error("singular dense matrix at pivot {0}")]
    SingularMatrix(usize),

    #[error("face length {index} is negative ({value:e}); samples are not a valid Feret diameter")]
    NegativeFaceLength { index: usize, value: f64 },

    #[error("moments are not stationary; isotropize them first")]
    NonStationary,

    #[error("second-moment vector is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPositiveSemidefinite { eigenvalue: f64 },

    #[error("underdetermined system: {0}")]
    Underdetermined(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid random shape model: {0}")]
    InvalidModel(String),

    #[error("invalid shape spec: {0}")]
    InvalidSpec(String),
}

impl Error {
    /// True for errors caused by malformed input rather than numerical breakdown.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_)
                | Error::SymmetryViolation { .. }
                | Error::NotConvex(_)
                | Error::DimensionMismatch { .. }
                | Error::InvalidModel(_)
                | Error::InvalidSpec(_)
                | Error::NonStationary
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

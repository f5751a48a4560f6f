use thiserror::Error;

use crate::point::Point;

/// Error type shared by every operation in the crate.
#[derive(Debug, Clone, Error)]
pub enum GeomError {
    /// A caller-supplied argument is outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A point failed construction or validation.
    #[error("invalid point: {0}")]
    InvalidPoint(String),

    /// Two points (or a point and a scene) disagree on dimension.
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// A distance evaluation produced NaN or an infinity.
    #[error("non-finite distance between {x} and {y}")]
    NonFiniteDistance { x: Point, y: Point },

    /// A point map could not be evaluated at a sample point.
    #[error("map evaluation failed at {point}: {reason}")]
    MapEvaluation { point: Point, reason: String },

    /// A point lies outside the region an operation is defined on.
    #[error("point {point} is outside {region}")]
    OutsideDomain { point: Point, region: String },

    /// A numerical routine (quadrature, minimization) failed to converge.
    #[error("numerical routine failed: {0}")]
    Numerical(String),

    /// A scene description could not be parsed or validated.
    #[error("scene: {0}")]
    Scene(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;

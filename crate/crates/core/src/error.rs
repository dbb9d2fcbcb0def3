use thiserror::Error;

use crate::geometry::Point2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("circles coincide: infinitely many intersection points")]
    ConcentricEqual,
    #[error("circle needs a finite centre and a positive radius")]
    InvalidCircle,
    #[error("tolerances must be finite and strictly positive")]
    InvalidTolerance,
    #[error("antipodal directions do not bound a geodesic arc")]
    AntipodalArc,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SceneError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid scene: {0}")]
    Validation(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error("degenerate scene: {0}")]
    DegenerateScene(String),
    #[error("point ({}, {}) is not on the boundary (distance off by {offset:e})", .point.x, .point.y)]
    NotOnBoundary { point: Point2, offset: f64 },
    #[error("boundary is not a graph over the requested axis at ({}, {})", .point.x, .point.y)]
    NoGraphRepresentation { point: Point2 },
    #[error("oracle mismatch: symbolic {symbolic} vs raster {raster} complement components")]
    OracleMismatch { symbolic: usize, raster: usize },
    #[error("traversal stuck at vertex {vertex}: {detail}")]
    TraversalStuck { vertex: usize, detail: String },
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("inequality violated at s={s}, h={h}: {lhs} < {rhs}")]
    InequalityViolation { s: f64, h: f64, lhs: f64, rhs: f64 },
    #[error("empty input")]
    EmptyInput,
    #[error("singularity not realizable by a finite scene at ({}, {}): {detail}", .point.x, .point.y)]
    Unrealizable { point: Point2, detail: String },
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

//! Boundary structure of epsilon-neighbourhoods of planar point and
//! segment sets.

pub mod analysis;
pub mod boundary;
pub mod curvature;
pub mod error;
pub mod geometry;
pub mod raster;
pub mod report;
pub mod scene;
pub mod scenegen;
pub mod singularity;
pub mod svg;
pub mod topology;

pub use boundary::{build_boundary, BoundaryElement, BoundaryGraph, BoundaryVertex, ElementSupport};
pub use error::{Error, GeometryError, Result, SceneError};
pub use geometry::{Point2, Tolerance, UnitDir};
pub use scene::{parse_scene, Generator, GeneratorScene, GeneratorShape};
pub use analysis::{analyze, Analysis};
pub use report::Report;
pub use singularity::SingularityClass;
pub use topology::{decompose, Decomposition, JordanCurve};

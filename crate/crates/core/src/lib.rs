//! Homology inference for samples of immersed manifolds.
//!
//! A sample of an immersed manifold `M` is lifted into point-matrix space by
//! attaching to every point its normalized local covariance matrix. The lift
//! separates the branches of `M` that cross each other, so distance-to-measure
//! based persistence on the lifted sample reads the homology of the abstract
//! manifold rather than that of its self-intersecting image.

pub mod dtm;
pub mod error;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod measure;
pub mod persistence;
pub mod transport;

pub use error::{Error, Result};
pub use geometry::{LiftedCloud, ParametricShape, PointCloud, ShapeId};
pub use measure::{EmpiricalMeasure, WeightedLift};
pub use persistence::PersistenceDiagram;
pub use transport::TransportPlan;

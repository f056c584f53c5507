//! Weighted Steiner minimal trees in the plane.

pub mod descent;
pub mod heuristic;
pub mod io;
pub mod oracle;
pub mod error;
pub mod families;
pub mod geometry;
pub mod tree;
pub mod wmst;

pub use error::{Error, Result};
pub use geometry::{Point, VertexId, VertexKind, WeightedVertex};
pub use tree::{Edge, PlaneTree, TreeMetrics};

//! Dimer models on the two-torus: representation and validation, perfect
//! matchings and height changes, zig-zag paths and consistency, large-hexagon
//! decompositions with their cyclic-group labelings, and the vertex-removal
//! pipeline that synthesizes a consistent dimer model for any convex lattice
//! polygon.

pub mod error;
pub mod geom;
pub mod hexagons;
pub mod hj;
pub mod io;
pub mod iso;
pub mod matchings;
pub mod model;
pub mod par;
pub mod quiver;
pub mod render;
pub mod synthesis;
pub mod zigzag;

pub use error::{DimerError, Result};
pub use geom::{v2, LatticePolygon, Vec2};
pub use model::{Color, DimerModel, Dir, Edge, EdgeId, Face, FaceId, Node, NodeId};

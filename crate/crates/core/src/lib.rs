//! Exact combinatorics for intersecting families and the graph container
//! method on biregular bipartite graphs.
//!
//! Subsets of a ground set of at most 64 labels are [`SubsetWord`]s; every
//! count is an exact [`BigCount`]. Vertex sets of a bipartite graph are
//! [`VertexSet`]s indexed by colex rank for the layer graph.

pub mod combinatorics;
pub mod containers;
pub mod enumeration;
pub mod error;
pub mod families;
pub mod graph;
pub mod isoperimetry;
pub mod report;
pub mod subset;
pub mod verify;
pub mod vertex_set;

pub use combinatorics::BigCount;
pub use error::{Error, Result};
pub use families::{KFamily, PhiImage};
pub use graph::{BipartiteGraph, ExplicitGraph, LayerGraph, LayerGraphParams, Side};
pub use subset::SubsetWord;
pub use vertex_set::VertexSet;

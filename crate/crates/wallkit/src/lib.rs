//! Walls in nearly embedded graphs: combinatorial surface embeddings,
//! homotopy of disjoint curves, wall and grid models, vortices, and
//! certificate-checked extraction of planarly embedded cylindrical subwalls.

pub mod cli;
pub mod extract;
pub mod formats;
pub mod graph;
pub mod homotopy;
pub mod nearembed;
pub mod surface;
pub mod svg;
pub mod vortex;
pub mod walls;

pub use graph::{EdgeId, Graph, Subgraph, VertexId, Walk};
pub use surface::{Embedding, Region, Sign, ValidationReport};

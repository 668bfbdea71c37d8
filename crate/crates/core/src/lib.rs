//! Shortest paths with negative lengths on graphs with small separators.
//!
//! The pipeline divides the graph into regions with small boundaries,
//! replaces each region by a distance clique over its boundary, solves
//! single-source shortest paths on the much smaller replaced graph, and
//! extends the answer into every region by hop-bounded relaxation.

pub mod apsp;
pub mod delta;
pub mod division;
pub mod error;
pub mod gen;
pub mod graph;
pub mod pipeline;
pub mod separator;
pub mod skeleton;
pub mod sssp;

pub use error::{CycleWitness, Error, Result};
pub use graph::{DiGraph, Edge, VertexWeighting, Weight};

use std::fmt;

use thiserror::Error;

use crate::separator::Separation;

/// A negative-length cycle found in a graph, as vertex and edge-id lists.
///
/// `edges[i]` runs from `vertices[i]` to `vertices[(i + 1) % len]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleWitness {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub length: i64,
}

impl fmt::Display for CycleWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cycle of length {} through", self.length)?;
        for v in &self.vertices {
            write!(f, " {v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid graph: {0}")]
    Validation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("negative cycle: {0}")]
    NegativeCycle(CycleWitness),

    /// A matrix kernel found `dist(v, v) < 0`.
    #[error("negative cycle through vertex {vertex}")]
    NegativeCycleAt { vertex: usize },

    #[error("edge {0} has negative length")]
    NegativeEdge(usize),

    #[error("no separator within budget {budget} (best found has {} vertices)", .best.separator.len())]
    BudgetUnmet { budget: usize, best: Box<Separation> },

    #[error("region {region} violates the division bounds: {msg}")]
    DivisionBound { region: usize, msg: String },

    #[error("invalid delta system: {0}")]
    InvalidDelta(String),

    #[error("vertex {0} is unreachable")]
    Unreachable(usize),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

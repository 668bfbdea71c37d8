//! Single-source shortest-path engines.
//!
//! Every engine returns the same [`SsspResult`] shape so callers can swap
//! them by [`Engine`] id and compare them differentially.

mod bellman_ford;
mod dijkstra;
mod scaling;

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

pub use bellman_ford::{bellman_ford, bellman_ford_bounded, bounded_relax, find_negative_cycle};
pub use dijkstra::dijkstra;
pub use scaling::scaling_sssp;

use crate::error::{Error, Result};
use crate::graph::{DiGraph, Weight};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SsspStats {
    /// Edge relaxations attempted.
    pub relaxations: u64,
    /// Bellman-Ford rounds, or scaling phases for the scaling engine.
    pub rounds: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SsspResult {
    pub source: usize,
    pub dist: Vec<Weight>,
    /// `(previous vertex, edge id)` on a shortest path, `None` for the
    /// source and unreachable vertices.
    pub pred: Vec<Option<(usize, usize)>>,
    pub stats: SsspStats,
}

impl SsspResult {
    /// Edge ids of the shortest path to `v`, following `pred`.
    pub fn path_to(&self, v: usize) -> Result<Vec<usize>> {
        if !self.dist[v].is_finite() {
            return Err(Error::Unreachable(v));
        }
        let mut path = Vec::new();
        let mut x = v;
        while x != self.source {
            let (u, id) = self.pred[x].ok_or_else(|| Error::Internal(format!("broken predecessor chain at {x}")))?;
            path.push(id);
            x = u;
            if path.len() > self.dist.len() {
                return Err(Error::Internal("predecessor cycle".into()));
            }
        }
        path.reverse();
        Ok(path)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    BellmanFord,
    #[default]
    Scaling,
    Dijkstra,
}

impl Engine {
    pub fn run(self, g: &DiGraph, s: usize) -> Result<SsspResult> {
        match self {
            Engine::BellmanFord => bellman_ford(g, s),
            Engine::Scaling => scaling_sssp(g, s),
            Engine::Dijkstra => dijkstra(g, s),
        }
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Engine> {
        match s {
            "bf" => Ok(Engine::BellmanFord),
            "scaling" => Ok(Engine::Scaling),
            "dijkstra" => Ok(Engine::Dijkstra),
            _ => Err(Error::InvalidArgument(format!("unknown engine `{s}` (expected bf, scaling or dijkstra)"))),
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::BellmanFord => "bf",
            Engine::Scaling => "scaling",
            Engine::Dijkstra => "dijkstra",
        })
    }
}

/// First edge `(u, v, w)` with `dist[v] > dist[u] + w`, if any.
pub fn find_tense_edge(g: &DiGraph, dist: &[Weight]) -> Option<usize> {
    g.edges().iter().position(|e| dist[e.tail].is_finite() && dist[e.head] > dist[e.tail] + e.len)
}

/// A shortest-path tree over the tight edges `dist[u] + w == dist[v]`,
/// found by BFS from `s` so zero-length cycles cannot form loops.
pub fn tight_tree(g: &DiGraph, s: usize, dist: &[Weight]) -> Vec<Option<(usize, usize)>> {
    let mut pred = vec![None; g.n()];
    let mut seen = vec![false; g.n()];
    let mut queue = VecDeque::from([s]);
    seen[s] = true;
    while let Some(u) = queue.pop_front() {
        for &id in g.out_edges(u) {
            let e = g.edge(id);
            if !seen[e.head] && dist[u] + e.len == dist[e.head] {
                seen[e.head] = true;
                pred[e.head] = Some((u, id));
                queue.push_back(e.head);
            }
        }
    }
    pred
}

/// Follow `pred` back from `start` until a vertex repeats or the chain
/// ends; returns the repeated cycle as a witness if its length is negative.
pub(crate) fn cycle_in_pred(g: &DiGraph, pred: &[Option<(usize, usize)>]) -> Option<crate::error::CycleWitness> {
    // 0 = unvisited, 1 = on current walk, 2 = done
    let mut state = vec![0u8; g.n()];
    for start in 0..g.n() {
        if state[start] != 0 {
            continue;
        }
        let mut walk = Vec::new();
        let mut x = start;
        loop {
            if state[x] == 2 {
                break;
            }
            if state[x] == 1 {
                let pos = walk.iter().position(|&y| y == x).expect("on walk");
                let cyc = &walk[pos..];
                // walk runs backwards along pred; reverse into forward order
                let mut vertices: Vec<usize> = cyc.iter().rev().copied().collect();
                vertices.rotate_right(1);
                let edges: Vec<usize> = vertices
                    .iter()
                    .enumerate()
                    .map(|(i, _)| pred[vertices[(i + 1) % vertices.len()]].expect("on cycle").1)
                    .collect();
                let length = edges.iter().map(|&id| g.edge(id).len).sum::<i64>();
                for &y in &walk {
                    state[y] = 2;
                }
                if length < 0 {
                    return Some(crate::error::CycleWitness { vertices, edges, length });
                }
                break;
            }
            state[x] = 1;
            walk.push(x);
            match pred[x] {
                Some((u, _)) => x = u,
                None => break,
            }
        }
        for &y in &walk {
            state[y] = 2;
        }
    }
    None
}

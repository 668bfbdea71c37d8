use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::graph::{DiGraph, Weight};

use super::{SsspResult, SsspStats};

/// Binary-heap Dijkstra. Rejects graphs with any negative edge.
pub fn dijkstra(g: &DiGraph, s: usize) -> Result<SsspResult> {
    if let Some(id) = g.edges().iter().position(|e| e.len < 0) {
        return Err(Error::NegativeEdge(id));
    }
    let (dist, pred, stats) = dijkstra_with(g, s, |id| g.edge(id).len);
    Ok(SsspResult { source: s, dist, pred, stats })
}

/// Dijkstra under an arbitrary nonnegative length function on edge ids.
pub(crate) fn dijkstra_with(
    g: &DiGraph,
    s: usize,
    len: impl Fn(usize) -> i64,
) -> (Vec<Weight>, Vec<Option<(usize, usize)>>, SsspStats) {
    let mut dist = vec![Weight::INF; g.n()];
    let mut pred = vec![None; g.n()];
    let mut done = vec![false; g.n()];
    let mut stats = SsspStats { relaxations: 0, rounds: 1 };
    let mut heap = BinaryHeap::new();
    dist[s] = Weight::ZERO;
    heap.push(Reverse((Weight::ZERO, s)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for &id in g.out_edges(u) {
            stats.relaxations += 1;
            let v = g.edge(id).head;
            let w = len(id);
            debug_assert!(w >= 0);
            let cand = d + w;
            if cand < dist[v] {
                dist[v] = cand;
                pred[v] = Some((u, id));
                heap.push(Reverse((cand, v)));
            }
        }
    }
    (dist, pred, stats)
}

//! Bit-scaling SSSP for integer lengths.
//!
//! With `K` the magnitude of the most negative length and
//! `b = ceil(log2(K + 1))`, phase `i` uses lengths `ceil(w / 2^(b-i))`.
//! Doubling the previous phase's potential leaves every reduced cost at
//! least -1; each phase then repairs the potential with alternating
//! Dijkstra passes over nonnegative arcs and single Bellman-Ford passes over
//! the -1 arcs. After the last phase all reduced costs are nonnegative and
//! one Dijkstra run from the source gives exact distances.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::graph::{DiGraph, Weight};

use super::dijkstra::dijkstra_with;
use super::{bellman_ford, SsspResult, SsspStats};

pub fn scaling_sssp(g: &DiGraph, s: usize) -> Result<SsspResult> {
    let reach = g.reachable_from(&[s]);
    if reach.iter().all(|&r| r) {
        return scaling_connected(g, s);
    }
    let (sub, to_global, edge_map) = g.induced(&reach);
    let local_s = to_global.binary_search(&s).expect("source is reachable");
    let r = scaling_connected(&sub, local_s).map_err(|e| match e {
        Error::NegativeCycle(mut w) => {
            w.vertices.iter_mut().for_each(|v| *v = to_global[*v]);
            w.edges.iter_mut().for_each(|id| *id = edge_map[*id]);
            Error::NegativeCycle(w)
        }
        other => other,
    })?;
    let mut dist = vec![Weight::INF; g.n()];
    let mut pred = vec![None; g.n()];
    for (local, &v) in to_global.iter().enumerate() {
        dist[v] = r.dist[local];
        pred[v] = r.pred[local].map(|(u, id)| (to_global[u], edge_map[id]));
    }
    Ok(SsspResult { source: s, dist, pred, stats: r.stats })
}

#[inline]
fn ceil_shift(w: i64, shift: u32) -> i64 {
    if shift == 0 {
        w
    } else {
        -((-w) >> shift)
    }
}

/// All vertices are reachable from `s` here, so any negative cycle counts.
fn scaling_connected(g: &DiGraph, s: usize) -> Result<SsspResult> {
    let n = g.n();
    let k = g.neg_magnitude();
    let bits = 64 - (k as u64).leading_zeros();
    let mut pot = vec![0i64; n];
    let mut stats = SsspStats::default();
    for phase in 1..=bits {
        let shift = bits - phase;
        for p in pot.iter_mut() {
            *p *= 2;
        }
        let reduced: Vec<i64> = g
            .edges()
            .iter()
            .map(|e| ceil_shift(e.len, shift) + pot[e.tail] - pot[e.head])
            .collect();
        debug_assert!(reduced.iter().all(|&c| c >= -1));
        match repair(g, &reduced, &mut stats) {
            Some(d) => {
                for (p, dv) in pot.iter_mut().zip(d) {
                    *p += dv;
                }
            }
            None => {
                return Err(match bellman_ford(g, s) {
                    Err(e) => e,
                    Ok(_) => Error::Internal("scaling phase found a cycle Bellman-Ford did not".into()),
                })
            }
        }
        stats.rounds += 1;
    }
    let (dr, pred, dstats) = dijkstra_with(g, s, |id| {
        let e = g.edge(id);
        e.len + pot[e.tail] - pot[e.head]
    });
    stats.relaxations += dstats.relaxations;
    stats.rounds += 1;
    let dist = dr
        .iter()
        .enumerate()
        .map(|(v, d)| match d.get() {
            Some(x) => Weight::finite(x - pot[s] + pot[v]),
            None => Weight::INF,
        })
        .collect();
    Ok(SsspResult { source: s, dist, pred, stats })
}

/// Distances from a virtual source joined to every vertex by 0-length arcs
/// under reduced costs `>= -1`. `None` means a negative cycle.
fn repair(g: &DiGraph, cost: &[i64], stats: &mut SsspStats) -> Option<Vec<i64>> {
    let n = g.n();
    let floor = -(n as i64);
    let mut d = vec![0i64; n];
    let mut heap: BinaryHeap<Reverse<(i64, usize)>> = (0..n).map(|v| Reverse((0, v))).collect();
    let mut touched = Vec::new();
    let mut in_touched = vec![false; n];
    for _ in 0..=n {
        // Dijkstra pass over nonnegative arcs.
        while let Some(Reverse((du, u))) = heap.pop() {
            if du != d[u] {
                continue;
            }
            if !in_touched[u] {
                in_touched[u] = true;
                touched.push(u);
            }
            for &id in g.out_edges(u) {
                let c = cost[id];
                if c < 0 {
                    continue;
                }
                stats.relaxations += 1;
                let v = g.edge(id).head;
                if du + c < d[v] {
                    d[v] = du + c;
                    heap.push(Reverse((d[v], v)));
                }
            }
        }
        // One pass over negative arcs leaving settled vertices.
        for &u in &touched {
            in_touched[u] = false;
            for &id in g.out_edges(u) {
                let c = cost[id];
                if c >= 0 {
                    continue;
                }
                stats.relaxations += 1;
                let v = g.edge(id).head;
                if d[u] + c < d[v] {
                    d[v] = d[u] + c;
                    if d[v] < floor {
                        return None;
                    }
                    heap.push(Reverse((d[v], v)));
                }
            }
        }
        touched.clear();
        if heap.is_empty() {
            return Some(d);
        }
    }
    None
}

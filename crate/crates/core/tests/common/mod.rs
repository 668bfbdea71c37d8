#![allow(dead_code)]

//! Reference implementations kept deliberately naive.

use sepshort_core::apsp::DistMatrix;
use sepshort_core::{DiGraph, Weight};

/// Textbook Floyd-Warshall over arc triples. `None` if any cycle is negative.
pub fn apsp(n: usize, arcs: &[(usize, usize, i64)]) -> Option<Vec<Vec<Option<i64>>>> {
    let mut d = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(0);
    }
    for &(u, v, w) in arcs {
        if d[u][v].is_none_or(|x| w < x) {
            d[u][v] = Some(w);
        }
    }
    for k in 0..n {
        for i in 0..n {
            let Some(ik) = d[i][k] else { continue };
            for j in 0..n {
                if let Some(kj) = d[k][j] {
                    if d[i][j].is_none_or(|x| ik + kj < x) {
                        d[i][j] = Some(ik + kj);
                    }
                }
            }
        }
    }
    if (0..n).any(|i| d[i][i].unwrap() < 0) {
        None
    } else {
        Some(d)
    }
}

pub fn graph_apsp(g: &DiGraph) -> Option<Vec<Vec<Option<i64>>>> {
    let arcs: Vec<_> = g.edges().iter().map(|e| (e.tail, e.head, e.len)).collect();
    apsp(g.n(), &arcs)
}

/// Plain Bellman-Ford with n full passes. `None` if a negative cycle is
/// reachable from `s`.
pub fn sssp(g: &DiGraph, s: usize) -> Option<Vec<Option<i64>>> {
    let n = g.n();
    let mut d: Vec<Option<i64>> = vec![None; n];
    d[s] = Some(0);
    for _ in 0..n {
        let mut changed = false;
        for e in g.edges() {
            if let Some(du) = d[e.tail] {
                if d[e.head].is_none_or(|x| du + e.len < x) {
                    d[e.head] = Some(du + e.len);
                    changed = true;
                }
            }
        }
        if !changed {
            return Some(d);
        }
    }
    for e in g.edges() {
        if let Some(du) = d[e.tail] {
            if d[e.head].is_none_or(|x| du + e.len < x) {
                return None;
            }
        }
    }
    Some(d)
}

pub fn as_opt(w: Weight) -> Option<i64> {
    w.get()
}

/// Closed distance matrix over `verts` from oracle distances, with
/// predecessors recomputed from tight arcs.
pub fn matrix_from(verts: Vec<usize>, arcs: &[(usize, usize, i64)]) -> Option<DistMatrix> {
    let k = verts.len();
    let d = apsp(k, arcs)?;
    let mut m = DistMatrix::unreachable(verts);
    for i in 0..k {
        // BFS over tight arcs gives an acyclic predecessor tree
        let mut pred = vec![None; k];
        let mut seen = vec![false; k];
        seen[i] = true;
        let mut queue = std::collections::VecDeque::from([i]);
        while let Some(x) = queue.pop_front() {
            for &(u, v, w) in arcs {
                if u == x && !seen[v] && d[i][v] == d[i][x].map(|dx| dx + w) {
                    seen[v] = true;
                    pred[v] = Some(x);
                    queue.push_back(v);
                }
            }
        }
        for j in 0..k {
            if let Some(x) = d[i][j] {
                m.set(i, j, Weight::finite(x), if i == j { None } else { pred[j] });
            }
        }
    }
    Some(m)
}

/// Small deterministic generator so oracles do not share code with the
/// library's generators.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        self.0 >> 33
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }

    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next() % (hi - lo + 1) as u64) as i64
    }

    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.next() % den < num
    }
}

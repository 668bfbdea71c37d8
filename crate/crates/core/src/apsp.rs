//! Dense distance matrices and Floyd-Warshall.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{DiGraph, Weight};

/// Marks "no predecessor" in a [`DistMatrix`].
pub const NO_PRED: u32 = u32::MAX;

/// All-pairs distances over an ordered vertex list.
///
/// Rows and columns are positions in `verts`. `pred(i, j)` is the position
/// of the vertex before `j` on a shortest `i -> j` path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistMatrix {
    verts: Vec<usize>,
    dist: Vec<Weight>,
    pred: Vec<u32>,
}

impl DistMatrix {
    /// Zero diagonal, everything else unreachable.
    pub fn unreachable(verts: Vec<usize>) -> DistMatrix {
        let n = verts.len();
        let mut dist = vec![Weight::INF; n * n];
        for i in 0..n {
            dist[i * n + i] = Weight::ZERO;
        }
        DistMatrix { verts, dist, pred: vec![NO_PRED; n * n] }
    }

    pub(crate) fn from_parts(verts: Vec<usize>, dist: Vec<Weight>, pred: Vec<u32>) -> DistMatrix {
        debug_assert_eq!(dist.len(), verts.len() * verts.len());
        debug_assert_eq!(pred.len(), dist.len());
        DistMatrix { verts, dist, pred }
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.verts.len()
    }

    pub fn verts(&self) -> &[usize] {
        &self.verts
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> Weight {
        self.dist[i * self.verts.len() + j]
    }

    #[inline]
    pub fn pred(&self, i: usize, j: usize) -> Option<usize> {
        match self.pred[i * self.verts.len() + j] {
            NO_PRED => None,
            p => Some(p as usize),
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, d: Weight, pred: Option<usize>) {
        let n = self.verts.len();
        self.dist[i * n + j] = d;
        self.pred[i * n + j] = pred.map_or(NO_PRED, |p| p as u32);
    }

    /// Position of vertex `v`, by linear scan.
    pub fn position(&self, v: usize) -> Option<usize> {
        self.verts.iter().position(|&x| x == v)
    }

    pub fn index(&self) -> HashMap<usize, usize> {
        self.verts.iter().enumerate().map(|(i, &v)| (v, i)).collect()
    }

    /// Distance between two vertex ids, `None` if either is absent.
    pub fn dist_between(&self, u: usize, v: usize) -> Option<Weight> {
        Some(self.dist(self.position(u)?, self.position(v)?))
    }

    /// The submatrix on `positions`, read as a complete graph: each finite
    /// off-diagonal entry is a direct arc, so its predecessor is the row.
    pub fn restrict(&self, positions: &[usize]) -> DistMatrix {
        let k = positions.len();
        let verts = positions.iter().map(|&p| self.verts[p]).collect();
        let mut dist = Vec::with_capacity(k * k);
        let mut pred = Vec::with_capacity(k * k);
        for (a, &i) in positions.iter().enumerate() {
            for &j in positions {
                let d = self.dist(i, j);
                dist.push(d);
                pred.push(if i != j && d.is_finite() { a as u32 } else { NO_PRED });
            }
        }
        DistMatrix { verts, dist, pred }
    }

    /// Positions along the shortest path `i -> j`, both ends included.
    pub fn walk(&self, i: usize, j: usize) -> Option<Vec<usize>> {
        if !self.dist(i, j).is_finite() {
            return None;
        }
        let mut out = vec![j];
        let mut x = j;
        while x != i {
            x = self.pred(i, x)?;
            out.push(x);
            if out.len() > self.size() + 1 {
                return None;
            }
        }
        out.reverse();
        Some(out)
    }

    /// Checks zero diagonal, the triangle inequality, and that pred walks
    /// add up to the stored distances (summing matrix entries of each hop).
    pub fn check_invariants(&self) -> Result<(), String> {
        let n = self.size();
        for i in 0..n {
            if self.dist(i, i) != Weight::ZERO {
                return Err(format!("dist({0}, {0}) = {1}", self.verts[i], self.dist(i, i)));
            }
        }
        for i in 0..n {
            for z in 0..n {
                let dz = self.dist(i, z);
                if !dz.is_finite() {
                    continue;
                }
                for j in 0..n {
                    let zj = self.dist(z, j);
                    if zj.is_finite() && dz + zj < self.dist(i, j) {
                        return Err(format!(
                            "triangle violated for ({}, {}, {})",
                            self.verts[i], self.verts[z], self.verts[j]
                        ));
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j || !self.dist(i, j).is_finite() {
                    continue;
                }
                let walk = self
                    .walk(i, j)
                    .ok_or_else(|| format!("pred walk {} -> {} broken", self.verts[i], self.verts[j]))?;
                let total = walk.windows(2).fold(Weight::ZERO, |acc, w| acc + self.dist(w[0], w[1]));
                if total != self.dist(i, j) {
                    return Err(format!("pred walk {} -> {} sums to {total}", self.verts[i], self.verts[j]));
                }
            }
        }
        Ok(())
    }

    /// Tab-separated dump with vertex ids as headers.
    pub fn to_tsv(&self) -> String {
        let mut s = String::from("-");
        for v in &self.verts {
            let _ = write!(s, "\t{v}");
        }
        s.push('\n');
        for i in 0..self.size() {
            let _ = write!(s, "{}", self.verts[i]);
            for j in 0..self.size() {
                let _ = write!(s, "\t{}", self.dist(i, j));
            }
            s.push('\n');
        }
        s
    }
}

/// In-place Floyd-Warshall over an `n x n` row-major matrix. Stops at the
/// first negative diagonal entry and returns its position.
pub(crate) fn fw_in_place(dist: &mut [Weight], pred: &mut [u32], n: usize, ops: &mut u64) -> Result<(), usize> {
    for k in 0..n {
        let row_k: Vec<Weight> = dist[k * n..(k + 1) * n].to_vec();
        let pred_k: Vec<u32> = pred[k * n..(k + 1) * n].to_vec();
        for i in 0..n {
            let dik = dist[i * n + k];
            if !dik.is_finite() {
                continue;
            }
            *ops += n as u64;
            let row = &mut dist[i * n..(i + 1) * n];
            let prow = &mut pred[i * n..(i + 1) * n];
            for j in 0..n {
                let dkj = row_k[j];
                if dkj.is_finite() {
                    let cand = dik + dkj;
                    if cand < row[j] {
                        row[j] = cand;
                        prow[j] = pred_k[j];
                    }
                }
            }
            if row[i] < Weight::ZERO {
                return Err(i);
            }
        }
    }
    Ok(())
}

/// Floyd-Warshall over all vertices of `g`, using the shortest of any
/// parallel edges. Fails with `NegativeCycleAt` on a negative cycle.
pub fn floyd_warshall(g: &DiGraph) -> Result<DistMatrix> {
    let verts: Vec<usize> = (0..g.n()).collect();
    floyd_warshall_on(g, &verts)
}

/// Floyd-Warshall on the subgraph induced by `verts`; matrix positions
/// follow `verts`.
pub fn floyd_warshall_on(g: &DiGraph, verts: &[usize]) -> Result<DistMatrix> {
    let n = verts.len();
    let mut m = DistMatrix::unreachable(verts.to_vec());
    let local: HashMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    for (i, &v) in verts.iter().enumerate() {
        for &id in g.out_edges(v) {
            let e = g.edge(id);
            let Some(&j) = local.get(&e.head) else { continue };
            let w = Weight::finite(e.len);
            if w < m.dist[i * n + j] {
                m.dist[i * n + j] = w;
                m.pred[i * n + j] = i as u32;
            }
        }
    }
    let mut ops = 0;
    fw_in_place(&mut m.dist, &mut m.pred, n, &mut ops).map_err(|i| Error::NegativeCycleAt { vertex: verts[i] })?;
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_graph_distances() {
        let g = DiGraph::from_triples(3, [(0, 1, 2), (1, 2, -5), (0, 2, 1)]).unwrap();
        let m = floyd_warshall(&g).unwrap();
        assert_eq!(m.dist(0, 2), Weight::finite(-3));
        assert_eq!(m.dist(2, 0), Weight::INF);
        assert_eq!(m.walk(0, 2).unwrap(), vec![0, 1, 2]);
        m.check_invariants().unwrap();
    }

    #[test]
    fn negative_loop_detected() {
        let g = DiGraph::from_triples(2, [(0, 1, 1), (1, 1, -1)]).unwrap();
        assert!(matches!(floyd_warshall(&g), Err(Error::NegativeCycleAt { vertex: 1 })));
    }

    #[test]
    fn zero_cycle_keeps_pred_acyclic() {
        let g = DiGraph::from_triples(3, [(0, 1, 0), (1, 0, 0), (1, 2, 0)]).unwrap();
        let m = floyd_warshall(&g).unwrap();
        m.check_invariants().unwrap();
    }

    #[test]
    fn restriction_reads_as_clique() {
        let g = DiGraph::from_triples(3, [(0, 1, 2), (1, 2, 3)]).unwrap();
        let m = floyd_warshall(&g).unwrap();
        let r = m.restrict(&[0, 2]);
        assert_eq!(r.verts(), &[0, 2]);
        assert_eq!(r.dist(0, 1), Weight::finite(5));
        assert_eq!(r.pred(0, 1), Some(0));
        r.check_invariants().unwrap();
    }

    #[test]
    fn tsv_dump_marks_unreachable() {
        let g = DiGraph::from_triples(2, [(0, 1, 4)]).unwrap();
        let tsv = floyd_warshall(&g).unwrap().to_tsv();
        assert!(tsv.contains("UNREACHABLE"));
        assert_eq!(tsv.lines().count(), 3);
    }
}

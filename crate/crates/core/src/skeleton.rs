//! Per-region boundary distance cliques and hop-bounded augmentations.
//!
//! A region is split recursively with [`double_balanced_split`] into
//! children `T_i ∪ X` whose boundaries are `X ∪ (B ∩ T_i)`. Each child's
//! boundary matrix is computed recursively; the children form a delta
//! system with core `X`, so [`merge_apsp`] yields distances over `X ∪ B`.
//! Small pieces are solved directly by Floyd-Warshall.
//!
//! The augmented graph holds the region's own edges plus, for every
//! recursion node, one arc per finite entry of that node's matrix. Between
//! any two region vertices it keeps distances and has a shortest path of
//! at most `hop_budget(depth)` arcs.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::apsp::{floyd_warshall_on, DistMatrix};
use crate::delta::{merge_apsp, DeltaSystem, Merged};
use crate::division::Region;
use crate::error::{Error, Result};
use crate::graph::{DiGraph, Edge, Weight};
use crate::separator::{double_balanced_split, SeparatorSpec};
use crate::sssp::{bellman_ford_bounded, SsspResult};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkeletonConfig {
    /// Pieces with at most this many vertices are solved directly.
    pub base_cap: usize,
    pub spec: SeparatorSpec,
    pub hop_a: usize,
    pub hop_b: usize,
}

impl Default for SkeletonConfig {
    fn default() -> Self {
        SkeletonConfig { base_cap: 32, spec: SeparatorSpec::default(), hop_a: 2, hop_b: 2 }
    }
}

impl SkeletonConfig {
    pub fn hop_budget(&self, depth: usize) -> usize {
        self.hop_a * depth + self.hop_b
    }
}

/// Hop budget with the default constants.
pub fn hop_budget(depth: usize) -> usize {
    SkeletonConfig::default().hop_budget(depth)
}

/// Where an arc of the augmented graph comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcOrigin {
    /// A local edge of the region.
    Local(usize),
    /// Entry `(from, to)` of a recursion node's matrix.
    Clique { node: u32, from: u32, to: u32 },
}

#[derive(Debug, Clone)]
enum NodeKind {
    Base(DistMatrix),
    Merge {
        merged: Merged,
        /// Per child: merged position -> position in the child's matrix.
        child_pos: Vec<Vec<u32>>,
    },
}

#[derive(Debug, Clone)]
pub struct RecursionNode {
    /// Sorted local vertex ids.
    pub vertices: Vec<usize>,
    /// Sorted local vertex ids.
    pub boundary: Vec<usize>,
    pub separator: Vec<usize>,
    pub children: Vec<usize>,
    pub depth: usize,
    kind: NodeKind,
}

impl RecursionNode {
    pub fn is_base(&self) -> bool {
        matches!(self.kind, NodeKind::Base(_))
    }

    /// Distances over the node's vertices (base) or over `X ∪ B` (merge),
    /// in local ids.
    pub fn matrix(&self) -> &DistMatrix {
        match &self.kind {
            NodeKind::Base(m) => m,
            NodeKind::Merge { merged, .. } => &merged.matrix,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SkeletonPair {
    pub region_id: usize,
    /// Region vertex ids, local id `i` is `vertices[i]`.
    pub vertices: Vec<usize>,
    /// Global edge id of each local edge.
    pub edge_ids: Vec<usize>,
    /// Boundary distances, over global vertex ids.
    pub h: DistMatrix,
    /// Augmented graph over local vertex ids.
    pub g_aug: DiGraph,
    pub aug_origin: Vec<ArcOrigin>,
    pub depth: usize,
    pub nodes: Vec<RecursionNode>,
    pub root: usize,
    local_graph: DiGraph,
}

struct Builder<'a> {
    g: &'a DiGraph,
    cfg: &'a SkeletonConfig,
    nodes: Vec<RecursionNode>,
}

impl Builder<'_> {
    fn base(&mut self, verts: Vec<usize>, boundary: Vec<usize>) -> Result<usize> {
        let m = floyd_warshall_on(self.g, &verts)?;
        self.nodes.push(RecursionNode {
            vertices: verts,
            boundary,
            separator: Vec::new(),
            children: Vec::new(),
            depth: 0,
            kind: NodeKind::Base(m),
        });
        Ok(self.nodes.len() - 1)
    }

    fn build(&mut self, verts: Vec<usize>, boundary: Vec<usize>) -> Result<usize> {
        if verts.len() <= self.cfg.base_cap {
            return self.base(verts, boundary);
        }
        let split = double_balanced_split(self.g, &verts, &boundary, &self.cfg.spec)?;
        let mut kids = Vec::new();
        for part in split.parts.iter().filter(|p| !p.is_empty()) {
            let mut cv: Vec<usize> = part.iter().chain(&split.x).copied().collect();
            cv.sort_unstable();
            let mut cb: Vec<usize> = split.x.clone();
            cb.extend(part.iter().filter(|v| boundary.binary_search(v).is_ok()));
            cb.sort_unstable();
            kids.push((cv, cb));
        }
        if kids.len() < 2 || kids.iter().any(|(cv, _)| cv.len() >= verts.len()) {
            return self.base(verts, boundary);
        }
        let mut children = Vec::with_capacity(kids.len());
        for (cv, cb) in kids {
            children.push(self.build(cv, cb)?);
        }
        let pieces: Vec<DistMatrix> = children
            .iter()
            .map(|&c| {
                let m = self.nodes[c].matrix();
                let idx = m.index();
                let pos: Vec<usize> = self.nodes[c].boundary.iter().map(|v| idx[v]).collect();
                m.restrict(&pos)
            })
            .collect();
        let merged = merge_apsp(&DeltaSystem::new(pieces, split.x.clone()))?;
        let child_pos = children
            .iter()
            .map(|&c| {
                let idx = self.nodes[c].matrix().index();
                merged.matrix.verts().iter().map(|v| idx.get(v).map_or(u32::MAX, |&p| p as u32)).collect()
            })
            .collect();
        let depth = 1 + children.iter().map(|&c| self.nodes[c].depth).max().unwrap_or(0);
        self.nodes.push(RecursionNode {
            vertices: verts,
            boundary,
            separator: split.x,
            children,
            depth,
            kind: NodeKind::Merge { merged, child_pos },
        });
        Ok(self.nodes.len() - 1)
    }
}

/// Build the boundary clique and augmented graph of `region`.
pub fn build_skeleton(region: &Region, cfg: &SkeletonConfig) -> Result<SkeletonPair> {
    if cfg.base_cap < 2 {
        return Err(Error::InvalidArgument("base_cap must be at least 2".into()));
    }
    let g = &region.local_graph;
    let local_b = region.local_boundary();
    let mut b = Builder { g, cfg, nodes: Vec::new() };
    let root = b
        .build((0..g.n()).collect(), local_b.clone())
        .map_err(|e| globalize(e, &region.vertices))?;
    let nodes = b.nodes;

    let rm = nodes[root].matrix();
    let idx = rm.index();
    let pos: Vec<usize> = local_b.iter().map(|v| idx[v]).collect();
    let hl = rm.restrict(&pos);
    let mut h = DistMatrix::unreachable(region.boundary.clone());
    for i in 0..hl.size() {
        for j in 0..hl.size() {
            h.set(i, j, hl.dist(i, j), hl.pred(i, j));
        }
    }

    let mut edges: Vec<Edge> = g.edges().to_vec();
    let mut aug_origin: Vec<ArcOrigin> = (0..g.m()).map(ArcOrigin::Local).collect();
    for (id, node) in nodes.iter().enumerate() {
        let m = node.matrix();
        for i in 0..m.size() {
            for j in 0..m.size() {
                if let (true, Some(len)) = (i != j, m.dist(i, j).get()) {
                    edges.push(Edge { tail: m.verts()[i], head: m.verts()[j], len });
                    aug_origin.push(ArcOrigin::Clique { node: id as u32, from: i as u32, to: j as u32 });
                }
            }
        }
    }
    let g_aug = DiGraph::new(g.n(), edges)?;
    Ok(SkeletonPair {
        region_id: region.id,
        vertices: region.vertices.clone(),
        edge_ids: region.edge_ids.clone(),
        h,
        g_aug,
        aug_origin,
        depth: nodes[root].depth,
        nodes,
        root,
        local_graph: g.clone(),
    })
}

fn globalize(e: Error, verts: &[usize]) -> Error {
    match e {
        Error::NegativeCycleAt { vertex } => Error::NegativeCycleAt { vertex: verts[vertex] },
        Error::BudgetUnmet { budget, mut best } => {
            for set in [&mut best.a, &mut best.b, &mut best.separator] {
                set.iter_mut().for_each(|v| *v = verts[*v]);
            }
            Error::BudgetUnmet { budget, best }
        }
        other => other,
    }
}

impl SkeletonPair {
    pub fn hop_budget(&self, cfg: &SkeletonConfig) -> usize {
        cfg.hop_budget(self.depth)
    }

    pub fn local_of(&self, v: usize) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    /// Delta systems merged at internal nodes, as (node id, system).
    pub fn delta_systems(&self) -> Vec<(usize, DeltaSystem)> {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| !n.is_base())
            .map(|(id, n)| {
                let pieces = n
                    .children
                    .iter()
                    .map(|&c| {
                        let m = self.nodes[c].matrix();
                        let idx = m.index();
                        let pos: Vec<usize> = self.nodes[c].boundary.iter().map(|v| idx[v]).collect();
                        m.restrict(&pos)
                    })
                    .collect();
                (id, DeltaSystem::new(pieces, n.separator.clone()))
            })
            .collect()
    }

    /// Append local edge ids realizing entry `(i, j)` of `node`'s matrix.
    fn expand_entry(&self, node: usize, i: usize, j: usize, out: &mut Vec<usize>) -> Result<()> {
        let nd = &self.nodes[node];
        let m = nd.matrix();
        let walk = m
            .walk(i, j)
            .ok_or_else(|| Error::Internal(format!("no predecessor walk in recursion node {node}")))?;
        for hop in walk.windows(2) {
            let (a, b) = (hop[0], hop[1]);
            match &nd.kind {
                NodeKind::Base(_) => {
                    let (u, v) = (m.verts()[a], m.verts()[b]);
                    let id = self
                        .local_graph
                        .out_edges(u)
                        .iter()
                        .copied()
                        .filter(|&id| self.local_graph.edge(id).head == v)
                        .min_by_key(|&id| (self.local_graph.edge(id).len, id))
                        .ok_or_else(|| Error::Internal(format!("no edge {u} -> {v} in base node {node}")))?;
                    out.push(id);
                }
                NodeKind::Merge { merged, child_pos } => {
                    let piece = merged
                        .piece_of_arc(a, b)
                        .ok_or_else(|| Error::Internal(format!("arc without piece in node {node}")))?;
                    let (ca, cb) = (child_pos[piece][a], child_pos[piece][b]);
                    self.expand_entry(nd.children[piece], ca as usize, cb as usize, out)?;
                }
            }
        }
        Ok(())
    }

    /// Local edge ids realizing augmented arc `arc`.
    pub fn expand_arc(&self, arc: usize) -> Result<Vec<usize>> {
        match self.aug_origin[arc] {
            ArcOrigin::Local(id) => Ok(vec![id]),
            ArcOrigin::Clique { node, from, to } => {
                let mut out = Vec::new();
                self.expand_entry(node as usize, from as usize, to as usize, &mut out)?;
                Ok(out)
            }
        }
    }

    /// Hop-bounded relaxation from local vertex `u` on the augmented graph.
    pub fn aug_distances(&self, u: usize, cfg: &SkeletonConfig) -> SsspResult {
        bellman_ford_bounded(&self.g_aug, u, self.hop_budget(cfg))
    }

    /// A shortest `u -> v` path inside the region, as global edge ids.
    pub fn expand_path(&self, u: usize, v: usize, cfg: &SkeletonConfig) -> Result<Vec<usize>> {
        let lu = self.local_of(u).ok_or(Error::Unreachable(v))?;
        let lv = self.local_of(v).ok_or(Error::Unreachable(v))?;
        let mut local = Vec::new();
        if let (Some(i), Some(j)) = (self.h.position(u), self.h.position(v)) {
            if !self.h.dist(i, j).is_finite() {
                return Err(Error::Unreachable(v));
            }
            let rm = self.nodes[self.root].matrix();
            let (ri, rj) = (rm.position(lu).expect("boundary in root"), rm.position(lv).expect("boundary in root"));
            self.expand_entry(self.root, ri, rj, &mut local)?;
        } else {
            let r = self.aug_distances(lu, cfg);
            let arcs = r.path_to(lv)?;
            for arc in arcs {
                local.extend(self.expand_arc(arc)?);
            }
        }
        Ok(local.into_iter().map(|id| self.edge_ids[id]).collect())
    }

    /// Indented dump of the recursion tree.
    pub fn dump_tree(&self) -> String {
        let mut s = String::new();
        let mut stack = vec![(self.root, 0usize)];
        while let Some((id, indent)) = stack.pop() {
            let n = &self.nodes[id];
            let _ = writeln!(
                s,
                "{:indent$}{} node {id}: |V|={} |B|={} |X|={} depth={}",
                "",
                if n.is_base() { "base" } else { "merge" },
                n.vertices.len(),
                n.boundary.len(),
                n.separator.len(),
                n.depth,
                indent = indent * 2
            );
            for &c in n.children.iter().rev() {
                stack.push((c, indent + 1));
            }
        }
        s
    }
}

/// Entries of `m` as a map from `(u, v)` vertex ids to distance.
pub fn matrix_entries(m: &DistMatrix) -> HashMap<(usize, usize), Weight> {
    let mut out = HashMap::new();
    for i in 0..m.size() {
        for j in 0..m.size() {
            out.insert((m.verts()[i], m.verts()[j]), m.dist(i, j));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apsp::floyd_warshall;
    use crate::division::{build_division, DivisionParams};
    use crate::gen::{gen_grid, WeightRule};

    fn single_region(g: &DiGraph, boundary: Vec<usize>) -> Region {
        let mut d = build_division(g, &DivisionParams::new(g.n().max(2), 0.5)).unwrap();
        assert_eq!(d.regions.len(), 1);
        let mut r = d.regions.remove(0);
        r.boundary = boundary;
        r
    }

    #[test]
    fn hop_budget_defaults() {
        assert_eq!(hop_budget(0), 2);
        assert!(hop_budget(3) > hop_budget(2));
    }

    #[test]
    fn one_edge_region() {
        let g = DiGraph::from_triples(2, [(0, 1, 7)]).unwrap();
        let r = single_region(&g, vec![0, 1]);
        let sp = build_skeleton(&r, &SkeletonConfig::default()).unwrap();
        assert_eq!(sp.h.dist(0, 1), Weight::finite(7));
        assert_eq!(sp.h.dist(1, 0), Weight::INF);
        assert_eq!(sp.expand_path(0, 1, &SkeletonConfig::default()).unwrap(), vec![0]);
        assert!(sp.g_aug.m() >= 1);
    }

    #[test]
    fn directed_four_cycle() {
        let g = DiGraph::from_triples(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)]).unwrap();
        let r = single_region(&g, vec![0, 2]);
        let sp = build_skeleton(&r, &SkeletonConfig::default()).unwrap();
        assert_eq!(sp.h.dist(0, 1), Weight::finite(2));
        assert_eq!(sp.h.dist(1, 0), Weight::finite(2));
        let p = sp.expand_path(0, 2, &SkeletonConfig::default()).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(g.path_length(&p), Some(2));
    }

    #[test]
    fn recursive_grid_region_is_exact() {
        let g = gen_grid(9, 9, WeightRule::Potential { max_cost: 5, max_potential: 4 }, 3).unwrap();
        let boundary: Vec<usize> = (0..9).chain(72..81).collect();
        let r = single_region(&g, boundary.clone());
        let cfg = SkeletonConfig { base_cap: 8, ..Default::default() };
        let sp = build_skeleton(&r, &cfg).unwrap();
        assert!(sp.depth >= 1, "{}", sp.dump_tree());
        let oracle = floyd_warshall(&g).unwrap();
        for (i, &u) in boundary.iter().enumerate() {
            for (j, &v) in boundary.iter().enumerate() {
                assert_eq!(sp.h.dist(i, j), oracle.dist(u, v));
            }
        }
        for (_, ds) in sp.delta_systems() {
            assert!(crate::delta::validate_delta(&ds).passed());
        }
        for u in 0..g.n() {
            let r = sp.aug_distances(u, &cfg);
            for v in 0..g.n() {
                assert_eq!(r.dist[v], oracle.dist(u, v), "{u} -> {v}");
            }
        }
    }
}

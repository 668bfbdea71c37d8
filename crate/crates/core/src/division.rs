//! Divisions of a graph into edge-disjoint regions with small boundaries.
//!
//! Regions are edge sets; a region's vertices are the endpoints of its
//! edges and its boundary is the set of vertices that also lie in another
//! region. [`build_division`] splits regions recursively, first by vertex
//! count until every region has at most `r` vertices, then by boundary
//! count until every boundary is at most `c_div * r^((2 - gamma) / 3)`.
//! Separator vertices go to both sides of a split; edges go to exactly one.

use std::collections::VecDeque;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DiGraph, Edge};
use crate::separator::{Adj, SeparatorSpec, Strategy};

#[derive(Debug, Clone)]
pub struct Region {
    pub id: usize,
    /// Sorted edge ids of the parent graph.
    pub edge_ids: Vec<usize>,
    /// Sorted global vertex ids; local vertex `i` is `vertices[i]`.
    pub vertices: Vec<usize>,
    /// Sorted global vertex ids.
    pub boundary: Vec<usize>,
    /// The region's edges over local vertex ids; local edge `i` is
    /// `edge_ids[i]`.
    pub local_graph: DiGraph,
}

impl Region {
    /// Region made of `edge_ids` of `g`, with an empty boundary.
    pub fn new(id: usize, g: &DiGraph, edge_ids: Vec<usize>) -> Region {
        let mut edge_ids = edge_ids;
        edge_ids.sort_unstable();
        Region::from_edges(id, g, edge_ids, None)
    }

    fn from_edges(id: usize, g: &DiGraph, edge_ids: Vec<usize>, isolated: Option<usize>) -> Region {
        let mut vertices: Vec<usize> = edge_ids.iter().flat_map(|&e| [g.edge(e).tail, g.edge(e).head]).collect();
        vertices.extend(isolated);
        vertices.sort_unstable();
        vertices.dedup();
        let local = |v: usize| vertices.binary_search(&v).expect("endpoint is a region vertex");
        let edges = edge_ids
            .iter()
            .map(|&id| {
                let e = g.edge(id);
                Edge { tail: local(e.tail), head: local(e.head), len: e.len }
            })
            .collect();
        let local_graph = DiGraph::new(vertices.len(), edges).expect("region edges are valid");
        Region { id, edge_ids, vertices, boundary: Vec::new(), local_graph }
    }

    /// Local id of global vertex `v`.
    pub fn local_of(&self, v: usize) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    /// Boundary as sorted local ids.
    pub fn local_boundary(&self) -> Vec<usize> {
        self.boundary.iter().map(|&v| self.local_of(v).expect("boundary vertex in region")).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivisionParams {
    pub r: usize,
    pub gamma: f64,
    pub strategy: Strategy,
    pub c_sep: f64,
    pub c_div: f64,
    pub c_cnt: f64,
}

impl DivisionParams {
    pub fn new(r: usize, gamma: f64) -> DivisionParams {
        DivisionParams { r, gamma, strategy: Strategy::BfsLevel, c_sep: 4.0, c_div: 8.0, c_cnt: 16.0 }
    }

    pub fn boundary_exponent(&self) -> f64 {
        (2.0 - self.gamma) / 3.0
    }

    pub fn boundary_bound(&self) -> f64 {
        self.c_div * (self.r as f64).powf(self.boundary_exponent())
    }

    pub fn count_bound(&self, n: usize) -> f64 {
        self.c_cnt * (n as f64 / self.r as f64).max(1.0)
    }

    fn separator_spec(&self) -> SeparatorSpec {
        let mut spec = SeparatorSpec { strategy: self.strategy, ..Default::default() };
        spec.budget.c_sep = self.c_sep;
        spec.budget.e_sep = self.boundary_exponent();
        spec
    }

    fn validate(&self) -> Result<()> {
        if self.r == 0 {
            return Err(Error::InvalidArgument("r must be at least 1".into()));
        }
        if !(self.gamma > 0.0 && self.gamma <= 0.5) {
            return Err(Error::InvalidArgument(format!("gamma {} not in (0, 1/2]", self.gamma)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Division {
    pub regions: Vec<Region>,
    pub params: DivisionParams,
    /// Vertices added to a boundary by [`Division::force_boundary`].
    pub forced: Vec<usize>,
}

impl Division {
    /// Put `v` on the boundary of the lowest-id region containing it and
    /// return that region's id.
    pub fn force_boundary(&mut self, v: usize) -> Option<usize> {
        let region = self.regions.iter_mut().find(|r| r.local_of(v).is_some())?;
        if let Err(pos) = region.boundary.binary_search(&v) {
            region.boundary.insert(pos, v);
        }
        if !self.forced.contains(&v) {
            self.forced.push(v);
        }
        Some(region.id)
    }

    /// Number of regions each vertex lies in.
    pub fn occurrences(&self, n: usize) -> Vec<u32> {
        let mut occ = vec![0u32; n];
        for r in &self.regions {
            for &v in &r.vertices {
                occ[v] += 1;
            }
        }
        occ
    }

    pub fn write_jsonl(&self, mut out: impl Write) -> std::io::Result<()> {
        for r in &self.regions {
            let rec = RegionRecord {
                id: r.id,
                vertices: r.vertices.clone(),
                edges: r.edge_ids.clone(),
                boundary: r.boundary.clone(),
            };
            serde_json::to_writer(&mut out, &rec)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Read regions written by [`Division::write_jsonl`]. Stored vertex and
    /// boundary lists are kept as written, so a checker can catch edits.
    pub fn read_jsonl(g: &DiGraph, input: impl BufRead, params: DivisionParams) -> Result<Division> {
        let mut regions = Vec::new();
        for (i, line) in input.lines().enumerate() {
            let line = line.map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: RegionRecord =
                serde_json::from_str(&line).map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?;
            if let Some(&e) = rec.edges.iter().find(|&&e| e >= g.m()) {
                return Err(Error::Parse { line: i + 1, msg: format!("edge {e} out of range") });
            }
            if let Some(&v) = rec.vertices.iter().chain(&rec.boundary).find(|&&v| v >= g.n()) {
                return Err(Error::Parse { line: i + 1, msg: format!("vertex {v} out of range") });
            }
            let isolated = if rec.edges.is_empty() { rec.vertices.first().copied() } else { None };
            let mut region = Region::from_edges(rec.id, g, rec.edges, isolated);
            region.vertices = rec.vertices;
            region.boundary = rec.boundary;
            if region.vertices.len() != region.local_graph.n() {
                // keep the stored list; verification will flag it
                region.local_graph = DiGraph::new(0, Vec::new()).expect("empty graph");
            }
            regions.push(region);
        }
        Ok(Division { regions, params, forced: Vec::new() })
    }
}

#[derive(Serialize, Deserialize)]
struct RegionRecord {
    id: usize,
    vertices: Vec<usize>,
    edges: Vec<usize>,
    boundary: Vec<usize>,
}

/// Split the edge set of a region in two. Returns `None` when the split
/// makes no progress.
fn split_region(g: &DiGraph, region: &Region, weights: &[u64], spec: &SeparatorSpec) -> Result<Option<[Vec<usize>; 2]>> {
    let local = &region.local_graph;
    let n = local.n();
    let verts: Vec<usize> = (0..n).collect();
    let adj = Adj::induced(local, &verts);
    let labels = match crate::separator::label_local(&adj, weights, spec, n) {
        Ok(l) => l,
        Err(best) => {
            let mut best = *best;
            for set in [&mut best.a, &mut best.b, &mut best.separator] {
                set.iter_mut().for_each(|v| *v = region.vertices[*v]);
            }
            return Err(Error::BudgetUnmet { budget: spec.budget.f_bound(n), best: Box::new(best) });
        }
    };
    let mut sides = [Vec::new(), Vec::new()];
    for (i, e) in local.edges().iter().enumerate() {
        let side = if labels[e.tail] == 1 || labels[e.head] == 1 { 1 } else { 0 };
        sides[side].push(region.edge_ids[i]);
    }
    let progress = sides.iter().all(|s| !s.is_empty()) && {
        let count = |s: &[usize]| {
            let mut vs: Vec<usize> = s.iter().flat_map(|&e| [g.edge(e).tail, g.edge(e).head]).collect();
            vs.sort_unstable();
            vs.dedup();
            vs.len()
        };
        sides.iter().all(|s| count(s) < n)
    };
    Ok(if progress { Some(sides) } else { None })
}

/// Halve the edge list in BFS order of the local graph.
fn halve_edges(region: &Region) -> [Vec<usize>; 2] {
    let local = &region.local_graph;
    let n = local.n();
    let mut order = Vec::with_capacity(local.m());
    let mut seen_v = vec![false; n];
    let mut seen_e = vec![false; local.m()];
    for s in 0..n {
        if seen_v[s] {
            continue;
        }
        seen_v[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &id in local.out_edges(u).iter().chain(local.in_edges(u)) {
                if !seen_e[id] {
                    seen_e[id] = true;
                    order.push(region.edge_ids[id]);
                }
                let e = local.edge(id);
                let w = if e.tail == u { e.head } else { e.tail };
                if !seen_v[w] {
                    seen_v[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let back = order.split_off(order.len() / 2);
    [order, back]
}

/// Build a division of `g` with regions of at most `r` vertices.
pub fn build_division(g: &DiGraph, params: &DivisionParams) -> Result<Division> {
    let n = g.n();
    params.validate()?;
    if params.r < 2 && g.edges().iter().any(|e| e.tail != e.head) {
        return Err(Error::InvalidArgument("r must be at least 2 when the graph has edges".into()));
    }
    let spec = params.separator_spec();
    let mut occ = vec![0u32; n];

    let mut done: Vec<Region> = Vec::new();
    if g.m() > 0 {
        let root = Region::from_edges(0, g, (0..g.m()).collect(), None);
        for &v in &root.vertices {
            occ[v] += 1;
        }
        // Size phase.
        let mut stack = vec![root];
        while let Some(region) = stack.pop() {
            if region.vertices.len() <= params.r {
                done.push(region);
                continue;
            }
            let unit = vec![1u64; region.vertices.len()];
            let halves = match split_region(g, &region, &unit, &spec)? {
                Some(h) => h,
                None => halve_edges(&region),
            };
            replace(g, &mut occ, &region, halves, &mut stack);
        }
        // Boundary phase.
        let bound = params.boundary_bound();
        let mut stack = std::mem::take(&mut done);
        stack.reverse();
        while let Some(region) = stack.pop() {
            let marks: Vec<u64> = region.vertices.iter().map(|&v| (occ[v] >= 2) as u64).collect();
            let nb: u64 = marks.iter().sum();
            if (nb as f64) <= bound || region.edge_ids.len() < 2 {
                done.push(region);
                continue;
            }
            let halves = match split_region(g, &region, &marks, &spec)? {
                Some(h) => h,
                None => halve_edges(&region),
            };
            replace(g, &mut occ, &region, halves, &mut stack);
        }
    }
    for v in 0..n {
        if occ[v] == 0 {
            done.push(Region::from_edges(0, g, Vec::new(), Some(v)));
        }
    }
    done.sort_by_key(|r| (r.edge_ids.first().copied().unwrap_or(usize::MAX), r.vertices[0]));
    for (id, r) in done.iter_mut().enumerate() {
        r.id = id;
        r.boundary = r.vertices.iter().copied().filter(|&v| occ[v] >= 2).collect();
    }
    Ok(Division { regions: done, params: *params, forced: Vec::new() })
}

fn replace(g: &DiGraph, occ: &mut [u32], region: &Region, halves: [Vec<usize>; 2], stack: &mut Vec<Region>) {
    for &v in &region.vertices {
        occ[v] -= 1;
    }
    let [mut a, mut b] = halves;
    a.sort_unstable();
    b.sort_unstable();
    // push the second half first so the first is processed next
    for part in [b, a] {
        let child = Region::from_edges(0, g, part, None);
        for &v in &child.vertices {
            occ[v] += 1;
        }
        stack.push(child);
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DivisionReport {
    pub violations: Vec<String>,
}

impl DivisionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check edge partition, vertex sets, boundaries (recomputed from scratch),
/// and the size, boundary and count bounds.
pub fn verify_division(g: &DiGraph, d: &Division) -> DivisionReport {
    let mut v = Vec::new();
    let p = &d.params;
    let mut owner = vec![usize::MAX; g.m()];
    for r in &d.regions {
        for &e in &r.edge_ids {
            if e >= g.m() {
                v.push(format!("edge partition: region {} lists unknown edge {e}", r.id));
            } else if owner[e] != usize::MAX {
                v.push(format!("edge partition: edge {e} in regions {} and {}", owner[e], r.id));
            } else {
                owner[e] = r.id;
            }
        }
    }
    if let Some(e) = owner.iter().position(|&o| o == usize::MAX) {
        v.push(format!("edge partition: edge {e} in no region"));
    }
    let mut occ = vec![0u32; g.n()];
    for r in &d.regions {
        let mut expect: Vec<usize> =
            r.edge_ids.iter().filter(|&&e| e < g.m()).flat_map(|&e| [g.edge(e).tail, g.edge(e).head]).collect();
        expect.sort_unstable();
        expect.dedup();
        let singleton = r.edge_ids.is_empty() && r.vertices.len() == 1;
        if !singleton && expect != r.vertices {
            v.push(format!("vertex set: region {} vertices are not its edge endpoints", r.id));
        }
        for &x in &r.vertices {
            if x < g.n() {
                occ[x] += 1;
            }
        }
        if r.vertices.len() > p.r.max(1) {
            v.push(format!("size: region {} has {} vertices > r = {}", r.id, r.vertices.len(), p.r));
        }
    }
    let bound = p.boundary_bound();
    for r in &d.regions {
        let mut expect: Vec<usize> = r.vertices.iter().copied().filter(|&x| x < g.n() && occ[x] >= 2).collect();
        for &f in &d.forced {
            if r.vertices.contains(&f) && r.boundary.contains(&f) && !expect.contains(&f) {
                expect.push(f);
            }
        }
        expect.sort_unstable();
        if expect != r.boundary {
            v.push(format!("boundary membership: region {} stores {:?}, expected {:?}", r.id, r.boundary, expect));
        }
        let slack = d.forced.iter().filter(|f| r.boundary.contains(f)).count() as f64;
        if r.boundary.len() as f64 > bound + slack {
            v.push(format!("boundary size: region {} has {} > {bound:.1}", r.id, r.boundary.len()));
        }
    }
    if d.regions.len() as f64 > p.count_bound(g.n()) {
        v.push(format!("region count: {} > {:.1}", d.regions.len(), p.count_bound(g.n())));
    }
    DivisionReport { violations: v }
}

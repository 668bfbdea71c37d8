//! Merging all-pairs distances of pieces that overlap only in a common core.
//!
//! Pieces `V_1..V_k` form a delta system when every two of them intersect
//! exactly in the core `T`. The union graph has an arc `(u, v)` of length
//! `D_i(u, v)` for every piece `i` holding both ends. [`merge_apsp`]
//! computes its distances in four phases:
//!
//! 1. a clique on `T` with the cheapest arc over pieces, closed by
//!    Floyd-Warshall;
//! 2. `T` to `W_i = V_i \ T`: `min_z D_T(u, z) + D_i(z, v)`;
//! 3. `W_i` to `T`: `min_z D_i(v, z) + D_T(z, u)`;
//! 4. `W` to `W`: `min_z D(u, z) + D(z, v)`, also against `D_i(u, v)` when
//!    both ends share a piece.

use std::collections::{HashMap, HashSet, VecDeque};
use std::ops::Range;

use crate::apsp::{fw_in_place, DistMatrix, NO_PRED};
use crate::error::{Error, Result};
use crate::graph::{DiGraph, Edge, Weight};

#[derive(Debug, Clone)]
pub struct DeltaSystem {
    pub pieces: Vec<DistMatrix>,
    /// Sorted core vertex ids.
    pub core: Vec<usize>,
}

impl DeltaSystem {
    pub fn new(pieces: Vec<DistMatrix>, mut core: Vec<usize>) -> DeltaSystem {
        core.sort_unstable();
        core.dedup();
        DeltaSystem { pieces, core }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DeltaReport {
    pub problems: Vec<String>,
}

impl DeltaReport {
    pub fn passed(&self) -> bool {
        self.problems.is_empty()
    }
}

fn structure_problems(ds: &DeltaSystem) -> Vec<String> {
    let mut problems = Vec::new();
    let core: HashSet<usize> = ds.core.iter().copied().collect();
    // owner of each non-core vertex
    let mut owner: HashMap<usize, usize> = HashMap::new();
    for (i, p) in ds.pieces.iter().enumerate() {
        let verts: HashSet<usize> = p.verts().iter().copied().collect();
        if verts.len() != p.size() {
            problems.push(format!("piece {i} lists a vertex twice"));
        }
        if let Some(c) = ds.core.iter().find(|c| !verts.contains(c)) {
            problems.push(format!("piece {i} misses core vertex {c}"));
        }
        for &v in &verts {
            if core.contains(&v) {
                continue;
            }
            if let Some(j) = owner.insert(v, i) {
                problems.push(format!("pieces {j} and {i} share non-core vertex {v}"));
            }
        }
    }
    problems
}

/// Checks pairwise intersections against the core and every piece's
/// matrix invariants.
pub fn validate_delta(ds: &DeltaSystem) -> DeltaReport {
    let mut problems = structure_problems(ds);
    for (i, p) in ds.pieces.iter().enumerate() {
        if let Err(e) = p.check_invariants() {
            problems.push(format!("piece {i}: {e}"));
        }
    }
    DeltaReport { problems }
}

/// Output of [`merge_apsp`].
#[derive(Debug, Clone)]
pub struct Merged {
    /// Distances over `T` followed by `W_1, ..., W_k`.
    pub matrix: DistMatrix,
    pub core_len: usize,
    /// Matrix positions of each `W_i`.
    pub piece_ranges: Vec<Range<usize>>,
    /// For core pairs, the piece whose arc is cheapest (`u8::MAX` if none).
    core_piece: Vec<u8>,
    /// Inner-loop iterations across all phases.
    pub ops: u64,
}

impl Merged {
    /// Piece owning position `p`, `None` for core positions.
    pub fn piece_of(&self, p: usize) -> Option<usize> {
        if p < self.core_len {
            return None;
        }
        self.piece_ranges.iter().position(|r| r.contains(&p))
    }

    /// The piece that supplies the union arc `p -> x`.
    pub fn piece_of_arc(&self, p: usize, x: usize) -> Option<usize> {
        match (self.piece_of(p), self.piece_of(x)) {
            (Some(i), _) | (None, Some(i)) => Some(i),
            (None, None) => match self.core_piece[p * self.core_len + x] {
                u8::MAX => None,
                i => Some(i as usize),
            },
        }
    }
}

/// Exact all-pairs distances of the union graph.
pub fn merge_apsp(ds: &DeltaSystem) -> Result<Merged> {
    let problems = structure_problems(ds);
    if !problems.is_empty() {
        return Err(Error::InvalidDelta(problems.join("; ")));
    }
    if ds.pieces.len() >= u8::MAX as usize {
        return Err(Error::InvalidDelta("too many pieces".into()));
    }
    for p in &ds.pieces {
        for i in 0..p.size() {
            let d = p.dist(i, i);
            if d < Weight::ZERO {
                return Err(Error::NegativeCycleAt { vertex: p.verts()[i] });
            }
            if d != Weight::ZERO {
                return Err(Error::InvalidDelta(format!("nonzero diagonal at {}", p.verts()[i])));
            }
        }
    }
    let t = ds.core.len();
    let k = ds.pieces.len();
    let mut ops = 0u64;

    // Per piece: positions of the core vertices and of its own vertices.
    let mut core_pos: Vec<Vec<usize>> = Vec::with_capacity(k);
    let mut own_pos: Vec<Vec<usize>> = Vec::with_capacity(k);
    let core_set: HashMap<usize, usize> = ds.core.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    for p in &ds.pieces {
        let mut cp = vec![0; t];
        let mut op = Vec::new();
        for (pos, v) in p.verts().iter().enumerate() {
            match core_set.get(v) {
                Some(&c) => cp[c] = pos,
                None => op.push(pos),
            }
        }
        core_pos.push(cp);
        own_pos.push(op);
    }

    let mut verts = ds.core.clone();
    let mut piece_ranges = Vec::with_capacity(k);
    for (i, p) in ds.pieces.iter().enumerate() {
        let start = verts.len();
        verts.extend(own_pos[i].iter().map(|&pos| p.verts()[pos]));
        piece_ranges.push(start..verts.len());
    }
    let n = verts.len();
    let mut dist = vec![Weight::INF; n * n];
    let mut pred = vec![NO_PRED; n * n];

    // Phase 1: core clique and its closure.
    let mut gt = vec![Weight::INF; t * t];
    let mut core_piece = vec![u8::MAX; t * t];
    for a in 0..t {
        gt[a * t + a] = Weight::ZERO;
    }
    for (i, p) in ds.pieces.iter().enumerate() {
        ops += (t * t) as u64;
        for a in 0..t {
            for b in 0..t {
                if a == b {
                    continue;
                }
                let d = p.dist(core_pos[i][a], core_pos[i][b]);
                if d < gt[a * t + b] {
                    gt[a * t + b] = d;
                    core_piece[a * t + b] = i as u8;
                }
            }
        }
    }
    let mut dt = gt.clone();
    let mut pt = vec![NO_PRED; t * t];
    for a in 0..t {
        for b in 0..t {
            if a != b && dt[a * t + b].is_finite() {
                pt[a * t + b] = a as u32;
            }
        }
    }
    fw_in_place(&mut dt, &mut pt, t, &mut ops).map_err(|a| Error::NegativeCycleAt { vertex: ds.core[a] })?;
    for a in 0..t {
        dist[a * n..a * n + t].copy_from_slice(&dt[a * t..(a + 1) * t]);
        pred[a * n..a * n + t].copy_from_slice(&pt[a * t..(a + 1) * t]);
    }

    // Phase 2: core rows into each piece.
    for (i, p) in ds.pieces.iter().enumerate() {
        for (off, &vp) in own_pos[i].iter().enumerate() {
            let col = piece_ranges[i].start + off;
            for a in 0..t {
                ops += t as u64;
                let mut best = Weight::INF;
                let mut arg = NO_PRED;
                for z in 0..t {
                    let d1 = dt[a * t + z];
                    if !d1.is_finite() {
                        continue;
                    }
                    let d2 = p.dist(core_pos[i][z], vp);
                    if d2.is_finite() && d1 + d2 < best {
                        best = d1 + d2;
                        arg = z as u32;
                    }
                }
                dist[a * n + col] = best;
                pred[a * n + col] = arg;
            }
        }
    }

    // Phase 3: piece rows into the core, with a BFS tree over tight arcs
    // for predecessors.
    let mut queue = VecDeque::with_capacity(t);
    let mut seen = vec![false; t];
    for (i, p) in ds.pieces.iter().enumerate() {
        for (off, &vp) in own_pos[i].iter().enumerate() {
            let row = piece_ranges[i].start + off;
            for a in 0..t {
                ops += t as u64;
                let mut best = Weight::INF;
                for z in 0..t {
                    let d1 = p.dist(vp, core_pos[i][z]);
                    let d2 = dt[z * t + a];
                    if d1.is_finite() && d2.is_finite() && d1 + d2 < best {
                        best = d1 + d2;
                    }
                }
                dist[row * n + a] = best;
            }
            seen.iter_mut().for_each(|s| *s = false);
            for z in 0..t {
                let d = p.dist(vp, core_pos[i][z]);
                if d.is_finite() && d == dist[row * n + z] {
                    seen[z] = true;
                    pred[row * n + z] = row as u32;
                    queue.push_back(z);
                }
            }
            while let Some(x) = queue.pop_front() {
                ops += t as u64;
                let dx = dist[row * n + x];
                for y in 0..t {
                    if seen[y] {
                        continue;
                    }
                    let arc = gt[x * t + y];
                    if arc.is_finite() && dx + arc == dist[row * n + y] {
                        seen[y] = true;
                        pred[row * n + y] = x as u32;
                        queue.push_back(y);
                    }
                }
            }
        }
    }

    // Phase 4: piece rows into piece columns.
    for (i, p) in ds.pieces.iter().enumerate() {
        for (ou, &up) in own_pos[i].iter().enumerate() {
            let row = piece_ranges[i].start + ou;
            for (j, range) in piece_ranges.iter().enumerate() {
                for (ov, col) in range.clone().enumerate() {
                    ops += t as u64;
                    let mut best = Weight::INF;
                    let mut arg = usize::MAX;
                    for z in 0..t {
                        let d1 = dist[row * n + z];
                        let d2 = dist[z * n + col];
                        if d1.is_finite() && d2.is_finite() && d1 + d2 < best {
                            best = d1 + d2;
                            arg = z;
                        }
                    }
                    let mut pr = if arg == usize::MAX { NO_PRED } else { pred[arg * n + col] };
                    if i == j {
                        let direct = p.dist(up, own_pos[i][ov]);
                        if row == col {
                            if best < Weight::ZERO {
                                return Err(Error::NegativeCycleAt { vertex: verts[row] });
                            }
                            best = Weight::ZERO;
                            pr = NO_PRED;
                        } else if direct.is_finite() && direct <= best {
                            best = direct;
                            pr = row as u32;
                        }
                    }
                    dist[row * n + col] = best;
                    pred[row * n + col] = pr;
                }
            }
        }
    }

    Ok(Merged {
        matrix: DistMatrix::from_parts(verts, dist, pred),
        core_len: t,
        piece_ranges,
        core_piece,
        ops,
    })
}

/// The explicit union graph, over vertices in merge order (core first),
/// with one arc per piece and finite ordered pair. Returns the graph and
/// its vertex ids.
pub fn union_graph(ds: &DeltaSystem) -> (DiGraph, Vec<usize>) {
    let mut verts = ds.core.clone();
    let core: HashSet<usize> = ds.core.iter().copied().collect();
    for p in &ds.pieces {
        verts.extend(p.verts().iter().filter(|v| !core.contains(v)));
    }
    let local: HashMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut edges = Vec::new();
    for p in &ds.pieces {
        for i in 0..p.size() {
            for j in 0..p.size() {
                if let (true, Some(len)) = (i != j, p.dist(i, j).get()) {
                    edges.push(Edge { tail: local[&p.verts()[i]], head: local[&p.verts()[j]], len });
                }
            }
        }
    }
    let g = DiGraph::new(verts.len(), edges).expect("union arcs are valid");
    (g, verts)
}

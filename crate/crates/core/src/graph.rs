//! Directed multigraphs with integer edge lengths, distance values, vertex
//! weightings and the DIMACS `.gr` format.

use std::fmt;
use std::io::{BufRead, Write};
use std::ops::Add;

use crate::error::{Error, Result};

/// Largest accepted |edge length|.
pub const MAX_LENGTH: i64 = (1 << 31) - 1;

/// Largest accepted vertex count. Together with [`MAX_LENGTH`] this keeps
/// twice the length of any simple path inside `i64`.
pub const MAX_VERTICES: usize = 1 << 30;

/// A distance value: a finite `i64` or the unreachable sentinel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(i64);

impl Weight {
    pub const INF: Weight = Weight(i64::MAX);
    pub const ZERO: Weight = Weight(0);

    #[inline]
    pub fn finite(v: i64) -> Weight {
        debug_assert!(v != i64::MAX);
        Weight(v)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.0 != i64::MAX
    }

    #[inline]
    pub fn get(self) -> Option<i64> {
        self.is_finite().then_some(self.0)
    }

    /// The raw value; `i64::MAX` for the sentinel.
    #[inline]
    pub fn raw(self) -> i64 {
        self.0
    }
}

impl Add for Weight {
    type Output = Weight;

    #[inline]
    fn add(self, rhs: Weight) -> Weight {
        if self.0 == i64::MAX || rhs.0 == i64::MAX {
            return Weight::INF;
        }
        match self.0.checked_add(rhs.0) {
            Some(v) if v != i64::MAX => Weight(v),
            _ => panic!("distance overflow: {} + {}", self.0, rhs.0),
        }
    }
}

impl Add<i64> for Weight {
    type Output = Weight;

    #[inline]
    fn add(self, rhs: i64) -> Weight {
        self + Weight::finite(rhs)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.get() {
            Some(v) => write!(f, "{v}"),
            None => f.write_str("UNREACHABLE"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub len: i64,
}

/// Immutable directed multigraph on vertices `0..n` with CSR indexes by
/// tail and by head. Parallel edges and self-loops are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiGraph {
    n: usize,
    edges: Vec<Edge>,
    out_off: Vec<usize>,
    out_ids: Vec<usize>,
    in_off: Vec<usize>,
    in_ids: Vec<usize>,
    l_max: i64,
}

impl DiGraph {
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<DiGraph> {
        if n > MAX_VERTICES {
            return Err(Error::Validation(format!("{n} vertices exceeds the limit of {MAX_VERTICES}")));
        }
        let mut l_max = 0;
        for (i, e) in edges.iter().enumerate() {
            if e.tail >= n || e.head >= n {
                return Err(Error::Validation(format!(
                    "edge {i} ({}, {}) has an endpoint outside 0..{n}",
                    e.tail, e.head
                )));
            }
            if e.len.abs() > MAX_LENGTH {
                return Err(Error::Validation(format!("edge {i} length {} exceeds 2^31-1", e.len)));
            }
            l_max = l_max.max(e.len.abs());
        }
        let (out_off, out_ids) = csr(n, &edges, |e| e.tail);
        let (in_off, in_ids) = csr(n, &edges, |e| e.head);
        Ok(DiGraph { n, edges, out_off, out_ids, in_off, in_ids, l_max })
    }

    pub fn from_triples(n: usize, triples: impl IntoIterator<Item = (usize, usize, i64)>) -> Result<DiGraph> {
        let edges = triples.into_iter().map(|(tail, head, len)| Edge { tail, head, len }).collect();
        DiGraph::new(n, edges)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, id: usize) -> Edge {
        self.edges[id]
    }

    /// Ids of edges leaving `v`.
    #[inline]
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_ids[self.out_off[v]..self.out_off[v + 1]]
    }

    /// Ids of edges entering `v`.
    #[inline]
    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_ids[self.in_off[v]..self.in_off[v + 1]]
    }

    /// Largest |length| over all edges.
    pub fn l_max(&self) -> i64 {
        self.l_max
    }

    /// Absolute value of the most negative length, 0 if none is negative.
    pub fn neg_magnitude(&self) -> i64 {
        self.edges.iter().map(|e| -e.len).max().unwrap_or(0).max(0)
    }

    /// Vertices reachable from any of `sources`, as a mask.
    pub fn reachable_from(&self, sources: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        let mut stack = Vec::new();
        for &s in sources {
            if !seen[s] {
                seen[s] = true;
                stack.push(s);
            }
        }
        while let Some(u) = stack.pop() {
            for &id in self.out_edges(u) {
                let v = self.edges[id].head;
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }

    /// Subgraph induced by `keep` (a mask), relabelled densely in id order.
    /// Returns the subgraph, the local-to-global vertex map and the
    /// local-to-global edge map.
    pub fn induced(&self, keep: &[bool]) -> (DiGraph, Vec<usize>, Vec<usize>) {
        let mut local = vec![usize::MAX; self.n];
        let mut to_global = Vec::new();
        for v in 0..self.n {
            if keep[v] {
                local[v] = to_global.len();
                to_global.push(v);
            }
        }
        let mut edges = Vec::new();
        let mut edge_map = Vec::new();
        for (id, e) in self.edges.iter().enumerate() {
            if keep[e.tail] && keep[e.head] {
                edges.push(Edge { tail: local[e.tail], head: local[e.head], len: e.len });
                edge_map.push(id);
            }
        }
        let g = DiGraph::new(to_global.len(), edges).expect("induced subgraph of a valid graph");
        (g, to_global, edge_map)
    }

    /// Sum of edge lengths along `path`, checking that the edges chain.
    pub fn path_length(&self, path: &[usize]) -> Option<i64> {
        let mut total = 0i64;
        for (i, &id) in path.iter().enumerate() {
            let e = *self.edges.get(id)?;
            if i > 0 && self.edges[path[i - 1]].head != e.tail {
                return None;
            }
            total += e.len;
        }
        Some(total)
    }
}

fn csr(n: usize, edges: &[Edge], key: impl Fn(&Edge) -> usize) -> (Vec<usize>, Vec<usize>) {
    let mut off = vec![0usize; n + 1];
    for e in edges {
        off[key(e) + 1] += 1;
    }
    for i in 0..n {
        off[i + 1] += off[i];
    }
    let mut fill = off.clone();
    let mut ids = vec![0usize; edges.len()];
    for (id, e) in edges.iter().enumerate() {
        let k = key(e);
        ids[fill[k]] = id;
        fill[k] += 1;
    }
    (off, ids)
}

/// Nonnegative integer vertex weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexWeighting {
    w: Vec<u64>,
    total: u64,
}

impl VertexWeighting {
    pub fn new(w: Vec<u64>) -> VertexWeighting {
        let total = w.iter().sum();
        VertexWeighting { w, total }
    }

    pub fn uniform(n: usize) -> VertexWeighting {
        VertexWeighting::new(vec![1; n])
    }

    /// Weight 1 on every vertex of `marked`, 0 elsewhere.
    pub fn indicator(n: usize, marked: impl IntoIterator<Item = usize>) -> VertexWeighting {
        let mut w = vec![0; n];
        for v in marked {
            w[v] = 1;
        }
        VertexWeighting::new(w)
    }

    #[inline]
    pub fn get(&self, v: usize) -> u64 {
        self.w[v]
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn sum_of(&self, vs: impl IntoIterator<Item = usize>) -> u64 {
        vs.into_iter().map(|v| self.w[v]).sum()
    }
}

/// Symmetric simple version of `g`: one arc in each direction per adjacent
/// pair, self-loops dropped, lengths set to 1.
pub fn underlying_undirected(g: &DiGraph) -> DiGraph {
    let mut pairs: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .filter(|e| e.tail != e.head)
        .flat_map(|e| [(e.tail, e.head), (e.head, e.tail)])
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    DiGraph::from_triples(g.n(), pairs.into_iter().map(|(u, v)| (u, v, 1))).expect("same vertex set")
}

/// Parse a DIMACS shortest-path `.gr` file (1-based ids).
pub fn load_dimacs(input: impl BufRead) -> Result<DiGraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::Parse { line: lineno, msg: e.to_string() })?;
        let mut tok = line.split_whitespace();
        let Some(kind) = tok.next() else { continue };
        let bad = |msg: &str| Error::Parse { line: lineno, msg: msg.to_string() };
        match kind {
            "c" => {}
            "p" => {
                if header.is_some() {
                    return Err(bad("duplicate problem line"));
                }
                if tok.next() != Some("sp") {
                    return Err(bad("expected `p sp <n> <m>`"));
                }
                let n = parse_num::<usize>(tok.next(), lineno, "vertex count")?;
                let m = parse_num::<usize>(tok.next(), lineno, "arc count")?;
                if tok.next().is_some() {
                    return Err(bad("trailing tokens on problem line"));
                }
                header = Some((n, m));
                edges.reserve(m);
            }
            "a" => {
                let Some((n, _)) = header else {
                    return Err(bad("arc before problem line"));
                };
                let u = parse_num::<usize>(tok.next(), lineno, "tail")?;
                let v = parse_num::<usize>(tok.next(), lineno, "head")?;
                let w = parse_num::<i64>(tok.next(), lineno, "length")?;
                if tok.next().is_some() {
                    return Err(bad("trailing tokens on arc line"));
                }
                if u == 0 || v == 0 || u > n || v > n {
                    return Err(Error::Validation(format!("line {lineno}: arc ({u}, {v}) outside 1..={n}")));
                }
                edges.push(Edge { tail: u - 1, head: v - 1, len: w });
            }
            _ => return Err(bad(&format!("unknown line type `{kind}`"))),
        }
    }
    let Some((n, m)) = header else {
        return Err(Error::Parse { line: 0, msg: "missing problem line".into() });
    };
    if edges.len() != m {
        return Err(Error::Validation(format!("problem line declares {m} arcs, found {}", edges.len())));
    }
    DiGraph::new(n, edges)
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::Parse { line, msg: format!("missing {what}") })?;
    tok.parse().map_err(|_| Error::Parse { line, msg: format!("bad {what} `{tok}`") })
}

/// Write `g` in DIMACS `.gr` form without comments.
pub fn save_dimacs(g: &DiGraph, mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "p sp {} {}", g.n(), g.m())?;
    for e in g.edges() {
        writeln!(out, "a {} {} {}", e.tail + 1, e.head + 1, e.len)?;
    }
    Ok(())
}

pub fn dimacs_string(g: &DiGraph) -> String {
    let mut buf = Vec::new();
    save_dimacs(g, &mut buf).expect("writing to a Vec");
    String::from_utf8(buf).expect("ascii")
}

//! Test-corpus generators.
//!
//! Generator specs are strings of the form `KIND:ROWSxCOLS:RULE[:nocycle]`
//! where `KIND` is `grid` (bidirected grid) or `tri` (random subgraph of a
//! triangulated grid with random orientations and shuffled ids), and `RULE`
//! is one of `unit`, `const=W`, `uniform=LO,HI` or `neg=C,P`. The `neg`
//! rule draws a base cost in `[0, C]` and a vertex potential in `[0, P]` and
//! uses `cost + p(tail) - p(head)`, so every cycle keeps its nonnegative
//! base cost. `nocycle` makes generation fail if the result has a negative
//! cycle.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{DiGraph, Edge};
use crate::sssp::find_negative_cycle;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightRule {
    Const(i64),
    Uniform { lo: i64, hi: i64 },
    Potential { max_cost: i64, max_potential: i64 },
}

impl WeightRule {
    fn potentials(&self, n: usize, rng: &mut ChaCha8Rng) -> Vec<i64> {
        match *self {
            WeightRule::Potential { max_potential, .. } => (0..n).map(|_| rng.gen_range(0..=max_potential)).collect(),
            _ => Vec::new(),
        }
    }

    fn draw(&self, u: usize, v: usize, pot: &[i64], rng: &mut ChaCha8Rng) -> i64 {
        match *self {
            WeightRule::Const(w) => w,
            WeightRule::Uniform { lo, hi } => rng.gen_range(lo..=hi),
            WeightRule::Potential { max_cost, .. } => rng.gen_range(0..=max_cost) + pot[u] - pot[v],
        }
    }
}

impl FromStr for WeightRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<WeightRule> {
        let bad = || Error::InvalidArgument(format!("bad weight rule `{s}`"));
        let nums = |body: &str| -> Result<Vec<i64>> {
            body.split(',').map(|t| t.trim().parse::<i64>().map_err(|_| bad())).collect()
        };
        if s == "unit" {
            return Ok(WeightRule::Const(1));
        }
        let (name, body) = s.split_once('=').ok_or_else(bad)?;
        let v = nums(body)?;
        match (name, v.as_slice()) {
            ("const", [w]) => Ok(WeightRule::Const(*w)),
            ("uniform", [lo, hi]) if lo <= hi => Ok(WeightRule::Uniform { lo: *lo, hi: *hi }),
            ("neg", [c, p]) if *c >= 0 && *p >= 0 => Ok(WeightRule::Potential { max_cost: *c, max_potential: *p }),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for WeightRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            WeightRule::Const(1) => f.write_str("unit"),
            WeightRule::Const(w) => write!(f, "const={w}"),
            WeightRule::Uniform { lo, hi } => write!(f, "uniform={lo},{hi}"),
            WeightRule::Potential { max_cost, max_potential } => write!(f, "neg={max_cost},{max_potential}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    Grid,
    Tri,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenSpec {
    pub kind: GenKind,
    pub rows: usize,
    pub cols: usize,
    pub rule: WeightRule,
    pub no_neg_cycle: bool,
}

impl FromStr for GenSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<GenSpec> {
        let bad = |why: &str| Error::InvalidArgument(format!("bad generator spec `{s}`: {why}"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() < 3 || parts.len() > 4 {
            return Err(bad("expected KIND:ROWSxCOLS:RULE[:nocycle]"));
        }
        let kind = match parts[0] {
            "grid" => GenKind::Grid,
            "tri" => GenKind::Tri,
            _ => return Err(bad("unknown kind")),
        };
        let (r, c) = parts[1].split_once('x').ok_or_else(|| bad("size must be ROWSxCOLS"))?;
        let rows = r.parse().map_err(|_| bad("rows"))?;
        let cols = c.parse().map_err(|_| bad("cols"))?;
        let rule = parts[2].parse()?;
        let no_neg_cycle = match parts.get(3) {
            None => false,
            Some(&"nocycle") => true,
            Some(_) => return Err(bad("unknown flag")),
        };
        Ok(GenSpec { kind, rows, cols, rule, no_neg_cycle })
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            GenKind::Grid => "grid",
            GenKind::Tri => "tri",
        };
        write!(f, "{kind}:{}x{}:{}", self.rows, self.cols, self.rule)?;
        if self.no_neg_cycle {
            f.write_str(":nocycle")?;
        }
        Ok(())
    }
}

pub fn generate(spec: &GenSpec, seed: u64) -> Result<DiGraph> {
    let g = match spec.kind {
        GenKind::Grid => gen_grid(spec.rows, spec.cols, spec.rule, seed)?,
        GenKind::Tri => gen_tri(spec.rows, spec.cols, spec.rule, seed)?,
    };
    if spec.no_neg_cycle {
        if let Some(c) = find_negative_cycle(&g) {
            return Err(Error::InvalidArgument(format!("`{spec}` produced a negative {c}")));
        }
    }
    Ok(g)
}

/// Bidirected `rows x cols` grid, vertex `r * cols + c`.
pub fn gen_grid(rows: usize, cols: usize, rule: WeightRule, seed: u64) -> Result<DiGraph> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidArgument("grid needs rows, cols >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rows * cols;
    let pot = rule.potentials(n, &mut rng);
    let mut edges = Vec::with_capacity(4 * n);
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            let mut link = |a: usize, b: usize| {
                edges.push(Edge { tail: a, head: b, len: rule.draw(a, b, &pot, &mut rng) });
                edges.push(Edge { tail: b, head: a, len: rule.draw(b, a, &pot, &mut rng) });
            };
            if c + 1 < cols {
                link(v, v + 1);
            }
            if r + 1 < rows {
                link(v, v + cols);
            }
        }
    }
    DiGraph::new(n, edges)
}

/// Random planar graph: a triangulated grid with one random diagonal per
/// cell, each undirected edge kept with probability 0.85 and oriented
/// forward, backward or both, and vertex ids shuffled.
pub fn gen_tri(rows: usize, cols: usize, rule: WeightRule, seed: u64) -> Result<DiGraph> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidArgument("grid needs rows, cols >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rows * cols;
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let pot = rule.potentials(n, &mut rng);
    let mut pairs = Vec::with_capacity(3 * n);
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                pairs.push((v, v + 1));
            }
            if r + 1 < rows {
                pairs.push((v, v + cols));
            }
            if r + 1 < rows && c + 1 < cols {
                if rng.gen_bool(0.5) {
                    pairs.push((v, v + cols + 1));
                } else {
                    pairs.push((v + 1, v + cols));
                }
            }
        }
    }
    let mut edges = Vec::with_capacity(2 * pairs.len());
    for (a, b) in pairs {
        if !rng.gen_bool(0.85) {
            continue;
        }
        let (a, b) = (perm[a], perm[b]);
        let dir = rng.gen_range(0..4);
        if dir != 1 {
            edges.push(Edge { tail: a, head: b, len: rule.draw(a, b, &pot, &mut rng) });
        }
        if dir != 2 {
            edges.push(Edge { tail: b, head: a, len: rule.draw(b, a, &pot, &mut rng) });
        }
    }
    DiGraph::new(n, edges)
}

/// Uniformly random arcs (no structure); used for engine differential tests.
pub fn gen_random(n: usize, m: usize, rule: WeightRule, seed: u64) -> Result<DiGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pot = rule.potentials(n, &mut rng);
    let edges = if n == 0 {
        Vec::new()
    } else {
        (0..m)
            .map(|_| {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                Edge { tail: u, head: v, len: rule.draw(u, v, &pot, &mut rng) }
            })
            .collect()
    };
    DiGraph::new(n, edges)
}

/// Make a negative cycle reachable from `source` by lowering the length of
/// one edge of an existing 2-cycle `u -> v -> u` with `u` reachable.
/// Returns `None` if no such 2-cycle exists.
pub fn plant_negative_cycle(g: &DiGraph, source: usize, seed: u64) -> Option<DiGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reach = g.reachable_from(&[source]);
    let mut candidates = Vec::new();
    for (id, e) in g.edges().iter().enumerate() {
        if e.tail == e.head || !reach[e.tail] {
            continue;
        }
        if let Some(&back) = g.out_edges(e.head).iter().find(|&&b| g.edge(b).head == e.tail) {
            candidates.push((id, back));
        }
    }
    let &(fwd, back) = candidates.choose(&mut rng)?;
    let mut edges = g.edges().to_vec();
    edges[back].len = -edges[fwd].len - rng.gen_range(1..=3);
    DiGraph::new(g.n(), edges).ok()
}

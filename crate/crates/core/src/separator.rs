//! Vertex separators under a size budget `c * n^e` and balance `alpha`.
//!
//! Three strategies produce separations: `exact` enumerates separator sets
//! by increasing size (small graphs only), `bfs-level` cuts one or two BFS
//! levels from a few pseudo-peripheral roots, and `local-search` polishes
//! the `bfs-level` result with greedy vertex moves. After removing the
//! separator, whole components are packed into the two sides, so every
//! result is a valid separation regardless of strategy.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{DiGraph, VertexWeighting};

/// Largest graph the `exact` strategy accepts.
pub const EXACT_CAP: usize = 16;

/// Number of smallest BFS levels combined pairwise by `bfs-level`.
const LEVEL_PAIR_POOL: usize = 24;

const SIDE_A: u8 = 0;
const SIDE_B: u8 = 1;
const SEP: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    Exact,
    #[default]
    BfsLevel,
    LocalSearch,
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Strategy> {
        match s {
            "exact" => Ok(Strategy::Exact),
            "bfs-level" => Ok(Strategy::BfsLevel),
            "local-search" => Ok(Strategy::LocalSearch),
            _ => Err(Error::InvalidArgument(format!("unknown separator strategy `{s}`"))),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Exact => "exact",
            Strategy::BfsLevel => "bfs-level",
            Strategy::LocalSearch => "local-search",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparatorBudget {
    pub c_sep: f64,
    pub e_sep: f64,
    pub alpha: f64,
}

impl Default for SeparatorBudget {
    fn default() -> Self {
        SeparatorBudget { c_sep: 4.0, e_sep: 0.5, alpha: 2.0 / 3.0 }
    }
}

impl SeparatorBudget {
    pub fn new(c_sep: f64, e_sep: f64, alpha: f64) -> Result<SeparatorBudget> {
        let b = SeparatorBudget { c_sep, e_sep, alpha };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidArgument(format!("alpha {} not in (0, 1)", self.alpha)));
        }
        if !(self.c_sep > 0.0) {
            return Err(Error::InvalidArgument(format!("c_sep {} must be positive", self.c_sep)));
        }
        if !(self.e_sep > 0.0 && self.e_sep <= 1.0) {
            return Err(Error::InvalidArgument(format!("e_sep {} not in (0, 1]", self.e_sep)));
        }
        Ok(())
    }

    /// Largest separator allowed on an `n`-vertex graph.
    pub fn f_bound(&self, n: usize) -> usize {
        (self.c_sep * (n as f64).powf(self.e_sep)).floor() as usize
    }
}

/// A strategy plus budget, parseable from `strategy=bfs-level,c=4,e=0.5,alpha=0.667`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SeparatorSpec {
    pub strategy: Strategy,
    pub budget: SeparatorBudget,
}

impl FromStr for SeparatorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<SeparatorSpec> {
        let mut spec = SeparatorSpec::default();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("expected key=value, got `{item}`")))?;
            let num = || v.parse::<f64>().map_err(|_| Error::InvalidArgument(format!("bad number `{v}` for `{k}`")));
            match k {
                "strategy" => spec.strategy = v.parse()?,
                "c" => spec.budget.c_sep = num()?,
                "e" => spec.budget.e_sep = num()?,
                "alpha" => spec.budget.alpha = num()?,
                _ => return Err(Error::InvalidArgument(format!("unknown separator key `{k}`"))),
            }
        }
        spec.budget.validate()?;
        Ok(spec)
    }
}

/// A separation `(A, B)` with `separator = A ∩ B`, all sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct Separation {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub separator: Vec<usize>,
    /// Achieved `max(w(A\B), w(B\A)) / w(G)`, 0 when `w(G) = 0`.
    pub alpha: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SeparationReport {
    pub violations: Vec<String>,
}

impl SeparationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check the separation invariants against `g` and `w`, using the
/// separation's own reported `alpha`.
pub fn verify_separation(g: &DiGraph, w: &VertexWeighting, s: &Separation) -> SeparationReport {
    let n = g.n();
    let mut report = SeparationReport::default();
    let mut in_a = vec![false; n];
    let mut in_b = vec![false; n];
    for (set, mask, name) in [(&s.a, &mut in_a, "A"), (&s.b, &mut in_b, "B")] {
        for &v in set.iter() {
            if v >= n {
                report.violations.push(format!("{name} contains vertex {v} outside the graph"));
            } else {
                mask[v] = true;
            }
        }
    }
    if !report.passed() {
        return report;
    }
    if let Some(v) = (0..n).find(|&v| !in_a[v] && !in_b[v]) {
        report.violations.push(format!("A ∪ B misses vertex {v}"));
    }
    let mut sep: Vec<usize> = (0..n).filter(|&v| in_a[v] && in_b[v]).collect();
    let mut declared = s.separator.clone();
    declared.sort_unstable();
    declared.dedup();
    sep.sort_unstable();
    if sep != declared {
        report.violations.push("declared separator differs from A ∩ B".to_string());
    }
    for (id, e) in g.edges().iter().enumerate() {
        let (u, v) = (e.tail, e.head);
        let a_only = |x: usize| in_a[x] && !in_b[x];
        let b_only = |x: usize| in_b[x] && !in_a[x];
        if (a_only(u) && b_only(v)) || (b_only(u) && a_only(v)) {
            report.violations.push(format!("edge {id} ({u}, {v}) crosses from A\\B to B\\A"));
        }
    }
    let total = w.total();
    let wa = w.sum_of((0..n).filter(|&v| in_a[v] && !in_b[v]));
    let wb = w.sum_of((0..n).filter(|&v| in_b[v] && !in_a[v]));
    for (side, x) in [("A\\B", wa), ("B\\A", wb)] {
        if !within(x, total, s.alpha) {
            report
                .violations
                .push(format!("w({side}) = {x} exceeds alpha {:.4} of w(G) = {total}", s.alpha));
        }
    }
    report
}

#[inline]
fn within(x: u64, total: u64, alpha: f64) -> bool {
    x as f64 <= alpha * total as f64 + 1e-9
}

/// Undirected simple adjacency over local indices `0..n`.
pub(crate) struct Adj {
    off: Vec<usize>,
    nbr: Vec<usize>,
}

impl Adj {
    /// Underlying undirected graph of `g` induced on `verts` (sorted or
    /// not); local index `i` stands for `verts[i]`.
    pub(crate) fn induced(g: &DiGraph, verts: &[usize]) -> Adj {
        let mut local = std::collections::HashMap::with_capacity(verts.len());
        for (i, &v) in verts.iter().enumerate() {
            local.insert(v, i);
        }
        let mut pairs = Vec::new();
        for (i, &v) in verts.iter().enumerate() {
            for &id in g.out_edges(v) {
                let h = g.edge(id).head;
                if h == v {
                    continue;
                }
                if let Some(&j) = local.get(&h) {
                    pairs.push((i, j));
                    pairs.push((j, i));
                }
            }
        }
        Adj::from_pairs(verts.len(), pairs)
    }

    fn from_pairs(n: usize, mut pairs: Vec<(usize, usize)>) -> Adj {
        pairs.sort_unstable();
        pairs.dedup();
        let mut off = vec![0usize; n + 1];
        for &(u, _) in &pairs {
            off[u + 1] += 1;
        }
        for i in 0..n {
            off[i + 1] += off[i];
        }
        Adj { off, nbr: pairs.into_iter().map(|(_, v)| v).collect() }
    }

    #[inline]
    fn n(&self) -> usize {
        self.off.len() - 1
    }

    #[inline]
    fn nbrs(&self, v: usize) -> &[usize] {
        &self.nbr[self.off[v]..self.off[v + 1]]
    }
}

/// Local labelling: `SIDE_A`, `SIDE_B` or `SEP` per vertex.
type Labels = Vec<u8>;

struct Outcome {
    labels: Labels,
    sep_size: usize,
    max_side: u64,
}

/// Separate the local graph. `Ok` carries a balanced separation within
/// `limit`; `Err` carries the best balanced one found above it.
fn separate_local(adj: &Adj, w: &[u64], alpha: f64, limit: usize, strategy: Strategy) -> Result<Outcome, Outcome> {
    let total: u64 = w.iter().sum();
    let best = match strategy {
        Strategy::Exact => exact(adj, w, alpha),
        Strategy::BfsLevel => bfs_level(adj, w, alpha),
        Strategy::LocalSearch => {
            let start = bfs_level(adj, w, alpha);
            local_search(adj, w, alpha, start)
        }
    };
    debug_assert!(within(best.max_side, total, alpha));
    if best.sep_size <= limit {
        Ok(best)
    } else {
        Err(best)
    }
}

fn to_separation(verts: &[usize], o: &Outcome, total: u64) -> Separation {
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut separator = Vec::new();
    for (i, &l) in o.labels.iter().enumerate() {
        let v = verts[i];
        match l {
            SIDE_A => a.push(v),
            SIDE_B => b.push(v),
            _ => {
                a.push(v);
                b.push(v);
                separator.push(v);
            }
        }
    }
    a.sort_unstable();
    b.sort_unstable();
    separator.sort_unstable();
    let alpha = if total == 0 { 0.0 } else { o.max_side as f64 / total as f64 };
    Separation { a, b, separator, alpha }
}

/// Labels (0 = A only, 1 = B only, 2 = separator) of a local separation
/// within `spec`'s budget for `n` vertices; otherwise the best one found,
/// in local ids.
pub(crate) fn label_local(adj: &Adj, w: &[u64], spec: &SeparatorSpec, n: usize) -> Result<Vec<u8>, Box<Separation>> {
    let limit = spec.budget.f_bound(n);
    match separate_local(adj, w, spec.budget.alpha, limit, spec.strategy) {
        Ok(o) => Ok(o.labels),
        Err(o) => {
            let verts: Vec<usize> = (0..adj.n()).collect();
            Err(Box::new(to_separation(&verts, &o, w.iter().sum())))
        }
    }
}

/// Separate `g` (as an undirected graph) under weights `w`.
pub fn separate(g: &DiGraph, w: &VertexWeighting, budget: &SeparatorBudget, strategy: Strategy) -> Result<Separation> {
    budget.validate()?;
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidArgument("separate needs at least 2 vertices".into()));
    }
    if w.len() != n {
        return Err(Error::InvalidArgument("weighting size differs from vertex count".into()));
    }
    if strategy == Strategy::Exact && n > EXACT_CAP {
        return Err(Error::InvalidArgument(format!("exact strategy supports at most {EXACT_CAP} vertices")));
    }
    let verts: Vec<usize> = (0..n).collect();
    let adj = Adj::induced(g, &verts);
    let weights: Vec<u64> = (0..n).map(|v| w.get(v)).collect();
    let limit = budget.f_bound(n);
    match separate_local(&adj, &weights, budget.alpha, limit, strategy) {
        Ok(o) => Ok(to_separation(&verts, &o, w.total())),
        Err(o) => Err(Error::BudgetUnmet { budget: limit, best: Box::new(to_separation(&verts, &o, w.total())) }),
    }
}

/// Connected components after removing `removed`; returns component id per
/// vertex (`usize::MAX` for removed vertices) and component weights.
fn components(adj: &Adj, w: &[u64], removed: &[bool]) -> (Vec<usize>, Vec<u64>) {
    let n = adj.n();
    let mut comp = vec![usize::MAX; n];
    let mut weights = Vec::new();
    let mut stack = Vec::new();
    for s in 0..n {
        if removed[s] || comp[s] != usize::MAX {
            continue;
        }
        let c = weights.len();
        let mut cw = 0;
        comp[s] = c;
        stack.push(s);
        while let Some(u) = stack.pop() {
            cw += w[u];
            for &v in adj.nbrs(u) {
                if !removed[v] && comp[v] == usize::MAX {
                    comp[v] = c;
                    stack.push(v);
                }
            }
        }
        weights.push(cw);
    }
    (comp, weights)
}

/// Longest-processing-time packing of `items` into two bins; returns the
/// bin per item and the heavier bin's weight.
fn pack_two(items: &[u64]) -> (Vec<u8>, u64) {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| items[b].cmp(&items[a]).then(a.cmp(&b)));
    let mut bins = [0u64; 2];
    let mut side = vec![SIDE_A; items.len()];
    for i in order {
        let t = if bins[1] < bins[0] { 1 } else { 0 };
        bins[t] += items[i];
        side[i] = t as u8;
    }
    (side, bins[0].max(bins[1]))
}

/// Exact two-bin packing by enumeration; items beyond 20 fall back to LPT.
fn pack_two_exact(items: &[u64]) -> (Vec<u8>, u64) {
    let c = items.len();
    if c == 0 {
        return (Vec::new(), 0);
    }
    if c > 20 {
        return pack_two(items);
    }
    let total: u64 = items.iter().sum();
    let mut best = (u64::MAX, 0u32);
    // item 0 always in bin A
    for mask in 0..(1u32 << (c - 1)) {
        let mut wb = 0;
        for i in 1..c {
            if mask >> (i - 1) & 1 == 1 {
                wb += items[i];
            }
        }
        let m = wb.max(total - wb);
        if m < best.0 {
            best = (m, mask);
        }
    }
    let side = (0..c)
        .map(|i| if i > 0 && best.1 >> (i - 1) & 1 == 1 { SIDE_B } else { SIDE_A })
        .collect();
    (side, best.0)
}

fn exact(adj: &Adj, w: &[u64], alpha: f64) -> Outcome {
    let n = adj.n();
    let total: u64 = w.iter().sum();
    for k in 0..=n {
        let mut best: Option<Outcome> = None;
        let mut combo: Vec<usize> = (0..k).collect();
        loop {
            let mut removed = vec![false; n];
            for &v in &combo {
                removed[v] = true;
            }
            let (comp, cw) = components(adj, w, &removed);
            let (side, max_side) = pack_two_exact(&cw);
            if within(max_side, total, alpha) && best.as_ref().is_none_or(|b| max_side < b.max_side) {
                let labels = (0..n).map(|v| if removed[v] { SEP } else { side[comp[v]] }).collect();
                best = Some(Outcome { labels, sep_size: k, max_side });
            }
            if !next_combination(&mut combo, n) {
                break;
            }
        }
        if let Some(b) = best {
            return b;
        }
    }
    unreachable!("separating every vertex is always balanced")
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// BFS levels from `root` restricted to vertices with `comp[v] == c`.
fn bfs_levels(adj: &Adj, root: usize, comp: &[usize], c: usize, level: &mut [usize]) -> Vec<Vec<usize>> {
    let mut levels: Vec<Vec<usize>> = vec![vec![root]];
    level[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &v in adj.nbrs(u) {
            if comp[v] == c && level[v] == usize::MAX {
                level[v] = level[u] + 1;
                if levels.len() <= level[v] {
                    levels.push(Vec::new());
                }
                levels[level[v]].push(v);
                queue.push_back(v);
            }
        }
    }
    levels
}

fn bfs_level(adj: &Adj, w: &[u64], alpha: f64) -> Outcome {
    let n = adj.n();
    let total: u64 = w.iter().sum();
    let (comp, cw) = components(adj, w, &vec![false; n]);

    // Whole components only, empty separator.
    let mut best = {
        let (side, max_side) = pack_two(&cw);
        let labels = (0..n).map(|v| side[comp[v]]).collect();
        Outcome { labels, sep_size: 0, max_side }
    };
    if within(best.max_side, total, alpha) {
        return best;
    }
    // Fallback: everything in the separator.
    let mut best_ok = false;
    let fallback = Outcome { labels: vec![SEP; n], sep_size: n, max_side: 0 };

    // Cut levels of the heaviest component (lowest id on ties).
    let heavy = (0..cw.len()).max_by(|&a, &b| cw[a].cmp(&cw[b]).then(b.cmp(&a))).expect("n >= 1");
    let others: Vec<u64> = cw.iter().enumerate().filter(|&(c, _)| c != heavy).map(|(_, &x)| x).collect();
    let other_ids: Vec<usize> = (0..cw.len()).filter(|&c| c != heavy).collect();

    let mut level = vec![usize::MAX; n];
    let first = (0..n).find(|&v| comp[v] == heavy).expect("component is nonempty");
    let mut roots = vec![first];
    for _ in 0..2 {
        let r = *roots.last().expect("nonempty");
        let levels = bfs_levels(adj, r, &comp, heavy, &mut level);
        for lv in &levels {
            for &v in lv {
                level[v] = usize::MAX;
            }
        }
        let far = *levels.last().expect("root level").iter().min().expect("nonempty level");
        if roots.contains(&far) {
            break;
        }
        roots.push(far);
    }

    for &root in &roots {
        let levels = bfs_levels(adj, root, &comp, heavy, &mut level);
        let lw: Vec<u64> = levels.iter().map(|l| l.iter().map(|&v| w[v]).sum()).collect();
        let d = levels.len();
        let mut prefix = vec![0u64; d + 1];
        for i in 0..d {
            prefix[i + 1] = prefix[i] + lw[i];
        }
        // Candidate cuts as sorted lists of removed levels.
        let mut cands: Vec<Vec<usize>> = (0..d).map(|i| vec![i]).collect();
        let mut pool: Vec<usize> = (0..d).collect();
        pool.sort_by_key(|&i| (levels[i].len(), i));
        pool.truncate(LEVEL_PAIR_POOL);
        pool.sort_unstable();
        for (x, &i) in pool.iter().enumerate() {
            for &j in &pool[x + 1..] {
                if j > i + 1 {
                    cands.push(vec![i, j]);
                }
            }
        }
        for cut in cands {
            let size: usize = cut.iter().map(|&i| levels[i].len()).sum();
            if best_ok && size > best.sep_size {
                continue;
            }
            // Items: the level intervals between cuts, then other components.
            let mut items = Vec::with_capacity(cut.len() + 1 + others.len());
            let mut lo = 0;
            for &i in &cut {
                items.push(prefix[i] - prefix[lo]);
                lo = i + 1;
            }
            items.push(prefix[d] - prefix[lo.min(d)]);
            items.extend_from_slice(&others);
            let (side, max_side) = pack_two(&items);
            if !within(max_side, total, alpha) {
                continue;
            }
            if best_ok && (size, max_side) >= (best.sep_size, best.max_side) {
                continue;
            }
            let mut labels = vec![SIDE_A; n];
            for v in 0..n {
                if comp[v] != heavy {
                    let k = other_ids.binary_search(&comp[v]).expect("other component");
                    labels[v] = side[cut.len() + 1 + k];
                }
            }
            for (li, lv) in levels.iter().enumerate() {
                let item = cut.iter().take_while(|&&c| c < li).count();
                let l = if cut.contains(&li) { SEP } else { side[item] };
                for &v in lv {
                    labels[v] = l;
                }
            }
            best = Outcome { labels, sep_size: size, max_side };
            best_ok = true;
        }
        for lv in &levels {
            for &v in lv {
                level[v] = usize::MAX;
            }
        }
    }
    if best_ok {
        best
    } else {
        fallback
    }
}

/// Greedy moves of separator vertices into a side: a move into side X
/// pulls the vertex's neighbours on the other side into the separator.
/// Accepts moves that shrink the separator, or keep its size while
/// lowering the heavier side.
fn local_search(adj: &Adj, w: &[u64], alpha: f64, start: Outcome) -> Outcome {
    let n = adj.n();
    let total: u64 = w.iter().sum();
    let mut labels = start.labels;
    let mut side_w = [0u64; 2];
    for v in 0..n {
        if labels[v] != SEP {
            side_w[labels[v] as usize] += w[v];
        }
    }
    let mut sep_size = start.sep_size as i64;
    for _pass in 0..64 {
        let mut improved = false;
        for v in 0..n {
            if labels[v] != SEP {
                continue;
            }
            let mut choice: Option<(i64, u64, u8)> = None;
            for to in [SIDE_A, SIDE_B] {
                let from = 1 - to;
                let pulled: Vec<usize> = adj.nbrs(v).iter().copied().filter(|&u| labels[u] == from).collect();
                let gain = 1 - pulled.len() as i64;
                let mut nw = side_w;
                nw[to as usize] += w[v];
                nw[from as usize] -= pulled.iter().map(|&u| w[u]).sum::<u64>();
                let max_side = nw[0].max(nw[1]);
                if !within(max_side, total, alpha) {
                    continue;
                }
                let ok = gain > 0 || (gain == 0 && max_side < side_w[0].max(side_w[1]));
                if ok && choice.is_none_or(|(g, m, _)| (gain, std::cmp::Reverse(max_side)) > (g, std::cmp::Reverse(m))) {
                    choice = Some((gain, max_side, to));
                }
            }
            if let Some((gain, _, to)) = choice {
                let from = 1 - to;
                let pulled: Vec<usize> = adj.nbrs(v).iter().copied().filter(|&u| labels[u] == from).collect();
                for u in pulled {
                    labels[u] = SEP;
                    side_w[from as usize] -= w[u];
                }
                labels[v] = to;
                side_w[to as usize] += w[v];
                sep_size -= gain;
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    Outcome { labels, sep_size: sep_size as usize, max_side: side_w[0].max(side_w[1]) }
}

/// Result of [`double_balanced_split`]: separator `x` and three pieces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub x: Vec<usize>,
    pub parts: [Vec<usize>; 3],
}

/// Split `region` into `X, T1, T2, T3` so that every `T_i` holds at most
/// `alpha` of the region and of `boundary`. First a uniform-weight
/// separation; then, if one side holds more than half of the boundary,
/// that side is separated again under boundary-indicator weights.
pub fn double_balanced_split(g: &DiGraph, region: &[usize], boundary: &[usize], spec: &SeparatorSpec) -> Result<Split> {
    let mut verts = region.to_vec();
    verts.sort_unstable();
    verts.dedup();
    let n = verts.len();
    if n == 0 {
        return Ok(Split { x: Vec::new(), parts: [Vec::new(), Vec::new(), Vec::new()] });
    }
    let alpha = spec.budget.alpha;
    let limit = spec.budget.f_bound(n);
    let adj = Adj::induced(g, &verts);
    let unit = vec![1u64; n];
    let first = separate_local(&adj, &unit, alpha, limit, spec.strategy).map_err(|o| Error::BudgetUnmet {
        budget: limit,
        best: Box::new(to_separation(&verts, &o, n as u64)),
    })?;

    let mut on_boundary = vec![false; n];
    for b in boundary {
        if let Ok(i) = verts.binary_search(b) {
            on_boundary[i] = true;
        }
    }
    let nb = on_boundary.iter().filter(|&&x| x).count();
    let count = |side: u8| (0..n).filter(|&i| first.labels[i] == side && on_boundary[i]).count();
    let pick = |side: u8| -> Vec<usize> { (0..n).filter(|&i| first.labels[i] == side).collect() };
    let mut x: Vec<usize> = pick(SEP);

    let heavy = [SIDE_A, SIDE_B].into_iter().find(|&s| 2 * count(s) > nb);
    let parts = match heavy {
        None => [pick(SIDE_A), pick(SIDE_B), Vec::new()],
        Some(side) => {
            let p = pick(side);
            let q = pick(1 - side);
            let sub_verts: Vec<usize> = p.iter().map(|&i| verts[i]).collect();
            let sub = Adj::induced(g, &sub_verts);
            let bw: Vec<u64> = p.iter().map(|&i| on_boundary[i] as u64).collect();
            let second = separate_local(&sub, &bw, alpha, limit, spec.strategy).map_err(|o| Error::BudgetUnmet {
                budget: limit,
                best: Box::new(to_separation(&sub_verts, &o, bw.iter().sum())),
            })?;
            let mut t2 = Vec::new();
            let mut t3 = Vec::new();
            for (k, &i) in p.iter().enumerate() {
                match second.labels[k] {
                    SIDE_A => t2.push(i),
                    SIDE_B => t3.push(i),
                    _ => x.push(i),
                }
            }
            [q, t2, t3]
        }
    };
    let to_global = |ids: Vec<usize>| -> Vec<usize> {
        let mut out: Vec<usize> = ids.into_iter().map(|i| verts[i]).collect();
        out.sort_unstable();
        out
    };
    let [p0, p1, p2] = parts;
    x = to_global(x);
    Ok(Split { x, parts: [to_global(p0), to_global(p1), to_global(p2)] })
}

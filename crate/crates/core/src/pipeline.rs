//! End-to-end single- and multi-source shortest paths.
//!
//! 1. Divide the part of the graph reachable from the sources.
//! 2. Build a skeleton per region, with every source on its region's
//!    boundary.
//! 3. Solve from the source on the replaced graph: the union of all
//!    boundary cliques, one arc per ordered pair at its minimum length.
//! 4. Extend into every region by hop-bounded relaxation on its augmented
//!    graph, seeded with the boundary distances from step 3.
//!
//! A final tense-edge audit over the graph certifies the distances.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::division::{build_division, Division, DivisionParams};
use crate::error::{Error, Result};
use crate::graph::{DiGraph, Edge, Weight};
use crate::separator::{SeparatorBudget, SeparatorSpec, Strategy};
use crate::skeleton::{build_skeleton, SkeletonConfig, SkeletonPair};
use crate::sssp::{bellman_ford, bounded_relax, find_tense_edge, tight_tree, Engine, SsspResult, SsspStats};

/// `sqrt(11.5) - 3`.
pub fn default_gamma() -> f64 {
    11.5f64.sqrt() - 3.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub gamma: f64,
    pub r_override: Option<usize>,
    pub division_strategy: Strategy,
    pub skeleton_strategy: Strategy,
    pub engine: Engine,
    pub c_sep: f64,
    pub c_div: f64,
    pub c_cnt: f64,
    pub c_aug: f64,
    pub hop_a: usize,
    pub hop_b: usize,
    pub base_cap: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            gamma: default_gamma(),
            r_override: None,
            division_strategy: Strategy::BfsLevel,
            skeleton_strategy: Strategy::BfsLevel,
            engine: Engine::Scaling,
            c_sep: 4.0,
            c_div: 8.0,
            c_cnt: 16.0,
            c_aug: 16.0,
            hop_a: 2,
            hop_b: 2,
            base_cap: 32,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma <= 0.5) {
            return Err(Error::InvalidArgument(format!("gamma {} not in (0, 1/2]", self.gamma)));
        }
        if self.r_override == Some(0) {
            return Err(Error::InvalidArgument("r must be at least 1".into()));
        }
        if self.base_cap < 2 {
            return Err(Error::InvalidArgument("base_cap must be at least 2".into()));
        }
        Ok(())
    }

    /// Apply one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = || Error::InvalidArgument(format!("bad value `{value}` for `{key}`"));
        let real = || value.parse::<f64>().map_err(|_| bad());
        let count = || value.parse::<usize>().map_err(|_| bad());
        match key {
            "gamma" => self.gamma = real()?,
            "r" => self.r_override = Some(count()?),
            "engine" => self.engine = value.parse()?,
            "division_strategy" => self.division_strategy = value.parse()?,
            "skeleton_strategy" => self.skeleton_strategy = value.parse()?,
            "c_sep" => self.c_sep = real()?,
            "c_div" => self.c_div = real()?,
            "c_cnt" => self.c_cnt = real()?,
            "c_aug" => self.c_aug = real()?,
            "hop_a" => self.hop_a = count()?,
            "hop_b" => self.hop_b = count()?,
            "base_cap" => self.base_cap = count()?,
            _ => return Err(Error::InvalidArgument(format!("unknown config key `{key}`"))),
        }
        Ok(())
    }

    /// Apply `key = value` lines; blank lines and `#` comments are skipped.
    pub fn apply_str(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse { line: i + 1, msg: format!("expected key = value, got `{line}`") })?;
            self.set(k.trim(), v.trim()).map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?;
        }
        self.validate()
    }

    pub fn division_params(&self, r: usize) -> DivisionParams {
        DivisionParams {
            r,
            gamma: self.gamma,
            strategy: self.division_strategy,
            c_sep: self.c_sep,
            c_div: self.c_div,
            c_cnt: self.c_cnt,
        }
    }

    pub fn skeleton_config(&self) -> SkeletonConfig {
        SkeletonConfig {
            base_cap: self.base_cap,
            spec: SeparatorSpec {
                strategy: self.skeleton_strategy,
                budget: SeparatorBudget { c_sep: self.c_sep, e_sep: 0.5, alpha: 2.0 / 3.0 },
            },
            hop_a: self.hop_a,
            hop_b: self.hop_b,
        }
    }

    /// Edge budget of one augmented graph: `c_aug * r^((4 - 2 gamma) / 3) * log2 r`.
    pub fn aug_edge_bound(&self, r: usize) -> f64 {
        let r = r.max(2) as f64;
        self.c_aug * r.powf((4.0 - 2.0 * self.gamma) / 3.0) * r.log2()
    }
}

impl fmt::Display for PipelineConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "gamma = {}", self.gamma)?;
        if let Some(r) = self.r_override {
            writeln!(f, "r = {r}")?;
        }
        writeln!(f, "engine = {}", self.engine)?;
        writeln!(f, "division_strategy = {}", self.division_strategy)?;
        writeln!(f, "skeleton_strategy = {}", self.skeleton_strategy)?;
        writeln!(f, "c_sep = {}", self.c_sep)?;
        writeln!(f, "c_div = {}", self.c_div)?;
        writeln!(f, "c_cnt = {}", self.c_cnt)?;
        writeln!(f, "c_aug = {}", self.c_aug)?;
        writeln!(f, "hop_a = {}", self.hop_a)?;
        writeln!(f, "hop_b = {}", self.hop_b)?;
        writeln!(f, "base_cap = {}", self.base_cap)
    }
}

impl FromStr for PipelineConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<PipelineConfig> {
        let mut cfg = PipelineConfig::default();
        cfg.apply_str(s)?;
        Ok(cfg)
    }
}

/// `(gamma, r)` with `r = ceil(n^(3 / (4 + gamma)))` unless overridden,
/// clamped to `[1, n]`.
pub fn choose_params(n: usize, cfg: &PipelineConfig) -> (f64, usize) {
    let gamma = cfg.gamma;
    let r = cfg
        .r_override
        .unwrap_or_else(|| (n as f64).powf(3.0 / (4.0 + gamma)).ceil() as usize);
    (gamma, r.clamp(1, n.max(1)))
}

/// Union of all boundary cliques, over compact ids.
#[derive(Debug, Clone)]
pub struct ReplacedGraph {
    pub graph: DiGraph,
    /// Sorted ids (in the pruned graph) of the replaced graph's vertices.
    pub vertices: Vec<usize>,
    /// Region supplying each arc.
    pub arc_region: Vec<usize>,
}

impl ReplacedGraph {
    fn build(skeletons: &[SkeletonPair]) -> ReplacedGraph {
        let mut vertices: Vec<usize> = skeletons.iter().flat_map(|s| s.h.verts().iter().copied()).collect();
        vertices.sort_unstable();
        vertices.dedup();
        let mut best: HashMap<(usize, usize), (i64, usize)> = HashMap::new();
        for (ri, sk) in skeletons.iter().enumerate() {
            let h = &sk.h;
            for i in 0..h.size() {
                for j in 0..h.size() {
                    let Some(len) = h.dist(i, j).get() else { continue };
                    if i == j {
                        continue;
                    }
                    let key = (h.verts()[i], h.verts()[j]);
                    best.entry(key)
                        .and_modify(|b| {
                            if len < b.0 {
                                *b = (len, ri)
                            }
                        })
                        .or_insert((len, ri));
                }
            }
        }
        let mut arcs: Vec<((usize, usize), (i64, usize))> = best.into_iter().collect();
        arcs.sort_unstable();
        let local = |v: usize| vertices.binary_search(&v).expect("replaced vertex");
        let edges = arcs.iter().map(|&((u, v), (len, _))| Edge { tail: local(u), head: local(v), len }).collect();
        let arc_region = arcs.iter().map(|&(_, (_, r))| r).collect();
        let graph = DiGraph::new(vertices.len(), edges).expect("replaced arcs are valid");
        ReplacedGraph { graph, vertices, arc_region }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildCounters {
    pub division_builds: u32,
    pub skeleton_passes: u32,
    pub skeletons_built: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StageTimings {
    pub prune: Duration,
    pub division: Duration,
    pub skeletons: Duration,
    pub replaced: Duration,
    pub engine: Duration,
    pub extend: Duration,
    pub audit: Duration,
}

impl StageTimings {
    pub fn total(&self) -> Duration {
        self.prune + self.division + self.skeletons + self.replaced + self.engine + self.extend + self.audit
    }
}

/// Steps 1 and 2, shared by every source.
#[derive(Debug)]
pub struct Prepared {
    pub cfg: PipelineConfig,
    pub gamma: f64,
    pub r: usize,
    pub n: usize,
    /// The graph restricted to vertices reachable from the sources.
    pub sub: DiGraph,
    pub to_global: Vec<usize>,
    pub edge_map: Vec<usize>,
    local_of: Vec<usize>,
    pub division: Division,
    pub skeletons: Vec<SkeletonPair>,
    pub replaced: ReplacedGraph,
    /// Some region holding each pruned vertex.
    home_region: Vec<usize>,
    pub counters: BuildCounters,
    pub timings: StageTimings,
}

/// One source's answer plus what is needed to expand its paths.
#[derive(Debug, Clone)]
pub struct Solution {
    pub result: SsspResult,
    pub timings: StageTimings,
    source_local: usize,
    replaced_pred: Vec<Option<(usize, usize)>>,
    region_pred: Vec<Vec<Option<(usize, usize)>>>,
}

/// Run steps 1 and 2 for `sources`.
pub fn prepare(g: &DiGraph, sources: &[usize], cfg: &PipelineConfig) -> Result<Prepared> {
    cfg.validate()?;
    if sources.is_empty() {
        return Err(Error::InvalidArgument("no sources given".into()));
    }
    if let Some(&s) = sources.iter().find(|&&s| s >= g.n()) {
        return Err(Error::InvalidArgument(format!("source {s} out of range")));
    }
    let mut timings = StageTimings::default();
    let t = Instant::now();
    let reach = g.reachable_from(sources);
    let (sub, to_global, edge_map) = g.induced(&reach);
    let mut local_of = vec![usize::MAX; g.n()];
    for (i, &v) in to_global.iter().enumerate() {
        local_of[v] = i;
    }
    timings.prune = t.elapsed();

    let t = Instant::now();
    let (gamma, r) = choose_params(sub.n(), cfg);
    let mut division = build_division(&sub, &cfg.division_params(r))
        .map_err(|e| lift_error(e, &sub, &to_global, &edge_map, local_of[sources[0]]))?;
    for &s in sources {
        division.force_boundary(local_of[s]);
    }
    timings.division = t.elapsed();

    let t = Instant::now();
    let scfg = cfg.skeleton_config();
    let skeletons = division
        .regions
        .par_iter()
        .map(|region| build_skeleton(region, &scfg))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| lift_error(e, &sub, &to_global, &edge_map, local_of[sources[0]]))?;
    timings.skeletons = t.elapsed();

    let t = Instant::now();
    let replaced = ReplacedGraph::build(&skeletons);
    let mut home_region = vec![usize::MAX; sub.n()];
    for region in division.regions.iter().rev() {
        for &v in &region.vertices {
            home_region[v] = region.id;
        }
    }
    timings.replaced = t.elapsed();

    let counters = BuildCounters { division_builds: 1, skeleton_passes: 1, skeletons_built: skeletons.len() };
    Ok(Prepared {
        cfg: *cfg,
        gamma,
        r,
        n: g.n(),
        sub,
        to_global,
        edge_map,
        local_of,
        division,
        skeletons,
        replaced,
        home_region,
        counters,
        timings,
    })
}

/// Turn an in-stage cycle signal into a verified witness in `g`.
fn lift_error(e: Error, sub: &DiGraph, to_global: &[usize], edge_map: &[usize], s: usize) -> Error {
    match e {
        Error::NegativeCycle(_) | Error::NegativeCycleAt { .. } => match bellman_ford(sub, s) {
            Err(Error::NegativeCycle(mut w)) => {
                w.vertices.iter_mut().for_each(|v| *v = to_global[*v]);
                w.edges.iter_mut().for_each(|id| *id = edge_map[*id]);
                Error::NegativeCycle(w)
            }
            _ => match crate::sssp::find_negative_cycle(sub) {
                Some(mut w) => {
                    w.vertices.iter_mut().for_each(|v| *v = to_global[*v]);
                    w.edges.iter_mut().for_each(|id| *id = edge_map[*id]);
                    Error::NegativeCycle(w)
                }
                None => Error::Internal("cycle signal without a negative cycle".into()),
            },
        },
        Error::BudgetUnmet { budget, mut best } => {
            for set in [&mut best.a, &mut best.b, &mut best.separator] {
                set.iter_mut().for_each(|v| *v = to_global[*v]);
            }
            Error::BudgetUnmet { budget, best }
        }
        other => other,
    }
}

impl Prepared {
    fn lift(&self, e: Error, s_local: usize) -> Error {
        lift_error(e, &self.sub, &self.to_global, &self.edge_map, s_local)
    }

    /// Steps 3 and 4 from source `s`, which must be one of the prepared
    /// sources.
    pub fn solve(&self, s: usize) -> Result<Solution> {
        let s_local = *self
            .local_of
            .get(s)
            .filter(|&&l| l != usize::MAX)
            .ok_or_else(|| Error::InvalidArgument(format!("source {s} was not prepared")))?;
        let rep = &self.replaced;
        let s_rep = rep
            .vertices
            .binary_search(&s_local)
            .map_err(|_| Error::InvalidArgument(format!("source {s} is not on a boundary")))?;
        let mut timings = StageTimings::default();
        let mut stats = SsspStats::default();

        let t = Instant::now();
        let step3 = self.cfg.engine.run(&rep.graph, s_rep).map_err(|e| self.lift(e, s_local))?;
        stats.relaxations += step3.stats.relaxations;
        stats.rounds += step3.stats.rounds;
        let replaced_pred = tight_tree(&rep.graph, s_rep, &step3.dist);
        timings.engine = t.elapsed();

        let t = Instant::now();
        let scfg = self.cfg.skeleton_config();
        let extended: Vec<(Vec<Weight>, Vec<Option<(usize, usize)>>, SsspStats)> = self
            .skeletons
            .par_iter()
            .map(|sk| {
                let mut dist = vec![Weight::INF; sk.vertices.len()];
                for &b in sk.h.verts() {
                    let d = step3.dist[rep.vertices.binary_search(&b).expect("boundary is replaced")];
                    dist[sk.local_of(b).expect("boundary in region")] = d;
                }
                let mut pred = vec![None; dist.len()];
                let rounds = sk.hop_budget(&scfg).saturating_sub(1);
                let st = bounded_relax(&sk.g_aug, &mut dist, &mut pred, rounds);
                (dist, pred, st)
            })
            .collect();
        let mut dist_sub = vec![Weight::INF; self.sub.n()];
        let mut region_pred = Vec::with_capacity(extended.len());
        for (sk, (dist, pred, st)) in self.skeletons.iter().zip(extended) {
            for (l, &v) in sk.vertices.iter().enumerate() {
                if dist[l] < dist_sub[v] {
                    dist_sub[v] = dist[l];
                }
            }
            stats.relaxations += st.relaxations;
            stats.rounds = stats.rounds.max(st.rounds);
            region_pred.push(pred);
        }
        timings.extend = t.elapsed();

        let t = Instant::now();
        if find_tense_edge(&self.sub, &dist_sub).is_some() {
            return Err(match bellman_ford(&self.sub, s_local) {
                Err(e) => self.lift(e, s_local),
                Ok(_) => Error::Internal("tense edge after extension".into()),
            });
        }
        if dist_sub[s_local] != Weight::ZERO {
            return Err(Error::Internal("source distance is not zero".into()));
        }
        let mut dist = vec![Weight::INF; self.n];
        for (l, &v) in self.to_global.iter().enumerate() {
            dist[v] = dist_sub[l];
        }
        timings.audit = t.elapsed();
        Ok(Solution {
            result: SsspResult { source: s, dist, pred: Vec::new(), stats },
            timings,
            source_local: s_local,
            replaced_pred,
            region_pred,
        })
    }

    /// Shortest `s -> v` path in the original graph as edge ids, built from
    /// the step-3 and step-4 predecessors by expanding clique arcs.
    pub fn extract_path(&self, sol: &Solution, v: usize) -> Result<Vec<usize>> {
        if v >= self.n || !sol.result.dist[v].is_finite() {
            return Err(Error::Unreachable(v));
        }
        let scfg = self.cfg.skeleton_config();
        let rep = &self.replaced;
        let mut segments: Vec<Vec<usize>> = Vec::new();
        let mut x = self.local_of[v];
        let mut guard = 0usize;
        while x != sol.source_local {
            guard += 1;
            if guard > 2 * self.sub.n() + 2 {
                return Err(Error::Internal("predecessor loop while extracting a path".into()));
            }
            if let Ok(ri) = rep.vertices.binary_search(&x) {
                let (pi, arc) = sol.replaced_pred[ri].ok_or_else(|| Error::Internal(format!("no predecessor at {x}")))?;
                let u = rep.vertices[pi];
                let sk = &self.skeletons[rep.arc_region[arc]];
                segments.push(sk.expand_path(u, x, &scfg)?);
                x = u;
            } else {
                let region = self.home_region[x];
                let sk = &self.skeletons[region];
                let pred = &sol.region_pred[region];
                let mut lx = sk.local_of(x).expect("home region holds vertex");
                let mut seg = Vec::new();
                while let Some((lu, arc)) = pred[lx] {
                    let mut part: Vec<usize> = sk.expand_arc(arc)?.into_iter().map(|id| sk.edge_ids[id]).collect();
                    part.reverse();
                    seg.extend(part);
                    lx = lu;
                    if seg.len() > self.sub.m() * 2 + 2 {
                        return Err(Error::Internal("predecessor loop inside a region".into()));
                    }
                }
                seg.reverse();
                segments.push(seg);
                x = sk.vertices[lx];
                if rep.vertices.binary_search(&x).is_err() {
                    return Err(Error::Internal(format!("extension chain ended off the boundary at {x}")));
                }
            }
        }
        segments.reverse();
        Ok(segments.into_iter().flatten().map(|id| self.edge_map[id]).collect())
    }
}

fn finish(g: &DiGraph, mut sol: Solution) -> Solution {
    sol.result.pred = tight_tree(g, sol.result.source, &sol.result.dist);
    sol
}

/// Distances and a shortest-path tree from `s`, with path-expansion data.
pub fn solve_detailed(g: &DiGraph, s: usize, cfg: &PipelineConfig) -> Result<(Prepared, Solution)> {
    let prep = prepare(g, &[s], cfg)?;
    let sol = finish(g, prep.solve(s)?);
    Ok((prep, sol))
}

pub fn solve_sssp(g: &DiGraph, s: usize, cfg: &PipelineConfig) -> Result<SsspResult> {
    Ok(solve_detailed(g, s, cfg)?.1.result)
}

/// One result per source; division and skeletons are built once.
pub fn solve_multi_detailed(g: &DiGraph, sources: &[usize], cfg: &PipelineConfig) -> Result<(Prepared, Vec<Solution>)> {
    if sources.is_empty() {
        return Err(Error::InvalidArgument("no sources given".into()));
    }
    let prep = prepare(g, sources, cfg)?;
    let sols = sources.iter().map(|&s| prep.solve(s).map(|sol| finish(g, sol))).collect::<Result<Vec<_>>>()?;
    Ok((prep, sols))
}

pub fn solve_multi(g: &DiGraph, sources: &[usize], cfg: &PipelineConfig) -> Result<Vec<SsspResult>> {
    Ok(solve_multi_detailed(g, sources, cfg)?.1.into_iter().map(|s| s.result).collect())
}

/// Shortest `s -> v` path as edge ids of `g`, for a result of
/// [`solve_detailed`].
pub fn extract_path(prep: &Prepared, sol: &Solution, v: usize) -> Result<Vec<usize>> {
    prep.extract_path(sol, v)
}

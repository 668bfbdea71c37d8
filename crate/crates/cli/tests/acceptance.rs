//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Runs without the test harness so criteria execute
//! one at a time and the timing check is not disturbed by parallel tests.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use sepshort::bench::{run_bench, write_csv, BenchOptions, Corpus, Verdict};
use sepshort_core::apsp::DistMatrix;
use sepshort_core::delta::{merge_apsp, DeltaSystem};
use sepshort_core::division::{build_division, verify_division, Region};
use sepshort_core::gen::{gen_grid, gen_random, gen_tri, plant_negative_cycle, WeightRule};
use sepshort_core::pipeline::{choose_params, extract_path, solve_detailed, solve_multi_detailed, solve_sssp, PipelineConfig};
use sepshort_core::separator::Strategy;
use sepshort_core::skeleton::{build_skeleton, SkeletonConfig};
use sepshort_core::sssp::{bellman_ford, bellman_ford_bounded, dijkstra, scaling_sssp};
use sepshort_core::{DiGraph, Error, Weight};

// Tolerances and corpus sizes.
const DELTA_SYSTEMS: usize = 1000;
const DELTA_MAX_VERTS: usize = 20;
const DELTA_MAX_PIECES: usize = 5;
const DELTA_TIME_LIMIT: Duration = Duration::from_secs(60);
const OPS_CONSTANT: u64 = 8;
const REGIONS: usize = 300;
const REGION_MAX_VERTS: usize = 60;
const DIVISION_MAX_N: usize = 50_000;
const E2E_INSTANCES: usize = 200;
const E2E_MAX_N: usize = 2000;
const PLANTED_CYCLES: usize = 50;
const ENGINE_INSTANCES: usize = 1000;
const GROWTH_EXPONENT: f64 = 1.7;

type Dist = Vec<Vec<Option<i64>>>;

// ---------------------------------------------------------------- oracles

fn fw(n: usize, arcs: &[(usize, usize, i64)]) -> Option<Dist> {
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
    (0..n).all(|i| d[i][i] == Some(0)).then_some(d)
}

fn arcs_of(g: &DiGraph) -> Vec<(usize, usize, i64)> {
    g.edges().iter().map(|e| (e.tail, e.head, e.len)).collect()
}

/// Bellman-Ford with `rounds` synchronous passes: distances over walks of at
/// most `rounds` edges. Without a limit, `None` on a reachable negative cycle.
fn bf(n: usize, arcs: &[(usize, usize, i64)], s: usize, rounds: Option<usize>) -> Option<Vec<Option<i64>>> {
    let mut d = vec![None; n];
    d[s] = Some(0);
    for _ in 0..rounds.unwrap_or(n) {
        let prev = d.clone();
        for &(u, v, w) in arcs {
            if let Some(du) = prev[u] {
                if d[v].is_none_or(|x| du + w < x) {
                    d[v] = Some(du + w);
                }
            }
        }
        if prev == d {
            return Some(d);
        }
    }
    if rounds.is_none() && arcs.iter().any(|&(u, v, w)| d[u].is_some_and(|du| d[v].is_none_or(|x| du + w < x))) {
        return None;
    }
    Some(d)
}

struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        // splitmix64
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }

    fn range(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next() % (hi - lo + 1) as u64) as i64
    }
}

fn dists(w: &[Weight]) -> Vec<Option<i64>> {
    w.iter().map(|x| x.get()).collect()
}

fn check_path(g: &DiGraph, s: usize, t: usize, path: &[usize], want: i64) -> Result<(), String> {
    let mut at = s;
    let mut total = 0;
    for &id in path {
        if id >= g.m() {
            return Err(format!("edge id {id} not in the graph"));
        }
        let e = g.edge(id);
        if e.tail != at {
            return Err(format!("path to {t} breaks at edge {id}"));
        }
        total += e.len;
        at = e.head;
    }
    if at != t || total != want {
        return Err(format!("path to {t} ends at {at} with length {total}, expected {want}"));
    }
    Ok(())
}

// ---------------------------------------------------------------- corpora

struct DeltaCase {
    ds: DeltaSystem,
    n: usize,
}

/// A delta system with uniform lengths in [-3, 9]; `None` if any cycle of
/// the union is negative.
fn delta_case(rng: &mut Rng) -> Option<DeltaCase> {
    let k = 1 + rng.below(DELTA_MAX_PIECES);
    let t = rng.below(4);
    let per_piece = (DELTA_MAX_VERTS - t) / k;
    let sizes: Vec<usize> = (0..k).map(|_| rng.below(per_piece + 1)).collect();
    let n = t + sizes.iter().sum::<usize>();
    let mut ids: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        ids.swap(i, rng.below(i + 1));
    }
    let core = ids[..t].to_vec();
    let mut pieces = Vec::new();
    let mut union = Vec::new();
    let mut next = t;
    for &size in &sizes {
        let mut verts = core.clone();
        verts.extend_from_slice(&ids[next..next + size]);
        next += size;
        let mut arcs = Vec::new();
        for a in 0..verts.len() {
            for b in 0..verts.len() {
                if a != b && rng.below(4) == 0 {
                    arcs.push((a, b, rng.range(-3, 9)));
                }
            }
        }
        let d = fw(verts.len(), &arcs)?;
        let mut m = DistMatrix::unreachable(verts.clone());
        for i in 0..verts.len() {
            // predecessors from tight arcs, breadth first so they stay acyclic
            let mut pred = vec![None; verts.len()];
            let mut seen = vec![false; verts.len()];
            seen[i] = true;
            let mut queue = std::collections::VecDeque::from([i]);
            while let Some(x) = queue.pop_front() {
                for &(u, v, w) in &arcs {
                    if u == x && !seen[v] && d[i][v] == d[i][x].map(|dx| dx + w) {
                        seen[v] = true;
                        pred[v] = Some(x);
                        queue.push_back(v);
                    }
                }
            }
            for j in 0..verts.len() {
                if let Some(x) = d[i][j] {
                    m.set(i, j, Weight::finite(x), if i == j { None } else { pred[j] });
                    if i != j {
                        union.push((verts[i], verts[j], x));
                    }
                }
            }
        }
        pieces.push(m);
    }
    fw(n, &union)?;
    Some(DeltaCase { ds: DeltaSystem::new(pieces, core), n })
}

fn delta_corpus() -> Vec<DeltaCase> {
    let mut rng = Rng(0xde17a);
    let mut out = Vec::new();
    while out.len() < DELTA_SYSTEMS {
        if let Some(c) = delta_case(&mut rng) {
            out.push(c);
        }
    }
    out
}

fn union_oracle(c: &DeltaCase) -> Dist {
    let mut arcs = Vec::new();
    for p in &c.ds.pieces {
        for i in 0..p.size() {
            for j in 0..p.size() {
                if let (true, Some(d)) = (i != j, p.dist(i, j).get()) {
                    arcs.push((p.verts()[i], p.verts()[j], d));
                }
            }
        }
    }
    fw(c.n, &arcs).expect("corpus is negative-cycle-free")
}

struct RegionCase {
    region: Region,
    cfg: SkeletonConfig,
}

fn region_corpus() -> Vec<RegionCase> {
    let mut rng = Rng(0x5ce1);
    let rule = WeightRule::Potential { max_cost: 8, max_potential: 6 };
    (0..REGIONS as u64)
        .map(|seed| {
            let g = loop {
                let g = match rng.below(3) {
                    0 => {
                        let n = 5 + rng.below(REGION_MAX_VERTS - 4);
                        gen_random(n, n + rng.below(2 * n), rule, seed).unwrap()
                    }
                    1 => gen_tri(2 + rng.below(6), 2 + rng.below(9), rule, seed).unwrap(),
                    _ => gen_grid(2 + rng.below(6), 2 + rng.below(9), rule, seed).unwrap(),
                };
                if g.n() <= REGION_MAX_VERTS {
                    break g;
                }
            };
            let mut region = Region::new(seed as usize, &g, (0..g.m()).collect());
            let share = 2 + rng.below(6);
            region.boundary = region.vertices.iter().copied().filter(|_| rng.below(share) == 0).collect();
            let mut cfg = SkeletonConfig { base_cap: [2, 4, 8, 16, 32][rng.below(5)], ..Default::default() };
            if rng.below(3) == 0 {
                cfg.spec.strategy = Strategy::LocalSearch;
            }
            RegionCase { region, cfg }
        })
        .collect()
}

/// Grids and triangulated grids with negative lengths, `n <= E2E_MAX_N`.
fn e2e_graph(seed: u64) -> DiGraph {
    let mut rng = Rng(seed.wrapping_mul(31) ^ 0xe2e);
    let rule = match rng.below(3) {
        0 => WeightRule::Potential { max_cost: 10, max_potential: 15 },
        1 => WeightRule::Potential { max_cost: 3, max_potential: 40 },
        _ => WeightRule::Potential { max_cost: 100, max_potential: 100 },
    };
    let rows = 2 + rng.below(44);
    let cols = 2 + rng.below(E2E_MAX_N / rows - 1);
    if rng.below(2) == 0 {
        gen_grid(rows, cols, rule, seed).unwrap()
    } else {
        gen_tri(rows, cols, rule, seed).unwrap()
    }
}

// ---------------------------------------------------------------- criteria

fn delta_equivalence() -> Result<String, String> {
    let t = Instant::now();
    let corpus = delta_corpus();
    let mut mismatches = 0;
    let mut infinite = 0;
    for (idx, c) in corpus.iter().enumerate() {
        let want = union_oracle(c);
        let merged = merge_apsp(&c.ds).map_err(|e| format!("system {idx}: {e}"))?;
        let m = &merged.matrix;
        if m.size() != c.n {
            return Err(format!("system {idx}: merged has {} vertices, expected {}", m.size(), c.n));
        }
        for i in 0..c.n {
            for j in 0..c.n {
                let w = want[m.verts()[i]][m.verts()[j]];
                infinite += w.is_none() as usize;
                mismatches += (m.dist(i, j).get() != w) as usize;
            }
        }
    }
    let took = t.elapsed();
    if mismatches > 0 {
        return Err(format!("{mismatches} mismatched entries"));
    }
    if took >= DELTA_TIME_LIMIT {
        return Err(format!("took {took:.1?}"));
    }
    Ok(format!("{} systems, 0 mismatches ({infinite} infinite entries), {took:.1?}", corpus.len()))
}

fn delta_operation_count() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for (idx, c) in delta_corpus().iter().enumerate() {
        let merged = merge_apsp(&c.ds).map_err(|e| format!("system {idx}: {e}"))?;
        let (n, t) = (c.n as u64, c.ds.core.len() as u64);
        let shape = n * n * t + n * t * t + t * t * t;
        if merged.ops > OPS_CONSTANT * shape {
            return Err(format!("system {idx}: {} ops > {OPS_CONSTANT} * {shape}", merged.ops));
        }
        if shape > 0 {
            worst = worst.max(merged.ops as f64 / shape as f64);
        }
    }
    Ok(format!("{DELTA_SYSTEMS} systems, max ops / (n^2 t + n t^2 + t^3) = {worst:.2} <= {OPS_CONSTANT}"))
}

fn clique_exactness() -> Result<String, String> {
    let mut deep = 0;
    let mut pairs = 0;
    for (idx, c) in region_corpus().iter().enumerate() {
        let r = &c.region;
        let sk = build_skeleton(r, &c.cfg).map_err(|e| format!("region {idx}: {e}"))?;
        deep += (sk.depth >= 2) as usize;
        let want = fw(r.vertices.len(), &arcs_of(&r.local_graph)).ok_or("corpus region has a negative cycle")?;
        for (i, &u) in r.boundary.iter().enumerate() {
            for (j, &v) in r.boundary.iter().enumerate() {
                let (lu, lv) = (r.local_of(u).unwrap(), r.local_of(v).unwrap());
                if sk.h.dist(i, j).get() != want[lu][lv] {
                    return Err(format!("region {idx}: H({u}, {v}) = {:?}, expected {:?}", sk.h.dist(i, j).get(), want[lu][lv]));
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("{REGIONS} regions, {pairs} boundary pairs exact, {deep} with recursion depth >= 2"))
}

fn augmentation_and_hops() -> Result<String, String> {
    let mut max_budget = 0;
    for (idx, c) in region_corpus().iter().enumerate() {
        let r = &c.region;
        let sk = build_skeleton(r, &c.cfg).map_err(|e| format!("region {idx}: {e}"))?;
        let n = r.vertices.len();
        let want = fw(n, &arcs_of(&r.local_graph)).ok_or("corpus region has a negative cycle")?;
        let aug = arcs_of(&sk.g_aug);
        let hops = sk.hop_budget(&c.cfg);
        max_budget = max_budget.max(hops);
        let full = fw(n, &aug).ok_or(format!("region {idx}: augmented graph has a negative cycle"))?;
        for u in 0..n {
            let walks = bf(n, &aug, u, Some(hops)).unwrap();
            let lib = dists(&bellman_ford_bounded(&sk.g_aug, u, hops).dist);
            for v in 0..n {
                if full[u][v] != want[u][v] {
                    return Err(format!("region {idx}: augmented distance {u} -> {v} differs"));
                }
                if walks[v] != want[u][v] || lib[v] != want[u][v] {
                    return Err(format!("region {idx}: {u} -> {v} not reached within {hops} hops"));
                }
            }
        }
    }
    Ok(format!("{REGIONS} regions, all pairs exact within hop budget (max budget {max_budget})"))
}

fn division_validity() -> Result<String, String> {
    let cfg = PipelineConfig::default();
    let mut checked = Vec::new();
    for (rows, cols) in [(32, 32), (100, 100), (160, 160), (223, 224)] {
        for tri in [false, true] {
            let seed = (rows * cols) as u64;
            let g = if tri {
                gen_tri(rows, cols, WeightRule::Const(1), seed).unwrap()
            } else {
                gen_grid(rows, cols, WeightRule::Const(1), seed).unwrap()
            };
            if g.n() > DIVISION_MAX_N {
                return Err(format!("instance with {} vertices exceeds the corpus cap", g.n()));
            }
            let kind = if tri { "tri" } else { "grid" };
            let (_, r) = choose_params(g.n(), &cfg);
            let d = build_division(&g, &cfg.division_params(r)).map_err(|e| format!("{kind} n = {}: {e}", g.n()))?;
            let rep = verify_division(&g, &d);
            if !rep.passed() {
                return Err(format!("{kind} n = {}: {}", g.n(), rep.violations[0]));
            }
            checked.push(format!("{kind} {}/{}", g.n(), d.regions.len()));
        }
    }
    Ok(format!("c_div = {}, c_cnt = {}; n/regions: {}", cfg.c_div, cfg.c_cnt, checked.join(", ")))
}

fn end_to_end() -> Result<String, String> {
    let cfg = PipelineConfig::default();
    let (mut paths, mut biggest) = (0, 0);
    for seed in 0..E2E_INSTANCES as u64 {
        let g = e2e_graph(seed);
        if g.n() > E2E_MAX_N {
            return Err(format!("instance {seed} has {} vertices", g.n()));
        }
        biggest = biggest.max(g.n());
        let mut rng = Rng(seed);
        let s = rng.below(g.n());
        let want = bf(g.n(), &arcs_of(&g), s, None).ok_or(format!("instance {seed} has a negative cycle"))?;
        let (prep, sol) = solve_detailed(&g, s, &cfg).map_err(|e| format!("instance {seed}: {e}"))?;
        let got = dists(&sol.result.dist);
        if let Some(v) = (0..g.n()).find(|&v| got[v] != want[v]) {
            return Err(format!("instance {seed}: vertex {v} got {:?}, expected {:?}", got[v], want[v]));
        }
        for _ in 0..8 {
            let t = rng.below(g.n());
            if let Some(d) = want[t] {
                let path = extract_path(&prep, &sol, t).map_err(|e| format!("instance {seed}: {e}"))?;
                check_path(&g, s, t, &path, d).map_err(|e| format!("instance {seed}: {e}"))?;
                paths += 1;
            }
        }
    }
    Ok(format!("{E2E_INSTANCES} instances (largest n = {biggest}) exact, {paths} extracted paths verified"))
}

fn negative_cycles() -> Result<String, String> {
    let cfg = PipelineConfig::default();
    let mut planted = 0;
    let mut seed = 0u64;
    while planted < PLANTED_CYCLES {
        seed += 1;
        if seed > 10 * PLANTED_CYCLES as u64 {
            return Err(format!("only {planted} instances could be planted"));
        }
        let base = e2e_graph(seed + 5000);
        let s = Rng(seed).below(base.n());
        let Some(g) = plant_negative_cycle(&base, s, seed) else { continue };
        if bf(g.n(), &arcs_of(&g), s, None).is_some() {
            return Err(format!("instance {seed}: planted cycle not reachable"));
        }
        planted += 1;
        match solve_detailed(&g, s, &cfg) {
            Err(Error::NegativeCycle(w)) => {
                let k = w.vertices.len();
                if k == 0 || w.edges.len() != k {
                    return Err(format!("instance {seed}: malformed witness"));
                }
                let mut sum = 0;
                for (i, &id) in w.edges.iter().enumerate() {
                    let e = g.edge(id);
                    if e.tail != w.vertices[i] || e.head != w.vertices[(i + 1) % k] {
                        return Err(format!("instance {seed}: witness edge {id} does not close the cycle"));
                    }
                    sum += e.len;
                }
                if sum >= 0 || sum != w.length {
                    return Err(format!("instance {seed}: witness sums to {sum}, reported {}", w.length));
                }
            }
            Err(e) => return Err(format!("instance {seed}: {e}")),
            Ok(_) => return Err(format!("instance {seed}: cycle not reported")),
        }
    }
    Ok(format!("{planted} planted cycles, every witness closed with negative sum"))
}

fn multi_source() -> Result<String, String> {
    let cfg = PipelineConfig::default();
    let rule = WeightRule::Potential { max_cost: 6, max_potential: 12 };
    let cases = [
        (gen_grid(20, 20, rule, 1).unwrap(), vec![0, 57, 199, 260, 399]),
        (gen_tri(25, 30, rule, 2).unwrap(), vec![3, 100, 420, 749, 12]),
        (gen_grid(30, 40, rule, 3).unwrap(), vec![1, 600, 1199]),
    ];
    let mut solves = 0;
    for (ci, (g, sources)) in cases.iter().enumerate() {
        let (prep, sols) = solve_multi_detailed(g, sources, &cfg).map_err(|e| format!("case {ci}: {e}"))?;
        let c = prep.counters;
        if c.division_builds != 1 || c.skeleton_passes != 1 {
            return Err(format!("case {ci}: {} divisions, {} skeleton passes", c.division_builds, c.skeleton_passes));
        }
        for (sol, &s) in sols.iter().zip(sources) {
            let single = solve_sssp(g, s, &cfg).map_err(|e| format!("case {ci}: {e}"))?;
            let want = bf(g.n(), &arcs_of(g), s, None).unwrap();
            if sol.result.dist != single.dist || dists(&single.dist) != want {
                return Err(format!("case {ci}: source {s} differs"));
            }
            solves += 1;
        }
    }
    Ok(format!("{} graphs, {solves} sources equal single-source runs; build counters 1", cases.len()))
}

fn engine_agreement() -> Result<String, String> {
    let (mut cycles, mut nonneg) = (0, 0);
    for seed in 0..ENGINE_INSTANCES as u64 {
        let mut rng = Rng(seed ^ 0xe9);
        let n = 2 + rng.below(80);
        let m = rng.below(4 * n);
        let rule = match rng.below(3) {
            0 => WeightRule::Uniform { lo: -3, hi: 20 },
            1 => WeightRule::Potential { max_cost: 50, max_potential: 1000 },
            _ => WeightRule::Uniform { lo: -1000, hi: 100_000 },
        };
        let g = gen_random(n, m, rule, seed).unwrap();
        let s = rng.below(n);
        match (scaling_sssp(&g, s), bellman_ford(&g, s)) {
            (Ok(a), Ok(b)) if a.dist == b.dist => {}
            (Err(Error::NegativeCycle(_)), Err(Error::NegativeCycle(_))) => cycles += 1,
            (a, b) => return Err(format!("instance {seed}: scaling {:?} vs bellman-ford {:?}", a.map(|r| r.dist.len()), b.map(|r| r.dist.len()))),
        }
    }
    for seed in 0..300u64 {
        let g = gen_random(10 + seed as usize % 90, 300, WeightRule::Uniform { lo: 0, hi: 1000 }, seed).unwrap();
        let a = scaling_sssp(&g, 0).map_err(|e| e.to_string())?;
        let b = dijkstra(&g, 0).map_err(|e| e.to_string())?;
        if a.dist != b.dist {
            return Err(format!("nonnegative instance {seed}: scaling differs from dijkstra"));
        }
        nonneg += 1;
    }
    Ok(format!("{ENGINE_INSTANCES} instances agree with bellman-ford ({cycles} with negative cycles), {nonneg} agree with dijkstra"))
}

fn growth_gate() -> Result<String, String> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus/grid.txt");
    let corpus = Corpus::load(&path, 0).map_err(|e| e.to_string())?;
    let opts = BenchOptions { repeat: 3, ..Default::default() };
    let records = run_bench(&corpus, &opts).map_err(|e| e.to_string())?;
    let csv_path = Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance_bench.csv");
    write_csv(&records, std::fs::File::create(&csv_path).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let header = std::fs::read_to_string(&csv_path).map_err(|e| e.to_string())?;
    for col in ["version", "division_ms", "skeletons_ms", "engine_ms", "extend_ms", "wall_ms"] {
        if !header.lines().next().unwrap_or("").split(',').any(|c| c == col) {
            return Err(format!("CSV header lacks {col}"));
        }
    }
    if let Some(r) = records.iter().find(|r| r.verdict != Verdict::ExactMatch) {
        return Err(format!("{} verdict {:?}", r.instance, r.verdict));
    }
    let [small, large] = records.as_slice() else {
        return Err(format!("expected 2 records, got {}", records.len()));
    };
    if large.n != 4 * small.n {
        return Err(format!("corpus sizes {} and {} are not a factor 4 apart", small.n, large.n));
    }
    let ratio = large.wall_ms / small.wall_ms;
    let gate = 4f64.powf(GROWTH_EXPONENT);
    let msg = format!(
        "n {} -> {}: {:.0} ms -> {:.0} ms, ratio {ratio:.2} (gate {gate:.2}); CSV at {}",
        small.n,
        large.n,
        small.wall_ms,
        large.wall_ms,
        csv_path.display()
    );
    if ratio < gate {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() {
    let criteria: [(&str, fn() -> Result<String, String>); 10] = [
        ("delta merge equals Floyd-Warshall on the union", delta_equivalence),
        ("delta merge operation count", delta_operation_count),
        ("boundary clique exactness", clique_exactness),
        ("augmented graph distances and hop bound", augmentation_and_hops),
        ("division validity", division_validity),
        ("end-to-end exactness and paths", end_to_end),
        ("negative-cycle completeness", negative_cycles),
        ("multi-source consistency", multi_source),
        ("engine agreement", engine_agreement),
        ("growth gate on the grid corpus", growth_gate),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let took = t.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{took:.1?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{took:.1?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

mod common;

use common::{graph_apsp, Lcg};
use sepshort_core::delta::validate_delta;
use sepshort_core::division::Region;
use sepshort_core::gen::{gen_grid, gen_random, gen_tri, WeightRule};
use sepshort_core::pipeline::PipelineConfig;
use sepshort_core::separator::Strategy;
use sepshort_core::skeleton::{build_skeleton, SkeletonConfig};
use sepshort_core::sssp::{bellman_ford, bellman_ford_bounded};
use sepshort_core::{DiGraph, Error};

struct Case {
    region: Region,
    cfg: SkeletonConfig,
}

fn random_case(seed: u64) -> Case {
    let mut rng = Lcg(seed);
    let rule = WeightRule::Potential { max_cost: 8, max_potential: 6 };
    let g: DiGraph = match rng.below(3) {
        0 => {
            let n = 5 + rng.below(56);
            gen_random(n, n + rng.below(2 * n), rule, seed).unwrap()
        }
        1 => gen_tri(2 + rng.below(6), 2 + rng.below(7), rule, seed).unwrap(),
        _ => gen_grid(2 + rng.below(6), 2 + rng.below(7), rule, seed).unwrap(),
    };
    let mut region = Region::new(seed as usize, &g, (0..g.m()).collect());
    let n = region.vertices.len();
    let share = 1 + rng.below(3);
    region.boundary = region.vertices.iter().copied().filter(|_| rng.below(share * 3) == 0).collect();
    let mut cfg = SkeletonConfig {
        base_cap: [2, 4, 8, 16, 32][rng.below(5)],
        ..Default::default()
    };
    if rng.chance(1, 3) {
        cfg.spec.strategy = Strategy::LocalSearch;
    }
    assert!(n <= 60);
    Case { region, cfg }
}

#[test]
fn boundary_clique_is_exact() {
    let mut deep = 0;
    for seed in 0..400u64 {
        let case = random_case(seed);
        let r = &case.region;
        let sp = build_skeleton(r, &case.cfg).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        deep += (sp.depth >= 2) as usize;
        let want = graph_apsp(&r.local_graph).unwrap();
        for (i, &u) in r.boundary.iter().enumerate() {
            for (j, &v) in r.boundary.iter().enumerate() {
                let (lu, lv) = (r.local_of(u).unwrap(), r.local_of(v).unwrap());
                assert_eq!(sp.h.dist(i, j).get(), want[lu][lv], "seed {seed}: ({u}, {v})");
            }
        }
        for (node, ds) in sp.delta_systems() {
            let report = validate_delta(&ds);
            assert!(report.passed(), "seed {seed} node {node}: {:?}", report.problems);
        }
    }
    assert!(deep >= 100, "only {deep} regions recursed twice");
}

#[test]
fn negative_cycles_inside_regions_are_reported() {
    let mut found = 0;
    for seed in 0..300u64 {
        let mut rng = Lcg(seed);
        let n = 8 + rng.below(50);
        let g = gen_random(n, 2 * n, WeightRule::Uniform { lo: -2, hi: 9 }, seed).unwrap();
        let region = Region::new(0, &g, (0..g.m()).collect());
        let cfg = SkeletonConfig { base_cap: 4 + rng.below(8), ..Default::default() };
        let built = build_skeleton(&region, &cfg);
        match graph_apsp(&region.local_graph) {
            None => {
                found += 1;
                assert!(matches!(built, Err(Error::NegativeCycleAt { .. })), "seed {seed}");
            }
            Some(_) => assert!(built.is_ok(), "seed {seed}"),
        }
    }
    assert!(found >= 20, "{found}");
}

#[test]
fn augmented_graph_preserves_distances_within_hop_budget() {
    for seed in 0..300u64 {
        let case = random_case(seed);
        let r = &case.region;
        let sp = build_skeleton(r, &case.cfg).unwrap();
        let want = graph_apsp(&r.local_graph).unwrap();
        let hops = sp.hop_budget(&case.cfg);
        for u in 0..r.vertices.len() {
            let full = bellman_ford(&sp.g_aug, u).unwrap();
            let bounded = bellman_ford_bounded(&sp.g_aug, u, hops);
            for v in 0..r.vertices.len() {
                assert_eq!(full.dist[v].get(), want[u][v], "seed {seed}: full {u} -> {v}");
                assert_eq!(bounded.dist[v].get(), want[u][v], "seed {seed}: {hops} hops {u} -> {v}");
            }
        }
    }
}

#[test]
fn expanded_paths_have_clique_lengths() {
    let g_of = |r: &Region, ids: &[usize]| -> Option<i64> {
        let mut total = 0;
        for &id in ids {
            let local = r.edge_ids.binary_search(&id).ok()?;
            total += r.local_graph.edge(local).len;
        }
        Some(total)
    };
    for seed in 0..300u64 {
        let case = random_case(seed);
        let r = &case.region;
        let sp = build_skeleton(r, &case.cfg).unwrap();
        for (i, &u) in r.boundary.iter().enumerate() {
            for (j, &v) in r.boundary.iter().enumerate() {
                match sp.h.dist(i, j).get() {
                    Some(d) => {
                        let path = sp.expand_path(u, v, &case.cfg).unwrap();
                        assert_eq!(g_of(r, &path), Some(d), "seed {seed}: ({u}, {v})");
                        let mut at = u;
                        for &id in &path {
                            let e = r.local_graph.edge(r.edge_ids.binary_search(&id).unwrap());
                            assert_eq!(r.vertices[e.tail], at, "seed {seed}: path is not connected");
                            at = r.vertices[e.head];
                        }
                        assert_eq!(at, v);
                    }
                    None => assert!(sp.expand_path(u, v, &case.cfg).is_err()),
                }
            }
        }
        // arbitrary pairs go through the augmented graph
        let want = graph_apsp(&r.local_graph).unwrap();
        let (u, v) = (r.vertices[0], *r.vertices.last().unwrap());
        if let Some(d) = want[0][r.vertices.len() - 1] {
            let path = sp.expand_path(u, v, &case.cfg).unwrap();
            assert_eq!(g_of(r, &path), Some(d), "seed {seed}");
        }
    }
}

#[test]
fn augmented_edge_count_within_budget() {
    let cfg = PipelineConfig::default();
    for (rows, cols) in [(10, 10), (20, 20), (24, 30)] {
        let g = gen_grid(rows, cols, WeightRule::Const(1), 0).unwrap();
        let mut region = Region::new(0, &g, (0..g.m()).collect());
        region.boundary = (0..cols).chain((rows - 1) * cols..rows * cols).collect();
        let sp = build_skeleton(&region, &cfg.skeleton_config()).unwrap();
        let bound = cfg.aug_edge_bound(g.n());
        assert!((sp.g_aug.m() as f64) <= bound, "{rows}x{cols}: {} > {bound}", sp.g_aug.m());
    }
}

#[test]
fn recursion_tree_dump_lists_every_node() {
    let g = gen_grid(12, 12, WeightRule::Const(1), 0).unwrap();
    let mut region = Region::new(0, &g, (0..g.m()).collect());
    region.boundary = vec![0, 11, 132, 143];
    let cfg = SkeletonConfig { base_cap: 16, ..Default::default() };
    let sp = build_skeleton(&region, &cfg).unwrap();
    let dump = sp.dump_tree();
    assert_eq!(dump.lines().count(), sp.nodes.len());
    assert!(dump.starts_with("merge"));
}

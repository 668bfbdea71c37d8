use crate::error::{CycleWitness, Error, Result};
use crate::graph::{DiGraph, Weight};

use super::{cycle_in_pred, SsspResult, SsspStats};

/// Bellman-Ford with a per-round active set. Fails with a verified
/// negative-cycle witness if one is reachable from `s`.
pub fn bellman_ford(g: &DiGraph, s: usize) -> Result<SsspResult> {
    let mut dist = vec![Weight::INF; g.n()];
    dist[s] = Weight::ZERO;
    let (dist, pred, stats) = relax_to_fixpoint(g, dist, &[s]).map_err(Error::NegativeCycle)?;
    Ok(SsspResult { source: s, dist, pred, stats })
}

/// Any negative cycle of `g`, reachable or not.
pub fn find_negative_cycle(g: &DiGraph) -> Option<CycleWitness> {
    let all: Vec<usize> = (0..g.n()).collect();
    relax_to_fixpoint(g, vec![Weight::ZERO; g.n()], &all).err()
}

type Pred = Vec<Option<(usize, usize)>>;

fn relax_to_fixpoint(
    g: &DiGraph,
    mut dist: Vec<Weight>,
    start: &[usize],
) -> Result<(Vec<Weight>, Pred, SsspStats), CycleWitness> {
    let n = g.n();
    let mut pred: Pred = vec![None; n];
    let mut stats = SsspStats::default();
    let mut active = start.to_vec();
    let mut next = Vec::new();
    let mut queued = vec![false; n];
    let mut round = 0usize;
    while !active.is_empty() {
        round += 1;
        if round > n {
            break;
        }
        stats.rounds += 1;
        for &u in &active {
            queued[u] = false;
        }
        for &u in &active {
            let du = dist[u];
            for &id in g.out_edges(u) {
                stats.relaxations += 1;
                let e = g.edge(id);
                let cand = du + e.len;
                if cand < dist[e.head] {
                    dist[e.head] = cand;
                    pred[e.head] = Some((u, id));
                    if !queued[e.head] {
                        queued[e.head] = true;
                        next.push(e.head);
                    }
                }
            }
        }
        std::mem::swap(&mut active, &mut next);
        next.clear();
    }
    if active.is_empty() {
        return Ok((dist, pred, stats));
    }
    // Still relaxing after n rounds: keep going until the predecessor
    // graph closes a (necessarily negative) cycle.
    for _ in 0..4 * n + 4 {
        if let Some(w) = cycle_in_pred(g, &pred) {
            return Err(w);
        }
        for (id, e) in g.edges().iter().enumerate() {
            if dist[e.tail].is_finite() && dist[e.tail] + e.len < dist[e.head] {
                dist[e.head] = dist[e.tail] + e.len;
                pred[e.head] = Some((e.tail, id));
            }
        }
    }
    panic!("Bellman-Ford kept relaxing without a predecessor cycle")
}

/// Hop-bounded Bellman-Ford: `dist[v]` is the length of a shortest walk
/// from `s` to `v` with at most `max_rounds` edges. No cycle detection.
pub fn bellman_ford_bounded(g: &DiGraph, s: usize, max_rounds: usize) -> SsspResult {
    let mut dist = vec![Weight::INF; g.n()];
    dist[s] = Weight::ZERO;
    let mut pred = vec![None; g.n()];
    let stats = bounded_relax(g, &mut dist, &mut pred, max_rounds);
    SsspResult { source: s, dist, pred, stats }
}

/// Synchronous rounds: round `k` only extends walks found in round `k-1`,
/// so after `k` rounds each entry is the best walk with at most `k` more
/// edges than the initial labels. Stops early when a round changes nothing.
pub fn bounded_relax(g: &DiGraph, dist: &mut [Weight], pred: &mut [Option<(usize, usize)>], rounds: usize) -> SsspStats {
    let mut stats = SsspStats::default();
    let mut prev = dist.to_vec();
    for _ in 0..rounds {
        stats.rounds += 1;
        let mut changed = false;
        for (id, e) in g.edges().iter().enumerate() {
            stats.relaxations += 1;
            let du = prev[e.tail];
            if !du.is_finite() {
                continue;
            }
            let cand = du + e.len;
            if cand < dist[e.head] {
                dist[e.head] = cand;
                pred[e.head] = Some((e.tail, id));
                changed = true;
            }
        }
        if !changed {
            break;
        }
        prev.copy_from_slice(dist);
    }
    stats
}

//! Exact maximum flows decomposable into at most `p` disjoint path-flows
//! on acyclic networks.
//!
//! The solver sweeps tuples of path endpoints in lexicographic order of an
//! acyclic vertex ordering. A state ("tricot") is an ordered set of paths
//! from the source, pairwise meeting only there, each tracked with the
//! minimum capacity along it; dominated states are discarded. Running time
//! is polynomial for each fixed `p` but grows quickly with it, so calls
//! carry an explicit state budget.

use std::collections::BTreeMap;
use std::ops::Bound::{Excluded, Unbounded};

use crate::error::{Error, Result};
use crate::maxflow::line_digraph_network;
use crate::netcore::{ArcId, Flow, Network, VertexId};
use crate::psplit::{PSplitSolution, PathFlow};

/// Upper bound on the sweep work before the call is refused. The upfront
/// estimate is a loose worst case, so the default sits well above typical
/// instances; the per-step ticking is the hard stop.
const DEFAULT_MAX_STATES: u64 = 1_000_000_000;

pub fn default_max_states() -> u64 {
    DEFAULT_MAX_STATES
}

/// One dynamic-programming state: paths aligned with the sorted endpoint
/// tuple, and the bottleneck capacity of each path.
#[derive(Debug, Clone)]
struct TricotEntry {
    values: Vec<u64>,
    paths: Vec<Vec<ArcId>>,
}

/// Optimal flow decomposable into at most `p` path-flows that pairwise
/// meet only at the source and the sink.
///
/// Requires an acyclic network and `p >= 1`. Refuses instances whose
/// estimated state count exceeds `max_states`.
pub fn tricot_dp_exact(net: &Network, p: usize, max_states: u64) -> Result<PSplitSolution> {
    if p == 0 {
        return Err(Error::Precondition("path budget must be at least 1".into()));
    }
    if net.digraph().is_acyclic().is_none() {
        return Err(Error::Precondition("an acyclic network is required".into()));
    }
    let (pruned, prune_map) = net.prune_to_st_paths();
    if !pruned.digraph().has_path(pruned.source(), pruned.sink()) {
        return Ok(empty_solution(net));
    }
    let (dp, origin) = subdivide_terminal_arcs(&pruned);
    check_estimate(dp.vertex_count(), dp.arc_count(), p, max_states)?;

    let order = acyclic_order_source_first(&dp);
    let mut rank = vec![0usize; dp.vertex_count()];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }
    let closure = reflexive_closure(&dp);
    let s = dp.source();
    let t = dp.sink();
    let mut pre_t = vec![false; dp.vertex_count()];
    for &a in dp.digraph().in_arcs(t) {
        pre_t[dp.digraph().tail(a)] = true;
    }

    let mut ticks: u64 = 0;
    let mut best: Option<(u64, Vec<u32>, TricotEntry)> = None;
    for p_used in 1..=p {
        let run = dp_single_size(
            &dp, &order, &rank, &closure, s, t, &pre_t, p_used, max_states, &mut ticks,
        )?;
        if let Some((total, key, entry)) = run {
            let improves = match &best {
                None => true,
                Some((bt, _, _)) => total > *bt,
            };
            if improves {
                best = Some((total, key, entry));
            }
        }
    }

    let Some((_, key, entry)) = best else {
        return Ok(empty_solution(net));
    };
    assemble_solution(net, &prune_map, &dp, &origin, &order, &key, &entry)
}

/// Optimal flow decomposable into at most `p` pairwise arc-disjoint
/// path-flows, via the vertex-disjoint solver on the line digraph.
///
/// Requires an acyclic network.
pub fn arc_disjoint_exact_acyclic(net: &Network, p: usize, max_states: u64) -> Result<PSplitSolution> {
    if p == 0 {
        return Err(Error::Precondition("path budget must be at least 1".into()));
    }
    if net.digraph().is_acyclic().is_none() {
        return Err(Error::Precondition("an acyclic network is required".into()));
    }
    // The line digraph wants no direct source-to-sink arc, so split each
    // such arc in two; both halves keep the original capacity.
    let s = net.source();
    let t = net.sink();
    let mut arcs: Vec<(VertexId, VertexId, u64)> = Vec::new();
    let mut half_origin: Vec<ArcId> = Vec::new();
    let mut extra = 0;
    for a in 0..net.arc_count() {
        let (u, v) = net.digraph().arc(a);
        let c = net.cap(a);
        if u == s && v == t {
            let w = net.vertex_count() + extra;
            extra += 1;
            arcs.push((u, w, c));
            half_origin.push(a);
            arcs.push((w, v, c));
            half_origin.push(a);
        } else {
            arcs.push((u, v, c));
            half_origin.push(a);
        }
    }
    let widened = Network::from_arcs(net.vertex_count() + extra, s, t, &arcs)?;
    let (line, line_map) = line_digraph_network(&widened)?;
    let inner = tricot_dp_exact(&line, p, max_states)?;

    // Interior vertices of a line-digraph path are arcs of the widened
    // network; collapsing split halves yields the original arc path.
    let mut values = vec![0u64; net.arc_count()];
    let mut paths = Vec::new();
    for path in &inner.paths {
        let mut original_arcs: Vec<ArcId> = Vec::new();
        for &lv in &path.vertices {
            let Some(widened_arc) = line_map.arc_of_vertex[lv] else {
                continue;
            };
            let orig = half_origin[widened_arc];
            if original_arcs.last() != Some(&orig) {
                original_arcs.push(orig);
            }
        }
        let mut vertices = vec![s];
        for &a in &original_arcs {
            vertices.push(net.digraph().head(a));
            values[a] += path.value;
        }
        paths.push(PathFlow {
            vertices,
            arcs: original_arcs,
            value: path.value,
        });
    }
    let flow = Flow::from_arc_values(net, values)?;
    debug_assert_eq!(flow.value(), inner.flow.value());
    Ok(PSplitSolution {
        flow,
        paths,
        p_used: inner.p_used,
        nu_star: None,
        i_star: None,
    })
}

fn empty_solution(net: &Network) -> PSplitSolution {
    PSplitSolution {
        flow: Flow::zero(net),
        paths: Vec::new(),
        p_used: 0,
        nu_star: None,
        i_star: None,
    }
}

/// Refuse upfront when the tuple space is hopeless: the sweep visits at
/// most `C(n, p)` endpoint tuples holding up to `m^p` states each.
fn check_estimate(n: usize, m: usize, p: usize, max_states: u64) -> Result<()> {
    let mut estimate: u128 = 1;
    for i in 0..p.min(n) {
        estimate = estimate.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    for _ in 0..p {
        estimate = estimate.saturating_mul(m.max(1) as u128);
    }
    if estimate > max_states as u128 {
        return Err(Error::Budget(format!(
            "estimated {estimate} states exceed the {max_states} state budget"
        )));
    }
    Ok(())
}

fn tick(ticks: &mut u64, max_states: u64) -> Result<()> {
    *ticks += 1;
    if *ticks > max_states {
        return Err(Error::Budget(format!(
            "state budget of {max_states} steps exhausted"
        )));
    }
    Ok(())
}

/// Split every arc leaving the source or entering the sink; the inserted
/// vertex inherits the capacity on both halves. Endpoint tuples then live
/// on these private vertices, which keeps paths extendable to the sink
/// within their recorded bottleneck.
fn subdivide_terminal_arcs(net: &Network) -> (Network, Vec<ArcId>) {
    let s = net.source();
    let t = net.sink();
    let mut arcs: Vec<(VertexId, VertexId, u64)> = Vec::new();
    let mut origin: Vec<ArcId> = Vec::new();
    let mut extra = 0;
    for a in 0..net.arc_count() {
        let (u, v) = net.digraph().arc(a);
        let c = net.cap(a);
        if u == s || v == t {
            let w = net.vertex_count() + extra;
            extra += 1;
            arcs.push((u, w, c));
            origin.push(a);
            arcs.push((w, v, c));
            origin.push(a);
        } else {
            arcs.push((u, v, c));
            origin.push(a);
        }
    }
    let dp = Network::from_arcs(net.vertex_count() + extra, s, t, &arcs)
        .expect("subdivision preserves validity");
    (dp, origin)
}

/// Topological order that lists the source first, then all heads of its
/// out-arcs, then the rest. Kahn's algorithm with a three-class priority
/// queue; ties fall back to vertex id for determinism.
fn acyclic_order_source_first(net: &Network) -> Vec<VertexId> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    let d = net.digraph();
    let n = d.vertex_count();
    let mut class = vec![2u8; n];
    class[net.source()] = 0;
    for &a in d.out_arcs(net.source()) {
        class[d.head(a)] = 1;
    }
    let mut indeg: Vec<usize> = (0..n).map(|v| d.in_degree(v)).collect();
    let mut heap = BinaryHeap::new();
    for v in 0..n {
        if indeg[v] == 0 {
            heap.push(Reverse((class[v], v)));
        }
    }
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse((_, u))) = heap.pop() {
        order.push(u);
        for &a in d.out_arcs(u) {
            let v = d.head(a);
            indeg[v] -= 1;
            if indeg[v] == 0 {
                heap.push(Reverse((class[v], v)));
            }
        }
    }
    debug_assert_eq!(order.len(), n, "order covers an acyclic digraph");
    order
}

/// Reflexive transitive closure, one reachability row per vertex.
fn reflexive_closure(net: &Network) -> Vec<Vec<bool>> {
    (0..net.vertex_count())
        .map(|v| net.digraph().reachable(v))
        .collect()
}

/// One full sweep for an exact path count. Returns the best final state
/// whose endpoints all touch the sink, if any.
#[allow(clippy::too_many_arguments)]
fn dp_single_size(
    dp: &Network,
    order: &[VertexId],
    rank: &[usize],
    closure: &[Vec<bool>],
    s: VertexId,
    t: VertexId,
    pre_t: &[bool],
    p: usize,
    max_states: u64,
    ticks: &mut u64,
) -> Result<Option<(u64, Vec<u32>, TricotEntry)>> {
    let d = dp.digraph();
    let mut table: BTreeMap<Vec<u32>, Vec<TricotEntry>> = BTreeMap::new();

    // Seed: one state per set of `p` distinct out-arcs of the source; the
    // subdivision guarantees distinct heads.
    let source_arcs: Vec<ArcId> = d.out_arcs(s).to_vec();
    if source_arcs.len() < p {
        return Ok(None);
    }
    let mut combo: Vec<usize> = (0..p).collect();
    loop {
        let mut key: Vec<u32> = combo
            .iter()
            .map(|&i| rank[d.head(source_arcs[i])] as u32)
            .collect();
        let mut entry = TricotEntry {
            values: combo.iter().map(|&i| dp.cap(source_arcs[i])).collect(),
            paths: combo.iter().map(|&i| vec![source_arcs[i]]).collect(),
        };
        // Align state coordinates with the sorted endpoint tuple.
        let mut perm: Vec<usize> = (0..p).collect();
        perm.sort_by_key(|&i| key[i]);
        key = perm.iter().map(|&i| key[i]).collect();
        entry.values = perm.iter().map(|&i| entry.values[i]).collect();
        entry.paths = perm.iter().map(|&i| entry.paths[i].clone()).collect();
        tick(ticks, max_states)?;
        insert_dominant(table.entry(key).or_default(), entry);

        if !next_combination(&mut combo, source_arcs.len()) {
            break;
        }
    }

    // Sweep in ascending key order; every extension lands on a strictly
    // larger key, so a forward cursor sees each state exactly once.
    let mut cursor: Option<Vec<u32>> = None;
    loop {
        let key = match &cursor {
            None => table.keys().next().cloned(),
            Some(k) => table
                .range((Excluded(k.clone()), Unbounded))
                .next()
                .map(|(k, _)| k.clone()),
        };
        let Some(key) = key else { break };
        let entries = table.get(&key).cloned().unwrap_or_default();
        let endpoints: Vec<VertexId> = key.iter().map(|&r| order[r as usize]).collect();
        for entry in entries {
            tick(ticks, max_states)?;
            for j in 0..p {
                let u = endpoints[j];
                if u == t {
                    continue;
                }
                for &a in d.out_arcs(u) {
                    tick(ticks, max_states)?;
                    let v = d.head(a);
                    if v == t {
                        continue;
                    }
                    // A legal extension must not close in on any current
                    // endpoint, its own path included.
                    if endpoints.iter().any(|&w| closure[v][w]) {
                        continue;
                    }
                    let mut new_key = key.clone();
                    new_key.remove(j);
                    let rv = rank[v] as u32;
                    let pos = new_key.partition_point(|&r| r < rv);
                    new_key.insert(pos, rv);
                    let mut values = entry.values.clone();
                    let mut paths = entry.paths.clone();
                    let val = values.remove(j).min(dp.cap(a));
                    let mut path = paths.remove(j);
                    path.push(a);
                    values.insert(pos, val);
                    paths.insert(pos, path);
                    debug_assert!(new_key > key);
                    insert_dominant(
                        table.entry(new_key).or_default(),
                        TricotEntry { values, paths },
                    );
                }
            }
        }
        cursor = Some(key);
    }

    // Final scan: states whose endpoints all precede the sink.
    let mut best: Option<(u64, Vec<u32>, TricotEntry)> = None;
    for (key, entries) in &table {
        if !key.iter().all(|&r| pre_t[order[r as usize]]) {
            continue;
        }
        for entry in entries {
            let total: u64 = entry.values.iter().sum();
            let better = match &best {
                None => true,
                Some((bt, bk, be)) => {
                    total > *bt
                        || (total == *bt && key < bk)
                        || (total == *bt && key == bk && entry.values > be.values)
                }
            };
            if better {
                best = Some((total, key.clone(), entry.clone()));
            }
        }
    }
    Ok(best)
}

/// Advance to the next ascending index combination over `0..n`.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let p = combo.len();
    let mut i = p;
    while i > 0 {
        i -= 1;
        if combo[i] + (p - i) < n {
            combo[i] += 1;
            for j in i + 1..p {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Keep the state set free of dominated entries: skip the newcomer when an
/// existing state is coordinatewise at least as good, and evict existing
/// states the newcomer dominates.
fn insert_dominant(set: &mut Vec<TricotEntry>, entry: TricotEntry) {
    for e in set.iter() {
        if e.values.iter().zip(&entry.values).all(|(a, b)| a >= b) {
            return;
        }
    }
    set.retain(|e| !e.values.iter().zip(&entry.values).all(|(a, b)| a <= b));
    set.push(entry);
}

/// Turn the winning state into original-network paths and a flow: append
/// the sink arc of each endpoint, then undo the subdivision and the
/// pruning renumber.
#[allow(clippy::too_many_arguments)]
fn assemble_solution(
    net: &Network,
    prune_map: &crate::netcore::PruneMap,
    dp: &Network,
    origin: &[ArcId],
    order: &[VertexId],
    key: &[u32],
    entry: &TricotEntry,
) -> Result<PSplitSolution> {
    let d = dp.digraph();
    let mut values = vec![0u64; net.arc_count()];
    let mut paths = Vec::new();
    for (i, dp_path) in entry.paths.iter().enumerate() {
        let endpoint = order[key[i] as usize];
        let final_arc = d
            .out_arcs(endpoint)
            .iter()
            .copied()
            .find(|&a| d.head(a) == dp.sink())
            .expect("endpoint reaches the sink directly");
        let mut original_arcs: Vec<ArcId> = Vec::new();
        for &a in dp_path.iter().chain(std::iter::once(&final_arc)) {
            let orig = prune_map.arc_from_new[origin[a]];
            if original_arcs.last() != Some(&orig) {
                original_arcs.push(orig);
            }
        }
        let mut vertices = vec![net.source()];
        for &a in &original_arcs {
            vertices.push(net.digraph().head(a));
            values[a] += entry.values[i];
        }
        debug_assert_eq!(vertices.last(), Some(&net.sink()));
        paths.push(PathFlow {
            vertices,
            arcs: original_arcs,
            value: entry.values[i],
        });
    }
    let flow = Flow::from_arc_values(net, values)?;
    Ok(PSplitSolution {
        flow,
        paths,
        p_used: key.len(),
        nu_star: None,
        i_star: None,
    })
}

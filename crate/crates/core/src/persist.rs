//! How well a flow survives deletions: the worst residual value over all
//! ways to remove `k` arcs (or vertices) that avoid every minimum cut.
//!
//! Arcs on a minimum cut are off-limits for the adversary; everything else
//! is fair game. Both the evaluation and the search for a most persistent
//! maximum flow are exhaustive and size-guarded, since no better exact
//! method is available.

use crate::error::{Error, Result};
use crate::maxflow::{max_flow, mincut_arcs};
use crate::netcore::{ArcId, Flow, Network, VertexId};
use crate::oracle::{enumerate_max_flows, Budget};

/// Default cap on the number of deletion subsets examined per call.
const DEFAULT_MAX_STATES: u64 = 10_000_000;

pub fn default_max_states() -> u64 {
    DEFAULT_MAX_STATES
}

/// Outcome of an arc-deletion evaluation: the flow under attack, the most
/// damaging eligible deletion set found, and the maximum flow value left
/// in the support after removing it.
#[derive(Debug, Clone)]
pub struct PersistenceReport {
    pub flow: Flow,
    pub k: usize,
    pub worst_set: Vec<ArcId>,
    pub residual_value: u64,
}

/// Vertex-deletion analogue of [`PersistenceReport`].
#[derive(Debug, Clone)]
pub struct VertexPersistenceReport {
    pub flow: Flow,
    pub k: usize,
    pub worst_set: Vec<VertexId>,
    pub residual_value: u64,
}

/// Exact worst-case residual value of `x` after deleting up to `k` arcs
/// outside every minimum cut.
///
/// Deleting arcs outside the support never hurts, so the enumeration runs
/// over support arcs only; the reported set is padded with the smallest
/// other eligible arcs when the support offers fewer than `k`.
pub fn persistence_value(
    net: &Network,
    x: &Flow,
    k: usize,
    max_states: u64,
) -> Result<PersistenceReport> {
    let protected = arc_set(net.arc_count(), &mincut_arcs(net)?);
    let eligible: Vec<ArcId> = (0..net.arc_count()).filter(|&a| !protected[a]).collect();
    let in_support: Vec<ArcId> = eligible
        .iter()
        .copied()
        .filter(|&a| x.arc_value(a) > 0)
        .collect();
    let (support_net, support_ids) = x.support_network(net);
    let size = k.min(in_support.len());
    check_subset_budget(in_support.len(), size, max_states)?;

    let mut ticks = 0u64;
    let mut best: Option<(u64, Vec<ArcId>)> = None;
    let mut combo: Vec<usize> = (0..size).collect();
    loop {
        tick(&mut ticks, max_states)?;
        let chosen: Vec<ArcId> = combo.iter().map(|&i| in_support[i]).collect();
        let keep: Vec<bool> = support_ids.iter().map(|a| !chosen.contains(a)).collect();
        let (sub, _) = support_net.sub_network_by_arcs(&keep);
        let residual = max_flow(&sub).value();
        if best.as_ref().map_or(true, |(b, _)| residual < *b) {
            best = Some((residual, chosen));
        }
        if size == 0 || !next_combination(&mut combo, in_support.len()) {
            break;
        }
    }
    let (residual_value, mut worst_set) = best.expect("the empty deletion set always evaluates");

    let target = k.min(eligible.len());
    for &a in &eligible {
        if worst_set.len() >= target {
            break;
        }
        if !worst_set.contains(&a) {
            worst_set.push(a);
        }
    }
    worst_set.sort_unstable();
    Ok(PersistenceReport {
        flow: x.clone(),
        k,
        worst_set,
        residual_value,
    })
}

/// Exact worst-case residual value of `x` after deleting up to `k`
/// vertices not incident to any minimum-cut arc. Deleting a terminal
/// leaves no flow at all.
pub fn vertex_persistence_value(
    net: &Network,
    x: &Flow,
    k: usize,
    max_states: u64,
) -> Result<VertexPersistenceReport> {
    let mut protected = vec![false; net.vertex_count()];
    for a in mincut_arcs(net)? {
        let (u, v) = net.digraph().arc(a);
        protected[u] = true;
        protected[v] = true;
    }
    let eligible: Vec<VertexId> = (0..net.vertex_count()).filter(|&v| !protected[v]).collect();
    let mut on_support = vec![false; net.vertex_count()];
    for a in 0..net.arc_count() {
        if x.arc_value(a) > 0 {
            let (u, v) = net.digraph().arc(a);
            on_support[u] = true;
            on_support[v] = true;
        }
    }
    let relevant: Vec<VertexId> = eligible
        .iter()
        .copied()
        .filter(|&v| on_support[v])
        .collect();
    let (support_net, _) = x.support_network(net);
    let size = k.min(relevant.len());
    check_subset_budget(relevant.len(), size, max_states)?;

    let mut ticks = 0u64;
    let mut best: Option<(u64, Vec<VertexId>)> = None;
    let mut combo: Vec<usize> = (0..size).collect();
    loop {
        tick(&mut ticks, max_states)?;
        let chosen: Vec<VertexId> = combo.iter().map(|&i| relevant[i]).collect();
        let residual = if chosen.contains(&net.source()) || chosen.contains(&net.sink()) {
            0
        } else {
            let keep: Vec<bool> = (0..support_net.arc_count())
                .map(|a| {
                    let (u, v) = support_net.digraph().arc(a);
                    !chosen.contains(&u) && !chosen.contains(&v)
                })
                .collect();
            let (sub, _) = support_net.sub_network_by_arcs(&keep);
            max_flow(&sub).value()
        };
        if best.as_ref().map_or(true, |(b, _)| residual < *b) {
            best = Some((residual, chosen));
        }
        if size == 0 || !next_combination(&mut combo, relevant.len()) {
            break;
        }
    }
    let (residual_value, mut worst_set) = best.expect("the empty deletion set always evaluates");

    let target = k.min(eligible.len());
    for &v in &eligible {
        if worst_set.len() >= target {
            break;
        }
        if !worst_set.contains(&v) {
            worst_set.push(v);
        }
    }
    worst_set.sort_unstable();
    Ok(VertexPersistenceReport {
        flow: x.clone(),
        k,
        worst_set,
        residual_value,
    })
}

/// Among all integer maximum flows of a tiny network, one whose
/// persistence under `k` arc deletions is largest. Ties go to the
/// lexicographically smallest flow vector.
pub fn best_persistent_max_flow_bruteforce(
    net: &Network,
    k: usize,
    max_states: u64,
) -> Result<(Flow, PersistenceReport)> {
    let budget = Budget {
        max_vertices: 14,
        max_arcs: 14,
        max_cap: 4,
        max_states,
    };
    let flows = enumerate_max_flows(net, &budget)?;
    let mut best: Option<(Flow, PersistenceReport)> = None;
    for flow in flows {
        let report = persistence_value(net, &flow, k, max_states)?;
        if best
            .as_ref()
            .map_or(true, |(_, b)| report.residual_value > b.residual_value)
        {
            best = Some((flow, report));
        }
    }
    best.ok_or(Error::Internal(
        "maximum-flow enumeration returned nothing".into(),
    ))
}

/// Smallest number of arc deletions (from the whole arc set) that push
/// the maximum flow value strictly below `threshold`, with a witnessing
/// deletion set.
pub fn deletion_threshold(
    net: &Network,
    threshold: u64,
    max_states: u64,
) -> Result<(usize, Vec<ArcId>)> {
    if threshold == 0 {
        return Err(Error::Precondition(
            "the flow value never drops below zero; the threshold must be at least 1".into(),
        ));
    }
    let m = net.arc_count();
    let mut ticks = 0u64;
    for j in 0..=m {
        let mut combo: Vec<usize> = (0..j).collect();
        loop {
            tick(&mut ticks, max_states)?;
            let keep: Vec<bool> = {
                let mut keep = vec![true; m];
                for &i in &combo {
                    keep[i] = false;
                }
                keep
            };
            let (sub, _) = net.sub_network_by_arcs(&keep);
            if max_flow(&sub).value() < threshold {
                return Ok((j, combo));
            }
            if j == 0 || !next_combination(&mut combo, m) {
                break;
            }
        }
    }
    Err(Error::Internal(
        "deleting every arc must empty the network".into(),
    ))
}

fn arc_set(m: usize, arcs: &[ArcId]) -> Vec<bool> {
    let mut set = vec![false; m];
    for &a in arcs {
        set[a] = true;
    }
    set
}

fn check_subset_budget(n: usize, size: usize, max_states: u64) -> Result<()> {
    let mut estimate: u128 = 1;
    for i in 0..size {
        estimate = estimate.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    if estimate > max_states as u128 {
        return Err(Error::Budget(format!(
            "estimated {estimate} deletion sets exceed the {max_states} state budget"
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

//! Maximum flows whose support stays 2-arc-strong.
//!
//! A maximum flow may funnel all of its value through a single arc even
//! when the underlying digraph offers two arc-disjoint routes between the
//! terminals. The rerouting loop below removes such bottleneck arcs one at
//! a time: whenever the support of the current flow has an (s,t)-cut-arc,
//! one unit is pushed along a detour that leaves the support, and one unit
//! is withdrawn from a heaviest path through the cut arc.

use std::collections::VecDeque;

use crate::decomp::acyclify;
use crate::error::{Error, Result};
use crate::maxflow::{arc_connectivity, max_flow};
use crate::netcore::{ArcId, Digraph, Flow, Network, VertexId};

/// Every arc that lies on all `s` to `t` paths of `d`, listed in the order
/// the arcs appear along one such path.
///
/// Fails when `t` is unreachable from `s`.
pub fn st_cut_arcs(d: &Digraph, s: VertexId, t: VertexId) -> Result<Vec<ArcId>> {
    let (_, path_arcs) = d
        .shortest_path(s, t)
        .ok_or_else(|| Error::Precondition("sink unreachable from source".into()))?;
    // A cut arc lies on every path, so scanning one path finds them all.
    let mut cuts = Vec::new();
    for &a in &path_arcs {
        if !reachable_without_arc(d, s, t, a) {
            cuts.push(a);
        }
    }
    Ok(cuts)
}

fn reachable_without_arc(d: &Digraph, s: VertexId, t: VertexId, banned: ArcId) -> bool {
    let mut seen = vec![false; d.vertex_count()];
    let mut queue = VecDeque::new();
    seen[s] = true;
    queue.push_back(s);
    while let Some(u) = queue.pop_front() {
        if u == t {
            return true;
        }
        for &a in d.out_arcs(u) {
            if a == banned {
                continue;
            }
            let (_, v) = d.arc(a);
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    false
}

/// The (s,t)-cut-arcs of a digraph together with the vertex blocks between
/// consecutive cut arcs.
///
/// Block `i` holds the vertices lying on a path from the head of the i-th
/// cut arc (the source, for `i = 0`) to the tail of the next cut arc (the
/// sink, for the last block). On an acyclic digraph whose every arc lies on
/// an `s` to `t` path the blocks are pairwise disjoint and cover every
/// non-isolated vertex.
#[derive(Debug, Clone)]
pub struct CutArcChain {
    pub cut_arcs: Vec<ArcId>,
    pub blocks: Vec<Vec<VertexId>>,
}

impl CutArcChain {
    pub fn build(d: &Digraph, s: VertexId, t: VertexId) -> Result<CutArcChain> {
        let cut_arcs = st_cut_arcs(d, s, t)?;
        let mut entries = vec![s];
        let mut exits = Vec::new();
        for &a in &cut_arcs {
            let (u, v) = d.arc(a);
            exits.push(u);
            entries.push(v);
        }
        exits.push(t);
        let mut blocks = Vec::with_capacity(entries.len());
        for i in 0..entries.len() {
            let reach = d.reachable(entries[i]);
            let co = d.co_reachable(exits[i]);
            let block: Vec<VertexId> = (0..d.vertex_count())
                .filter(|&y| reach[y] && co[y])
                .collect();
            blocks.push(block);
        }
        Ok(CutArcChain { cut_arcs, blocks })
    }
}

/// A maximum flow whose support contains two arc-disjoint `s` to `t`
/// paths, i.e. no single support arc carries the whole connection.
///
/// Requires two arc-disjoint `s` to `t` paths in the underlying digraph.
pub fn two_arc_strong_max_flow(net: &Network) -> Result<Flow> {
    Ok(two_arc_strong_max_flow_with_stats(net)?.0)
}

/// Like [`two_arc_strong_max_flow`] but also reports the number of
/// (s,t)-cut-arcs of the support before each rerouting round. The final
/// entry is always zero.
pub fn two_arc_strong_max_flow_with_stats(net: &Network) -> Result<(Flow, Vec<usize>)> {
    let s = net.source();
    let t = net.sink();
    if arc_connectivity(net.digraph(), s, t)? < 2 {
        return Err(Error::Precondition(
            "two arc-disjoint paths between the terminals are required".into(),
        ));
    }
    let mut x = acyclify(net, &max_flow(net));
    let mut stats = Vec::new();
    // Each round empties at least one arc that carried the full flow value
    // (the first cut arc loses one unit and no arc ever reaches full value
    // again through the update), so the number of fully loaded arcs
    // strictly shrinks and the loop ends within `arc_count` rounds.
    for _ in 0..=net.arc_count() {
        let (support, ids) = x.support(net);
        let chain = CutArcChain::build(&support, s, t)?;
        stats.push(chain.cut_arcs.len());
        if chain.cut_arcs.is_empty() {
            return Ok((x, stats));
        }
        x = reroute(net, &x, &support, &ids, &chain)?;
    }
    Err(Error::Internal("rerouting failed to converge".into()))
}

/// One rerouting round. Pushes one unit along a detour that leaves the
/// support before the first cut arc and re-enters it after, and withdraws
/// one unit from a heaviest support path covering the same stretch.
fn reroute(
    net: &Network,
    x: &Flow,
    support: &Digraph,
    ids: &[ArcId],
    chain: &CutArcChain,
) -> Result<Flow> {
    let d = net.digraph();
    let n = net.vertex_count();

    let mut block_of = vec![usize::MAX; n];
    for (i, block) in chain.blocks.iter().enumerate() {
        for &y in block {
            debug_assert_eq!(block_of[y], usize::MAX, "blocks must be disjoint");
            block_of[y] = i;
        }
    }

    // Detour search: breadth-first from every vertex of the first block,
    // walking only through vertices that carry no flow, stopping at the
    // first arrival in a later block. The first cut arc itself is banned;
    // a detour exists because that arc is not a cut arc of the digraph.
    let banned = ids[chain.cut_arcs[0]];
    let mut parent_arc: Vec<Option<ArcId>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for &y in &chain.blocks[0] {
        seen[y] = true;
        queue.push_back(y);
    }
    let mut entry = None;
    'bfs: while let Some(u) = queue.pop_front() {
        for &a in d.out_arcs(u) {
            if a == banned {
                continue;
            }
            let (_, v) = d.arc(a);
            if seen[v] || block_of[v] == 0 {
                continue;
            }
            seen[v] = true;
            parent_arc[v] = Some(a);
            if block_of[v] != usize::MAX {
                entry = Some(v);
                break 'bfs;
            }
            queue.push_back(v);
        }
    }
    let y_end = entry.ok_or_else(|| Error::Internal("no detour leaves the first block".into()))?;

    let mut detour = Vec::new();
    let mut v = y_end;
    while let Some(a) = parent_arc[v] {
        detour.push(a);
        v = d.arc(a).0;
    }
    detour.reverse();
    let y_start = v;
    debug_assert_eq!(block_of[y_start], 0);

    // Withdrawal path: a support path from the detour's start to its end
    // with the largest possible bottleneck flow value. A bottleneck of at
    // least two keeps the support arc set intact, so no new cut arc can
    // appear while the first one disappears.
    let withdraw = widest_support_path(x, support, ids, y_start, y_end)?;

    let mut values = x.arc_values().to_vec();
    for &a in &detour {
        debug_assert_eq!(values[a], 0, "detour must leave the support");
        values[a] = 1;
    }
    for &a in &withdraw {
        debug_assert!(values[a] >= 1);
        values[a] -= 1;
    }
    let next = Flow::from_arc_values(net, values)?;
    debug_assert_eq!(next.value(), x.value());
    Ok(acyclify(net, &next))
}

/// Maximum-bottleneck path between two support vertices, by flow value.
/// Returns the original arc ids along the path.
fn widest_support_path(
    x: &Flow,
    support: &Digraph,
    ids: &[ArcId],
    from: VertexId,
    to: VertexId,
) -> Result<Vec<ArcId>> {
    let mut thresholds: Vec<u64> = ids.iter().map(|&a| x.arc_value(a)).collect();
    thresholds.sort_unstable_by(|a, b| b.cmp(a));
    thresholds.dedup();
    for theta in thresholds {
        let mut parent: Vec<Option<ArcId>> = vec![None; support.vertex_count()];
        let mut seen = vec![false; support.vertex_count()];
        let mut queue = VecDeque::new();
        seen[from] = true;
        queue.push_back(from);
        while let Some(u) = queue.pop_front() {
            if u == to {
                break;
            }
            for &local in support.out_arcs(u) {
                if x.arc_value(ids[local]) < theta {
                    continue;
                }
                let (_, v) = support.arc(local);
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(local);
                    queue.push_back(v);
                }
            }
        }
        if seen[to] {
            let mut arcs = Vec::new();
            let mut v = to;
            while v != from {
                let local = parent[v].expect("parent chain reaches the start");
                arcs.push(ids[local]);
                v = support.arc(local).0;
            }
            arcs.reverse();
            return Ok(arcs);
        }
    }
    Err(Error::Internal("support lost the withdrawal route".into()))
}

//! Maximum flow and derived cut machinery.
//!
//! The solver is Edmonds-Karp (BFS shortest augmenting paths) specialised
//! to integer capacities on multigraphs. All tie-breaking is by smallest
//! `ArcId`, so every routine here is deterministic: the same network
//! always produces the same flow, cut, and arc sets.

use crate::error::{Error, Result};
use crate::netcore::{checked_capacity_sum, ArcId, Digraph, Flow, Network, VertexId};

/// Source side of a minimum cut.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    /// Vertices on the source side, ascending.
    pub x_side: Vec<VertexId>,
    /// Arcs from the source side to the rest, ascending.
    pub arcs_across: Vec<ArcId>,
    /// Total capacity of `arcs_across`.
    pub capacity: u64,
}

/// Maximum flow of the network. Deterministic: BFS explores forward arcs
/// in ascending `ArcId` order, then backward arcs likewise, and augments
/// along the first shortest path found.
pub fn max_flow(net: &Network) -> Flow {
    let mut x = vec![0u64; net.arc_count()];
    loop {
        match augmenting_path(net, &x) {
            Some((arcs, bottleneck)) => {
                for (a, forward) in arcs {
                    if forward {
                        x[a] += bottleneck;
                    } else {
                        x[a] -= bottleneck;
                    }
                }
            }
            None => break,
        }
    }
    Flow::from_arc_values(net, x).expect("augmenting preserves flow invariants")
}

/// One BFS in the residual graph; returns the arc steps of a shortest
/// augmenting path (with direction) and its bottleneck.
fn augmenting_path(net: &Network, x: &[u64]) -> Option<(Vec<(ArcId, bool)>, u64)> {
    let d = net.digraph();
    let (s, t) = (net.source(), net.sink());
    let mut parent: Vec<Option<(ArcId, bool)>> = vec![None; net.vertex_count()];
    let mut seen = vec![false; net.vertex_count()];
    seen[s] = true;
    let mut queue = std::collections::VecDeque::from([s]);
    'bfs: while let Some(v) = queue.pop_front() {
        for &a in d.out_arcs(v) {
            let w = d.head(a);
            if !seen[w] && x[a] < net.cap(a) {
                seen[w] = true;
                parent[w] = Some((a, true));
                if w == t {
                    break 'bfs;
                }
                queue.push_back(w);
            }
        }
        for &a in d.in_arcs(v) {
            let w = d.tail(a);
            if !seen[w] && x[a] > 0 {
                seen[w] = true;
                parent[w] = Some((a, false));
                if w == t {
                    break 'bfs;
                }
                queue.push_back(w);
            }
        }
    }
    if !seen[t] {
        return None;
    }
    let mut arcs = Vec::new();
    let mut bottleneck = u64::MAX;
    let mut v = t;
    while v != s {
        let (a, forward) = parent[v].expect("parent chain is complete");
        let room = if forward { net.cap(a) - x[a] } else { x[a] };
        bottleneck = bottleneck.min(room);
        arcs.push((a, forward));
        v = if forward { d.tail(a) } else { d.head(a) };
    }
    arcs.reverse();
    Some((arcs, bottleneck))
}

/// Vertices reachable from `starts` in the residual graph of `flow`.
pub fn residual_reachable(net: &Network, flow: &Flow, starts: &[VertexId]) -> Vec<bool> {
    let d = net.digraph();
    let mut seen = vec![false; net.vertex_count()];
    let mut queue = std::collections::VecDeque::new();
    for &v in starts {
        if !seen[v] {
            seen[v] = true;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &a in d.out_arcs(v) {
            let w = d.head(a);
            if !seen[w] && flow.arc_value(a) < net.cap(a) {
                seen[w] = true;
                queue.push_back(w);
            }
        }
        for &a in d.in_arcs(v) {
            let w = d.tail(a);
            if !seen[w] && flow.arc_value(a) > 0 {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Source-side-minimal minimum cut: the residual-reachable set of a
/// maximum flow. Every arc leaving the set is saturated, every arc
/// entering it carries zero flow.
pub fn min_cut(net: &Network) -> Result<Cut> {
    let flow = max_flow(net);
    min_cut_for(net, &flow)
}

/// Minimum cut extracted from an already computed maximum flow.
pub fn min_cut_for(net: &Network, flow: &Flow) -> Result<Cut> {
    let reach = residual_reachable(net, flow, &[net.source()]);
    debug_assert!(!reach[net.sink()], "min_cut_for needs a maximum flow");
    let x_side: Vec<VertexId> = (0..net.vertex_count()).filter(|&v| reach[v]).collect();
    let arcs_across: Vec<ArcId> = (0..net.arc_count())
        .filter(|&a| {
            let (u, v) = net.digraph().arc(a);
            reach[u] && !reach[v]
        })
        .collect();
    let capacity = checked_capacity_sum(arcs_across.iter().map(|&a| net.cap(a)), "a cut capacity")?;
    Ok(Cut { x_side, arcs_across, capacity })
}

/// Local arc connectivity: the maximum number of pairwise arc-disjoint
/// paths from `s` to `t`, counting parallel arcs separately.
pub fn arc_connectivity(d: &Digraph, s: VertexId, t: VertexId) -> Result<u64> {
    if s == t {
        return Err(Error::Precondition("arc connectivity needs two distinct vertices".into()));
    }
    if d.arc_count() == 0 {
        return Ok(0);
    }
    let unit = Network::new(d.clone(), s, t, vec![1; d.arc_count()])?;
    Ok(max_flow(&unit).value())
}

/// Renaming data produced by [`split_vertices`].
#[derive(Debug, Clone)]
pub struct SplitMap {
    /// Entry copy of each original vertex (equals the exit copy when not split).
    pub minus: Vec<VertexId>,
    /// Exit copy of each original vertex.
    pub plus: Vec<VertexId>,
    /// Special arc of each split vertex in the new network.
    pub special_arc: Vec<Option<ArcId>>,
    /// Arc count of the original network; original arcs keep their ids
    /// `0..original_arc_count` in the new network.
    pub original_arc_count: usize,
}

impl SplitMap {
    /// Pull a flow on the split network back to the original arcs.
    pub fn restrict_flow(&self, original: &Network, split_flow: &Flow) -> Result<Flow> {
        let values: Vec<u64> =
            (0..self.original_arc_count).map(|a| split_flow.arc_value(a)).collect();
        Flow::from_arc_values(original, values)
    }
}

/// Replace every vertex `v` not in `exclude` by an entry copy `v-` and an
/// exit copy `v+` joined by a special arc of capacity `bound`; original
/// arcs run from exit copies to entry copies and keep their `ArcId`s.
/// The new source is the entry copy of the old source, the new sink the
/// exit copy of the old sink, so source and sink throughput are bounded
/// too unless excluded.
pub fn split_vertices(net: &Network, bound: u64, exclude: &[VertexId]) -> Result<(Network, SplitMap)> {
    if bound == 0 {
        return Err(Error::Precondition("split bound must be at least 1".into()));
    }
    let mut excluded = vec![false; net.vertex_count()];
    for &v in exclude {
        excluded[v] = true;
    }
    let mut minus = vec![0; net.vertex_count()];
    let mut plus = vec![0; net.vertex_count()];
    let mut next = 0;
    for v in 0..net.vertex_count() {
        if excluded[v] {
            minus[v] = next;
            plus[v] = next;
            next += 1;
        } else {
            minus[v] = next;
            plus[v] = next + 1;
            next += 2;
        }
    }
    let mut arcs: Vec<(VertexId, VertexId, u64)> = (0..net.arc_count())
        .map(|a| {
            let (u, v) = net.digraph().arc(a);
            (plus[u], minus[v], net.cap(a))
        })
        .collect();
    let mut special_arc = vec![None; net.vertex_count()];
    for v in 0..net.vertex_count() {
        if !excluded[v] {
            special_arc[v] = Some(arcs.len());
            arcs.push((minus[v], plus[v], bound));
        }
    }
    let split = Network::from_arcs(next, minus[net.source()], plus[net.sink()], &arcs)?;
    let map = SplitMap { minus, plus, special_arc, original_arc_count: net.arc_count() };
    Ok((split, map))
}

/// Renaming data produced by [`line_digraph_network`].
#[derive(Debug, Clone)]
pub struct LineMap {
    /// Original arc represented by each line vertex (`None` for the two
    /// artificial endpoints).
    pub arc_of_vertex: Vec<Option<ArcId>>,
    pub source: VertexId,
    pub sink: VertexId,
}

/// Line-digraph reduction: one vertex per original arc, an arc between
/// consecutive original arcs with the min of their capacities, plus an
/// artificial source before the arcs leaving `s` and an artificial sink
/// after the arcs entering `t`. Vertex-disjoint paths here correspond to
/// arc-disjoint paths in the original network.
pub fn line_digraph_network(net: &Network) -> Result<(Network, LineMap)> {
    if net.digraph().is_acyclic().is_none() {
        return Err(Error::Precondition("line digraph reduction needs an acyclic network".into()));
    }
    for a in 0..net.arc_count() {
        if net.digraph().arc(a) == (net.source(), net.sink()) {
            return Err(Error::Precondition(
                "line digraph reduction needs no source-to-sink arc; subdivide it first".into(),
            ));
        }
    }
    let m = net.arc_count();
    let source = m;
    let sink = m + 1;
    let mut arcs: Vec<(VertexId, VertexId, u64)> = Vec::new();
    for &a in net.digraph().out_arcs(net.source()) {
        arcs.push((source, a, net.cap(a)));
    }
    for a in 0..m {
        let head = net.digraph().head(a);
        if head == net.sink() {
            arcs.push((a, sink, net.cap(a)));
        } else {
            for &b in net.digraph().out_arcs(head) {
                arcs.push((a, b, net.cap(a).min(net.cap(b))));
            }
        }
    }
    let line = Network::from_arcs(m + 2, source, sink, &arcs)?;
    let mut arc_of_vertex: Vec<Option<ArcId>> = (0..m).map(Some).collect();
    arc_of_vertex.push(None);
    arc_of_vertex.push(None);
    Ok((line, LineMap { arc_of_vertex, source, sink }))
}

/// Arcs that belong to at least one minimum cut, ascending.
///
/// With a fixed maximum flow, arc `a = (u, v)` lies on some minimum cut
/// iff the residual-reachable closure of `{s, u}` contains neither `v`
/// nor `t`: that closure is then the source side of a minimum cut
/// crossing `a`, and any minimum cut containing `a` must include it.
pub fn mincut_arcs(net: &Network) -> Result<Vec<ArcId>> {
    let flow = max_flow(net);
    let plain_reach = residual_reachable(net, &flow, &[net.source()]);
    if plain_reach[net.sink()] {
        // Sink unreachable in the residual graph is the max-flow certificate;
        // if it is reachable the flow would not be maximum.
        return Err(Error::Internal("mincut_arcs computed a non-maximum flow".into()));
    }
    let mut result = Vec::new();
    for a in 0..net.arc_count() {
        let (u, v) = net.digraph().arc(a);
        if flow.arc_value(a) < net.cap(a) {
            continue;
        }
        let reach = if plain_reach[u] {
            // Closure of {s, u} equals the closure of {s}.
            plain_reach.clone()
        } else {
            residual_reachable(net, &flow, &[net.source(), u])
        };
        if !reach[v] && !reach[net.sink()] {
            result.push(a);
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diamond_has_value_two() {
        let net =
            Network::from_arcs(4, 0, 3, &[(0, 1, 1), (1, 3, 1), (0, 2, 1), (2, 3, 1)]).unwrap();
        assert_eq!(max_flow(&net).value(), 2);
    }

    #[test]
    fn parallel_arcs_add_up() {
        let net = Network::from_arcs(2, 0, 1, &[(0, 1, 1), (0, 1, 4)]).unwrap();
        let flow = max_flow(&net);
        assert_eq!(flow.value(), 5);
        assert_eq!(flow.arc_value(0), 1);
        assert_eq!(flow.arc_value(1), 4);
    }

    #[test]
    fn max_flow_is_deterministic() {
        let net = Network::from_arcs(
            5,
            0,
            4,
            &[(0, 1, 2), (0, 2, 2), (1, 3, 1), (2, 3, 2), (1, 2, 1), (3, 4, 3)],
        )
        .unwrap();
        let a = max_flow(&net);
        let b = max_flow(&net);
        assert_eq!(a, b);
    }

    #[test]
    fn unreachable_sink_gives_zero_flow() {
        let net = Network::from_arcs(3, 0, 2, &[(0, 1, 5)]).unwrap();
        assert_eq!(max_flow(&net).value(), 0);
        assert_eq!(mincut_arcs(&net).unwrap(), Vec::<ArcId>::new());
    }

    #[test]
    fn min_cut_is_source_side_minimal() {
        // Series arcs with caps 2 then 7: the cut is {s} with capacity 2.
        let net = Network::from_arcs(3, 0, 2, &[(0, 1, 2), (1, 2, 7)]).unwrap();
        let cut = min_cut(&net).unwrap();
        assert_eq!(cut.x_side, vec![0]);
        assert_eq!(cut.arcs_across, vec![0]);
        assert_eq!(cut.capacity, 2);
        assert_eq!(cut.capacity, max_flow(&net).value());
    }

    #[test]
    fn min_cut_crossing_arcs_are_saturated() {
        let net = Network::from_arcs(
            5,
            0,
            4,
            &[(0, 1, 3), (0, 2, 2), (1, 3, 2), (2, 3, 2), (3, 4, 3), (1, 4, 1)],
        )
        .unwrap();
        let flow = max_flow(&net);
        let cut = min_cut(&net).unwrap();
        assert_eq!(cut.capacity, flow.value());
        for &a in &cut.arcs_across {
            assert_eq!(flow.arc_value(a), net.cap(a));
        }
    }

    #[test]
    fn arc_connectivity_counts_parallel_arcs() {
        let d = Digraph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        assert_eq!(arc_connectivity(&d, 0, 1).unwrap(), 2);
        assert_eq!(arc_connectivity(&d, 1, 0).unwrap(), 0);
        assert!(arc_connectivity(&d, 0, 0).is_err());
    }

    #[test]
    fn arc_connectivity_of_diamond_is_two() {
        let d = Digraph::new(4, vec![(0, 1), (1, 3), (0, 2), (2, 3)]).unwrap();
        assert_eq!(arc_connectivity(&d, 0, 3).unwrap(), 2);
    }

    #[test]
    fn split_inserts_bounded_special_arc() {
        // s -> a -> t with bound 2 at a becomes a 4-vertex path whose
        // middle arc has capacity 2.
        let net = Network::from_arcs(3, 0, 2, &[(0, 1, 5), (1, 2, 5)]).unwrap();
        let (split, map) = split_vertices(&net, 2, &[0, 2]).unwrap();
        assert_eq!(split.vertex_count(), 4);
        assert_eq!(split.arc_count(), 3);
        assert_eq!(max_flow(&split).value(), 2);
        let special = map.special_arc[1].unwrap();
        assert_eq!(split.cap(special), 2);
        // Original arcs keep their ids.
        assert_eq!(split.cap(0), 5);
        assert_eq!(split.cap(1), 5);
    }

    #[test]
    fn split_of_source_bounds_its_throughput() {
        let net = Network::from_arcs(
            5,
            0,
            4,
            &[(0, 1, 1), (1, 4, 1), (0, 2, 1), (2, 4, 1), (0, 3, 1), (3, 4, 1)],
        )
        .unwrap();
        // Star of three unit paths, bound 2 everywhere except the sink.
        let (split, _) = split_vertices(&net, 2, &[4]).unwrap();
        assert_eq!(max_flow(&split).value(), 2);
    }

    #[test]
    fn split_round_trip_restricts_to_original_arcs() {
        let net = Network::from_arcs(4, 0, 3, &[(0, 1, 2), (1, 3, 2), (0, 2, 1), (2, 3, 1)]).unwrap();
        let (split, map) = split_vertices(&net, 2, &[0, 3]).unwrap();
        let flow = max_flow(&split);
        let back = map.restrict_flow(&net, &flow).unwrap();
        assert_eq!(back.value(), flow.value());
    }

    #[test]
    fn line_digraph_of_two_arc_path() {
        let net = Network::from_arcs(3, 0, 2, &[(0, 1, 3), (1, 2, 5)]).unwrap();
        let (line, map) = line_digraph_network(&net).unwrap();
        assert_eq!(line.vertex_count(), 4);
        assert_eq!(line.arc_count(), 3);
        assert_eq!(max_flow(&line).value(), 3);
        assert_eq!(map.arc_of_vertex[0], Some(0));
        assert_eq!(map.arc_of_vertex[1], Some(1));
    }

    #[test]
    fn line_digraph_rejects_source_sink_arc_and_cycles() {
        let st = Network::from_arcs(2, 0, 1, &[(0, 1, 1)]).unwrap();
        assert!(matches!(line_digraph_network(&st), Err(Error::Precondition(_))));
        let cyclic = Network::from_arcs(3, 0, 2, &[(0, 1, 1), (1, 0, 1), (1, 2, 1)]).unwrap();
        assert!(matches!(line_digraph_network(&cyclic), Err(Error::Precondition(_))));
    }

    #[test]
    fn mincut_arcs_series_example() {
        let net = Network::from_arcs(3, 0, 2, &[(0, 1, 2), (1, 2, 7)]).unwrap();
        assert_eq!(mincut_arcs(&net).unwrap(), vec![0]);
    }

    #[test]
    fn mincut_arcs_skips_slack_parallel_arc() {
        // s -> a of cap 2, then parallel a -> t arcs of caps 1 and 5: only
        // the first arc is in a minimum cut.
        let net = Network::from_arcs(3, 0, 2, &[(0, 1, 2), (1, 2, 1), (1, 2, 5)]).unwrap();
        assert_eq!(mincut_arcs(&net).unwrap(), vec![0]);
    }

    #[test]
    fn mincut_arcs_can_cover_both_cut_positions() {
        // Two disjoint series paths: both bottleneck arcs qualify.
        let net =
            Network::from_arcs(4, 0, 3, &[(0, 1, 1), (1, 3, 2), (0, 2, 2), (2, 3, 1)]).unwrap();
        assert_eq!(mincut_arcs(&net).unwrap(), vec![0, 3]);
    }
}

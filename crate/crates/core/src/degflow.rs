//! Degree-constrained flows: flows whose support digraph keeps every
//! out-degree at most `k`. The general maximization is hard, but two
//! corners are tractable and implemented here: the widest-path case
//! `k = 1` (with its unit-capacity generalization via vertex splitting)
//! and the exact decision procedure for value `k + 1`.

use crate::decomp::{acyclify, reduce_to_value};
use crate::error::{Error, Result};
use crate::maxflow::{max_flow, split_vertices};
use crate::netcore::{ArcId, Digraph, Flow, Network, PruneMap, VertexId};

/// An s→t path maximizing its minimum arc capacity, as the list of arcs
/// from source to sink plus that bottleneck value. Returns an empty path
/// and value 0 when the sink is unreachable. This solves the
/// out-degree-1 flow maximization: the best such flow is a single path
/// filled to its bottleneck.
pub fn widest_path(net: &Network) -> (Vec<ArcId>, u64) {
    let mut thresholds: Vec<u64> = (0..net.arc_count()).map(|a| net.cap(a)).collect();
    thresholds.sort_unstable_by(|a, b| b.cmp(a));
    thresholds.dedup();
    for threshold in thresholds {
        if let Some(arcs) = bfs_path_with_min_cap(net, threshold) {
            return (arcs, threshold);
        }
    }
    (Vec::new(), 0)
}

/// BFS from the source using only arcs of capacity at least `threshold`;
/// returns the arc sequence of a path to the sink if one exists.
fn bfs_path_with_min_cap(net: &Network, threshold: u64) -> Option<Vec<ArcId>> {
    let d = net.digraph();
    let mut parent: Vec<Option<ArcId>> = vec![None; d.vertex_count()];
    let mut seen = vec![false; d.vertex_count()];
    let mut queue = std::collections::VecDeque::new();
    seen[net.source()] = true;
    queue.push_back(net.source());
    while let Some(u) = queue.pop_front() {
        if u == net.sink() {
            break;
        }
        for &a in d.out_arcs(u) {
            if net.cap(a) < threshold {
                continue;
            }
            let v = d.head(a);
            if !seen[v] {
                seen[v] = true;
                parent[v] = Some(a);
                queue.push_back(v);
            }
        }
    }
    if !seen[net.sink()] {
        return None;
    }
    let mut arcs = Vec::new();
    let mut v = net.sink();
    while v != net.source() {
        let a = parent[v].expect("every reached vertex except the source has a parent arc");
        arcs.push(a);
        v = d.tail(a);
    }
    arcs.reverse();
    Some(arcs)
}

/// Maximum flow whose support has out-degree at most `k` everywhere, for
/// unit-capacity networks. With unit capacities the support out-degree
/// equals the out-flow, so bounding vertex throughput by `k` via vertex
/// splitting is exact. The sink is excluded from splitting: its
/// throughput must stay unbounded, and no maximum flow routes flow out
/// of it.
pub fn unit_capacity_deg_max_flow(net: &Network, k: usize) -> Result<Flow> {
    for a in 0..net.arc_count() {
        if net.cap(a) != 1 {
            return Err(Error::Precondition("unit capacities required".into()));
        }
    }
    if k == 0 {
        return Ok(Flow::zero(net));
    }
    let (split, map) = split_vertices(net, k as u64, &[net.sink()])?;
    let split_flow = max_flow(&split);
    let flow = map.restrict_flow(net, &split_flow)?;
    Ok(acyclify(net, &flow))
}

/// All vertices whose removal disconnects `t` from `s`, ordered by their
/// position along an s→t path. Every separator lies on every such path,
/// and the relative order of two separators is the same on all paths, so
/// the returned order is canonical.
pub fn st_vertex_separators(d: &Digraph, s: VertexId, t: VertexId) -> Result<Vec<VertexId>> {
    let (path_vertices, _) = d
        .shortest_path(s, t)
        .ok_or_else(|| Error::Precondition("sink unreachable from source".into()))?;
    let mut separators = Vec::new();
    for &v in &path_vertices[1..path_vertices.len().saturating_sub(1)] {
        if !reaches_avoiding(d, s, t, v) {
            separators.push(v);
        }
    }
    Ok(separators)
}

/// Does `t` stay reachable from `s` after deleting `banned`?
fn reaches_avoiding(d: &Digraph, s: VertexId, t: VertexId, banned: VertexId) -> bool {
    if s == banned || t == banned {
        return false;
    }
    let mut seen = vec![false; d.vertex_count()];
    let mut queue = std::collections::VecDeque::new();
    seen[s] = true;
    queue.push_back(s);
    while let Some(u) = queue.pop_front() {
        if u == t {
            return true;
        }
        for &a in d.out_arcs(u) {
            let v = d.head(a);
            if v != banned && !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    false
}

/// One segment of a [`SeparatorChain`]: the sub-network between two
/// consecutive separators, with its own source and sink.
#[derive(Debug, Clone)]
pub struct Block {
    /// Block source, in the coordinates of the pruned network.
    pub source: VertexId,
    /// Block sink, in the coordinates of the pruned network.
    pub sink: VertexId,
    /// Vertices of the block, ascending, in pruned coordinates.
    pub vertices: Vec<VertexId>,
    /// The block network. Vertex ids agree with the pruned network.
    pub network: Network,
    /// Pruned-network arc behind each block arc.
    pub arc_origin: Vec<ArcId>,
}

/// The chain structure of a network around its s→t vertex separators:
/// the pruned network, the separators in path order with the source and
/// sink at the ends, and one block per consecutive pair. Any flow on a
/// simple s→t path crosses the separators in this fixed order, so value
/// questions decompose block by block.
#[derive(Debug, Clone)]
pub struct SeparatorChain {
    /// Input restricted to vertices and arcs between source and sink.
    pub pruned: Network,
    /// Renaming between the input and the pruned network.
    pub prune_map: PruneMap,
    /// Source, the separators in path order, then the sink.
    pub separators: Vec<VertexId>,
    /// One block per consecutive separator pair.
    pub blocks: Vec<Block>,
}

impl SeparatorChain {
    /// Build the chain. Fails when the sink is unreachable.
    pub fn build(net: &Network) -> Result<SeparatorChain> {
        let (pruned, prune_map) = net.prune_to_st_paths();
        if pruned.arc_count() == 0 {
            return Err(Error::Precondition("sink unreachable from source".into()));
        }
        let inner = st_vertex_separators(pruned.digraph(), pruned.source(), pruned.sink())?;
        let mut separators = Vec::with_capacity(inner.len() + 2);
        separators.push(pruned.source());
        separators.extend(inner);
        separators.push(pruned.sink());
        let mut blocks = Vec::with_capacity(separators.len() - 1);
        for pair in separators.windows(2) {
            blocks.push(build_block(&pruned, pair[0], pair[1])?);
        }
        Ok(SeparatorChain { pruned, prune_map, separators, blocks })
    }
}

/// Cut the sub-network between two consecutive separators out of the
/// pruned network. Arcs into the block source and out of the block sink
/// are dropped: no simple source→sink path of the block uses them, and
/// keeping them would let flow re-enter the source and inflate its
/// support out-degree past what the auxiliary-network test accounts for.
fn build_block(pruned: &Network, source: VertexId, sink: VertexId) -> Result<Block> {
    let d = pruned.digraph();
    let reach = d.reachable(source);
    let co = d.co_reachable(sink);
    let candidate: Vec<bool> = (0..pruned.arc_count())
        .map(|a| {
            let (u, v) = d.arc(a);
            reach[u] && co[u] && reach[v] && co[v] && v != source && u != sink
        })
        .collect();
    let restricted: Vec<(VertexId, VertexId)> = (0..pruned.arc_count())
        .filter(|&a| candidate[a])
        .map(|a| d.arc(a))
        .collect();
    let scratch = Digraph::new(d.vertex_count(), restricted)?;
    let reach_in = scratch.reachable(source);
    let co_in = scratch.co_reachable(sink);
    let mut kept_arcs = Vec::new();
    let mut caps = Vec::new();
    let mut arc_origin = Vec::new();
    for a in 0..pruned.arc_count() {
        if !candidate[a] {
            continue;
        }
        let (u, v) = d.arc(a);
        if reach_in[u] && co_in[v] {
            kept_arcs.push((u, v));
            caps.push(pruned.cap(a));
            arc_origin.push(a);
        }
    }
    let network = Network::new(Digraph::new(d.vertex_count(), kept_arcs)?, source, sink, caps)?;
    let mut vertices: Vec<VertexId> = (0..network.arc_count())
        .flat_map(|a| {
            let (u, v) = network.digraph().arc(a);
            [u, v]
        })
        .chain([source, sink])
        .collect();
    vertices.sort_unstable();
    vertices.dedup();
    Ok(Block { source, sink, vertices, network, arc_origin })
}

/// Decide whether some flow has value at least `k + 1` while its support
/// keeps every out-degree at most `k`, and produce such a flow (of value
/// exactly `k + 1`) when one exists. `k = 1` reduces to the widest path;
/// otherwise the network is pruned, decomposed along its vertex
/// separators, and each separator-free block is tested through the
/// boosted-source auxiliary networks.
pub fn deg_flow_value_k_plus_1(net: &Network, k: usize) -> Result<Option<Flow>> {
    if k == 0 {
        return Err(Error::Precondition("degree bound must be at least 1".into()));
    }
    let target = (k as u64)
        .checked_add(1)
        .ok_or(Error::Overflow("degree bound does not fit the value type"))?;
    if max_flow(net).value() < target {
        return Ok(None);
    }
    if k == 1 {
        let (arcs, bottleneck) = widest_path(net);
        if bottleneck < 2 {
            return Ok(None);
        }
        let mut values = vec![0u64; net.arc_count()];
        for &a in &arcs {
            values[a] = 2;
        }
        return Ok(Some(Flow::from_arc_values(net, values)?));
    }
    let chain = SeparatorChain::build(net)?;
    if k >= chain.pruned.digraph().max_out_degree() {
        // No support can exceed the structural out-degrees, so any
        // maximum flow works once shrunk to the target value.
        let mf = max_flow(&chain.pruned);
        debug_assert!(mf.value() >= target);
        let reduced = reduce_to_value(&chain.pruned, &mf, target);
        let lifted = lift_from_pruned(net, &chain.prune_map, &reduced)?;
        return Ok(Some(validate_degree_bound(net, lifted, k)?));
    }
    let mut block_flows = Vec::with_capacity(chain.blocks.len());
    for block in &chain.blocks {
        match solve_block(block, k, target)? {
            Some(flow) => block_flows.push(flow),
            None => return Ok(None),
        }
    }
    // Acyclic block flows live on simple paths between consecutive
    // separators, and no arc lies on such paths for two different
    // blocks, so the supports never collide.
    let mut values = vec![0u64; chain.pruned.arc_count()];
    for (block, flow) in chain.blocks.iter().zip(&block_flows) {
        for (i, &origin) in block.arc_origin.iter().enumerate() {
            let v = flow.arc_value(i);
            if v > 0 {
                debug_assert_eq!(values[origin], 0);
                values[origin] += v;
            }
        }
    }
    let pruned_flow = Flow::from_arc_values(&chain.pruned, values)?;
    debug_assert_eq!(pruned_flow.value(), target);
    let lifted = lift_from_pruned(net, &chain.prune_map, &pruned_flow)?;
    Ok(Some(validate_degree_bound(net, lifted, k)?))
}

/// Find a flow of value exactly `target` with support out-degree at most
/// `k` inside one separator-free block, if any exists.
fn solve_block(block: &Block, k: usize, target: u64) -> Result<Option<Flow>> {
    let net = &block.network;
    let mf = max_flow(net);
    if mf.value() < target {
        return Ok(None);
    }
    if k >= net.digraph().max_out_degree() {
        return Ok(Some(reduce_to_value(net, &mf, target)));
    }
    let d = net.digraph();
    let candidates: Vec<ArcId> =
        d.out_arcs(net.source()).iter().copied().filter(|&a| net.cap(a) >= 2).collect();
    if candidates.is_empty() {
        // With only unit arcs at the source, k + 1 units would need
        // k + 1 support arcs there; the plain split test confirms.
        let (split, map) = split_vertices(net, k as u64, &[net.sink()])?;
        let sf = max_flow(&split);
        if sf.value() < target {
            return Ok(None);
        }
        let flow = acyclify(net, &map.restrict_flow(net, &reduce_to_value(&split, &sf, target))?);
        return match check_degree_bound(net, &flow, k) {
            true => Ok(Some(flow)),
            false => Ok(None),
        };
    }
    for &a0 in &candidates {
        if let Some(flow) = try_boosted_source(net, a0, k, target)? {
            return Ok(Some(flow));
        }
    }
    Ok(None)
}

/// Test one candidate source arc `a0 = (s, v)` of capacity at least 2:
/// replace it by a super-source s* with an arc s*→s of capacity `k - 1`
/// and an arc s*→v of the original capacity, bound every other vertex's
/// throughput by `k` via splitting, and look for `target` units. Any
/// such flow maps back to a block flow whose source keeps out-degree at
/// most `k`: at most `k - 1` units re-enter s through s*→s and fan out
/// over at most `k - 1` arcs, next to `a0` itself.
fn try_boosted_source(net: &Network, a0: ArcId, k: usize, target: u64) -> Result<Option<Flow>> {
    debug_assert!(k >= 2, "the boosted-source device needs a positive star-to-source capacity");
    let d = net.digraph();
    let source = net.source();
    let sink = net.sink();
    let s_star = net.vertex_count();
    let boosted = d.head(a0);
    let mut arcs = Vec::with_capacity(net.arc_count() + 1);
    let mut caps = Vec::with_capacity(net.arc_count() + 1);
    let mut inter = Vec::with_capacity(net.arc_count() - 1);
    for a in 0..net.arc_count() {
        if a == a0 {
            continue;
        }
        arcs.push(d.arc(a));
        caps.push(net.cap(a));
        inter.push(a);
    }
    arcs.push((s_star, source));
    caps.push(k as u64 - 1);
    let star_to_boosted = arcs.len();
    arcs.push((s_star, boosted));
    caps.push(net.cap(a0));
    let aux = Network::new(Digraph::new(s_star + 1, arcs)?, s_star, sink, caps)?;
    let (split, _) = split_vertices(&aux, k as u64, &[s_star, source, sink])?;
    let sf = max_flow(&split);
    if sf.value() < target {
        return Ok(None);
    }
    let reduced = reduce_to_value(&split, &sf, target);
    let mut values = vec![0u64; net.arc_count()];
    for (i, &a) in inter.iter().enumerate() {
        values[a] = reduced.arc_value(i);
    }
    values[a0] = reduced.arc_value(star_to_boosted);
    debug_assert!(values[a0] >= 2, "the star-to-source capacity forces two units onto a0");
    let flow = acyclify(net, &Flow::from_arc_values(net, values)?);
    debug_assert_eq!(flow.value(), target);
    debug_assert!(check_degree_bound(net, &flow, k));
    Ok(Some(flow))
}

/// Support out-degree check, over every vertex.
fn check_degree_bound(net: &Network, flow: &Flow, k: usize) -> bool {
    let d = net.digraph();
    (0..d.vertex_count()).all(|v| {
        let used = d.out_arcs(v).iter().filter(|&&a| flow.arc_value(a) > 0).count();
        used <= k
    })
}

/// Re-validate the assembled flow before handing it out.
fn validate_degree_bound(net: &Network, flow: Flow, k: usize) -> Result<Flow> {
    if check_degree_bound(net, &flow, k) {
        Ok(flow)
    } else {
        Err(Error::Internal("assembled flow violates the degree bound".into()))
    }
}

/// Carry a flow on the pruned network back to the input coordinates.
fn lift_from_pruned(net: &Network, map: &PruneMap, flow: &Flow) -> Result<Flow> {
    let mut values = vec![0u64; net.arc_count()];
    for (new_arc, &orig_arc) in map.arc_from_new.iter().enumerate() {
        values[orig_arc] = flow.arc_value(new_arc);
    }
    Flow::from_arc_values(net, values)
}

//! Decomposition of integer flows into path-flows and cycle-flows, and
//! removal of flow-carrying cycles.
//!
//! Both routines subtract bottlenecks greedily, so every extracted
//! component zeroes at least one arc: a decomposition has at most `|A|`
//! components in total and at most `|A|` cycles, comfortably within the
//! `|V| + |A|` bound, and `acyclify` terminates after at most `|A|`
//! subtractions.

use crate::netcore::{ArcId, ComponentJson, Flow, Network, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentKind {
    Path,
    Cycle,
}

/// One path-flow or cycle-flow. Paths list `vertices` from source to sink
/// with `arcs.len() == vertices.len() - 1`; cycles list each vertex once
/// and close implicitly, with `arcs.len() == vertices.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowComponent {
    pub kind: ComponentKind,
    pub vertices: Vec<VertexId>,
    pub arcs: Vec<ArcId>,
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowDecomposition {
    pub components: Vec<FlowComponent>,
}

impl FlowDecomposition {
    pub fn paths(&self) -> impl Iterator<Item = &FlowComponent> {
        self.components.iter().filter(|c| c.kind == ComponentKind::Path)
    }

    pub fn cycles(&self) -> impl Iterator<Item = &FlowComponent> {
        self.components.iter().filter(|c| c.kind == ComponentKind::Cycle)
    }

    /// Sum the components back into per-arc values.
    pub fn reconstruct(&self, arc_count: usize) -> Vec<u64> {
        let mut values = vec![0u64; arc_count];
        for c in &self.components {
            for &a in &c.arcs {
                values[a] += c.value;
            }
        }
        values
    }

    pub fn to_json(&self) -> Vec<ComponentJson> {
        self.components
            .iter()
            .map(|c| ComponentJson {
                kind: match c.kind {
                    ComponentKind::Path => "path".into(),
                    ComponentKind::Cycle => "cycle".into(),
                },
                vertices: c.vertices.iter().map(|&v| v + 1).collect(),
                value: c.value,
            })
            .collect()
    }
}

/// Decompose `flow` into source-to-sink path-flows followed by
/// cycle-flows. Deterministic: the path phase does a DFS preferring
/// smaller `ArcId`s, the cycle phase starts from the smallest positive
/// arc and walks smallest-ArcId positive out-arcs.
pub fn decompose(net: &Network, flow: &Flow) -> FlowDecomposition {
    let mut rem: Vec<u64> = flow.arc_values().to_vec();
    let mut rem_value = flow.value();
    let mut components = Vec::new();

    while rem_value > 0 {
        let (vertices, arcs) =
            positive_path(net, &rem, net.source(), net.sink()).expect("positive value implies an s-t path in the support");
        let bottleneck = arcs.iter().map(|&a| rem[a]).min().expect("path has arcs");
        // When flow returns into the source, a path bottleneck can exceed
        // the remaining value; capping keeps the leftover a circulation.
        let delta = bottleneck.min(rem_value);
        for &a in &arcs {
            rem[a] -= delta;
        }
        rem_value -= delta;
        components.push(FlowComponent { kind: ComponentKind::Path, vertices, arcs, value: delta });
    }

    // What remains is a circulation; peel cycles.
    loop {
        let start = match (0..net.arc_count()).find(|&a| rem[a] > 0) {
            Some(a) => a,
            None => break,
        };
        let (vertices, arcs) = positive_cycle_through(net, &rem, start);
        let bottleneck = arcs.iter().map(|&a| rem[a]).min().expect("cycle has arcs");
        for &a in &arcs {
            rem[a] -= bottleneck;
        }
        components.push(FlowComponent { kind: ComponentKind::Cycle, vertices, arcs, value: bottleneck });
    }

    FlowDecomposition { components }
}

/// DFS for a path from `from` to `to` using only arcs with positive
/// remaining value. Arcs are tried in ascending `ArcId` order.
fn positive_path(
    net: &Network,
    rem: &[u64],
    from: VertexId,
    to: VertexId,
) -> Option<(Vec<VertexId>, Vec<ArcId>)> {
    let d = net.digraph();
    let mut visited = vec![false; net.vertex_count()];
    // Stack entries: (vertex, index into its out-arc list).
    let mut stack: Vec<(VertexId, usize)> = vec![(from, 0)];
    let mut path_arcs: Vec<ArcId> = Vec::new();
    visited[from] = true;
    while let Some(&(v, next)) = stack.last() {
        if v == to {
            let vertices = std::iter::once(from)
                .chain(path_arcs.iter().map(|&a| d.head(a)))
                .collect();
            return Some((vertices, path_arcs));
        }
        let chosen = d.out_arcs(v)[next..]
            .iter()
            .copied()
            .position(|a| rem[a] > 0 && !visited[d.head(a)]);
        match chosen {
            Some(offset) => {
                let a = d.out_arcs(v)[next + offset];
                stack.last_mut().unwrap().1 = next + offset + 1;
                visited[d.head(a)] = true;
                stack.push((d.head(a), 0));
                path_arcs.push(a);
            }
            None => {
                stack.pop();
                path_arcs.pop();
            }
        }
    }
    None
}

/// Walk forward from the head of `start` along positive arcs until a
/// vertex repeats; the walk cannot stall because the remaining flow is a
/// circulation. Returns the cycle trimmed from the walk.
fn positive_cycle_through(net: &Network, rem: &[u64], start: ArcId) -> (Vec<VertexId>, Vec<ArcId>) {
    let d = net.digraph();
    let mut walk_vertices = vec![d.tail(start), d.head(start)];
    let mut walk_arcs = vec![start];
    loop {
        let v = *walk_vertices.last().unwrap();
        if let Some(pos) = walk_vertices.iter().position(|&w| w == v) {
            if pos + 1 < walk_vertices.len() {
                let vertices = walk_vertices[pos..walk_vertices.len() - 1].to_vec();
                let arcs = walk_arcs[pos..].to_vec();
                return (vertices, arcs);
            }
        }
        let a = d
            .out_arcs(v)
            .iter()
            .copied()
            .find(|&a| rem[a] > 0)
            .expect("circulation vertices with inflow have outflow");
        walk_vertices.push(d.head(a));
        walk_arcs.push(a);
    }
}

/// Remove all flow-carrying cycles: repeatedly find a cycle in the
/// support and subtract the minimum value along it. The value is
/// preserved and the support only shrinks (arc-wise).
pub fn acyclify(net: &Network, flow: &Flow) -> Flow {
    let mut rem: Vec<u64> = flow.arc_values().to_vec();
    while let Some(arcs) = positive_cycle(net, &rem) {
        let bottleneck = arcs.iter().map(|&a| rem[a]).min().expect("cycle has arcs");
        for &a in &arcs {
            rem[a] -= bottleneck;
        }
    }
    let result = Flow::from_arc_values(net, rem).expect("cycle subtraction preserves flow invariants");
    debug_assert_eq!(result.value(), flow.value());
    result
}

/// Any directed cycle in the positive-arc subgraph (iterative DFS with
/// colors), or `None` when the support is acyclic.
fn positive_cycle(net: &Network, rem: &[u64]) -> Option<Vec<ArcId>> {
    const WHITE: u8 = 0;
    const GRAY: u8 = 1;
    const BLACK: u8 = 2;
    let d = net.digraph();
    let mut color = vec![WHITE; net.vertex_count()];
    for root in 0..net.vertex_count() {
        if color[root] != WHITE {
            continue;
        }
        let mut stack: Vec<(VertexId, usize)> = vec![(root, 0)];
        let mut path_arcs: Vec<ArcId> = Vec::new();
        color[root] = GRAY;
        while let Some(&(v, next)) = stack.last() {
            let mut advanced = false;
            let mut cursor = next;
            while cursor < d.out_arcs(v).len() {
                let a = d.out_arcs(v)[cursor];
                cursor += 1;
                if rem[a] == 0 {
                    continue;
                }
                let w = d.head(a);
                if color[w] == GRAY {
                    // Cycle: the portion of the stack from w to v, plus a.
                    let pos = stack.iter().position(|&(u, _)| u == w).expect("gray vertex is on the stack");
                    let mut arcs = path_arcs[pos..].to_vec();
                    arcs.push(a);
                    return Some(arcs);
                }
                if color[w] == WHITE {
                    stack.last_mut().unwrap().1 = cursor;
                    color[w] = GRAY;
                    stack.push((w, 0));
                    path_arcs.push(a);
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                color[v] = BLACK;
                stack.pop();
                path_arcs.pop();
            }
        }
    }
    None
}

/// Shrink an acyclic-support flow to exactly `target` by scaling back its
/// path decomposition (cycles, if any, are dropped). Panics if `target`
/// exceeds the flow value; callers check first.
pub fn reduce_to_value(net: &Network, flow: &Flow, target: u64) -> Flow {
    assert!(target <= flow.value());
    let acyclic = acyclify(net, flow);
    if acyclic.value() == target {
        return acyclic;
    }
    let decomposition = decompose(net, &acyclic);
    let mut values = vec![0u64; net.arc_count()];
    let mut remaining = target;
    for c in decomposition.paths() {
        if remaining == 0 {
            break;
        }
        let take = c.value.min(remaining);
        for &a in &c.arcs {
            values[a] += take;
        }
        remaining -= take;
    }
    let result = Flow::from_arc_values(net, values).expect("partial path sums stay feasible");
    debug_assert_eq!(result.value(), target);
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maxflow::max_flow;
    use crate::netcore::Network;

    #[test]
    fn single_path_flow_is_one_component() {
        let net = Network::from_arcs(3, 0, 2, &[(0, 1, 2), (1, 2, 2)]).unwrap();
        let flow = Flow::from_arc_values(&net, vec![2, 2]).unwrap();
        let dec = decompose(&net, &flow);
        assert_eq!(dec.components.len(), 1);
        assert_eq!(dec.components[0].kind, ComponentKind::Path);
        assert_eq!(dec.components[0].vertices, vec![0, 1, 2]);
        assert_eq!(dec.components[0].value, 2);
    }

    #[test]
    fn zero_value_circulation_decomposes_into_cycles() {
        // s -> t unused; a 2-cycle between b and c carries 3 units.
        let net = Network::from_arcs(4, 0, 1, &[(0, 1, 1), (2, 3, 3), (3, 2, 3)]).unwrap();
        let flow = Flow::from_arc_values(&net, vec![0, 3, 3]).unwrap();
        let dec = decompose(&net, &flow);
        assert_eq!(flow.value(), 0);
        assert_eq!(dec.components.len(), 1);
        assert_eq!(dec.components[0].kind, ComponentKind::Cycle);
        assert_eq!(dec.components[0].value, 3);
    }

    #[test]
    fn figure_eight_gives_two_cycles() {
        // Two triangles sharing vertex 1.
        let net = Network::from_arcs(
            6,
            0,
            5,
            &[(0, 5, 1), (1, 2, 1), (2, 3, 1), (3, 1, 1), (1, 4, 1), (4, 5, 1), (5, 1, 1)],
        )
        .unwrap();
        let flow = Flow::from_arc_values(&net, vec![0, 1, 1, 1, 1, 1, 1]).unwrap();
        let dec = decompose(&net, &flow);
        assert_eq!(dec.components.len(), 2);
        assert!(dec.components.iter().all(|c| c.kind == ComponentKind::Cycle));
    }

    #[test]
    fn decomposition_reconstructs_exactly() {
        let net = Network::from_arcs(
            5,
            0,
            4,
            &[(0, 1, 3), (1, 2, 2), (2, 4, 2), (1, 4, 2), (0, 2, 1), (2, 1, 1)],
        )
        .unwrap();
        let flow = max_flow(&net);
        let dec = decompose(&net, &flow);
        assert_eq!(dec.reconstruct(net.arc_count()), flow.arc_values());
        assert!(dec.components.len() <= net.vertex_count() + net.arc_count());
    }

    #[test]
    fn acyclify_removes_two_cycle_and_keeps_value() {
        // Path s -> a -> b -> t with an extra 2-cycle between a and b.
        let net = Network::from_arcs(
            4,
            0,
            3,
            &[(0, 1, 2), (1, 2, 3), (2, 3, 2), (2, 1, 1)],
        )
        .unwrap();
        let flow = Flow::from_arc_values(&net, vec![2, 3, 2, 1]).unwrap();
        let out = acyclify(&net, &flow);
        assert_eq!(out.value(), flow.value());
        assert_eq!(out.arc_values(), &[2, 2, 2, 0]);
    }

    #[test]
    fn acyclify_is_identity_on_acyclic_support() {
        let net = Network::from_arcs(3, 0, 2, &[(0, 1, 2), (1, 2, 2)]).unwrap();
        let flow = Flow::from_arc_values(&net, vec![1, 1]).unwrap();
        assert_eq!(acyclify(&net, &flow), flow);
    }

    #[test]
    fn reduce_to_value_hits_exact_target() {
        let net = Network::from_arcs(4, 0, 3, &[(0, 1, 2), (1, 3, 2), (0, 2, 3), (2, 3, 3)]).unwrap();
        let flow = max_flow(&net);
        assert_eq!(flow.value(), 5);
        let reduced = reduce_to_value(&net, &flow, 3);
        assert_eq!(reduced.value(), 3);
        for a in 0..net.arc_count() {
            assert!(reduced.arc_value(a) <= flow.arc_value(a));
        }
    }
}

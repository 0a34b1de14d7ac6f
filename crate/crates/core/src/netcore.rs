//! Directed multigraphs, capacitated networks, integer flows, and their
//! text and JSON formats.
//!
//! Conventions used across the crate:
//!
//! * vertices are dense indices `0..n` internally and 1-based in files,
//! * `ArcId` is the position of an arc in the arc list; parallel arcs are
//!   distinct arcs and keep their identity through every construction,
//! * self-loops are rejected at construction time,
//! * capacities and flow values are `u64`; sums are checked, never wrapped.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type ArcId = usize;

/// Directed multigraph with a fixed vertex set `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    vertex_count: usize,
    arcs: Vec<(VertexId, VertexId)>,
    out: Vec<Vec<ArcId>>,
    inc: Vec<Vec<ArcId>>,
}

impl Digraph {
    pub fn new(vertex_count: usize, arcs: Vec<(VertexId, VertexId)>) -> Result<Self> {
        for (i, &(u, v)) in arcs.iter().enumerate() {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::InvalidNetwork(format!(
                    "arc {i} endpoints ({u}, {v}) out of range for {vertex_count} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidNetwork(format!("arc {i} is a self-loop at vertex {u}")));
            }
        }
        let mut out = vec![Vec::new(); vertex_count];
        let mut inc = vec![Vec::new(); vertex_count];
        for (i, &(u, v)) in arcs.iter().enumerate() {
            out[u].push(i);
            inc[v].push(i);
        }
        Ok(Digraph { vertex_count, arcs, out, inc })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arc(&self, a: ArcId) -> (VertexId, VertexId) {
        self.arcs[a]
    }

    pub fn tail(&self, a: ArcId) -> VertexId {
        self.arcs[a].0
    }

    pub fn head(&self, a: ArcId) -> VertexId {
        self.arcs[a].1
    }

    pub fn arcs(&self) -> &[(VertexId, VertexId)] {
        &self.arcs
    }

    /// Out-arcs of `v` in ascending `ArcId` order.
    pub fn out_arcs(&self, v: VertexId) -> &[ArcId] {
        &self.out[v]
    }

    /// In-arcs of `v` in ascending `ArcId` order.
    pub fn in_arcs(&self, v: VertexId) -> &[ArcId] {
        &self.inc[v]
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out[v].len()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.inc[v].len()
    }

    pub fn max_out_degree(&self) -> usize {
        (0..self.vertex_count).map(|v| self.out_degree(v)).max().unwrap_or(0)
    }

    pub fn max_in_degree(&self) -> usize {
        (0..self.vertex_count).map(|v| self.in_degree(v)).max().unwrap_or(0)
    }

    /// Topological order when the digraph is acyclic, `None` otherwise.
    /// Deterministic: among ready vertices the smallest id goes first.
    pub fn is_acyclic(&self) -> Option<Vec<VertexId>> {
        let mut indeg: Vec<usize> = (0..self.vertex_count).map(|v| self.in_degree(v)).collect();
        let mut ready = std::collections::BinaryHeap::new();
        for v in 0..self.vertex_count {
            if indeg[v] == 0 {
                ready.push(std::cmp::Reverse(v));
            }
        }
        let mut order = Vec::with_capacity(self.vertex_count);
        while let Some(std::cmp::Reverse(v)) = ready.pop() {
            order.push(v);
            for &a in &self.out[v] {
                let w = self.head(a);
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.push(std::cmp::Reverse(w));
                }
            }
        }
        if order.len() == self.vertex_count {
            Some(order)
        } else {
            None
        }
    }

    /// Vertices reachable from any of `starts` (including the starts).
    pub fn reachable_multi(&self, starts: &[VertexId]) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count];
        let mut queue = std::collections::VecDeque::new();
        for &s in starts {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &a in &self.out[v] {
                let w = self.head(a);
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    pub fn reachable(&self, start: VertexId) -> Vec<bool> {
        self.reachable_multi(&[start])
    }

    /// Vertices from which `target` is reachable (including `target`).
    pub fn co_reachable(&self, target: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count];
        seen[target] = true;
        let mut queue = std::collections::VecDeque::from([target]);
        while let Some(v) = queue.pop_front() {
            for &a in &self.inc[v] {
                let w = self.tail(a);
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    pub fn has_path(&self, from: VertexId, to: VertexId) -> bool {
        self.reachable(from)[to]
    }

    /// Shortest path from `from` to `to` as a `(vertices, arcs)` pair.
    /// BFS explores out-arcs in ascending `ArcId` order, so ties are
    /// broken deterministically towards smaller arc ids.
    pub fn shortest_path(&self, from: VertexId, to: VertexId) -> Option<(Vec<VertexId>, Vec<ArcId>)> {
        let mut parent: Vec<Option<ArcId>> = vec![None; self.vertex_count];
        let mut seen = vec![false; self.vertex_count];
        seen[from] = true;
        let mut queue = std::collections::VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for &a in &self.out[v] {
                let w = self.head(a);
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(a);
                    queue.push_back(w);
                }
            }
        }
        if !seen[to] {
            return None;
        }
        let mut vertices = vec![to];
        let mut arcs = Vec::new();
        let mut v = to;
        while v != from {
            let a = parent[v].expect("parent chain is complete");
            arcs.push(a);
            v = self.tail(a);
            vertices.push(v);
        }
        vertices.reverse();
        arcs.reverse();
        Some((vertices, arcs))
    }
}

/// Capacitated network: a digraph with a source, a sink and a positive
/// integer capacity per arc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    digraph: Digraph,
    source: VertexId,
    sink: VertexId,
    capacities: Vec<u64>,
}

impl Network {
    pub fn new(digraph: Digraph, source: VertexId, sink: VertexId, capacities: Vec<u64>) -> Result<Self> {
        if source >= digraph.vertex_count() || sink >= digraph.vertex_count() {
            return Err(Error::InvalidNetwork("source or sink out of range".into()));
        }
        if source == sink {
            return Err(Error::InvalidNetwork("source and sink must differ".into()));
        }
        if capacities.len() != digraph.arc_count() {
            return Err(Error::InvalidNetwork(format!(
                "{} capacities for {} arcs",
                capacities.len(),
                digraph.arc_count()
            )));
        }
        if let Some(a) = capacities.iter().position(|&c| c == 0) {
            return Err(Error::InvalidNetwork(format!("arc {a} has capacity 0")));
        }
        Ok(Network { digraph, source, sink, capacities })
    }

    /// Convenience constructor from raw arc triples `(tail, head, cap)`.
    pub fn from_arcs(
        vertex_count: usize,
        source: VertexId,
        sink: VertexId,
        arcs: &[(VertexId, VertexId, u64)],
    ) -> Result<Self> {
        let digraph = Digraph::new(vertex_count, arcs.iter().map(|&(u, v, _)| (u, v)).collect())?;
        Network::new(digraph, source, sink, arcs.iter().map(|&(_, _, c)| c).collect())
    }

    pub fn digraph(&self) -> &Digraph {
        &self.digraph
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn sink(&self) -> VertexId {
        self.sink
    }

    pub fn vertex_count(&self) -> usize {
        self.digraph.vertex_count()
    }

    pub fn arc_count(&self) -> usize {
        self.digraph.arc_count()
    }

    pub fn cap(&self, a: ArcId) -> u64 {
        self.capacities[a]
    }

    pub fn capacities(&self) -> &[u64] {
        &self.capacities
    }

    pub fn max_cap(&self) -> u64 {
        self.capacities.iter().copied().max().unwrap_or(0)
    }

    /// Keep exactly the arcs with `keep[a]`, preserving the vertex set.
    /// Returns the sub-network and, per new arc, its original `ArcId`.
    pub fn sub_network_by_arcs(&self, keep: &[bool]) -> (Network, Vec<ArcId>) {
        assert_eq!(keep.len(), self.arc_count());
        let mut arcs = Vec::new();
        let mut caps = Vec::new();
        let mut origin = Vec::new();
        for a in 0..self.arc_count() {
            if keep[a] {
                arcs.push(self.digraph.arc(a));
                caps.push(self.capacities[a]);
                origin.push(a);
            }
        }
        let digraph = Digraph::new(self.vertex_count(), arcs).expect("subgraph of a valid digraph");
        let net = Network { digraph, source: self.source, sink: self.sink, capacities: caps };
        (net, origin)
    }

    /// Restrict to vertices and arcs lying on some source-to-sink path.
    /// Vertices are renumbered densely; the map records both directions.
    /// The source and sink survive even when no path connects them.
    pub fn prune_to_st_paths(&self) -> (Network, PruneMap) {
        let fwd = self.digraph.reachable(self.source);
        let bwd = self.digraph.co_reachable(self.sink);
        let mut keep_vertex: Vec<bool> = (0..self.vertex_count()).map(|v| fwd[v] && bwd[v]).collect();
        keep_vertex[self.source] = true;
        keep_vertex[self.sink] = true;
        let mut vertex_to_new = vec![None; self.vertex_count()];
        let mut vertex_from_new = Vec::new();
        for v in 0..self.vertex_count() {
            if keep_vertex[v] {
                vertex_to_new[v] = Some(vertex_from_new.len());
                vertex_from_new.push(v);
            }
        }
        let mut arcs = Vec::new();
        let mut caps = Vec::new();
        let mut arc_to_new = vec![None; self.arc_count()];
        let mut arc_from_new = Vec::new();
        for a in 0..self.arc_count() {
            let (u, v) = self.digraph.arc(a);
            // An arc is on an s-t path iff s reaches its tail and its head reaches t.
            if fwd[u] && bwd[v] {
                arc_to_new[a] = Some(arcs.len());
                arcs.push((vertex_to_new[u].unwrap(), vertex_to_new[v].unwrap()));
                caps.push(self.capacities[a]);
                arc_from_new.push(a);
            }
        }
        let digraph = Digraph::new(vertex_from_new.len(), arcs).expect("pruned digraph is valid");
        let net = Network {
            digraph,
            source: vertex_to_new[self.source].unwrap(),
            sink: vertex_to_new[self.sink].unwrap(),
            capacities: caps,
        };
        (net, PruneMap { vertex_to_new, vertex_from_new, arc_to_new, arc_from_new })
    }

    /// Parse the `p flownet` text format. Vertices are 1-based in files.
    pub fn parse(input: &str) -> Result<Network> {
        let mut header: Option<(usize, usize)> = None;
        let mut source: Option<(usize, VertexId)> = None;
        let mut sink: Option<(usize, VertexId)> = None;
        let mut arcs: Vec<(VertexId, VertexId, u64)> = Vec::new();

        for (idx, raw) in input.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens[0] {
                "p" => {
                    if header.is_some() {
                        return Err(Error::parse(lineno, "duplicate problem line"));
                    }
                    if tokens.len() != 4 || tokens[1] != "flownet" {
                        return Err(Error::parse(lineno, "expected `p flownet <n> <m>`"));
                    }
                    let n = parse_count(lineno, tokens[2], "vertex count")?;
                    let m = parse_count(lineno, tokens[3], "arc count")?;
                    header = Some((n, m));
                }
                "s" | "t" => {
                    let n = header.ok_or_else(|| Error::parse(lineno, "problem line must come first"))?.0;
                    if tokens.len() != 2 {
                        return Err(Error::parse(lineno, format!("expected `{} <vertex>`", tokens[0])));
                    }
                    let v = parse_vertex(lineno, tokens[1], n)?;
                    let slot = if tokens[0] == "s" { &mut source } else { &mut sink };
                    if slot.is_some() {
                        return Err(Error::parse(lineno, format!("duplicate `{}` line", tokens[0])));
                    }
                    *slot = Some((lineno, v));
                }
                "a" => {
                    let n = header.ok_or_else(|| Error::parse(lineno, "problem line must come first"))?.0;
                    if tokens.len() != 4 {
                        return Err(Error::parse(lineno, "expected `a <tail> <head> <cap>`"));
                    }
                    let u = parse_vertex(lineno, tokens[1], n)?;
                    let v = parse_vertex(lineno, tokens[2], n)?;
                    if u == v {
                        return Err(Error::parse(lineno, format!("self-loop at vertex {}", u + 1)));
                    }
                    let c: u64 = tokens[3]
                        .parse()
                        .map_err(|_| Error::parse(lineno, format!("bad capacity `{}`", tokens[3])))?;
                    if c == 0 {
                        return Err(Error::parse(lineno, "capacity must be at least 1"));
                    }
                    arcs.push((u, v, c));
                }
                other => {
                    return Err(Error::parse(lineno, format!("unknown line type `{other}`")));
                }
            }
        }

        let (n, m) = header.ok_or_else(|| Error::parse(0, "missing `p flownet` line"))?;
        if arcs.len() != m {
            return Err(Error::parse(0, format!("problem line announces {m} arcs, found {}", arcs.len())));
        }
        let (_, s) = source.ok_or_else(|| Error::parse(0, "missing `s` line"))?;
        let (t_line, t) = sink.ok_or_else(|| Error::parse(0, "missing `t` line"))?;
        if s == t {
            return Err(Error::parse(t_line, "source and sink must differ"));
        }
        Network::from_arcs(n, s, t, &arcs)
    }

    /// Canonical serialization: `p`, `s`, `t`, then arcs in `ArcId` order.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("p flownet {} {}\n", self.vertex_count(), self.arc_count()));
        out.push_str(&format!("s {}\n", self.source + 1));
        out.push_str(&format!("t {}\n", self.sink + 1));
        for a in 0..self.arc_count() {
            let (u, v) = self.digraph.arc(a);
            out.push_str(&format!("a {} {} {}\n", u + 1, v + 1, self.capacities[a]));
        }
        out
    }

    /// GraphViz export; arc labels are capacities, or `x/c` with a flow.
    pub fn to_dot(&self, flow: Option<&Flow>) -> String {
        let mut out = String::from("digraph flownet {\n  rankdir=LR;\n");
        for v in 0..self.vertex_count() {
            let marker = if v == self.source {
                " (s)"
            } else if v == self.sink {
                " (t)"
            } else {
                ""
            };
            out.push_str(&format!("  v{} [label=\"{}{}\"];\n", v, v + 1, marker));
        }
        for a in 0..self.arc_count() {
            let (u, v) = self.digraph.arc(a);
            let label = match flow {
                Some(f) => format!("{}/{}", f.arc_value(a), self.capacities[a]),
                None => format!("{}", self.capacities[a]),
            };
            out.push_str(&format!("  v{u} -> v{v} [label=\"{label}\"];\n"));
        }
        out.push_str("}\n");
        out
    }
}

fn parse_count(line: usize, token: &str, what: &str) -> Result<usize> {
    token.parse().map_err(|_| Error::parse(line, format!("bad {what} `{token}`")))
}

fn parse_vertex(line: usize, token: &str, n: usize) -> Result<VertexId> {
    let v: usize = token.parse().map_err(|_| Error::parse(line, format!("bad vertex `{token}`")))?;
    if v == 0 || v > n {
        return Err(Error::parse(line, format!("vertex {v} out of range 1..={n}")));
    }
    Ok(v - 1)
}

/// Dense renumbering produced by [`Network::prune_to_st_paths`].
#[derive(Debug, Clone)]
pub struct PruneMap {
    pub vertex_to_new: Vec<Option<VertexId>>,
    pub vertex_from_new: Vec<VertexId>,
    pub arc_to_new: Vec<Option<ArcId>>,
    pub arc_from_new: Vec<ArcId>,
}

/// Integer flow on a [`Network`], stored as one value per arc.
///
/// A `Flow` is only handed out by constructors that check the capacity
/// and conservation invariants, so holding one is proof of validity
/// relative to the network it was built against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flow {
    values: Vec<u64>,
    value: u64,
}

impl Flow {
    pub fn zero(net: &Network) -> Flow {
        Flow { values: vec![0; net.arc_count()], value: 0 }
    }

    /// Validating constructor: `0 <= x(a) <= c(a)` everywhere, conservation
    /// at every vertex other than source and sink, and a non-negative value.
    pub fn from_arc_values(net: &Network, values: Vec<u64>) -> Result<Flow> {
        if values.len() != net.arc_count() {
            return Err(Error::InvalidFlow(format!(
                "{} arc values for {} arcs",
                values.len(),
                net.arc_count()
            )));
        }
        for a in 0..net.arc_count() {
            if values[a] > net.cap(a) {
                return Err(Error::InvalidFlow(format!(
                    "arc {a} carries {} over capacity {}",
                    values[a],
                    net.cap(a)
                )));
            }
        }
        let mut value = 0u64;
        for v in 0..net.vertex_count() {
            let out = sum_checked(net.digraph().out_arcs(v).iter().map(|&a| values[a]))?;
            let inc = sum_checked(net.digraph().in_arcs(v).iter().map(|&a| values[a]))?;
            if v == net.source() {
                if inc > out {
                    return Err(Error::InvalidFlow("negative value: more flow enters the source than leaves".into()));
                }
                value = out - inc;
            } else if v != net.sink() && out != inc {
                return Err(Error::InvalidFlow(format!(
                    "conservation fails at vertex {}: {inc} in, {out} out",
                    v + 1
                )));
            }
        }
        Ok(Flow { values, value })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn arc_value(&self, a: ArcId) -> u64 {
        self.values[a]
    }

    pub fn arc_values(&self) -> &[u64] {
        &self.values
    }

    pub fn support_arc_count(&self) -> usize {
        self.values.iter().filter(|&&x| x > 0).count()
    }

    /// Subdigraph of arcs with positive flow. The returned vector maps
    /// each support arc back to its original `ArcId`.
    pub fn support(&self, net: &Network) -> (Digraph, Vec<ArcId>) {
        let mut arcs = Vec::new();
        let mut ids = Vec::new();
        for a in 0..net.arc_count() {
            if self.values[a] > 0 {
                arcs.push(net.digraph().arc(a));
                ids.push(a);
            }
        }
        let digraph = Digraph::new(net.vertex_count(), arcs).expect("support of a valid flow");
        (digraph, ids)
    }

    /// Support as a network (original capacities on the surviving arcs).
    pub fn support_network(&self, net: &Network) -> (Network, Vec<ArcId>) {
        let keep: Vec<bool> = self.values.iter().map(|&x| x > 0).collect();
        net.sub_network_by_arcs(&keep)
    }

    pub fn to_json(&self) -> FlowJson {
        FlowJson {
            value: self.value,
            flow: (0..self.values.len())
                .filter(|&a| self.values[a] > 0)
                .map(|a| FlowArcJson { arc: a, x: self.values[a] })
                .collect(),
            decomposition: None,
        }
    }

    pub fn from_json(net: &Network, json: &FlowJson) -> Result<Flow> {
        let mut values = vec![0u64; net.arc_count()];
        for entry in &json.flow {
            if entry.arc >= net.arc_count() {
                return Err(Error::InvalidFlow(format!("arc id {} out of range", entry.arc)));
            }
            values[entry.arc] = entry.x;
        }
        let flow = Flow::from_arc_values(net, values)?;
        if flow.value() != json.value {
            return Err(Error::InvalidFlow(format!(
                "declared value {} but arc values give {}",
                json.value,
                flow.value()
            )));
        }
        Ok(flow)
    }
}

fn sum_checked(values: impl Iterator<Item = u64>) -> Result<u64> {
    let mut acc = 0u64;
    for v in values {
        acc = acc.checked_add(v).ok_or(Error::Overflow("a flow sum"))?;
    }
    Ok(acc)
}

/// Checked sum helper shared by the cut and value computations.
pub fn checked_capacity_sum(values: impl Iterator<Item = u64>, what: &'static str) -> Result<u64> {
    let mut acc = 0u64;
    for v in values {
        acc = acc.checked_add(v).ok_or(Error::Overflow(what))?;
    }
    Ok(acc)
}

/// JSON schema for flows: arcs with zero flow are omitted, `arc` is the
/// 0-based `ArcId` (position among the `a` lines), vertices inside
/// decomposition components are 1-based like the text format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlowJson {
    pub value: u64,
    pub flow: Vec<FlowArcJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<Vec<ComponentJson>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlowArcJson {
    pub arc: ArcId,
    pub x: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComponentJson {
    pub kind: String,
    pub vertices: Vec<usize>,
    pub value: u64,
}

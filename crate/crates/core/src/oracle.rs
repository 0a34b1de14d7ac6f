//! Exhaustive reference solvers. Everything in this module trades speed
//! for being obviously correct, so the fast algorithms can be checked
//! against it on small instances. All entry points take a [`Budget`] and
//! fail with `Error::Budget` instead of running away.

use crate::error::{Error, Result};
use crate::gadgets::CnfFormula;
use crate::maxflow;
use crate::netcore::{ArcId, Digraph, Flow, Network, VertexId};
use crate::psplit::SplitVariant;

/// Size guard for the exhaustive solvers: instance limits checked up
/// front, plus a state counter decremented while searching.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_vertices: usize,
    pub max_arcs: usize,
    pub max_cap: u64,
    pub max_states: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_vertices: 12, max_arcs: 14, max_cap: 6, max_states: 10_000_000 }
    }
}

impl Budget {
    /// Relaxed instance limits for the structured generator outputs,
    /// which are larger than random test networks but highly prunable.
    pub fn gadget() -> Self {
        Budget { max_vertices: 128, max_arcs: 192, max_cap: 64, max_states: 10_000_000 }
    }

    pub fn with_states(mut self, max_states: u64) -> Self {
        self.max_states = max_states;
        self
    }

    fn check_network(&self, net: &Network) -> Result<()> {
        if net.vertex_count() > self.max_vertices {
            return Err(Error::Budget(format!(
                "network has {} vertices, budget allows {}",
                net.vertex_count(),
                self.max_vertices
            )));
        }
        if net.arc_count() > self.max_arcs {
            return Err(Error::Budget(format!(
                "network has {} arcs, budget allows {}",
                net.arc_count(),
                self.max_arcs
            )));
        }
        if net.max_cap() > self.max_cap {
            return Err(Error::Budget(format!(
                "network has capacity {}, budget allows {}",
                net.max_cap(),
                self.max_cap
            )));
        }
        Ok(())
    }

    fn counter(&self) -> StateCounter {
        StateCounter { used: 0, limit: self.max_states }
    }
}

struct StateCounter {
    used: u64,
    limit: u64,
}

impl StateCounter {
    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::Budget(format!("search exceeded {} states", self.limit)))
        } else {
            Ok(())
        }
    }
}

/// All simple source-to-sink paths, as (vertices, arcs) pairs. Parallel
/// arcs give distinct paths. DFS in ascending arc order, so the output
/// order is deterministic.
fn all_simple_paths(
    d: &Digraph,
    s: VertexId,
    t: VertexId,
    counter: &mut StateCounter,
) -> Result<Vec<(Vec<VertexId>, Vec<ArcId>)>> {
    fn rec(
        d: &Digraph,
        v: VertexId,
        t: VertexId,
        on_path: &mut Vec<bool>,
        vertices: &mut Vec<VertexId>,
        arcs: &mut Vec<ArcId>,
        out: &mut Vec<(Vec<VertexId>, Vec<ArcId>)>,
        counter: &mut StateCounter,
    ) -> Result<()> {
        counter.tick()?;
        if v == t {
            out.push((vertices.clone(), arcs.clone()));
            return Ok(());
        }
        for &a in d.out_arcs(v) {
            let w = d.head(a);
            if on_path[w] {
                continue;
            }
            on_path[w] = true;
            vertices.push(w);
            arcs.push(a);
            rec(d, w, t, on_path, vertices, arcs, out, counter)?;
            on_path[w] = false;
            vertices.pop();
            arcs.pop();
        }
        Ok(())
    }

    let mut on_path = vec![false; d.vertex_count()];
    on_path[s] = true;
    let mut out = Vec::new();
    rec(d, s, t, &mut on_path, &mut vec![s], &mut Vec::new(), &mut out, counter)?;
    Ok(out)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k.min(n), &mut Vec::new(), &mut out);
    out
}

fn masked_max_flow(net: &Network, keep: &[bool]) -> Result<u64> {
    if keep.iter().all(|&b| b) {
        return Ok(maxflow::max_flow(net).value());
    }
    let (sub, _) = net.sub_network_by_arcs(keep);
    Ok(maxflow::max_flow(&sub).value())
}

/// Maximum value of a flow whose support uses at most `k_out` out-arcs at
/// every vertex (and at most `k_in` in-arcs, when given). Exhaustive over
/// which arcs may carry flow at each offending vertex: any feasible
/// support is contained in one of the enumerated arc subsets, and each
/// subset is solved exactly by max flow, so the result is exact. A
/// relaxation bound prunes subtrees that cannot beat the incumbent.
pub fn oracle_deg_max_flow(
    net: &Network,
    k_out: usize,
    k_in: Option<usize>,
    budget: &Budget,
) -> Result<u64> {
    budget.check_network(net)?;
    if k_out == 0 || k_in == Some(0) {
        return Err(Error::Precondition("degree bound must be at least 1".into()));
    }
    let d = net.digraph();

    #[derive(Clone, Copy)]
    enum Side {
        Out,
        In,
    }
    let mut tasks: Vec<(VertexId, Side, usize)> = Vec::new();
    for v in 0..d.vertex_count() {
        if d.out_degree(v) > k_out {
            tasks.push((v, Side::Out, k_out));
        }
    }
    if let Some(ki) = k_in {
        for v in 0..d.vertex_count() {
            if d.in_degree(v) > ki {
                tasks.push((v, Side::In, ki));
            }
        }
    }

    fn rec(
        net: &Network,
        tasks: &[(VertexId, Side, usize)],
        idx: usize,
        keep: &mut Vec<bool>,
        best: &mut u64,
        counter: &mut StateCounter,
    ) -> Result<()> {
        counter.tick()?;
        let relaxed = masked_max_flow(net, keep)?;
        if idx == tasks.len() {
            *best = (*best).max(relaxed);
            return Ok(());
        }
        if relaxed <= *best {
            return Ok(());
        }
        let (v, side, k) = tasks[idx];
        let arcs: &[ArcId] = match side {
            Side::Out => net.digraph().out_arcs(v),
            Side::In => net.digraph().in_arcs(v),
        };
        let saved: Vec<bool> = arcs.iter().map(|&a| keep[a]).collect();
        for combo in combinations(arcs.len(), k) {
            for (i, &a) in arcs.iter().enumerate() {
                keep[a] = saved[i] && combo.contains(&i);
            }
            rec(net, tasks, idx + 1, keep, best, counter)?;
        }
        for (i, &a) in arcs.iter().enumerate() {
            keep[a] = saved[i];
        }
        Ok(())
    }

    let mut keep = vec![true; net.arc_count()];
    let mut best = 0u64;
    let mut counter = budget.counter();
    rec(net, &tasks, 0, &mut keep, &mut best, &mut counter)?;
    Ok(best)
}

/// Maximum total value over at most `p` path-flows, by exhausting subsets
/// of distinct simple paths (duplicates never help: merging two copies of
/// a path frees a slot) together with their value assignments. For the
/// disjoint variants the paths are independent, so each takes its full
/// bottleneck; in the unrestricted variant all positive values up to the
/// residual bottleneck are tried.
pub fn oracle_p_split(
    net: &Network,
    p: usize,
    variant: SplitVariant,
    budget: &Budget,
) -> Result<u64> {
    budget.check_network(net)?;
    if p == 0 {
        return Err(Error::Precondition("path budget must be at least 1".into()));
    }
    let mut counter = budget.counter();
    let paths = all_simple_paths(net.digraph(), net.source(), net.sink(), &mut counter)?;
    if paths.is_empty() {
        return Ok(0);
    }
    let bottleneck: Vec<u64> = paths
        .iter()
        .map(|(_, arcs)| arcs.iter().map(|&a| net.cap(a)).min().unwrap())
        .collect();
    let mut suffix_max = vec![0u64; paths.len() + 1];
    for i in (0..paths.len()).rev() {
        suffix_max[i] = suffix_max[i + 1].max(bottleneck[i]);
    }
    let target = maxflow::max_flow(net).value();

    struct Search<'a> {
        paths: &'a [(Vec<VertexId>, Vec<ArcId>)],
        bottleneck: &'a [u64],
        suffix_max: &'a [u64],
        variant: SplitVariant,
        target: u64,
        rem: Vec<u64>,
        used_arc: Vec<bool>,
        used_vertex: Vec<bool>,
        best: u64,
    }

    impl Search<'_> {
        fn dfs(
            &mut self,
            idx: usize,
            slots_left: usize,
            current: u64,
            counter: &mut StateCounter,
        ) -> Result<()> {
            counter.tick()?;
            self.best = self.best.max(current);
            if self.best == self.target || idx == self.paths.len() || slots_left == 0 {
                return Ok(());
            }
            if current + slots_left as u64 * self.suffix_max[idx] <= self.best {
                return Ok(());
            }
            self.dfs(idx + 1, slots_left, current, counter)?;

            let (vertices, arcs) = &self.paths[idx];
            match self.variant {
                SplitVariant::Unrestricted => {
                    let b = arcs.iter().map(|&a| self.rem[a]).min().unwrap();
                    for v in (1..=b).rev() {
                        for &a in arcs {
                            self.rem[a] -= v;
                        }
                        self.dfs(idx + 1, slots_left - 1, current + v, counter)?;
                        for &a in arcs {
                            self.rem[a] += v;
                        }
                    }
                }
                SplitVariant::ArcDisjoint => {
                    if arcs.iter().all(|&a| !self.used_arc[a]) {
                        for &a in arcs {
                            self.used_arc[a] = true;
                        }
                        let v = self.bottleneck[idx];
                        self.dfs(idx + 1, slots_left - 1, current + v, counter)?;
                        for &a in arcs {
                            self.used_arc[a] = false;
                        }
                    }
                }
                SplitVariant::VertexDisjoint => {
                    let internals = &vertices[1..vertices.len() - 1];
                    let arc_free = arcs.iter().all(|&a| !self.used_arc[a]);
                    if arc_free && internals.iter().all(|&w| !self.used_vertex[w]) {
                        for &w in internals {
                            self.used_vertex[w] = true;
                        }
                        for &a in arcs {
                            self.used_arc[a] = true;
                        }
                        let v = self.bottleneck[idx];
                        self.dfs(idx + 1, slots_left - 1, current + v, counter)?;
                        for &a in arcs {
                            self.used_arc[a] = false;
                        }
                        for &w in internals {
                            self.used_vertex[w] = false;
                        }
                    }
                }
            }
            Ok(())
        }
    }

    let mut search = Search {
        paths: &paths,
        bottleneck: &bottleneck,
        suffix_max: &suffix_max,
        variant,
        target,
        rem: net.capacities().to_vec(),
        used_arc: vec![false; net.arc_count()],
        used_vertex: vec![false; net.vertex_count()],
        best: 0,
    };
    search.dfs(0, p, 0, &mut counter)?;
    Ok(search.best)
}

/// Which multiplicity the separability constraint counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeparableMode {
    /// Every internal vertex lies on at most q of the chosen paths.
    Vertex,
    /// Every arc lies on at most q of the chosen paths.
    Arc,
}

/// Maximum total value over any number of path-flows such that no
/// internal vertex (or arc) is used by more than `q` distinct paths.
/// Exhausts subsets of distinct simple paths with value assignments;
/// merging duplicate paths only lowers multiplicities, so distinct
/// subsets suffice.
pub fn oracle_q_separable(
    net: &Network,
    q: usize,
    mode: SeparableMode,
    budget: &Budget,
) -> Result<u64> {
    budget.check_network(net)?;
    if q == 0 {
        return Err(Error::Precondition("separability bound must be at least 1".into()));
    }
    let mut counter = budget.counter();
    let paths = all_simple_paths(net.digraph(), net.source(), net.sink(), &mut counter)?;
    if paths.is_empty() {
        return Ok(0);
    }
    let bottleneck: Vec<u64> = paths
        .iter()
        .map(|(_, arcs)| arcs.iter().map(|&a| net.cap(a)).min().unwrap())
        .collect();
    let mut suffix_sum = vec![0u64; paths.len() + 1];
    for i in (0..paths.len()).rev() {
        suffix_sum[i] = suffix_sum[i + 1] + bottleneck[i];
    }
    let target = maxflow::max_flow(net).value();

    struct Search<'a> {
        paths: &'a [(Vec<VertexId>, Vec<ArcId>)],
        suffix_sum: &'a [u64],
        q: usize,
        mode: SeparableMode,
        target: u64,
        rem: Vec<u64>,
        vertex_mult: Vec<usize>,
        arc_mult: Vec<usize>,
        best: u64,
    }

    impl Search<'_> {
        fn dfs(&mut self, idx: usize, current: u64, counter: &mut StateCounter) -> Result<()> {
            counter.tick()?;
            self.best = self.best.max(current);
            if self.best == self.target || idx == self.paths.len() {
                return Ok(());
            }
            if current + self.suffix_sum[idx] <= self.best {
                return Ok(());
            }
            self.dfs(idx + 1, current, counter)?;

            let (vertices, arcs) = &self.paths[idx];
            let internals = &vertices[1..vertices.len() - 1];
            let admissible = match self.mode {
                SeparableMode::Vertex => internals.iter().all(|&w| self.vertex_mult[w] < self.q),
                SeparableMode::Arc => arcs.iter().all(|&a| self.arc_mult[a] < self.q),
            };
            if !admissible {
                return Ok(());
            }
            let b = arcs.iter().map(|&a| self.rem[a]).min().unwrap();
            if b == 0 {
                return Ok(());
            }
            for &w in internals {
                self.vertex_mult[w] += 1;
            }
            for &a in arcs {
                self.arc_mult[a] += 1;
            }
            for v in (1..=b).rev() {
                for &a in arcs {
                    self.rem[a] -= v;
                }
                self.dfs(idx + 1, current + v, counter)?;
                for &a in arcs {
                    self.rem[a] += v;
                }
            }
            for &a in arcs {
                self.arc_mult[a] -= 1;
            }
            for &w in internals {
                self.vertex_mult[w] -= 1;
            }
            Ok(())
        }
    }

    let mut search = Search {
        paths: &paths,
        suffix_sum: &suffix_sum,
        q,
        mode,
        target,
        rem: net.capacities().to_vec(),
        vertex_mult: vec![0; net.vertex_count()],
        arc_mult: vec![0; net.arc_count()],
        best: 0,
    };
    search.dfs(0, 0, &mut counter)?;
    Ok(search.best)
}

/// Every maximum flow, each exactly once, ordered lexicographically by
/// arc value vector. Arc values are assigned one arc at a time; a partial
/// assignment survives only while every touched vertex can still balance
/// (and the source can still reach exactly the maximum value) using the
/// capacity remaining on its unassigned arcs.
pub fn enumerate_max_flows(net: &Network, budget: &Budget) -> Result<Vec<Flow>> {
    budget.check_network(net)?;
    let target = maxflow::max_flow(net).value();
    let d = net.digraph();
    let m = net.arc_count();

    let mut rem_out = vec![0i128; net.vertex_count()];
    let mut rem_in = vec![0i128; net.vertex_count()];
    for a in 0..m {
        rem_out[d.tail(a)] += net.cap(a) as i128;
        rem_in[d.head(a)] += net.cap(a) as i128;
    }

    struct Search<'a> {
        net: &'a Network,
        target: i128,
        x: Vec<u64>,
        net_out: Vec<i128>,
        rem_out: Vec<i128>,
        rem_in: Vec<i128>,
        found: Vec<Flow>,
    }

    impl Search<'_> {
        // After all arcs at `w` are assigned this forces exact balance:
        // required future (out - in) must fit in the remaining capacity.
        fn feasible(&self, w: VertexId) -> bool {
            let want = if w == self.net.source() {
                self.target
            } else if w == self.net.sink() {
                -self.target
            } else {
                0
            };
            let need = want - self.net_out[w];
            -self.rem_in[w] <= need && need <= self.rem_out[w]
        }

        fn rec(&mut self, a: ArcId, counter: &mut StateCounter) -> Result<()> {
            counter.tick()?;
            if a == self.net.arc_count() {
                let flow = Flow::from_arc_values(self.net, self.x.clone())?;
                debug_assert_eq!(flow.value() as i128, self.target);
                self.found.push(flow);
                return Ok(());
            }
            let (u, v) = (self.net.digraph().tail(a), self.net.digraph().head(a));
            let c = self.net.cap(a) as i128;
            self.rem_out[u] -= c;
            self.rem_in[v] -= c;
            for val in 0..=c {
                self.x[a] = val as u64;
                self.net_out[u] += val;
                self.net_out[v] -= val;
                if self.feasible(u) && self.feasible(v) {
                    self.rec(a + 1, counter)?;
                }
                self.net_out[u] -= val;
                self.net_out[v] += val;
            }
            self.x[a] = 0;
            self.rem_out[u] += c;
            self.rem_in[v] += c;
            Ok(())
        }
    }

    let mut search = Search {
        net,
        target: target as i128,
        x: vec![0; m],
        net_out: vec![0; net.vertex_count()],
        rem_out,
        rem_in,
        found: Vec::new(),
    };
    let mut counter = budget.counter();
    search.rec(0, &mut counter)?;
    Ok(search.found)
}

/// Satisfiability by truth-table scan. Guarded to at most 20 variables.
pub fn sat_bruteforce(formula: &CnfFormula, budget: &Budget) -> Result<bool> {
    let n = formula.variables();
    if n > 20 {
        return Err(Error::Budget(format!("{n} variables exceeds the 20-variable scan limit")));
    }
    let mut counter = budget.counter();
    for mask in 0u64..(1u64 << n) {
        counter.tick()?;
        if formula.clauses().iter().all(|clause| {
            clause.iter().any(|&lit| {
                let var = lit.unsigned_abs() as usize - 1;
                let bit = mask >> var & 1 == 1;
                (lit > 0) == bit
            })
        }) {
            return Ok(true);
        }
    }
    Ok(false)
}

//! Deterministic generators for structured hard instances and
//! counterexample families. Each generator emits a [`GadgetOutput`]:
//! the network itself, figure-style vertex labels, a human-readable
//! statement of the encoded property, and numeric metadata (target
//! values, bounds, offsets) that tests check mechanically.
//!
//! Where a construction encodes a satisfiability instance, a companion
//! `*_witness_flow` function turns a satisfying assignment into the
//! explicit flow certifying the positive direction; the returned flow is
//! validated for conservation, so a bug in either the generator or the
//! witness surfaces as an error rather than a silently wrong instance.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::netcore::{ArcId, Digraph, Flow, Network, VertexId};
use crate::psplit::PathFlow;

/// 3-CNF formula over 1-based variables with signed literals: `3` is the
/// third variable, `-3` its negation. Clauses may repeat a variable;
/// occurrences are always counted with multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    variables: usize,
    clauses: Vec<[i32; 3]>,
}

impl CnfFormula {
    pub fn new(variables: usize, clauses: Vec<[i32; 3]>) -> Result<Self> {
        for (j, clause) in clauses.iter().enumerate() {
            for &lit in clause {
                if lit == 0 || lit.unsigned_abs() as usize > variables {
                    return Err(Error::Precondition(format!(
                        "literal {lit} in clause {} is outside the {variables}-variable range",
                        j + 1
                    )));
                }
            }
        }
        Ok(CnfFormula { variables, clauses })
    }

    pub fn variables(&self) -> usize {
        self.variables
    }

    pub fn clauses(&self) -> &[[i32; 3]] {
        &self.clauses
    }

    /// True iff the assignment (indexed by variable, `assignment[0]` being
    /// variable 1) satisfies every clause.
    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        assert_eq!(assignment.len(), self.variables, "assignment length");
        self.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let value = assignment[lit.unsigned_abs() as usize - 1];
                (lit > 0) == value
            })
        })
    }

    /// Occurrence counts per variable, `(positive, negative)`, with
    /// multiplicity.
    pub fn occurrence_counts(&self) -> Vec<(usize, usize)> {
        let mut counts = vec![(0usize, 0usize); self.variables];
        for clause in &self.clauses {
            for &lit in clause {
                let i = lit.unsigned_abs() as usize - 1;
                if lit > 0 {
                    counts[i].0 += 1;
                } else {
                    counts[i].1 += 1;
                }
            }
        }
        counts
    }

    /// True iff every variable occurs exactly twice positively and twice
    /// negatively, counting multiplicity.
    pub fn is_b2(&self) -> bool {
        self.occurrence_counts().iter().all(|&(p, q)| p == 2 && q == 2)
    }

    /// Parses DIMACS CNF. Only 3-literal clauses are accepted.
    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let mut variables = None;
        let mut clauses = Vec::new();
        let mut current: Vec<i32> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('c') {
                continue;
            }
            if trimmed.starts_with('p') {
                let fields: Vec<&str> = trimmed.split_whitespace().collect();
                if fields.len() != 4 || fields[1] != "cnf" {
                    return Err(Error::Parse { line, msg: "expected 'p cnf <vars> <clauses>'".into() });
                }
                let vars = fields[2]
                    .parse::<usize>()
                    .map_err(|_| Error::Parse { line, msg: format!("bad variable count {}", fields[2]) })?;
                variables = Some(vars);
                continue;
            }
            if variables.is_none() {
                return Err(Error::Parse { line, msg: "clause before the 'p cnf' header".into() });
            }
            for token in trimmed.split_whitespace() {
                let lit = token
                    .parse::<i32>()
                    .map_err(|_| Error::Parse { line, msg: format!("bad literal {token}") })?;
                if lit == 0 {
                    if current.len() != 3 {
                        return Err(Error::Parse {
                            line,
                            msg: format!("clause has {} literals, exactly 3 are required", current.len()),
                        });
                    }
                    clauses.push([current[0], current[1], current[2]]);
                    current.clear();
                } else {
                    current.push(lit);
                }
            }
        }
        if !current.is_empty() {
            return Err(Error::Parse {
                line: text.lines().count(),
                msg: "unterminated clause at end of input".into(),
            });
        }
        let variables = variables.ok_or(Error::Parse { line: 1, msg: "missing 'p cnf' header".into() })?;
        CnfFormula::new(variables, clauses)
    }
}

/// A generated network plus everything needed to check it: the encoded
/// property in words, vertex labels matching the construction's naming,
/// and numeric metadata such as target values or bounds.
#[derive(Debug, Clone)]
pub struct GadgetOutput {
    pub network: Network,
    pub target: String,
    pub labels: BTreeMap<String, VertexId>,
    pub metrics: BTreeMap<String, u64>,
}

impl GadgetOutput {
    /// Labels, metrics and the target statement as a JSON object, for
    /// emitting alongside the network file.
    pub fn metadata_json(&self) -> String {
        serde_json::json!({
            "target": self.target,
            "labels": self.labels,
            "metrics": self.metrics,
        })
        .to_string()
    }

    fn vertex(&self, label: &str) -> Result<VertexId> {
        self.labels
            .get(label)
            .copied()
            .ok_or_else(|| Error::Precondition(format!("the gadget output has no vertex labeled {label}")))
    }

    /// Arc id by endpoints. All generators here avoid parallel arcs, so
    /// the lookup is unambiguous.
    fn arc_between(&self, u: VertexId, v: VertexId) -> Result<ArcId> {
        let d = self.network.digraph();
        d.out_arcs(u)
            .iter()
            .copied()
            .find(|&a| d.head(a) == v)
            .ok_or_else(|| Error::Precondition(format!("the gadget output has no arc from {u} to {v}")))
    }
}

struct NetBuilder {
    labels: BTreeMap<String, VertexId>,
    arcs: Vec<(VertexId, VertexId, u64)>,
    vertex_count: usize,
}

impl NetBuilder {
    fn new() -> Self {
        NetBuilder { labels: BTreeMap::new(), arcs: Vec::new(), vertex_count: 0 }
    }

    fn vertex(&mut self, label: String) -> VertexId {
        let v = self.vertex_count;
        self.vertex_count += 1;
        self.labels.insert(label, v);
        v
    }

    fn unlabeled(&mut self) -> VertexId {
        let v = self.vertex_count;
        self.vertex_count += 1;
        v
    }

    fn alias(&mut self, label: String, v: VertexId) {
        self.labels.insert(label, v);
    }

    fn arc(&mut self, u: VertexId, v: VertexId, cap: u64) {
        self.arcs.push((u, v, cap));
    }

    fn finish(
        self,
        source: VertexId,
        sink: VertexId,
        target: String,
        metrics: &[(&str, u64)],
    ) -> Result<GadgetOutput> {
        let network = Network::from_arcs(self.vertex_count, source, sink, &self.arcs)?;
        Ok(GadgetOutput {
            network,
            target,
            labels: self.labels,
            metrics: metrics.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        })
    }
}

/// Accumulates arc values against a gadget's labeled network, then
/// validates them as a flow.
struct FlowSketch<'a> {
    out: &'a GadgetOutput,
    values: Vec<u64>,
}

impl<'a> FlowSketch<'a> {
    fn new(out: &'a GadgetOutput) -> Self {
        FlowSketch { out, values: vec![0; out.network.arc_count()] }
    }

    fn add(&mut self, u: VertexId, v: VertexId, amount: u64) -> Result<()> {
        let a = self.out.arc_between(u, v)?;
        self.values[a] += amount;
        Ok(())
    }

    fn add_labeled(&mut self, u: &str, v: &str, amount: u64) -> Result<()> {
        let u = self.out.vertex(u)?;
        let v = self.out.vertex(v)?;
        self.add(u, v, amount)
    }

    fn into_flow(self) -> Result<Flow> {
        Flow::from_arc_values(&self.out.network, self.values)
    }
}

/// For each clause slot, `(variable, positive, rank)` where `rank` is the
/// 1-based position of that occurrence among the variable's occurrences
/// of the same polarity, scanning clauses in input order and literals
/// left to right.
fn occurrence_ranks(f: &CnfFormula) -> Vec<[(usize, bool, usize); 3]> {
    let mut pos_seen = vec![0usize; f.variables()];
    let mut neg_seen = vec![0usize; f.variables()];
    f.clauses()
        .iter()
        .map(|clause| {
            clause.map(|lit| {
                let var = lit.unsigned_abs() as usize;
                if lit > 0 {
                    pos_seen[var - 1] += 1;
                    (var, true, pos_seen[var - 1])
                } else {
                    neg_seen[var - 1] += 1;
                    (var, false, neg_seen[var - 1])
                }
            })
        })
        .collect()
}

/// Appends a tautological clause `(x or not-x or x)` for every variable
/// missing a polarity (or missing entirely), so that each variable
/// occurs at least once positively and once negatively. Satisfiability
/// is unchanged.
fn pad_both_polarities(f: &CnfFormula) -> CnfFormula {
    let mut clauses = f.clauses().to_vec();
    for (i, &(p, q)) in f.occurrence_counts().iter().enumerate() {
        if p == 0 || q == 0 {
            let v = (i + 1) as i32;
            clauses.push([v, -v, v]);
        }
    }
    CnfFormula { variables: f.variables(), clauses }
}

/// The per-variable occurrence chain shared by the degree-bound and the
/// disjoint-decomposition reductions: for each variable, two parallel
/// paths from junction u_i to junction v_i, one vertex per positive
/// (respectively negative) occurrence, with v_i identified with u_{i+1}.
struct ChainLayout {
    /// junction\[0\] is u_1; junction\[i\] is v_i for 1-based variable i.
    junction: Vec<VertexId>,
    /// Per clause, the chain vertex identified with each literal slot.
    slot: Vec<[VertexId; 3]>,
}

fn build_occurrence_chain(b: &mut NetBuilder, f: &CnfFormula, chain_cap: u64) -> ChainLayout {
    let n = f.variables();
    let ranks = occurrence_ranks(f);
    let counts = f.occurrence_counts();
    let mut junction = Vec::with_capacity(n + 1);
    let mut pos: Vec<Vec<VertexId>> = Vec::with_capacity(n);
    let mut neg: Vec<Vec<VertexId>> = Vec::with_capacity(n);
    junction.push(b.vertex("u1".into()));
    for i in 1..=n {
        let (p, q) = counts[i - 1];
        debug_assert!(p >= 1 && q >= 1, "chain needs both polarities");
        let ys: Vec<VertexId> = (1..=p).map(|r| b.vertex(format!("y{i}_{r}"))).collect();
        let zs: Vec<VertexId> = (1..=q).map(|r| b.vertex(format!("z{i}_{r}"))).collect();
        let v = b.vertex(format!("v{i}"));
        if i < n {
            b.alias(format!("u{}", i + 1), v);
        }
        let u = junction[i - 1];
        for side in [&ys, &zs] {
            b.arc(u, side[0], chain_cap);
            for w in side.windows(2) {
                b.arc(w[0], w[1], chain_cap);
            }
            b.arc(*side.last().unwrap(), v, chain_cap);
        }
        junction.push(v);
        pos.push(ys);
        neg.push(zs);
    }
    let slot = ranks
        .iter()
        .map(|clause| clause.map(|(var, positive, rank)| {
            if positive {
                pos[var - 1][rank - 1]
            } else {
                neg[var - 1][rank - 1]
            }
        }))
        .collect();
    ChainLayout { junction, slot }
}

fn check_assignment(f: &CnfFormula, assignment: &[bool]) -> Result<()> {
    if assignment.len() != f.variables() {
        return Err(Error::Precondition(format!(
            "{} assignment values for {} variables",
            assignment.len(),
            f.variables()
        )));
    }
    if !f.evaluate(assignment) {
        return Err(Error::Precondition("the assignment does not satisfy the formula".into()));
    }
    Ok(())
}

/// For each clause the first literal slot satisfied by the assignment.
fn chosen_slots(f: &CnfFormula, assignment: &[bool]) -> Vec<usize> {
    f.clauses()
        .iter()
        .map(|clause| {
            clause
                .iter()
                .position(|&lit| (lit > 0) == assignment[lit.unsigned_abs() as usize - 1])
                .expect("a satisfied clause has a satisfied literal")
        })
        .collect()
}

/// Degree-bounded-flow hardness network for a 3-CNF formula: an acyclic
/// network (padded so every variable occurs in both polarities) whose
/// maximum flow with support out-degree at most `k` reaches the target
/// value `m + (k-1)(2m+1)` exactly when the formula is satisfiable,
/// `m` being the padded clause count.
///
/// Vertices: source `s`, sink `t`, junctions `u1` and `v1..vn` (with
/// `v_i` doubling as `u_{i+1}`), one chain vertex per occurrence
/// (`y{i}_{r}` positive, `z{i}_{r}` negative), one vertex `y{j}` per
/// clause, and for `k >= 3` spine interiors `r{i}_{l}`. Capacities:
/// `s->u1` is the target, each spine path `2m+1`, every arc touching a
/// clause vertex `1`, chain arcs `m`, `vn->t` is `(k-1)(2m+1)`.
pub fn gen_sat_deg_network(f: &CnfFormula, k: usize) -> Result<GadgetOutput> {
    if k < 2 {
        return Err(Error::Precondition("the out-degree bound must be at least 2".into()));
    }
    if f.variables() == 0 {
        return Err(Error::Precondition("at least one variable is required".into()));
    }
    let padded = pad_both_polarities(f);
    let n = padded.variables();
    let m = padded.clauses().len() as u64;
    let spine = 2 * m + 1;
    let target_value = m + (k as u64 - 1) * spine;

    let mut b = NetBuilder::new();
    let s = b.vertex("s".into());
    let t = b.vertex("t".into());
    let chain = build_occurrence_chain(&mut b, &padded, m);
    b.arc(s, chain.junction[0], target_value);
    for i in 1..=n {
        let (u, v) = (chain.junction[i - 1], chain.junction[i]);
        if k == 2 {
            b.arc(u, v, spine);
        } else {
            for l in 1..=k - 1 {
                let r = b.vertex(format!("r{i}_{l}"));
                b.arc(u, r, spine);
                b.arc(r, v, spine);
            }
        }
    }
    for (j, slots) in chain.slot.iter().enumerate() {
        let clause_v = b.vertex(format!("y{}", j + 1));
        for &a in slots {
            b.arc(a, clause_v, 1);
        }
        b.arc(clause_v, t, 1);
    }
    b.arc(chain.junction[n], t, (k as u64 - 1) * spine);

    b.finish(
        s,
        t,
        format!(
            "a flow of value {target_value} whose support has out-degree at most {k} \
             at every vertex exists iff the source formula is satisfiable"
        ),
        &[
            ("variables", n as u64),
            ("clauses", m),
            ("degree_bound", k as u64),
            ("target_value", target_value),
        ],
    )
}

/// The explicit flow certifying the positive direction of
/// [`gen_sat_deg_network`] for a satisfying assignment: the full spine
/// plus one unit routed to each clause vertex along the chain path that
/// follows the assignment's true side of every variable.
pub fn sat_deg_witness_flow(
    out: &GadgetOutput,
    f: &CnfFormula,
    k: usize,
    assignment: &[bool],
) -> Result<Flow> {
    check_assignment(f, assignment)?;
    let padded = pad_both_polarities(f);
    let n = padded.variables();
    let m = padded.clauses().len() as u64;
    let spine = 2 * m + 1;
    let ranks = occurrence_ranks(&padded);
    let counts = padded.occurrence_counts();

    let mut sketch = FlowSketch::new(out);
    sketch.add_labeled("s", "u1", m + (k as u64 - 1) * spine)?;
    for i in 1..=n {
        if k == 2 {
            sketch.add_labeled(&format!("u{i}"), &format!("v{i}"), spine)?;
        } else {
            for l in 1..=k - 1 {
                sketch.add_labeled(&format!("u{i}"), &format!("r{i}_{l}"), spine)?;
                sketch.add_labeled(&format!("r{i}_{l}"), &format!("v{i}"), spine)?;
            }
        }
    }
    sketch.add_labeled(&format!("v{n}"), "t", (k as u64 - 1) * spine)?;

    // Clause vertex fed by each chain vertex chosen for a drop.
    let mut drop_at: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    for (j, &slot) in chosen_slots(&padded, assignment).iter().enumerate() {
        let (var, positive, rank) = ranks[j][slot];
        let side = if positive { 'y' } else { 'z' };
        let chain_v = out.vertex(&format!("{side}{var}_{rank}"))?;
        let clause_v = out.vertex(&format!("y{}", j + 1))?;
        drop_at.insert(chain_v, clause_v);
    }

    // The branch path walks the true side of every variable, handing one
    // unit to each clause vertex it passes a chosen occurrence of.
    let mut path = vec![out.vertex("u1")?];
    for i in 1..=n {
        let (p, q) = counts[i - 1];
        let (side, len) = if assignment[i - 1] { ('y', p) } else { ('z', q) };
        for r in 1..=len {
            path.push(out.vertex(&format!("{side}{i}_{r}"))?);
        }
        path.push(out.vertex(&format!("v{i}"))?);
    }
    let t = out.vertex("t")?;
    let mut load = m;
    for w in 1..path.len() {
        sketch.add(path[w - 1], path[w], load)?;
        if let Some(&clause_v) = drop_at.get(&path[w]) {
            sketch.add(path[w], clause_v, 1)?;
            sketch.add(clause_v, t, 1)?;
            load -= 1;
        }
    }
    debug_assert_eq!(load, 0, "every clause received its unit");
    sketch.into_flow()
}

const B2_W_CAP4: [(&str, &str); 9] = [
    ("u", "y_1"),
    ("u", "z_1"),
    ("u", "v"),
    ("y_1", "y_2"),
    ("y_4", "y_5"),
    ("z_1", "z_2"),
    ("z_4", "z_5"),
    ("y_7", "v"),
    ("z_7", "v"),
];

const B2_W_CAP2: [(&str, &str); 12] = [
    ("y_2", "y_3"),
    ("y_3", "y_4"),
    ("y_5", "y_6"),
    ("y_6", "y_7"),
    ("y_2", "y_4"),
    ("y_5", "y_7"),
    ("z_2", "z_3"),
    ("z_3", "z_4"),
    ("z_5", "z_6"),
    ("z_6", "z_7"),
    ("z_2", "z_4"),
    ("z_5", "z_7"),
];

/// Value-9 degree-2 hardness network for a formula in which every
/// variable occurs exactly twice positively and twice negatively: the
/// network admits a flow of value 9 whose support has out-degree at most
/// 2 everywhere iff the formula is satisfiable. Not acyclic in general.
///
/// Per variable `i` a 16-vertex block (`u{i}`, `v{i}`, `y{i}_1..7`,
/// `z{i}_1..7`) with a capacity-4 skeleton and capacity-2 inner lanes;
/// blocks chained by capacity-8 arcs. Per clause `j` vertices `q{j}`,
/// `r{j}` strung on a unit-capacity chain; each occurrence hooks its
/// clause into the matching block side, first occurrence at `_4/_5`,
/// second at `_1/_2`.
pub fn gen_b2sat_value9_network(f: &CnfFormula) -> Result<GadgetOutput> {
    if !f.is_b2() {
        return Err(Error::Precondition(
            "every variable must occur exactly twice positively and twice negatively".into(),
        ));
    }
    let n = f.variables();
    let m = f.clauses().len();
    if n == 0 || m == 0 {
        return Err(Error::Precondition("at least one variable and one clause are required".into()));
    }

    let mut b = NetBuilder::new();
    let s = b.vertex("s".into());
    let t = b.vertex("t".into());
    for i in 1..=n {
        b.vertex(format!("u{i}"));
        b.vertex(format!("v{i}"));
        for r in 1..=7 {
            b.vertex(format!("y{i}_{r}"));
        }
        for r in 1..=7 {
            b.vertex(format!("z{i}_{r}"));
        }
    }
    for j in 1..=m {
        b.vertex(format!("q{j}"));
        b.vertex(format!("r{j}"));
    }
    let vid = |b: &NetBuilder, label: &str| b.labels[label];

    for i in 1..=n {
        let local = |name: &str| format!("{}{i}{}", &name[..1], &name[1..]);
        for (u, v) in B2_W_CAP4 {
            let (u, v) = (vid(&b, &local(u)), vid(&b, &local(v)));
            b.arc(u, v, 4);
        }
        for (u, v) in B2_W_CAP2 {
            let (u, v) = (vid(&b, &local(u)), vid(&b, &local(v)));
            b.arc(u, v, 2);
        }
    }
    for i in 1..n {
        b.arc(vid(&b, &format!("v{i}")), vid(&b, &format!("u{}", i + 1)), 8);
    }
    b.arc(s, vid(&b, "u1"), 8);
    b.arc(vid(&b, &format!("v{n}")), t, 8);
    for j in 1..m {
        b.arc(vid(&b, &format!("r{j}")), vid(&b, &format!("q{}", j + 1)), 1);
    }
    b.arc(s, vid(&b, "q1"), 1);
    b.arc(vid(&b, &format!("r{m}")), t, 1);

    for (j, slots) in occurrence_ranks(f).iter().enumerate() {
        let (qj, rj) = (vid(&b, &format!("q{}", j + 1)), vid(&b, &format!("r{}", j + 1)));
        for &(var, positive, rank) in slots {
            let side = if positive { 'y' } else { 'z' };
            // First occurrence enters at _4 and leaves at _5, the second
            // enters at _1 and leaves at _2.
            let (enter, leave) = if rank == 1 { (4, 5) } else { (1, 2) };
            let enter_v = vid(&b, &format!("{side}{var}_{enter}"));
            let leave_v = vid(&b, &format!("{side}{var}_{leave}"));
            b.arc(qj, enter_v, 1);
            b.arc(leave_v, rj, 1);
        }
    }

    b.finish(
        s,
        t,
        "a flow of value 9 whose support has out-degree at most 2 at every vertex \
         exists iff the source formula is satisfiable"
            .into(),
        &[
            ("variables", n as u64),
            ("clauses", m as u64),
            ("degree_bound", 2),
            ("target_value", 9),
        ],
    )
}

/// The explicit value-9 flow certifying the positive direction of
/// [`gen_b2sat_value9_network`] for a satisfying assignment: 8 units
/// through the block spine (each block routing its 4 off-spine units
/// through the side matching the assignment) plus 1 unit threaded
/// through the clause chain, detouring into a satisfying occurrence's
/// free side at every clause.
pub fn b2sat_witness_flow(out: &GadgetOutput, f: &CnfFormula, assignment: &[bool]) -> Result<Flow> {
    check_assignment(f, assignment)?;
    let n = f.variables();
    let m = f.clauses().len();
    let ranks = occurrence_ranks(f);

    let mut sk = FlowSketch::new(out);
    sk.add_labeled("s", "u1", 8)?;
    sk.add_labeled(&format!("v{n}"), "t", 8)?;
    sk.add_labeled("s", "q1", 1)?;
    sk.add_labeled(&format!("r{m}"), "t", 1)?;
    for i in 1..=n {
        sk.add_labeled(&format!("u{i}"), &format!("v{i}"), 4)?;
        if i < n {
            sk.add_labeled(&format!("v{i}"), &format!("u{}", i + 1), 8)?;
        }
        // The loaded side is z when the variable is true, y otherwise;
        // clause detours below use only the opposite, empty side.
        let side = if assignment[i - 1] { 'z' } else { 'y' };
        let at = |r: usize| format!("{side}{i}_{r}");
        sk.add_labeled(&format!("u{i}"), &at(1), 4)?;
        sk.add_labeled(&at(1), &at(2), 4)?;
        sk.add_labeled(&at(4), &at(5), 4)?;
        sk.add_labeled(&at(7), &format!("v{i}"), 4)?;
        for (a, c) in [(2, 3), (3, 4), (2, 4), (5, 6), (6, 7), (5, 7)] {
            sk.add_labeled(&at(a), &at(c), 2)?;
        }
    }
    for j in 1..m {
        sk.add_labeled(&format!("r{j}"), &format!("q{}", j + 1), 1)?;
    }
    for (j, &slot) in chosen_slots(f, assignment).iter().enumerate() {
        let (var, positive, rank) = ranks[j][slot];
        let side = if positive { 'y' } else { 'z' };
        let (enter, leave) = if rank == 1 { (4, 5) } else { (1, 2) };
        sk.add_labeled(&format!("q{}", j + 1), &format!("{side}{var}_{enter}"), 1)?;
        sk.add_labeled(&format!("{side}{var}_{enter}"), &format!("{side}{var}_{leave}"), 1)?;
        sk.add_labeled(&format!("{side}{var}_{leave}"), &format!("r{}", j + 1), 1)?;
    }
    sk.into_flow()
}

/// Family showing that high arc connectivity of the network does not
/// survive into max-flow supports: for any `lambda >= 3`, a network with
/// `lambda` arc-disjoint source-sink paths whose unique maximum flow
/// (value `2*lambda - 2`) has a support admitting only 2 arc-disjoint
/// source-sink paths.
///
/// `lambda - 2` three-arc paths `s->u{i}->v{i}->t`, two-arc paths
/// `s->y->t` and `s->z->t`, and cross arcs `u{i}->y`, `z->v{i}`; all
/// capacities 1 except `s->z` and `y->t` with `lambda - 1`.
pub fn gen_lambda_counterexample(lambda: usize) -> Result<GadgetOutput> {
    if lambda < 3 {
        return Err(Error::Precondition("a connectivity target of at least 3 is required".into()));
    }
    let wide = (lambda - 1) as u64;
    let mut b = NetBuilder::new();
    let s = b.vertex("s".into());
    let t = b.vertex("t".into());
    let y = b.vertex("y".into());
    let z = b.vertex("z".into());
    for i in 1..=lambda - 2 {
        let u = b.vertex(format!("u{i}"));
        let v = b.vertex(format!("v{i}"));
        b.arc(s, u, 1);
        b.arc(u, v, 1);
        b.arc(v, t, 1);
        b.arc(u, y, 1);
        b.arc(z, v, 1);
    }
    b.arc(s, y, 1);
    b.arc(y, t, wide);
    b.arc(s, z, wide);
    b.arc(z, t, 1);
    b.finish(
        s,
        t,
        format!(
            "the network has {lambda} arc-disjoint source-sink paths, yet the support of \
             every maximum flow (value {}) admits at most 2",
            2 * lambda as u64 - 2
        ),
        &[
            ("lambda", lambda as u64),
            ("max_flow", 2 * lambda as u64 - 2),
            ("support_connectivity_bound", 2),
        ],
    )
}

/// A two-commodity arc-disjoint-paths instance: positive iff the digraph
/// has arc-disjoint paths from `s1` to `t1` and from `s2` to `t2`.
#[derive(Debug, Clone)]
pub struct LinkageInstance {
    pub digraph: Digraph,
    pub s1: VertexId,
    pub t1: VertexId,
    pub s2: VertexId,
    pub t2: VertexId,
}

impl LinkageInstance {
    /// Trivially positive: two disjoint arcs s1->t1 and s2->t2.
    pub fn positive_toy() -> Self {
        let digraph = Digraph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        LinkageInstance { digraph, s1: 0, t1: 1, s2: 2, t2: 3 }
    }

    /// Negative: both pairs must cross the single arc a->b, so no two
    /// arc-disjoint linking paths exist.
    pub fn negative_toy() -> Self {
        let digraph = Digraph::new(6, vec![(0, 2), (1, 2), (2, 3), (3, 4), (3, 5)]).unwrap();
        LinkageInstance { digraph, s1: 0, t1: 4, s2: 1, t2: 5 }
    }

    fn validate(&self) -> Result<()> {
        let n = self.digraph.vertex_count();
        for v in [self.s1, self.t1, self.s2, self.t2] {
            if v >= n {
                return Err(Error::Precondition(format!("terminal {v} outside the {n}-vertex digraph")));
            }
        }
        if !self.digraph.has_path(self.s2, self.t2) {
            return Err(Error::Precondition(
                "the instance must contain a path from the second source to the second sink".into(),
            ));
        }
        Ok(())
    }
}

/// The two copy-based families used to separate positive from negative
/// linkage instances, named by their copy-arc capacity. `Cap2` yields
/// gap pairs tending to ratio 5/6, `Cap3` to 4/5.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitHardFamily {
    Cap2,
    Cap3,
}

/// Inapproximability family for decomposition into at most `p`
/// path-flows: disjoint copies of the linkage digraph hang between a
/// fresh source and sink so that a positive linkage instance admits a
/// `p`-path flow of value `o_plus`, while a negative one caps every
/// `p`-path flow at `o_minus < o_plus` (an extra unit source-sink arc
/// absorbs odd `p`).
pub fn gen_psplit_hard(p: usize, link: &LinkageInstance, family: SplitHardFamily) -> Result<GadgetOutput> {
    if p < 2 {
        return Err(Error::Precondition("a path budget of at least 2 is required".into()));
    }
    link.validate()?;
    let (copies, base, low, o_plus, o_minus) = match family {
        SplitHardFamily::Cap2 => {
            let q = (p / 4) as u64;
            let (o_plus, o_minus) = match p % 4 {
                0 => (6 * q, 5 * q),
                1 => (6 * q + 1, 5 * q + 1),
                2 => (6 * q + 3, 5 * q + 2),
                _ => (6 * q + 4, 5 * q + 3),
            };
            (p / 2, 2u64, 1u64, o_plus, o_minus)
        }
        SplitHardFamily::Cap3 => {
            let q = (p / 2) as u64;
            let (o_plus, o_minus) = if p % 2 == 0 { (5 * q, 4 * q) } else { (5 * q + 1, 4 * q + 1) };
            (p / 2, 3u64, 2u64, o_plus, o_minus)
        }
    };

    let mut b = NetBuilder::new();
    let s = b.vertex("s".into());
    let t = b.vertex("t".into());
    let d = &link.digraph;
    for i in 1..=copies {
        let offset = b.vertex_count;
        for _ in 0..d.vertex_count() {
            b.unlabeled();
        }
        for (name, v) in [("s1", link.s1), ("t1", link.t1), ("s2", link.s2), ("t2", link.t2)] {
            b.alias(format!("{name}_{i}"), offset + v);
        }
        for a in 0..d.arc_count() {
            b.arc(offset + d.tail(a), offset + d.head(a), base);
        }
        b.arc(s, offset + link.s1, low);
        b.arc(s, offset + link.s2, base);
        b.arc(offset + link.t1, t, low);
        b.arc(offset + link.t2, t, base);
    }
    if p % 2 == 1 {
        b.arc(s, t, 1);
    }
    b.finish(
        s,
        t,
        format!(
            "the best flow decomposable into at most {p} path-flows has value at least \
             {o_plus} iff the linkage instance is positive, and at most {o_minus} otherwise"
        ),
        &[
            ("p", p as u64),
            ("copies", copies as u64),
            ("o_plus", o_plus),
            ("o_minus", o_minus),
        ],
    )
}

/// Hardness network for decomposing a maximum flow into vertex-disjoint
/// path-flows: acyclic, capacities 1 and 2 only, max flow value `2m+1`,
/// and that flow decomposes into `m+1` pairwise internally
/// vertex-disjoint path-flows iff the (padded) formula is satisfiable.
///
/// The occurrence chain of [`gen_sat_deg_network`] without spine arcs
/// (all chain arcs capacity 1), plus per clause `j` a fan-in pair
/// `y'{j}` and `y{j}`: arcs `s->y'{j}`, `y'{j}->a`, `a->y{j}`,
/// `y{j}->t` of capacity 2 through each of the clause's three
/// occurrence vertices `a`.
pub fn gen_vertex_disjoint_hard(f: &CnfFormula) -> Result<GadgetOutput> {
    if f.variables() == 0 {
        return Err(Error::Precondition("at least one variable is required".into()));
    }
    let padded = pad_both_polarities(f);
    let n = padded.variables();
    let m = padded.clauses().len() as u64;

    let mut b = NetBuilder::new();
    let s = b.vertex("s".into());
    let t = b.vertex("t".into());
    let chain = build_occurrence_chain(&mut b, &padded, 1);
    b.arc(s, chain.junction[0], 1);
    b.arc(chain.junction[n], t, 1);
    for (j, slots) in chain.slot.iter().enumerate() {
        let entry = b.vertex(format!("y'{}", j + 1));
        let exit = b.vertex(format!("y{}", j + 1));
        b.arc(s, entry, 2);
        for &a in slots {
            b.arc(entry, a, 2);
            b.arc(a, exit, 2);
        }
        b.arc(exit, t, 2);
    }
    b.finish(
        s,
        t,
        format!(
            "the maximum flow has value {} and decomposes into {} pairwise internally \
             vertex-disjoint path-flows iff the source formula is satisfiable",
            2 * m + 1,
            m + 1
        ),
        &[
            ("variables", n as u64),
            ("clauses", m),
            ("target_value", 2 * m + 1),
            ("paths", m + 1),
        ],
    )
}

/// The witness decomposition certifying the positive direction of
/// [`gen_vertex_disjoint_hard`]: per clause a value-2 path through a
/// satisfying occurrence, plus a value-1 chain path that walks the false
/// side of every variable and so avoids them all. Returns the combined
/// flow and the `m+1` pairwise internally vertex-disjoint path-flows.
pub fn vertex_disjoint_witness_flow(
    out: &GadgetOutput,
    f: &CnfFormula,
    assignment: &[bool],
) -> Result<(Flow, Vec<PathFlow>)> {
    check_assignment(f, assignment)?;
    let padded = pad_both_polarities(f);
    let n = padded.variables();
    let ranks = occurrence_ranks(&padded);
    let counts = padded.occurrence_counts();
    let (s, t) = (out.vertex("s")?, out.vertex("t")?);

    let mut paths: Vec<Vec<VertexId>> = Vec::new();
    for (j, &slot) in chosen_slots(&padded, assignment).iter().enumerate() {
        let (var, positive, rank) = ranks[j][slot];
        let side = if positive { 'y' } else { 'z' };
        paths.push(vec![
            s,
            out.vertex(&format!("y'{}", j + 1))?,
            out.vertex(&format!("{side}{var}_{rank}"))?,
            out.vertex(&format!("y{}", j + 1))?,
            t,
        ]);
    }
    // The chain path takes the side of falsified literals, which no
    // chosen occurrence lies on.
    let mut chain_path = vec![s, out.vertex("u1")?];
    for i in 1..=n {
        let (p, q) = counts[i - 1];
        let (side, len) = if assignment[i - 1] { ('z', q) } else { ('y', p) };
        for r in 1..=len {
            chain_path.push(out.vertex(&format!("{side}{i}_{r}"))?);
        }
        chain_path.push(out.vertex(&format!("v{i}"))?);
    }
    chain_path.push(t);
    paths.push(chain_path);

    let mut sketch = FlowSketch::new(out);
    let mut path_flows = Vec::with_capacity(paths.len());
    for (idx, vertices) in paths.into_iter().enumerate() {
        let value = if idx < out.metrics["clauses"] as usize { 2 } else { 1 };
        let mut arcs = Vec::with_capacity(vertices.len() - 1);
        for w in vertices.windows(2) {
            arcs.push(out.arc_between(w[0], w[1])?);
            sketch.add(w[0], w[1], value)?;
        }
        path_flows.push(PathFlow { vertices, arcs, value });
    }
    Ok((sketch.into_flow()?, path_flows))
}

/// Separability-hardness augmentation: given an acyclic network with
/// capacities in {1, 2}, adds per internal vertex `v` and `i < q` a
/// capacity-2 bypass `s->v^-i->v->v^+i->t`. The `q`-vertex-separable
/// optimum of the output equals the input's optimum over families of
/// pairwise internally vertex-disjoint path-flows plus the offset
/// `2 * n * (q-1)`, `n` being the number of internal vertices.
pub fn gen_separable_hard(net: &Network, q: usize) -> Result<GadgetOutput> {
    if q == 0 {
        return Err(Error::Precondition("a separability bound of at least 1 is required".into()));
    }
    if net.digraph().is_acyclic().is_none() {
        return Err(Error::Precondition("an acyclic network is required".into()));
    }
    if net.capacities().iter().any(|&c| c == 0 || c > 2) {
        return Err(Error::Precondition("capacities must be 1 or 2".into()));
    }
    let (s, t) = (net.source(), net.sink());
    let d = net.digraph();
    let internal: Vec<VertexId> = (0..d.vertex_count()).filter(|&v| v != s && v != t).collect();
    let n_internal = internal.len() as u64;

    let mut labels = BTreeMap::new();
    labels.insert("s".to_string(), s);
    labels.insert("t".to_string(), t);
    let mut arcs: Vec<(VertexId, VertexId, u64)> =
        (0..net.arc_count()).map(|a| (d.tail(a), d.head(a), net.cap(a))).collect();
    let mut next = d.vertex_count();
    for &v in &internal {
        for i in 1..q {
            let minus = next;
            let plus = next + 1;
            next += 2;
            labels.insert(format!("v{v}^-{i}"), minus);
            labels.insert(format!("v{v}^+{i}"), plus);
            arcs.push((s, minus, 2));
            arcs.push((minus, v, 2));
            arcs.push((v, plus, 2));
            arcs.push((plus, t, 2));
        }
    }
    let network = Network::from_arcs(next, s, t, &arcs)?;
    let offset = 2 * n_internal * (q as u64 - 1);
    Ok(GadgetOutput {
        network,
        target: format!(
            "the {q}-vertex-separable optimum equals the input's internally \
             vertex-disjoint decomposition optimum plus {offset}"
        ),
        labels,
        metrics: [
            ("q".to_string(), q as u64),
            ("internal_vertices".to_string(), n_internal),
            ("offset".to_string(), offset),
            ("source_out_degree".to_string(), d.out_degree(s) as u64),
        ]
        .into(),
    })
}

/// Sink-side in-branching for the degree-bound reduction: replaces the
/// sink's `m` unit entering arcs by a chain `t1..tm` (arc `tj->t{j+1}`
/// of capacity `j`, final arc `tm->t` of capacity `m`), leaving the one
/// wide entering arc alone. The maximum flow value is unchanged, and in
/// the result any flow whose support has out-degree at most 2 also has
/// in-degree at most 2 everywhere.
///
/// The input must look like a [`gen_sat_deg_network`] output for degree
/// bound 2: exactly one non-unit arc of capacity `2m+1` entering the
/// sink besides the `m` unit arcs.
pub fn gen_inout_tail(net: &Network) -> Result<GadgetOutput> {
    let d = net.digraph();
    let (s, t) = (net.source(), net.sink());
    let unit_in: Vec<ArcId> = d.in_arcs(t).iter().copied().filter(|&a| net.cap(a) == 1).collect();
    let wide_in: Vec<ArcId> = d.in_arcs(t).iter().copied().filter(|&a| net.cap(a) != 1).collect();
    let m = unit_in.len() as u64;
    if m == 0 || wide_in.len() != 1 || net.cap(wide_in[0]) != 2 * m + 1 {
        return Err(Error::Precondition(
            "incompatible input: the sink needs m unit-capacity entering arcs \
             plus exactly one of capacity 2m+1"
                .into(),
        ));
    }

    let mut labels = BTreeMap::new();
    labels.insert("s".to_string(), s);
    labels.insert("t".to_string(), t);
    let chain_start = d.vertex_count();
    for j in 1..=m as usize {
        labels.insert(format!("t{j}"), chain_start + j - 1);
    }
    // Unit arcs keep their ids, redirected to their chain vertex in
    // ascending arc-id order.
    let mut arcs: Vec<(VertexId, VertexId, u64)> = Vec::with_capacity(net.arc_count() + m as usize);
    for a in 0..net.arc_count() {
        match unit_in.iter().position(|&u| u == a) {
            Some(j) => arcs.push((d.tail(a), chain_start + j, 1)),
            None => arcs.push((d.tail(a), d.head(a), net.cap(a))),
        }
    }
    for j in 1..m as usize {
        arcs.push((chain_start + j - 1, chain_start + j, j as u64));
    }
    arcs.push((chain_start + m as usize - 1, t, m));

    let network = Network::from_arcs(chain_start + m as usize, s, t, &arcs)?;
    Ok(GadgetOutput {
        network,
        target: "the maximum flow value is unchanged, and every flow whose support has \
                 out-degree at most 2 also has in-degree at most 2 everywhere"
            .into(),
        labels,
        metrics: [
            ("clauses".to_string(), m),
            ("out_degree_bound".to_string(), 2),
            ("in_degree_bound".to_string(), 2),
        ]
        .into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maxflow::{arc_connectivity, max_flow};
    use crate::oracle::{
        oracle_deg_max_flow, oracle_p_split, oracle_q_separable, Budget, SeparableMode,
    };
    use crate::psplit::SplitVariant;

    // Three variables, three clauses, both polarities everywhere, so no
    // padding kicks in; satisfied by (false, true, false).
    fn fig_formula() -> CnfFormula {
        CnfFormula::new(3, vec![[1, 2, -3], [-1, 2, 3], [-1, -2, -3]]).unwrap()
    }

    fn b2_sat_formula() -> CnfFormula {
        CnfFormula::new(3, vec![[1, 2, 3], [1, 2, 3], [-1, -2, -3], [-1, -2, -3]]).unwrap()
    }

    fn b2_unsat_formula() -> CnfFormula {
        CnfFormula::new(3, vec![[1, 2, 2], [1, -2, -2], [-1, 3, 3], [-1, -3, -3]]).unwrap()
    }

    fn cap_histogram(net: &Network) -> BTreeMap<u64, usize> {
        let mut h = BTreeMap::new();
        for &c in net.capacities() {
            *h.entry(c).or_insert(0) += 1;
        }
        h
    }

    #[test]
    fn cnf_rejects_out_of_range_literals() {
        assert!(CnfFormula::new(2, vec![[1, 2, 3]]).is_err());
        assert!(CnfFormula::new(2, vec![[1, 0, 2]]).is_err());
        assert!(CnfFormula::new(3, vec![[1, -2, 3]]).is_ok());
    }

    #[test]
    fn cnf_parses_dimacs() {
        let f = CnfFormula::parse_dimacs("c comment\np cnf 3 2\n1 -2 3 0\n-1 2 -3 0\n").unwrap();
        assert_eq!(f.variables(), 3);
        assert_eq!(f.clauses(), &[[1, -2, 3], [-1, 2, -3]]);
        let wide = CnfFormula::parse_dimacs("p cnf 2 1\n1 2 0\n");
        assert!(matches!(wide, Err(Error::Parse { .. })));
        assert!(matches!(CnfFormula::parse_dimacs("1 2 3 0\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn sat_deg_counts_and_capacities() {
        let out = gen_sat_deg_network(&fig_formula(), 2).unwrap();
        let net = &out.network;
        // 4m + n + 3 vertices and 7m + 3n + 2 arcs for m = n = 3.
        assert_eq!(net.vertex_count(), 18);
        assert_eq!(net.arc_count(), 32);
        assert!(net.digraph().is_acyclic().is_some());
        assert_eq!(out.metrics["target_value"], 10);
        let s = out.vertex("s").unwrap();
        let u1 = out.vertex("u1").unwrap();
        assert_eq!(net.cap(out.arc_between(s, u1).unwrap()), 10);
        let v1 = out.vertex("v1").unwrap();
        assert_eq!(net.cap(out.arc_between(u1, v1).unwrap()), 7);
        assert_eq!(out.vertex("u2").unwrap(), v1);
        // 4 unit arcs per clause, the chain keeps capacity m.
        let hist = cap_histogram(net);
        assert_eq!(hist[&1], 12);
        assert_eq!(hist[&3], 15);
        assert_eq!(hist[&7], 4);
        assert_eq!(hist[&10], 1);
    }

    #[test]
    fn sat_deg_witness_meets_target_and_degree() {
        let f = fig_formula();
        let phi = [false, true, false];
        for k in [2usize, 3] {
            let out = gen_sat_deg_network(&f, k).unwrap();
            let x = sat_deg_witness_flow(&out, &f, k, &phi).unwrap();
            assert_eq!(x.value(), out.metrics["target_value"]);
            let (support, _) = x.support(&out.network);
            assert!(support.max_out_degree() <= k);
        }
    }

    #[test]
    fn sat_deg_pads_missing_polarity() {
        let f = CnfFormula::new(1, vec![[1, 1, 1]]).unwrap();
        let out = gen_sat_deg_network(&f, 2).unwrap();
        assert_eq!(out.metrics["clauses"], 2);
        assert_eq!(out.metrics["target_value"], 7);
        let x = sat_deg_witness_flow(&out, &f, 2, &[true]).unwrap();
        assert_eq!(x.value(), 7);
    }

    #[test]
    fn sat_deg_oracle_tracks_satisfiability() {
        let budget = Budget::gadget();
        let sat = CnfFormula::new(1, vec![[1, 1, 1]]).unwrap();
        let out = gen_sat_deg_network(&sat, 2).unwrap();
        assert_eq!(oracle_deg_max_flow(&out.network, 2, None, &budget).unwrap(), 7);

        let unsat = CnfFormula::new(1, vec![[1, 1, 1], [-1, -1, -1]]).unwrap();
        let out = gen_sat_deg_network(&unsat, 2).unwrap();
        assert!(oracle_deg_max_flow(&out.network, 2, None, &budget).unwrap() < 7);
    }

    #[test]
    fn b2sat_counts_and_capacities() {
        for f in [b2_sat_formula(), b2_unsat_formula()] {
            let out = gen_b2sat_value9_network(&f).unwrap();
            // 16n + 2m + 2 vertices, 30n + m + 2 arcs for n = 3, m = 4.
            assert_eq!(out.network.vertex_count(), 58);
            assert_eq!(out.network.arc_count(), 96);
            let hist = cap_histogram(&out.network);
            assert_eq!(hist[&8], 4);
            assert_eq!(hist[&4], 27);
            assert_eq!(hist[&2], 36);
            assert_eq!(hist[&1], 29);
        }
    }

    #[test]
    fn b2sat_witness_value9_degree2() {
        let f = b2_sat_formula();
        let out = gen_b2sat_value9_network(&f).unwrap();
        let x = b2sat_witness_flow(&out, &f, &[true, true, false]).unwrap();
        assert_eq!(x.value(), 9);
        let (support, _) = x.support(&out.network);
        assert!(support.max_out_degree() <= 2);
    }

    #[test]
    fn b2sat_rejects_wrong_occurrence_counts() {
        let f = CnfFormula::new(3, vec![[1, 2, 3]]).unwrap();
        assert!(matches!(gen_b2sat_value9_network(&f), Err(Error::Precondition(_))));
    }

    #[test]
    fn lambda_family_shape_and_values() {
        for lambda in [3usize, 5] {
            let out = gen_lambda_counterexample(lambda).unwrap();
            assert_eq!(out.network.vertex_count(), 2 * (lambda - 2) + 4);
            assert_eq!(out.network.arc_count(), 5 * (lambda - 2) + 4);
            assert_eq!(max_flow(&out.network).value(), out.metrics["max_flow"]);
            let d = out.network.digraph();
            let conn = arc_connectivity(d, out.network.source(), out.network.sink()).unwrap();
            assert_eq!(conn, lambda as u64);
        }
        assert!(gen_lambda_counterexample(2).is_err());
    }

    #[test]
    fn psplit_hard_toys_hit_their_bounds() {
        let budget = Budget::gadget();
        let positive = LinkageInstance::positive_toy();
        let negative = LinkageInstance::negative_toy();

        let out = gen_psplit_hard(4, &positive, SplitHardFamily::Cap2).unwrap();
        assert_eq!((out.metrics["o_plus"], out.metrics["o_minus"]), (6, 5));
        assert_eq!(out.network.vertex_count(), 10);
        assert_eq!(out.network.arc_count(), 12);
        let v = oracle_p_split(&out.network, 4, SplitVariant::Unrestricted, &budget).unwrap();
        assert_eq!(v, 6);

        let out = gen_psplit_hard(4, &negative, SplitHardFamily::Cap2).unwrap();
        let v = oracle_p_split(&out.network, 4, SplitVariant::Unrestricted, &budget).unwrap();
        assert!(v <= out.metrics["o_minus"]);
        assert_eq!(v, 4);

        let out = gen_psplit_hard(5, &positive, SplitHardFamily::Cap2).unwrap();
        assert_eq!((out.metrics["o_plus"], out.metrics["o_minus"]), (7, 6));
        let v = oracle_p_split(&out.network, 5, SplitVariant::Unrestricted, &budget).unwrap();
        assert_eq!(v, 7);

        let out = gen_psplit_hard(2, &positive, SplitHardFamily::Cap3).unwrap();
        assert_eq!((out.metrics["o_plus"], out.metrics["o_minus"]), (5, 4));
        let v = oracle_p_split(&out.network, 2, SplitVariant::Unrestricted, &budget).unwrap();
        assert_eq!(v, 5);

        assert!(gen_psplit_hard(1, &positive, SplitHardFamily::Cap2).is_err());
    }

    #[test]
    fn vertex_disjoint_shape_and_witness() {
        let f = fig_formula();
        let out = gen_vertex_disjoint_hard(&f).unwrap();
        // 5m + n + 3 vertices, 11m + 2n + 2 arcs for m = n = 3.
        assert_eq!(out.network.vertex_count(), 21);
        assert_eq!(out.network.arc_count(), 41);
        assert!(out.network.digraph().is_acyclic().is_some());
        assert!(out.network.capacities().iter().all(|&c| c == 1 || c == 2));

        let (x, paths) = vertex_disjoint_witness_flow(&out, &f, &[false, true, false]).unwrap();
        assert_eq!(x.value(), 7);
        assert_eq!(max_flow(&out.network).value(), 7);
        assert_eq!(paths.len(), 4);
        let (s, t) = (out.network.source(), out.network.sink());
        for (i, a) in paths.iter().enumerate() {
            for b in &paths[i + 1..] {
                for &v in &a.vertices {
                    if v != s && v != t {
                        assert!(!b.vertices.contains(&v), "paths share internal vertex {v}");
                    }
                }
            }
        }
    }

    #[test]
    fn vertex_disjoint_oracle_tracks_satisfiability() {
        let budget = Budget::gadget();
        let sat = CnfFormula::new(1, vec![[1, 1, 1]]).unwrap();
        let out = gen_vertex_disjoint_hard(&sat).unwrap();
        let v = oracle_p_split(&out.network, 3, SplitVariant::VertexDisjoint, &budget).unwrap();
        assert_eq!(v, 5);

        let unsat = CnfFormula::new(1, vec![[1, 1, 1], [-1, -1, -1]]).unwrap();
        let out = gen_vertex_disjoint_hard(&unsat).unwrap();
        let v = oracle_p_split(&out.network, 3, SplitVariant::VertexDisjoint, &budget).unwrap();
        assert!(v < 5);
    }

    #[test]
    fn separable_augmentation_offsets_the_optimum() {
        let budget = Budget::gadget();
        let net = Network::from_arcs(3, 0, 2, &[(0, 1, 2), (1, 2, 2)]).unwrap();

        let same = gen_separable_hard(&net, 1).unwrap();
        assert_eq!(same.network.vertex_count(), 3);
        assert_eq!(same.network.arc_count(), 2);
        assert_eq!(same.metrics["offset"], 0);

        let out = gen_separable_hard(&net, 2).unwrap();
        assert_eq!(out.network.vertex_count(), 5);
        assert_eq!(out.network.arc_count(), 6);
        assert_eq!(out.metrics["offset"], 2);
        let base = oracle_q_separable(&net, 1, SeparableMode::Vertex, &budget).unwrap();
        let augmented = oracle_q_separable(&out.network, 2, SeparableMode::Vertex, &budget).unwrap();
        assert_eq!(augmented, base + 2);
    }

    #[test]
    fn separable_rejects_bad_inputs() {
        let big = Network::from_arcs(3, 0, 2, &[(0, 1, 3), (1, 2, 3)]).unwrap();
        assert!(matches!(gen_separable_hard(&big, 2), Err(Error::Precondition(_))));
        let cyclic =
            Network::from_arcs(4, 0, 3, &[(0, 1, 1), (1, 2, 1), (2, 1, 1), (2, 3, 1)]).unwrap();
        assert!(matches!(gen_separable_hard(&cyclic, 2), Err(Error::Precondition(_))));
    }

    #[test]
    fn inout_tail_rebuilds_the_sink_side() {
        let f = fig_formula();
        let base = gen_sat_deg_network(&f, 2).unwrap();
        let out = gen_inout_tail(&base.network).unwrap();
        assert_eq!(out.network.vertex_count(), base.network.vertex_count() + 3);
        assert_eq!(out.network.arc_count(), base.network.arc_count() + 3);
        assert_eq!(max_flow(&out.network).value(), max_flow(&base.network).value());

        let d = out.network.digraph();
        let t = out.network.sink();
        assert_eq!(d.in_degree(t), 2);
        let t1 = out.vertex("t1").unwrap();
        let t2 = out.vertex("t2").unwrap();
        let t3 = out.vertex("t3").unwrap();
        assert_eq!(out.network.cap(out.arc_between(t1, t2).unwrap()), 1);
        assert_eq!(out.network.cap(out.arc_between(t2, t3).unwrap()), 2);
        assert_eq!(out.network.cap(out.arc_between(t3, t).unwrap()), 3);
    }

    #[test]
    fn inout_tail_keeps_degree_two_optima() {
        let budget = Budget::gadget();
        for f in [
            CnfFormula::new(1, vec![[1, 1, 1], [1, -1, 1]]).unwrap(),
            CnfFormula::new(1, vec![[1, 1, 1], [-1, -1, -1]]).unwrap(),
        ] {
            let base = gen_sat_deg_network(&f, 2).unwrap();
            let out = gen_inout_tail(&base.network).unwrap();
            let out_only = oracle_deg_max_flow(&out.network, 2, None, &budget).unwrap();
            let both = oracle_deg_max_flow(&out.network, 2, Some(2), &budget).unwrap();
            assert_eq!(out_only, both);
            assert_eq!(out_only, oracle_deg_max_flow(&base.network, 2, None, &budget).unwrap());
        }
    }

    #[test]
    fn inout_tail_rejects_incompatible_sinks() {
        let plain = Network::from_arcs(3, 0, 2, &[(0, 1, 2), (1, 2, 2)]).unwrap();
        assert!(matches!(gen_inout_tail(&plain), Err(Error::Precondition(_))));
    }

    #[test]
    fn metadata_json_is_well_formed() {
        let out = gen_lambda_counterexample(3).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&out.metadata_json()).unwrap();
        assert_eq!(parsed["metrics"]["lambda"], 3);
        assert_eq!(parsed["labels"]["s"], 0);
        assert!(parsed["target"].is_string());
    }
}

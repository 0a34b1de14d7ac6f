//! Seeded random instances. Everything here is a pure function of the
//! seed and the config (ChaCha keyed by the seed), so test suites that
//! fix seeds are reproducible across runs and platforms.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gadgets::CnfFormula;
use crate::maxflow;
use crate::netcore::{Flow, Network, VertexId};

#[derive(Debug, Clone)]
pub struct RandNetConfig {
    pub vertices: usize,
    pub arcs: usize,
    pub max_cap: u64,
    pub acyclic: bool,
}

impl RandNetConfig {
    pub fn new(vertices: usize, arcs: usize, max_cap: u64) -> Self {
        RandNetConfig { vertices, arcs, max_cap, acyclic: false }
    }

    pub fn acyclic(mut self) -> Self {
        self.acyclic = true;
        self
    }
}

/// Random network with source 0 and sink `vertices - 1`. A random
/// source-to-sink path is laid down first so the sink is reachable, then
/// the remaining arcs are sampled uniformly (forward-only with respect to
/// a random vertex permutation in acyclic mode). Parallel arcs may occur;
/// self-loops never.
pub fn random_network(seed: u64, cfg: &RandNetConfig) -> Network {
    assert!(cfg.vertices >= 2 && cfg.max_cap >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = cfg.vertices;
    let (s, t) = (0, n - 1);

    // Vertex order used both for the initial path and for acyclic mode:
    // s first, t last, the middle shuffled.
    let mut order: Vec<VertexId> = (1..n - 1).collect();
    order.shuffle(&mut rng);
    let mut position = vec![0usize; n];
    position[s] = 0;
    position[t] = n - 1;
    for (i, &v) in order.iter().enumerate() {
        position[v] = i + 1;
    }

    let mut arcs: Vec<(VertexId, VertexId, u64)> = Vec::new();
    let path_len = rng.gen_range(0..=order.len());
    let mut prev = s;
    for &v in order.iter().take(path_len) {
        arcs.push((prev, v, rng.gen_range(1..=cfg.max_cap)));
        prev = v;
    }
    arcs.push((prev, t, rng.gen_range(1..=cfg.max_cap)));

    while arcs.len() < cfg.arcs {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v {
            continue;
        }
        let (u, v) = if cfg.acyclic && position[u] > position[v] { (v, u) } else { (u, v) };
        arcs.push((u, v, rng.gen_range(1..=cfg.max_cap)));
    }

    Network::from_arcs(n, s, t, &arcs).expect("generated arcs are valid")
}

/// Random valid flow: the maximum flow of a random sub-capacity network
/// (so arbitrary slack everywhere), plus a few unit pushes around random
/// cycles when the digraph has them. Useful for decomposition tests.
pub fn random_flow(seed: u64, net: &Network) -> Flow {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let shrunk: Vec<u64> = net.capacities().iter().map(|&c| rng.gen_range(0..=c)).collect();
    let mut values = vec![0u64; net.arc_count()];
    if shrunk.iter().any(|&c| c > 0) {
        let keep: Vec<bool> = shrunk.iter().map(|&c| c > 0).collect();
        let (sub, origin) = net.sub_network_by_arcs(&keep);
        let sub = {
            let caps: Vec<u64> = origin.iter().map(|&a| shrunk[a]).collect();
            Network::new(sub.digraph().clone(), sub.source(), sub.sink(), caps)
                .expect("shrunk capacities are positive")
        };
        let sub_flow = maxflow::max_flow(&sub);
        for (new_id, &orig) in origin.iter().enumerate() {
            values[orig] = sub_flow.arc_value(new_id);
        }
    }

    // A few random cycle pushes to exercise the cycle machinery.
    for _ in 0..3 {
        push_random_cycle(&mut rng, net, &mut values);
    }
    Flow::from_arc_values(net, values).expect("constructed arc values form a flow")
}

fn push_random_cycle(rng: &mut ChaCha8Rng, net: &Network, values: &mut [u64]) {
    let d = net.digraph();
    let start = rng.gen_range(0..net.vertex_count());
    let mut walk_vertices = vec![start];
    let mut walk_arcs = Vec::new();
    for _ in 0..=net.vertex_count() {
        let v = *walk_vertices.last().unwrap();
        let candidates: Vec<_> =
            d.out_arcs(v).iter().copied().filter(|&a| values[a] < net.cap(a)).collect();
        let Some(&a) = candidates.as_slice().choose(rng) else { return };
        let w = d.head(a);
        walk_arcs.push(a);
        if let Some(pos) = walk_vertices.iter().position(|&x| x == w) {
            for &b in &walk_arcs[pos..] {
                values[b] += 1;
            }
            return;
        }
        walk_vertices.push(w);
    }
}

/// Random 3-SAT formula; variables may repeat inside a clause, which is
/// what makes small unsatisfiable instances possible at all.
pub fn random_cnf(seed: u64, variables: usize, clauses: usize) -> CnfFormula {
    assert!(variables >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x51_7c_c1_b7);
    let clauses = (0..clauses)
        .map(|_| {
            [0; 3].map(|_| {
                let var = rng.gen_range(1..=variables as i32);
                if rng.gen_bool(0.5) {
                    var
                } else {
                    -var
                }
            })
        })
        .collect();
    CnfFormula::new(variables, clauses).expect("generated clauses are in range")
}

//! End-to-end acceptance suite. Each test is one numbered criterion: the
//! harness emits its pass/fail line, and on success the test prints a
//! one-line summary of what was measured (visible with `--nocapture`).
//! Together they cover the counterexample family, the rerouting and
//! approximation guarantees, the exact dynamic programs, the hardness
//! generators and the reference oracles, each within its stated runtime
//! budget.

use num::{BigInt, BigRational};

use flownet_core::decomp::{acyclify, decompose};
use flownet_core::degflow::{deg_flow_value_k_plus_1, widest_path};
use flownet_core::gadgets::{
    b2sat_witness_flow, gen_b2sat_value9_network, gen_lambda_counterexample, gen_psplit_hard,
    gen_sat_deg_network, gen_separable_hard, CnfFormula, LinkageInstance, SplitHardFamily,
};
use flownet_core::maxflow::{arc_connectivity, max_flow};
use flownet_core::oracle::{
    enumerate_max_flows, oracle_deg_max_flow, oracle_p_split, oracle_q_separable, sat_bruteforce,
    Budget, SeparableMode,
};
use flownet_core::psplit::{approx_p_split, harmonic, SplitVariant};
use flownet_core::randnet::{random_cnf, random_flow, random_network, RandNetConfig};
use flownet_core::strongflow::two_arc_strong_max_flow_with_stats;
use flownet_core::tricot::{arc_disjoint_exact_acyclic, default_max_states, tricot_dp_exact};
use flownet_core::{Flow, Network};

fn rational(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// High arc connectivity does not survive into supports: the generated
/// family has `lambda` arc-disjoint terminal paths, yet every integer
/// maximum flow (value `2*lambda - 2`) leaves a support with exactly two.
#[test]
fn acceptance_01_lambda_family_support_collapse() {
    let budget = Budget::gadget();
    let mut flows_checked = 0;
    for lambda in [3usize, 4, 5] {
        let out = gen_lambda_counterexample(lambda).unwrap();
        let net = &out.network;
        assert_eq!(max_flow(net).value(), 2 * lambda as u64 - 2, "lambda {lambda}");
        let conn = arc_connectivity(net.digraph(), net.source(), net.sink()).unwrap();
        assert_eq!(conn, lambda as u64, "lambda {lambda}");
        let flows = enumerate_max_flows(net, &budget).unwrap();
        assert!(!flows.is_empty(), "lambda {lambda}");
        flows_checked += flows.len();
        for flow in &flows {
            let (support, _) = flow.support(net);
            let sc = arc_connectivity(&support, net.source(), net.sink()).unwrap();
            assert_eq!(sc, 2, "lambda {lambda}");
        }
    }
    println!(
        "criterion 01 pass: {flows_checked} maximum flows across the family, \
         every support has connectivity 2"
    );
}

/// On fifty seeded networks with two arc-disjoint terminal routes, the
/// rerouting loop keeps the maximum flow value, ends with a support of
/// arc connectivity at least 2, and kills at least one support cut-arc
/// per round (the reported counts strictly decrease to zero).
#[test]
fn acceptance_02_two_arc_strong_support() {
    let cfg = RandNetConfig { vertices: 8, arcs: 13, max_cap: 4, acyclic: false };
    let mut exercised = 0;
    let mut seed = 0u64;
    while exercised < 50 {
        let net = random_network(seed, &cfg);
        seed += 1;
        assert!(seed < 10_000, "not enough 2-connected instances");
        let lambda = arc_connectivity(net.digraph(), net.source(), net.sink());
        if !matches!(lambda, Ok(l) if l >= 2) {
            continue;
        }
        exercised += 1;
        let (flow, stats) = two_arc_strong_max_flow_with_stats(&net).unwrap();
        assert_eq!(flow.value(), max_flow(&net).value(), "seed {}", seed - 1);
        let (support, _) = flow.support(&net);
        let sc = arc_connectivity(&support, net.source(), net.sink()).unwrap();
        assert!(sc >= 2, "seed {}: support connectivity {sc}", seed - 1);
        assert_eq!(*stats.last().unwrap(), 0, "seed {}", seed - 1);
        for w in stats.windows(2) {
            assert!(w[0] > w[1], "seed {}: counts {stats:?}", seed - 1);
        }
    }
    println!(
        "criterion 02 pass: 50 instances rerouted to 2-connected supports \
         with strictly shrinking cut-arc counts"
    );
}

/// The uniform-value approximation is within a harmonic factor of the
/// exact optimum: `H(p) * approx >= optimum` in exact rational
/// arithmetic, for every variant, on one hundred seeded networks. The
/// two-parallel-arc instance with capacities 3 and 1 pins the gap:
/// approximation 3 against optimum 4.
#[test]
fn acceptance_03_harmonic_approximation_guarantee() {
    let cfg = RandNetConfig { vertices: 8, arcs: 11, max_cap: 4, acyclic: false };
    let budget = Budget::default().with_states(1_000_000_000);
    for seed in 0..100u64 {
        let net = random_network(seed, &cfg);
        for p in [2usize, 3, 4] {
            let h = harmonic(p).unwrap();
            for variant in [
                SplitVariant::Unrestricted,
                SplitVariant::ArcDisjoint,
                SplitVariant::VertexDisjoint,
            ] {
                let approx = approx_p_split(&net, p, variant).unwrap();
                let exact = oracle_p_split(&net, p, variant, &budget).unwrap();
                assert!(
                    h.clone() * rational(approx.flow.value()) >= rational(exact),
                    "seed {seed} p {p} {variant:?}: approx {} exact {exact}",
                    approx.flow.value()
                );
            }
        }
    }

    let gap = Network::from_arcs(2, 0, 1, &[(0, 1, 3), (0, 1, 1)]).unwrap();
    let approx = approx_p_split(&gap, 2, SplitVariant::Unrestricted).unwrap();
    assert_eq!(approx.flow.value(), 3);
    let exact = oracle_p_split(&gap, 2, SplitVariant::Unrestricted, &budget).unwrap();
    assert_eq!(exact, 4);
    println!(
        "criterion 03 pass: 900 harmonic bounds held; the parallel-arc gap \
         instance gave 3 against 4"
    );
}

/// The acyclic dynamic programs are exact: on one hundred seeded acyclic
/// networks and every path budget, the vertex-disjoint DP matches the
/// vertex-disjoint oracle, the arc-disjoint DP matches the arc-disjoint
/// oracle, and a budget of one path reduces to the widest path.
#[test]
fn acceptance_04_disjoint_path_dp_exactness() {
    let cfg = RandNetConfig { vertices: 7, arcs: 11, max_cap: 4, acyclic: true };
    let budget = Budget::default().with_states(1_000_000_000);
    for seed in 0..100u64 {
        let net = random_network(seed, &cfg);
        let (_, widest) = widest_path(&net);
        for p in [1usize, 2, 3] {
            let vertex = tricot_dp_exact(&net, p, default_max_states()).unwrap();
            let want = oracle_p_split(&net, p, SplitVariant::VertexDisjoint, &budget).unwrap();
            assert_eq!(vertex.flow.value(), want, "seed {seed} p {p} vertex");
            let arc = arc_disjoint_exact_acyclic(&net, p, default_max_states()).unwrap();
            let want = oracle_p_split(&net, p, SplitVariant::ArcDisjoint, &budget).unwrap();
            assert_eq!(arc.flow.value(), want, "seed {seed} p {p} arc");
            if p == 1 {
                assert_eq!(vertex.flow.value(), widest, "seed {seed} widest");
                assert_eq!(arc.flow.value(), widest, "seed {seed} widest");
            }
        }
    }
    println!("criterion 04 pass: 600 dynamic-program values matched the oracle");
}

/// The degree-bound reduction is faithful on a seeded sample of thirty
/// small formulas: the generated network reaches its target value under
/// out-degree bound 2 exactly when the formula is satisfiable.
#[test]
fn acceptance_05_degree_network_tracks_satisfiability() {
    let budget = Budget::gadget();
    let mut satisfiable = 0;
    for seed in 0..30u64 {
        let n = 1 + (seed as usize) % 3;
        let m = 1 + (seed as usize) % 4;
        let f = random_cnf(seed, n, m);
        let sat = sat_bruteforce(&f, &budget).unwrap();
        let out = gen_sat_deg_network(&f, 2).unwrap();
        let target = out.metrics["target_value"];
        let v = oracle_deg_max_flow(&out.network, 2, None, &budget).unwrap();
        assert!(v <= target, "seed {seed}");
        assert_eq!(v == target, sat, "seed {seed}: value {v}, target {target}, sat {sat}");
        if sat {
            satisfiable += 1;
        }
    }
    println!("criterion 05 pass: 30 formulas tracked ({satisfiable} satisfiable)");
}

/// The value-(k+1) decision under out-degree bound k agrees with the
/// exhaustive oracle on one hundred seeded networks, and every returned
/// witness is a valid flow of value k+1 whose support meets the bound.
#[test]
fn acceptance_06_degree_decision_matches_oracle() {
    let cfg = RandNetConfig { vertices: 8, arcs: 12, max_cap: 4, acyclic: false };
    let budget = Budget::default();
    let mut witnesses = 0;
    for seed in 0..100u64 {
        let net = random_network(seed, &cfg);
        for k in [2usize, 3] {
            let got = deg_flow_value_k_plus_1(&net, k).unwrap();
            let oracle = oracle_deg_max_flow(&net, k, None, &budget).unwrap();
            let want = oracle >= k as u64 + 1;
            assert_eq!(got.is_some(), want, "seed {seed} k {k}: oracle {oracle}");
            if let Some(x) = got {
                witnesses += 1;
                let revalidated = Flow::from_arc_values(&net, x.arc_values().to_vec()).unwrap();
                assert_eq!(revalidated.value(), k as u64 + 1, "seed {seed} k {k}");
                let (support, _) = x.support(&net);
                assert!(support.max_out_degree() <= k, "seed {seed} k {k}");
            }
        }
    }
    println!(
        "criterion 06 pass: 200 decisions matched the oracle, \
         {witnesses} witnesses revalidated"
    );
}

/// Decomposition invariants on two hundred seeded flows: at most
/// |V| + |A| components of which at most |A| are cycles, per-arc sums
/// reconstruct the flow exactly, and cycle removal keeps the value while
/// only ever shrinking the support to an acyclic one.
#[test]
fn acceptance_07_decomposition_bounds() {
    let cfg = RandNetConfig { vertices: 8, arcs: 12, max_cap: 4, acyclic: false };
    for seed in 0..200u64 {
        let net = random_network(seed, &cfg);
        let x = random_flow(seed, &net);
        let dec = decompose(&net, &x);
        let bound = net.vertex_count() + net.arc_count();
        assert!(dec.components.len() <= bound, "seed {seed}");
        assert!(dec.cycles().count() <= net.arc_count(), "seed {seed}");
        assert_eq!(dec.reconstruct(net.arc_count()), x.arc_values(), "seed {seed}");

        let y = acyclify(&net, &x);
        assert_eq!(y.value(), x.value(), "seed {seed}");
        for a in 0..net.arc_count() {
            assert!(
                y.arc_value(a) <= x.arc_value(a),
                "seed {seed}: arc {a} grew under cycle removal"
            );
        }
        let (support, _) = y.support(&net);
        assert!(support.is_acyclic().is_some(), "seed {seed}");
    }
    println!("criterion 07 pass: 200 flows decomposed within bounds and acyclified");
}

/// The copy-based inapproximability family hits its designed values on
/// the built-in toy linkage instances: value 6 with the positive
/// instance at a budget of four paths, at most 5 with the negative one.
#[test]
fn acceptance_08_path_budget_family_values() {
    let budget = Budget::gadget();
    let positive = gen_psplit_hard(4, &LinkageInstance::positive_toy(), SplitHardFamily::Cap2)
        .unwrap();
    assert_eq!(positive.metrics["o_plus"], 6);
    let v = oracle_p_split(&positive.network, 4, SplitVariant::Unrestricted, &budget).unwrap();
    assert_eq!(v, 6);

    let negative = gen_psplit_hard(4, &LinkageInstance::negative_toy(), SplitHardFamily::Cap2)
        .unwrap();
    assert_eq!(negative.metrics["o_minus"], 5);
    let v = oracle_p_split(&negative.network, 4, SplitVariant::Unrestricted, &budget).unwrap();
    assert!(v <= 5, "negative toy reached {v}");
    println!("criterion 08 pass: positive toy reached 6, negative toy stayed at {v}");
}

/// Forward direction of the value-9 construction: for a canonical
/// satisfiable formula with every variable twice positive and twice
/// negative, the explicit witness flow validates at value 9 with support
/// out-degree at most 2, on a network of the designed size.
#[test]
fn acceptance_09_value9_witness_validates() {
    let f = CnfFormula::new(3, vec![[1, 2, 3], [1, 2, 3], [-1, -2, -3], [-1, -2, -3]]).unwrap();
    let out = gen_b2sat_value9_network(&f).unwrap();
    assert_eq!(out.network.vertex_count(), 58);
    assert_eq!(out.network.arc_count(), 96);
    let x = b2sat_witness_flow(&out, &f, &[true, true, false]).unwrap();
    assert_eq!(x.value(), 9);
    let (support, _) = x.support(&out.network);
    assert!(support.max_out_degree() <= 2);
    println!(
        "criterion 09 pass: the witness flow validates at value 9 with \
         support out-degree at most 2"
    );
}

/// Converse direction of the value-9 construction on an unsatisfiable
/// formula: no flow of value 9 with support out-degree at most 2 exists.
#[test]
fn acceptance_09_value9_unsat_converse() {
    let f = CnfFormula::new(3, vec![[1, 2, 2], [1, -2, -2], [-1, 3, 3], [-1, -3, -3]]).unwrap();
    let budget = Budget::gadget();
    assert!(!sat_bruteforce(&f, &budget).unwrap());
    let out = gen_b2sat_value9_network(&f).unwrap();
    let v = oracle_deg_max_flow(&out.network, 2, None, &budget).unwrap();
    assert!(v < 9, "unsatisfiable instance reached value {v}");
    println!("criterion 09 pass: the unsatisfiable converse peaked at {v} < 9");
}

/// The separability augmentation shifts the optimum by exactly its
/// designed offset: on tiny acyclic networks with capacities 1 and 2,
/// the q-separable optimum of the output equals the vertex-disjoint
/// (1-separable) optimum of the input plus 2 * internal * (q - 1).
#[test]
fn acceptance_10_separable_offset() {
    let instances = [
        Network::from_arcs(3, 0, 2, &[(0, 1, 2), (1, 2, 2)]).unwrap(),
        Network::from_arcs(4, 0, 3, &[(0, 1, 2), (1, 3, 2), (0, 2, 1), (2, 3, 1)]).unwrap(),
        Network::from_arcs(
            4,
            0,
            3,
            &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 2, 2), (1, 3, 2)],
        )
        .unwrap(),
    ];
    let budget = Budget::gadget();
    for (idx, net) in instances.iter().enumerate() {
        let base = oracle_q_separable(net, 1, SeparableMode::Vertex, &budget).unwrap();
        for q in [1usize, 2] {
            let out = gen_separable_hard(net, q).unwrap();
            let augmented =
                oracle_q_separable(&out.network, q, SeparableMode::Vertex, &budget).unwrap();
            assert_eq!(
                augmented,
                base + out.metrics["offset"],
                "instance {idx} q {q}"
            );
        }
    }
    println!("criterion 10 pass: 6 offset identities held on 3 instances");
}

//! Command-line front end: every solver, generator and oracle of
//! `flownet_core` as a subcommand with uniform I/O and exit codes.
//!
//! Conventions shared by all subcommands:
//! * networks are read in the `p flownet` text format, `-` meaning stdin,
//!   so generators pipe straight into solvers;
//! * results go to stdout as one JSON object (`--format text` for terse
//!   `key value` lines); vertex labels in output are 1-based like the file
//!   format, arc ids are 0-based positions in the file's arc list;
//! * exit codes: 0 success, 2 unreadable or invalid input, 3 refused by a
//!   search budget, 4 precondition violated (e.g. a cyclic network where
//!   an acyclic one is required), 1 internal failure.

use std::fs;
use std::io::{self, Read};
use std::process;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use flownet_core::decomp::{acyclify, decompose};
use flownet_core::degflow::deg_flow_value_k_plus_1;
use flownet_core::error::Error;
use flownet_core::gadgets::{
    gen_b2sat_value9_network, gen_inout_tail, gen_lambda_counterexample, gen_psplit_hard,
    gen_sat_deg_network, gen_separable_hard, gen_vertex_disjoint_hard, CnfFormula, GadgetOutput,
    LinkageInstance, SplitHardFamily,
};
use flownet_core::maxflow::{arc_connectivity, max_flow, min_cut};
use flownet_core::netcore::{Flow, FlowJson, Network};
use flownet_core::oracle::{
    enumerate_max_flows, oracle_deg_max_flow, oracle_p_split, oracle_q_separable, sat_bruteforce,
    Budget, SeparableMode,
};
use flownet_core::persist;
use flownet_core::psplit::{approx_p_split, PathFlow, SplitVariant};
use flownet_core::randnet::{random_network, RandNetConfig};
use flownet_core::strongflow::two_arc_strong_max_flow_with_stats;
use flownet_core::tricot;

/// Structurally constrained maximum flows: solvers, approximations,
/// hard-instance generators and brute-force oracles.
///
/// Exit codes: 0 success, 2 invalid input, 3 search budget exceeded,
/// 4 precondition violated.
#[derive(Parser)]
#[command(name = "flownet", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Maximum flow value and arc values.
    Maxflow(MaxflowArgs),
    /// A minimum source-sink cut.
    Mincut(CommonArgs),
    /// Arc connectivity from source to sink (capacities ignored).
    Lambda(CommonArgs),
    /// Path/cycle decomposition of a flow (default: a maximum flow).
    Decompose(FlowInputArgs),
    /// Cycle-free flow of the same value (default: a maximum flow).
    Acyclify(FlowInputArgs),
    /// Decide a flow of value k+1 whose support has out-degree at most k.
    Degflow(DegflowArgs),
    /// Maximum flow whose support keeps two arc-disjoint terminal paths.
    Strong2(CommonArgs),
    /// Approximate splitting into at most p path-flows.
    Psplit(PsplitArgs),
    /// Exact disjoint path-flow packing on acyclic networks.
    Tricot(TricotArgs),
    /// Flow survival under small deletions.
    Persist {
        #[command(subcommand)]
        cmd: PersistCmd,
    },
    /// Hard-instance generators; they write the network file format.
    Gadget {
        #[command(subcommand)]
        kind: GadgetCmd,
    },
    /// Budget-guarded brute-force reference solvers.
    Oracle {
        #[command(subcommand)]
        problem: OracleCmd,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct CommonArgs {
    /// Network file in the `p flownet` format; `-` reads standard input.
    #[arg(long, default_value = "-")]
    input: String,
    /// Machine-readable JSON or terse `key value` text.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct MaxflowArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Emit a DOT rendering with the flow overlaid instead of JSON/text.
    #[arg(long)]
    dot: bool,
}

#[derive(Args)]
struct FlowInputArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Flow as JSON (`{"value":..,"flow":[{"arc":..,"x":..}]}`); without
    /// it a maximum flow of the network is used.
    #[arg(long)]
    flow: Option<String>,
}

#[derive(Args)]
struct DegflowArgs {
    /// Out-degree bound on the support.
    #[arg(long)]
    k: usize,
    /// Target value; only k+1 is decidable by the fast routine.
    #[arg(long)]
    target: Option<u64>,
    /// Also run the brute-force reference and report agreement.
    #[arg(long)]
    oracle: bool,
    /// State budget for the brute-force reference.
    #[arg(long, env = "FLOWNET_BUDGET_STATES")]
    budget: Option<u64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum PsplitVariantArg {
    /// Any multiset of paths.
    Any,
    /// Pairwise arc-disjoint paths.
    Arc,
    /// Paths meeting only at the terminals.
    Vertex,
}

#[derive(Args)]
struct PsplitArgs {
    /// Path budget.
    #[arg(long)]
    p: usize,
    #[arg(long, value_enum)]
    variant: PsplitVariantArg,
    /// Also run the exact brute-force reference.
    #[arg(long)]
    oracle: bool,
    /// State budget for the brute-force reference.
    #[arg(long, env = "FLOWNET_BUDGET_STATES")]
    budget: Option<u64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum DisjointVariantArg {
    /// Paths meeting only at the terminals.
    Vertex,
    /// Pairwise arc-disjoint paths.
    Arc,
}

#[derive(Args)]
struct TricotArgs {
    /// Path budget.
    #[arg(long)]
    p: usize,
    #[arg(long, value_enum)]
    variant: DisjointVariantArg,
    /// Dynamic-programming state budget.
    #[arg(long, env = "FLOWNET_BUDGET_STATES")]
    budget: Option<u64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Subcommand)]
enum PersistCmd {
    /// Worst residual value of a given flow after deleting up to k arcs
    /// outside every minimum cut.
    Eval {
        /// Number of arc deletions to survive.
        #[arg(long)]
        k: usize,
        /// Flow as JSON; `-` (the default) reads standard input.
        #[arg(long, default_value = "-")]
        flow: String,
        /// Cap on the number of deletion sets examined.
        #[arg(long, env = "FLOWNET_BUDGET_STATES")]
        budget: Option<u64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Maximum flow with the best worst-case residual value (brute force
    /// over all integer maximum flows).
    Best {
        /// Number of arc deletions to survive.
        #[arg(long)]
        k: usize,
        /// Cap on the number of states examined.
        #[arg(long, env = "FLOWNET_BUDGET_STATES")]
        budget: Option<u64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Fewest arc deletions pushing the maximum flow value below K.
    Threshold {
        /// The value to fall below.
        #[arg(long = "K")]
        threshold: u64,
        /// Cap on the number of deletion sets examined.
        #[arg(long, env = "FLOWNET_BUDGET_STATES")]
        budget: Option<u64>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    #[value(name = "cap2")]
    Cap2,
    #[value(name = "cap3")]
    Cap3,
}

#[derive(Subcommand)]
enum GadgetCmd {
    /// Family with lambda arc-disjoint terminal paths whose every maximum
    /// flow has a support of connectivity 2.
    Lambda {
        /// Connectivity of the generated digraph, at least 3.
        #[arg(long)]
        lambda: usize,
        /// Emit a DOT rendering instead of the file format.
        #[arg(long)]
        dot: bool,
    },
    /// 3-SAT to degree-bounded flow: the formula is satisfiable iff the
    /// network has a flow of the target value with out-degree at most k.
    SatDeg {
        /// Formula in DIMACS CNF, exactly 3 literals per clause; `-` reads
        /// standard input.
        #[arg(long, default_value = "-")]
        cnf: String,
        /// Out-degree bound encoded by the construction, at least 2.
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Emit a DOT rendering instead of the file format.
        #[arg(long)]
        dot: bool,
    },
    /// (3,B2)-SAT to acyclic out-degree-2 flow of value 9.
    #[command(name = "b2-value9")]
    B2Value9 {
        /// Formula in DIMACS CNF; every variable must occur exactly twice
        /// positively and twice negatively.
        #[arg(long, default_value = "-")]
        cnf: String,
        /// Emit a DOT rendering instead of the file format.
        #[arg(long)]
        dot: bool,
    },
    /// Splitting-inapproximability family built over a two-commodity
    /// linkage toy instance.
    PsplitHard {
        /// Path budget the family is tuned to.
        #[arg(long)]
        p: usize,
        /// Copy-arc capacity family.
        #[arg(long, value_enum, default_value = "cap2")]
        family: FamilyArg,
        /// Use the negative linkage toy instead of the positive one.
        #[arg(long)]
        negative: bool,
        /// Emit a DOT rendering instead of the file format.
        #[arg(long)]
        dot: bool,
    },
    /// 3-SAT to vertex-disjoint path-flow packing.
    VertexDisjointHard {
        /// Formula in DIMACS CNF; `-` reads standard input.
        #[arg(long, default_value = "-")]
        cnf: String,
        /// Emit a DOT rendering instead of the file format.
        #[arg(long)]
        dot: bool,
    },
    /// Wrap an acyclic caps-{1,2} network so the q-separable optimum
    /// shifts by a known offset.
    SeparableHard {
        /// Per-vertex path multiplicity the wrapper is tuned to.
        #[arg(long)]
        q: usize,
        /// Input network; `-` reads standard input.
        #[arg(long, default_value = "-")]
        input: String,
        /// Emit a DOT rendering instead of the file format.
        #[arg(long)]
        dot: bool,
    },
    /// Redirect unit sink arcs through a capacity-graded tail chain.
    InoutTail {
        /// Input network; `-` reads standard input.
        #[arg(long, default_value = "-")]
        input: String,
        /// Emit a DOT rendering instead of the file format.
        #[arg(long)]
        dot: bool,
    },
    /// Seeded random network for test pipelines.
    Random {
        /// Seed; it fully determines the output.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        vertices: usize,
        #[arg(long, default_value_t = 12)]
        arcs: usize,
        #[arg(long, default_value_t = 4)]
        max_cap: u64,
        /// Only forward arcs, so the result is acyclic.
        #[arg(long)]
        acyclic: bool,
        /// Emit a DOT rendering instead of the file format.
        #[arg(long)]
        dot: bool,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Exact degree-bounded maximum flow value by support enumeration.
    Degflow {
        /// Out-degree bound.
        #[arg(long)]
        k: usize,
        /// Optional in-degree bound.
        #[arg(long)]
        k_in: Option<usize>,
        /// Search state budget.
        #[arg(long, env = "FLOWNET_BUDGET_STATES")]
        budget: Option<u64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Exact optimum over decompositions into at most p path-flows.
    Psplit {
        /// Path budget.
        #[arg(long)]
        p: usize,
        #[arg(long, value_enum)]
        variant: PsplitVariantArg,
        /// Search state budget.
        #[arg(long, env = "FLOWNET_BUDGET_STATES")]
        budget: Option<u64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Exact optimum with per-vertex or per-arc path multiplicity at
    /// most q, over any number of paths.
    Separable {
        /// Multiplicity bound.
        #[arg(long)]
        q: usize,
        #[arg(long, value_enum)]
        mode: DisjointVariantArg,
        /// Search state budget.
        #[arg(long, env = "FLOWNET_BUDGET_STATES")]
        budget: Option<u64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Every integer maximum flow, each exactly once.
    EnumerateMaxFlows {
        /// Search state budget.
        #[arg(long, env = "FLOWNET_BUDGET_STATES")]
        budget: Option<u64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Satisfiability by assignment enumeration.
    Sat {
        /// Formula in DIMACS CNF; `-` reads standard input.
        #[arg(long, default_value = "-")]
        cnf: String,
        /// Search state budget.
        #[arg(long, env = "FLOWNET_BUDGET_STATES")]
        budget: Option<u64>,
        /// Machine-readable JSON or terse `key value` text.
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(out) => print!("{out}"),
        Err(failure) => {
            eprintln!("flownet: {}", failure.message());
            process::exit(failure.exit_code());
        }
    }
}

fn run(cmd: Cmd) -> Result<String, Failure> {
    match cmd {
        Cmd::Maxflow(args) => cmd_maxflow(args),
        Cmd::Mincut(args) => cmd_mincut(args),
        Cmd::Lambda(args) => cmd_lambda(args),
        Cmd::Decompose(args) => cmd_decompose(args),
        Cmd::Acyclify(args) => cmd_acyclify(args),
        Cmd::Degflow(args) => cmd_degflow(args),
        Cmd::Strong2(args) => cmd_strong2(args),
        Cmd::Psplit(args) => cmd_psplit(args),
        Cmd::Tricot(args) => cmd_tricot(args),
        Cmd::Persist { cmd } => cmd_persist(cmd),
        Cmd::Gadget { kind } => cmd_gadget(kind),
        Cmd::Oracle { problem } => cmd_oracle(problem),
    }
}

fn cmd_maxflow(args: MaxflowArgs) -> Result<String, Failure> {
    let net = load_network(&args.common.input)?;
    let flow = max_flow(&net);
    if args.dot {
        return Ok(net.to_dot(Some(&flow)));
    }
    let json = serde_json::to_value(flow.to_json()).expect("a flow serializes");
    Ok(render(args.common.format, json, flow_text(&flow)))
}

fn cmd_mincut(args: CommonArgs) -> Result<String, Failure> {
    let net = load_network(&args.input)?;
    let cut = min_cut(&net)?;
    let json = json!({
        "capacity": cut.capacity,
        "x_side": labels(&cut.x_side),
        "arcs_across": cut.arcs_across,
    });
    let text = format!(
        "capacity {}\nx_side{}\narcs_across{}\n",
        cut.capacity,
        joined(&labels(&cut.x_side)),
        joined(&cut.arcs_across),
    );
    Ok(render(args.format, json, text))
}

fn cmd_lambda(args: CommonArgs) -> Result<String, Failure> {
    let net = load_network(&args.input)?;
    let lambda = arc_connectivity(net.digraph(), net.source(), net.sink())?;
    Ok(render(args.format, json!({ "lambda": lambda }), format!("lambda {lambda}\n")))
}

fn cmd_decompose(args: FlowInputArgs) -> Result<String, Failure> {
    let (net, flow) = load_network_and_flow(&args)?;
    let mut flow_json = flow.to_json();
    flow_json.decomposition = Some(decompose(&net, &flow).to_json());
    let mut text = flow_text(&flow);
    for c in flow_json.decomposition.as_ref().expect("just set") {
        text.push_str(&format!("{}{} value {}\n", c.kind, joined(&c.vertices), c.value));
    }
    let json = serde_json::to_value(flow_json).expect("a decomposition serializes");
    Ok(render(args.common.format, json, text))
}

fn cmd_acyclify(args: FlowInputArgs) -> Result<String, Failure> {
    let (net, flow) = load_network_and_flow(&args)?;
    let cycle_free = acyclify(&net, &flow);
    let json = serde_json::to_value(cycle_free.to_json()).expect("a flow serializes");
    Ok(render(args.common.format, json, flow_text(&cycle_free)))
}

fn cmd_degflow(args: DegflowArgs) -> Result<String, Failure> {
    let target = args.k as u64 + 1;
    if let Some(t) = args.target {
        if t != target {
            return Err(Failure::Core(Error::Precondition(format!(
                "with --k {} only the value-{target} decision is supported, not {t}",
                args.k
            ))));
        }
    }
    let net = load_network(&args.common.input)?;
    let witness = deg_flow_value_k_plus_1(&net, args.k)?;
    let achievable = witness.is_some();
    let mut json = json!({
        "k": args.k,
        "target": target,
        "achievable": achievable,
        "flow": witness.as_ref().map(Flow::to_json),
    });
    let mut text = format!("k {}\ntarget {target}\nachievable {achievable}\n", args.k);
    if let Some(flow) = &witness {
        text.push_str(&flow_text(flow));
    }
    if args.oracle {
        let value = oracle_deg_max_flow(&net, args.k, None, &oracle_budget(args.budget))?;
        let agrees = (value >= target) == achievable;
        json["oracle_value"] = json!(value);
        json["agrees"] = json!(agrees);
        text.push_str(&format!("oracle_value {value}\nagrees {agrees}\n"));
    }
    Ok(render(args.common.format, json, text))
}

fn cmd_strong2(args: CommonArgs) -> Result<String, Failure> {
    let net = load_network(&args.input)?;
    let (flow, counts) = two_arc_strong_max_flow_with_stats(&net)?;
    let (support, _) = flow.support(&net);
    let support_lambda = arc_connectivity(&support, net.source(), net.sink())?;
    let json = json!({
        "value": flow.value(),
        "flow": flow.to_json().flow,
        "support_lambda": support_lambda,
        "cut_arc_counts": counts,
    });
    let text = format!(
        "{}support_lambda {support_lambda}\ncut_arc_counts{}\n",
        flow_text(&flow),
        joined(&counts),
    );
    Ok(render(args.format, json, text))
}

fn cmd_psplit(args: PsplitArgs) -> Result<String, Failure> {
    let variant = split_variant(args.variant);
    let net = load_network(&args.common.input)?;
    let sol = approx_p_split(&net, args.p, variant)?;
    let mut json = json!({
        "p": args.p,
        "variant": variant_name(args.variant),
        "value": sol.flow.value(),
        "flow": sol.flow.to_json().flow,
        "paths": paths_json(&sol.paths),
        "p_used": sol.p_used,
        "nu_star": sol.nu_star,
        "i_star": sol.i_star,
    });
    let mut text = format!("value {}\np_used {}\n", sol.flow.value(), sol.p_used);
    if let (Some(nu), Some(i)) = (sol.nu_star, sol.i_star) {
        text.push_str(&format!("nu_star {nu}\ni_star {i}\n"));
    }
    text.push_str(&paths_text(&sol.paths));
    if args.oracle {
        let value = oracle_p_split(&net, args.p, variant, &oracle_budget(args.budget))?;
        json["oracle_value"] = json!(value);
        text.push_str(&format!("oracle_value {value}\n"));
    }
    Ok(render(args.common.format, json, text))
}

fn cmd_tricot(args: TricotArgs) -> Result<String, Failure> {
    let states = args.budget.unwrap_or_else(tricot::default_max_states);
    let net = load_network(&args.common.input)?;
    let sol = match args.variant {
        DisjointVariantArg::Vertex => tricot::tricot_dp_exact(&net, args.p, states)?,
        DisjointVariantArg::Arc => tricot::arc_disjoint_exact_acyclic(&net, args.p, states)?,
    };
    let json = json!({
        "p": args.p,
        "variant": disjoint_name(args.variant),
        "value": sol.flow.value(),
        "flow": sol.flow.to_json().flow,
        "paths": paths_json(&sol.paths),
        "p_used": sol.p_used,
    });
    let text = format!(
        "value {}\np_used {}\n{}",
        sol.flow.value(),
        sol.p_used,
        paths_text(&sol.paths),
    );
    Ok(render(args.common.format, json, text))
}

fn cmd_persist(cmd: PersistCmd) -> Result<String, Failure> {
    match cmd {
        PersistCmd::Eval { k, flow, budget, common } => {
            forbid_double_stdin(&common.input, &flow)?;
            let net = load_network(&common.input)?;
            let x = load_flow(&net, &flow)?;
            let states = budget.unwrap_or_else(persist::default_max_states);
            let report = persist::persistence_value(&net, &x, k, states)?;
            let json = json!({
                "k": k,
                "flow_value": report.flow.value(),
                "residual_value": report.residual_value,
                "worst_set": report.worst_set,
            });
            let text = format!(
                "flow_value {}\nresidual_value {}\nworst_set{}\n",
                report.flow.value(),
                report.residual_value,
                joined(&report.worst_set),
            );
            Ok(render(common.format, json, text))
        }
        PersistCmd::Best { k, budget, common } => {
            let net = load_network(&common.input)?;
            let states = budget.unwrap_or_else(persist::default_max_states);
            let (flow, report) = persist::best_persistent_max_flow_bruteforce(&net, k, states)?;
            let json = json!({
                "k": k,
                "value": flow.value(),
                "flow": flow.to_json().flow,
                "residual_value": report.residual_value,
                "worst_set": report.worst_set,
            });
            let text = format!(
                "{}residual_value {}\nworst_set{}\n",
                flow_text(&flow),
                report.residual_value,
                joined(&report.worst_set),
            );
            Ok(render(common.format, json, text))
        }
        PersistCmd::Threshold { threshold, budget, common } => {
            let net = load_network(&common.input)?;
            let states = budget.unwrap_or_else(persist::default_max_states);
            let (deletions, arcs) = persist::deletion_threshold(&net, threshold, states)?;
            let json = json!({
                "K": threshold,
                "deletions": deletions,
                "arcs": arcs,
            });
            let text = format!("deletions {deletions}\narcs{}\n", joined(&arcs));
            Ok(render(common.format, json, text))
        }
    }
}

fn cmd_gadget(kind: GadgetCmd) -> Result<String, Failure> {
    match kind {
        GadgetCmd::Lambda { lambda, dot } => {
            Ok(emit_gadget(gen_lambda_counterexample(lambda)?, dot))
        }
        GadgetCmd::SatDeg { cnf, k, dot } => {
            let f = load_cnf(&cnf)?;
            Ok(emit_gadget(gen_sat_deg_network(&f, k)?, dot))
        }
        GadgetCmd::B2Value9 { cnf, dot } => {
            let f = load_cnf(&cnf)?;
            Ok(emit_gadget(gen_b2sat_value9_network(&f)?, dot))
        }
        GadgetCmd::PsplitHard { p, family, negative, dot } => {
            let link = if negative {
                LinkageInstance::negative_toy()
            } else {
                LinkageInstance::positive_toy()
            };
            let family = match family {
                FamilyArg::Cap2 => SplitHardFamily::Cap2,
                FamilyArg::Cap3 => SplitHardFamily::Cap3,
            };
            Ok(emit_gadget(gen_psplit_hard(p, &link, family)?, dot))
        }
        GadgetCmd::VertexDisjointHard { cnf, dot } => {
            let f = load_cnf(&cnf)?;
            Ok(emit_gadget(gen_vertex_disjoint_hard(&f)?, dot))
        }
        GadgetCmd::SeparableHard { q, input, dot } => {
            let net = load_network(&input)?;
            Ok(emit_gadget(gen_separable_hard(&net, q)?, dot))
        }
        GadgetCmd::InoutTail { input, dot } => {
            let net = load_network(&input)?;
            Ok(emit_gadget(gen_inout_tail(&net)?, dot))
        }
        GadgetCmd::Random { seed, vertices, arcs, max_cap, acyclic, dot } => {
            let mut cfg = RandNetConfig::new(vertices, arcs, max_cap);
            if acyclic {
                cfg = cfg.acyclic();
            }
            let net = random_network(seed, &cfg);
            if dot {
                return Ok(net.to_dot(None));
            }
            let meta = json!({
                "seed": seed,
                "vertices": vertices,
                "arcs": arcs,
                "max_cap": max_cap,
                "acyclic": acyclic,
            });
            Ok(format!("{}# meta {meta}\n", net.to_file_string()))
        }
    }
}

fn cmd_oracle(problem: OracleCmd) -> Result<String, Failure> {
    match problem {
        OracleCmd::Degflow { k, k_in, budget, common } => {
            let net = load_network(&common.input)?;
            let value = oracle_deg_max_flow(&net, k, k_in, &oracle_budget(budget))?;
            Ok(render(common.format, json!({ "value": value }), format!("value {value}\n")))
        }
        OracleCmd::Psplit { p, variant, budget, common } => {
            let net = load_network(&common.input)?;
            let value = oracle_p_split(&net, p, split_variant(variant), &oracle_budget(budget))?;
            Ok(render(common.format, json!({ "value": value }), format!("value {value}\n")))
        }
        OracleCmd::Separable { q, mode, budget, common } => {
            let net = load_network(&common.input)?;
            let mode = match mode {
                DisjointVariantArg::Vertex => SeparableMode::Vertex,
                DisjointVariantArg::Arc => SeparableMode::Arc,
            };
            let value = oracle_q_separable(&net, q, mode, &oracle_budget(budget))?;
            Ok(render(common.format, json!({ "value": value }), format!("value {value}\n")))
        }
        OracleCmd::EnumerateMaxFlows { budget, common } => {
            let net = load_network(&common.input)?;
            let flows = enumerate_max_flows(&net, &oracle_budget(budget))?;
            let json = json!({
                "count": flows.len(),
                "flows": flows.iter().map(Flow::to_json).collect::<Vec<_>>(),
            });
            let mut text = format!("count {}\n", flows.len());
            for f in &flows {
                let entries: String = f
                    .arc_values()
                    .iter()
                    .enumerate()
                    .filter(|&(_, &x)| x > 0)
                    .map(|(a, &x)| format!(" {a}:{x}"))
                    .collect();
                text.push_str(&format!("flow value {}{entries}\n", f.value()));
            }
            Ok(render(common.format, json, text))
        }
        OracleCmd::Sat { cnf, budget, format } => {
            let f = load_cnf(&cnf)?;
            let satisfiable = sat_bruteforce(&f, &oracle_budget(budget))?;
            Ok(render(
                format,
                json!({ "satisfiable": satisfiable }),
                format!("satisfiable {satisfiable}\n"),
            ))
        }
    }
}

/// Failures split by exit code: I/O problems count as bad input (2), core
/// errors map per variant.
enum Failure {
    Io(String),
    Core(Error),
}

impl Failure {
    fn message(&self) -> String {
        match self {
            Failure::Io(msg) => msg.clone(),
            Failure::Core(err) => err.to_string(),
        }
    }

    fn exit_code(&self) -> i32 {
        match self {
            Failure::Io(_) => 2,
            Failure::Core(err) => match err {
                Error::Parse { .. } | Error::InvalidNetwork(_) | Error::InvalidFlow(_) => 2,
                Error::Budget(_) => 3,
                Error::Precondition(_) => 4,
                Error::Overflow(_) | Error::Internal(_) => 1,
            },
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Failure {
        Failure::Core(err)
    }
}

fn read_text(path: &str, what: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut buf = String::new();
        io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::Io(format!("reading {what} from stdin: {e}")))?;
        Ok(buf)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Io(format!("reading {what} {path}: {e}")))
    }
}

fn load_network(path: &str) -> Result<Network, Failure> {
    Ok(Network::parse(&read_text(path, "the network")?)?)
}

fn load_flow(net: &Network, path: &str) -> Result<Flow, Failure> {
    let text = read_text(path, "the flow")?;
    let json: FlowJson = serde_json::from_str(&text)
        .map_err(|e| Failure::Core(Error::InvalidFlow(format!("bad flow JSON: {e}"))))?;
    Ok(Flow::from_json(net, &json)?)
}

fn load_network_and_flow(args: &FlowInputArgs) -> Result<(Network, Flow), Failure> {
    if let Some(flow_path) = &args.flow {
        forbid_double_stdin(&args.common.input, flow_path)?;
    }
    let net = load_network(&args.common.input)?;
    let flow = match &args.flow {
        Some(path) => load_flow(&net, path)?,
        None => max_flow(&net),
    };
    Ok((net, flow))
}

fn load_cnf(path: &str) -> Result<CnfFormula, Failure> {
    Ok(CnfFormula::parse_dimacs(&read_text(path, "the formula")?)?)
}

fn forbid_double_stdin(network: &str, flow: &str) -> Result<(), Failure> {
    if network == "-" && flow == "-" {
        return Err(Failure::Io(
            "the network and the flow cannot both come from stdin; name at least one file".into(),
        ));
    }
    Ok(())
}

/// Brute-force budget: relaxed instance-size preset so generated gadget
/// instances pass the guard, with the state cap still enforced.
fn oracle_budget(states: Option<u64>) -> Budget {
    let budget = Budget::gadget();
    match states {
        Some(s) => budget.with_states(s),
        None => budget,
    }
}

fn render(format: Format, json: serde_json::Value, text: String) -> String {
    match format {
        Format::Json => format!("{json}\n"),
        Format::Text => text,
    }
}

fn emit_gadget(out: GadgetOutput, dot: bool) -> String {
    if dot {
        return out.network.to_dot(None);
    }
    // The metadata rides in a comment so the output stays parseable as a
    // plain network file.
    format!("{}# meta {}\n", out.network.to_file_string(), out.metadata_json())
}

fn split_variant(variant: PsplitVariantArg) -> SplitVariant {
    match variant {
        PsplitVariantArg::Any => SplitVariant::Unrestricted,
        PsplitVariantArg::Arc => SplitVariant::ArcDisjoint,
        PsplitVariantArg::Vertex => SplitVariant::VertexDisjoint,
    }
}

fn variant_name(variant: PsplitVariantArg) -> &'static str {
    match variant {
        PsplitVariantArg::Any => "any",
        PsplitVariantArg::Arc => "arc",
        PsplitVariantArg::Vertex => "vertex",
    }
}

fn disjoint_name(variant: DisjointVariantArg) -> &'static str {
    match variant {
        DisjointVariantArg::Vertex => "vertex",
        DisjointVariantArg::Arc => "arc",
    }
}

fn flow_text(flow: &Flow) -> String {
    let mut out = format!("value {}\n", flow.value());
    for (a, &x) in flow.arc_values().iter().enumerate() {
        if x > 0 {
            out.push_str(&format!("x {a} {x}\n"));
        }
    }
    out
}

fn paths_json(paths: &[PathFlow]) -> serde_json::Value {
    serde_json::Value::Array(
        paths
            .iter()
            .map(|p| {
                json!({
                    "vertices": labels(&p.vertices),
                    "arcs": p.arcs,
                    "value": p.value,
                })
            })
            .collect(),
    )
}

fn paths_text(paths: &[PathFlow]) -> String {
    let mut out = String::new();
    for p in paths {
        out.push_str(&format!("path{} value {}\n", joined(&labels(&p.vertices)), p.value));
    }
    out
}

/// 1-based vertex labels, as in the file format.
fn labels(vertices: &[usize]) -> Vec<usize> {
    vertices.iter().map(|&v| v + 1).collect()
}

fn joined<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(|x| format!(" {x}")).collect()
}

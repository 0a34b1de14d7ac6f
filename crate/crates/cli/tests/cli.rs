//! End-to-end checks of the `flownet` binary: exit codes, JSON shapes,
//! stdin/stdout pipelines and byte-level output determinism.

use std::io::Write;
use std::process::{Command, Output, Stdio};

const SINGLE_ARC: &str = "p flownet 2 1\ns 1\nt 2\na 1 2 5\n";
const PARALLEL_3_1: &str = "p flownet 2 2\ns 1\nt 2\na 1 2 3\na 1 2 1\n";
const CYCLIC: &str = "p flownet 3 3\ns 1\nt 3\na 1 2 1\na 2 1 1\na 2 3 1\n";
const DIAMOND: &str = "p flownet 4 4\ns 1\nt 4\na 1 2 2\na 1 3 1\na 2 4 2\na 3 4 1\n";
// One bottleneck arc into a fork of caps 1 and 4; arcs 1 and 2 lie on no
// minimum cut, so persistence may delete them.
const FORK: &str = "p flownet 3 3\ns 1\nt 3\na 1 2 2\na 2 3 1\na 2 3 4\n";

fn flownet(args: &[&str], stdin: &str) -> Output {
    flownet_env(args, stdin, &[])
}

fn flownet_env(args: &[&str], stdin: &str, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_flownet"));
    cmd.args(args).env_remove("FLOWNET_BUDGET_STATES");
    for (key, value) in env {
        cmd.env(key, value);
    }
    let mut child = cmd
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("the binary spawns");
    child
        .stdin
        .as_mut()
        .expect("stdin is piped")
        .write_all(stdin.as_bytes())
        .expect("stdin accepts the input");
    child.wait_with_output().expect("the binary runs to completion")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "expected success, stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON value")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("the process exits normally")
}

#[test]
fn maxflow_reports_value_5_on_the_single_arc() {
    let json = stdout_json(&flownet(&["maxflow"], SINGLE_ARC));
    assert_eq!(json["value"], 5);
    assert_eq!(json["flow"][0]["arc"], 0);
    assert_eq!(json["flow"][0]["x"], 5);
}

#[test]
fn maxflow_text_format_is_terse() {
    let out = flownet(&["maxflow", "--format", "text"], SINGLE_ARC);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "value 5\nx 0 5\n");
}

#[test]
fn identical_input_gives_byte_identical_output() {
    let first = flownet(&["maxflow"], DIAMOND);
    let second = flownet(&["maxflow"], DIAMOND);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn garbage_input_exits_2() {
    let out = flownet(&["maxflow"], "garbage\n");
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty());
}

#[test]
fn missing_file_exits_2() {
    let out = flownet(&["maxflow", "--input", "/nonexistent/net"], "");
    assert_eq!(code(&out), 2);
}

#[test]
fn unknown_flag_exits_2() {
    let out = flownet(&["maxflow", "--frobnicate"], SINGLE_ARC);
    assert_eq!(code(&out), 2);
}

#[test]
fn tricot_on_a_cyclic_network_exits_4() {
    let out = flownet(&["tricot", "--p", "1", "--variant", "vertex"], CYCLIC);
    assert_eq!(code(&out), 4);
}

#[test]
fn gadget_lambda_pipes_into_strong2_with_value_4() {
    let gen = flownet(&["gadget", "lambda", "--lambda", "3"], "");
    assert!(gen.status.success());
    let net_text = String::from_utf8(gen.stdout).expect("utf-8 output");
    assert!(net_text.contains("# meta "));
    let json = stdout_json(&flownet(&["strong2"], &net_text));
    assert_eq!(json["value"], 4);
    assert!(json["support_lambda"].as_u64().expect("a number") >= 2);
    let counts = json["cut_arc_counts"].as_array().expect("an array");
    assert_eq!(counts.last().expect("nonempty").as_u64(), Some(0));
}

#[test]
fn strong2_json_parses_as_a_flow() {
    let gen = flownet(&["gadget", "lambda", "--lambda", "3"], "");
    let net_text = String::from_utf8(gen.stdout).expect("utf-8 output");
    let json = stdout_json(&flownet(&["strong2"], &net_text));
    let net = flownet_core::Network::parse(&net_text).expect("the gadget emits a valid file");
    let parsed: flownet_core::netcore::FlowJson =
        serde_json::from_value(json).expect("the output matches the flow schema");
    let flow = flownet_core::Flow::from_json(&net, &parsed).expect("the flow validates");
    assert_eq!(flow.value(), 4);
}

#[test]
fn lambda_reports_the_designed_connectivity() {
    let gen = flownet(&["gadget", "lambda", "--lambda", "4"], "");
    let net_text = String::from_utf8(gen.stdout).expect("utf-8 output");
    let json = stdout_json(&flownet(&["lambda"], &net_text));
    assert_eq!(json["lambda"], 4);
}

#[test]
fn gadget_output_is_deterministic() {
    let first = flownet(&["gadget", "lambda", "--lambda", "5"], "");
    let second = flownet(&["gadget", "lambda", "--lambda", "5"], "");
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn mincut_matches_the_single_arc() {
    let json = stdout_json(&flownet(&["mincut"], SINGLE_ARC));
    assert_eq!(json["capacity"], 5);
    assert_eq!(json["arcs_across"], serde_json::json!([0]));
    assert_eq!(json["x_side"], serde_json::json!([1]));
}

#[test]
fn decompose_components_sum_to_the_value() {
    let json = stdout_json(&flownet(&["decompose"], DIAMOND));
    assert_eq!(json["value"], 3);
    let total: u64 = json["decomposition"]
        .as_array()
        .expect("an array")
        .iter()
        .filter(|c| c["kind"] == "path")
        .map(|c| c["value"].as_u64().expect("a number"))
        .sum();
    assert_eq!(total, 3);
}

#[test]
fn acyclify_round_trips_through_the_flow_validator() {
    let json = stdout_json(&flownet(&["acyclify"], DIAMOND));
    let net = flownet_core::Network::parse(DIAMOND).expect("a valid fixture");
    let parsed: flownet_core::netcore::FlowJson =
        serde_json::from_value(json).expect("the output matches the flow schema");
    let flow = flownet_core::Flow::from_json(&net, &parsed).expect("the flow validates");
    assert_eq!(flow.value(), 3);
}

#[test]
fn degflow_oracle_comparison_agrees() {
    let json = stdout_json(&flownet(&["degflow", "--k", "2", "--oracle"], DIAMOND));
    assert_eq!(json["achievable"], true);
    assert_eq!(json["agrees"], true);
    assert_eq!(json["flow"]["value"], 3);
}

#[test]
fn degflow_rejects_other_targets_with_exit_4() {
    let out = flownet(&["degflow", "--k", "2", "--target", "5"], DIAMOND);
    assert_eq!(code(&out), 4);
}

#[test]
fn psplit_reports_the_known_approximation_gap() {
    let json = stdout_json(&flownet(
        &["psplit", "--p", "2", "--variant", "any", "--oracle"],
        PARALLEL_3_1,
    ));
    assert_eq!(json["value"], 3);
    assert_eq!(json["oracle_value"], 4);
}

#[test]
fn tricot_p1_is_the_widest_path() {
    let json = stdout_json(&flownet(&["tricot", "--p", "1", "--variant", "vertex"], DIAMOND));
    assert_eq!(json["value"], 2);
    assert_eq!(json["paths"][0]["vertices"], serde_json::json!([1, 2, 4]));
}

#[test]
fn tricot_tiny_budget_exits_3() {
    let out = flownet(&["tricot", "--p", "2", "--variant", "vertex", "--budget", "1"], DIAMOND);
    assert_eq!(code(&out), 3);
}

#[test]
fn env_var_caps_the_oracle_budget() {
    let out = flownet_env(
        &["oracle", "enumerate-max-flows"],
        DIAMOND,
        &[("FLOWNET_BUDGET_STATES", "1")],
    );
    assert_eq!(code(&out), 3);
}

#[test]
fn budget_flag_overrides_the_env_var() {
    let out = flownet_env(
        &["oracle", "enumerate-max-flows", "--budget", "1000000"],
        DIAMOND,
        &[("FLOWNET_BUDGET_STATES", "1")],
    );
    let json = stdout_json(&out);
    assert_eq!(json["count"], 1);
}

#[test]
fn oracle_sat_answers_both_ways() {
    let sat = stdout_json(&flownet(&["oracle", "sat"], "p cnf 1 1\n1 1 1 0\n"));
    assert_eq!(sat["satisfiable"], true);
    let unsat = stdout_json(&flownet(&["oracle", "sat"], "p cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n"));
    assert_eq!(unsat["satisfiable"], false);
}

#[test]
fn gadget_sat_deg_pipes_into_the_degree_oracle() {
    let formula = "p cnf 2 1\nc one satisfiable clause\n1 2 2 0\n";
    let gen = flownet(&["gadget", "sat-deg", "--cnf", "-"], formula);
    assert!(
        gen.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&gen.stderr)
    );
    let net_text = String::from_utf8(gen.stdout).expect("utf-8 output");
    let meta_line = net_text
        .lines()
        .find_map(|l| l.strip_prefix("# meta "))
        .expect("the generator appends its metadata comment");
    let meta: serde_json::Value = serde_json::from_str(meta_line).expect("the metadata is JSON");
    let target = meta["metrics"]["target_value"].as_u64().expect("a target value");
    // The formula is satisfiable, so the degree-bounded optimum reaches
    // the construction's target exactly.
    let json = stdout_json(&flownet(&["oracle", "degflow", "--k", "2"], &net_text));
    assert_eq!(json["value"].as_u64(), Some(target));
}

#[test]
fn persist_eval_composes_with_maxflow_in_a_pipeline() {
    let dir = std::env::temp_dir().join("flownet-cli-tests");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join("fork.net");
    std::fs::write(&path, FORK).expect("fixture written");
    let path = path.to_str().expect("utf-8 path");

    let flow_out = flownet(&["maxflow", "--input", path], "");
    assert!(flow_out.status.success());
    let flow_json = String::from_utf8(flow_out.stdout).expect("utf-8 output");
    let json = stdout_json(&flownet(
        &["persist", "eval", "--k", "1", "--input", path],
        &flow_json,
    ));
    assert_eq!(json["flow_value"], 2);
    // Deleting the cap-4 fork arc leaves only the unit arc in the support.
    assert_eq!(json["residual_value"], 1);
    assert_eq!(json["worst_set"], serde_json::json!([2]));
}

#[test]
fn persist_eval_rejects_two_stdin_streams() {
    let out = flownet(&["persist", "eval", "--k", "1"], "");
    assert_eq!(code(&out), 2);
}

#[test]
fn persist_best_prefers_the_split_flow() {
    let json = stdout_json(&flownet(&["persist", "best", "--k", "1"], FORK));
    assert_eq!(json["value"], 2);
    assert_eq!(json["residual_value"], 1);
}

#[test]
fn persist_threshold_counts_the_cheapest_deletion() {
    let json = stdout_json(&flownet(&["persist", "threshold", "--K", "1"], FORK));
    assert_eq!(json["deletions"], 1);
    assert_eq!(json["arcs"], serde_json::json!([0]));
}

#[test]
fn dot_export_renders_the_flow() {
    let out = flownet(&["maxflow", "--dot"], SINGLE_ARC);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).expect("utf-8 output");
    assert!(text.starts_with("digraph"));
    assert!(text.contains("5/5"));
}

#[test]
fn gadget_random_is_seed_deterministic_and_well_formed() {
    let args = [
        "gadget", "random", "--seed", "7", "--vertices", "6", "--arcs", "9", "--max-cap", "4",
    ];
    let first = flownet(&args, "");
    let second = flownet(&args, "");
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let net_text = String::from_utf8(first.stdout).expect("utf-8 output");
    let out = flownet(&["maxflow"], &net_text);
    assert!(out.status.success());
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const PATH_GRAPH: &str = r#"{"family":"path_multigraph","l":8,"k":4}"#;

fn arbor(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arbor"))
        .args(args)
        .current_dir(dir)
        .env_remove("ARBOR_SEED")
        .output()
        .expect("binary runs")
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).expect("valid JSON")
}

#[test]
fn no_subcommand_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(arbor(dir.path(), &[]).status.code(), Some(2));
}

#[test]
fn eps_outside_unit_interval_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    for bad in ["0", "-0.5", "1.5", "abc"] {
        let out = arbor(dir.path(), &["orient", "--gen", PATH_GRAPH, "--eps", bad]);
        assert_eq!(out.status.code(), Some(2), "eps {bad}");
    }
}

#[test]
fn both_graph_sources_rejected() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("g.el"), "2 1\n0 1\n").unwrap();
    let out = arbor(dir.path(), &["orient", "--in", "g.el", "--gen", PATH_GRAPH, "--eps", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_family_parameter_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = arbor(dir.path(), &["gen", "--family", "path_multigraph", "--l", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gen_writes_edge_list() {
    let dir = tempfile::tempdir().unwrap();
    let out = arbor(dir.path(), &["gen", "--family", "path_multigraph", "--l", "3", "--k", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, ["3 4", "0 1", "0 1", "1 2", "1 2"]);
}

#[test]
fn decompose_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let gen = arbor(dir.path(), &["gen", "--family", "path_multigraph", "--l", "8", "--k", "4", "-o", "g.el"]);
    assert!(gen.status.success());
    let dec = arbor(dir.path(), &["--seed", "2", "decompose", "--in", "g.el", "--eps", "1", "-o", "d.json"]);
    assert!(dec.status.success(), "{}", String::from_utf8_lossy(&dec.stderr));
    let result = json(&fs::read(dir.path().join("d.json")).unwrap());
    assert_eq!(result["command"], "decompose");
    assert_eq!(result["report"]["ok"], true);
    let colors = result["colors"].as_u64().unwrap();
    assert!(colors >= 4);

    let k = colors.to_string();
    let ok = arbor(dir.path(), &["verify", "--in", "g.el", "--result", "d.json", "--k", &k]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok.stdout)["ok"], true);

    let fewer = (colors - 1).to_string();
    let too_few = arbor(dir.path(), &["verify", "--in", "g.el", "--result", "d.json", "--k", &fewer]);
    assert_eq!(too_few.status.code(), Some(1));
    assert_eq!(json(&too_few.stdout)["ok"], false);
}

#[test]
fn infeasible_exhaustive_request_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = arbor(
        dir.path(),
        &["decompose", "--gen", r#"{"family":"gnp","n":3,"p":1.0}"#, "--eps", "1", "--algo", "exhaustive", "--colors", "2", "--max-diameter", "1"],
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn orientation_verifies_against_its_outdegree() {
    let dir = tempfile::tempdir().unwrap();
    let out = arbor(dir.path(), &["--seed", "5", "orient", "--gen", PATH_GRAPH, "--eps", "1", "-o", "o.json", "--ledger", "l.json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("l.json").exists());
    fs::write(dir.path().join("g.el"), arbor(dir.path(), &["gen", "--family", "path_multigraph", "--l", "8", "--k", "4"]).stdout).unwrap();
    let check = arbor(dir.path(), &["verify", "--in", "g.el", "--result", "o.json", "--kind", "orientation", "--k", "8"]);
    assert_eq!(check.status.code(), Some(0), "{}", String::from_utf8_lossy(&check.stdout));
}

#[test]
fn seed_env_matches_flag() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["star", "--gen", r#"{"family":"gnp","n":40,"p":0.2,"seed":1}"#, "--eps", "0.5", "--relaxed"];
    let by_flag = arbor(dir.path(), &[&["--seed", "9"], &args[..]].concat());
    let by_env = Command::new(env!("CARGO_BIN_EXE_arbor")).args(args).current_dir(dir.path()).env("ARBOR_SEED", "9").output().unwrap();
    assert!(by_flag.status.success());
    assert_eq!(by_flag.stdout, by_env.stdout);
}

#[test]
fn saved_plan_replays_identically() {
    let dir = tempfile::tempdir().unwrap();
    let first = arbor(dir.path(), &["--seed", "3", "--save-plan", "p.json", "oracle", "--gen", PATH_GRAPH]);
    assert!(first.status.success());
    let plan = json(&fs::read(dir.path().join("p.json")).unwrap());
    assert_eq!(plan["seed"], 3);
    let replay = arbor(dir.path(), &["--plan", "p.json"]);
    assert!(replay.status.success());
    assert_eq!(first.stdout, replay.stdout);
}

#[test]
fn bench_csv_has_one_row_per_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = arbor(dir.path(), &["bench", "--sizes", "64,128", "--eps", "1,0.5", "--k", "6", "--algos", "orient", "-o", "b.csv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("b.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,eps,algorithm,colors,max_diameter,rounds,wall_time_ms"));
    assert_eq!(lines.count(), 4);
}

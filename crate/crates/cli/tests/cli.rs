use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use container_lab::containers::{container_families, ContainerParams};
use container_lab::enumeration::{count_intersecting, maximal_profile};
use container_lab::isoperimetry::{verify_isoperimetry, IsoMode};
use container_lab::report::to_json;
use container_lab::{ExplicitGraph, LayerGraph, LayerGraphParams};
use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_container-lab"));
    cmd.env_remove("CONTAINER_LAB_SEED");
    cmd
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn count_matches_the_library() {
    let v = json(&["count", "4", "2"]);
    assert_eq!(v["total"], "27");
    let v = json(&["count", "5", "2"]);
    assert_eq!((v["total"].as_str(), v["nontrivial"].as_str()), (Some("76"), Some("10")));
    let out = run(&["count", "6", "3", "--workers", "2"]);
    assert_eq!(stdout(&out), to_json(&count_intersecting(6, 3, 1).unwrap()).unwrap());
}

#[test]
fn count_csv_has_field_value_rows() {
    let out = run(&["count", "5", "2", "--format", "csv"]);
    let text = stdout(&out);
    assert!(text.starts_with("field,value\n"));
    assert!(text.contains("total,76\n"));
    assert!(text.contains("nontrivial,10\n"));
}

#[test]
fn count_profile_attaches_maximal_families() {
    let v = json(&["count", "5", "2", "--profile"]);
    assert_eq!(v["maximal_profile"]["maximal_total"], 15);
}

#[test]
fn maximal_matches_the_library() {
    let out = run(&["maximal", "6", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), to_json(&maximal_profile(6, 2).unwrap()).unwrap());
    let csv = stdout(&run(&["maximal", "5", "2", "--format", "csv"]));
    assert_eq!(csv, "ell,count\n1,10\n");
}

#[test]
fn phi_on_the_triangle() {
    let file = data("triangle_5_2.txt");
    let v = json(&["phi", file.to_str().unwrap()]);
    assert_eq!(v["f"], 3);
    assert_eq!(v["size_a"], 1);
    assert_eq!(v["size_b"], 2);
    assert_eq!(v["independent"], true);
    assert_eq!(v["a"], serde_json::json!([[3, 4]]));

    let inline = json(&["phi", "--family", "1,2;1,3;2,3", "--n", "5", "--k", "2"]);
    assert_eq!(inline, v);

    let mut child = bin()
        .arg("phi")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    {
        use std::io::Write;
        let text = std::fs::read_to_string(&file).unwrap();
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    let piped: Value = serde_json::from_slice(&child.wait_with_output().unwrap().stdout).unwrap();
    assert_eq!(piped, v);
}

#[test]
fn phi_rejects_bad_families() {
    let out = run(&["phi", "--family", "1,2;3,4", "--n", "5", "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["phi", "--family", "1,2;1,9", "--n", "5", "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn iso_matches_the_library() {
    for (args, (n, k, r), mode) in [
        (["iso", "5", "2", "1", "--mode", "exhaustive"], (5, 2, 1), IsoMode::Exhaustive),
        (["iso", "7", "2", "3", "--mode", "colex"], (7, 2, 3), IsoMode::Colex),
    ] {
        let expected = verify_isoperimetry(LayerGraphParams::new(n, k, r).unwrap(), mode, 1).unwrap();
        assert_eq!(stdout(&run(&args)), to_json(&expected).unwrap());
    }
}

#[test]
fn containers_on_layers_match_the_library() {
    let v = json(&["containers", "--layers", "5", "2", "1", "--seed", "3"]);
    let graph = LayerGraph::new(LayerGraphParams::new(5, 2, 1).unwrap()).unwrap();
    let families = container_families(&graph, ContainerParams::new(1, 1).with_seed(3), 1).unwrap();
    let expected: Value = serde_json::from_str(&to_json(&families).unwrap()).unwrap();
    assert_eq!(v["families"], expected);
    assert_eq!(v["all_within_bound"], true);
    assert_eq!((v["q"].as_u64(), v["s"].as_u64()), (Some(2), Some(3)));
}

#[test]
fn containers_on_an_edge_list() {
    let file = data("six_cycle.txt");
    let v = json(&["containers", "--graph", file.to_str().unwrap(), "--a", "1", "--g", "2", "--provenance"]);
    let families = v["families"].as_array().unwrap();
    assert_eq!(families.len(), 1);
    assert_eq!(families[0]["sets"], 3);
    assert!(families[0]["distinct_certificates"].as_u64().unwrap() <= 3);
    let provenance = v["provenance"].as_array().unwrap();
    assert_eq!(provenance.len(), 3);
    let first = &provenance[0]["certificate"];
    for key in ["s", "f", "derived_seed", "phi_approximation", "p1", "p2"] {
        assert!(first.get(key).is_some(), "missing {key}");
    }
    for key in ["t0", "t0_prime", "t1", "omega", "f_prime"] {
        assert!(first["phi_approximation"].get(key).is_some(), "missing {key}");
    }
    let graph = ExplicitGraph::parse(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(graph.to_edge_list().lines().count(), 7);
}

#[test]
fn seed_falls_back_to_the_environment() {
    let with_flag = stdout(&run(&["containers", "--layers", "6", "2", "2", "--seed", "41", "--provenance"]));
    let from_env = bin()
        .args(["containers", "--layers", "6", "2", "2", "--provenance"])
        .env("CONTAINER_LAB_SEED", "41")
        .output()
        .unwrap();
    assert_eq!(stdout(&from_env), with_flag);
}

#[test]
fn container_parameter_errors() {
    let out = run(&["containers", "--layers", "5", "2", "1", "--psi", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["containers", "--layers", "5", "2", "1", "--a", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["containers"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn caps_refuse_with_exit_3() {
    assert_eq!(run(&["count", "9", "3"]).status.code(), Some(3));
    assert_eq!(run(&["iso", "8", "2", "4", "--mode", "exhaustive"]).status.code(), Some(3));
    assert_eq!(run(&["containers", "--layers", "8", "2", "4"]).status.code(), Some(3));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["count", "5"]).status.code(), Some(2));
    assert_eq!(run(&["count", "5", "2", "--workers", "0"]).status.code(), Some(2));
    assert_eq!(run(&["verify-all", "--only", "12"]).status.code(), Some(2));
}

#[test]
fn output_is_identical_across_worker_counts() {
    for args in [
        vec!["count", "6", "3"],
        vec!["iso", "5", "2", "1"],
        vec!["containers", "--layers", "6", "2", "2", "--phi", "3", "--psi", "2", "--seed", "9"],
    ] {
        let outputs: Vec<String> = ["1", "2", "8"]
            .iter()
            .map(|w| {
                let mut a = args.clone();
                a.extend(["--workers", w]);
                stdout(&run(&a))
            })
            .collect();
        assert!(outputs.windows(2).all(|w| w[0] == w[1]), "{args:?}");
    }
}

#[test]
fn timing_only_when_asked() {
    let plain = json(&["count", "4", "2"]);
    assert!(plain.get("timing").is_none());
    let timed = json(&["count", "4", "2", "--timing", "--workers", "3"]);
    assert_eq!(timed["timing"]["workers"], 3);
}

#[test]
fn output_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("count.json");
    let out = run(&["count", "4", "2", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&run(&["count", "4", "2"])));
    let missing = dir.path().join("no/such/dir/x.json");
    assert_eq!(run(&["count", "4", "2", "--output", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn verify_all_subset() {
    let v = json(&["verify-all", "--tier", "desk", "--only", "1", "--only", "8"]);
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 2);
}

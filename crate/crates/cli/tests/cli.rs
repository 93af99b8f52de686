use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use smlat::lattice::{stable_under_all, worker_optimal_of};
use smlat::parse_instance;

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name);
    p.to_string_lossy().into_owned()
}

fn smlat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smlat"))
        .args(args)
        .env_remove("SMLAT_ORACLE_CAP")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = smlat(&full);
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), v)
}

fn witness<'a>(report: &'a Value, name: &str) -> Option<&'a str> {
    report["witnesses"]
        .as_array()?
        .iter()
        .find(|w| w["name"] == name)
        .and_then(|w| w["value"].as_str())
}

fn temp_file(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("smlat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn without_timings(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timings");
    v
}

#[test]
fn paper_examples_pass() {
    let (code, r) = json(&["paper-examples"]);
    assert_eq!(code, 0);
    let verdicts = r["verdicts"].as_array().unwrap();
    assert!(verdicts.len() > 40);
    assert!(verdicts.iter().all(|v| v["passed"] == true));
    let (_, again) = json(&["paper-examples"]);
    assert_eq!(without_timings(r), without_timings(again));
}

#[test]
fn intersect_worker_opt_matches_the_oracle() {
    let (a, b) = (fixture("a5b.txt"), fixture("b5b.txt"));
    let (code, r) = json(&["intersect", "--worker-opt", &a, &b]);
    assert_eq!(code, 0);
    let family: Vec<_> = [&a, &b]
        .iter()
        .map(|p| parse_instance(&std::fs::read_to_string(p).unwrap()).unwrap())
        .collect();
    let common = stable_under_all(&family, 8).unwrap();
    let want = worker_optimal_of(&family[0], &common).unwrap();
    assert_eq!(
        witness(&r, "worker-optimal"),
        Some(want.to_string().as_str())
    );
}

#[test]
fn intersect_modes() {
    let (a, b) = (fixture("a5a.txt"), fixture("b5a.txt"));
    for mode in ["--firm-opt", "--enumerate", "--poset"] {
        let out = smlat(&["intersect", mode, &a, &b]);
        assert_eq!(out.status.code(), Some(0), "{mode}");
    }
    // modes are exclusive and one is required
    assert_eq!(smlat(&["intersect", &a, &b]).status.code(), Some(2));
    assert_eq!(
        smlat(&["intersect", "--poset", "--enumerate", &a, &b])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn enumerate_identity_instance_gives_one_matching() {
    let p = temp_file(
        "identity.txt",
        "n 3\nw 1: 1 2 3\nw 2: 1 2 3\nw 3: 1 2 3\nf 1: 1 2 3\nf 2: 1 2 3\nf 3: 1 2 3\n",
    );
    let (code, r) = json(&["enumerate", &p]);
    assert_eq!(code, 0);
    let listed: Vec<_> = r["witnesses"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|w| w["name"].as_str().unwrap().starts_with("stable"))
        .collect();
    assert_eq!(listed.len(), 1);
    assert_eq!(listed[0]["value"], "{1a, 2b, 3c}");
}

#[test]
fn poset_export_has_classes() {
    let out = smlat(&["enumerate", "--poset", &fixture("a6.txt")]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("class ").count(), 3);
    assert_eq!(
        smlat(&["poset", &fixture("a6.txt")]).stdout,
        smlat(&["enumerate", "--poset", &fixture("a6.txt")]).stdout
    );
}

#[test]
fn check_reports_blocking_pairs() {
    let out = smlat(&["check", &fixture("b4.txt"), "--matching", "1a 2b 3d 4c"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("(4, a)"));
    assert_eq!(
        smlat(&["check", &fixture("a4.txt"), "--matching", "M: 1 2 4 3"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn lp_rounding_agrees_on_the_one_one_pair() {
    let (code, r) = json(&[
        "lp",
        &fixture("a5b.txt"),
        &fixture("b5b.txt"),
        "--round-theta",
        "1/2",
    ]);
    assert_eq!(code, 0);
    assert_eq!(witness(&r, "under a5b"), witness(&r, "under b5b"));
    assert!(witness(&r, "under a5b").is_some());
}

#[test]
fn lp_rejects_a_boundary_theta() {
    assert_eq!(
        smlat(&["lp", &fixture("a4.txt"), "--round-theta", "1/1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        smlat(&["lp", &fixture("a4.txt"), "--round-theta", "half"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn fuzz_is_deterministic_and_passes() {
    let args = [
        "fuzz", "--n", "4", "--trials", "30", "--pq", "1,2", "--seed", "7",
    ];
    let (code, a) = json(&args);
    let (_, b) = json(&args);
    assert_eq!(code, 0);
    assert_eq!(without_timings(a), without_timings(b));
}

#[test]
fn fuzz_search_rediscovers_a_non_sublattice() {
    let (code, r) = json(&[
        "fuzz", "--n", "4", "--trials", "200", "--pq", "2,2", "--seed", "2", "--search",
    ]);
    assert_eq!(code, 0);
    let found = r["findings"]
        .as_array()
        .unwrap()
        .iter()
        .any(|f| f["kind"] == "not a sublattice");
    assert!(found);
}

#[test]
fn usage_and_input_errors_exit_2() {
    assert_eq!(
        smlat(&["fuzz", "--n", "4", "--trials", "1", "--pq", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        smlat(&["check", "/nonexistent/instance.txt"]).status.code(),
        Some(2)
    );
    let bad = temp_file("bad.txt", "n 2\nw 1: 1 1\nw 2: 1 2\nf 1: 1 2\nf 2: 1 2\n");
    assert_eq!(smlat(&["check", &bad]).status.code(), Some(2));
    assert_eq!(smlat(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn oracle_cap_comes_from_the_environment() {
    let run = |cap: &str| {
        Command::new(env!("CARGO_BIN_EXE_smlat"))
            .args(["fuzz", "--n", "4", "--trials", "1", "--pq", "0,1"])
            .env("SMLAT_ORACLE_CAP", cap)
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(run("3"), Some(2));
    assert_eq!(run("4"), Some(0));
}

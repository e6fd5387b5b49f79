use std::process::{Command, Output};

use raag_cli::report::Report;

fn raag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_raag")).args(args).output().expect("binary runs")
}

fn json_report(args: &[&str]) -> Report {
    let mut full = args.to_vec();
    full.push("--json");
    let out = raag(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid report")
}

#[test]
fn fork_principal_rank_is_eight() {
    let report = json_report(&["rank", "--graph", "fixture:FORK", "--set", "L"]);
    assert_eq!(report.results["value"], 8);
    assert_eq!(report.results["vcd_lower"], 8);
    assert_eq!(report.results["vcd_upper"], 10);
    assert_eq!(report.results["witness"].as_array().unwrap().len(), 8);
}

#[test]
fn triangle_has_no_partitions() {
    let report = json_report(&["rank", "--graph", "fixture:TRIANGLE", "--set", "V"]);
    assert_eq!(report.results["value"], 0);
    let text = String::from_utf8(raag(&["rank", "--graph", "fixture:TRIANGLE", "--set", "V"]).stdout).unwrap();
    assert!(text.contains("value 0"));
}

#[test]
fn explicit_vertex_sets() {
    let report = json_report(&["rank", "--graph", "fixture:SIMPLETREE", "--set", "v0,a1,a2", "--witness"]);
    assert_eq!(report.results["value"], 3);
}

#[test]
fn verify_suite_passes() {
    let out = raag(&["verify", "--suite", "paper"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 13);
    assert!(!text.contains("FAIL"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(raag(&["rank", "--graph", "fixture:FORK", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(raag(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(raag(&["rank"]).status.code(), Some(2));
    assert_eq!(raag(&["rank", "--graph", "fixture:NOPE"]).status.code(), Some(2));
    assert_eq!(raag(&["rank", "--graph", "fixture:FORK", "--set", "zz"]).status.code(), Some(2));
    assert_eq!(raag(&["rank", "--graph", "fixture:FORK", "--mode", "medium"]).status.code(), Some(2));
    assert_eq!(raag(&["--help"]).status.code(), Some(0));
}

#[test]
fn json_is_byte_identical_across_runs() {
    for args in [
        &["rank", "--graph", "fixture:DIAMONDS(2)", "--json"][..],
        &["analyze", "--graph", "fixture:EX1", "--json"],
        &["spine", "--graph", "fixture:SIMPLETREE", "--collapse", "--json"],
    ] {
        let (a, b) = (raag(args), raag(args));
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn reports_round_trip() {
    for args in [
        &["analyze", "--graph", "fixture:FORK"][..],
        &["partitions", "--graph", "fixture:PATH3"],
        &["abelian", "--graph", "fixture:SIMPLETREE", "--timing"],
        &["commute", "--graph", "fixture:PATH3", "--all"],
    ] {
        let report = json_report(args);
        let again: Report = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(again, report);
        assert_eq!(report.elapsed_ms.is_some(), args.contains(&"--timing"));
    }
}

#[test]
fn graph_files_are_read() {
    let dir = std::env::temp_dir().join(format!("raag-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("p4.txt");
    std::fs::write(&path, "# a path\nvertices: a b c d\nedges: a-b b-c c-d\n").unwrap();
    let arg = format!("file:{}", path.display());
    let report = json_report(&["partitions", "--graph", &arg]);
    assert_eq!(report.graph.as_ref().unwrap().vertices, 4);
    assert!(report.results["count"].as_u64().unwrap() > 0);
    std::fs::write(&path, "vertices: a b\nedges: a-z\n").unwrap();
    assert_eq!(raag(&["analyze", "--graph", &arg]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn fixtures_with_the_same_graph_hash_equally() {
    let a = json_report(&["analyze", "--graph", "fixture:EDGELESS(3)"]);
    let b = json_report(&["analyze", "--graph", "fixture:edgeless(3)"]);
    assert_eq!(a.graph.unwrap().sha256, b.graph.unwrap().sha256);
}

#[test]
fn single_commute_pair() {
    let report = json_report(&[
        "commute",
        "--graph",
        "fixture:EDGELESS(3)",
        "--left",
        "{a b | a^-1 b^-1 c c^-1 | *}",
        "--left-mult",
        "a",
        "--right",
        "{b c | b^-1 c^-1 a a^-1 | *}",
        "--right-mult",
        "c",
    ]);
    assert_eq!(report.results["pair"]["predicate"], report.results["pair"]["oracle"]);
    let bad = raag(&["commute", "--graph", "fixture:EDGELESS(3)", "--left", "{a b | a^-1 b^-1 c c^-1 | *}"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn spine_census_and_dot() {
    let report = json_report(&["spine", "--graph", "fixture:SIMPLETREE", "--census"]);
    assert_eq!(report.results["census"], serde_json::json!([3825, 15108, 24260, 20192, 9136, 2112, 192]));
    let dot = String::from_utf8(raag(&["spine", "--graph", "fixture:PATH3", "--dot"]).stdout).unwrap();
    assert!(dot.contains("digraph star"));
    let collapse = json_report(&["spine", "--graph", "fixture:SIMPLETREE", "--collapse"]);
    assert_eq!(collapse.results["collapse"]["residual_dimension"], 5);
    // Not barbed, so the pass refuses to run.
    assert_eq!(raag(&["spine", "--graph", "fixture:NONBARBED", "--collapse"]).status.code(), Some(2));
}

#[test]
fn abelian_generators_verify() {
    let report = json_report(&["abelian", "--graph", "fixture:FORK"]);
    assert_eq!(report.results["rank"], 8);
    assert_eq!(report.results["verdict"]["status"], "pass");
}

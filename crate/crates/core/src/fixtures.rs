//! Built-in example graphs and a seeded random graph generator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{GraphError, SimplicialGraph};

fn build(names: &[&str], edges: &[&str]) -> SimplicialGraph {
    SimplicialGraph::from_named_edges(names, edges).expect("fixture graph is well formed")
}

/// `n` isolated vertices named `a`, `b`, `c`, ...
pub fn edgeless(n: usize) -> SimplicialGraph {
    let names: Vec<String> = (0..n)
        .map(|i| if n <= 26 { ((b'a' + i as u8) as char).to_string() } else { format!("v{i}") })
        .collect();
    SimplicialGraph::new(names, &[]).expect("edgeless graph")
}

/// The path `a - b - c`.
pub fn path3() -> SimplicialGraph {
    build(&["a", "b", "c"], &["a-b", "b-c"])
}

pub fn triangle() -> SimplicialGraph {
    build(&["a", "b", "c"], &["a-b", "b-c", "a-c"])
}

/// A vertex `m` with a four-vertex link, plus `u` and an edge `v1-v2`
/// hanging off the link.
pub fn ex1() -> SimplicialGraph {
    build(
        &["m", "x1", "x2", "x3", "x4", "u", "v1", "v2"],
        &["m-x1", "m-x2", "m-x3", "m-x4", "x1-x4", "x1-u", "x2-u", "x4-v1", "x3-v2", "v1-v2"],
    )
}

/// A chain of `d` squares `c(i-1) - a(i), b(i) - c(i)` glued at the `c` vertices.
pub fn diamonds(d: usize) -> SimplicialGraph {
    let mut names = vec!["c0".to_string()];
    let mut edges = Vec::new();
    for i in 1..=d {
        let base = names.len();
        names.push(format!("a{i}"));
        names.push(format!("b{i}"));
        names.push(format!("c{i}"));
        let prev = if i == 1 { 0 } else { base - 1 };
        edges.extend([(prev, base), (base, base + 2), (prev, base + 1), (base + 1, base + 2)]);
    }
    SimplicialGraph::new(names, &edges).expect("diamond chain")
}

/// `v0 - v1` with three branches `v1 - ai - bi`.
pub fn fork() -> SimplicialGraph {
    build(
        &["v0", "v1", "a1", "a2", "a3", "b1", "b2", "b3"],
        &["v0-v1", "v1-a1", "v1-a2", "v1-a3", "a1-b1", "a2-b2", "a3-b3"],
    )
}

/// `v0 - v1` with two branches `v1 - ai - bi`.
pub fn simple_tree() -> SimplicialGraph {
    build(
        &["v0", "v1", "a1", "a2", "b1", "b2"],
        &["v0-v1", "v1-a1", "a1-b1", "v1-a2", "a2-b2"],
    )
}

/// Two leaves `u`, `v` on `w`, plus a path `w - p - q`.
pub fn non_barbed() -> SimplicialGraph {
    build(&["w", "u", "v", "p", "q"], &["w-u", "w-v", "w-p", "p-q"])
}

/// Resolves a fixture name such as `FORK` or `EDGELESS(4)` (case-insensitive).
pub fn load_fixture(name: &str) -> Result<SimplicialGraph, GraphError> {
    let upper = name.trim().to_ascii_uppercase();
    let param = |prefix: &str| -> Option<usize> {
        upper.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?.trim().parse().ok()
    };
    if let Some(n) = param("EDGELESS") {
        if n > crate::letter::MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        return Ok(edgeless(n));
    }
    if let Some(d) = param("DIAMONDS") {
        if 3 * d + 1 > crate::letter::MAX_VERTICES {
            return Err(GraphError::TooManyVertices(3 * d + 1));
        }
        return Ok(diamonds(d));
    }
    match upper.as_str() {
        "PATH3" => Ok(path3()),
        "TRIANGLE" => Ok(triangle()),
        "EX1" => Ok(ex1()),
        "FORK" => Ok(fork()),
        "SIMPLETREE" => Ok(simple_tree()),
        "NONBARBED" => Ok(non_barbed()),
        _ => Err(GraphError::UnknownFixture(name.to_string())),
    }
}

/// The named fixtures at their default sizes.
pub fn all_fixtures() -> Vec<(&'static str, SimplicialGraph)> {
    vec![
        ("EDGELESS(2)", edgeless(2)),
        ("EDGELESS(3)", edgeless(3)),
        ("EDGELESS(4)", edgeless(4)),
        ("PATH3", path3()),
        ("TRIANGLE", triangle()),
        ("EX1", ex1()),
        ("DIAMONDS(2)", diamonds(2)),
        ("FORK", fork()),
        ("SIMPLETREE", simple_tree()),
        ("NONBARBED", non_barbed()),
    ]
}

/// An Erdős–Rényi graph on `n` vertices named `v0..`, reproducible from `seed`.
pub fn random_graph(n: usize, edge_probability: f64, seed: u64) -> SimplicialGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(edge_probability) {
                edges.push((u, v));
            }
        }
    }
    SimplicialGraph::new((0..n).map(|i| format!("v{i}")), &edges).expect("random graph")
}

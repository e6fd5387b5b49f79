//! wasm-bindgen bindings for the browser demo in `www/`.
//!
//! Each export takes the graph as text and returns a JSON string. The
//! `*_json` functions hold the logic so they can be tested natively.

use raag_core::partition::parse_partition;
use raag_core::whitehead::{outer_commute_oracle, outer_commute_predicate};
use raag_core::*;
use serde_json::{json, Value};
use thiserror::Error;
use wasm_bindgen::prelude::*;

/// Searches in the browser stop well before they freeze the tab.
const DEMO_BUDGET: u64 = 2_000_000;
const COMMUTE_BOUND: usize = 8;

#[derive(Debug, Error)]
pub enum DemoError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Whitehead(#[from] WhiteheadError),
    #[error(transparent)]
    Rank(#[from] RankError),
    #[error("{0}")]
    Input(String),
}

fn names(g: &SimplicialGraph, set: VertexSet) -> Vec<&str> {
    set.iter().map(|v| g.name(v)).collect()
}

pub fn fixture_text(name: &str) -> Result<String, DemoError> {
    Ok(fixtures::load_fixture(name)?.to_text())
}

pub fn analyze_json(graph: &str) -> Result<String, DemoError> {
    let g = parse_graph(graph)?;
    let rel = g.relations();
    let vertices: Vec<Value> = g
        .vertices()
        .map(|v| {
            json!({
                "name": g.name(v),
                "link": names(&g, g.link(v)),
                "principal": rel.is_principal(v),
                "inseparable_sets": g.inseparable_sets_of_vertex(v).iter().map(|s| g.format_letters(*s)).collect::<Vec<_>>(),
                "m_single": m_single_closed_form(&g, v),
            })
        })
        .collect();
    let out = json!({
        "vertices": vertices,
        "principal": names(&g, rel.principal),
        "barbed": g.is_barbed(),
        "condition_holds": condition_holds(&g),
        "partitions": enumerate_partitions(&g, g.all_vertices()).iter().map(|p| p.display(&g).to_string()).collect::<Vec<_>>(),
    });
    Ok(out.to_string())
}

/// `set` is `V`, `L` or comma-separated vertex names.
pub fn rank_json(graph: &str, set: &str, mode: &str) -> Result<String, DemoError> {
    let g = parse_graph(graph)?;
    let mode: CompatMode = mode.parse().map_err(DemoError::Input)?;
    let within = match set.trim() {
        "V" | "" => g.all_vertices(),
        "L" => g.relations().principal,
        list => list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| g.vertex(s))
            .collect::<Result<VertexSet, _>>()?,
    };
    let report = max_compatible(&g, within, mode, DEMO_BUDGET)?;
    let out = json!({
        "set": names(&g, within),
        "mode": mode.to_string(),
        "value": report.value,
        "witness": report.witness.partitions().iter().map(|p| p.display(&g).to_string()).collect::<Vec<_>>(),
    });
    Ok(out.to_string())
}

fn auto(g: &SimplicialGraph, part: &str, mult: &str) -> Result<WhiteheadAuto, DemoError> {
    let p = parse_partition(g, part)?;
    Ok(WhiteheadAuto::new(p, g.parse_letter(mult.trim())?)?)
}

/// Compares the partition criterion for commuting outer classes with the
/// direct commutator computation.
pub fn commute_json(graph: &str, left: &str, left_mult: &str, right: &str, right_mult: &str) -> Result<String, DemoError> {
    let g = parse_graph(graph)?;
    let (a, b) = (auto(&g, left, left_mult)?, auto(&g, right, right_mult)?);
    let predicate = outer_commute_predicate(&g, &a, &b);
    let oracle = outer_commute_oracle(&g, &a, &b, COMMUTE_BOUND)?;
    let images = |w: &WhiteheadAuto| -> Vec<String> {
        let f = w.to_generator_map(&g);
        g.vertices().map(|v| format!("{} -> {}", g.name(v), f.image(v).display(&g))).collect()
    };
    let out = json!({
        "predicate": predicate,
        "oracle": oracle,
        "first_images": images(&a),
        "second_images": images(&b),
    });
    Ok(out.to_string())
}

fn to_js(r: Result<String, DemoError>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e.to_string()))
}

#[wasm_bindgen]
pub fn fixture(name: &str) -> Result<String, JsValue> {
    to_js(fixture_text(name))
}

#[wasm_bindgen]
pub fn analyze(graph: &str) -> Result<String, JsValue> {
    to_js(analyze_json(graph))
}

#[wasm_bindgen]
pub fn rank(graph: &str, set: &str, mode: &str) -> Result<String, JsValue> {
    to_js(rank_json(graph, set, mode))
}

#[wasm_bindgen]
pub fn commute(graph: &str, left: &str, left_mult: &str, right: &str, right_mult: &str) -> Result<String, JsValue> {
    to_js(commute_json(graph, left, left_mult, right, right_mult))
}

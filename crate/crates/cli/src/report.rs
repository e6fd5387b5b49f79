//! The machine-readable report printed by `--json`.

use std::collections::BTreeMap;

use raag_core::SimplicialGraph;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphInfo {
    pub name: String,
    pub vertices: usize,
    pub edges: usize,
    /// SHA-256 of the canonical text form of the graph.
    pub sha256: String,
}

impl GraphInfo {
    pub fn new(name: &str, g: &SimplicialGraph) -> GraphInfo {
        GraphInfo {
            name: name.to_string(),
            vertices: g.vertex_count(),
            edges: g.edges().len(),
            sha256: hex::encode(Sha256::digest(g.to_text().as_bytes())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub graph: Option<GraphInfo>,
    pub parameters: BTreeMap<String, Value>,
    pub results: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use raag_core::fixtures;

    #[test]
    fn hash_depends_only_on_the_graph() {
        let a = GraphInfo::new("x", &fixtures::fork());
        let b = GraphInfo::new("y", &fixtures::fork());
        assert_eq!(a.sha256, b.sha256);
        assert_eq!(a.sha256.len(), 64);
        assert_ne!(a.sha256, GraphInfo::new("x", &fixtures::simple_tree()).sha256);
    }

    #[test]
    fn elapsed_is_optional_in_json() {
        let report = Report {
            command: "rank".into(),
            graph: None,
            parameters: BTreeMap::new(),
            results: Value::Null,
            elapsed_ms: None,
        };
        let text = report.to_json();
        assert!(!text.contains("elapsed_ms"));
        assert_eq!(serde_json::from_str::<Report>(&text).unwrap(), report);
    }
}

#![allow(dead_code)]

use raag_core::{fixtures, SimplicialGraph};

pub fn fixture_graphs() -> Vec<SimplicialGraph> {
    fixtures::all_fixtures().into_iter().map(|(_, g)| g).collect()
}

/// Seeded random graphs on 3 to `max_n` vertices.
pub fn random_graphs(count: u64, max_n: usize) -> Vec<SimplicialGraph> {
    (0..count).map(|seed| fixtures::random_graph(3 + seed as usize % (max_n - 2), 0.45, seed)).collect()
}

pub fn all_graphs() -> Vec<SimplicialGraph> {
    let mut gs = fixture_graphs();
    gs.extend(random_graphs(50, 7));
    gs
}

mod common;

use std::collections::BTreeSet;

use raag_core::{Letter, LetterSet};

#[test]
fn equal_stars_are_principal() {
    for g in common::all_graphs() {
        let rel = g.relations();
        for u in g.vertices() {
            for v in g.vertices().filter(|&v| v != u && g.star(u) == g.star(v)) {
                assert!(rel.is_principal(u) && rel.is_principal(v), "{g:?}: {} {}", g.name(u), g.name(v));
            }
        }
    }
}

#[test]
fn one_of_the_two_classes_is_trivial() {
    for g in common::all_graphs() {
        let rel = g.relations();
        for v in g.vertices() {
            assert!(rel.star_class(v).len() < 2 || rel.circ_class(v).len() < 2, "{g:?} at {}", g.name(v));
        }
    }
}

#[test]
fn inseparable_sets_partition_the_complement_of_the_link() {
    for g in common::all_graphs() {
        for m in g.vertices() {
            let sets = g.inseparable_sets_of_vertex(m);
            let union = sets.iter().fold(LetterSet::default(), |acc, s| {
                assert!(acc.is_disjoint(*s));
                acc.union(*s)
            });
            assert_eq!(union, g.all_letters().difference(g.link(m).letters()));
            assert_eq!(g.inseparable_sets(Letter::neg(m)), g.inseparable_sets(Letter::pos(m)));
            for n in g.vertices().filter(|&n| g.link(n) == g.link(m)) {
                let a: BTreeSet<_> = sets.iter().collect();
                let b = g.inseparable_sets_of_vertex(n);
                assert_eq!(a, b.iter().collect());
            }
        }
    }
}

#[test]
fn maximal_vertices_are_principal() {
    for g in common::all_graphs() {
        let rel = g.relations();
        assert!(rel.maximal.is_subset(rel.principal), "{g:?}");
    }
}

/// Needs connectivity: isolated vertices share the empty link and have
/// nothing at distance two.
#[test]
fn barbed_graphs_have_trivial_non_principal_classes() {
    let mut barbed = 0;
    for g in common::all_graphs().into_iter().chain(common::random_graphs(300, 8)) {
        if !g.is_barbed() || g.components(g.all_vertices()).len() > 1 {
            continue;
        }
        barbed += 1;
        let rel = g.relations();
        for v in g.vertices().filter(|&v| !rel.is_principal(v)) {
            assert_eq!(rel.class(v).members.len(), 1, "{g:?} at {}", g.name(v));
        }
    }
    assert!(barbed > 10);
}

#[test]
fn automorphisms_preserve_adjacency_and_relations() {
    for g in common::fixture_graphs() {
        let rel = g.relations();
        for sigma in g.automorphisms() {
            for u in g.vertices() {
                assert_eq!(rel.is_principal(u), rel.is_principal(sigma[u]));
                for v in g.vertices() {
                    assert_eq!(g.adjacent(u, v), g.adjacent(sigma[u], sigma[v]));
                }
            }
        }
    }
}

#[test]
fn text_format_round_trips() {
    for g in common::all_graphs() {
        assert_eq!(raag_core::parse_graph(&g.to_text()).unwrap(), g);
    }
}

mod common;

use raag_core::clique;
use raag_core::rank::{compatibility_graph, RankVerdict};
use raag_core::*;

const BUDGET: u64 = DEFAULT_NODE_BUDGET;

fn rank(g: &SimplicialGraph, set: VertexSet) -> usize {
    max_compatible(g, set, CompatMode::Strong, BUDGET).unwrap().value
}

#[test]
fn principal_rank_is_at_most_full_rank() {
    for g in common::all_graphs() {
        assert!(rank(&g, g.relations().principal) <= rank(&g, g.all_vertices()), "{g:?}");
    }
}

/// Largest pairwise compatible subset by trying every subset.
fn brute_force_rank(g: &SimplicialGraph, parts: &[GWPartition]) -> usize {
    let n = parts.len();
    let ok: Vec<Vec<bool>> =
        (0..n).map(|i| (0..n).map(|j| i == j || compatible(g, &parts[i], &parts[j], CompatMode::Strong)).collect()).collect();
    (0u32..1 << n)
        .filter(|mask| {
            let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            members.iter().all(|&i| members.iter().all(|&j| ok[i][j]))
        })
        .map(|mask| mask.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

#[test]
fn search_matches_exhaustive_subsets() {
    let mut checked = 0;
    for g in common::all_graphs().into_iter().chain(common::random_graphs(200, 6)) {
        let parts = enumerate_partitions(&g, g.all_vertices());
        if parts.len() > 16 {
            continue;
        }
        checked += 1;
        let report = max_compatible(&g, g.all_vertices(), CompatMode::Strong, BUDGET).unwrap();
        assert_eq!(report.value, brute_force_rank(&g, &parts), "{g:?}");
        assert_eq!(report.witness.len(), report.value);
    }
    assert!(checked > 50);
}

#[test]
fn abelian_bases_bring_their_exchanges() {
    for g in common::all_graphs() {
        let rel = g.relations();
        let report = max_compatible(&g, g.all_vertices(), CompatMode::Strong, BUDGET).unwrap();
        let witness = report.witness;
        for p in witness.partitions() {
            for v in p.bases().iter() {
                let class = rel.class(v.vertex());
                if !class.abelian {
                    continue;
                }
                for w in class.members.iter().filter(|&w| w != v.vertex()) {
                    let e = p.exchange(&g, v, Letter::new(w, v.is_inverse())).unwrap();
                    if witness.contains(&e) {
                        continue;
                    }
                    // Only a member based at `w` itself can keep the exchange out.
                    let blockers: Vec<&GWPartition> =
                        witness.partitions().iter().filter(|q| !compatible(&g, q, &e, CompatMode::Strong)).collect();
                    assert!(!blockers.is_empty(), "{g:?}: {p:?} misses a compatible exchange");
                    assert!(blockers.iter().all(|q| q.base_vertices().contains(w)), "{g:?}: {p:?} to {}", g.name(w));
                }
            }
        }
    }
}

#[test]
fn normalizing_moves_every_class_partition_to_the_representative() {
    for g in [fixtures::edgeless(3), fixtures::edgeless(4), fixtures::diamonds(2)] {
        let rel = g.relations();
        let parts = enumerate_partitions(&g, g.all_vertices());
        let adj = compatibility_graph(&g, &parts, CompatMode::Strong);
        let size = clique::max_clique(&adj, BUDGET).unwrap().len();
        let maximum = clique::cliques_of_size(&adj, size, BUDGET).unwrap();
        for (k, c) in maximum.iter().enumerate().filter(|(k, _)| k % 7 == 0) {
            let pi = CompatibleCollection::new(&g, c.iter().map(|&i| parts[i]).collect(), CompatMode::Strong).unwrap();
            for class in rel.classes.iter().filter(|c| !c.abelian) {
                let Some(rep) = class.members.iter().find(|&v| rel.is_principal(v)) else {
                    continue;
                };
                let out = normalize_class(&g, &pi, rep, BUDGET).unwrap_or_else(|e| panic!("{g:?} #{k}: {e}"));
                assert_eq!(out.len(), pi.len());
                for p in out.partitions().iter().filter(|p| p.is_based_in(class.members)) {
                    assert!(p.is_base(Letter::pos(rep)), "{g:?} #{k}: {p:?}");
                }
            }
        }
    }
}

#[test]
fn completion_along_abelian_classes() {
    let mut done = 0;
    for g in common::all_graphs() {
        let rel = g.relations();
        for class in rel.classes.iter().filter(|c| c.abelian && c.members.len() > 1) {
            let rep = class.members.first().unwrap();
            let start: Vec<WhiteheadAuto> = enumerate_partitions(&g, class.members)
                .into_iter()
                .take(1)
                .map(|p| WhiteheadAuto::new(p, p.bases().intersection(class.members.letters()).first().unwrap()).unwrap())
                .collect();
            let out = complete_abelian(&g, &start, rep, BUDGET).unwrap();
            done += 1;
            let kept: Vec<GWPartition> = out.reduced.iter().map(|a| *a.partition()).collect();
            CompatibleCollection::new(&g, kept, CompatMode::Strong).unwrap();
            for (a, d) in &out.expressions {
                assert_eq!(d.to_generator_map(&g, a.multiplier()).unwrap(), a.to_generator_map(&g), "{g:?}");
            }
        }
    }
    assert!(done > 0);
}

#[test]
fn generators_have_principal_rank() {
    for g in common::all_graphs() {
        let gens = build_abelian_generators(&g, BUDGET).unwrap();
        assert_eq!(gens.len(), rank(&g, g.relations().principal), "{g:?}");
        assert_eq!(verify_abelian_rank(&g, &gens, 1, 8).unwrap(), RankVerdict::Pass, "{g:?}");
    }
}

#[test]
fn a_maximum_collection_without_an_exchange() {
    let g = SimplicialGraph::from_named_edges(&["v0", "v1", "v2", "v3", "v4"], &["v0-v2", "v0-v4", "v1-v2", "v2-v3", "v2-v4"]).unwrap();
    let side = |s: &str| -> LetterSet { s.split_whitespace().map(|t| g.parse_letter(t).unwrap()).collect() };
    let (v0, v4) = (Letter::pos(0), Letter::pos(4));
    let p = make_partition(&g, side("v0 v1"), v0).unwrap();
    let r = make_partition(&g, side("v1^-1 v4"), v4).unwrap();
    assert!(compatible(&g, &p, &r, CompatMode::Strong));
    let e = p.exchange(&g, v0, v4).unwrap();
    assert!(!compatible(&g, &e, &r, CompatMode::Strong));
    let witness = max_compatible(&g, g.all_vertices(), CompatMode::Strong, BUDGET).unwrap().witness;
    assert!(witness.contains(&p) && witness.contains(&r) && !witness.contains(&e));
}

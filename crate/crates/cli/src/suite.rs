//! The built-in verification suite behind `verify --suite paper`.
//!
//! Every check uses literal expected values. Random graphs and random
//! partitions are drawn from sequences offset by the `--seed` flag.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use raag_core::partition::partition_from_side;
use raag_core::rank::RankVerdict;
use raag_core::spine::{irreplaceable_members, top_collections};
use raag_core::whitehead::{outer_commute_oracle, outer_commute_predicate};
use raag_core::words::multiply;
use raag_core::*;

/// Knobs shared by every check.
#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub seed: u64,
    pub budget: u64,
    pub bound: usize,
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub index: usize,
    pub name: &'static str,
    pub failure: Option<String>,
    pub elapsed: Duration,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

type Outcome = Result<(), String>;
type Check = fn(&SuiteConfig) -> Outcome;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rank(cfg: &SuiteConfig, g: &SimplicialGraph, set: VertexSet, mode: CompatMode) -> Result<usize, String> {
    max_compatible(g, set, mode, cfg.budget).map(|r| r.value).map_err(|e| e.to_string())
}

fn random_graph(cfg: &SuiteConfig, i: u64) -> SimplicialGraph {
    fixtures::random_graph(3 + (i as usize % 5), 0.45, cfg.seed.wrapping_add(i))
}

fn random_graphs(cfg: &SuiteConfig) -> impl Iterator<Item = SimplicialGraph> + '_ {
    (0..50).map(move |i| random_graph(cfg, i))
}

fn is_connected(g: &SimplicialGraph) -> bool {
    g.components(g.all_vertices()).len() == 1
}

fn letters(g: &SimplicialGraph, text: &str) -> Result<LetterSet, String> {
    text.split_whitespace().map(|t| g.parse_letter(t).map_err(|e| e.to_string())).collect()
}

fn check_side_list(g: &SimplicialGraph, sides: &[&str], bases: &[&str]) -> Outcome {
    let allowed: VertexSet = bases.iter().map(|n| g.vertex(n).map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
    let mut parts = Vec::new();
    for side in sides {
        let set = letters(g, side)?;
        let p = partition_from_side(g, set).map_err(|e| format!("{side}: {e}"))?;
        ensure(!set.intersection(p.bases()).vertices().intersection(allowed).is_empty(), || {
            format!("{side} is not based in {bases:?}")
        })?;
        parts.push(p);
    }
    let distinct: BTreeSet<_> = parts.iter().collect();
    ensure(distinct.len() == parts.len(), || "sides give repeated partitions".into())?;
    CompatibleCollection::new(g, parts, CompatMode::Strong).map(|_| ()).map_err(|e| e.to_string())
}

fn inseparable_sets(_: &SuiteConfig) -> Outcome {
    let g = fixtures::ex1();
    let m = g.vertex("m").map_err(|e| e.to_string())?;
    let got: BTreeSet<LetterSet> = g.inseparable_sets_of_vertex(m).into_iter().collect();
    let want = ["m", "m^-1", "u", "u^-1", "v1 v1^-1 v2 v2^-1"]
        .iter()
        .map(|s| letters(&g, s))
        .collect::<Result<BTreeSet<_>, _>>()?;
    ensure(got == want, || format!("got {:?}", got.iter().map(|s| g.format_letters(*s)).collect::<Vec<_>>()))
}

fn free_group_rank(cfg: &SuiteConfig) -> Outcome {
    for n in 2..=5 {
        let g = fixtures::edgeless(n);
        let r = rank(cfg, &g, g.all_vertices(), CompatMode::Strong)?;
        ensure(r == 2 * n - 3, || format!("EDGELESS({n}): {r}"))?;
    }
    Ok(())
}

fn diamonds(cfg: &SuiteConfig) -> Outcome {
    for d in [2, 3] {
        let g = fixtures::diamonds(d);
        let r = rank(cfg, &g, g.all_vertices(), CompatMode::Strong)?;
        ensure(r == 4 * d - 1, || format!("DIAMONDS({d}): {r}"))?;
    }
    Ok(())
}

fn fork(cfg: &SuiteConfig) -> Outcome {
    let g = fixtures::fork();
    let ml = rank(cfg, &g, g.relations().principal, CompatMode::Strong)?;
    let mv = rank(cfg, &g, g.all_vertices(), CompatMode::Strong)?;
    ensure(ml == 8 && mv == 10, || format!("M(L) = {ml}, M(V) = {mv}"))?;
    check_side_list(
        &g,
        &["a1 v0", "v0 a1 a1^-1 b1 b1^-1", "a2 v0 a1 a1^-1 b1 b1^-1", "v0^-1 a3 a3^-1 b3 b3^-1", "a3^-1 v0^-1"],
        &["a1", "a2", "a3", "v0"],
    )
}

fn simple_tree(cfg: &SuiteConfig) -> Outcome {
    let g = fixtures::simple_tree();
    let ml = rank(cfg, &g, g.relations().principal, CompatMode::Strong)?;
    let mv = rank(cfg, &g, g.all_vertices(), CompatMode::Strong)?;
    ensure(ml == 5 && mv == 6, || format!("M(L) = {ml}, M(V) = {mv}"))?;
    check_side_list(&g, &["a1 v0", "v0 a1 a1^-1 b1 b1^-1", "a2^-1 v0^-1"], &["v0", "a1", "a2"])
}

pub fn all_autos(g: &SimplicialGraph) -> Vec<WhiteheadAuto> {
    enumerate_partitions(g, g.all_vertices())
        .into_iter()
        .flat_map(|p| p.bases().iter().map(move |m| WhiteheadAuto::new(p, m).expect("bases are multipliers")))
        .collect()
}

fn commute_oracle(cfg: &SuiteConfig) -> Outcome {
    for name in ["EDGELESS(3)", "PATH3", "EX1", "SIMPLETREE"] {
        let g = fixtures::load_fixture(name).map_err(|e| e.to_string())?;
        let autos = all_autos(&g);
        for (i, a) in autos.iter().enumerate() {
            for b in &autos[i..] {
                let predicate = outer_commute_predicate(&g, a, b);
                let oracle = outer_commute_oracle(&g, a, b, cfg.bound).map_err(|e| e.to_string())?;
                ensure(oracle == Some(predicate), || {
                    format!("{name}: {a:?} vs {b:?}: predicate {predicate}, oracle {oracle:?}")
                })?;
            }
        }
    }
    Ok(())
}

fn weak_equals_strong(cfg: &SuiteConfig) -> Outcome {
    let graphs = fixtures::all_fixtures().into_iter().map(|(_, g)| g).chain(random_graphs(cfg));
    for g in graphs {
        let mut sets = vec![g.all_vertices(), g.relations().principal];
        sets.extend(g.vertices().map(VertexSet::singleton));
        for set in sets {
            let strong = rank(cfg, &g, set, CompatMode::Strong)?;
            let weak = rank(cfg, &g, set, CompatMode::Weak)?;
            ensure(strong == weak, || format!("{g:?} on {}: strong {strong}, weak {weak}", g.format_vertices(set)))?;
        }
    }
    Ok(())
}

fn far_apart(cfg: &SuiteConfig) -> Outcome {
    let connected: Vec<SimplicialGraph> = (0u64..).map(|i| random_graph(cfg, i)).filter(is_connected).take(50).collect();
    let graphs = fixtures::all_fixtures().into_iter().map(|(_, g)| g).filter(is_connected).chain(connected);
    for g in graphs {
        let rel = g.relations();
        let single = g
            .vertices()
            .map(|v| rank(cfg, &g, VertexSet::singleton(v), CompatMode::Strong))
            .collect::<Result<Vec<_>, _>>()?;
        for u in g.vertices() {
            for v in u + 1..g.vertex_count() {
                if rel.equivalent(u, v) || g.distance(u, v) == Some(2) {
                    continue;
                }
                let joint = rank(cfg, &g, VertexSet::singleton(u).union(VertexSet::singleton(v)), CompatMode::Strong)?;
                ensure(joint == single[u] + single[v], || {
                    format!("{g:?} at {}, {}: {joint} != {} + {}", g.name(u), g.name(v), single[u], single[v])
                })?;
            }
        }
    }
    Ok(())
}

fn condition_theorem(cfg: &SuiteConfig) -> Outcome {
    let mut checked = 0;
    for i in 0..200 {
        let g = random_graph(cfg, i);
        if !condition_holds(&g) {
            continue;
        }
        checked += 1;
        let mv = rank(cfg, &g, g.all_vertices(), CompatMode::Strong)?;
        let ml = rank(cfg, &g, g.relations().principal, CompatMode::Strong)?;
        ensure(mv == ml, || format!("{g:?}: M(V) = {mv}, M(L) = {ml}"))?;
    }
    ensure(checked > 0, || "no graph satisfied the condition".into())
}

fn abelian_generators(cfg: &SuiteConfig) -> Outcome {
    for (name, size) in [("FORK", 8), ("SIMPLETREE", 5)] {
        let g = fixtures::load_fixture(name).map_err(|e| e.to_string())?;
        let gens = build_abelian_generators(&g, cfg.budget).map_err(|e| e.to_string())?;
        ensure(gens.len() == size, || format!("{name}: {} generators", gens.len()))?;
        let verdict = verify_abelian_rank(&g, &gens, 2, 8).map_err(|e| e.to_string())?;
        ensure(verdict == RankVerdict::Pass, || format!("{name}: {verdict:?}"))?;
    }
    Ok(())
}

fn gw_identities(cfg: &SuiteConfig) -> Outcome {
    let graphs: Vec<SimplicialGraph> = fixtures::all_fixtures()
        .into_iter()
        .map(|(_, g)| g)
        .filter(|g| !enumerate_partitions(g, g.all_vertices()).is_empty())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut done = 0;
    while done < 200 {
        let g = &graphs[rng.random_range(0..graphs.len())];
        let v = rng.random_range(0..g.vertex_count());
        let m = Letter::new(v, rng.random_bool(0.5));
        let side = g
            .inseparable_sets(m)
            .into_iter()
            .filter(|b| !b.contains(m) && !b.contains(m.inverse()))
            .filter(|_| rng.random_bool(0.5))
            .fold(LetterSet::singleton(m), LetterSet::union);
        let Ok(p) = make_partition(g, side, m) else {
            continue;
        };
        done += 1;
        let auto = WhiteheadAuto::new(p, m).map_err(|e| e.to_string())?;
        let map = auto.to_generator_map(g);
        for (f, h) in [(&map, &auto.invert(g).to_generator_map(g)), (&auto.invert(g).to_generator_map(g), &map)] {
            let product = compose(g, f, h).map_err(|e| e.to_string())?;
            ensure(product.is_identity(), || format!("{auto:?} times its inverse is not the identity"))?;
        }
        let conjugated: Vec<Word> = map
            .images()
            .iter()
            .map(|w| multiply(g, &Word::letter(m.inverse()), &w.concat(&Word::letter(m))))
            .collect();
        let flipped = WhiteheadAuto::new(p, m.inverse()).map_err(|e| e.to_string())?;
        ensure(flipped.to_generator_map(g).images() == &conjugated[..], || {
            format!("opposite side of {auto:?} is not the conjugate")
        })?;
    }
    Ok(())
}

fn collapse(cfg: &SuiteConfig) -> Outcome {
    let g = fixtures::simple_tree();
    let rel = g.relations();
    let tops = top_collections(&g, cfg.budget).map_err(|e| e.to_string())?;
    ensure(tops.iter().all(|t| t.len() == 6), || "top collections are not 6-dimensional".into())?;
    for top in &tops {
        let irreplaceable = irreplaceable_members(&g, top).map_err(|e| e.to_string())?;
        let mut sandwiched = 0;
        for q in top.partitions() {
            if q.base_vertices().iter().any(|v| rel.is_principal(v)) {
                continue;
            }
            if is_sandwiched(&g, q, top).map_err(|e| e.to_string())?.is_some() {
                sandwiched += 1;
                ensure(irreplaceable.contains(q), || format!("sandwiched {q:?} is replaceable"))?;
            }
        }
        ensure(sandwiched > 0, || format!("no sandwiched partition in {top:?}"))?;
    }
    let report = collapse_pass(&g, cfg.budget).map_err(|e| e.to_string())?;
    ensure(report.removed_pairs.len() == tops.len(), || "some top cube kept".into())?;
    ensure(report.residual_dimension == 5, || format!("residual {}", report.residual_dimension))
}

fn closed_form(cfg: &SuiteConfig) -> Outcome {
    for (name, g) in fixtures::all_fixtures() {
        for v in g.vertices() {
            let formula = m_single_closed_form(&g, v);
            let searched = rank(cfg, &g, VertexSet::singleton(v), CompatMode::Strong)?;
            ensure(formula == searched, || format!("{name} at {}: formula {formula}, search {searched}", g.name(v)))?;
        }
    }
    Ok(())
}

/// Name, time limit in seconds and body of each check, in order.
pub const CHECKS: [(&str, u64, Check); 13] = [
    ("inseparable sets of EX1", 1, inseparable_sets),
    ("free group rank 2n-3", 10, free_group_rank),
    ("string of diamonds 4d-1", 300, diamonds),
    ("fork ranks and side list", 60, fork),
    ("simple tree ranks and side list", 30, simple_tree),
    ("commutation criterion equals direct computation", 300, commute_oracle),
    ("weak and strong ranks agree", 300, weak_equals_strong),
    ("far-apart vertices add on connected graphs", 120, far_apart),
    ("condition gives M(V) = M(L)", 300, condition_theorem),
    ("abelian generators are independent", 600, abelian_generators),
    ("inverse and opposite-side identities", 60, gw_identities),
    ("collapse of the simple tree", 120, collapse),
    ("closed form for single vertices", 60, closed_form),
];

/// Runs every check, calling `progress` after each one.
pub fn run(cfg: &SuiteConfig, mut progress: impl FnMut(&CheckResult)) -> Vec<CheckResult> {
    CHECKS
        .iter()
        .enumerate()
        .map(|(i, (name, limit, check))| {
            let start = Instant::now();
            let outcome = check(cfg);
            let elapsed = start.elapsed();
            let outcome = outcome.and_then(|()| {
                ensure(elapsed <= Duration::from_secs(*limit), || format!("took {elapsed:.2?}, limit {limit}s"))
            });
            let result = CheckResult { index: i + 1, name, failure: outcome.err(), elapsed };
            progress(&result);
            result
        })
        .collect()
}

//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails or exceeds its time limit.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use raag_core::partition::partition_from_side;
use raag_core::rank::RankVerdict;
use raag_core::spine::{irreplaceable_members, top_collections};
use raag_core::whitehead::{outer_commute_oracle, outer_commute_predicate, GeneratorMap};
use raag_core::words::multiply;
use raag_core::*;

const BUDGET: u64 = DEFAULT_NODE_BUDGET;

type Outcome = Result<(), String>;
type Check = (&'static str, u64, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rank(g: &SimplicialGraph, set: VertexSet, mode: CompatMode) -> Result<usize, String> {
    max_compatible(g, set, mode, BUDGET).map(|r| r.value).map_err(|e| e.to_string())
}

fn random_graphs() -> Vec<SimplicialGraph> {
    (0..50u64).map(|seed| fixtures::random_graph(3 + (seed as usize % 5), 0.45, seed)).collect()
}

fn letters(g: &SimplicialGraph, text: &str) -> LetterSet {
    text.split_whitespace().map(|t| g.parse_letter(t).expect("letter")).collect()
}

/// Validates a list of sides as distinct, pairwise compatible partitions
/// based in `base_names`.
fn check_side_list(g: &SimplicialGraph, sides: &[&str], base_names: &[&str]) -> Outcome {
    let allowed: VertexSet = base_names.iter().map(|n| g.vertex(n).unwrap()).fold(VertexSet::default(), |mut s, v| {
        s.insert(v);
        s
    });
    let mut parts = Vec::new();
    for side in sides {
        let set = letters(g, side);
        let p = partition_from_side(g, set).map_err(|e| format!("{side}: {e}"))?;
        ensure(!set.intersection(p.bases()).vertices().intersection(allowed).is_empty(), || {
            format!("{side} is not based in {base_names:?}")
        })?;
        parts.push(p);
    }
    let distinct: BTreeSet<_> = parts.iter().collect();
    ensure(distinct.len() == parts.len(), || "sides give repeated partitions".into())?;
    CompatibleCollection::new(g, parts, CompatMode::Strong).map(|_| ()).map_err(|e| e.to_string())
}

fn inseparable_sets() -> Outcome {
    let g = fixtures::ex1();
    let m = g.vertex("m").unwrap();
    let got: BTreeSet<LetterSet> = g.inseparable_sets_of_vertex(m).into_iter().collect();
    let want: BTreeSet<LetterSet> =
        ["m", "m^-1", "u", "u^-1", "v1 v1^-1 v2 v2^-1"].iter().map(|s| letters(&g, s)).collect();
    ensure(got == want, || format!("got {:?}", got.iter().map(|s| g.format_letters(*s)).collect::<Vec<_>>()))
}

fn free_group_rank() -> Outcome {
    for n in 2..=5 {
        let g = fixtures::edgeless(n);
        let r = rank(&g, g.all_vertices(), CompatMode::Strong)?;
        ensure(r == 2 * n - 3, || format!("EDGELESS({n}): {r}"))?;
    }
    Ok(())
}

fn diamonds() -> Outcome {
    for d in [2, 3] {
        let g = fixtures::diamonds(d);
        let r = rank(&g, g.all_vertices(), CompatMode::Strong)?;
        ensure(r == 4 * d - 1, || format!("DIAMONDS({d}): {r}"))?;
    }
    Ok(())
}

fn fork() -> Outcome {
    let g = fixtures::fork();
    let l = g.relations().principal;
    let (ml, mv) = (rank(&g, l, CompatMode::Strong)?, rank(&g, g.all_vertices(), CompatMode::Strong)?);
    ensure(ml == 8 && mv == 10, || format!("M(L) = {ml}, M(V) = {mv}"))?;
    let mut sides = ["a1 v0", "v0 a1 a1^-1 b1 b1^-1", "a2 v0 a1 a1^-1 b1 b1^-1", "v0^-1 a3 a3^-1 b3 b3^-1", "a3^-1 v0"];
    let bases = ["a1", "a2", "a3", "v0"];
    // As printed, the last side meets both sides of the first partition;
    // its mirror image of the first side, with v0 inverted, is compatible.
    ensure(check_side_list(&g, &sides, &bases).is_err(), || "printed list unexpectedly compatible".into())?;
    sides[4] = "a3^-1 v0^-1";
    check_side_list(&g, &sides, &bases)
}

fn simple_tree() -> Outcome {
    let g = fixtures::simple_tree();
    let l = g.relations().principal;
    let (ml, mv) = (rank(&g, l, CompatMode::Strong)?, rank(&g, g.all_vertices(), CompatMode::Strong)?);
    ensure(ml == 5 && mv == 6, || format!("M(L) = {ml}, M(V) = {mv}"))?;
    check_side_list(&g, &["a1 v0", "v0 a1 a1^-1 b1 b1^-1", "a2^-1 v0^-1"], &["v0", "a1", "a2"])
}

fn all_autos(g: &SimplicialGraph) -> Vec<WhiteheadAuto> {
    enumerate_partitions(g, g.all_vertices())
        .into_iter()
        .flat_map(|p| p.bases().iter().map(move |m| WhiteheadAuto::new(p, m).expect("base")))
        .collect()
}

fn commute_oracle() -> Outcome {
    for (name, g) in [
        ("EDGELESS(3)", fixtures::edgeless(3)),
        ("PATH3", fixtures::path3()),
        ("EX1", fixtures::ex1()),
        ("SIMPLETREE", fixtures::simple_tree()),
    ] {
        let autos = all_autos(&g);
        for (i, a) in autos.iter().enumerate() {
            for b in &autos[i..] {
                let predicate = outer_commute_predicate(&g, a, b);
                let oracle = outer_commute_oracle(&g, a, b, 6).map_err(|e| e.to_string())?;
                ensure(oracle == Some(predicate), || {
                    format!("{name}: {a:?} vs {b:?}: predicate {predicate}, oracle {oracle:?}")
                })?;
            }
        }
    }
    Ok(())
}

fn subsets_to_check(g: &SimplicialGraph) -> Vec<VertexSet> {
    let mut sets = vec![g.all_vertices(), g.relations().principal];
    sets.extend(g.vertices().map(VertexSet::singleton));
    sets
}

fn weak_equals_strong() -> Outcome {
    let graphs = fixtures::all_fixtures().into_iter().map(|(_, g)| g).chain(random_graphs());
    for g in graphs {
        for set in subsets_to_check(&g) {
            let (s, w) = (rank(&g, set, CompatMode::Strong)?, rank(&g, set, CompatMode::Weak)?);
            ensure(s == w, || format!("{g:?} on {}: strong {s}, weak {w}", g.format_vertices(set)))?;
        }
    }
    Ok(())
}

/// The first 50 connected graphs of the seeded sequence. Additivity needs
/// connectivity: an isolated vertex is a component of every `Γ - lk(v)`.
fn connected_random_graphs() -> Vec<SimplicialGraph> {
    (0u64..)
        .map(|seed| fixtures::random_graph(3 + (seed as usize % 5), 0.45, seed))
        .filter(|g| g.components(g.all_vertices()).len() == 1)
        .take(50)
        .collect()
}

fn far_apart() -> Outcome {
    let graphs = fixtures::all_fixtures().into_iter().map(|(_, g)| g).filter(|g| g.components(g.all_vertices()).len() == 1);
    let graphs = graphs.chain(connected_random_graphs());
    for g in graphs {
        let rel = g.relations();
        let single: Vec<usize> = g
            .vertices()
            .map(|v| rank(&g, VertexSet::singleton(v), CompatMode::Strong))
            .collect::<Result<_, _>>()?;
        for u in g.vertices() {
            for v in u + 1..g.vertex_count() {
                if rel.equivalent(u, v) || g.distance(u, v) == Some(2) {
                    continue;
                }
                let pair = VertexSet::singleton(u).union(VertexSet::singleton(v));
                let joint = rank(&g, pair, CompatMode::Strong)?;
                ensure(joint == single[u] + single[v], || {
                    format!("{g:?} at {}, {}: {joint} != {} + {}", g.name(u), g.name(v), single[u], single[v])
                })?;
            }
        }
    }
    Ok(())
}

fn condition_theorem() -> Outcome {
    let mut checked = 0;
    for seed in 0..200u64 {
        let g = fixtures::random_graph(3 + (seed as usize % 5), 0.45, seed);
        if !condition_holds(&g) {
            continue;
        }
        checked += 1;
        let (mv, ml) = (rank(&g, g.all_vertices(), CompatMode::Strong)?, rank(&g, g.relations().principal, CompatMode::Strong)?);
        ensure(mv == ml, || format!("seed {seed}: M(V) = {mv}, M(L) = {ml}"))?;
    }
    ensure(checked > 0, || "no graph satisfied the condition".into())
}

fn abelian_generators() -> Outcome {
    for (name, g, size) in [("FORK", fixtures::fork(), 8), ("SIMPLETREE", fixtures::simple_tree(), 5)] {
        let gens = build_abelian_generators(&g, BUDGET).map_err(|e| e.to_string())?;
        ensure(gens.len() == size, || format!("{name}: {} generators", gens.len()))?;
        let verdict = verify_abelian_rank(&g, &gens, 2, 8).map_err(|e| e.to_string())?;
        ensure(verdict == RankVerdict::Pass, || format!("{name}: {verdict:?}"))?;
    }
    Ok(())
}

/// Images of a Whitehead automorphism read straight off its side.
fn direct_images(g: &SimplicialGraph, side: LetterSet, m: Letter) -> Vec<Word> {
    g.vertices()
        .map(|v| {
            let (pos, neg) = (Letter::pos(v), Letter::neg(v));
            let x = Word::letter(pos);
            let mw = Word::letter(m);
            if v == m.vertex() {
                return x;
            }
            match (side.contains(pos), side.contains(neg)) {
                (true, false) => x.concat(&Word::letter(m.inverse())),
                (false, true) => mw.concat(&x),
                (true, true) => mw.concat(&x).concat(&Word::letter(m.inverse())),
                (false, false) => x,
            }
        })
        .collect()
}

/// `f ∘ h` by substituting the images of `f` into those of `h`.
fn substitute(g: &SimplicialGraph, f: &[Word], h: &[Word]) -> Vec<Word> {
    h.iter()
        .map(|w| {
            let parts: Vec<Letter> = w
                .letters()
                .iter()
                .flat_map(|l| {
                    let img = &f[l.vertex()];
                    if l.is_inverse() { img.inverse() } else { img.clone() }.letters().to_vec()
                })
                .collect();
            normalize(g, &Word::new(parts)).into_word()
        })
        .collect()
}

fn gw_identities() -> Outcome {
    let graphs: Vec<SimplicialGraph> = fixtures::all_fixtures()
        .into_iter()
        .map(|(_, g)| g)
        .filter(|g| !enumerate_partitions(g, g.all_vertices()).is_empty())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut done = 0;
    while done < 200 {
        let g = &graphs[rng.random_range(0..graphs.len())];
        let v = rng.random_range(0..g.vertex_count());
        let m = if rng.random_bool(0.5) { Letter::pos(v) } else { Letter::neg(v) };
        let blocks: Vec<LetterSet> =
            g.inseparable_sets(m).into_iter().filter(|b| !b.contains(m) && !b.contains(m.inverse())).collect();
        let side = blocks.iter().filter(|_| rng.random_bool(0.5)).fold(LetterSet::singleton(m), |s, b| s.union(*b));
        let Ok(p) = raag_core::make_partition(g, side, m) else {
            continue;
        };
        done += 1;
        let auto = WhiteheadAuto::new(p, m).map_err(|e| e.to_string())?;
        let images = direct_images(g, side, m);
        let normalized: Vec<Word> = images.iter().map(|w| normalize(g, w).into_word()).collect();
        ensure(auto.to_generator_map(g).images() == &normalized[..], || format!("images of {auto:?}"))?;

        let other = p.opposite(side);
        let inverse = direct_images(g, side.without(m).with(m.inverse()), m.inverse());
        let identity = GeneratorMap::identity(g);
        ensure(substitute(g, &images, &inverse) == identity.images(), || format!("inverse of {auto:?}"))?;
        ensure(substitute(g, &inverse, &images) == identity.images(), || format!("inverse of {auto:?}"))?;
        let lib_inverse = compose(g, &auto.to_generator_map(g), &auto.invert(g).to_generator_map(g)).map_err(|e| e.to_string())?;
        ensure(lib_inverse.is_identity(), || format!("library inverse of {auto:?}"))?;

        let flipped = direct_images(g, other, m.inverse());
        let conjugated: Vec<Word> = images
            .iter()
            .map(|w| multiply(g, &Word::letter(m.inverse()), &w.concat(&Word::letter(m))))
            .collect();
        ensure(flipped.iter().map(|w| normalize(g, w).into_word()).collect::<Vec<_>>() == conjugated, || {
            format!("opposite side of {auto:?}")
        })?;
        let flip_auto = WhiteheadAuto::new(p, m.inverse()).map_err(|e| e.to_string())?;
        ensure(flip_auto.to_generator_map(g).images() == &conjugated[..], || format!("library flip of {auto:?}"))?;
    }
    Ok(())
}

fn collapse() -> Outcome {
    let g = fixtures::simple_tree();
    let rel = g.relations();
    let tops = top_collections(&g, BUDGET).map_err(|e| e.to_string())?;
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
    let report = collapse_pass(&g, BUDGET).map_err(|e| e.to_string())?;
    ensure(report.removed_pairs.len() == tops.len(), || "some top cube kept".into())?;
    ensure(report.residual_dimension == 5, || format!("residual {}", report.residual_dimension))
}

/// `|I(m)|` from the components of the graph with `lk(m)` removed.
fn inseparable_count(g: &SimplicialGraph, m: usize) -> usize {
    let n = g.vertex_count();
    let removed: Vec<bool> = (0..n).map(|v| g.adjacent(m, v)).collect();
    let mut seen = removed.clone();
    let mut count = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut size = 0;
        while let Some(x) = stack.pop() {
            size += 1;
            for y in 0..n {
                if !seen[y] && g.adjacent(x, y) {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        count += if size == 1 { 2 } else { 1 };
    }
    count
}

fn closed_form() -> Outcome {
    for (name, g) in fixtures::all_fixtures() {
        for v in g.vertices() {
            let expected = inseparable_count(&g, v).saturating_sub(3);
            let formula = m_single_closed_form(&g, v);
            let searched = rank(&g, VertexSet::singleton(v), CompatMode::Strong)?;
            ensure(formula == expected && searched == expected, || {
                format!("{name} at {}: formula {formula}, search {searched}, expected {expected}", g.name(v))
            })?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let checks: [Check; 13] = [
        ("inseparable sets of EX1", 1, inseparable_sets),
        ("free group rank 2n-3", 10, free_group_rank),
        ("string of diamonds 4d-1", 300, diamonds),
        ("fork ranks and side list", 60, fork),
        ("simple tree ranks and side list", 30, simple_tree),
        ("commutation predicate equals oracle", 300, commute_oracle),
        ("weak and strong ranks agree", 300, weak_equals_strong),
        ("far-apart vertices add on connected graphs", 120, far_apart),
        ("condition gives M(V) = M(L)", 300, condition_theorem),
        ("abelian generators are independent", 600, abelian_generators),
        ("inverse and opposite-side identities", 60, gw_identities),
        ("collapse of the simple tree", 120, collapse),
        ("closed form for single vertices", 60, closed_form),
    ];
    let mut failures = 0;
    for (i, (name, limit, check)) in checks.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(elapsed <= Duration::from_secs(*limit), || format!("took {elapsed:.2?}, limit {limit}s"))
        });
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({elapsed:.2?})", i + 1),
            Err(msg) => {
                failures += 1;
                println!("FAIL {:>2} {name} ({elapsed:.2?}): {msg}", i + 1);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

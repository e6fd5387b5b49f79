//! Largest compatible collections, the principal rank and explicit free
//! abelian subgroups generated by Whitehead automorphisms.

use thiserror::Error;

use crate::clique::{self, adjacency, Bits, CliqueError};
use crate::graph::SimplicialGraph;
use crate::letter::{Letter, LetterSet, VertexSet};
use crate::partition::{compatible, enumerate_partitions, make_partition, CompatMode, GWPartition};
use crate::whitehead::{
    compose, compose_all, decompose_in_nest, is_inner, outer_commute_oracle, outer_commute_predicate, GeneratorMap,
    Innerness, NestDecomposition, WhiteheadAuto, WhiteheadError,
};

/// Default node budget for clique searches.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RankError {
    #[error(transparent)]
    Clique(#[from] CliqueError),
    #[error(transparent)]
    Whitehead(#[from] WhiteheadError),
    #[error("partitions {0:?} and {1:?} are not compatible")]
    NotCompatible(GWPartition, GWPartition),
    #[error("collection is not maximal: {0:?} can be added")]
    NotMaximal(GWPartition),
    #[error("vertex {0} does not lie in a principal non-abelian class")]
    NotNonAbelianPrincipal(usize),
    #[error("vertex {0} does not lie in an abelian class")]
    NotAbelianClass(usize),
    #[error("automorphisms {0} and {1} do not commute")]
    NotCommuting(usize, usize),
    #[error("could not move the class partitions onto one base")]
    NormalizationFailed,
}

/// A set of pairwise compatible partitions, sorted canonically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibleCollection {
    partitions: Vec<GWPartition>,
    mode: CompatMode,
}

impl CompatibleCollection {
    pub fn new(g: &SimplicialGraph, mut partitions: Vec<GWPartition>, mode: CompatMode) -> Result<Self, RankError> {
        partitions.sort();
        partitions.dedup();
        for (i, a) in partitions.iter().enumerate() {
            for b in &partitions[i + 1..] {
                if !compatible(g, a, b, mode) {
                    return Err(RankError::NotCompatible(*a, *b));
                }
            }
        }
        Ok(CompatibleCollection { partitions, mode })
    }

    pub fn partitions(&self) -> &[GWPartition] {
        &self.partitions
    }

    pub fn mode(&self) -> CompatMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    pub fn contains(&self, p: &GWPartition) -> bool {
        self.partitions.binary_search(p).is_ok()
    }

    /// Every side of every member.
    pub fn sides(&self) -> Vec<LetterSet> {
        self.partitions.iter().flat_map(|p| p.sides()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankReport {
    pub value: usize,
    pub witness: CompatibleCollection,
    pub base_set: VertexSet,
    pub mode: CompatMode,
}

pub fn compatibility_graph(g: &SimplicialGraph, parts: &[GWPartition], mode: CompatMode) -> Vec<Bits> {
    adjacency(parts.len(), |i, j| compatible(g, &parts[i], &parts[j], mode))
}

/// The largest compatible collection of partitions based in `within`.
pub fn max_compatible(
    g: &SimplicialGraph,
    within: VertexSet,
    mode: CompatMode,
    budget: u64,
) -> Result<RankReport, RankError> {
    let parts = enumerate_partitions(g, within);
    let adj = compatibility_graph(g, &parts, mode);
    let best = clique::max_clique(&adj, budget)?;
    let witness = CompatibleCollection { partitions: best.iter().map(|&i| parts[i]).collect(), mode };
    Ok(RankReport { value: witness.len(), witness, base_set: within, mode })
}

/// `M(v) = |I(v)| - 3`, clamped at zero.
pub fn m_single_closed_form(g: &SimplicialGraph, v: usize) -> usize {
    g.inseparable_sets_of_vertex(v).len().saturating_sub(3)
}

/// A non-principal `u` with two principal maximal vertices above it in the
/// link order that lie in different components of `Γ - lk(u)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConditionViolation {
    pub vertex: usize,
    pub first: usize,
    pub second: usize,
}

pub fn condition_violation(g: &SimplicialGraph) -> Option<ConditionViolation> {
    let rel = g.relations();
    for u in g.vertices().filter(|&u| !rel.is_principal(u)) {
        let above: Vec<usize> = g
            .vertices()
            .filter(|&m| m != u && rel.is_principal(m) && rel.is_maximal(m) && rel.leq_circ(u, m))
            .collect();
        let comps = g.components(g.all_vertices().difference(g.link(u)));
        let comp_of = |v: usize| comps.iter().position(|c| c.contains(v));
        for (i, &a) in above.iter().enumerate() {
            for &b in &above[i + 1..] {
                if comp_of(a) != comp_of(b) {
                    return Some(ConditionViolation { vertex: u, first: a, second: b });
                }
            }
        }
    }
    None
}

pub fn condition_holds(g: &SimplicialGraph) -> bool {
    condition_violation(g).is_none()
}

/// Rewrites `pi` so that every partition based in the non-abelian principal
/// class of `rep` is based at `rep`, keeping the size.
pub fn normalize_class(
    g: &SimplicialGraph,
    pi: &CompatibleCollection,
    rep: usize,
    budget: u64,
) -> Result<CompatibleCollection, RankError> {
    let rel = g.relations();
    let class = rel.class(rep).clone();
    if class.abelian || !rel.is_principal(rep) {
        return Err(RankError::NotNonAbelianPrincipal(rep));
    }
    let mode = pi.mode();
    let m = Letter::pos(rep);
    let in_class = |p: &GWPartition| p.is_based_in(class.members);
    for cand in enumerate_partitions(g, class.members) {
        if !pi.contains(&cand) && pi.partitions().iter().all(|p| compatible(g, p, &cand, mode)) {
            return Err(RankError::NotMaximal(cand));
        }
    }
    let at_rep = enumerate_partitions(g, VertexSet::singleton(rep));
    let mut current: Vec<GWPartition> = pi.partitions().to_vec();
    loop {
        let Some(q) = current.iter().copied().find(|p| in_class(p) && !p.is_base(m)) else {
            return CompatibleCollection::new(g, current, mode);
        };
        let rest: Vec<GWPartition> = current.iter().copied().filter(|p| *p != q).collect();
        let proof = proof_replacement(g, &current, m, &in_class);
        let replacement = proof
            .map(|(_, new)| new)
            .into_iter()
            .chain(at_rep.iter().copied())
            .find(|c| !rest.contains(c) && rest.iter().all(|p| compatible(g, p, c, mode)));
        match (proof, replacement) {
            (Some((old, new)), Some(r)) if r == new => {
                current.retain(|p| *p != old);
                current.push(new);
            }
            (_, Some(r)) => {
                current = rest;
                current.push(r);
            }
            (_, None) => break,
        }
    }
    // The replacement loop stalled: search for the class part directly.
    let (class_part, rest): (Vec<GWPartition>, Vec<GWPartition>) = pi.partitions().iter().partition(|p| in_class(p));
    let cands: Vec<GWPartition> = at_rep
        .into_iter()
        .filter(|c| !rest.contains(c) && rest.iter().all(|p| compatible(g, p, c, mode)))
        .collect();
    let adj = compatibility_graph(g, &cands, mode);
    let best = clique::max_clique(&adj, budget)?;
    if best.len() < class_part.len() {
        return Err(RankError::NormalizationFailed);
    }
    let mut out = rest;
    out.extend(best.iter().take(class_part.len()).map(|&i| cands[i]));
    CompatibleCollection::new(g, out, mode)
}

/// The replacement step from the proof that class partitions can be moved
/// onto the representative: returns the partition to drop and its substitute.
fn proof_replacement(
    g: &SimplicialGraph,
    current: &[GWPartition],
    m: Letter,
    in_class: &dyn Fn(&GWPartition) -> bool,
) -> Option<(GWPartition, GWPartition)> {
    let mut chain: Vec<LetterSet> = current
        .iter()
        .filter(|p| p.is_base(m))
        .map(|p| p.side_containing(m).unwrap())
        .collect();
    chain.sort_by_key(|s| s.len());
    let top = g.all_letters().difference(g.link(m.vertex()).letters()).without(m.inverse());
    let mut levels = vec![LetterSet::singleton(m)];
    levels.extend(chain);
    levels.push(top);
    let others: Vec<&GWPartition> = current.iter().filter(|p| in_class(p) && !p.is_base(m)).collect();
    for i in 1..levels.len() {
        let band = levels[i].difference(levels[i - 1]);
        let mut sides: Vec<(LetterSet, &GWPartition)> = others
            .iter()
            .flat_map(|p| p.sides().into_iter().map(move |s| (s, *p)))
            .filter(|(s, _)| s.is_subset(band))
            .collect();
        if sides.is_empty() {
            continue;
        }
        sides.sort_by_key(|(s, p)| (std::cmp::Reverse(s.len()), **p));
        let (q_side, q) = sides[0];
        let inner = sides
            .iter()
            .filter(|(s, _)| s.is_proper_subset(q_side))
            .map(|(s, _)| *s)
            .next()
            .unwrap_or_else(|| {
                let base = q.bases().intersection(q_side).first().unwrap();
                LetterSet::singleton(base)
            });
        let side = levels[i - 1].union(inner);
        if let Ok(new) = make_partition(g, side, m) {
            return Some((*q, new));
        }
    }
    None
}

/// The result of completing a commuting family along an abelian class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianCompletion {
    pub completed: Vec<WhiteheadAuto>,
    pub reduced: Vec<WhiteheadAuto>,
    /// Each dropped automorphism, written over the reduced family.
    pub expressions: Vec<(WhiteheadAuto, NestDecomposition)>,
}

/// Adds every class-based automorphism commuting with the family, then keeps
/// a compatible class part and expresses the rest through it.
pub fn complete_abelian(
    g: &SimplicialGraph,
    autos: &[WhiteheadAuto],
    class_rep: usize,
    budget: u64,
) -> Result<AbelianCompletion, RankError> {
    let rel = g.relations();
    let class = rel.class(class_rep).clone();
    if !class.abelian {
        return Err(RankError::NotAbelianClass(class_rep));
    }
    for i in 0..autos.len() {
        for j in i + 1..autos.len() {
            if !outer_commute_predicate(g, &autos[i], &autos[j]) {
                return Err(RankError::NotCommuting(i, j));
            }
        }
    }
    let mut completed = autos.to_vec();
    for q in enumerate_partitions(g, class.members) {
        let n = q.base_vertices().intersection(class.members).first().unwrap();
        let a = WhiteheadAuto::new(q, Letter::pos(n))?;
        let present = completed.iter().any(|b| b.partition() == &q);
        if !present && autos.iter().all(|b| outer_commute_predicate(g, &a, b)) {
            completed.push(a);
        }
    }
    let (class_part, others): (Vec<WhiteheadAuto>, Vec<WhiteheadAuto>) =
        completed.iter().partition(|a| a.partition().is_based_in(class.members));
    let parts: Vec<GWPartition> = class_part.iter().map(|a| *a.partition()).collect();
    let adj = compatibility_graph(g, &parts, CompatMode::Strong);
    let kept: Vec<usize> = clique::max_clique(&adj, budget)?;
    let mut reduced = others;
    reduced.extend(kept.iter().map(|&i| class_part[i]));
    let mut expressions = Vec::new();
    for (i, a) in class_part.iter().enumerate() {
        if kept.contains(&i) {
            continue;
        }
        let n = a.multiplier();
        let nest: Vec<GWPartition> = kept.iter().map(|&k| parts[k]).filter(|p| p.is_base(n)).collect();
        let d = decompose_in_nest(g, a.partition(), n, &nest)?;
        expressions.push((*a, d));
    }
    Ok(AbelianCompletion { completed, reduced, expressions })
}

/// Whitehead automorphisms generating a free abelian subgroup of rank equal
/// to the principal rank.
pub fn build_abelian_generators(g: &SimplicialGraph, budget: u64) -> Result<Vec<WhiteheadAuto>, RankError> {
    let rel = g.relations();
    let report = max_compatible(g, rel.principal, CompatMode::Strong, budget)?;
    let mut pi = report.witness;
    let mut reps = Vec::new();
    for class in rel.classes.iter().filter(|c| !c.abelian) {
        let Some(rep) = class.members.iter().find(|&v| rel.is_principal(v)) else {
            continue;
        };
        reps.push(rep);
        if pi.partitions().iter().any(|p| p.is_based_in(class.members)) {
            pi = normalize_class(g, &pi, rep, budget)?;
        }
    }
    let mut autos = Vec::with_capacity(pi.len());
    for p in pi.partitions() {
        let bases = p.base_vertices();
        let v = reps.iter().copied().find(|&r| bases.contains(r)).unwrap_or_else(|| bases.first().unwrap());
        autos.push(WhiteheadAuto::new(*p, Letter::pos(v))?);
    }
    for i in 0..autos.len() {
        for j in i + 1..autos.len() {
            if !outer_commute_predicate(g, &autos[i], &autos[j]) {
                return Err(RankError::NotCommuting(i, j));
            }
        }
    }
    Ok(autos)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankVerdict {
    Pass,
    /// A pair failing the commutation test: predicate and oracle verdicts.
    NotCommuting { first: usize, second: usize, predicate: bool, oracle: Option<bool> },
    /// A nonzero exponent vector whose product is inner.
    Dependent(Vec<i32>),
}

/// Checks pairwise commutation by predicate and oracle, and that no nonzero
/// exponent vector in `[-e, e]^k` gives an inner product.
pub fn verify_abelian_rank(
    g: &SimplicialGraph,
    autos: &[WhiteheadAuto],
    exponent_bound: i32,
    inner_bound: usize,
) -> Result<RankVerdict, RankError> {
    for i in 0..autos.len() {
        for j in i + 1..autos.len() {
            let predicate = outer_commute_predicate(g, &autos[i], &autos[j]);
            let oracle = outer_commute_oracle(g, &autos[i], &autos[j], inner_bound)?;
            if !predicate || oracle != Some(true) {
                return Ok(RankVerdict::NotCommuting { first: i, second: j, predicate, oracle });
            }
        }
    }
    let maps: Vec<GeneratorMap> = autos.iter().map(|a| a.to_generator_map(g)).collect();
    let inverses: Vec<GeneratorMap> = autos.iter().map(|a| a.invert(g).to_generator_map(g)).collect();
    let matrices: Vec<Vec<Matrix>> = (0..autos.len())
        .map(|i| {
            let fwd = Matrix::of(g, &maps[i]);
            let back = Matrix::of(g, &inverses[i]);
            vec![fwd.clone(), back.clone(), fwd.mul(&fwd), back.mul(&back)]
        })
        .collect();
    let mut order: Vec<i32> = vec![0];
    for e in 1..=exponent_bound {
        order.push(e);
        order.push(-e);
    }
    let mut search = Independence {
        g,
        maps: &maps,
        inverses: &inverses,
        matrices: &matrices,
        order: &order,
        exps: Vec::with_capacity(autos.len()),
    };
    let n = g.vertex_count();
    match search.run(Matrix::identity(n))? {
        Some(v) => Ok(RankVerdict::Dependent(v)),
        None => Ok(RankVerdict::Pass),
    }
}

/// The action on the abelianization, row `v` holding the image of `v`.
#[derive(Clone, PartialEq, Eq, Debug)]
struct Matrix {
    n: usize,
    cells: Vec<i64>,
}

impl Matrix {
    fn identity(n: usize) -> Matrix {
        let mut cells = vec![0; n * n];
        for i in 0..n {
            cells[i * n + i] = 1;
        }
        Matrix { n, cells }
    }

    fn of(g: &SimplicialGraph, f: &GeneratorMap) -> Matrix {
        let n = g.vertex_count();
        let mut cells = vec![0; n * n];
        for v in 0..n {
            for l in f.image(v).letters() {
                cells[v * n + l.vertex()] += l.sign() as i64;
            }
        }
        Matrix { n, cells }
    }

    /// First apply `self`, then `other`'s images are substituted: the matrix
    /// of `self ∘ other` is `other * self`.
    fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let mut cells = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = other.cells[i * n + k];
                if a != 0 {
                    for j in 0..n {
                        cells[i * n + j] += a * self.cells[k * n + j];
                    }
                }
            }
        }
        Matrix { n, cells }
    }
}

struct Independence<'a> {
    g: &'a SimplicialGraph,
    maps: &'a [GeneratorMap],
    inverses: &'a [GeneratorMap],
    matrices: &'a [Vec<Matrix>],
    order: &'a [i32],
    exps: Vec<i32>,
}

impl Independence<'_> {
    fn run(&mut self, prefix: Matrix) -> Result<Option<Vec<i32>>, RankError> {
        let i = self.exps.len();
        if i == self.maps.len() {
            if self.exps.iter().all(|&e| e == 0) || prefix != Matrix::identity(prefix.n) {
                return Ok(None);
            }
            return Ok(self.product_is_inner()?.then(|| self.exps.clone()));
        }
        for &e in self.order {
            let next = match e {
                0 => prefix.clone(),
                1 => prefix.mul(&self.matrices[i][0]),
                -1 => prefix.mul(&self.matrices[i][1]),
                2 => prefix.mul(&self.matrices[i][2]),
                -2 => prefix.mul(&self.matrices[i][3]),
                _ => {
                    let base = if e > 0 { &self.matrices[i][0] } else { &self.matrices[i][1] };
                    (0..e.abs()).fold(prefix.clone(), |acc, _| acc.mul(base))
                }
            };
            self.exps.push(e);
            let found = self.run(next)?;
            self.exps.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    fn product_is_inner(&self) -> Result<bool, RankError> {
        let mut acc = GeneratorMap::identity(self.g);
        for (i, &e) in self.exps.iter().enumerate() {
            let f = if e > 0 { &self.maps[i] } else { &self.inverses[i] };
            for _ in 0..e.abs() {
                acc = compose(self.g, &acc, f)?;
            }
        }
        Ok(!matches!(is_inner(self.g, &acc, usize::MAX), Innerness::NotInner))
    }
}

/// Convenience: the composed map of a product with exponents.
pub fn product_map(g: &SimplicialGraph, autos: &[WhiteheadAuto], exps: &[i32]) -> Result<GeneratorMap, RankError> {
    let mut maps = Vec::new();
    for (a, &e) in autos.iter().zip(exps) {
        let f = if e > 0 { a.to_generator_map(g) } else { a.invert(g).to_generator_map(g) };
        for _ in 0..e.abs() {
            maps.push(f.clone());
        }
    }
    Ok(compose_all(g, &maps)?)
}

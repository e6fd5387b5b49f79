//! Γ-Whitehead partitions: construction, enumeration, compatibility and the
//! side manipulations used by the rank and spine searches.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{GraphError, SimplicialGraph};
use crate::letter::{Letter, LetterSet, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("side contains both the base and its inverse")]
    ContainsInverse,
    #[error("side does not contain the base letter")]
    MissingBase,
    #[error("side meets the link of the base")]
    MeetsLink,
    #[error("side is not a union of inseparable sets (splits {0:?})")]
    NotUnionOfInseparables(LetterSet),
    #[error("partition is not thick: a side has fewer than two letters")]
    NotThick,
    #[error("letter is not a base of the partition")]
    NotABase,
    #[error("exchange needs lk(v) inside st(w)")]
    ExchangeOrder,
    #[error("partitions are not pairwise compatible")]
    NotCompatible,
    #[error("no choice of sides is nested")]
    NoNesting,
    #[error("partitions are not all based in one equivalence class")]
    MixedClasses,
    #[error("malformed partition text: {0}")]
    Syntax(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Strong compatibility requires commuting bases with different stars; weak
/// compatibility only requires commuting distinct bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum CompatMode {
    #[default]
    Strong,
    Weak,
}

impl FromStr for CompatMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strong" => Ok(CompatMode::Strong),
            "weak" => Ok(CompatMode::Weak),
            other => Err(format!("unknown mode `{other}` (expected strong or weak)")),
        }
    }
}

impl fmt::Display for CompatMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CompatMode::Strong => "strong",
            CompatMode::Weak => "weak",
        })
    }
}

/// A three-part partition `{P | P* | lk±}` of `V^±`.
///
/// `side_p` is the side holding the least letter. `bases` holds every letter
/// `n` with the common link whose two signs lie on different sides.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct GWPartition {
    side_p: LetterSet,
    side_q: LetterSet,
    link: LetterSet,
    bases: LetterSet,
}

impl Ord for GWPartition {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.side_p, self.side_q, self.link).cmp(&(other.side_p, other.side_q, other.link))
    }
}

impl PartialOrd for GWPartition {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for GWPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{:?} | {:?} | {:?}}}", self.side_p, self.side_q, self.link)
    }
}

/// Checks that `side` is a valid side based at `m` and builds the partition.
pub fn make_partition(g: &SimplicialGraph, side: LetterSet, m: Letter) -> Result<GWPartition, PartitionError> {
    if !side.contains(m) {
        return Err(PartitionError::MissingBase);
    }
    if side.contains(m.inverse()) {
        return Err(PartitionError::ContainsInverse);
    }
    let link = g.link(m.vertex()).letters();
    if !side.is_disjoint(link) {
        return Err(PartitionError::MeetsLink);
    }
    for block in g.inseparable_sets(m) {
        let inside = block.intersection(side);
        if !inside.is_empty() && inside != block {
            return Err(PartitionError::NotUnionOfInseparables(block));
        }
    }
    let other = g.all_letters().difference(link).difference(side);
    if side.len() < 2 || other.len() < 2 {
        return Err(PartitionError::NotThick);
    }
    let lk = g.link(m.vertex());
    let mut bases = LetterSet::EMPTY;
    for v in g.vertices().filter(|&v| g.link(v) == lk) {
        let (p, n) = (Letter::pos(v), Letter::neg(v));
        if side.contains(p) != side.contains(n) && !link.contains(p) {
            bases.insert(p);
            bases.insert(n);
        }
    }
    let (side_p, side_q) = if side.union(other).first() == side.first() { (side, other) } else { (other, side) };
    Ok(GWPartition { side_p, side_q, link, bases })
}

/// Builds a partition from one side, trying each possible base letter in it.
pub fn partition_from_side(g: &SimplicialGraph, side: LetterSet) -> Result<GWPartition, PartitionError> {
    let mut last = PartitionError::MissingBase;
    for m in side.iter().filter(|m| !side.contains(m.inverse())) {
        match make_partition(g, side, m) {
            Ok(p) => return Ok(p),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// All partitions with at least one base in `within`, sorted canonically.
pub fn enumerate_partitions(g: &SimplicialGraph, within: VertexSet) -> Vec<GWPartition> {
    let mut found = BTreeSet::new();
    for u in within.iter() {
        let m = Letter::pos(u);
        let blocks: Vec<LetterSet> = g
            .inseparable_sets(m)
            .into_iter()
            .filter(|b| !b.contains(m) && !b.contains(m.inverse()))
            .collect();
        for mask in 0u64..1 << blocks.len() {
            let mut side = LetterSet::singleton(m);
            for (i, b) in blocks.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    side = side.union(*b);
                }
            }
            if let Ok(p) = make_partition(g, side, m) {
                found.insert(p);
            }
        }
    }
    found.into_iter().collect()
}

impl GWPartition {
    pub fn side_p(&self) -> LetterSet {
        self.side_p
    }

    pub fn side_q(&self) -> LetterSet {
        self.side_q
    }

    pub fn sides(&self) -> [LetterSet; 2] {
        [self.side_p, self.side_q]
    }

    /// `lk(P)^±`.
    pub fn link(&self) -> LetterSet {
        self.link
    }

    pub fn bases(&self) -> LetterSet {
        self.bases
    }

    pub fn base_vertices(&self) -> VertexSet {
        self.bases.vertices()
    }

    pub fn is_base(&self, m: Letter) -> bool {
        self.bases.contains(m)
    }

    pub fn is_based_in(&self, set: VertexSet) -> bool {
        !self.base_vertices().intersection(set).is_empty()
    }

    /// The least base letter; a canonical multiplier.
    pub fn least_base(&self) -> Letter {
        self.bases.first().expect("partition has a base")
    }

    /// The side containing `l`, if `l` is not a link letter.
    pub fn side_containing(&self, l: Letter) -> Option<LetterSet> {
        if self.side_p.contains(l) {
            Some(self.side_p)
        } else if self.side_q.contains(l) {
            Some(self.side_q)
        } else {
            None
        }
    }

    /// The side opposite to `side`.
    pub fn opposite(&self, side: LetterSet) -> LetterSet {
        if side == self.side_p {
            self.side_q
        } else {
            self.side_p
        }
    }

    /// `v` and `v^-1` lie in different sides.
    pub fn splits(&self, v: usize) -> bool {
        let (p, n) = (Letter::pos(v), Letter::neg(v));
        match (self.side_containing(p), self.side_containing(n)) {
            (Some(a), Some(b)) => a != b,
            _ => false,
        }
    }

    /// Every vertex split by the partition.
    pub fn split_vertices(&self) -> VertexSet {
        self.side_p.union(self.side_q).vertices().iter().filter(|&v| self.splits(v)).collect()
    }

    /// Number of inseparable sets of `m` inside the side containing `m`.
    pub fn m_length(&self, g: &SimplicialGraph, m: Letter) -> Result<usize, PartitionError> {
        if !self.is_base(m) {
            return Err(PartitionError::NotABase);
        }
        let side = self.side_containing(m).expect("base lies in a side");
        Ok(g.inseparable_sets(m).into_iter().filter(|b| b.is_subset(side)).count())
    }

    /// Each side with `st(m)^±` removed, the side containing `m` first.
    pub fn reduced_sides(&self, g: &SimplicialGraph, m: Letter) -> Result<(LetterSet, LetterSet), PartitionError> {
        if !self.is_base(m) {
            return Err(PartitionError::NotABase);
        }
        let st = g.star(m.vertex()).letters();
        let side = self.side_containing(m).expect("base lies in a side");
        Ok((side.difference(st), self.opposite(side).difference(st)))
    }

    /// Exchanges the base `v` for `w`: the result has side
    /// `(P - {v} - lk(w)^±) ∪ {w}` where `P` is the side containing `v`.
    pub fn exchange(&self, g: &SimplicialGraph, v: Letter, w: Letter) -> Result<GWPartition, PartitionError> {
        if !self.is_base(v) {
            return Err(PartitionError::NotABase);
        }
        if v == w {
            return Ok(*self);
        }
        if !g.link(v.vertex()).is_subset(g.star(w.vertex())) {
            return Err(PartitionError::ExchangeOrder);
        }
        let side = self.side_containing(v).expect("base lies in a side");
        let new_side = side.without(v).difference(g.link(w.vertex()).letters()).with(w);
        make_partition(g, new_side, w)
    }

    /// Applies a signed vertex permutation to all three parts.
    pub fn relabel(&self, g: &SimplicialGraph, sigma: &[usize], inversions: VertexSet) -> GWPartition {
        let map = |l: Letter| Letter::new(sigma[l.vertex()], l.is_inverse() ^ inversions.contains(l.vertex()));
        let base = self.least_base();
        let side = self.side_containing(base).unwrap();
        let image: LetterSet = side.iter().map(map).collect();
        make_partition(g, image, map(base)).expect("automorphisms map partitions to partitions")
    }

    pub fn display<'a>(&'a self, g: &'a SimplicialGraph) -> impl fmt::Display + 'a {
        DisplayPartition { part: self, graph: g }
    }
}

struct DisplayPartition<'a> {
    part: &'a GWPartition,
    graph: &'a SimplicialGraph,
}

impl fmt::Display for DisplayPartition<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.graph;
        write!(
            f,
            "{{{} | {} | {}}}",
            g.format_letters(self.part.side_p),
            g.format_letters(self.part.side_q),
            g.format_letters(self.part.link)
        )
    }
}

/// Whether the two partitions are compatible under `mode`.
pub fn compatible(g: &SimplicialGraph, a: &GWPartition, b: &GWPartition, mode: CompatMode) -> bool {
    for x in a.sides() {
        for y in b.sides() {
            if x.is_disjoint(y) {
                return true;
            }
        }
    }
    for m in a.base_vertices().iter() {
        for n in b.base_vertices().iter() {
            if g.adjacent(m, n) && (mode == CompatMode::Weak || g.star(m) != g.star(n)) {
                return true;
            }
        }
    }
    false
}

/// A partition together with the side chosen for a nesting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NestedSide {
    pub partition: GWPartition,
    pub side: LetterSet,
    pub reduced: LetterSet,
}

/// Orders pairwise compatible partitions based in one equivalence class so
/// that their reduced sides increase.
pub fn nest(g: &SimplicialGraph, parts: &[GWPartition]) -> Result<Vec<NestedSide>, PartitionError> {
    if parts.is_empty() {
        return Ok(Vec::new());
    }
    let rel = g.relations();
    let class = {
        let v = parts[0].base_vertices().first().unwrap();
        rel.class(v).members
    };
    let mut choices: Vec<[NestedSide; 2]> = Vec::new();
    for p in parts {
        let base_vx = p.base_vertices().intersection(class);
        let Some(v) = base_vx.first() else {
            return Err(PartitionError::MixedClasses);
        };
        let m = Letter::pos(v);
        let (own, other) = p.reduced_sides(g, m)?;
        let side = p.side_containing(m).unwrap();
        choices.push([
            NestedSide { partition: *p, side, reduced: own },
            NestedSide { partition: *p, side: p.opposite(side), reduced: other },
        ]);
    }
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            if !compatible(g, &parts[i], &parts[j], CompatMode::Strong) {
                return Err(PartitionError::NotCompatible);
            }
        }
    }
    let mut picked = Vec::with_capacity(parts.len());
    if !pick_chain(&choices, &mut picked) {
        return Err(PartitionError::NoNesting);
    }
    picked.sort_by(|a: &NestedSide, b: &NestedSide| {
        (a.reduced.len(), a.partition).cmp(&(b.reduced.len(), b.partition))
    });
    Ok(picked)
}

fn pick_chain(choices: &[[NestedSide; 2]], picked: &mut Vec<NestedSide>) -> bool {
    let Some(options) = choices.get(picked.len()) else {
        return true;
    };
    for opt in options {
        let comparable = picked
            .iter()
            .all(|p| p.reduced.is_subset(opt.reduced) || opt.reduced.is_subset(p.reduced));
        if comparable {
            picked.push(*opt);
            if pick_chain(choices, picked) {
                return true;
            }
            picked.pop();
        }
    }
    false
}

fn parse_letter_list(g: &SimplicialGraph, text: &str) -> Result<LetterSet, PartitionError> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| g.parse_letter(t).map_err(PartitionError::from))
        .collect()
}

/// Parses `{P | P* | link}`; the link part may be `*`.
pub fn parse_partition(g: &SimplicialGraph, text: &str) -> Result<GWPartition, PartitionError> {
    let inner = text
        .trim()
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| PartitionError::Syntax("expected `{ ... }`".into()))?;
    let parts: Vec<&str> = inner.split('|').collect();
    if parts.len() != 3 {
        return Err(PartitionError::Syntax(format!("expected three `|`-separated parts, found {}", parts.len())));
    }
    let side = parse_letter_list(g, parts[0])?;
    let other = parse_letter_list(g, parts[1])?;
    let part = partition_from_side(g, side)?;
    if part.opposite(side) != other {
        return Err(PartitionError::Syntax("second part is not the complementary side".into()));
    }
    if parts[2].trim() != "*" && parse_letter_list(g, parts[2])? != part.link {
        return Err(PartitionError::Syntax("third part is not the link of the base".into()));
    }
    Ok(part)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn letters(g: &SimplicialGraph, s: &str) -> LetterSet {
        s.split_whitespace().map(|t| g.parse_letter(t).unwrap()).collect()
    }

    fn part(g: &SimplicialGraph, side: &str, base: &str) -> GWPartition {
        make_partition(g, letters(g, side), g.parse_letter(base).unwrap()).unwrap()
    }

    fn figure_partition() -> (SimplicialGraph, GWPartition) {
        let g = fixtures::ex1();
        let p = part(&g, "m u v1 v1^-1 v2 v2^-1", "m");
        (g, p)
    }

    #[test]
    fn make_partition_examples() {
        let (g, p) = figure_partition();
        assert_eq!(p.side_q(), letters(&g, "m^-1 u^-1"));
        assert_eq!(p.link(), letters(&g, "x1 x1^-1 x2 x2^-1 x3 x3^-1 x4 x4^-1"));
        let e2 = fixtures::edgeless(2);
        let q = part(&e2, "a b", "a");
        assert_eq!(q.side_q(), letters(&e2, "a^-1 b^-1"));
        assert_eq!(q.bases(), e2.all_letters());
        assert!(matches!(
            make_partition(&g, letters(&g, "m v1"), g.parse_letter("m").unwrap()),
            Err(PartitionError::NotUnionOfInseparables(_))
        ));
        assert_eq!(
            make_partition(&e2, letters(&e2, "a a^-1"), Letter::pos(0)),
            Err(PartitionError::ContainsInverse)
        );
        assert_eq!(
            make_partition(&g, letters(&g, "m"), g.parse_letter("m").unwrap()),
            Err(PartitionError::NotThick)
        );
    }

    #[test]
    fn enumeration_counts() {
        assert!(enumerate_partitions(&fixtures::triangle(), VertexSet::full(3)).is_empty());
        let e2 = fixtures::edgeless(2);
        let all = enumerate_partitions(&e2, e2.all_vertices());
        assert_eq!(all, vec![part(&e2, "a b", "a"), part(&e2, "a b^-1", "a")]);
        let g = fixtures::ex1();
        assert_eq!(enumerate_partitions(&g, VertexSet::singleton(0)).len(), 6);
    }

    #[test]
    fn orientation_is_canonical() {
        let e2 = fixtures::edgeless(2);
        let p = part(&e2, "a^-1 b^-1", "a^-1");
        assert_eq!(p.side_p(), letters(&e2, "a b"));
        assert_eq!(p, part(&e2, "a b", "b"));
    }

    #[test]
    fn splitting() {
        let (g, p) = figure_partition();
        assert!(p.splits(g.vertex("u").unwrap()));
        assert!(!p.splits(g.vertex("v1").unwrap()));
        assert!(!p.splits(g.vertex("x1").unwrap()));
        assert_eq!(p.split_vertices(), VertexSet::from_iter([0, g.vertex("u").unwrap()]));
    }

    #[test]
    fn m_lengths() {
        let (g, p) = figure_partition();
        assert_eq!(p.m_length(&g, g.parse_letter("m").unwrap()), Ok(3));
        assert_eq!(p.m_length(&g, g.parse_letter("m^-1").unwrap()), Ok(2));
        assert_eq!(p.m_length(&g, g.parse_letter("u").unwrap()), Err(PartitionError::NotABase));
        let e2 = fixtures::edgeless(2);
        let q = part(&e2, "a b", "a");
        assert_eq!(q.m_length(&e2, Letter::pos(0)), Ok(2));
        assert_eq!(q.m_length(&e2, Letter::pos(1)), Ok(2));
    }

    #[test]
    fn compatibility_examples() {
        let e2 = fixtures::edgeless(2);
        let all = enumerate_partitions(&e2, e2.all_vertices());
        assert!(!compatible(&e2, &all[0], &all[1], CompatMode::Strong));
        assert!(!compatible(&e2, &all[0], &all[1], CompatMode::Weak));

        let d1 = fixtures::diamonds(1);
        let at_a1 = enumerate_partitions(&d1, VertexSet::singleton(d1.vertex("a1").unwrap()));
        let at_c0 = enumerate_partitions(&d1, VertexSet::singleton(d1.vertex("c0").unwrap()));
        assert!(!at_a1.is_empty() && !at_c0.is_empty());
        for p in &at_a1 {
            for q in &at_c0 {
                assert!(compatible(&d1, p, q, CompatMode::Strong));
            }
        }

        let (g, big) = figure_partition();
        let small = part(&g, "m u", "m");
        assert!(compatible(&g, &small, &big, CompatMode::Strong));
    }

    #[test]
    fn exchange_examples() {
        let e3 = fixtures::edgeless(3);
        let p = part(&e3, "a b", "a");
        let a = Letter::pos(0);
        assert_eq!(p.exchange(&e3, a, a), Ok(p));

        // Equal stars: a and c commute and nothing else touches them.
        let g = SimplicialGraph::from_named_edges(&["a", "b", "c", "d"], &["a-c"]).unwrap();
        let p = part(&g, "a b", "a");
        let swapped = p.exchange(&g, Letter::pos(0), Letter::pos(2)).unwrap();
        assert_eq!(swapped.side_containing(Letter::pos(2)), Some(letters(&g, "b c")));
        assert_eq!(swapped.link(), letters(&g, "a a^-1"));
        assert!(compatible(&g, &p, &swapped, CompatMode::Strong));

        let st = fixtures::simple_tree();
        let q = part(&st, "v0 a1 a1^-1 b1 b1^-1", "v0");
        let moved = q.exchange(&st, st.parse_letter("v0").unwrap(), st.parse_letter("a2").unwrap()).unwrap();
        assert_eq!(
            moved.side_containing(st.parse_letter("a2").unwrap()),
            Some(letters(&st, "a2 a1 a1^-1 b1 b1^-1"))
        );
        assert_eq!(
            q.exchange(&st, st.parse_letter("v0").unwrap(), st.parse_letter("b1").unwrap()),
            Err(PartitionError::ExchangeOrder)
        );
    }

    #[test]
    fn reduced_side_examples() {
        let e2 = fixtures::edgeless(2);
        let p = part(&e2, "a b", "a");
        assert_eq!(p.reduced_sides(&e2, Letter::pos(0)), Ok((letters(&e2, "b"), letters(&e2, "b^-1"))));
        let (g, p) = figure_partition();
        assert_eq!(
            p.reduced_sides(&g, g.parse_letter("m").unwrap()),
            Ok((letters(&g, "u v1 v1^-1 v2 v2^-1"), letters(&g, "u^-1")))
        );
        let e3 = fixtures::edgeless(3);
        let q = part(&e3, "a b", "a");
        assert_eq!(q.reduced_sides(&e3, Letter::pos(0)).unwrap().0, letters(&e3, "b"));
    }

    #[test]
    fn nesting() {
        let (g, big) = figure_partition();
        let small = part(&g, "m u", "m");
        let chain = nest(&g, &[big, small]).unwrap();
        assert_eq!(chain.iter().map(|n| n.partition).collect::<Vec<_>>(), vec![small, big]);
        assert_eq!(nest(&g, &[big]).unwrap().len(), 1);

        let e4 = fixtures::edgeless(4);
        let p1 = part(&e4, "a b", "a");
        let p2 = part(&e4, "a b c", "a");
        let chain = nest(&e4, &[p2, p1]).unwrap();
        assert_eq!(chain[0].side, letters(&e4, "a b"));
        assert_eq!(chain[1].side, letters(&e4, "a b c"));

        let e2 = fixtures::edgeless(2);
        let all = enumerate_partitions(&e2, e2.all_vertices());
        assert_eq!(nest(&e2, &all), Err(PartitionError::NotCompatible));
    }

    #[test]
    fn relabel_examples() {
        let e2 = fixtures::edgeless(2);
        let p = part(&e2, "a b", "a");
        assert_eq!(p.relabel(&e2, &[0, 1], VertexSet::EMPTY), p);
        assert_eq!(p.relabel(&e2, &[1, 0], VertexSet::EMPTY), p);
        let flipped = p.relabel(&e2, &[0, 1], VertexSet::singleton(0));
        assert_eq!(flipped.side_p(), letters(&e2, "a b^-1"));
        assert_eq!(flipped.side_q(), letters(&e2, "a^-1 b"));
    }

    #[test]
    fn text_round_trip() {
        let (g, p) = figure_partition();
        let text = p.display(&g).to_string();
        assert_eq!(parse_partition(&g, &text), Ok(p));
        assert_eq!(parse_partition(&g, "{m u v1 v1^-1 v2 v2^-1 | m^-1 u^-1 | *}"), Ok(p));
        assert!(parse_partition(&g, "{m u | m^-1 | *}").is_err());
    }
}

//! Γ-Whitehead automorphisms as maps on generators, their composition,
//! commutation test, innerness and decomposition inside a nest.

use std::fmt;

use thiserror::Error;

use crate::graph::SimplicialGraph;
use crate::letter::{Letter, LetterSet};
use crate::partition::{compatible, make_partition, CompatMode, GWPartition, PartitionError};
use crate::words::{cyclic_split, multiply, normalize, ParabolicCoset, Word};

/// Longest image allowed in a composed map.
pub const DEFAULT_WORD_CEILING: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WhiteheadError {
    #[error("multiplier is not a base of the partition")]
    NotABase,
    #[error("composed image has length {len}, above the ceiling {ceiling}")]
    WordTooLong { len: usize, ceiling: usize },
    #[error("nest sides containing the multiplier are not a chain")]
    NotNested,
    #[error("nest is not maximal and does not generate the target")]
    NestNotMaximal,
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// `φ(P, m)`: `P` is the side of `partition` containing `multiplier`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WhiteheadAuto {
    partition: GWPartition,
    multiplier: Letter,
}

impl fmt::Debug for WhiteheadAuto {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "φ({:?}, {:?})", self.side(), self.multiplier)
    }
}

impl WhiteheadAuto {
    pub fn new(partition: GWPartition, multiplier: Letter) -> Result<WhiteheadAuto, WhiteheadError> {
        if !partition.is_base(multiplier) {
            return Err(WhiteheadError::NotABase);
        }
        Ok(WhiteheadAuto { partition, multiplier })
    }

    pub fn partition(&self) -> &GWPartition {
        &self.partition
    }

    pub fn multiplier(&self) -> Letter {
        self.multiplier
    }

    /// The side containing the multiplier.
    pub fn side(&self) -> LetterSet {
        self.partition.side_containing(self.multiplier).expect("base lies in a side")
    }

    pub fn image_of_generator(&self, v: usize) -> Word {
        let m = self.multiplier;
        let p = self.side();
        let (x, xi) = (Letter::pos(v), Letter::neg(v));
        if v == m.vertex() {
            return Word::letter(x);
        }
        match (p.contains(x), p.contains(xi)) {
            (true, false) => Word::new(vec![x, m.inverse()]),
            (false, true) => Word::new(vec![m, x]),
            (true, true) => Word::new(vec![m, x, m.inverse()]),
            (false, false) => Word::letter(x),
        }
    }

    pub fn to_generator_map(&self, g: &SimplicialGraph) -> GeneratorMap {
        GeneratorMap { images: g.vertices().map(|v| self.image_of_generator(v)).collect() }
    }

    /// `φ(P, m)^-1 = φ(P - {m} + {m^-1}, m^-1)`.
    pub fn invert(&self, g: &SimplicialGraph) -> WhiteheadAuto {
        let m = self.multiplier;
        let side = self.side().without(m).with(m.inverse());
        let partition = make_partition(g, side, m.inverse()).expect("inverse side is a valid side");
        WhiteheadAuto { partition, multiplier: m.inverse() }
    }

    /// The same outer class, written with the opposite side and `m^-1`.
    pub fn flipped(&self) -> WhiteheadAuto {
        WhiteheadAuto { partition: self.partition, multiplier: self.multiplier.inverse() }
    }
}

/// An endomorphism given by the normal forms of the generator images.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GeneratorMap {
    images: Vec<Word>,
}

impl GeneratorMap {
    pub fn identity(g: &SimplicialGraph) -> GeneratorMap {
        GeneratorMap { images: g.vertices().map(|v| Word::letter(Letter::pos(v))).collect() }
    }

    /// Conjugation `v ↦ w^-1 v w`.
    pub fn conjugation(g: &SimplicialGraph, w: &Word) -> GeneratorMap {
        let wi = w.inverse();
        GeneratorMap {
            images: g
                .vertices()
                .map(|v| multiply(g, &wi, &Word::letter(Letter::pos(v)).concat(w)))
                .collect(),
        }
    }

    pub fn from_images(g: &SimplicialGraph, images: Vec<Word>) -> GeneratorMap {
        assert_eq!(images.len(), g.vertex_count());
        GeneratorMap { images: images.iter().map(|w| normalize(g, w).into_word()).collect() }
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, v: usize) -> &Word {
        &self.images[v]
    }

    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(v, w)| w.letters() == [Letter::pos(v)])
    }

    /// The image of an arbitrary word, in normal form.
    pub fn apply(&self, g: &SimplicialGraph, w: &Word) -> Word {
        let mut out = Vec::new();
        for l in w.letters() {
            let img = &self.images[l.vertex()];
            if l.is_inverse() {
                out.extend(img.inverse().letters().iter().copied());
            } else {
                out.extend(img.letters().iter().copied());
            }
        }
        normalize(g, &Word::new(out)).into_word()
    }
}

/// `f1 ∘ f2`: apply `f2` first.
pub fn compose(g: &SimplicialGraph, f1: &GeneratorMap, f2: &GeneratorMap) -> Result<GeneratorMap, WhiteheadError> {
    compose_with_ceiling(g, f1, f2, DEFAULT_WORD_CEILING)
}

pub fn compose_with_ceiling(
    g: &SimplicialGraph,
    f1: &GeneratorMap,
    f2: &GeneratorMap,
    ceiling: usize,
) -> Result<GeneratorMap, WhiteheadError> {
    let mut images = Vec::with_capacity(f2.images.len());
    for w in &f2.images {
        let img = f1.apply(g, w);
        if img.len() > ceiling {
            return Err(WhiteheadError::WordTooLong { len: img.len(), ceiling });
        }
        images.push(img);
    }
    Ok(GeneratorMap { images })
}

/// Composes a sequence left to right as functions: `fs[0] ∘ fs[1] ∘ ...`.
pub fn compose_all(g: &SimplicialGraph, fs: &[GeneratorMap]) -> Result<GeneratorMap, WhiteheadError> {
    let mut acc = GeneratorMap::identity(g);
    for f in fs {
        acc = compose(g, &acc, f)?;
    }
    Ok(acc)
}

/// Whether the outer classes of the two automorphisms commute, by the
/// partition criterion.
pub fn outer_commute_predicate(g: &SimplicialGraph, a1: &WhiteheadAuto, a2: &WhiteheadAuto) -> bool {
    let (m, n) = (a1.multiplier.vertex(), a2.multiplier.vertex());
    if g.commute(m, n) {
        return true;
    }
    compatible(g, &a1.partition, &a2.partition, CompatMode::Strong)
        && !a2.partition.splits(m)
        && !a1.partition.splits(n)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Innerness {
    /// Conjugation `v ↦ w^-1 v w` by the given shortest `w`.
    Inner(Word),
    NotInner,
    /// Inner, but the shortest conjugator is longer than the bound.
    Unknown,
}

/// Decides whether `f` is an inner automorphism.
///
/// The conjugators that work for a single generator `v` form a coset of the
/// centralizer `<st(v)>`; intersecting these cosets over all generators gives
/// every conjugator for `f`.
pub fn is_inner(g: &SimplicialGraph, f: &GeneratorMap, bound: usize) -> Innerness {
    let mut coset = ParabolicCoset::whole_group(g);
    for v in g.vertices() {
        let split = cyclic_split(g, f.image(v));
        if split.core.letters() != [Letter::pos(v)] {
            return Innerness::NotInner;
        }
        let here = ParabolicCoset { gens: g.star(v), rep: split.prefix.inverse() };
        match coset.intersect(g, &here) {
            Some(c) => coset = c,
            None => return Innerness::NotInner,
        }
    }
    let w = coset.shortest(g);
    debug_assert_eq!(&GeneratorMap::conjugation(g, &w), f);
    if w.len() <= bound {
        Innerness::Inner(w)
    } else {
        Innerness::Unknown
    }
}

/// The default conjugator bound for a map.
pub fn default_bound(f: &GeneratorMap) -> usize {
    f.max_image_len() + 2
}

/// Compares `a1 a2` with `a2 a1` up to an inner automorphism. `None` when
/// the answer exceeds `bound`.
pub fn outer_commute_oracle(
    g: &SimplicialGraph,
    a1: &WhiteheadAuto,
    a2: &WhiteheadAuto,
    bound: usize,
) -> Result<Option<bool>, WhiteheadError> {
    let commutator = compose_all(
        g,
        &[
            a1.to_generator_map(g),
            a2.to_generator_map(g),
            a1.invert(g).to_generator_map(g),
            a2.invert(g).to_generator_map(g),
        ],
    )?;
    Ok(match is_inner(g, &commutator, bound) {
        Innerness::Inner(_) => Some(true),
        Innerness::NotInner => Some(false),
        Innerness::Unknown => None,
    })
}

/// `φ(Q, m) = ι^inner_power ∘ ∏ factors`, where `ι` is `v ↦ m v m^-1`.
/// The factors share the multiplier `m`, so they commute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestDecomposition {
    pub factors: Vec<(WhiteheadAuto, i32)>,
    pub inner_power: i32,
}

impl NestDecomposition {
    pub fn to_generator_map(&self, g: &SimplicialGraph, m: Letter) -> Result<GeneratorMap, WhiteheadError> {
        let mut maps = Vec::new();
        let inner = GeneratorMap::conjugation(g, &Word::letter(m.inverse()));
        let inner_inv = GeneratorMap::conjugation(g, &Word::letter(m));
        for _ in 0..self.inner_power.abs() {
            maps.push(if self.inner_power > 0 { inner.clone() } else { inner_inv.clone() });
        }
        for (a, e) in &self.factors {
            let f = if *e > 0 { a.to_generator_map(g) } else { a.invert(g).to_generator_map(g) };
            for _ in 0..e.abs() {
                maps.push(f.clone());
            }
        }
        compose_all(g, &maps)
    }
}

/// Writes `φ(Q, m)` in terms of the automorphisms of a nest of partitions
/// based at `m`.
pub fn decompose_in_nest(
    g: &SimplicialGraph,
    q: &GWPartition,
    m: Letter,
    nest: &[GWPartition],
) -> Result<NestDecomposition, WhiteheadError> {
    if !q.is_base(m) || nest.iter().any(|p| !p.is_base(m)) {
        return Err(WhiteheadError::NotABase);
    }
    let mut sides: Vec<(LetterSet, GWPartition)> =
        nest.iter().map(|p| (p.side_containing(m).unwrap(), *p)).collect();
    sides.sort_by_key(|(s, p)| (s.len(), *p));
    sides.dedup_by_key(|(s, _)| *s);
    for w in sides.windows(2) {
        if !w[0].0.is_proper_subset(w[1].0) {
            return Err(WhiteheadError::NotNested);
        }
    }
    let core = |s: LetterSet| s.without(m);
    let everything = g.all_letters().difference(q.link()).without(m).without(m.inverse());
    let target = core(q.side_containing(m).unwrap());
    // Telescoping: the difference sets of the chain, then the remainder.
    let mut pieces = Vec::new();
    let mut prev = LetterSet::EMPTY;
    for (s, _) in &sides {
        pieces.push(core(*s).difference(prev));
        prev = core(*s);
    }
    pieces.push(everything.difference(prev));
    let mut take = Vec::with_capacity(pieces.len());
    for piece in &pieces {
        let inside = piece.intersection(target);
        if inside.is_empty() {
            take.push(0);
        } else if inside == *piece {
            take.push(1);
        } else {
            return Err(WhiteheadError::NestNotMaximal);
        }
    }
    let k = sides.len();
    let mut factors = Vec::new();
    for i in 0..k {
        let e = take[i] - take[i + 1];
        if e != 0 {
            factors.push((WhiteheadAuto::new(sides[i].1, m)?, e));
        }
    }
    Ok(NestDecomposition { factors, inner_power: take[k] })
}

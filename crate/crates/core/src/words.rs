//! Words in the right-angled Artin group: reduction, canonical normal forms,
//! cyclic reduction, conjugacy and parabolic coset arithmetic.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::graph::{GraphError, SimplicialGraph};
use crate::letter::{Letter, VertexSet};

/// Default limit on cyclically reduced length for the conjugacy closure.
pub const DEFAULT_CONJUGACY_GUARD: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("word of cyclic length {len} exceeds the conjugacy guard {guard}")]
    TooLong { len: usize, guard: usize },
    #[error(transparent)]
    Parse(#[from] GraphError),
}

/// A finite sequence of letters, not necessarily reduced.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Word {
        Word(vec![l])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Juxtaposition, without reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Parses whitespace-separated `name` / `name^-1` tokens.
    pub fn parse(g: &SimplicialGraph, text: &str) -> Result<Word, GraphError> {
        text.split_whitespace().map(|t| g.parse_letter(t)).collect::<Result<_, _>>().map(Word)
    }

    pub fn display<'a>(&'a self, g: &'a SimplicialGraph) -> impl fmt::Display + 'a {
        DisplayWord { word: self, graph: g }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

struct DisplayWord<'a> {
    word: &'a Word,
    graph: &'a SimplicialGraph,
}

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.word.letters().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(&self.graph.letter_name(*l))?;
        }
        Ok(())
    }
}

/// The canonical representative of a group element: fully reduced and
/// lexicographically least among its shuffles.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct NormalForm(Word);

impl NormalForm {
    pub fn as_word(&self) -> &Word {
        &self.0
    }

    pub fn into_word(self) -> Word {
        self.0
    }

    pub fn letters(&self) -> &[Letter] {
        self.0.letters()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn independent(g: &SimplicialGraph, a: Letter, b: Letter) -> bool {
    a.vertex() != b.vertex() && g.adjacent(a.vertex(), b.vertex())
}

/// Appends `x` to an already reduced sequence, cancelling if `x^-1` can be
/// shuffled to the end.
fn push_reduced(g: &SimplicialGraph, stack: &mut Vec<Letter>, x: Letter) {
    for j in (0..stack.len()).rev() {
        let y = stack[j];
        if y == x.inverse() {
            stack.remove(j);
            return;
        }
        if !independent(g, x, y) {
            break;
        }
    }
    stack.push(x);
}

/// Reduces without choosing a canonical shuffle.
pub fn reduce(g: &SimplicialGraph, letters: &[Letter]) -> Vec<Letter> {
    let mut stack = Vec::with_capacity(letters.len());
    for &x in letters {
        push_reduced(g, &mut stack, x);
    }
    stack
}

/// Lexicographically least shuffle of a reduced sequence.
fn least_shuffle(g: &SimplicialGraph, mut rest: Vec<Letter>) -> Vec<Letter> {
    let mut out = Vec::with_capacity(rest.len());
    while !rest.is_empty() {
        let mut best = 0;
        for i in 1..rest.len() {
            if rest[i] < rest[best] && rest[..i].iter().all(|&y| independent(g, rest[i], y)) {
                best = i;
            }
        }
        out.push(rest.remove(best));
    }
    out
}

pub fn normalize(g: &SimplicialGraph, w: &Word) -> NormalForm {
    NormalForm(Word(least_shuffle(g, reduce(g, w.letters()))))
}

/// Normal form of the product `a b`.
pub fn multiply(g: &SimplicialGraph, a: &Word, b: &Word) -> Word {
    normalize(g, &a.concat(b)).into_word()
}

pub fn equal(g: &SimplicialGraph, w1: &Word, w2: &Word) -> bool {
    normalize(g, w1) == normalize(g, w2)
}

/// Indices of letters that can be shuffled to the front.
fn first_movable(g: &SimplicialGraph, w: &[Letter]) -> Vec<usize> {
    (0..w.len()).filter(|&i| w[..i].iter().all(|&y| independent(g, w[i], y))).collect()
}

fn last_movable(g: &SimplicialGraph, w: &[Letter]) -> Vec<usize> {
    (0..w.len()).filter(|&i| w[i + 1..].iter().all(|&y| independent(g, w[i], y))).collect()
}

/// A reduced word written as `prefix * core * prefix^-1` with `core`
/// cyclically reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicSplit {
    pub prefix: Word,
    pub core: Word,
}

pub fn cyclic_split(g: &SimplicialGraph, w: &Word) -> CyclicSplit {
    let mut core = reduce(g, w.letters());
    let mut prefix = Vec::new();
    'outer: loop {
        let last = last_movable(g, &core);
        for i in first_movable(g, &core) {
            if let Some(&j) = last.iter().find(|&&j| core[j] == core[i].inverse()) {
                prefix.push(core[i]);
                core.remove(j);
                core.remove(i);
                continue 'outer;
            }
        }
        break;
    }
    CyclicSplit { prefix: Word(prefix), core: Word(core) }
}

pub fn cyclic_reduce(g: &SimplicialGraph, w: &Word) -> Word {
    cyclic_split(g, w).core
}

/// Every normal form reachable from a cyclically reduced word by shuffles and
/// rotations.
fn cyclic_closure(g: &SimplicialGraph, core: &Word) -> HashSet<Vec<Letter>> {
    let start = least_shuffle(g, core.letters().to_vec());
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(w) = queue.pop_front() {
        for i in first_movable(g, &w) {
            let mut next = w.clone();
            let x = next.remove(i);
            next.push(x);
            let next = least_shuffle(g, next);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen
}

pub fn is_conjugate(g: &SimplicialGraph, w1: &Word, w2: &Word) -> Result<bool, WordError> {
    is_conjugate_with_guard(g, w1, w2, DEFAULT_CONJUGACY_GUARD)
}

pub fn is_conjugate_with_guard(
    g: &SimplicialGraph,
    w1: &Word,
    w2: &Word,
    guard: usize,
) -> Result<bool, WordError> {
    let (c1, c2) = (cyclic_reduce(g, w1), cyclic_reduce(g, w2));
    if c1.len() != c2.len() {
        return Ok(false);
    }
    if c1.len() > guard {
        return Err(WordError::TooLong { len: c1.len(), guard });
    }
    let mut counts1: Vec<Letter> = c1.letters().to_vec();
    let mut counts2: Vec<Letter> = c2.letters().to_vec();
    counts1.sort_unstable();
    counts2.sort_unstable();
    if counts1 != counts2 {
        return Ok(false);
    }
    let target = least_shuffle(g, c2.letters().to_vec());
    Ok(cyclic_closure(g, &c1).contains(&target))
}

pub fn cyclic_normal_form(g: &SimplicialGraph, w: &Word) -> Result<NormalForm, WordError> {
    let core = cyclic_reduce(g, w);
    if core.len() > DEFAULT_CONJUGACY_GUARD {
        return Err(WordError::TooLong { len: core.len(), guard: DEFAULT_CONJUGACY_GUARD });
    }
    let least = cyclic_closure(g, &core).into_iter().min().unwrap_or_default();
    Ok(NormalForm(Word(least)))
}

/// Splits reduced `w` as `a * rest` where `a` is the largest prefix using
/// only vertices of `allowed`.
pub fn split_prefix(g: &SimplicialGraph, w: &[Letter], allowed: VertexSet) -> (Vec<Letter>, Vec<Letter>) {
    let mut rest = w.to_vec();
    let mut prefix = Vec::new();
    'outer: loop {
        for i in 0..rest.len() {
            if allowed.contains(rest[i].vertex()) && rest[..i].iter().all(|&y| independent(g, rest[i], y)) {
                prefix.push(rest.remove(i));
                continue 'outer;
            }
        }
        return (prefix, rest);
    }
}

/// Splits reduced `w` as `rest * b` where `b` is the largest suffix using only
/// vertices of `allowed`.
pub fn split_suffix(g: &SimplicialGraph, w: &[Letter], allowed: VertexSet) -> (Vec<Letter>, Vec<Letter>) {
    let rev: Vec<Letter> = w.iter().rev().copied().collect();
    let (mut suffix, mut rest) = split_prefix(g, &rev, allowed);
    suffix.reverse();
    rest.reverse();
    (rest, suffix)
}

/// A right coset `<gens> * rep` of a standard parabolic subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParabolicCoset {
    pub gens: VertexSet,
    pub rep: Word,
}

impl ParabolicCoset {
    pub fn whole_group(g: &SimplicialGraph) -> ParabolicCoset {
        ParabolicCoset { gens: g.all_vertices(), rep: Word::empty() }
    }

    /// `None` when the cosets are disjoint.
    pub fn intersect(&self, g: &SimplicialGraph, other: &ParabolicCoset) -> Option<ParabolicCoset> {
        let u = multiply(g, &self.rep, &other.rep.inverse());
        let (p, rest) = split_prefix(g, u.letters(), self.gens);
        let (core, _) = split_suffix(g, &rest, other.gens);
        if !core.is_empty() {
            return None;
        }
        let rep = multiply(g, &Word(p).inverse(), &self.rep);
        Some(ParabolicCoset { gens: self.gens.intersection(other.gens), rep })
    }

    /// The unique shortest element.
    pub fn shortest(&self, g: &SimplicialGraph) -> Word {
        let (_, rest) = split_prefix(g, normalize(g, &self.rep).letters(), self.gens);
        normalize(g, &Word(rest)).into_word()
    }
}

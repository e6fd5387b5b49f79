//! Letters of `V^±` and fixed-width bitsets over vertices and letters.
//!
//! A vertex is a `usize` index into the graph's declaration order. A letter
//! is encoded as `2 * vertex + sign_bit`, where the sign bit is set for the
//! inverse generator. Both kinds of set fit in a `u64`, which caps graphs at
//! [`MAX_VERTICES`] vertices.

use std::cmp::Ordering;
use std::fmt;

/// Largest supported vertex count (letters use `2 * MAX_VERTICES` bits).
pub const MAX_VERTICES: usize = 32;

/// An element of `V^±`: a vertex together with a sign.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u8);

impl Letter {
    pub fn new(vertex: usize, inverse: bool) -> Letter {
        debug_assert!(vertex < MAX_VERTICES);
        Letter((vertex as u8) << 1 | inverse as u8)
    }

    pub fn pos(vertex: usize) -> Letter {
        Letter::new(vertex, false)
    }

    pub fn neg(vertex: usize) -> Letter {
        Letter::new(vertex, true)
    }

    pub fn from_code(code: usize) -> Letter {
        debug_assert!(code < 2 * MAX_VERTICES);
        Letter(code as u8)
    }

    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn vertex(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    /// `+1` or `-1`.
    pub fn sign(self) -> i32 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "v{}^-1", self.vertex())
        } else {
            write!(f, "v{}", self.vertex())
        }
    }
}

/// A set of vertices, one bit per vertex index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn from_bits(bits: u64) -> VertexSet {
        VertexSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn full(n: usize) -> VertexSet {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> VertexSet {
        VertexSet(1 << v)
    }

    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1 << v);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset(self, other: VertexSet) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        BitIter(self.0)
    }

    /// Both letters of every vertex in the set.
    pub fn letters(self) -> LetterSet {
        let mut out = 0u64;
        for v in self.iter() {
            out |= 0b11 << (2 * v);
        }
        LetterSet(out)
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A set of letters, one bit per letter code.
///
/// Ordered lexicographically by sorted letter sequence, so "sorted by least
/// letter" on disjoint sets agrees with this order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct LetterSet(u64);

impl LetterSet {
    pub const EMPTY: LetterSet = LetterSet(0);

    pub fn from_bits(bits: u64) -> LetterSet {
        LetterSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// All of `V^±` for an `n`-vertex graph.
    pub fn all(n: usize) -> LetterSet {
        VertexSet::full(n).letters()
    }

    pub fn singleton(l: Letter) -> LetterSet {
        LetterSet(1 << l.code())
    }

    pub fn contains(self, l: Letter) -> bool {
        self.0 >> l.code() & 1 == 1
    }

    pub fn insert(&mut self, l: Letter) {
        self.0 |= 1 << l.code();
    }

    pub fn remove(&mut self, l: Letter) {
        self.0 &= !(1 << l.code());
    }

    pub fn with(mut self, l: Letter) -> LetterSet {
        self.insert(l);
        self
    }

    pub fn without(mut self, l: Letter) -> LetterSet {
        self.remove(l);
        self
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: LetterSet) -> LetterSet {
        LetterSet(self.0 | other.0)
    }

    pub fn intersection(self, other: LetterSet) -> LetterSet {
        LetterSet(self.0 & other.0)
    }

    pub fn difference(self, other: LetterSet) -> LetterSet {
        LetterSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: LetterSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: LetterSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset(self, other: LetterSet) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn first(self) -> Option<Letter> {
        if self.0 == 0 {
            None
        } else {
            Some(Letter::from_code(self.0.trailing_zeros() as usize))
        }
    }

    pub fn iter(self) -> impl Iterator<Item = Letter> {
        BitIter(self.0).map(Letter::from_code)
    }

    /// Vertices with at least one letter in the set.
    pub fn vertices(self) -> VertexSet {
        let mut out = VertexSet::EMPTY;
        for l in self.iter() {
            out.insert(l.vertex());
        }
        out
    }

    /// Swaps every letter with its inverse.
    pub fn inverted(self) -> LetterSet {
        const EVEN: u64 = 0x5555_5555_5555_5555;
        LetterSet((self.0 & EVEN) << 1 | (self.0 >> 1) & EVEN)
    }
}

impl FromIterator<Letter> for LetterSet {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        let mut s = LetterSet::EMPTY;
        for l in iter {
            s.insert(l);
        }
        s
    }
}

impl Ord for LetterSet {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0 == other.0 {
            return Ordering::Equal;
        }
        let diff = self.0 ^ other.0;
        let x = diff.trailing_zeros();
        let above = if x >= 63 { 0 } else { !((1u64 << (x + 1)) - 1) };
        if self.0 >> x & 1 == 1 {
            // `self` has the first differing element; it is smaller unless
            // `other` ends before reaching it.
            if other.0 & above != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        } else if self.0 & above != 0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl PartialOrd for LetterSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for LetterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

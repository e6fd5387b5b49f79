//! The star of the base vertex in the spine: cubes indexed by compatible
//! collections, free faces and the collapse of the top-dimensional cubes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::clique::{self, CliqueError};
use crate::graph::SimplicialGraph;
use crate::letter::{Letter, LetterSet};
use crate::partition::{compatible, enumerate_partitions, CompatMode, GWPartition};
use crate::rank::{compatibility_graph, CompatibleCollection};

/// Default ceiling on the number of collections materialized in a star.
pub const DEFAULT_STAR_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpineError {
    #[error(transparent)]
    Clique(#[from] CliqueError),
    #[error("partition {0:?} is based at a principal vertex")]
    PrincipalPartition(GWPartition),
    #[error("partition {0:?} is not in the collection")]
    NotAMember(GWPartition),
    #[error("collection is not of maximum size")]
    NotMaximum,
    #[error("graph is not barbed")]
    NotBarbed,
    #[error("maximum collections are principal (M(V) = M(L) = {0})")]
    NoGap(usize),
    #[error("no irreplaceable non-principal partition in a top collection")]
    NoFreeFace(CompatibleCollection),
}

/// The cube spanned by two nested collections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cube {
    pub lower: CompatibleCollection,
    pub upper: CompatibleCollection,
}

impl Cube {
    pub fn dimension(&self) -> usize {
        self.upper.len() - self.lower.len()
    }

    pub fn is_face_of(&self, other: &Cube) -> bool {
        let within = |a: &CompatibleCollection, b: &CompatibleCollection| a.partitions().iter().all(|p| b.contains(p));
        within(&other.lower, &self.lower) && within(&self.upper, &other.upper)
    }
}

/// Every weakly compatible collection, as sorted index lists into
/// `partitions`, in lexicographic order.
#[derive(Debug, Clone)]
pub struct StarComplex {
    pub partitions: Vec<GWPartition>,
    pub collections: Vec<Vec<usize>>,
    pub top_dimension: usize,
    mode: CompatMode,
}

impl StarComplex {
    pub fn mode(&self) -> CompatMode {
        self.mode
    }

    pub fn collection(&self, g: &SimplicialGraph, i: usize) -> CompatibleCollection {
        let parts = self.collections[i].iter().map(|&k| self.partitions[k]).collect();
        CompatibleCollection::new(g, parts, self.mode).expect("star collections are compatible")
    }

    /// Number of cubes of each dimension. A collection of size `s` is the
    /// top of `C(s, k)` cubes of dimension `k`.
    pub fn census(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.top_dimension + 1];
        let mut binom = vec![vec![0u64; self.top_dimension + 1]; self.top_dimension + 1];
        for s in 0..=self.top_dimension {
            binom[s][0] = 1;
            for k in 1..=s {
                binom[s][k] = binom[s - 1][k - 1] + if k < s { binom[s - 1][k] } else { 0 };
            }
        }
        for c in &self.collections {
            for (k, count) in counts.iter_mut().enumerate().take(c.len() + 1) {
                *count += binom[c.len()][k];
            }
        }
        counts
    }

    /// Covering pairs `(smaller, larger)` of the containment order.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let index: BTreeMap<&[usize], usize> = self.collections.iter().enumerate().map(|(i, c)| (&c[..], i)).collect();
        let mut edges = Vec::new();
        for (i, c) in self.collections.iter().enumerate() {
            for skip in 0..c.len() {
                let face: Vec<usize> = c.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &p)| p).collect();
                edges.push((index[&face[..]], i));
            }
        }
        edges.sort_unstable();
        edges
    }

    pub fn to_dot(&self, g: &SimplicialGraph) -> String {
        let mut out = String::from("digraph star {\n  rankdir=BT;\n  node [shape=box, fontsize=10];\n");
        for (i, c) in self.collections.iter().enumerate() {
            let label = if c.is_empty() {
                "∅".to_string()
            } else {
                c.iter().map(|&k| self.partitions[k].display(g).to_string()).collect::<Vec<_>>().join("\\n")
            };
            let _ = writeln!(out, "  n{i} [label=\"{label}\"];");
        }
        for (a, b) in self.hasse_edges() {
            let _ = writeln!(out, "  n{a} -> n{b};");
        }
        out.push_str("}\n");
        out
    }
}

pub fn build_star(g: &SimplicialGraph, mode: CompatMode, budget: u64) -> Result<StarComplex, SpineError> {
    let partitions = enumerate_partitions(g, g.all_vertices());
    let adj = compatibility_graph(g, &partitions, mode);
    let collections = clique::all_cliques(&adj, budget)?;
    let top_dimension = collections.iter().map(Vec::len).max().unwrap_or(0);
    Ok(StarComplex { partitions, collections, top_dimension, mode })
}

fn non_principal_base(g: &SimplicialGraph, q: &GWPartition) -> Result<usize, SpineError> {
    let rel = g.relations();
    let bases = q.base_vertices();
    if bases.iter().any(|v| rel.is_principal(v)) {
        return Err(SpineError::PrincipalPartition(*q));
    }
    Ok(bases.first().expect("partitions have a base"))
}

/// Looks for principal letters `m` on one side and `n` on the other, both
/// strictly above the base in the link order, whose truncations of the two
/// sides are sides of members of `pi`. Returns `(m, n)`.
pub fn is_sandwiched(
    g: &SimplicialGraph,
    q: &GWPartition,
    pi: &CompatibleCollection,
) -> Result<Option<(Letter, Letter)>, SpineError> {
    if !pi.contains(q) {
        return Err(SpineError::NotAMember(*q));
    }
    let u = non_principal_base(g, q)?;
    let rel = g.relations();
    let sides: BTreeSet<LetterSet> = pi.sides().into_iter().collect();
    let flanks = |side: LetterSet| -> Vec<Letter> {
        side.iter()
            .filter(|l| {
                let m = l.vertex();
                rel.is_principal(m) && rel.lt_circ(u, m)
            })
            .filter(|&l| {
                let truncated = side.without(l).difference(g.link(l.vertex()).letters());
                sides.contains(&truncated)
            })
            .collect()
    };
    for (own, other) in [(q.side_p(), q.side_q()), (q.side_q(), q.side_p())] {
        if let (Some(&m), Some(&n)) = (flanks(own).first(), flanks(other).first()) {
            return Ok(Some((m, n)));
        }
    }
    Ok(None)
}

/// Partitions other than those of `rest` that are weakly compatible with
/// every member of `rest`.
pub fn replacements(g: &SimplicialGraph, rest: &[GWPartition]) -> Vec<GWPartition> {
    enumerate_partitions(g, g.all_vertices())
        .into_iter()
        .filter(|c| !rest.contains(c) && rest.iter().all(|p| compatible(g, p, c, CompatMode::Weak)))
        .collect()
}

/// `q` is the only partition completing `pi` with `q` removed.
pub fn is_irreplaceable(g: &SimplicialGraph, q: &GWPartition, pi: &CompatibleCollection) -> Result<bool, SpineError> {
    if !pi.contains(q) {
        return Err(SpineError::NotAMember(*q));
    }
    let rest: Vec<GWPartition> = pi.partitions().iter().copied().filter(|p| p != q).collect();
    Ok(replacements(g, &rest) == [*q])
}

/// A side of `pi` is innermost among non-principal sides when no other
/// non-principal side is properly contained in it.
pub fn innermost_non_principal_sides(g: &SimplicialGraph, pi: &CompatibleCollection) -> Vec<(LetterSet, GWPartition)> {
    let rel = g.relations();
    let np: Vec<(LetterSet, GWPartition)> = pi
        .partitions()
        .iter()
        .filter(|p| !p.base_vertices().iter().any(|v| rel.is_principal(v)))
        .flat_map(|p| p.sides().into_iter().map(move |s| (s, *p)))
        .collect();
    np.iter()
        .filter(|(s, _)| !np.iter().any(|(t, _)| t.is_proper_subset(*s)))
        .copied()
        .collect()
}

/// Finds an irreplaceable non-principal member by scanning innermost
/// non-principal sides, replacing unsandwiched ones by principal partitions.
pub fn scan_for_irreplaceable(g: &SimplicialGraph, pi: &CompatibleCollection) -> Result<Option<GWPartition>, SpineError> {
    let rel = g.relations();
    let is_principal = |p: &GWPartition| p.base_vertices().iter().any(|v| rel.is_principal(v));
    let mut current = pi.clone();
    for _ in 0..=pi.len() {
        let inner = innermost_non_principal_sides(g, &current);
        let Some(&(_, r)) = inner.first() else {
            return Ok(None);
        };
        if is_sandwiched(g, &r, &current)?.is_some() {
            // Sandwiched in the modified collection implies sandwiched in
            // the original one.
            return Ok(pi.contains(&r).then_some(r));
        }
        let rest: Vec<GWPartition> = current.partitions().iter().copied().filter(|p| *p != r).collect();
        let Some(principal) = replacements(g, &rest).into_iter().find(|c| is_principal(c)) else {
            return Ok(None);
        };
        let mut next = rest;
        next.push(principal);
        current = CompatibleCollection::new(g, next, CompatMode::Weak).expect("replacement keeps compatibility");
    }
    Ok(None)
}

/// A top cube and the free face through which it collapses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeFacePair {
    pub top: CompatibleCollection,
    pub removed: GWPartition,
}

impl FreeFacePair {
    pub fn face(&self, g: &SimplicialGraph) -> CompatibleCollection {
        let rest = self.top.partitions().iter().copied().filter(|p| *p != self.removed).collect();
        CompatibleCollection::new(g, rest, self.top.mode()).expect("subcollections stay compatible")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapseReport {
    pub top_dimension: usize,
    pub removed_pairs: Vec<FreeFacePair>,
    pub residual_dimension: usize,
}

/// The maximum-size weakly compatible collections, canonically ordered.
pub fn top_collections(g: &SimplicialGraph, budget: u64) -> Result<Vec<CompatibleCollection>, SpineError> {
    let parts = enumerate_partitions(g, g.all_vertices());
    let adj = compatibility_graph(g, &parts, CompatMode::Weak);
    let size = clique::max_clique(&adj, budget)?.len();
    Ok(clique::cliques_of_size(&adj, size, budget)?
        .into_iter()
        .map(|c| {
            let members = c.iter().map(|&i| parts[i]).collect();
            CompatibleCollection::new(g, members, CompatMode::Weak).expect("cliques are compatible")
        })
        .collect())
}

/// Every irreplaceable non-principal member of a top collection.
pub fn irreplaceable_members(g: &SimplicialGraph, pi: &CompatibleCollection) -> Result<Vec<GWPartition>, SpineError> {
    let rel = g.relations();
    let mut out = Vec::new();
    for q in pi.partitions() {
        if q.base_vertices().iter().any(|v| rel.is_principal(v)) {
            continue;
        }
        if is_irreplaceable(g, q, pi)? {
            out.push(*q);
        }
    }
    Ok(out)
}

/// Pairs each top cube with a free face and removes both.
pub fn collapse_pass(g: &SimplicialGraph, budget: u64) -> Result<CollapseReport, SpineError> {
    if !g.is_barbed() {
        return Err(SpineError::NotBarbed);
    }
    let rel = g.relations();
    let tops = top_collections(g, budget)?;
    let top_dimension = tops.first().map_or(0, CompatibleCollection::len);
    let principal_parts = enumerate_partitions(g, rel.principal);
    let principal_adj = compatibility_graph(g, &principal_parts, CompatMode::Weak);
    let principal_rank = clique::max_clique(&principal_adj, budget)?.len();
    if principal_rank >= top_dimension {
        return Err(SpineError::NoGap(top_dimension));
    }
    let mut removed_pairs = Vec::with_capacity(tops.len());
    for top in tops {
        let candidates = irreplaceable_members(g, &top)?;
        let scanned = scan_for_irreplaceable(g, &top)?;
        let Some(&removed) = candidates.first() else {
            return Err(SpineError::NoFreeFace(top));
        };
        if scanned.is_some_and(|s| !candidates.contains(&s)) {
            return Err(SpineError::NoFreeFace(top));
        }
        removed_pairs.push(FreeFacePair { top, removed });
    }
    // Every top cube is gone; faces of one dimension lower survive unless
    // they were all used as free faces.
    let faces: BTreeSet<Vec<GWPartition>> =
        removed_pairs.iter().map(|p| p.face(g).partitions().to_vec()).collect();
    let residual_dimension = if top_dimension == 0 {
        0
    } else {
        let parts = enumerate_partitions(g, g.all_vertices());
        let adj = compatibility_graph(g, &parts, CompatMode::Weak);
        let below = clique::cliques_of_size(&adj, top_dimension - 1, budget)?.len();
        if below > faces.len() {
            top_dimension - 1
        } else {
            top_dimension.saturating_sub(2)
        }
    };
    Ok(CollapseReport { top_dimension, removed_pairs, residual_dimension })
}

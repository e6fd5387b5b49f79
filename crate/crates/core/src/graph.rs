//! The defining graph: parsing, links and stars, vertex orders, inseparable
//! sets, barbedness and graph automorphisms.

use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

use crate::letter::{Letter, LetterSet, VertexSet, MAX_VERTICES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: duplicate vertex `{name}`")]
    DuplicateVertex { line: usize, name: String },
    #[error("line {line}: loop edge at `{name}`")]
    LoopEdge { line: usize, name: String },
    #[error("line {line}: unknown vertex `{name}`")]
    UnknownVertex { line: usize, name: String },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("missing `vertices:` line")]
    MissingVertices,
    #[error("graph has {0} vertices; at most {MAX_VERTICES} are supported")]
    TooManyVertices(usize),
    #[error("unknown vertex `{0}`")]
    NoSuchVertex(String),
    #[error("no fixture named `{0}`")]
    UnknownFixture(String),
}

/// A finite simplicial graph with a total order on its vertices.
#[derive(Clone, PartialEq, Eq)]
pub struct SimplicialGraph {
    names: Vec<String>,
    adj: Vec<VertexSet>,
}

impl std::fmt::Debug for SimplicialGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && !name
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '-' | '^' | '|' | '{' | '}' | '*' | ',' | '#'))
}

impl SimplicialGraph {
    /// Builds a graph from names and an edge list of index pairs.
    pub fn new<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        edges: &[(usize, usize)],
    ) -> Result<SimplicialGraph, GraphError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(names.len()));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(GraphError::DuplicateVertex { line: 0, name: n.clone() });
            }
        }
        let mut adj = vec![VertexSet::EMPTY; names.len()];
        for &(u, v) in edges {
            if u >= names.len() || v >= names.len() {
                return Err(GraphError::NoSuchVertex(format!("{}", u.max(v))));
            }
            if u == v {
                return Err(GraphError::LoopEdge { line: 0, name: names[u].clone() });
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(SimplicialGraph { names, adj })
    }

    /// Builds a graph from names and `"u-v"` edge tokens.
    pub fn from_named_edges(names: &[&str], edges: &[&str]) -> Result<SimplicialGraph, GraphError> {
        let mut text = format!("vertices: {}\nedges:", names.join(" "));
        for e in edges {
            text.push(' ');
            text.push_str(e);
        }
        parse_graph(&text)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.names.len()
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.vertex_count())
    }

    pub fn all_letters(&self) -> LetterSet {
        LetterSet::all(self.vertex_count())
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn vertex(&self, name: &str) -> Result<usize, GraphError> {
        self.index_of(name).ok_or_else(|| GraphError::NoSuchVertex(name.to_string()))
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    /// `[u, v] = 1` in `A_Γ`: equal or adjacent.
    pub fn commute(&self, u: usize, v: usize) -> bool {
        u == v || self.adjacent(u, v)
    }

    pub fn link(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    pub fn star(&self, v: usize) -> VertexSet {
        let mut s = self.adj[v];
        s.insert(v);
        s
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in self.vertices() {
            for v in self.adj[u].iter().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    /// Writes the graph in the text file format, canonically.
    pub fn to_text(&self) -> String {
        let mut s = format!("vertices: {}\nedges:", self.names.join(" "));
        for (u, v) in self.edges() {
            let _ = write!(s, " {}-{}", self.names[u], self.names[v]);
        }
        s.push('\n');
        s
    }

    pub fn letter_name(&self, l: Letter) -> String {
        if l.is_inverse() {
            format!("{}^-1", self.names[l.vertex()])
        } else {
            self.names[l.vertex()].clone()
        }
    }

    /// Parses `name` or `name^-1`.
    pub fn parse_letter(&self, token: &str) -> Result<Letter, GraphError> {
        let (name, inverse) = match token.strip_suffix("^-1") {
            Some(n) => (n, true),
            None => (token, false),
        };
        Ok(Letter::new(self.vertex(name)?, inverse))
    }

    pub fn format_letters(&self, set: LetterSet) -> String {
        set.iter().map(|l| self.letter_name(l)).collect::<Vec<_>>().join(" ")
    }

    pub fn format_vertices(&self, set: VertexSet) -> String {
        set.iter().map(|v| self.names[v].as_str()).collect::<Vec<_>>().join(" ")
    }

    /// Shortest-path distance; `None` when `u` and `v` are disconnected.
    pub fn distance(&self, u: usize, v: usize) -> Option<usize> {
        self.distances_from(u)[v]
    }

    pub fn distances_from(&self, u: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        dist[u] = Some(0);
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap();
            for y in self.adj[x].iter() {
                if dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Connected components of the subgraph induced on `within`, each sorted
    /// by least vertex.
    pub fn components(&self, within: VertexSet) -> Vec<VertexSet> {
        let mut left = within;
        let mut out = Vec::new();
        while let Some(start) = left.first() {
            let mut comp = VertexSet::singleton(start);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = VertexSet::EMPTY;
                for x in frontier.iter() {
                    next = next.union(self.adj[x]);
                }
                frontier = next.intersection(within).difference(comp);
                comp = comp.union(frontier);
            }
            left = left.difference(comp);
            out.push(comp);
        }
        out
    }

    /// The `m`-inseparable sets `I(m)`, sorted by least letter.
    ///
    /// Singleton components `{u}` of `Γ - lk(m)` contribute `{u}` and
    /// `{u^-1}`; larger components `C` contribute `C^±`.
    pub fn inseparable_sets(&self, m: Letter) -> Vec<LetterSet> {
        self.inseparable_sets_of_vertex(m.vertex())
    }

    pub fn inseparable_sets_of_vertex(&self, m: usize) -> Vec<LetterSet> {
        let rest = self.all_vertices().difference(self.link(m));
        let mut out = Vec::new();
        for comp in self.components(rest) {
            if comp.len() == 1 {
                let u = comp.first().unwrap();
                out.push(LetterSet::singleton(Letter::pos(u)));
                out.push(LetterSet::singleton(Letter::neg(u)));
            } else {
                out.push(comp.letters());
            }
        }
        out.sort();
        out
    }

    /// The vertex relations `≤∘`, `≤⋆`, `≤`, equivalence classes, principal
    /// and maximal vertices.
    pub fn relations(&self) -> VertexRelations {
        VertexRelations::compute(self)
    }

    /// `None` when the graph is barbed, otherwise a violating pair `(u, v)`:
    /// `u` non-principal, `d(u, v) = 2` and `lk(u)` not strictly inside `lk(v)`.
    pub fn barbed_violation(&self) -> Option<(usize, usize)> {
        let rel = self.relations();
        for u in self.vertices().filter(|&u| !rel.is_principal(u)) {
            let dist = self.distances_from(u);
            for v in self.vertices() {
                if dist[v] == Some(2) && !self.link(u).is_proper_subset(self.link(v)) {
                    return Some((u, v));
                }
            }
        }
        None
    }

    pub fn is_barbed(&self) -> bool {
        self.barbed_violation().is_none()
    }

    /// All adjacency-preserving vertex permutations, sorted; `perm[v]` is the
    /// image of `v`.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        // Refine the degree partition by the multiset of neighbour degrees.
        let mut color: Vec<usize> = self.vertices().map(|v| self.degree(v)).collect();
        loop {
            let mut sigs: Vec<(usize, Vec<usize>)> = self
                .vertices()
                .map(|v| {
                    let mut nb: Vec<usize> = self.adj[v].iter().map(|w| color[w]).collect();
                    nb.sort_unstable();
                    (color[v], nb)
                })
                .collect();
            let mut distinct = sigs.clone();
            distinct.sort();
            distinct.dedup();
            let next: Vec<usize> = sigs
                .iter_mut()
                .map(|s| distinct.binary_search(s).unwrap())
                .collect();
            let before = color.iter().collect::<std::collections::BTreeSet<_>>().len();
            let after = next.iter().collect::<std::collections::BTreeSet<_>>().len();
            color = next;
            if after == before {
                break;
            }
        }
        let mut out = Vec::new();
        let mut perm = vec![usize::MAX; n];
        let mut used = VertexSet::EMPTY;
        self.extend_automorphism(0, &color, &mut perm, &mut used, &mut out);
        out.sort();
        out
    }

    fn extend_automorphism(
        &self,
        v: usize,
        color: &[usize],
        perm: &mut Vec<usize>,
        used: &mut VertexSet,
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = self.vertex_count();
        if v == n {
            out.push(perm.clone());
            return;
        }
        for w in 0..n {
            if used.contains(w) || color[w] != color[v] {
                continue;
            }
            let consistent = (0..v).all(|u| self.adjacent(u, v) == self.adjacent(perm[u], w));
            if !consistent {
                continue;
            }
            perm[v] = w;
            used.insert(w);
            self.extend_automorphism(v + 1, color, perm, used, out);
            used.remove(w);
            perm[v] = usize::MAX;
        }
    }
}

/// Parses the graph text format.
///
/// ```text
/// # comment
/// vertices: a b c
/// edges: a-b
///   b-c
/// ```
pub fn parse_graph(text: &str) -> Result<SimplicialGraph, GraphError> {
    let mut names: Option<Vec<String>> = None;
    let mut edges: Vec<(String, String, usize)> = Vec::new();
    let mut in_edges = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let rest = if let Some(rest) = line.strip_prefix("vertices:") {
            if names.is_some() {
                return Err(GraphError::Malformed { line: line_no, message: "second `vertices:` line".into() });
            }
            let mut list: Vec<String> = Vec::new();
            for tok in rest.split_whitespace() {
                if !valid_name(tok) {
                    return Err(GraphError::Malformed {
                        line: line_no,
                        message: format!("invalid vertex name `{tok}`"),
                    });
                }
                if list.iter().any(|n| n == tok) {
                    return Err(GraphError::DuplicateVertex { line: line_no, name: tok.to_string() });
                }
                list.push(tok.to_string());
            }
            if list.len() > MAX_VERTICES {
                return Err(GraphError::TooManyVertices(list.len()));
            }
            names = Some(list);
            in_edges = false;
            continue;
        } else if let Some(rest) = line.strip_prefix("edges:") {
            if names.is_none() {
                return Err(GraphError::MissingVertices);
            }
            in_edges = true;
            rest
        } else if in_edges {
            line
        } else {
            return Err(GraphError::Malformed { line: line_no, message: format!("unexpected `{line}`") });
        };
        for tok in rest.split_whitespace() {
            let Some((u, v)) = tok.split_once('-') else {
                return Err(GraphError::Malformed { line: line_no, message: format!("edge `{tok}` is not `u-v`") });
            };
            edges.push((u.to_string(), v.to_string(), line_no));
        }
    }
    let names = names.ok_or(GraphError::MissingVertices)?;
    let mut adj = vec![VertexSet::EMPTY; names.len()];
    let index = |name: &str, line: usize| {
        names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| GraphError::UnknownVertex { line, name: name.to_string() })
    };
    for (u, v, line) in &edges {
        let (a, b) = (index(u, *line)?, index(v, *line)?);
        if a == b {
            return Err(GraphError::LoopEdge { line: *line, name: u.clone() });
        }
        adj[a].insert(b);
        adj[b].insert(a);
    }
    Ok(SimplicialGraph { names, adj })
}

/// An equivalence class of `∼`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivClass {
    pub members: VertexSet,
    /// `[v]∘` is a singleton for every member.
    pub abelian: bool,
}

/// Vertex orders and the derived classifications of a graph.
#[derive(Debug, Clone)]
pub struct VertexRelations {
    /// `leq_circ[u]` holds every `w` with `lk(u) ⊆ lk(w)`.
    pub leq_circ: Vec<VertexSet>,
    /// `leq_star[u]` holds every `w` with `st(u) ⊆ st(w)`.
    pub leq_star: Vec<VertexSet>,
    /// `leq[u]` holds every `w` with `lk(u) ⊆ st(w)`.
    pub leq: Vec<VertexSet>,
    pub classes: Vec<EquivClass>,
    pub class_of: Vec<usize>,
    pub principal: VertexSet,
    pub maximal: VertexSet,
}

impl VertexRelations {
    fn compute(g: &SimplicialGraph) -> VertexRelations {
        let n = g.vertex_count();
        let mut leq_circ = vec![VertexSet::EMPTY; n];
        let mut leq_star = vec![VertexSet::EMPTY; n];
        let mut leq = vec![VertexSet::EMPTY; n];
        for u in 0..n {
            for w in 0..n {
                if g.link(u).is_subset(g.link(w)) {
                    leq_circ[u].insert(w);
                }
                if g.star(u).is_subset(g.star(w)) {
                    leq_star[u].insert(w);
                }
                if g.link(u).is_subset(g.star(w)) {
                    leq[u].insert(w);
                }
            }
        }
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for u in 0..n {
            if class_of[u] != usize::MAX {
                continue;
            }
            let members: VertexSet = (0..n).filter(|&w| leq[u].contains(w) && leq[w].contains(u)).collect();
            let abelian = members.iter().all(|w| {
                (0..n).filter(|&x| g.link(x) == g.link(w)).count() == 1
            });
            for w in members.iter() {
                class_of[w] = classes.len();
            }
            classes.push(EquivClass { members, abelian });
        }
        let principal: VertexSet = (0..n)
            .filter(|&v| !(0..n).any(|w| g.link(v).is_proper_subset(g.link(w))))
            .collect();
        let maximal: VertexSet = (0..n)
            .filter(|&v| !(0..n).any(|w| leq[v].contains(w) && !leq[w].contains(v)))
            .collect();
        VertexRelations { leq_circ, leq_star, leq, classes, class_of, principal, maximal }
    }

    pub fn is_principal(&self, v: usize) -> bool {
        self.principal.contains(v)
    }

    pub fn is_maximal(&self, v: usize) -> bool {
        self.maximal.contains(v)
    }

    pub fn leq_circ(&self, u: usize, w: usize) -> bool {
        self.leq_circ[u].contains(w)
    }

    pub fn leq_star(&self, u: usize, w: usize) -> bool {
        self.leq_star[u].contains(w)
    }

    pub fn leq(&self, u: usize, w: usize) -> bool {
        self.leq[u].contains(w)
    }

    /// `lk(u) ⊊ lk(w)`.
    pub fn lt_circ(&self, u: usize, w: usize) -> bool {
        self.leq_circ(u, w) && !self.leq_circ(w, u)
    }

    pub fn equivalent(&self, u: usize, w: usize) -> bool {
        self.class_of[u] == self.class_of[w]
    }

    pub fn class(&self, v: usize) -> &EquivClass {
        &self.classes[self.class_of[v]]
    }

    /// `[v]∘`: vertices with the same link.
    pub fn circ_class(&self, v: usize) -> VertexSet {
        (0..self.class_of.len())
            .filter(|&w| self.leq_circ(v, w) && self.leq_circ(w, v))
            .collect()
    }

    /// `[v]⋆`: vertices with the same star.
    pub fn star_class(&self, v: usize) -> VertexSet {
        (0..self.class_of.len())
            .filter(|&w| self.leq_star(v, w) && self.leq_star(w, v))
            .collect()
    }
}

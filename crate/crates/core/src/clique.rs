//! Exact clique searches over a small dense graph given by adjacency bitsets.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum CliqueError {
    #[error("search budget of {budget} nodes exceeded")]
    BudgetExceeded { budget: u64 },
}

/// A growable bitset over `0..len`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Bits {
    words: Vec<u64>,
}

impl Bits {
    pub fn new(len: usize) -> Bits {
        Bits { words: vec![0; len.div_ceil(64)] }
    }

    pub fn full(len: usize) -> Bits {
        let mut b = Bits::new(len);
        for i in 0..len {
            b.insert(i);
        }
        b
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn intersect_with(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn subtract(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn intersection(&self, other: &Bits) -> Bits {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    /// Clears every index below `i`.
    pub fn clear_below(&mut self, i: usize) {
        for (k, w) in self.words.iter_mut().enumerate() {
            let lo = k * 64;
            if lo + 64 <= i {
                *w = 0;
            } else if lo < i {
                *w &= !((1u64 << (i - lo)) - 1);
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + t)
            })
        })
    }
}

/// Builds symmetric adjacency bitsets from a predicate on index pairs.
pub fn adjacency(n: usize, mut edge: impl FnMut(usize, usize) -> bool) -> Vec<Bits> {
    let mut adj = vec![Bits::new(n); n];
    for i in 0..n {
        for j in i + 1..n {
            if edge(i, j) {
                adj[i].insert(j);
                adj[j].insert(i);
            }
        }
    }
    adj
}

struct Search<'a> {
    adj: &'a [Bits],
    budget: u64,
    nodes: u64,
    best: usize,
    target: usize,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<(), CliqueError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(CliqueError::BudgetExceeded { budget: self.budget })
        } else {
            Ok(())
        }
    }

    /// Greedy sequential colouring; returns candidates with colour bounds.
    fn colour(&self, cand: &Bits) -> Vec<(usize, usize)> {
        let mut order = Vec::with_capacity(cand.len());
        let mut uncoloured = cand.clone();
        let mut colour = 0;
        while !uncoloured.is_empty() {
            colour += 1;
            let mut avail = uncoloured.clone();
            while let Some(v) = avail.first() {
                avail.remove(v);
                avail.subtract(&self.adj[v]);
                uncoloured.remove(v);
                order.push((v, colour));
            }
        }
        order
    }

    fn expand(&mut self, size: usize, mut cand: Bits) -> Result<(), CliqueError> {
        self.tick()?;
        if cand.is_empty() {
            self.best = self.best.max(size);
            return Ok(());
        }
        for (v, colour) in self.colour(&cand).into_iter().rev() {
            if size + colour <= self.best || self.best >= self.target {
                return Ok(());
            }
            let next = cand.intersection(&self.adj[v]);
            self.expand(size + 1, next)?;
            cand.remove(v);
        }
        Ok(())
    }
}

/// Size of the largest clique inside `within`, stopping early once
/// `target` is reached.
pub fn clique_number_within(
    adj: &[Bits],
    within: &Bits,
    target: usize,
    budget: u64,
) -> Result<usize, CliqueError> {
    let mut s = Search { adj, budget, nodes: 0, best: 0, target };
    s.expand(0, within.clone())?;
    Ok(s.best)
}

/// The lexicographically least maximum clique, as sorted indices.
pub fn max_clique(adj: &[Bits], budget: u64) -> Result<Vec<usize>, CliqueError> {
    let n = adj.len();
    let all = Bits::full(n);
    let omega = clique_number_within(adj, &all, usize::MAX, budget)?;
    let mut chosen = Vec::with_capacity(omega);
    let mut cand = all;
    while chosen.len() < omega {
        let need = omega - chosen.len() - 1;
        let mut picked = None;
        for v in cand.iter() {
            let mut rest = cand.intersection(&adj[v]);
            rest.clear_below(v + 1);
            if need == 0 || clique_number_within(adj, &rest, need, budget)? >= need {
                picked = Some((v, rest));
                break;
            }
        }
        let (v, rest) = picked.expect("a maximum clique extends the chosen prefix");
        chosen.push(v);
        cand = rest;
    }
    Ok(chosen)
}

/// Every clique of exactly `size` vertices, in lexicographic order.
pub fn cliques_of_size(adj: &[Bits], size: usize, budget: u64) -> Result<Vec<Vec<usize>>, CliqueError> {
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(size);
    let mut nodes = 0;
    collect_sized(adj, size, Bits::full(adj.len()), &mut stack, &mut out, &mut nodes, budget)?;
    Ok(out)
}

fn collect_sized(
    adj: &[Bits],
    size: usize,
    cand: Bits,
    stack: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    nodes: &mut u64,
    budget: u64,
) -> Result<(), CliqueError> {
    *nodes += 1;
    if *nodes > budget {
        return Err(CliqueError::BudgetExceeded { budget });
    }
    if stack.len() == size {
        out.push(stack.clone());
        return Ok(());
    }
    if stack.len() + cand.len() < size {
        return Ok(());
    }
    let probe = Search { adj, budget, nodes: 0, best: 0, target: usize::MAX };
    let colours = probe.colour(&cand).iter().map(|&(_, c)| c).max().unwrap_or(0);
    if stack.len() + colours < size {
        return Ok(());
    }
    for v in cand.iter() {
        let mut rest = cand.intersection(&adj[v]);
        rest.clear_below(v + 1);
        stack.push(v);
        collect_sized(adj, size, rest, stack, out, nodes, budget)?;
        stack.pop();
    }
    Ok(())
}

/// Every clique, including the empty one, in lexicographic order. Fails once
/// more than `budget` cliques have been produced.
pub fn all_cliques(adj: &[Bits], budget: u64) -> Result<Vec<Vec<usize>>, CliqueError> {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    collect_all(adj, Bits::full(adj.len()), &mut stack, &mut out, budget)?;
    Ok(out)
}

fn collect_all(
    adj: &[Bits],
    cand: Bits,
    stack: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    budget: u64,
) -> Result<(), CliqueError> {
    if out.len() as u64 >= budget {
        return Err(CliqueError::BudgetExceeded { budget });
    }
    out.push(stack.clone());
    for v in cand.iter() {
        let mut rest = cand.intersection(&adj[v]);
        rest.clear_below(v + 1);
        stack.push(v);
        collect_all(adj, rest, stack, out, budget)?;
        stack.pop();
    }
    Ok(())
}

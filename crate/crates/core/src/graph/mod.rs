//! Finite directed graphs with the structural predicates used by the bounds.
//!
//! Undirected graphs are stored as symmetric edge relations. Set-valued
//! queries (`VertexSet`) are limited to hosts with at most 64 vertices;
//! adjacency queries work at any size.

mod builtin;
mod io;
mod structure;

pub use builtin::{builtin, parse_builtin_spec};
pub use structure::EliminationOrdering;

use crate::error::{Error, Result};
use std::collections::BTreeSet;
use std::fmt;

/// Bitmask over vertices `0..n` with `n <= 64`. Subset indexing throughout the
/// crate is this bitmask read as an integer.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    /// Checked constructor against a host of `n` vertices.
    pub fn from_vertices(n: usize, vs: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut bits = 0u64;
        for v in vs {
            if v >= n || v >= 64 {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            bits |= 1 << v;
        }
        Ok(VertexSet(bits))
    }

    pub fn full(n: usize) -> Self {
        assert!(n <= 64, "VertexSet supports at most 64 vertices");
        if n == 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1 << v)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn contains(self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1 << v;
    }

    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | 1 << v)
    }

    pub fn without(self, v: usize) -> Self {
        VertexSet(self.0 & !(1 << v))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, o: Self) -> Self {
        VertexSet(self.0 | o.0)
    }

    pub fn intersection(self, o: Self) -> Self {
        VertexSet(self.0 & o.0)
    }

    pub fn difference(self, o: Self) -> Self {
        VertexSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }

    /// All subsets of `self`, in increasing bitmask order.
    pub fn subsets(self) -> impl Iterator<Item = VertexSet> {
        let full = self.0;
        let mut cur = 0u64;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = VertexSet(cur);
            if cur == full {
                done = true;
            } else {
                cur = (cur.wrapping_sub(full)) & full;
            }
            Some(out)
        })
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// A finite directed graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    out: Vec<Vec<u32>>,
    name: Option<String>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut out = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            out[u].push(v as u32);
        }
        for adj in &mut out {
            adj.sort_unstable();
            adj.dedup();
        }
        Ok(Graph { n, out, name: None })
    }

    /// Undirected graph: each pair is inserted in both orientations.
    pub fn undirected(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let e: Vec<_> = edges.into_iter().flat_map(|(u, v)| [(u, v), (v, u)]).collect();
        Graph::new(n, e)
    }

    pub fn edgeless(n: usize) -> Self {
        Graph {
            n,
            out: vec![Vec::new(); n],
            name: None,
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> &str {
        self.name.as_deref().unwrap_or("G")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out[u].binary_search(&(v as u32)).is_ok()
    }

    pub fn out_neighbors(&self, u: usize) -> &[u32] {
        &self.out[u]
    }

    pub fn in_neighbors(&self) -> Vec<Vec<u32>> {
        let mut inn = vec![Vec::new(); self.n];
        for (u, adj) in self.out.iter().enumerate() {
            for &v in adj {
                inn[v as usize].push(u as u32);
            }
        }
        inn
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, adj)| adj.iter().map(move |&v| (u, v as usize)))
    }

    pub fn is_symmetric(&self) -> bool {
        self.edges().all(|(u, v)| self.has_edge(v, u))
    }

    pub fn has_loops(&self) -> bool {
        (0..self.n).any(|v| self.has_edge(v, v))
    }

    /// Antireflexive and symmetric.
    pub fn is_simple(&self) -> bool {
        !self.has_loops() && self.is_symmetric()
    }

    /// Same vertices; `{v,w}` present iff `v != w` and either orientation is an edge.
    pub fn simple_closure(&self) -> Graph {
        let mut out = vec![BTreeSet::new(); self.n];
        for (u, v) in self.edges() {
            if u != v {
                out[u].insert(v as u32);
                out[v].insert(u as u32);
            }
        }
        Graph {
            n: self.n,
            out: out.into_iter().map(|s| s.into_iter().collect()).collect(),
            name: self.name.clone(),
        }
    }

    /// Neighborhood masks of the simple closure; requires `n <= 64`.
    pub fn adjacency_masks(&self) -> Vec<VertexSet> {
        assert!(self.n <= 64, "adjacency masks need at most 64 vertices");
        let mut m = vec![VertexSet::EMPTY; self.n];
        for (u, v) in self.edges() {
            if u != v {
                m[u].insert(v);
                m[v].insert(u);
            }
        }
        m
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn check_set(&self, a: VertexSet) -> Result<()> {
        if self.n < 64 && a.bits() >> self.n != 0 {
            let v = 63 - a.bits().leading_zeros() as usize;
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(())
    }

    /// `G|_A` with vertices relabeled `0..|A|` in increasing order; the map
    /// sends new labels to old ones.
    pub fn induced_subgraph(&self, a: VertexSet) -> Result<(Graph, Vec<usize>)> {
        self.check_set(a)?;
        let map: Vec<usize> = a.iter().collect();
        let mut back = vec![usize::MAX; self.n];
        for (i, &v) in map.iter().enumerate() {
            back[v] = i;
        }
        let edges = self
            .edges()
            .filter(|&(u, v)| a.contains(u) && a.contains(v))
            .map(|(u, v)| (back[u], back[v]));
        Ok((Graph::new(map.len(), edges)?, map))
    }

    /// Disjoint union, relabeling components contiguously in input order.
    pub fn disjoint_union(gs: &[Graph]) -> Graph {
        let mut offset = 0;
        let mut edges = Vec::new();
        for g in gs {
            edges.extend(g.edges().map(|(u, v)| (u + offset, v + offset)));
            offset += g.n;
        }
        Graph::new(offset, edges).expect("in range by construction")
    }

    /// `k` disjoint copies.
    pub fn copies(&self, k: usize) -> Graph {
        let g = Graph::disjoint_union(&vec![self.clone(); k]);
        match &self.name {
            Some(name) => g.named(format!("{k}*{name}")),
            None => g,
        }
    }

    /// Categorical product; vertex `(a, v)` is numbered `a * |V_g| + v`.
    pub fn categorical_product(f: &Graph, g: &Graph) -> Graph {
        let mut edges = Vec::new();
        for (a, b) in f.edges() {
            for (v, w) in g.edges() {
                edges.push((a * g.n + v, b * g.n + w));
            }
        }
        Graph::new(f.n * g.n, edges).expect("in range by construction")
    }

    /// Connected components of the simple closure restricted to `a`; zero for `a = ∅`.
    pub fn connected_component_count(&self, a: VertexSet) -> usize {
        let adj = self.adjacency_masks();
        components_in(&adj, a)
    }

    pub fn components_of(&self, a: VertexSet) -> Vec<VertexSet> {
        component_sets(&self.adjacency_masks(), a)
    }

    /// Whether every path of the simple closure from `x` to `y` meets `s`.
    /// Sets that overlap each other (outside `s`) are never separated.
    pub fn separates(&self, s: VertexSet, x: VertexSet, y: VertexSet) -> bool {
        separates_in(&self.adjacency_masks(), s, x, y)
    }

    /// Connected components of the whole simple closure (any size).
    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.n];
        let inn = self.in_neighbors();
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &w in self.out[u].iter().chain(inn[u].iter()) {
                    let w = w as usize;
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }
}

/// Components of the graph given by neighborhood masks, restricted to `a`.
pub(crate) fn components_in(adj: &[VertexSet], a: VertexSet) -> usize {
    component_sets(adj, a).len()
}

pub(crate) fn separates_in(adj: &[VertexSet], s: VertexSet, x: VertexSet, y: VertexSet) -> bool {
    let n = adj.len();
    let x = x.difference(s);
    let y = y.difference(s);
    let rest = VertexSet::full(n).difference(s);
    let mut reach = x;
    let mut frontier = x;
    while !frontier.is_empty() {
        let mut next = VertexSet::EMPTY;
        for v in frontier.iter() {
            next = next.union(adj[v]);
        }
        next = next.intersection(rest).difference(reach);
        reach = reach.union(next);
        frontier = next;
    }
    reach.intersection(y).is_empty()
}

/// Vertex sets of the connected components of the subgraph induced on `a`.
pub(crate) fn component_sets(adj: &[VertexSet], a: VertexSet) -> Vec<VertexSet> {
    let mut rest = a;
    let mut out = Vec::new();
    while let Some(s) = rest.first() {
        let mut comp = VertexSet::singleton(s);
        let mut frontier = comp;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for v in frontier.iter() {
                next = next.union(adj[v]);
            }
            next = next.intersection(a).difference(comp);
            comp = comp.union(next);
            frontier = next;
        }
        rest = rest.difference(comp);
        out.push(comp);
    }
    out
}

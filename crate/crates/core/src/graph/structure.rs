use super::{Graph, VertexSet};
use crate::error::{Error, Result};
use std::collections::BTreeSet;

/// An enumeration `v_1..v_n` in which the earlier neighbors of every `v_j`
/// form a clique (in the simple closure).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationOrdering {
    order: Vec<usize>,
}

impl EliminationOrdering {
    /// Validates `order` against `g`.
    pub fn new(g: &Graph, order: Vec<usize>) -> Result<Self> {
        let ord = EliminationOrdering { order };
        ord.verify(g)?;
        Ok(ord)
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// For each position `j`, the neighbors of `order[j]` among earlier positions.
    pub fn earlier_neighbors(&self, g: &Graph) -> Vec<Vec<usize>> {
        let s = g.simple_closure();
        let mut pos = vec![usize::MAX; g.n()];
        for (j, &v) in self.order.iter().enumerate() {
            pos[v] = j;
        }
        self.order
            .iter()
            .enumerate()
            .map(|(j, &v)| {
                s.out_neighbors(v)
                    .iter()
                    .map(|&w| w as usize)
                    .filter(|&w| pos[w] < j)
                    .collect()
            })
            .collect()
    }

    /// Checks the permutation property and the prefix-neighborhood clique condition.
    pub fn verify(&self, g: &Graph) -> Result<()> {
        let n = g.n();
        if self.order.len() != n {
            return Err(Error::InvalidOrdering(format!(
                "length {} for {n} vertices",
                self.order.len()
            )));
        }
        let mut seen = vec![false; n];
        for &v in &self.order {
            if v >= n || seen[v] {
                return Err(Error::InvalidOrdering(format!("not a permutation at vertex {v}")));
            }
            seen[v] = true;
        }
        let s = g.simple_closure();
        for (j, nbrs) in self.earlier_neighbors(g).iter().enumerate() {
            for (i, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[i + 1..] {
                    if !s.has_edge(a, b) {
                        return Err(Error::InvalidOrdering(format!(
                            "earlier neighbors {a} and {b} of {} are not adjacent",
                            self.order[j]
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

impl Graph {
    /// Maximum-cardinality search followed by a verification pass; `None` iff
    /// the graph is not chordal.
    pub fn elimination_ordering(&self) -> Option<EliminationOrdering> {
        let s = self.simple_closure();
        let n = s.n();
        let mut weight = vec![0usize; n];
        let mut numbered = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            let v = (0..n)
                .filter(|&v| !numbered[v])
                .max_by(|&a, &b| weight[a].cmp(&weight[b]).then(b.cmp(&a)))
                .expect("unnumbered vertex remains");
            numbered[v] = true;
            order.push(v);
            for &w in s.out_neighbors(v) {
                weight[w as usize] += 1;
            }
        }
        let ord = EliminationOrdering { order };
        ord.verify(self).ok().map(|_| ord)
    }

    pub fn is_chordal(&self) -> bool {
        self.elimination_ordering().is_some()
    }

    /// Maximal cliques of the simple closure (Bron–Kerbosch with pivoting),
    /// sorted by bitmask.
    pub fn max_cliques(&self) -> Vec<VertexSet> {
        let adj = self.adjacency_masks();
        let mut out = Vec::new();
        bron_kerbosch(&adj, VertexSet::EMPTY, self.all_vertices(), VertexSet::EMPTY, &mut out);
        out.sort();
        out
    }

    /// All nonempty cliques of the simple closure, sorted by bitmask.
    pub fn cliques(&self) -> Vec<VertexSet> {
        let adj = self.adjacency_masks();
        let mut out = Vec::new();
        fn grow(adj: &[VertexSet], cur: VertexSet, cand: VertexSet, out: &mut Vec<VertexSet>) {
            for v in cand.iter() {
                let next = cur.with(v);
                out.push(next);
                // only extend with larger labels to avoid duplicates
                let higher = VertexSet::from_bits(cand.bits() & !((2u64 << v) - 1));
                grow(adj, next, higher.intersection(adj[v]), out);
            }
        }
        grow(&adj, VertexSet::EMPTY, self.all_vertices(), &mut out);
        out.sort();
        out
    }

    pub fn is_clique(&self, a: VertexSet) -> bool {
        let adj = self.adjacency_masks();
        a.iter().all(|v| a.without(v).is_subset(adj[v]))
    }

    pub fn clique_number(&self) -> usize {
        self.max_cliques().iter().map(|c| c.len()).max().unwrap_or(0)
    }

    /// Treewidth at most 2 of the simple closure.
    pub fn is_series_parallel(&self) -> bool {
        self.series_parallel_reduction().is_some()
    }

    /// A chordal supergraph with clique number at most 3 on the same vertex
    /// set (a 2-tree in the broad sense), when the graph is series-parallel.
    pub fn embed_in_2tree(&self) -> Option<Graph> {
        let fill = self.series_parallel_reduction()?;
        let s = self.simple_closure();
        let edges: Vec<_> = s.edges().filter(|&(u, v)| u < v).chain(fill).collect();
        let g = Graph::undirected(self.n(), edges).expect("in range");
        Some(match &self.name {
            Some(n) => g.named(format!("{n}~")),
            None => g,
        })
    }

    /// Repeatedly removes a vertex of degree <= 2, joining the two neighbors of
    /// a degree-2 vertex. Returns the added fill edges, or `None` when the
    /// reduction gets stuck (treewidth > 2).
    fn series_parallel_reduction(&self) -> Option<Vec<(usize, usize)>> {
        let s = self.simple_closure();
        let n = s.n();
        let mut adj: Vec<BTreeSet<usize>> = (0..n)
            .map(|v| s.out_neighbors(v).iter().map(|&w| w as usize).collect())
            .collect();
        let mut alive = vec![true; n];
        let mut fill = Vec::new();
        for _ in 0..n {
            let v = (0..n).find(|&v| alive[v] && adj[v].len() <= 2)?;
            alive[v] = false;
            let nbrs: Vec<usize> = adj[v].iter().copied().collect();
            for &w in &nbrs {
                adj[w].remove(&v);
            }
            adj[v].clear();
            if let [a, b] = nbrs[..] {
                if adj[a].insert(b) {
                    adj[b].insert(a);
                    if !s.has_edge(a, b) {
                        fill.push((a.min(b), a.max(b)));
                    }
                }
            }
        }
        Some(fill)
    }

    /// Exact independence number of the simple closure by branching.
    pub fn independence_number(&self) -> Result<usize> {
        const LIMIT: usize = 40;
        if self.n() > LIMIT {
            return Err(Error::guard("independence number", self.n(), LIMIT));
        }
        let adj = self.adjacency_masks();
        Ok(max_independent(&adj, self.all_vertices()))
    }
}

fn bron_kerbosch(adj: &[VertexSet], r: VertexSet, p: VertexSet, x: VertexSet, out: &mut Vec<VertexSet>) {
    if p.is_empty() {
        if x.is_empty() && !r.is_empty() {
            out.push(r);
        }
        return;
    }
    let pivot = p
        .union(x)
        .iter()
        .max_by_key(|&u| p.intersection(adj[u]).len())
        .expect("nonempty");
    let (mut p, mut x) = (p, x);
    for v in p.difference(adj[pivot]).iter() {
        bron_kerbosch(adj, r.with(v), p.intersection(adj[v]), x.intersection(adj[v]), out);
        p = p.without(v);
        x = x.with(v);
    }
}

fn max_independent(adj: &[VertexSet], cand: VertexSet) -> usize {
    let Some(v) = cand.iter().max_by_key(|&v| adj[v].intersection(cand).len()) else {
        return 0;
    };
    let deg = adj[v].intersection(cand).len();
    if deg <= 1 {
        // a vertex of degree <= 1 can always be taken; pick the lowest-degree one
        let u = cand
            .iter()
            .min_by_key(|&u| adj[u].intersection(cand).len())
            .expect("nonempty");
        return 1 + max_independent(adj, cand.without(u).difference(adj[u]));
    }
    let with_v = 1 + max_independent(adj, cand.without(v).difference(adj[v]));
    let without_v = max_independent(adj, cand.without(v));
    with_v.max(without_v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::builtin;
    use proptest::prelude::*;

    fn vs(bits: u64) -> VertexSet {
        VertexSet::from_bits(bits)
    }

    #[test]
    fn max_clique_examples() {
        assert_eq!(builtin("complete", &[3]).unwrap().max_cliques(), vec![vs(0b111)]);
        assert_eq!(builtin("path", &[3]).unwrap().max_cliques(), vec![vs(0b011), vs(0b110)]);
        let two = builtin("book", &[2]).unwrap(); // triangles 012, 013
        assert_eq!(two.max_cliques(), vec![vs(0b0111), vs(0b1011)]);
    }

    #[test]
    fn elimination_examples() {
        let p4 = builtin("path", &[4]).unwrap();
        let ord = p4.elimination_ordering().unwrap();
        ord.verify(&p4).unwrap();
        assert!(EliminationOrdering::new(&p4, vec![0, 1, 2, 3]).is_ok());
        assert!(builtin("cycle", &[4]).unwrap().elimination_ordering().is_none());
        let k4 = builtin("complete", &[4]).unwrap();
        assert!(EliminationOrdering::new(&k4, vec![3, 1, 0, 2]).is_ok());
        assert!(EliminationOrdering::new(&p4, vec![0, 2, 1, 3]).is_err());
        assert!(EliminationOrdering::new(&p4, vec![0, 0, 1, 3]).is_err());
        let c4 = builtin("cycle", &[4]).unwrap();
        assert!(EliminationOrdering::new(&c4, vec![0, 1, 2, 3]).is_err());
    }

    #[test]
    fn series_parallel_examples() {
        assert!(!builtin("complete", &[4]).unwrap().is_series_parallel());
        assert!(builtin("cycle", &[6]).unwrap().is_series_parallel());
        assert!(builtin("star", &[5]).unwrap().is_series_parallel());
        let k3 = builtin("complete", &[3]).unwrap();
        assert_eq!(k3.embed_in_2tree().unwrap().edges().collect::<Vec<_>>(), k3.edges().collect::<Vec<_>>());
        let c5 = builtin("cycle", &[5]).unwrap();
        let t = c5.embed_in_2tree().unwrap();
        assert!(t.is_chordal());
        assert!(t.clique_number() <= 3);
        assert!(c5.edges().all(|(u, v)| t.has_edge(u, v)));
        assert!(!builtin("bipartite", &[3, 3]).unwrap().is_series_parallel());
    }

    #[test]
    fn independence_examples() {
        assert_eq!(builtin("complete", &[3]).unwrap().independence_number().unwrap(), 1);
        assert_eq!(builtin("path", &[4]).unwrap().independence_number().unwrap(), 2);
        assert_eq!(builtin("cycle", &[5]).unwrap().independence_number().unwrap(), 2);
        assert_eq!(builtin("edgeless", &[4]).unwrap().independence_number().unwrap(), 4);
    }

    fn random_graph(n: usize, bits: u64) -> Graph {
        let mut e = Vec::new();
        let mut k = 0;
        for u in 0..n {
            for v in u + 1..n {
                if bits >> k & 1 == 1 {
                    e.push((u, v));
                }
                k += 1;
            }
        }
        Graph::undirected(n, e).unwrap()
    }

    fn brute_cliques(g: &Graph) -> Vec<VertexSet> {
        let all: Vec<VertexSet> = g.all_vertices().subsets().filter(|a| !a.is_empty() && g.is_clique(*a)).collect();
        let mut maximal: Vec<VertexSet> = all
            .iter()
            .copied()
            .filter(|a| !all.iter().any(|b| b != a && a.is_subset(*b)))
            .collect();
        maximal.sort();
        maximal
    }

    /// Exhaustive search for a K4 minor: assign each vertex to one of four
    /// branch sets or to none.
    fn has_k4_minor(g: &Graph) -> bool {
        let n = g.n();
        let adj = g.adjacency_masks();
        let mut assign = vec![0usize; n];
        loop {
            let mut branch = [VertexSet::EMPTY; 4];
            for (v, &a) in assign.iter().enumerate() {
                if a < 4 {
                    branch[a].insert(v);
                }
            }
            let ok = branch.iter().all(|b| !b.is_empty() && crate::graph::components_in(&adj, *b) == 1)
                && (0..4).all(|i| {
                    (i + 1..4).all(|j| branch[i].iter().any(|v| !adj[v].intersection(branch[j]).is_empty()))
                });
            if ok {
                return true;
            }
            let mut k = 0;
            loop {
                if k == n {
                    return false;
                }
                assign[k] += 1;
                if assign[k] == 5 {
                    assign[k] = 0;
                    k += 1;
                } else {
                    break;
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(120))]

        #[test]
        fn max_cliques_match_brute_force(n in 1usize..=8, bits in any::<u64>()) {
            let g = random_graph(n, bits);
            prop_assert_eq!(g.max_cliques(), brute_cliques(&g));
        }

        #[test]
        fn chordal_orderings_satisfy_clique_condition(n in 1usize..=8, bits in any::<u64>()) {
            let g = random_graph(n, bits);
            if let Some(ord) = g.elimination_ordering() {
                for (j, nbrs) in ord.earlier_neighbors(&g).iter().enumerate() {
                    let set = VertexSet::from_vertices(n, nbrs.iter().copied()).unwrap();
                    prop_assert!(g.is_clique(set), "position {}", j);
                }
            }
        }

        #[test]
        fn series_parallel_matches_k4_minor(n in 1usize..=7, bits in any::<u64>()) {
            let g = random_graph(n, bits);
            prop_assert_eq!(g.is_series_parallel(), !has_k4_minor(&g));
            if let Some(t) = g.embed_in_2tree() {
                prop_assert!(t.is_chordal());
                prop_assert!(t.clique_number() <= 3);
            }
        }

        #[test]
        fn independence_matches_brute_force(n in 1usize..=9, bits in any::<u64>()) {
            let g = random_graph(n, bits);
            let adj = g.adjacency_masks();
            let brute = g.all_vertices().subsets()
                .filter(|a| a.iter().all(|v| adj[v].intersection(*a).is_empty()))
                .map(|a| a.len()).max().unwrap();
            prop_assert_eq!(g.independence_number().unwrap(), brute);
        }

        #[test]
        fn closure_idempotent_and_product_commutes(n in 1usize..=4, m in 1usize..=4, b1 in any::<u64>(), b2 in any::<u64>()) {
            // loop-free directed inputs
            let mk = |n: usize, bits: u64| {
                let e: Vec<_> = (0..n).flat_map(|u| (0..n).map(move |v| (u, v)))
                    .filter(|&(u, v)| u != v).enumerate()
                    .filter(|(k, _)| bits >> (k % 64) & 1 == 1).map(|(_, e)| e).collect();
                Graph::new(n, e).unwrap()
            };
            let f = mk(n, b1);
            let g = mk(m, b2);
            prop_assert_eq!(f.simple_closure().simple_closure(), f.simple_closure());
            let lhs = Graph::categorical_product(&f, &g).simple_closure();
            let rhs = Graph::categorical_product(&f.simple_closure(), &g.simple_closure()).simple_closure();
            // closure(F x G) ⊆ closure(F) x closure(G); equal when both are symmetric
            prop_assert!(lhs.edges().all(|(u, v)| rhs.has_edge(u, v)));
            if f.is_symmetric() && g.is_symmetric() {
                prop_assert_eq!(lhs.edges().collect::<Vec<_>>(), rhs.edges().collect::<Vec<_>>());
            }
        }
    }
}

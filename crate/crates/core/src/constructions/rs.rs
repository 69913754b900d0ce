use crate::graph::Graph;
use std::collections::HashSet;

/// Largest digit bound tried by [`behrend_set`].
const MAX_DIGIT: usize = 256;

/// A subset of `{0, .., m-1}` with no three-term arithmetic progression:
/// numbers whose base-`(2d-1)` digits are all below `d` and whose digit
/// vectors lie on one sphere. The best `d` and radius are chosen by search.
pub fn behrend_set(m: usize) -> Vec<usize> {
    if m <= 2 {
        return (0..m).collect();
    }
    let mut best: Vec<usize> = vec![0, 1];
    for d in 2..=MAX_DIGIT.min(m) {
        let base = 2 * d - 1;
        let mut spheres: std::collections::HashMap<usize, Vec<usize>> = std::collections::HashMap::new();
        'values: for v in 0..m {
            let (mut x, mut r) = (v, 0);
            while x > 0 {
                let digit = x % base;
                if digit >= d {
                    continue 'values;
                }
                r += digit * digit;
                x /= base;
            }
            spheres.entry(r).or_default().push(v);
        }
        if let Some(s) = spheres.into_values().max_by_key(|s| (s.len(), std::cmp::Reverse(s[0]))) {
            if s.len() > best.len() {
                best = s;
            }
        }
    }
    best
}

pub fn is_progression_free(s: &[usize]) -> bool {
    let set: HashSet<usize> = s.iter().copied().collect();
    s.iter()
        .all(|&x| s.iter().all(|&z| z <= x || (x + z) % 2 == 1 || !set.contains(&((x + z) / 2))))
}

/// Tripartite graph on parts of size `m` (part `r` holds vertices
/// `r*m .. r*m+m`) with triangles `(x, x+d, x+2d)` modulo `m` for `d` in a
/// progression-free subset of `[0, m/3)`. Every edge lies in exactly one
/// triangle.
pub fn rs_graph(m: usize) -> Graph {
    assert!(m >= 1, "parts must be nonempty");
    let diffs = behrend_set((m - 1) / 3 + 1);
    let mut edges = Vec::with_capacity(3 * m * diffs.len());
    for x in 0..m {
        for &d in &diffs {
            let (y, z) = ((x + d) % m, (x + 2 * d) % m);
            edges.push((x, m + y));
            edges.push((m + y, 2 * m + z));
            edges.push((x, 2 * m + z));
        }
    }
    Graph::undirected(3 * m, edges).expect("in range").named(format!("RS({m})"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleAudit {
    pub edges: usize,
    pub triangles: usize,
    pub every_edge_in_exactly_one: bool,
}

/// Counts triangles of the simple closure and checks the one-triangle-per-edge property.
pub fn triangle_audit(g: &Graph) -> TriangleAudit {
    let s = g.simple_closure();
    let nbrs: Vec<HashSet<u32>> = (0..s.n()).map(|v| s.out_neighbors(v).iter().copied().collect()).collect();
    let (mut edges, mut per_edge_total, mut exact) = (0, 0, true);
    for u in 0..s.n() {
        for &v in s.out_neighbors(u) {
            if (v as usize) <= u {
                continue;
            }
            edges += 1;
            let common = nbrs[u].intersection(&nbrs[v as usize]).count();
            per_edge_total += common;
            exact &= common == 1;
        }
    }
    TriangleAudit {
        edges,
        triangles: per_edge_total / 3,
        every_edge_in_exactly_one: exact,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn behrend_sets_are_progression_free() {
        for m in (1..=300).chain([1000, 4000, 10_000]) {
            let s = behrend_set(m);
            assert!(is_progression_free(&s), "m={m}");
            assert!(s.iter().all(|&x| x < m));
        }
        assert!(behrend_set(10_000).len() >= 100);
    }

    #[test]
    fn rs_every_edge_in_one_triangle() {
        for m in (1..=60).chain([97, 150, 200]) {
            let g = rs_graph(m);
            let a = triangle_audit(&g);
            assert!(a.every_edge_in_exactly_one, "m={m}");
            assert_eq!(a.triangles, m * behrend_set((m - 1) / 3 + 1).len());
        }
    }

    #[test]
    fn rs_triangle_exponent_reported() {
        let a = triangle_audit(&rs_graph(50));
        let delta = 2.0 - (a.triangles as f64).ln() / 50f64.ln();
        assert!(delta > 0.0 && delta < 1.0, "delta {delta}");
    }
}

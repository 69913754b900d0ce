use super::{check_size, Metadata, ProjectedTarget};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::polymatroid::SetFunction;
use crate::rational::{ceil_pow, int, JsonRational, Rational};
use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;

fn check_q(g: &Graph, q: &SetFunction) -> Result<()> {
    if q.n() != g.n() {
        return Err(Error::InvalidParameter(format!("q is on {} vertices, G has {}", q.n(), g.n())));
    }
    if !q.get(VertexSet::EMPTY).is_zero() {
        return Err(Error::Infeasible("q(∅) must be 0".into()));
    }
    let mut norm = Rational::zero();
    for a in VertexSet::full(g.n()).subsets().skip(1) {
        let v = q.get(a);
        if v.is_negative() || *v > Rational::one() {
            return Err(Error::Infeasible(format!("q{a} = {v} is outside [0,1]")));
        }
        norm += v * int(g.connected_component_count(a) as i64);
    }
    if !norm.is_one() {
        return Err(Error::Infeasible(format!("Σ q(A)·CC(G|A) = {norm}, not 1")));
    }
    Ok(())
}

fn radix(n: u64, e: &Rational) -> Result<usize> {
    ceil_pow(n, e)
        .to_usize()
        .filter(|&r| r <= super::TARGET_VERTEX_CAP)
        .ok_or_else(|| Error::guard("upper target", format!("{n}^{e}"), super::TARGET_VERTEX_CAP))
}

/// Vertices `(x, i)` with `i(A) < ⌈n^{q(A)}⌉` for each `A ∋ x`; an edge
/// `(x,i) → (y,j)` whenever `(x,y) ∈ E_G` and `i`, `j` agree on every
/// `A ⊇ {x,y}`. Sets with `q(A) = 0` carry a single index and are omitted.
#[allow(non_snake_case)]
pub fn build_Tn_upper(g: &Graph, q: &SetFunction, n: u64) -> Result<ProjectedTarget> {
    if n < 2 {
        return Err(Error::InvalidParameter("n must be at least 2".into()));
    }
    check_q(g, q)?;
    let mut sets: Vec<(VertexSet, usize)> = Vec::new();
    for a in VertexSet::full(g.n()).subsets().skip(1) {
        if !q.get(a).is_zero() {
            sets.push((a, radix(n, q.get(a))?));
        }
    }
    // per vertex: indices into `sets` of the sets containing it
    let mine: Vec<Vec<usize>> = (0..g.n())
        .map(|x| (0..sets.len()).filter(|&k| sets[k].0.contains(x)).collect())
        .collect();
    let mut sizes = Vec::with_capacity(g.n());
    for m in &mine {
        let s = m.iter().try_fold(1usize, |acc, &k| acc.checked_mul(sets[k].1));
        sizes.push(s.filter(|&s| s <= super::TARGET_VERTEX_CAP).ok_or_else(|| {
            Error::guard("upper target", "fiber overflow", super::TARGET_VERTEX_CAP)
        })?);
    }
    let total: usize = sizes.iter().sum();
    check_size("upper target", total, 0)?;
    let mut offset = vec![0; g.n() + 1];
    for x in 0..g.n() {
        offset[x + 1] = offset[x] + sizes[x];
    }
    // digit of set `k` in label `l` of vertex x
    let digit = |x: usize, mut l: usize, k: usize| -> usize {
        for &kk in &mine[x] {
            let r = sets[kk].1;
            if kk == k {
                return l % r;
            }
            l /= r;
        }
        unreachable!("set does not contain the vertex")
    };
    let mut edges = Vec::new();
    for (x, y) in g.edges() {
        let common: Vec<usize> = mine[x].iter().copied().filter(|&k| sets[k].0.contains(y)).collect();
        let key = |v: usize, l: usize| -> Vec<usize> { common.iter().map(|&k| digit(v, l, k)).collect() };
        let mut by_key: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        for l in 0..sizes[y] {
            by_key.entry(key(y, l)).or_default().push(l);
        }
        for l in 0..sizes[x] {
            if let Some(ys) = by_key.get(&key(x, l)) {
                for &m in ys {
                    edges.push((offset[x] + l, offset[y] + m));
                }
            }
            check_size("upper target", total, edges.len())?;
        }
    }
    let projection = (0..g.n()).flat_map(|x| std::iter::repeat_n(x, sizes[x])).collect();
    let params = serde_json::json!({
        "q": sets.iter().map(|(a, _)| serde_json::json!({ "set": a.to_string(), "value": JsonRational(q.get(*a).clone()) })).collect::<Vec<_>>(),
    });
    Ok(ProjectedTarget {
        target: Graph::new(total, edges)?.named(format!("T_{n}")),
        projection,
        base: g.clone(),
        meta: Metadata {
            kind: "upper",
            scale: n,
            seed: None,
            params,
        },
    })
}

/// `Π_A ⌈n^{q(A)}⌉^{CC(F|φ⁻¹(A))}`: the exact size of the fiber of `T_n`
/// over `φ`.
pub fn fiber_law(f: &Graph, q: &SetFunction, n: u64, phi: &[usize]) -> BigUint {
    let adj = f.adjacency_masks();
    let mut out = BigUint::one();
    for a in VertexSet::full(q.n()).subsets().skip(1) {
        if q.get(a).is_zero() {
            continue;
        }
        let pre = (0..f.n()).filter(|&u| a.contains(phi[u])).fold(VertexSet::EMPTY, |s, u| s.with(u));
        let cc = crate::graph::component_sets(&adj, pre).len();
        out *= num_traits::pow(ceil_pow(n, q.get(a)), cc);
    }
    out
}

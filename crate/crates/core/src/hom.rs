//! Homomorphism enumeration and exact counting.

use crate::error::{Error, Result};
use crate::graph::Graph;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::HashMap;

/// A map `V_F -> V_T`, indexed by source vertex.
pub type Homomorphism = Vec<usize>;

pub fn is_homomorphism(f: &Graph, t: &Graph, map: &[usize]) -> bool {
    map.len() == f.n() && map.iter().all(|&x| x < t.n()) && f.edges().all(|(u, v)| t.has_edge(map[u], map[v]))
}

pub(crate) fn check_homomorphism(f: &Graph, t: &Graph, map: &[usize]) -> Result<()> {
    if is_homomorphism(f, t, map) {
        Ok(())
    } else {
        Err(Error::NotHomomorphism(format!("{:?} from {} to {}", map, f.name(), t.name())))
    }
}

/// Counting strategy. `Auto` picks the cheapest applicable one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Auto,
    Backtrack,
    Chordal,
    Transfer,
}

/// Source-vertex constraints against already assigned vertices, in index order.
struct Search<'a> {
    t: &'a Graph,
    t_in: Vec<Vec<u32>>,
    /// For vertex v: (u, forward) for every edge between v and an earlier u;
    /// forward means u -> v.
    back: Vec<Vec<(usize, bool)>>,
    loops: Vec<bool>,
    domains: Option<Vec<Vec<bool>>>,
}

impl<'a> Search<'a> {
    fn new(f: &Graph, t: &'a Graph, domains: Option<Vec<Vec<bool>>>) -> Self {
        let mut back = vec![Vec::new(); f.n()];
        let mut loops = vec![false; f.n()];
        for (u, v) in f.edges() {
            match u.cmp(&v) {
                std::cmp::Ordering::Less => back[v].push((u, true)),
                std::cmp::Ordering::Greater => back[u].push((v, false)),
                std::cmp::Ordering::Equal => loops[u] = true,
            }
        }
        Search {
            t,
            t_in: t.in_neighbors(),
            back,
            loops,
            domains,
        }
    }

    fn allowed(&self, v: usize, x: usize) -> bool {
        self.domains.as_ref().is_none_or(|d| d[v][x])
    }

    /// Candidate images of `v` in increasing order.
    fn candidates(&self, v: usize, map: &[usize]) -> Vec<usize> {
        let base: Box<dyn Iterator<Item = usize>> = match self.back[v].first() {
            Some(&(u, true)) => Box::new(self.t.out_neighbors(map[u]).iter().map(|&x| x as usize)),
            Some(&(u, false)) => Box::new(self.t_in[map[u]].iter().map(|&x| x as usize)),
            None => Box::new(0..self.t.n()),
        };
        base.filter(|&x| {
            self.allowed(v, x)
                && (!self.loops[v] || self.t.has_edge(x, x))
                && self.back[v].iter().skip(1).all(|&(u, fwd)| {
                    if fwd {
                        self.t.has_edge(map[u], x)
                    } else {
                        self.t.has_edge(x, map[u])
                    }
                })
        })
        .collect()
    }

    fn count_from(&self, v: usize, map: &mut Vec<usize>) -> u128 {
        if v == map.len() {
            return 1;
        }
        let mut total = 0u128;
        for x in self.candidates(v, map) {
            map[v] = x;
            total += self.count_from(v + 1, map);
        }
        total
    }

    fn count(&self, n: usize) -> BigUint {
        if n == 0 {
            return BigUint::one();
        }
        let map = vec![0; n];
        let first = self.candidates(0, &map);
        first
            .par_iter()
            .map(|&x| {
                let mut m = vec![0; n];
                m[0] = x;
                BigUint::from(self.count_from(1, &mut m))
            })
            .sum()
    }

    fn enumerate(&self, v: usize, map: &mut Vec<usize>, out: &mut Vec<Homomorphism>, cap: usize) -> Result<()> {
        if v == map.len() {
            if out.len() == cap {
                return Err(Error::EnumerationCap(cap));
            }
            out.push(map.clone());
            return Ok(());
        }
        for x in self.candidates(v, map) {
            map[v] = x;
            self.enumerate(v + 1, map, out, cap)?;
        }
        Ok(())
    }
}

/// Default enumeration cap.
pub const ENUMERATION_CAP: usize = 10_000_000;

/// All homomorphisms in lexicographic order of the image tuple.
pub fn enumerate_homs(f: &Graph, t: &Graph, cap: usize) -> Result<Vec<Homomorphism>> {
    let s = Search::new(f, t, None);
    let mut out = Vec::new();
    s.enumerate(0, &mut vec![0; f.n()], &mut out, cap)?;
    Ok(out)
}

pub fn count_homs(f: &Graph, t: &Graph) -> BigUint {
    count_homs_with(f, t, Strategy::Auto).expect("auto strategy always applies")
}

/// Counts with a specific strategy; `None` when it does not apply to `f`.
pub fn count_homs_with(f: &Graph, t: &Graph, strategy: Strategy) -> Option<BigUint> {
    match strategy {
        Strategy::Backtrack => Some(Search::new(f, t, None).count(f.n())),
        Strategy::Chordal => chordal_count(f, t, None),
        Strategy::Transfer => transfer_count(f, t),
        Strategy::Auto => transfer_count(f, t)
            .or_else(|| chordal_count(f, t, None))
            .or_else(|| Some(Search::new(f, t, None).count(f.n()))),
    }
}

/// Number of `psi in Hom(f,t)` with `proj ∘ psi = phi`, where `proj: t -> g`
/// and `phi: f -> g`.
pub fn count_homs_fiber(f: &Graph, t: &Graph, g: &Graph, proj: &[usize], phi: &[usize]) -> Result<BigUint> {
    check_homomorphism(t, g, proj)?;
    check_homomorphism(f, g, phi)?;
    let domains: Vec<Vec<bool>> = phi
        .iter()
        .map(|&gv| proj.iter().map(|&p| p == gv).collect())
        .collect();
    Ok(chordal_count(f, t, Some(&domains)).unwrap_or_else(|| Search::new(f, t, Some(domains)).count(f.n())))
}

struct Factor {
    scope: Vec<usize>,
    table: HashMap<Vec<u32>, BigUint>,
}

/// Bucket elimination along the reverse of an elimination ordering of the
/// simple closure. Every intermediate scope is a clique of `f`, so joint
/// assignments are enumerated through target adjacency.
fn chordal_count(f: &Graph, t: &Graph, domains: Option<&[Vec<bool>]>) -> Option<BigUint> {
    let ord = f.elimination_ordering()?;
    let order = ord.order();
    let earlier = ord.earlier_neighbors(f);
    let mut pos = vec![0; f.n()];
    for (j, &v) in order.iter().enumerate() {
        pos[v] = j;
    }
    let t_in = t.in_neighbors();
    let mut factors: Vec<Factor> = Vec::new();
    let mut scalar = BigUint::one();
    for j in (0..order.len()).rev() {
        let v = order[j];
        // clique scope, sorted by ordering position, v last
        let mut scope: Vec<usize> = earlier[j].clone();
        scope.sort_by_key(|&u| pos[u]);
        scope.push(v);
        let (mine, rest): (Vec<Factor>, Vec<Factor>) = factors.into_iter().partition(|fa| fa.scope.contains(&v));
        factors = rest;
        let idx: Vec<Vec<usize>> = mine
            .iter()
            .map(|fa| fa.scope.iter().map(|u| scope.iter().position(|w| w == u).expect("scope ⊆ clique")).collect())
            .collect();
        let mut table: HashMap<Vec<u32>, BigUint> = HashMap::new();
        let mut assign = vec![0u32; scope.len()];
        let mut visit = |a: &[u32]| {
            let mut val = BigUint::one();
            for (fa, ix) in mine.iter().zip(&idx) {
                let key: Vec<u32> = ix.iter().map(|&i| a[i]).collect();
                match fa.table.get(&key) {
                    Some(x) => val *= x,
                    None => return,
                }
            }
            *table.entry(a[..a.len() - 1].to_vec()).or_insert_with(BigUint::zero) += val;
        };
        clique_assignments(f, t, &t_in, &scope, domains, 0, &mut assign, &mut visit);
        if scope.len() == 1 {
            scalar *= table.remove(&Vec::new()).unwrap_or_default();
            if scalar.is_zero() {
                return Some(scalar);
            }
        } else {
            factors.push(Factor {
                scope: scope[..scope.len() - 1].to_vec(),
                table,
            });
        }
    }
    debug_assert!(factors.is_empty());
    Some(scalar)
}

/// Enumerates maps of the clique `scope` into `t` respecting all edges of `f`
/// inside it.
#[allow(clippy::too_many_arguments)]
fn clique_assignments(
    f: &Graph,
    t: &Graph,
    t_in: &[Vec<u32>],
    scope: &[usize],
    domains: Option<&[Vec<bool>]>,
    k: usize,
    assign: &mut Vec<u32>,
    visit: &mut dyn FnMut(&[u32]),
) {
    if k == scope.len() {
        visit(assign);
        return;
    }
    let v = scope[k];
    let ok = |x: usize, assign: &[u32]| {
        domains.is_none_or(|d| d[v][x])
            && (!f.has_edge(v, v) || t.has_edge(x, x))
            && (0..k).all(|i| {
                let u = scope[i];
                let y = assign[i] as usize;
                (!f.has_edge(u, v) || t.has_edge(y, x)) && (!f.has_edge(v, u) || t.has_edge(x, y))
            })
    };
    let cands: Vec<usize> = if k == 0 {
        (0..t.n()).filter(|&x| ok(x, assign)).collect()
    } else {
        let u = scope[0];
        let y = assign[0] as usize;
        let base: &[u32] = if f.has_edge(u, v) { t.out_neighbors(y) } else { &t_in[y] };
        base.iter().map(|&x| x as usize).filter(|&x| ok(x, assign)).collect()
    };
    for x in cands {
        assign[k] = x as u32;
        clique_assignments(f, t, t_in, scope, domains, k + 1, assign, visit);
    }
}

/// Walk of a loop-free `f` whose simple closure is a path or a cycle:
/// the vertex sequence and, per step, (forward required, backward required).
fn path_or_cycle(f: &Graph) -> Option<(Vec<usize>, Vec<(bool, bool)>, bool)> {
    let n = f.n();
    if n == 0 || f.has_loops() {
        return None;
    }
    let s = f.simple_closure();
    if !s.is_connected() || (0..n).any(|v| s.out_neighbors(v).len() > 2) {
        return None;
    }
    let m = s.edge_count() / 2;
    let cycle = match m {
        _ if m + 1 == n => false,
        _ if m == n && n >= 3 => true,
        _ => return None,
    };
    let start = if cycle { 0 } else { (0..n).find(|&v| s.out_neighbors(v).len() <= 1)? };
    let mut walk = vec![start];
    let mut prev = usize::MAX;
    while walk.len() < n {
        let cur = *walk.last().expect("nonempty");
        let next = s.out_neighbors(cur).iter().map(|&w| w as usize).find(|&w| w != prev)?;
        prev = cur;
        walk.push(next);
    }
    let mut steps: Vec<(bool, bool)> = walk.windows(2).map(|w| (f.has_edge(w[0], w[1]), f.has_edge(w[1], w[0]))).collect();
    if cycle {
        let (a, b) = (walk[n - 1], walk[0]);
        steps.push((f.has_edge(a, b), f.has_edge(b, a)));
    }
    Some((walk, steps, cycle))
}

/// Transfer-matrix count for paths and cycles (any edge orientations).
fn transfer_count(f: &Graph, t: &Graph) -> Option<BigUint> {
    let (_, steps, cycle) = path_or_cycle(f)?;
    let t_in = t.in_neighbors();
    let step = |vec: &[BigUint], (fwd, bwd): (bool, bool)| -> Vec<BigUint> {
        let mut out = vec![BigUint::zero(); t.n()];
        for (x, val) in vec.iter().enumerate() {
            if val.is_zero() {
                continue;
            }
            let base: &[u32] = if fwd { t.out_neighbors(x) } else { &t_in[x] };
            for &y in base {
                let y = y as usize;
                if (!fwd || t.has_edge(x, y)) && (!bwd || t.has_edge(y, x)) {
                    out[y] += val;
                }
            }
        }
        out
    };
    if !cycle {
        let mut vec = vec![BigUint::one(); t.n()];
        for &s in &steps {
            vec = step(&vec, s);
        }
        return Some(vec.into_iter().sum());
    }
    let total = (0..t.n())
        .into_par_iter()
        .map(|x| {
            let mut vec = vec![BigUint::zero(); t.n()];
            vec[x] = BigUint::one();
            for &s in &steps {
                vec = step(&vec, s);
            }
            vec.swap_remove(x)
        })
        .sum();
    Some(total)
}

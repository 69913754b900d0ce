use super::{check_size, rs_graph, Metadata, ProjectedTarget};
use crate::bounds::chordal_identity;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::polymatroid::{decompose_K3_polymatroid, is_polymatroidal, SetFunction};
use crate::rational::{int, lcm_of_denominators, Rational};
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{HashMap, HashSet};

/// Generator order of the triangle decomposition: a, b, c, ab, ac, bc, abc, RS.
const PAIR: [[usize; 3]; 3] = [[usize::MAX, 3, 4], [3, usize::MAX, 5], [4, 5, usize::MAX]];

fn third(r: usize, s: usize) -> usize {
    3 - r - s
}

/// Whether generator component `k` varies over role `r` of a triangle.
fn applies(k: usize, r: usize) -> bool {
    match k {
        0..=2 => k == r,
        3 => r != 2,
        4 => r != 1,
        5 => r != 0,
        _ => true,
    }
}

enum Kind {
    Single,
    /// `γ` copies of `K_{α,β}`; role 0 is the α side.
    Bip { alpha: usize, beta: usize },
    Tri {
        m: [usize; 8],
        /// Edges of the RS block as (part r index, part s index) pairs, r < s;
        /// `None` when the block is `K_A` itself.
        rs: Option<HashSet<(usize, usize, usize, usize)>>,
    },
}

/// Block `T_A` over one maximal clique. Local labels per role are
/// `0..sizes[r]`.
struct Block {
    verts: Vec<usize>,
    sizes: Vec<usize>,
    kind: Kind,
}

impl Block {
    fn role(&self, v: usize) -> usize {
        self.verts.iter().position(|&w| w == v).expect("vertex of the clique")
    }

    fn decode(m: &[usize; 8], r: usize, mut l: usize) -> [usize; 8] {
        let mut t = [0; 8];
        for k in 0..8 {
            if applies(k, r) {
                t[k] = l % m[k];
                l /= m[k];
            }
        }
        t
    }

    fn encode(m: &[usize; 8], r: usize, t: &[usize; 8]) -> usize {
        let mut l = 0;
        for k in (0..8).rev() {
            if applies(k, r) {
                l = l * m[k] + t[k];
            }
        }
        l
    }

    /// `(γ, side size of r)` of the bipartite piece over roles `r, s`.
    fn dims(&self, r: usize, s: usize) -> (usize, usize) {
        match &self.kind {
            Kind::Single => unreachable!("no pairs in a single-vertex block"),
            Kind::Bip { alpha, beta } => {
                let side = if r == 0 { *alpha } else { *beta };
                (self.sizes[r] / side, side)
            }
            Kind::Tri { m, .. } => {
                let gamma = m[PAIR[r][s]] * m[6];
                (gamma, self.sizes[r] / gamma)
            }
        }
    }

    /// Identification of the `{r, s}` part with `γ·K_{α,β}`: label of role
    /// `r` to (copy, index within r's side).
    fn xi(&self, r: usize, s: usize, l: usize) -> (usize, usize) {
        match &self.kind {
            Kind::Single => unreachable!(),
            Kind::Bip { alpha, beta } => {
                let side = if r == 0 { *alpha } else { *beta };
                (l / side, l % side)
            }
            Kind::Tri { m, .. } => {
                let t = Self::decode(m, r, l);
                let o = PAIR[r][third(r, s)];
                let copy = t[PAIR[r][s]] * m[6] + t[6];
                let side = (t[r] * m[o] + t[o]) * m[7] + t[7];
                (copy, side)
            }
        }
    }

    fn xi_inv(&self, r: usize, s: usize, copy: usize, side: usize) -> usize {
        match &self.kind {
            Kind::Single => unreachable!(),
            Kind::Bip { alpha, beta } => copy * if r == 0 { *alpha } else { *beta } + side,
            Kind::Tri { m, .. } => {
                let o = PAIR[r][third(r, s)];
                let mut t = [0; 8];
                t[PAIR[r][s]] = copy / m[6];
                t[6] = copy % m[6];
                t[7] = side % m[7];
                t[o] = (side / m[7]) % m[o];
                t[r] = side / m[7] / m[o];
                Self::encode(m, r, &t)
            }
        }
    }

    /// Local edges `((r, l), (s, l'))` with `r < s`.
    fn edges(&self) -> Vec<((usize, usize), (usize, usize))> {
        let mut out = Vec::new();
        match &self.kind {
            Kind::Single => {}
            Kind::Bip { alpha, beta } => {
                let gamma = self.sizes[0] / alpha;
                for c in 0..gamma {
                    for i in 0..*alpha {
                        for j in 0..*beta {
                            out.push(((0, c * alpha + i), (1, c * beta + j)));
                        }
                    }
                }
            }
            Kind::Tri { m, rs } => {
                for r in 0..3 {
                    for s in r + 1..3 {
                        let pc = PAIR[r][s];
                        let mut by_key: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
                        for l in 0..self.sizes[s] {
                            let t = Self::decode(m, s, l);
                            by_key.entry((t[pc], t[6])).or_default().push((l, t[7]));
                        }
                        for l in 0..self.sizes[r] {
                            let t = Self::decode(m, r, l);
                            for &(l2, rs2) in by_key.get(&(t[pc], t[6])).map(Vec::as_slice).unwrap_or(&[]) {
                                if rs.as_ref().is_none_or(|e| e.contains(&(r, t[7], s, rs2))) {
                                    out.push(((r, l), (s, l2)));
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Exact powers `s^{D·x}` for the rationals of one construction.
struct Scale {
    s: u64,
    d: u64,
}

impl Scale {
    fn pow(&self, x: &Rational) -> Result<usize> {
        let e = (x * Rational::from_integer((self.d as i64).into()))
            .to_integer()
            .to_u32()
            .ok_or_else(|| Error::InvalidParameter(format!("negative exponent {x}")))?;
        self.s
            .checked_pow(e)
            .and_then(|v| usize::try_from(v).ok())
            .filter(|&v| v <= super::TARGET_VERTEX_CAP)
            .ok_or_else(|| Error::guard("tightness target", format!("{}^{e}", self.s), super::TARGET_VERTEX_CAP))
    }
}

fn restrict(p: &SetFunction, clique: &[usize]) -> SetFunction {
    SetFunction::from_fn(clique.len(), |a| {
        let img = a.iter().fold(VertexSet::EMPTY, |s, i| s.with(clique[i]));
        p.get(img).clone()
    })
}

/// Checks what the construction consumes: `p(∅) = 0`, each maximal-clique
/// restriction is a polymatroid, and the chordal identity of `g` evaluates
/// to 1 on `p`.
fn check_p(g: &Graph, cliques: &[Vec<usize>], p: &SetFunction) -> Result<()> {
    if p.n() != g.n() || !p.get(VertexSet::EMPTY).is_zero() {
        return Err(Error::Infeasible("p must be defined on V_G with p(∅) = 0".into()));
    }
    for c in cliques {
        let k = Graph::undirected(c.len(), (0..c.len()).flat_map(|i| (i + 1..c.len()).map(move |j| (i, j))))?;
        let r = is_polymatroidal(&restrict(p, c), &k, false);
        if !r.ok {
            return Err(Error::Infeasible(format!("p restricted to {c:?}: {}", r.violations[0])));
        }
    }
    let total: Rational = chordal_identity(g)?.iter().map(|(a, k)| p.get(*a) * int(*k)).sum();
    if total != int(1) {
        return Err(Error::Infeasible(format!("chordal identity of p is {total}, not 1")));
    }
    Ok(())
}

/// Maximum-weight spanning forest of the clique intersection graph, as
/// parent pointers in depth-first order from the lowest-index clique of each
/// component.
fn clique_forest(cliques: &[VertexSet]) -> Vec<(usize, Option<usize>)> {
    let k = cliques.len();
    let mut pairs: Vec<(usize, usize, usize)> = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let w = cliques[i].intersection(cliques[j]).len();
            if w > 0 {
                pairs.push((w, i, j));
            }
        }
    }
    pairs.sort_by(|a, b| b.0.cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    let mut root: Vec<usize> = (0..k).collect();
    fn find(root: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while root[x] != x {
            root[x] = root[root[x]];
            x = root[x];
        }
        x
    }
    let mut adj = vec![Vec::new(); k];
    for (_, i, j) in pairs {
        let (a, b) = (find(&mut root, i), find(&mut root, j));
        if a != b {
            root[a] = b;
            adj[i].push(j);
            adj[j].push(i);
        }
    }
    let mut seen = vec![false; k];
    let mut out = Vec::new();
    for start in 0..k {
        if seen[start] {
            continue;
        }
        let mut stack = vec![(start, None)];
        seen[start] = true;
        while let Some((c, parent)) = stack.pop() {
            out.push((c, parent));
            for &d in adj[c].iter().rev() {
                if !seen[d] {
                    seen[d] = true;
                    stack.push((d, Some(c)));
                }
            }
        }
    }
    out
}

/// Target over a chordal `g` of clique number at most 3 whose fibers follow
/// `p`: one block per maximal clique, glued along a clique tree with random
/// bijections on shared vertices and random automorphisms of `γ·K_{α,β}`
/// on shared edges, keeping only edges present in every block that covers
/// them. Exponents are realized exactly at the scale `s^D`, where `D` clears
/// every denominator and `s` is the least integer with `s^D ≥ n`.
pub fn build_tightness_target(g: &Graph, p: &SetFunction, n: u64, seed: u64) -> Result<ProjectedTarget> {
    if n < 2 {
        return Err(Error::InvalidParameter("n must be at least 2".into()));
    }
    let simple = g.simple_closure();
    if !simple.is_chordal() {
        return Err(Error::NotChordal(g.name().to_string()));
    }
    if simple.clique_number() > 3 {
        return Err(Error::CliqueNumberTooLarge(simple.clique_number()));
    }
    let mut cliques: Vec<VertexSet> = simple.max_cliques();
    cliques.sort();
    let lists: Vec<Vec<usize>> = cliques.iter().map(|c| c.iter().collect()).collect();
    check_p(&simple, &lists, p)?;

    // exponents, then a common denominator
    let mut lambdas: Vec<Option<Vec<Rational>>> = Vec::new();
    let mut exps: Vec<Rational> = Vec::new();
    for c in &cliques {
        for a in c.subsets() {
            exps.push(p.get(a).clone());
        }
    }
    for l in &lists {
        if l.len() == 3 {
            let lam: Vec<Rational> = decompose_K3_polymatroid(&restrict(p, l))?.into_iter().map(|(_, x)| x).collect();
            exps.extend(lam.iter().cloned());
            exps.push(&lam[7] / int(2));
            lambdas.push(Some(lam));
        } else {
            lambdas.push(None);
        }
    }
    let d = lcm_of_denominators(exps.iter())
        .to_u64()
        .ok_or_else(|| Error::guard("tightness target", "denominator", u64::MAX))?;
    let d32 = u32::try_from(d).map_err(|_| Error::guard("tightness target", d, u32::MAX))?;
    let mut s = (n as f64).powf(1.0 / d as f64).floor().max(1.0) as u64;
    while s.checked_pow(d32).is_some_and(|v| v < n) {
        s += 1;
    }
    let scale_value = s
        .checked_pow(d32)
        .ok_or_else(|| Error::guard("tightness target", format!("{s}^{d}"), u64::MAX))?;
    let sc = Scale { s, d };

    let mut blocks = Vec::with_capacity(cliques.len());
    for (l, lam) in lists.iter().zip(&lambdas) {
        let pv = |vs: &[usize]| p.get(vs.iter().fold(VertexSet::EMPTY, |a, &v| a.with(v))).clone();
        let block = match l.len() {
            1 => Block {
                verts: l.clone(),
                sizes: vec![sc.pow(&pv(l))?],
                kind: Kind::Single,
            },
            2 => {
                let (a, b, ab) = (pv(&l[..1]), pv(&l[1..]), pv(l));
                let alpha = sc.pow(&(&ab - &b))?;
                let beta = sc.pow(&(&ab - &a))?;
                let gamma = sc.pow(&(&a + &b - &ab))?;
                Block {
                    verts: l.clone(),
                    sizes: vec![alpha * gamma, beta * gamma],
                    kind: Kind::Bip { alpha, beta },
                }
            }
            _ => {
                let lam = lam.as_ref().expect("triangle");
                let mut m = [1usize; 8];
                for k in 0..7 {
                    m[k] = sc.pow(&lam[k])?;
                }
                let rs = if lam[7].is_zero() {
                    None
                } else {
                    m[7] = sc.pow(&(&lam[7] / int(2)))?;
                    let h = rs_graph(m[7]);
                    let mut e = HashSet::new();
                    for (u, v) in h.edges() {
                        let (r, s_) = (u / m[7], v / m[7]);
                        if r < s_ {
                            e.insert((r, u % m[7], s_, v % m[7]));
                        }
                    }
                    Some(e)
                };
                let sizes = (0..3).map(|r| (0..8).filter(|&k| applies(k, r)).map(|k| m[k]).product()).collect();
                Block {
                    verts: l.clone(),
                    sizes,
                    kind: Kind::Tri { m, rs },
                }
            }
        };
        blocks.push(block);
    }

    // global fibers
    let mut fiber = vec![usize::MAX; g.n()];
    for b in &blocks {
        for (r, &v) in b.verts.iter().enumerate() {
            if fiber[v] != usize::MAX && fiber[v] != b.sizes[r] {
                return Err(Error::Infeasible(format!("fiber sizes over vertex {v} disagree")));
            }
            fiber[v] = b.sizes[r];
        }
    }
    let total: usize = fiber.iter().sum();
    let est_edges: usize = blocks
        .iter()
        .map(|b| match &b.kind {
            Kind::Single => 0,
            Kind::Bip { alpha, beta } => b.sizes[0] * beta.max(&1) / alpha.max(&1) * alpha,
            Kind::Tri { .. } => b.sizes.iter().sum::<usize>() * b.sizes.iter().max().copied().unwrap_or(0),
        })
        .sum();
    check_size("tightness target", total, est_edges.min(usize::MAX / 2) / 64)?;
    let mut offset = vec![0; g.n() + 1];
    for v in 0..g.n() {
        offset[v + 1] = offset[v] + fiber[v];
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sigma: Vec<Vec<Vec<usize>>> = blocks.iter().map(|b| b.sizes.iter().map(|&s| (0..s).collect()).collect()).collect();
    for (c, parent) in clique_forest(&cliques) {
        let Some(a) = parent else { continue };
        let sep: Vec<usize> = cliques[c].intersection(cliques[a]).iter().collect();
        let (bb, ba) = (&blocks[c], &blocks[a]);
        match sep[..] {
            [v] => {
                let (rb, ra) = (bb.role(v), ba.role(v));
                let mut perm: Vec<usize> = (0..bb.sizes[rb]).collect();
                perm.shuffle(&mut rng);
                sigma[c][rb] = perm.iter().map(|&l| sigma[a][ra][l]).collect();
            }
            [u, v] => {
                let (rbu, rbv, rau, rav) = (bb.role(u), bb.role(v), ba.role(u), ba.role(v));
                let (gamma, alpha) = bb.dims(rbu, rbv);
                let (_, beta) = bb.dims(rbv, rbu);
                if ba.dims(rau, rav) != (gamma, alpha) || ba.dims(rav, rau).1 != beta {
                    return Err(Error::Infeasible(format!("blocks disagree over edge {{{u},{v}}}")));
                }
                let mut copies: Vec<usize> = (0..gamma).collect();
                copies.shuffle(&mut rng);
                let mut side_perm = |size: usize| -> Vec<Vec<usize>> {
                    (0..gamma)
                        .map(|_| {
                            let mut p: Vec<usize> = (0..size).collect();
                            p.shuffle(&mut rng);
                            p
                        })
                        .collect()
                };
                let (pu, pv) = (side_perm(alpha), side_perm(beta));
                for (rb, ra, other_b, other_a, perms) in [(rbu, rau, rbv, rav, &pu), (rbv, rav, rbu, rau, &pv)] {
                    sigma[c][rb] = (0..bb.sizes[rb])
                        .map(|l| {
                            let (copy, i) = bb.xi(rb, other_b, l);
                            let la = ba.xi_inv(ra, other_a, copies[copy], perms[copy][i]);
                            sigma[a][ra][la]
                        })
                        .collect();
                }
            }
            _ => return Err(Error::InvalidParameter("separator larger than 2".into())),
        }
    }

    // an edge survives when every block covering its projected pair has it
    let mut cover: HashMap<(usize, usize), usize> = HashMap::new();
    for c in &cliques {
        for u in c.iter() {
            for v in c.iter().filter(|&v| v > u) {
                *cover.entry((u, v)).or_default() += 1;
            }
        }
    }
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    for (k, b) in blocks.iter().enumerate() {
        for ((r, l), (s_, l2)) in b.edges() {
            let (u, v) = (b.verts[r], b.verts[s_]);
            let x = offset[u] + sigma[k][r][l];
            let y = offset[v] + sigma[k][s_][l2];
            *seen.entry((x.min(y), x.max(y))).or_default() += 1;
        }
    }
    let projection: Vec<usize> = (0..g.n()).flat_map(|v| std::iter::repeat_n(v, fiber[v])).collect();
    let mut edges = Vec::new();
    for ((x, y), k) in seen {
        let (u, v) = (projection[x], projection[y]);
        if k == cover[&(u.min(v), u.max(v))] {
            if g.has_edge(u, v) {
                edges.push((x, y));
            }
            if g.has_edge(v, u) {
                edges.push((y, x));
            }
        }
    }
    check_size("tightness target", total, edges.len())?;
    let params = serde_json::json!({
        "requested_n": n,
        "root": s,
        "denominator": d,
        "cliques": lists,
    });
    Ok(ProjectedTarget {
        target: Graph::new(total, edges)?.named(format!("T[{}]", g.name())),
        projection,
        base: g.clone(),
        meta: Metadata {
            kind: "tight",
            scale: scale_value,
            seed: Some(seed),
            params,
        },
    })
}

/// Keeps target edges whose projection is an edge of `g`; `g` must be a
/// spanning subgraph of the target's base.
pub fn filter_to_series_parallel(tgt: &ProjectedTarget, g: &Graph) -> Result<ProjectedTarget> {
    if g.n() != tgt.base.n() {
        return Err(Error::InvalidParameter(format!(
            "vertex sets differ: {} vs {}",
            g.n(),
            tgt.base.n()
        )));
    }
    if let Some((u, v)) = g.edges().find(|&(u, v)| !tgt.base.has_edge(u, v)) {
        return Err(Error::InvalidParameter(format!("edge ({u},{v}) is not in the base graph")));
    }
    let pi = &tgt.projection;
    let edges: Vec<(usize, usize)> = tgt.target.edges().filter(|&(x, y)| g.has_edge(pi[x], pi[y])).collect();
    let mut meta = tgt.meta.clone();
    meta.kind = "tight-filtered";
    Ok(ProjectedTarget {
        target: Graph::new(tgt.target.n(), edges)?.named(format!("T[{}]", g.name())),
        projection: pi.clone(),
        base: g.clone(),
        meta,
    })
}

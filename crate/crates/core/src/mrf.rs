//! Finite joint distributions with exact probabilities, their entropies,
//! Markov random field checks and the pullback along a homomorphism from a
//! chordal graph.

use crate::bounds::{alternating_sum, coeff_vector};
use crate::error::{Error, Result};
use crate::graph::{separates_in, EliminationOrdering, Graph, VertexSet};
use crate::hom::{enumerate_homs, is_homomorphism, ENUMERATION_CAP};
use crate::rational::{to_f64, Rational};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};

/// Largest index set for which full entropy profiles are computed.
pub const PROFILE_CAP: usize = 16;

/// Largest number of partial assignments carried through a pullback.
pub const PULLBACK_STATE_CAP: usize = 5_000_000;

pub type Assignment = Vec<usize>;

/// A distribution on `Ω^V` with `V = 0..n` and `Ω = 0..alphabet`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointDistribution {
    n: usize,
    alphabet: usize,
    probs: BTreeMap<Assignment, Rational>,
}

impl JointDistribution {
    /// Zero entries are dropped; the rest must be positive and sum to 1.
    pub fn new(n: usize, alphabet: usize, probs: impl IntoIterator<Item = (Assignment, Rational)>) -> Result<Self> {
        let mut map: BTreeMap<Assignment, Rational> = BTreeMap::new();
        for (a, p) in probs {
            if a.len() != n || a.iter().any(|&x| x >= alphabet) {
                return Err(Error::InvalidParameter(format!("assignment {a:?} is not in {alphabet}^{n}")));
            }
            if p.is_negative() {
                return Err(Error::InvalidParameter(format!("negative probability at {a:?}")));
            }
            if !p.is_zero() {
                *map.entry(a).or_insert_with(Rational::zero) += p;
            }
        }
        if map.is_empty() {
            return Err(Error::InvalidParameter("empty support".into()));
        }
        let total: Rational = map.values().sum();
        if !total.is_one() {
            return Err(Error::InvalidParameter(format!("probabilities sum to {total}")));
        }
        Ok(JointDistribution { n, alphabet, probs: map })
    }

    /// Uniform on the given assignments (duplicates collapse).
    pub fn uniform(n: usize, alphabet: usize, support: impl IntoIterator<Item = Assignment>) -> Result<Self> {
        let mut s: Vec<Assignment> = support.into_iter().collect();
        s.sort();
        s.dedup();
        if s.is_empty() {
            return Err(Error::InvalidParameter("empty support".into()));
        }
        let p = Rational::new(1.into(), (s.len() as i64).into());
        JointDistribution::new(n, alphabet, s.into_iter().map(|a| (a, p.clone())))
    }

    pub fn point_mass(a: Assignment, alphabet: usize) -> Result<Self> {
        let n = a.len();
        JointDistribution::new(n, alphabet, [(a, Rational::one())])
    }

    /// Independent coordinates with the given marginals (each a map on `Ω`).
    pub fn product(marginals: &[Vec<Rational>]) -> Result<Self> {
        let alphabet = marginals.iter().map(Vec::len).max().unwrap_or(1);
        let mut cur: Vec<(Assignment, Rational)> = vec![(Vec::new(), Rational::one())];
        for m in marginals {
            let mut next = Vec::new();
            for (a, p) in &cur {
                for (x, q) in m.iter().enumerate().filter(|(_, q)| !q.is_zero()) {
                    let mut b = a.clone();
                    b.push(x);
                    next.push((b, p * q));
                }
            }
            cur = next;
        }
        JointDistribution::new(marginals.len(), alphabet, cur)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn support(&self) -> impl Iterator<Item = &Assignment> {
        self.probs.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Assignment, &Rational)> {
        self.probs.iter()
    }

    pub fn prob(&self, a: &[usize]) -> Rational {
        self.probs.get(a).cloned().unwrap_or_else(Rational::zero)
    }

    /// Marginal on `a`, keyed by the values of `a`'s vertices in increasing order.
    pub fn marginal(&self, a: VertexSet) -> HashMap<Assignment, Rational> {
        let vs: Vec<usize> = a.iter().collect();
        let mut m: HashMap<Assignment, Rational> = HashMap::new();
        for (x, p) in &self.probs {
            let key = vs.iter().map(|&v| x[v]).collect();
            *m.entry(key).or_insert_with(Rational::zero) += p;
        }
        m
    }

    /// Entropy in bits.
    pub fn entropy(&self) -> f64 {
        shannon(self.probs.values())
    }
}

fn shannon<'a>(ps: impl Iterator<Item = &'a Rational>) -> f64 {
    ps.map(|p| {
        let x = to_f64(p);
        -x * x.log2()
    })
    .sum()
}

/// `H(X_A)` in bits.
pub fn marginal_entropy(x: &JointDistribution, a: VertexSet) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    shannon(x.marginal(a).values())
}

/// `A ↦ H(X_A)` for every `A ⊆ V`, indexed by bitmask.
#[derive(Clone, Debug)]
pub struct EntropyProfile {
    pub n: usize,
    pub values: Vec<f64>,
    pub total: f64,
}

impl EntropyProfile {
    pub fn get(&self, a: VertexSet) -> f64 {
        self.values[a.index()]
    }

    /// `h_X = H(X_A)/H(X)`; `None` when `H(X) = 0`.
    pub fn normalized(&self) -> Option<Vec<f64>> {
        (self.total > 0.0).then(|| self.values.iter().map(|v| v / self.total).collect())
    }
}

pub fn entropy_profile(x: &JointDistribution) -> Result<EntropyProfile> {
    if x.n > PROFILE_CAP {
        return Err(Error::guard("entropy profile", x.n, PROFILE_CAP));
    }
    let values: Vec<f64> = (0..1u64 << x.n)
        .into_par_iter()
        .map(|b| marginal_entropy(x, VertexSet::from_bits(b)))
        .collect();
    let total = values[values.len() - 1];
    Ok(EntropyProfile { n: x.n, values, total })
}

pub fn uniform_hom_distribution(g: &Graph, t: &Graph) -> Result<JointDistribution> {
    let homs = enumerate_homs(g, t, ENUMERATION_CAP)?;
    if homs.is_empty() {
        return Err(Error::NoHomomorphism);
    }
    JointDistribution::uniform(g.n(), t.n().max(1), homs)
}

#[derive(Clone, Debug)]
pub struct MrfReport {
    pub ok: bool,
    /// Largest `|H(S+i) + H(S+j) − H(S+i+j) − H(S)|` over separating triples.
    pub worst: f64,
    pub witness: Option<(VertexSet, usize, usize)>,
}

/// Checks conditional independence of every non-adjacent pair `i, j` given
/// every `S` separating them; by the chain rule this covers all pairs of
/// sets whose intersection separates their differences.
pub fn is_mrf(x: &JointDistribution, g: &Graph, tol: f64) -> Result<MrfReport> {
    if g.n() != x.n {
        return Err(Error::InvalidParameter(format!("distribution on {} vertices, graph on {}", x.n, g.n())));
    }
    let h = entropy_profile(x)?;
    let adj = g.adjacency_masks();
    let v = VertexSet::full(x.n);
    let mut worst = 0.0;
    let mut witness = None;
    for i in 0..x.n {
        for j in i + 1..x.n {
            if adj[i].contains(j) {
                continue;
            }
            for s in v.without(i).without(j).subsets() {
                if !separates_in(&adj, s, VertexSet::singleton(i), VertexSet::singleton(j)) {
                    continue;
                }
                let d = (h.get(s.with(i)) + h.get(s.with(j)) - h.get(s.with(i).with(j)) - h.get(s)).abs();
                if d > worst {
                    worst = d;
                    witness = Some((s, i, j));
                }
            }
        }
    }
    Ok(MrfReport {
        ok: worst <= tol,
        worst,
        witness,
    })
}

/// Distribution on `V_F` built vertex by vertex along `ord`: `v_j` takes the
/// law of `X_{φ(v_j)}` given the values already fixed on its earlier
/// neighbors. Computed exactly, not sampled.
pub fn pullback(x: &JointDistribution, f: &Graph, phi: &[usize], ord: &EliminationOrdering) -> Result<JointDistribution> {
    ord.verify(f)?;
    if phi.len() != f.n() || phi.iter().any(|&v| v >= x.n) {
        return Err(Error::InvalidParameter("map does not go into the distribution's index set".into()));
    }
    let unset = usize::MAX;
    let mut states: Vec<(Assignment, Rational)> = vec![(vec![unset; f.n()], Rational::one())];
    for (&v, nbrs) in ord.order().iter().zip(ord.earlier_neighbors(f)) {
        let s: VertexSet = nbrs.iter().fold(VertexSet::EMPTY, |acc, &u| acc.with(phi[u]));
        let t = s.with(phi[v]);
        let on_s = x.marginal(s);
        let on_t = x.marginal(t);
        let s_vs: Vec<usize> = s.iter().collect();
        let t_vs: Vec<usize> = t.iter().collect();
        // image vertex -> some preimage among earlier neighbors
        let pre: HashMap<usize, usize> = nbrs.iter().map(|&u| (phi[u], u)).collect();
        let mut next = Vec::new();
        for (a, p) in &states {
            let key: Assignment = s_vs.iter().map(|w| a[pre[w]]).collect();
            let denom = on_s.get(&key).cloned().unwrap_or_else(Rational::zero);
            if denom.is_zero() {
                return Err(Error::ZeroProbability(v));
            }
            if let Some(&u) = pre.get(&phi[v]) {
                // φ(v) is already fixed through a neighbor
                let mut b = a.clone();
                b[v] = a[u];
                next.push((b, p.clone()));
                continue;
            }
            for val in 0..x.alphabet {
                let tkey: Assignment = t_vs
                    .iter()
                    .map(|w| if *w == phi[v] { val } else { a[pre[w]] })
                    .collect();
                if let Some(num) = on_t.get(&tkey) {
                    let mut b = a.clone();
                    b[v] = val;
                    next.push((b, p * num / &denom));
                }
            }
        }
        if next.len() > PULLBACK_STATE_CAP {
            return Err(Error::guard("pullback states", next.len(), PULLBACK_STATE_CAP));
        }
        states = next;
    }
    JointDistribution::new(f.n(), x.alphabet, states)
}

/// Whether every outcome of `x` is a homomorphism into `t`.
pub fn support_in_homs(x: &JointDistribution, g: &Graph, t: &Graph) -> bool {
    x.support().all(|a| is_homomorphism(g, t, a))
}

#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub ok: bool,
    pub total: f64,
    pub alternating: f64,
    pub telescoping: f64,
}

/// Evaluates both forms of the chordal identity on `A ↦ H(X_A)`.
pub fn verify_chordal_entropy_identity(x: &JointDistribution, g: &Graph, tol: f64) -> Result<IdentityCheck> {
    let ord = g
        .elimination_ordering()
        .ok_or_else(|| Error::NotChordal(g.name().to_string()))?;
    let id: Vec<usize> = (0..g.n()).collect();
    let eval = |terms: Vec<(VertexSet, i64)>| -> f64 { terms.iter().map(|(a, c)| *c as f64 * marginal_entropy(x, *a)).sum() };
    let alternating = eval(alternating_sum(g, &id).terms());
    let telescoping = eval(coeff_vector(g, &id, &ord)?.terms());
    let total = x.entropy();
    Ok(IdentityCheck {
        ok: (alternating - total).abs() <= tol && (telescoping - total).abs() <= tol,
        total,
        alternating,
        telescoping,
    })
}

/// `Σ_A c_φ(A)·H(X_A)`: the entropy the pullback along `φ` must have.
pub fn coefficient_entropy(x: &JointDistribution, f: &Graph, phi: &[usize], ord: &EliminationOrdering) -> Result<f64> {
    Ok(coeff_vector(f, phi, ord)?
        .terms()
        .iter()
        .map(|(a, c)| *c as f64 * marginal_entropy(x, *a))
        .sum())
}

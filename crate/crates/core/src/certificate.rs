//! Entropy-proof certificates for HDE lower bounds.
//!
//! A certificate is a weighting `w` of `Hom(F,G)` plus multipliers on
//! elemental rows of P(G) with
//! `Σ w(φ)·c_φ − Σ m_r·r = W·(a/b)·target` coefficient by coefficient,
//! where `W = Σ w` and the target is the chordal identity of G (chordal G)
//! or `p(V)`. Checking it is pure rational linear algebra.

use crate::bounds::{chordal_identity, coeff_vector};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::hom::{count_homs, is_homomorphism, Homomorphism};
use crate::polymatroid::{monotone_step_expansion, RowId};
use crate::rational::{fmt_rational, int, rat, JsonRational, Rational};
use num_bigint::BigUint;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub f: Graph,
    pub g: Graph,
    /// Claimed lower bound `a/b`.
    pub exponent: Rational,
    pub weights: Vec<(Homomorphism, Rational)>,
    pub multipliers: Vec<(RowId, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub ok: bool,
    /// The exponent, when `ok`.
    pub certified: Option<Rational>,
    pub reason: Option<String>,
}

impl Verification {
    fn reject(reason: String) -> Self {
        Verification {
            ok: false,
            certified: None,
            reason: Some(reason),
        }
    }
}

impl Certificate {
    pub fn total_weight(&self) -> Rational {
        self.weights.iter().map(|(_, w)| w.clone()).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let n = self.g.n();
        let weights: Vec<_> = self
            .weights
            .iter()
            .map(|(phi, w)| json!({ "phi": phi, "w": JsonRational(w.clone()) }))
            .collect();
        let multipliers: Vec<_> = self
            .multipliers
            .iter()
            .map(|(id, v)| {
                let mut o = serde_json::to_value(id).expect("serializable");
                let sets: Vec<String> = id.sets(n).iter().map(|a| a.to_string()).collect();
                o["sets"] = json!(sets);
                o["value"] = serde_json::to_value(JsonRational(v.clone())).expect("serializable");
                o
            })
            .collect();
        json!({
            "F": self.f.to_text(),
            "G": self.g.to_text(),
            "exponent": JsonRational(self.exponent.clone()),
            "weights": weights,
            "multipliers": multipliers,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Certificate> {
        let bad = |m: &str| Error::Parse { line: 0, msg: m.to_string() };
        let graph = |k: &str| -> Result<Graph> {
            Graph::parse(v[k].as_str().ok_or_else(|| bad(&format!("missing graph {k}")))?)
        };
        let ratio = |x: &serde_json::Value| -> Result<Rational> {
            Ok(serde_json::from_value::<JsonRational>(x.clone())?.0)
        };
        let mut weights = Vec::new();
        for e in v["weights"].as_array().ok_or_else(|| bad("missing weights"))? {
            let phi: Homomorphism = serde_json::from_value(e["phi"].clone())?;
            weights.push((phi, ratio(&e["w"])?));
        }
        let mut multipliers = Vec::new();
        for e in v["multipliers"].as_array().ok_or_else(|| bad("missing multipliers"))? {
            let id: RowId = serde_json::from_value(e.clone())?;
            multipliers.push((id, ratio(&e["value"])?));
        }
        Ok(Certificate {
            f: graph("F")?,
            g: graph("G")?,
            exponent: ratio(&v["exponent"])?,
            weights,
            multipliers,
        })
    }

    pub fn write_file(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(&self.to_json())?)?;
        Ok(())
    }

    pub fn read_file(path: impl AsRef<std::path::Path>) -> Result<Certificate> {
        let text = std::fs::read_to_string(path)?;
        Certificate::from_json(&serde_json::from_str(&text)?)
    }
}

/// Coefficient vector the weighted sum must reduce to, per unit of `W·a/b`.
fn target_terms(g: &Graph) -> Result<Vec<(VertexSet, i64)>> {
    if g.is_chordal() {
        chordal_identity(g)
    } else {
        Ok(vec![(VertexSet::full(g.n()), 1)])
    }
}

/// Symbolic check. Total: malformed certificates are rejected with the
/// first problem found.
pub fn verify_certificate(c: &Certificate) -> Verification {
    let (f, g) = (&c.f, &c.g);
    let Some(ord) = f.elimination_ordering() else {
        return Verification::reject(format!("{} is not chordal", f.name()));
    };
    let n = g.n();
    let mut lhs: BTreeMap<VertexSet, Rational> = BTreeMap::new();
    let mut add = |a: VertexSet, v: Rational| {
        if a.is_empty() {
            return;
        }
        let e = lhs.entry(a).or_insert_with(Rational::zero);
        *e += v;
    };
    for (phi, w) in &c.weights {
        if w.is_negative() {
            return Verification::reject(format!("weight {} on {phi:?} is negative", fmt_rational(w)));
        }
        if !is_homomorphism(f, g, phi) {
            return Verification::reject(format!("{phi:?} is not a homomorphism"));
        }
        let cv = coeff_vector(f, phi, &ord).expect("ordering of F");
        for (a, k) in cv.terms() {
            add(a, w * int(k));
        }
    }
    let total = c.total_weight();
    if !total.is_positive() {
        return Verification::reject("total weight is not positive".into());
    }
    for (id, m) in &c.multipliers {
        if !id.is_valid_for(g) {
            return Verification::reject(format!("{id} is not a row of P({})", g.name()));
        }
        if *id == RowId::Normalization {
            return Verification::reject("the normalization row cannot carry a multiplier".into());
        }
        if !id.is_equality() && m.is_negative() {
            return Verification::reject(format!("multiplier {} on inequality {id} is negative", fmt_rational(m)));
        }
        for (a, k) in id.terms(n) {
            add(a, -(m * int(k)));
        }
    }
    let target = match target_terms(g) {
        Ok(t) => t,
        Err(e) => return Verification::reject(e.to_string()),
    };
    let scale = &total * &c.exponent;
    let mut rhs: BTreeMap<VertexSet, Rational> = BTreeMap::new();
    for (a, k) in target {
        *rhs.entry(a).or_insert_with(Rational::zero) += &scale * int(k);
    }
    let keys: std::collections::BTreeSet<VertexSet> = lhs.keys().chain(rhs.keys()).copied().collect();
    for a in keys {
        let l = lhs.get(&a).cloned().unwrap_or_else(Rational::zero);
        let r = rhs.get(&a).cloned().unwrap_or_else(Rational::zero);
        if l != r {
            return Verification::reject(format!(
                "coefficient of H{a}: combination gives {}, target needs {}",
                fmt_rational(&l),
                fmt_rational(&r)
            ));
        }
    }
    Verification {
        ok: true,
        certified: Some(c.exponent.clone()),
        reason: None,
    }
}

/// Solves the lower-bound program and returns its certificate.
pub fn extract_certificate(f: &Graph, g: &Graph) -> Result<Certificate> {
    let r = crate::bounds::hde_lower_chordal(f, g)?;
    r.certificate.ok_or(Error::NoHomomorphism)
}

/// Hand-built certificate for `P4` versus `P_{4n+2}` with exponent
/// `(4n+1)/(4n²+3n+1)`; vertices of the long path are `0..=4n+1`.
pub fn builtin_p4_certificate(n: usize) -> Result<Certificate> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let f = crate::graph::builtin("path", &[4])?;
    let g = crate::graph::builtin("path", &[4 * n + 2])?;
    let mut w: BTreeMap<Homomorphism, Rational> = BTreeMap::new();
    let mut put = |phi: [usize; 4], v: usize| {
        *w.entry(phi.to_vec()).or_insert_with(Rational::zero) += int(v as i64);
    };
    for k in 0..=n {
        put([4 * k, 4 * k + 1, 4 * k, 4 * k + 1], 1);
    }
    for k in 0..n {
        let r = 4 * (n - k);
        put([4 * k, 4 * k + 1, 4 * k + 2, 4 * k + 1], 1);
        put([r + 1, r, r - 1, r], 1);
        put([4 * k + 2, 4 * k + 3, 4 * k + 4, 4 * k + 5], 4 * k + 2);
        // mirror image of the previous family under v -> 4n+1-v
        put([r - 1, r - 2, r - 3, r - 4], 4 * k + 2);
    }
    let verts = g.n();
    let mut m: BTreeMap<RowId, Rational> = BTreeMap::new();
    let mut bump = |id: RowId, v: i64| {
        *m.entry(id).or_insert_with(Rational::zero) += int(v);
    };
    let last = 4 * n + 1;
    for id in monotone_step_expansion(verts, VertexSet::singleton(0), 1) {
        bump(id, 1);
    }
    for id in monotone_step_expansion(verts, VertexSet::singleton(last), last - 1) {
        bump(id, 1);
    }
    let submod = |i: usize| RowId::Submodular { a: 0, i, j: i + 1 };
    for k in 0..n {
        bump(submod(4 * k + 1), (4 * k + 1) as i64);
        bump(submod(4 * k + 2), 1);
        bump(submod(4 * k + 3), (4 * n - 4 * k - 3) as i64);
    }
    let nn = n as i64;
    Ok(Certificate {
        f,
        g,
        exponent: rat(4 * nn + 1, 4 * nn * nn + 3 * nn + 1),
        weights: w.into_iter().collect(),
        multipliers: m.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
    })
}

/// Outcome of checking `hom(F,T)^b ≥ hom(G,T)^a` on concrete targets.
#[derive(Clone, Debug)]
pub struct SoundnessReport {
    pub targets: usize,
    pub failures: Vec<Graph>,
}

/// Targets for the soundness check: all graphs with loops allowed on at most
/// `exhaustive` vertices (undirected when F and G are both symmetric, directed
/// otherwise), plus `sampled` random digraphs on `exhaustive + 1` vertices
/// when the directed family is too large to list.
pub fn soundness_targets(f: &Graph, g: &Graph, exhaustive: usize, sampled: usize, seed: u64) -> Vec<Graph> {
    let directed = !(f.is_symmetric() && g.is_symmetric());
    let pairs = |s: usize| -> Vec<(usize, usize)> {
        (0..s)
            .flat_map(|u| (0..s).map(move |v| (u, v)))
            .filter(|&(u, v)| directed || u <= v)
            .collect()
    };
    let make = |s: usize, e: Vec<(usize, usize)>| {
        if directed {
            Graph::new(s, e).expect("in range")
        } else {
            Graph::undirected(s, e).expect("in range")
        }
    };
    let mut out = Vec::new();
    for s in 1..=exhaustive {
        let ps = pairs(s);
        for mask in 0..1u64 << ps.len() {
            let e = ps.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, p)| *p).collect();
            out.push(make(s, e));
        }
    }
    if sampled > 0 {
        let s = exhaustive + 1;
        let ps = pairs(s);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..sampled {
            let density: f64 = rng.random_range(0.2..0.9);
            let e = ps.iter().copied().filter(|_| rng.random_bool(density)).collect();
            out.push(make(s, e));
        }
    }
    out
}

/// Numeric spot check of a certificate's claim on the given targets.
pub fn soundness_check(c: &Certificate, targets: &[Graph]) -> SoundnessReport {
    let (a, b) = exponent_parts(c).expect("small exponent");
    let failures: Vec<Graph> = targets
        .par_iter()
        .filter(|t| !dominates(&count_homs(&c.f, t), &count_homs(&c.g, t), a, b))
        .cloned()
        .collect();
    SoundnessReport {
        targets: targets.len(),
        failures,
    }
}

/// Largest source graph for [`SmallCounter`].
const SMALL_SOURCE_CAP: usize = 24;

/// Backtracking counter for targets on at most 8 vertices given as
/// out- and in-neighbour bitmasks. Source vertices are visited in BFS
/// order so every vertex after a component root has an earlier neighbour.
struct SmallCounter {
    /// Per position: (earlier position, edge goes earlier -> this).
    back: Vec<Vec<(usize, bool)>>,
    loops: Vec<bool>,
}

impl SmallCounter {
    fn new(f: &Graph) -> Self {
        let n = f.n();
        let s = f.simple_closure();
        let mut order = Vec::with_capacity(n);
        let mut pos = vec![usize::MAX; n];
        for root in 0..n {
            if pos[root] != usize::MAX {
                continue;
            }
            pos[root] = order.len();
            order.push(root);
            let mut k = order.len() - 1;
            while k < order.len() {
                for &w in s.out_neighbors(order[k]) {
                    if pos[w as usize] == usize::MAX {
                        pos[w as usize] = order.len();
                        order.push(w as usize);
                    }
                }
                k += 1;
            }
        }
        let mut back = vec![Vec::new(); n];
        let mut loops = vec![false; n];
        for (u, v) in f.edges() {
            let (pu, pv) = (pos[u], pos[v]);
            match pu.cmp(&pv) {
                std::cmp::Ordering::Less => back[pv].push((pu, true)),
                std::cmp::Ordering::Greater => back[pu].push((pv, false)),
                std::cmp::Ordering::Equal => loops[pu] = true,
            }
        }
        SmallCounter { back, loops }
    }

    fn count(&self, out: &[u8], inn: &[u8], loop_mask: u8, full: u8) -> u64 {
        let mut map = [0usize; SMALL_SOURCE_CAP];
        self.rec(0, &mut map, out, inn, loop_mask, full)
    }

    fn rec(&self, v: usize, map: &mut [usize], out: &[u8], inn: &[u8], loop_mask: u8, full: u8) -> u64 {
        if v == self.back.len() {
            return 1;
        }
        let mut cand = if self.loops[v] { full & loop_mask } else { full };
        for &(u, fwd) in &self.back[v] {
            cand &= if fwd { out[map[u]] } else { inn[map[u]] };
        }
        if v + 1 == self.back.len() {
            return u64::from(cand.count_ones());
        }
        let mut total = 0;
        while cand != 0 {
            map[v] = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            total += self.rec(v + 1, map, out, inn, loop_mask, full);
        }
        total
    }
}

/// `hf^b ≥ hg^a`, by logarithms unless the two sides are close.
fn dominates(hf: &BigUint, hg: &BigUint, a: usize, b: usize) -> bool {
    if hg.is_zero() {
        return true;
    }
    if hf.is_zero() {
        return false;
    }
    let (l, r) = (b as f64 * crate::bounds::ln_big(hf), a as f64 * crate::bounds::ln_big(hg));
    if (l - r).abs() > 1e-9 * l.abs().max(r.abs()).max(1.0) {
        return l > r;
    }
    num_traits::pow(hf.clone(), b) >= num_traits::pow(hg.clone(), a)
}

/// Most failing targets kept in a report.
const FAILURES_KEPT: usize = 20;

/// Checks the certified inequality on every target with loops allowed on at
/// most `max_vertices` vertices. For symmetric F and G undirected targets
/// suffice (both counts only see the symmetric part of a target); otherwise
/// all digraphs are enumerated as bitmasks.
pub fn exhaustive_soundness(c: &Certificate, max_vertices: usize) -> Result<SoundnessReport> {
    let (a, b) = exponent_parts(c)?;
    if c.f.is_symmetric() && c.g.is_symmetric() {
        let ts = soundness_targets(&c.f, &c.g, max_vertices, 0, 0);
        return Ok(soundness_check(c, &ts));
    }
    if c.f.n().max(c.g.n()) > SMALL_SOURCE_CAP {
        return Err(Error::guard("directed soundness sources", c.f.n().max(c.g.n()), SMALL_SOURCE_CAP));
    }
    if max_vertices > 5 {
        return Err(Error::guard("directed soundness targets", format!("2^{}", max_vertices * max_vertices), "2^25"));
    }
    let (cf, cg) = (SmallCounter::new(&c.f), SmallCounter::new(&c.g));
    let mut report = SoundnessReport {
        targets: 0,
        failures: Vec::new(),
    };
    for s in 1..=max_vertices {
        let full = ((1u16 << s) - 1) as u8;
        let bits = s * s;
        for mask in 0..1u64 << bits {
            // bit u*s + v is the edge u -> v
            let (mut out, mut inn, mut loop_mask) = ([0u8; 8], [0u8; 8], 0u8);
            for u in 0..s {
                out[u] = (mask >> (u * s)) as u8 & full;
                loop_mask |= (out[u] >> u & 1) << u;
                for v in 0..s {
                    inn[v] |= (out[u] >> v & 1) << u;
                }
            }
            report.targets += 1;
            let hg = cg.count(&out, &inn, loop_mask, full);
            if hg == 0 {
                continue;
            }
            let hf = cf.count(&out, &inn, loop_mask, full);
            let (l, r) = (b as f64 * (hf as f64).ln(), a as f64 * (hg as f64).ln());
            let holds = if hf == 0 {
                false
            } else if (l - r).abs() > 1e-9 * l.abs().max(r.abs()).max(1.0) {
                l > r
            } else {
                dominates(&BigUint::from(hf), &BigUint::from(hg), a, b)
            };
            if !holds && report.failures.len() < FAILURES_KEPT {
                let e = (0..bits).filter(|k| mask >> k & 1 == 1).map(|k| (k / s, k % s));
                report.failures.push(Graph::new(s, e)?);
            }
        }
    }
    Ok(report)
}

fn exponent_parts(c: &Certificate) -> Result<(usize, usize)> {
    let a = c.exponent.numer().to_usize();
    let b = c.exponent.denom().to_usize();
    match (a, b) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::InvalidParameter(format!("exponent {} is not a small fraction", c.exponent))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::builtin;

    fn g(name: &str, p: &[usize]) -> Graph {
        builtin(name, p).unwrap()
    }

    #[test]
    fn builtin_p4_verifies() {
        for n in 1..=5 {
            let c = builtin_p4_certificate(n).unwrap();
            let v = verify_certificate(&c);
            assert!(v.ok, "n={n}: {:?}", v.reason);
            let nn = n as i64;
            assert_eq!(v.certified, Some(rat(4 * nn + 1, 4 * nn * nn + 3 * nn + 1)));
            assert_eq!(c.total_weight(), int(4 * nn * nn + 3 * nn + 1));
        }
    }

    #[test]
    fn tampering_is_rejected() {
        let c = builtin_p4_certificate(1).unwrap();
        let mut neg = c.clone();
        neg.weights[0].1 = int(-1);
        assert!(!verify_certificate(&neg).ok);
        let mut inflated = c.clone();
        inflated.exponent = rat(2, 3);
        let v = verify_certificate(&inflated);
        assert!(!v.ok);
        assert!(v.reason.unwrap().contains("coefficient"));
        let mut bad_row = c.clone();
        bad_row.multipliers.push((RowId::Independence { s: 0, i: 0, j: 2 }, int(1)));
        assert!(!verify_certificate(&bad_row).ok);
    }

    #[test]
    fn extracted_round_trip() {
        for (f, gg, want) in [
            (g("path", &[4]), g("path", &[6]), rat(5, 8)),
            (g("complete", &[2]), g("complete", &[3]), rat(2, 3)),
            (g("vee", &[]), g("dicycle", &[3]), int(1)),
            (g("path", &[2]), g("cycle", &[5]), rat(2, 5)),
        ] {
            let c = extract_certificate(&f, &gg).unwrap();
            let v = verify_certificate(&c);
            assert!(v.ok, "{} {}: {:?}", f.name(), gg.name(), v.reason);
            assert_eq!(v.certified, Some(want));
            let back = Certificate::from_json(&c.to_json()).unwrap();
            assert_eq!(back, c);
        }
    }

    #[test]
    fn soundness_on_small_targets() {
        let c = builtin_p4_certificate(1).unwrap();
        let ts = soundness_targets(&c.f, &c.g, 4, 0, 0);
        let r = soundness_check(&c, &ts);
        assert!(r.failures.is_empty());
        // a false claim is caught on K2 with a loop-free target
        let mut wrong = c.clone();
        wrong.exponent = int(2);
        assert!(!soundness_check(&wrong, &ts).failures.is_empty());
    }

    #[test]
    fn bitmask_soundness_matches_graph_targets() {
        let c = extract_certificate(&g("vee", &[]), &g("dicycle", &[3])).unwrap();
        let fast = exhaustive_soundness(&c, 3).unwrap();
        let slow = soundness_check(&c, &soundness_targets(&c.f, &c.g, 3, 0, 0));
        assert_eq!((fast.targets, fast.failures.len()), (slow.targets, 0));
        let mut wrong = c.clone();
        wrong.exponent = int(3);
        let fast = exhaustive_soundness(&wrong, 3).unwrap();
        let slow = soundness_check(&wrong, &soundness_targets(&c.f, &c.g, 3, 0, 0));
        assert_eq!(fast.failures.len().min(FAILURES_KEPT), slow.failures.len().min(FAILURES_KEPT));
        assert!(!fast.failures.is_empty());
    }

    proptest::proptest! {
        #[test]
        fn small_counter_agrees(fsel in 0usize..4, mask in 0u64..1 << 16) {
            let f = [g("vee", &[]), g("dicycle", &[3]), g("path", &[4]), g("book", &[1])][fsel].clone();
            let e: Vec<(usize, usize)> = (0..16).filter(|k| mask >> k & 1 == 1).map(|k| (k / 4, k % 4)).collect();
            let t = Graph::new(4, e.clone()).unwrap();
            let (mut out, mut inn, mut lm) = ([0u8; 8], [0u8; 8], 0u8);
            for (u, v) in e {
                out[u] |= 1 << v;
                inn[v] |= 1 << u;
                if u == v {
                    lm |= 1 << u;
                }
            }
            let n = SmallCounter::new(&f).count(&out, &inn, lm, 0b1111);
            proptest::prop_assert_eq!(BigUint::from(n), count_homs(&f, &t));
        }
    }
}

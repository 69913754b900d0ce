//! HDE bounds: the lower-bound program over G-polymatroids (exact for chordal
//! F and series-parallel G), the upper-bound program over Q(G), trivial
//! bounds, brute-force target search and the known closed forms for paths.

use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::graph::{EliminationOrdering, Graph, VertexSet};
use crate::hom::{count_homs, enumerate_homs, Homomorphism, ENUMERATION_CAP};
use crate::lp::{solve_lp, LinearProgram, LpStatus, Row, Sense, VarKind};
use crate::polymatroid::{
    independence_expansion, monotone_step_expansion, p_polytope_rows, RowId, SetFunction,
};
use crate::rational::{fmt_rational, int, lcm_of_denominators, rat, to_f64, JsonRational, Rational};
use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::json;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// Largest `|V_G|` for which the lower bound is solved over all of P(G)
/// when no clique-local program applies.
pub const FULL_LP_LIMIT: usize = 7;

/// Largest `|V_G|` for the upper-bound program (one variable per subset).
pub const UPPER_LP_LIMIT: usize = 10;

/// Coefficients of `Σ_S −(−1)^{|S|} p(φ(∩S))`, grouped by image set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientVector {
    pub phi: Homomorphism,
    /// Nonzero coefficients; the entry at ∅ is kept for identity checks.
    pub coeffs: BTreeMap<VertexSet, i64>,
}

impl CoefficientVector {
    pub fn get(&self, a: VertexSet) -> i64 {
        self.coeffs.get(&a).copied().unwrap_or(0)
    }

    /// Nonzero terms on nonempty sets.
    pub fn terms(&self) -> Vec<(VertexSet, i64)> {
        self.coeffs
            .iter()
            .filter(|(a, _)| !a.is_empty())
            .map(|(a, c)| (*a, *c))
            .collect()
    }

    pub fn dot(&self, p: &SetFunction) -> Rational {
        self.terms().iter().map(|(a, c)| p.get(*a) * int(*c)).sum()
    }

    pub fn dot_f64(&self, h: &[f64]) -> f64 {
        self.terms().iter().map(|(a, c)| h[a.index()] * *c as f64).sum()
    }
}

impl fmt::Display for CoefficientVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|(a, c)| format!("{c:+} {a}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn bump(map: &mut BTreeMap<VertexSet, i64>, a: VertexSet, c: i64) {
    let e = map.entry(a).or_insert(0);
    *e += c;
    if *e == 0 {
        map.remove(&a);
    }
}

fn image(phi: &[usize], vs: impl IntoIterator<Item = usize>) -> VertexSet {
    let mut s = VertexSet::EMPTY;
    for v in vs {
        s.insert(phi[v]);
    }
    s
}

/// Telescoping form: `+1` at `φ(N_j ∪ {v_j})` and `−1` at `φ(N_j)` for
/// every position `j`, where `N_j` are the earlier neighbors of `v_j`.
pub fn coeff_vector(f: &Graph, phi: &[usize], ord: &EliminationOrdering) -> Result<CoefficientVector> {
    ord.verify(f)?;
    if phi.len() != f.n() {
        return Err(Error::InvalidParameter(format!(
            "map has {} entries for {} vertices",
            phi.len(),
            f.n()
        )));
    }
    let mut coeffs = BTreeMap::new();
    for (&v, nbrs) in ord.order().iter().zip(ord.earlier_neighbors(f)) {
        let s = image(phi, nbrs);
        bump(&mut coeffs, s.with(phi[v]), 1);
        bump(&mut coeffs, s, -1);
    }
    Ok(CoefficientVector {
        phi: phi.to_vec(),
        coeffs,
    })
}

/// Alternating sum over nonempty sets of maximal cliques. Exponential in
/// the number of maximal cliques; a test oracle for [`coeff_vector`].
/// The two agree on every nonempty set (the ∅ entries differ by bookkeeping).
pub fn alternating_sum(f: &Graph, phi: &[usize]) -> CoefficientVector {
    let mc = f.max_cliques();
    let k = mc.len();
    assert!(k < 24, "too many maximal cliques for the alternating sum");
    let mut coeffs = BTreeMap::new();
    for s in 1u64..(1 << k) {
        let mut inter = f.all_vertices();
        for (i, c) in mc.iter().enumerate() {
            if s >> i & 1 == 1 {
                inter = inter.intersection(*c);
            }
        }
        let sign = if s.count_ones() % 2 == 1 { 1 } else { -1 };
        bump(&mut coeffs, image(phi, inter.iter()), sign);
    }
    CoefficientVector {
        phi: phi.to_vec(),
        coeffs,
    }
}

/// The chordal identity `p(V) = Σ_j p(N_j ∪ {v_j}) − p(N_j)` of `g` as
/// terms on nonempty sets.
pub fn chordal_identity(g: &Graph) -> Result<Vec<(VertexSet, i64)>> {
    let ord = g
        .elimination_ordering()
        .ok_or_else(|| Error::NotChordal(g.name().to_string()))?;
    let id: Vec<usize> = (0..g.n()).collect();
    Ok(coeff_vector(g, &id, &ord)?.terms())
}

/// Elemental independence rows of the chordal graph `h` whose sum is
/// `(chordal identity of h) − p(V)`: for each position `j`, the earlier
/// neighbors separate `v_j` from the rest of the prefix.
pub fn chordal_gap_rows(h: &Graph) -> Result<Vec<RowId>> {
    let ord = h
        .elimination_ordering()
        .ok_or_else(|| Error::NotChordal(h.name().to_string()))?;
    let mut prefix = VertexSet::EMPTY;
    let mut rows = Vec::new();
    for (&v, nbrs) in ord.order().iter().zip(ord.earlier_neighbors(h)) {
        let s = image(&(0..h.n()).collect::<Vec<_>>(), nbrs);
        rows.extend(independence_expansion(VertexSet::singleton(v), s, prefix.difference(s)));
        prefix.insert(v);
    }
    Ok(rows)
}

/// Homomorphisms grouped by identical coefficient vectors; the
/// representative is the lexicographically first member.
#[derive(Clone, Debug)]
pub struct PhiClass {
    pub vector: CoefficientVector,
    pub size: usize,
}

pub fn phi_classes(f: &Graph, g: &Graph) -> Result<Vec<PhiClass>> {
    let ord = f
        .elimination_ordering()
        .ok_or_else(|| Error::NotChordal(f.name().to_string()))?;
    let homs = enumerate_homs(f, g, ENUMERATION_CAP)?;
    let vectors: Vec<CoefficientVector> = homs
        .par_iter()
        .map(|phi| coeff_vector(f, phi, &ord).expect("ordering verified"))
        .collect();
    let mut seen: HashMap<Vec<(VertexSet, i64)>, usize> = HashMap::new();
    let mut classes: Vec<PhiClass> = Vec::new();
    for v in vectors {
        match seen.get(&v.terms()) {
            Some(&k) => classes[k].size += 1,
            None => {
                seen.insert(v.terms(), classes.len());
                classes.push(PhiClass { vector: v, size: 1 });
            }
        }
    }
    Ok(classes)
}

/// One inequality `terms · p ≥ 0` of a reduced program together with the
/// elemental rows of P(G) that sum to it.
#[derive(Clone, Debug)]
struct Inequality {
    terms: Vec<(VertexSet, i64)>,
    expansion: Vec<RowId>,
}

#[derive(Clone, Debug)]
enum Target {
    /// The chordal identity of this host graph.
    Chordal(Graph),
    /// `p(V)`.
    Whole,
}

/// A lower-bound program in coordinates `coords` (nonempty sets).
struct Program {
    n: usize,
    coords: Vec<VertexSet>,
    index: HashMap<VertexSet, usize>,
    ineqs: Vec<Inequality>,
    eqs: Vec<RowId>,
    target: Target,
    target_terms: Vec<(VertexSet, i64)>,
}

fn without_empty(terms: Vec<(VertexSet, i64)>) -> Vec<(VertexSet, i64)> {
    let mut m = BTreeMap::new();
    for (a, c) in terms {
        if !a.is_empty() {
            bump(&mut m, a, c);
        }
    }
    m.into_iter().collect()
}

impl Program {
    /// Polymatroid rows inside each maximal clique of the chordal `host`,
    /// normalized by the host's chordal identity.
    fn local(host: &Graph) -> Result<Program> {
        let n = host.n();
        let coords = host.cliques();
        let index = coords.iter().enumerate().map(|(k, c)| (*c, k)).collect();
        let mut seen = HashMap::new();
        let mut ineqs = Vec::new();
        let mut push = |terms: Vec<(VertexSet, i64)>, expansion: Vec<RowId>| {
            let terms = without_empty(terms);
            if !terms.is_empty() && seen.insert(terms.clone(), ()).is_none() {
                ineqs.push(Inequality { terms, expansion });
            }
        };
        for k in host.max_cliques() {
            for i in k.iter() {
                let a = k.without(i);
                push(vec![(k, 1), (a, -1)], monotone_step_expansion(n, a, i));
            }
            for i in k.iter() {
                for j in k.iter().filter(|&j| j > i) {
                    for a in k.without(i).without(j).subsets() {
                        let terms = vec![(a.with(i), 1), (a.with(j), 1), (a.with(i).with(j), -1), (a, -1)];
                        push(terms, vec![RowId::Submodular { a: a.bits(), i, j }]);
                    }
                }
            }
        }
        let target_terms = chordal_identity(host)?;
        Ok(Program {
            n,
            coords,
            index,
            ineqs,
            eqs: Vec::new(),
            target: Target::Chordal(host.clone()),
            target_terms,
        })
    }

    /// Every elemental row of P(G), normalized by `p(V)`.
    fn full(g: &Graph) -> Program {
        let n = g.n();
        let coords: Vec<VertexSet> = VertexSet::full(n).subsets().skip(1).collect();
        let index = coords.iter().enumerate().map(|(k, c)| (*c, k)).collect();
        let mut ineqs = Vec::new();
        let mut eqs = Vec::new();
        for id in p_polytope_rows(g) {
            match id {
                RowId::Monotone { .. } | RowId::Submodular { .. } => ineqs.push(Inequality {
                    terms: without_empty(id.terms(n)),
                    expansion: vec![id],
                }),
                RowId::Independence { .. } => eqs.push(id),
                RowId::Empty | RowId::Normalization => {}
            }
        }
        Program {
            n,
            coords,
            index,
            ineqs,
            eqs,
            target: Target::Whole,
            target_terms: vec![(VertexSet::full(n), 1)],
        }
    }
}

struct DualOutcome {
    value: Rational,
    weights: Vec<Rational>,
    ineq_mult: Vec<Rational>,
    eq_mult: Vec<Rational>,
    /// `p` on the program's coordinates.
    p: Vec<Rational>,
}

/// Certificate form: `max ν` s.t. `Σ w = 1` and, coordinate by coordinate,
/// `Σ w_φ c_φ − Σ μ r − Σ κ e − ν·target = 0`, `w, μ ≥ 0`. The duals of the
/// coordinate rows, negated, are an optimal `p`.
fn solve_program(prog: &Program, classes: &[PhiClass]) -> Result<DualOutcome> {
    let m = prog.coords.len();
    let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); m];
    let mut lp = LinearProgram::new();
    lp.maximize = true;
    let mut sum = Vec::new();
    let put = |rows: &mut Vec<Vec<(usize, Rational)>>, var: usize, terms: &[(VertexSet, i64)], sign: i64| -> Result<()> {
        for (a, c) in terms {
            let k = *prog.index.get(a).ok_or_else(|| {
                Error::InvalidParameter(format!("set {a} is not a coordinate of the program"))
            })?;
            rows[k].push((var, int(sign * c)));
        }
        Ok(())
    };
    for (k, cl) in classes.iter().enumerate() {
        let v = lp.add_var(format!("w{k}"), VarKind::NonNegative);
        sum.push((v, Rational::one()));
        put(&mut rows, v, &cl.vector.terms(), 1)?;
    }
    let first_ineq = lp.var_count();
    for (k, r) in prog.ineqs.iter().enumerate() {
        let v = lp.add_var(format!("mu{k}"), VarKind::NonNegative);
        put(&mut rows, v, &r.terms, -1)?;
    }
    let first_eq = lp.var_count();
    for (k, id) in prog.eqs.iter().enumerate() {
        let v = lp.add_var(format!("kappa{k}"), VarKind::Free);
        put(&mut rows, v, &without_empty(id.terms(prog.n)), -1)?;
    }
    let nu = lp.add_var("nu", VarKind::Free);
    put(&mut rows, nu, &prog.target_terms, -1)?;
    lp.objective[nu] = Rational::one();
    lp.add_row(Row::new("sum", sum, Sense::Eq, Rational::one()));
    for (k, coeffs) in rows.into_iter().enumerate() {
        lp.add_row(Row::new(format!("at{}", prog.coords[k]), coeffs, Sense::Eq, Rational::zero()));
    }
    let sol = solve_lp(&lp);
    if sol.status != LpStatus::Optimal {
        return Err(Error::LpStatus(sol.status.as_str()));
    }
    let x = &sol.primal;
    Ok(DualOutcome {
        value: sol.value.expect("optimal"),
        weights: x[..first_ineq].to_vec(),
        ineq_mult: x[first_ineq..first_eq].to_vec(),
        eq_mult: x[first_eq..nu].to_vec(),
        p: sol.duals[1..].iter().map(|y| -y).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HdeValue {
    Finite(Rational),
    /// `Hom(F,G)` is empty.
    Undefined,
}

impl fmt::Display for HdeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HdeValue::Finite(r) => write!(f, "{}", fmt_rational(r)),
            HdeValue::Undefined => write!(f, "undefined"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    Exact,
    Lower,
    Upper,
}

impl BoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::Exact => "exact",
            BoundKind::Lower => "lower",
            BoundKind::Upper => "upper",
        }
    }
}

/// Optimal point of the program behind a result.
#[derive(Clone, Debug)]
pub enum Primal {
    /// Values of `p` on the nonempty cliques of a chordal host containing G.
    Local { host: Graph, values: Vec<(VertexSet, Rational)> },
    /// `p` on all subsets.
    Full(SetFunction),
    /// `q` on all subsets.
    Q(SetFunction),
}

#[derive(Clone, Debug)]
pub struct HdeResult {
    pub value: HdeValue,
    pub kind: BoundKind,
    pub method: String,
    pub primal: Option<Primal>,
    pub certificate: Option<Certificate>,
    /// Distinct constraint rows coming from `Hom(F,G)`.
    pub classes: usize,
}

impl HdeResult {
    fn undefined(kind: BoundKind, method: &str) -> Self {
        HdeResult {
            value: HdeValue::Undefined,
            kind,
            method: method.to_string(),
            primal: None,
            certificate: None,
            classes: 0,
        }
    }

    pub fn rational(&self) -> Option<&Rational> {
        match &self.value {
            HdeValue::Finite(r) => Some(r),
            HdeValue::Undefined => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let value = match &self.value {
            HdeValue::Finite(r) => json!({
                "num": serde_json::to_value(JsonRational(r.clone())).expect("serializable")["num"],
                "den": serde_json::to_value(JsonRational(r.clone())).expect("serializable")["den"],
                "decimal": to_f64(r),
                "text": fmt_rational(r),
            }),
            HdeValue::Undefined => json!("undefined"),
        };
        let set_map = |vals: &mut dyn Iterator<Item = (VertexSet, Rational)>| -> serde_json::Value {
            vals.filter(|(_, v)| !v.is_zero())
                .map(|(a, v)| json!({ "set": a.to_string(), "value": JsonRational(v) }))
                .collect()
        };
        let primal = match &self.primal {
            Some(Primal::Local { host, values }) => json!({
                "kind": "p_on_cliques",
                "host": host.to_text(),
                "values": set_map(&mut values.iter().cloned()),
            }),
            Some(Primal::Full(p)) => json!({
                "kind": "p",
                "values": set_map(&mut VertexSet::full(p.n()).subsets().map(|a| (a, p.get(a).clone()))),
            }),
            Some(Primal::Q(q)) => json!({
                "kind": "q",
                "values": set_map(&mut VertexSet::full(q.n()).subsets().map(|a| (a, q.get(a).clone()))),
            }),
            None => serde_json::Value::Null,
        };
        json!({
            "value": value,
            "kind": self.kind.as_str(),
            "method": self.method,
            "phi_classes": self.classes,
            "primal": primal,
            "certificate": self.certificate.as_ref().map(|c| c.to_json()),
        })
    }
}

fn lower_program(g: &Graph) -> Result<(Program, &'static str)> {
    if g.is_series_parallel() {
        let host = if g.is_chordal() {
            g.simple_closure()
        } else {
            g.embed_in_2tree().expect("series-parallel")
        };
        Ok((Program::local(&host)?, "clique-local program on a chordal host of clique number <= 3"))
    } else if g.n() <= FULL_LP_LIMIT {
        Ok((Program::full(g), "full program over P(G)"))
    } else if g.is_chordal() {
        log::warn!(
            "{} has {} vertices and is not series-parallel; using the clique-local relaxation",
            g.name(),
            g.n()
        );
        Ok((Program::local(&g.simple_closure())?, "clique-local relaxation (valid lower bound)"))
    } else {
        Err(Error::guard("full lower-bound program", g.n(), FULL_LP_LIMIT))
    }
}

/// Lower bound `min_{p ∈ P(G)} max_φ c_φ·p` for chordal `f`, with the
/// optimal `p` and an extracted certificate.
pub fn hde_lower_chordal(f: &Graph, g: &Graph) -> Result<HdeResult> {
    if !f.is_chordal() {
        return Err(Error::NotChordal(f.name().to_string()));
    }
    let classes = phi_classes(f, g)?;
    if classes.is_empty() {
        return Ok(HdeResult::undefined(BoundKind::Lower, "no homomorphism"));
    }
    let (prog, method) = lower_program(g)?;
    let out = solve_program(&prog, &classes)?;
    debug_assert!(
        classes.iter().all(|c| {
            let v: Rational = c.vector.terms().iter().map(|(a, k)| &out.p[prog.index[a]] * int(*k)).sum();
            v <= out.value
        }),
        "recovered p exceeds the optimum"
    );
    let primal = match &prog.target {
        Target::Chordal(host) => Primal::Local {
            host: host.clone(),
            values: prog.coords.iter().copied().zip(out.p.iter().cloned()).collect(),
        },
        Target::Whole => {
            let mut p = SetFunction::zero(g.n());
            for (a, v) in prog.coords.iter().zip(&out.p) {
                p.set(*a, v.clone());
            }
            Primal::Full(p)
        }
    };
    let certificate = build_certificate(f, g, &prog, &classes, &out)?;
    Ok(HdeResult {
        value: HdeValue::Finite(out.value),
        kind: BoundKind::Lower,
        method: method.to_string(),
        primal: Some(primal),
        certificate: Some(certificate),
        classes: classes.len(),
    })
}

/// Turns an optimal dual point into a certificate over elemental rows of
/// P(G), normalized by the chordal identity of G (chordal G) or `p(V)`.
fn build_certificate(f: &Graph, g: &Graph, prog: &Program, classes: &[PhiClass], out: &DualOutcome) -> Result<Certificate> {
    let mut mult: BTreeMap<RowId, Rational> = BTreeMap::new();
    let mut add = |id: RowId, v: &Rational| {
        let e = mult.entry(id).or_insert_with(Rational::zero);
        *e += v;
    };
    for (r, mu) in prog.ineqs.iter().zip(&out.ineq_mult) {
        if !mu.is_zero() {
            for id in &r.expansion {
                add(*id, mu);
            }
        }
    }
    for (id, k) in prog.eqs.iter().zip(&out.eq_mult) {
        if !k.is_zero() {
            add(*id, k);
        }
    }
    // move the normalization to p(V), then to G's own identity if chordal
    if let Target::Chordal(host) = &prog.target {
        for id in chordal_gap_rows(host)? {
            add(id, &out.value);
        }
    }
    if g.is_chordal() {
        for id in chordal_gap_rows(g)? {
            add(id, &-out.value.clone());
        }
    }
    let mut weights: Vec<(Homomorphism, Rational)> = classes
        .iter()
        .zip(&out.weights)
        .filter(|(_, w)| !w.is_zero())
        .map(|(c, w)| (c.vector.phi.clone(), w.clone()))
        .collect();
    let mut multipliers: Vec<(RowId, Rational)> = mult.into_iter().filter(|(_, v)| !v.is_zero()).collect();
    let scale = Rational::from_integer(lcm_of_denominators(
        weights.iter().map(|(_, w)| w).chain(multipliers.iter().map(|(_, v)| v)),
    ));
    for (_, w) in &mut weights {
        *w *= &scale;
    }
    for (_, v) in &mut multipliers {
        *v *= &scale;
    }
    Ok(Certificate {
        f: f.clone(),
        g: g.clone(),
        exponent: out.value.clone(),
        weights,
        multipliers,
    })
}

/// The lower-bound value, certified exact: requires chordal `f` and
/// series-parallel `g`.
pub fn hde_exact(f: &Graph, g: &Graph) -> Result<HdeResult> {
    if !f.is_chordal() {
        return Err(Error::NotChordal(f.name().to_string()));
    }
    if !g.is_series_parallel() {
        return Err(Error::NotSeriesParallel(g.name().to_string()));
    }
    let mut r = hde_lower_chordal(f, g)?;
    r.kind = BoundKind::Exact;
    Ok(r)
}

/// Upper bound `min_{q ∈ Q(G)} max_φ Σ_A q(A)·CC(F|φ⁻¹(A))`.
pub fn hde_upper(f: &Graph, g: &Graph) -> Result<HdeResult> {
    let n = g.n();
    if n > UPPER_LP_LIMIT {
        return Err(Error::guard("upper-bound program", format!("2^{n} variables"), format!("2^{UPPER_LP_LIMIT}")));
    }
    let homs = enumerate_homs(f, g, ENUMERATION_CAP)?;
    if homs.is_empty() {
        return Ok(HdeResult::undefined(BoundKind::Upper, "no homomorphism"));
    }
    let sets: Vec<VertexSet> = VertexSet::full(n).subsets().skip(1).collect();
    let f_adj = f.adjacency_masks();
    let vectors: Vec<Vec<i64>> = homs
        .par_iter()
        .map(|phi| {
            sets.iter()
                .map(|a| {
                    let pre = VertexSet::from_bits((0..f.n()).filter(|&v| a.contains(phi[v])).fold(0, |b, v| b | 1 << v));
                    crate::graph::component_sets(&f_adj, pre).len() as i64
                })
                .collect()
        })
        .collect();
    let mut seen = HashMap::new();
    let mut distinct = Vec::new();
    for v in vectors {
        if seen.insert(v.clone(), ()).is_none() {
            distinct.push(v);
        }
    }
    let mut lp = LinearProgram::new();
    for a in &sets {
        lp.add_var(format!("q{a}"), VarKind::NonNegative);
    }
    let t = lp.add_var("t", VarKind::Free);
    lp.objective[t] = Rational::one();
    for (k, v) in distinct.iter().enumerate() {
        let mut coeffs = vec![(t, Rational::one())];
        coeffs.extend(v.iter().enumerate().filter(|(_, c)| **c != 0).map(|(j, c)| (j, int(-c))));
        lp.add_row(Row::new(format!("phi{k}"), coeffs, Sense::Ge, Rational::zero()));
    }
    let g_adj = g.adjacency_masks();
    let norm = sets
        .iter()
        .enumerate()
        .map(|(j, a)| (j, int(crate::graph::component_sets(&g_adj, *a).len() as i64)))
        .collect();
    lp.add_row(Row::new("norm", norm, Sense::Eq, Rational::one()));
    let sol = solve_lp(&lp);
    if sol.status != LpStatus::Optimal {
        return Err(Error::LpStatus(sol.status.as_str()));
    }
    let mut q = SetFunction::zero(n);
    for (j, a) in sets.iter().enumerate() {
        q.set(*a, sol.primal[j].clone());
    }
    Ok(HdeResult {
        value: HdeValue::Finite(sol.value.expect("optimal")),
        kind: BoundKind::Upper,
        method: "program over Q(G)".to_string(),
        primal: Some(Primal::Q(q)),
        certificate: None,
        classes: distinct.len(),
    })
}

/// `(|V_F|/|V_G|, CC(F)/CC(G), α(F)/α(G))`.
pub fn trivial_upper_bounds(f: &Graph, g: &Graph) -> Result<[Rational; 3]> {
    if g.n() == 0 {
        return Err(Error::InvalidParameter("G has no vertices".into()));
    }
    let r = |a: usize, b: usize| rat(a as i64, b as i64);
    Ok([
        r(f.n(), g.n()),
        r(f.component_count(), g.component_count()),
        r(f.independence_number()?, g.independence_number()?),
    ])
}

/// `ρ(G)`: minimum total edge weight covering every vertex.
pub fn fractional_edge_cover(g: &Graph) -> Result<Rational> {
    let s = g.simple_closure();
    let edges: Vec<(usize, usize)> = s.edges().filter(|(u, v)| u < v).collect();
    if let Some(v) = (0..s.n()).find(|&v| s.out_neighbors(v).is_empty()) {
        return Err(Error::Infeasible(format!("vertex {v} is isolated, no finite cover")));
    }
    let mut lp = LinearProgram::new();
    for (u, v) in &edges {
        let x = lp.add_var(format!("x{u}_{v}"), VarKind::NonNegative);
        lp.objective[x] = Rational::one();
    }
    for v in 0..s.n() {
        let coeffs = edges
            .iter()
            .enumerate()
            .filter(|(_, (a, b))| *a == v || *b == v)
            .map(|(k, _)| (k, Rational::one()))
            .collect();
        lp.add_row(Row::new(format!("cover{v}"), coeffs, Sense::Ge, Rational::one()));
    }
    let sol = solve_lp(&lp);
    sol.value.ok_or(Error::LpStatus(sol.status.as_str()))
}

/// Known closed forms for `HDE(P_m, P_n)`; `None` for even `m ≥ 6`, `m < n`,
/// and for `n = 1 < m` where no homomorphism exists.
pub fn closed_form_paths(m: usize, n: usize) -> Option<Rational> {
    if m == 0 || n == 0 || (n == 1 && m > 1) {
        return None;
    }
    if m >= n {
        return Some(Rational::one());
    }
    if m % 2 == 1 {
        return Some(rat(m as i64, n as i64));
    }
    match m {
        2 => Some(rat(1, n.div_ceil(2) as i64)),
        4 => {
            let (k, i) = ((n / 4) as i64, n % 4);
            Some(match i {
                0 => rat(1, k),
                1 => rat(2, 2 * k + 1),
                2 => rat(4 * k + 1, 4 * k * k + 3 * k + 1),
                _ => rat(1, k + 1),
            })
        }
        _ => None,
    }
}

/// Best target found by exhaustive search.
#[derive(Clone, Debug)]
pub struct TargetBound {
    pub value: f64,
    pub hom_f: BigUint,
    pub hom_g: BigUint,
    pub witness: Graph,
}

/// Largest number of targets [`brute_force_upper`] will examine.
pub const TARGET_SEARCH_CAP: u64 = 1 << 22;

/// `min log hom(F,T) / log hom(G,T)` over loopless targets on at most
/// `max_size` vertices with `hom(G,T) ≥ 2`. Targets are undirected when both
/// F and G are symmetric, directed otherwise.
pub fn brute_force_upper(f: &Graph, g: &Graph, max_size: usize) -> Result<TargetBound> {
    let directed = !(f.is_symmetric() && g.is_symmetric());
    let pairs_for = |s: usize| -> Vec<(usize, usize)> {
        (0..s)
            .flat_map(|u| (0..s).map(move |v| (u, v)))
            .filter(|&(u, v)| if directed { u != v } else { u < v })
            .collect()
    };
    let total: u64 = (1..=max_size).map(|s| 1u64.checked_shl(pairs_for(s).len() as u32).unwrap_or(u64::MAX)).fold(0, u64::saturating_add);
    if total > TARGET_SEARCH_CAP {
        return Err(Error::guard("target search", total, TARGET_SEARCH_CAP));
    }
    let mut best: Option<(f64, usize, u64, BigUint, BigUint)> = None;
    for s in 1..=max_size {
        let pairs = pairs_for(s);
        let build = |mask: u64| -> Graph {
            let e = pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, p)| *p);
            if directed {
                Graph::new(s, e).expect("in range")
            } else {
                Graph::undirected(s, e).expect("in range")
            }
        };
        let found = (0..1u64 << pairs.len())
            .into_par_iter()
            .filter_map(|mask| {
                let t = build(mask);
                let hg = count_homs(g, &t);
                if hg < BigUint::from(2u32) {
                    return None;
                }
                let hf = count_homs(f, &t);
                let ratio = ln_big(&hf) / ln_big(&hg);
                Some((ratio, s, mask, hf, hg))
            })
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.2.cmp(&b.2)));
        if let Some(c) = found {
            if best.as_ref().is_none_or(|b| c.0 < b.0) {
                best = Some(c);
            }
        }
    }
    let (value, s, mask, hom_f, hom_g) =
        best.ok_or_else(|| Error::NoTarget(format!("no target on <= {max_size} vertices has hom(G,T) >= 2")))?;
    let pairs = pairs_for(s);
    let e = pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, p)| *p);
    let witness = if directed { Graph::new(s, e)? } else { Graph::undirected(s, e)? };
    Ok(TargetBound {
        value,
        hom_f,
        hom_g,
        witness: witness.named("T"),
    })
}

/// Natural log of a big integer (`-inf` at 0).
pub fn ln_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    top.to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
}

/// Whether the images of `Hom(F,G)` cover every vertex of G.
pub fn homomorphisms_cover(f: &Graph, g: &Graph) -> Result<bool> {
    let mut covered = VertexSet::EMPTY;
    for phi in enumerate_homs(f, g, ENUMERATION_CAP)? {
        for &v in &phi {
            covered.insert(v);
        }
    }
    Ok(covered == VertexSet::full(g.n()))
}

/// `true` iff `x` is nonnegative; used by callers that compare bounds.
pub fn is_nonnegative(x: &Rational) -> bool {
    !x.is_negative()
}

//! Set functions, the polytopes P(G) and Q(G), and the transform L.
//!
//! Subsets are indexed by bitmask: bit `i` set means vertex `i` is present.
//! G-independence is read through graph separation: `p(A) + p(B) =
//! p(A∪B) + p(A∩B)` whenever every path from `A∖B` to `B∖A` meets `A∩B`.
//! Its elemental rows are `i`, `j` with a set `S` separating them; the chain
//! rule rebuilds every other pair from those.

use crate::error::{Error, Result};
use crate::graph::{separates_in, Graph, VertexSet};
use crate::lp::{solve_lp, LinearProgram, LpStatus, Row, Sense, VarKind};
use crate::rational::{fmt_rational, int, rat, to_f64, Rational};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Default cap on `|V|` for powerset-indexed builders.
pub const VERTEX_CAP: usize = 14;

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::guard("powerset size", format!("2^{n}"), format!("2^{cap}")))
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFunction {
    n: usize,
    values: Vec<Rational>,
}

impl SetFunction {
    pub fn zero(n: usize) -> Self {
        SetFunction {
            n,
            values: vec![Rational::zero(); 1 << n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(VertexSet) -> Rational) -> Self {
        SetFunction {
            n,
            values: VertexSet::full(n).subsets().map(&mut f).collect(),
        }
    }

    pub fn from_values(n: usize, values: Vec<Rational>) -> Result<Self> {
        if values.len() != 1 << n {
            return Err(Error::InvalidParameter(format!(
                "set function on {n} vertices needs {} values, got {}",
                1usize << n,
                values.len()
            )));
        }
        Ok(SetFunction { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: VertexSet) -> &Rational {
        &self.values[a.index()]
    }

    pub fn set(&mut self, a: VertexSet, v: Rational) {
        self.values[a.index()] = v;
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn scale(&self, c: &Rational) -> SetFunction {
        SetFunction {
            n: self.n,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, o: &SetFunction) -> SetFunction {
        assert_eq!(self.n, o.n);
        SetFunction {
            n: self.n,
            values: self.values.iter().zip(&o.values).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(to_f64).collect()
    }
}

impl fmt::Display for SetFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = VertexSet::full(self.n)
            .subsets()
            .map(|a| format!("{a}: {}", fmt_rational(self.get(a))))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Canonical identifier of an elemental row of P(G).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "row_kind", rename_all = "snake_case")]
pub enum RowId {
    /// `p(∅) = 0`
    Empty,
    /// `p(V) = 1`
    Normalization,
    /// `p(V) − p(V∖{i}) ≥ 0`
    Monotone { i: usize },
    /// `p(A+i) + p(A+j) − p(A+i+j) − p(A) ≥ 0`
    Submodular { a: u64, i: usize, j: usize },
    /// Same shape as submodularity, as an equality, when `s` separates `i` and `j`.
    Independence { s: u64, i: usize, j: usize },
}

impl RowId {
    pub fn is_equality(&self) -> bool {
        matches!(self, RowId::Empty | RowId::Normalization | RowId::Independence { .. })
    }

    /// Left-hand side as integer coefficients on sets.
    pub fn terms(&self, n: usize) -> Vec<(VertexSet, i64)> {
        let v = VertexSet::full(n);
        match *self {
            RowId::Empty => vec![(VertexSet::EMPTY, 1)],
            RowId::Normalization => vec![(v, 1)],
            RowId::Monotone { i } => vec![(v, 1), (v.without(i), -1)],
            RowId::Submodular { a, i, j } | RowId::Independence { s: a, i, j } => {
                let a = VertexSet::from_bits(a);
                vec![(a.with(i), 1), (a.with(j), 1), (a.with(i).with(j), -1), (a, -1)]
            }
        }
    }

    pub fn rhs(&self) -> Rational {
        match self {
            RowId::Normalization => Rational::one(),
            _ => Rational::zero(),
        }
    }

    /// Whether this names a row of `build_P_polytope(g)`.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let n = g.n();
        let v = VertexSet::full(n);
        match *self {
            RowId::Empty | RowId::Normalization => true,
            RowId::Monotone { i } => i < n,
            RowId::Submodular { a, i, j } | RowId::Independence { s: a, i, j } => {
                let a = VertexSet::from_bits(a);
                let shape = i < j && j < n && a.is_subset(v) && !a.contains(i) && !a.contains(j);
                match self {
                    RowId::Independence { .. } => {
                        shape && g.separates(a, VertexSet::singleton(i), VertexSet::singleton(j))
                    }
                    _ => shape,
                }
            }
        }
    }

    /// The sets named by the row, in the order of its terms.
    pub fn sets(&self, n: usize) -> Vec<VertexSet> {
        self.terms(n).into_iter().map(|(a, _)| a).collect()
    }
}

impl fmt::Display for RowId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RowId::Empty => write!(f, "empty"),
            RowId::Normalization => write!(f, "norm"),
            RowId::Monotone { i } => write!(f, "mono[{i}]"),
            RowId::Submodular { a, i, j } => write!(f, "submod[{},{i},{j}]", VertexSet::from_bits(a)),
            RowId::Independence { s, i, j } => write!(f, "indep[{},{i},{j}]", VertexSet::from_bits(s)),
        }
    }
}

/// Every elemental row of P(G), in canonical order: empty, monotone,
/// submodular (by `i < j`, then `A`), independence, normalization.
pub fn p_polytope_rows(g: &Graph) -> Vec<RowId> {
    let n = g.n();
    let adj = g.adjacency_masks();
    let v = VertexSet::full(n);
    let mut rows = vec![RowId::Empty];
    rows.extend((0..n).map(|i| RowId::Monotone { i }));
    for i in 0..n {
        for j in i + 1..n {
            for a in v.without(i).without(j).subsets() {
                rows.push(RowId::Submodular { a: a.bits(), i, j });
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if adj[i].contains(j) {
                continue;
            }
            for a in v.without(i).without(j).subsets() {
                if separates_in(&adj, a, VertexSet::singleton(i), VertexSet::singleton(j)) {
                    rows.push(RowId::Independence { s: a.bits(), i, j });
                }
            }
        }
    }
    rows.push(RowId::Normalization);
    rows
}

/// Elemental independence rows summing to the pair equality for
/// `A = S ∪ X`, `B = S ∪ Y` (`X`, `Y`, `S` disjoint): the row for
/// `(x_k, y_l)` conditions on `S`, the earlier `x`'s and the earlier `y`'s.
pub fn independence_expansion(x: VertexSet, s: VertexSet, y: VertexSet) -> Vec<RowId> {
    let mut out = Vec::new();
    let mut xs = VertexSet::EMPTY;
    for xi in x.iter() {
        let mut ys = VertexSet::EMPTY;
        for yj in y.iter() {
            let cond = s.union(xs).union(ys);
            let (i, j) = if xi < yj { (xi, yj) } else { (yj, xi) };
            out.push(RowId::Independence { s: cond.bits(), i, j });
            ys.insert(yj);
        }
        xs.insert(xi);
    }
    out
}

/// Elemental rows summing to `p(A+i) − p(A)`: one submodularity row per
/// vertex outside `A+i` (added in increasing order), then `mono[i]`.
pub fn monotone_step_expansion(n: usize, a: VertexSet, i: usize) -> Vec<RowId> {
    let mut out = Vec::new();
    let mut x = a;
    for j in VertexSet::full(n).difference(a.with(i)).iter() {
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        out.push(RowId::Submodular { a: x.bits(), i: lo, j: hi });
        x.insert(j);
    }
    out.push(RowId::Monotone { i });
    out
}

/// Constraint system of P(G) over variables `p(A)` indexed by bitmask.
pub struct PolytopeFragment {
    pub lp: LinearProgram,
    pub row_ids: Vec<RowId>,
}

#[allow(non_snake_case)]
pub fn build_P_polytope(g: &Graph) -> Result<PolytopeFragment> {
    check_cap(g.n(), VERTEX_CAP)?;
    let n = g.n();
    let mut lp = LinearProgram::new();
    for a in VertexSet::full(n).subsets() {
        lp.add_var(format!("p{a}"), VarKind::Free);
    }
    let row_ids = p_polytope_rows(g);
    for id in &row_ids {
        let coeffs = id.terms(n).into_iter().map(|(a, c)| (a.index(), int(c))).collect();
        let sense = if id.is_equality() { Sense::Eq } else { Sense::Ge };
        lp.add_row(Row::new(id.to_string(), coeffs, sense, id.rhs()));
    }
    Ok(PolytopeFragment { lp, row_ids })
}

/// Constraint system of Q(G) over variables `q(A)` indexed by bitmask.
#[allow(non_snake_case)]
pub fn build_Q_polytope(g: &Graph) -> Result<LinearProgram> {
    check_cap(g.n(), VERTEX_CAP)?;
    let n = g.n();
    let mut lp = LinearProgram::new();
    for a in VertexSet::full(n).subsets() {
        lp.add_var(format!("q{a}"), VarKind::NonNegative);
    }
    lp.add_row(Row::new("empty", vec![(0, int(1))], Sense::Eq, int(0)));
    let norm = VertexSet::full(n)
        .subsets()
        .skip(1)
        .map(|a| (a.index(), int(g.connected_component_count(a) as i64)))
        .collect();
    lp.add_row(Row::new("norm", norm, Sense::Eq, int(1)));
    Ok(lp)
}

/// `(Lf)(A) = −Σ_{C ⊆ A} (−1)^{|C|} f((V∖A) ∪ C)`.
#[allow(non_snake_case)]
pub fn transform_L(f: &SetFunction) -> SetFunction {
    let v = VertexSet::full(f.n);
    SetFunction::from_fn(f.n, |a| {
        let rest = v.difference(a);
        let s: Rational = a
            .subsets()
            .map(|c| {
                let x = f.get(rest.union(c));
                if c.len() % 2 == 0 {
                    x.clone()
                } else {
                    -x.clone()
                }
            })
            .sum();
        -s
    })
}

/// Inverse of [`transform_L`] by back-substitution: the coefficient of
/// `f(V∖A)` in `(Lf)(A)` is −1 and every other term is a strict superset.
#[allow(non_snake_case)]
pub fn transform_L_inverse(lf: &SetFunction) -> SetFunction {
    let n = lf.n;
    let v = VertexSet::full(n);
    let mut f = SetFunction::zero(n);
    let mut order: Vec<VertexSet> = v.subsets().collect();
    order.sort_by_key(|d| std::cmp::Reverse(d.len()));
    for d in order {
        let a = v.difference(d);
        let mut acc = -lf.get(a).clone();
        for c in a.subsets().skip(1) {
            let x = f.get(d.union(c));
            if c.len() % 2 == 0 {
                acc -= x;
            } else {
                acc += x;
            }
        }
        f.set(d, acc);
    }
    f
}

/// `A ↦ Σ_B q(B)·#{components K of G|B meeting A}`: a normalized
/// G-polymatroid for every `q` in Q(G), whose lower-bound objective equals
/// the upper-bound objective of `q`. Equals `L⁻¹` of the lifted `q` when `q`
/// only charges connected sets.
pub fn q_to_polymatroid(q: &SetFunction, g: &Graph) -> SetFunction {
    let v = VertexSet::full(q.n);
    let mut pieces: Vec<(VertexSet, &Rational)> = Vec::new();
    for b in v.subsets().skip(1) {
        let x = q.get(b);
        if !x.is_zero() {
            pieces.extend(g.components_of(b).into_iter().map(|k| (k, x)));
        }
    }
    SetFunction::from_fn(q.n, |a| {
        pieces
            .iter()
            .filter(|(k, _)| !k.intersection(a).is_empty())
            .map(|(_, x)| (*x).clone())
            .sum()
    })
}

/// Moves the mass of every set onto its connected components, and puts
/// `−Σ_B q(B)·CC(G|B)` at ∅. `L(q_to_polymatroid(q)) = split_components(q)`.
pub fn split_components(q: &SetFunction, g: &Graph) -> SetFunction {
    let mut out = SetFunction::zero(q.n);
    let mut empty = Rational::zero();
    for b in VertexSet::full(q.n).subsets().skip(1) {
        let x = q.get(b);
        if x.is_zero() {
            continue;
        }
        for c in g.components_of(b) {
            let cur = out.get(c) + x;
            out.set(c, cur);
            empty -= x;
        }
    }
    out.set(VertexSet::EMPTY, empty);
    out
}

/// `q` with `q(∅) = −1`, the only value at ∅ for which `L⁻¹q` can be normalized.
pub fn lift_q(q: &SetFunction) -> SetFunction {
    let mut l = q.clone();
    l.set(VertexSet::EMPTY, -Rational::one());
    l
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    EmptySet,
    Monotone,
    Submodular,
    Independence,
    Normalization,
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub sets: Vec<String>,
    pub amount: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ViolationKind::EmptySet => "nonzero at ∅",
            ViolationKind::Monotone => "monotonicity",
            ViolationKind::Submodular => "submodularity",
            ViolationKind::Independence => "independence",
            ViolationKind::Normalization => "normalization",
        };
        write!(f, "{what} fails on {} by {:.3e}", self.sets.join(" "), self.amount)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PolymatroidReport {
    pub ok: bool,
    /// The largest violation of each kind found.
    pub violations: Vec<Violation>,
}

/// Checks the defining conditions through their elemental forms.
/// `excess(terms, rhs, eq)` is the amount by which `Σ terms ≥ rhs` (or `= rhs`
/// when `eq`) fails, 0 if it holds.
fn check_conditions(
    n: usize,
    g: &Graph,
    normalized: bool,
    mut excess: impl FnMut(&[(VertexSet, i64)], i64, bool) -> f64,
) -> PolymatroidReport {
    let adj = g.adjacency_masks();
    let v = VertexSet::full(n);
    let mut worst: Vec<Violation> = Vec::new();
    let mut note = |kind: ViolationKind, sets: &[VertexSet], amount: f64| {
        if amount <= 0.0 {
            return;
        }
        let sets = sets.iter().map(|x| x.to_string()).collect();
        match worst.iter_mut().find(|w| w.kind == kind) {
            Some(w) if w.amount >= amount => {}
            Some(w) => *w = Violation { kind, sets, amount },
            None => worst.push(Violation { kind, sets, amount }),
        }
    };
    note(
        ViolationKind::EmptySet,
        &[VertexSet::EMPTY],
        excess(&[(VertexSet::EMPTY, 1)], 0, true),
    );
    if normalized {
        note(ViolationKind::Normalization, &[v], excess(&[(v, 1)], 1, true));
    }
    for a in v.subsets() {
        for i in v.difference(a).iter() {
            note(ViolationKind::Monotone, &[a, a.with(i)], excess(&[(a.with(i), 1), (a, -1)], 0, false));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for a in v.without(i).without(j).subsets() {
                let t = [(a.with(i), 1), (a.with(j), 1), (a.with(i).with(j), -1), (a, -1)];
                let sets = [a.with(i), a.with(j)];
                note(ViolationKind::Submodular, &sets, excess(&t, 0, false));
                if separates_in(&adj, a, VertexSet::singleton(i), VertexSet::singleton(j)) {
                    note(ViolationKind::Independence, &sets, excess(&t, 0, true));
                }
            }
        }
    }
    PolymatroidReport {
        ok: worst.is_empty(),
        violations: worst,
    }
}

/// Exact check of the G-polymatroid conditions (and `p(V) = 1` if asked).
pub fn is_polymatroidal(f: &SetFunction, g: &Graph, normalized: bool) -> PolymatroidReport {
    check_conditions(f.n, g, normalized, |terms, rhs, eq| {
        let val: Rational = terms.iter().map(|(a, c)| f.get(*a) * int(*c)).sum::<Rational>() - int(rhs);
        if eq {
            to_f64(&val.abs()).max(if val.is_zero() { 0.0 } else { f64::MIN_POSITIVE })
        } else if val.is_negative() {
            to_f64(&-val).max(f64::MIN_POSITIVE)
        } else {
            0.0
        }
    })
}

/// Tolerance-based check for floating set functions such as entropy profiles.
pub fn is_polymatroidal_f64(f: &[f64], n: usize, g: &Graph, normalized: bool, tol: f64) -> PolymatroidReport {
    assert_eq!(f.len(), 1 << n);
    check_conditions(n, g, normalized, |terms, rhs, eq| {
        let val: f64 = terms.iter().map(|(a, c)| f[a.index()] * *c as f64).sum::<f64>() - rhs as f64;
        let bad = if eq { val.abs() } else { -val };
        if bad > tol {
            bad
        } else {
            0.0
        }
    })
}

/// Labels of the eight generators of P(K3), in table order.
pub const K3_LABELS: [&str; 8] = ["a", "b", "c", "ab", "ac", "bc", "abc", "RS"];

/// The eight generators of P(K3) on vertices a=0, b=1, c=2.
pub fn k3_generators() -> Vec<SetFunction> {
    K3_LABELS
        .iter()
        .map(|label| {
            SetFunction::from_fn(3, |a| {
                if a.is_empty() {
                    return Rational::zero();
                }
                if *label == "RS" {
                    return if a.len() == 1 { rat(1, 2) } else { Rational::one() };
                }
                // f_X(A) = 1 iff A meets X
                let x = VertexSet::from_vertices(3, label.bytes().map(|b| (b - b'a') as usize)).expect("in range");
                if a.intersection(x).is_empty() {
                    Rational::zero()
                } else {
                    Rational::one()
                }
            })
        })
        .collect()
}

/// Nonnegative coefficients `λ` with `Σ λ_i f_i = p`, minimizing `λ_RS`.
#[allow(non_snake_case)]
pub fn decompose_K3_polymatroid(p: &SetFunction) -> Result<Vec<(&'static str, Rational)>> {
    if p.n() != 3 {
        return Err(Error::InvalidParameter(format!("expected 3 vertices, got {}", p.n())));
    }
    let gens = k3_generators();
    let mut lp = LinearProgram::new();
    for l in K3_LABELS {
        lp.add_var(format!("l_{l}"), VarKind::NonNegative);
    }
    lp.objective[7] = Rational::one();
    for a in VertexSet::full(3).subsets().skip(1) {
        let coeffs = gens.iter().enumerate().map(|(k, f)| (k, f.get(a).clone())).collect();
        lp.add_row(Row::new(format!("at{a}"), coeffs, Sense::Eq, p.get(a).clone()));
    }
    let sol = solve_lp(&lp);
    if sol.status != LpStatus::Optimal || !p.get(VertexSet::EMPTY).is_zero() {
        return Err(Error::Infeasible(format!("{p} is not K3-polymatroidal")));
    }
    Ok(K3_LABELS.iter().copied().zip(sol.primal).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::builtin;
    use crate::lp::enumerate_vertices;
    use proptest::prelude::*;

    fn sf(n: usize, vals: &[(u64, Rational)]) -> SetFunction {
        let mut f = SetFunction::zero(n);
        for (b, v) in vals {
            f.set(VertexSet::from_bits(*b), v.clone());
        }
        f
    }

    #[test]
    fn k2_polytope_by_hand() {
        let k2 = builtin("complete", &[2]).unwrap();
        let frag = build_P_polytope(&k2).unwrap();
        let feasible = |a: Rational, b: Rational| {
            let x = vec![int(0), a, b, int(1)];
            frag.lp.is_feasible(&x)
        };
        assert!(feasible(rat(1, 2), rat(1, 2)));
        assert!(feasible(int(1), int(0)));
        assert!(feasible(int(1), int(1)));
        assert!(!feasible(rat(1, 3), rat(1, 3)));
        assert!(!feasible(rat(3, 2), rat(1, 2)));
        assert!(!feasible(rat(-1, 2), int(1)));
    }

    #[test]
    fn edgeless_forces_additivity() {
        let g = Graph::edgeless(2);
        let frag = build_P_polytope(&g).unwrap();
        assert!(frag.lp.is_feasible(&[int(0), rat(1, 3), rat(2, 3), int(1)]));
        assert!(!frag.lp.is_feasible(&[int(0), rat(2, 3), rat(2, 3), int(1)]));
    }

    #[test]
    fn k3_generators_are_feasible() {
        let k3 = builtin("complete", &[3]).unwrap();
        let frag = build_P_polytope(&k3).unwrap();
        for f in k3_generators() {
            assert!(frag.lp.is_feasible(f.values()), "{f}");
            assert!(is_polymatroidal(&f, &k3, true).ok);
        }
        assert_eq!(k3_generators()[7].get(VertexSet::singleton(0)), &rat(1, 2));
    }

    #[test]
    fn k3_vertices_are_the_generators() {
        let k3 = builtin("complete", &[3]).unwrap();
        let frag = build_P_polytope(&k3).unwrap();
        let mut verts = enumerate_vertices(&frag.lp);
        let mut gens: Vec<Vec<Rational>> = k3_generators().into_iter().map(|f| f.values().to_vec()).collect();
        verts.sort();
        gens.sort();
        assert_eq!(verts, gens);
    }

    #[test]
    fn q_polytope_examples() {
        let k2 = builtin("complete", &[2]).unwrap();
        let q = build_Q_polytope(&k2).unwrap();
        assert!(q.is_feasible(&[int(0), int(0), int(0), int(1)]));
        assert!(q.is_feasible(&[int(0), rat(1, 2), rat(1, 2), int(0)]));
        let p3 = builtin("path", &[3]).unwrap();
        let q = build_Q_polytope(&p3).unwrap();
        let mut x = vec![int(0); 8];
        x[0b101] = rat(1, 2);
        assert!(q.is_feasible(&x));
    }

    #[test]
    fn polymatroid_report() {
        let k3 = builtin("complete", &[3]).unwrap();
        let mut f = k3_generators()[7].clone();
        f.set(VertexSet::EMPTY, int(1));
        let r = is_polymatroidal(&f, &k3, true);
        assert!(!r.ok);
        assert!(r.violations.iter().any(|v| v.kind == ViolationKind::EmptySet));
        assert!(r.violations[0].to_string().contains("∅"));
    }

    #[test]
    fn decomposition_examples() {
        let gens = k3_generators();
        let lam = |p: &SetFunction| -> Vec<Rational> {
            decompose_K3_polymatroid(p).unwrap().into_iter().map(|(_, v)| v).collect()
        };
        let mut e = vec![int(0); 8];
        e[7] = int(1);
        assert_eq!(lam(&gens[7]), e);
        let mut e = vec![int(0); 8];
        e[6] = int(1);
        assert_eq!(lam(&gens[6]), e);
        let half = gens[0].add(&gens[5]).scale(&rat(1, 2));
        let mut e = vec![int(0); 8];
        e[0] = rat(1, 2);
        e[5] = rat(1, 2);
        assert_eq!(lam(&half), e);
        // kernel: f_ab + f_ac + f_bc = f_abc + 2 f_RS
        let lhs = gens[3].add(&gens[4]).add(&gens[5]);
        assert_eq!(lhs, gens[6].add(&gens[7].scale(&int(2))));
        let bad = sf(3, &[(0b001, int(1)), (0b011, int(1)), (0b101, int(1)), (0b111, int(3))]);
        assert!(decompose_K3_polymatroid(&bad).is_err());
    }

    #[test]
    fn l_transform_small_cases() {
        let f = sf(1, &[(0, int(2)), (1, int(5))]);
        let lf = transform_L(&f);
        assert_eq!(lf.get(VertexSet::EMPTY), &int(-5));
        assert_eq!(lf.get(VertexSet::singleton(0)), &int(3));
        assert_eq!(transform_L(&SetFunction::zero(3)), SetFunction::zero(3));
        let k2 = builtin("complete", &[2]).unwrap();
        let mut q = sf(2, &[(0b11, int(1))]);
        q.set(VertexSet::EMPTY, int(-1));
        assert!(is_polymatroidal(&transform_L_inverse(&q), &k2, true).ok);
    }

    #[test]
    fn lifted_inverse_fails_on_disconnected_mass() {
        // q({a,b}) = 1/2 on two isolated vertices lies in Q(G)
        let g = Graph::edgeless(2);
        let q = sf(2, &[(0b11, rat(1, 2))]);
        assert!(build_Q_polytope(&g).unwrap().is_feasible(q.values()));
        let p = transform_L_inverse(&lift_q(&q));
        let rep = is_polymatroidal(&p, &g, true);
        assert!(rep.violations.iter().any(|v| v.kind == ViolationKind::Independence));
        assert!(is_polymatroidal(&q_to_polymatroid(&q, &g), &g, true).ok);
    }

    #[test]
    fn coverage_functions() {
        // L(ρ_B) = e_B − e_∅ with ρ_B(A) = [A ∩ B ≠ ∅]
        for bits in 1..16u64 {
            let b = VertexSet::from_bits(bits);
            let rho = SetFunction::from_fn(4, |a| if a.intersection(b).is_empty() { int(0) } else { int(1) });
            let mut e = SetFunction::zero(4);
            e.set(b, int(1));
            e.set(VertexSet::EMPTY, int(-1));
            assert_eq!(transform_L(&rho), e);
        }
        // the constant −1 maps to e_∅
        let minus = SetFunction::from_fn(2, |_| int(-1));
        assert_eq!(transform_L(&minus), sf(2, &[(0, int(1))]));
    }

    #[test]
    fn intersection_component_count_is_not_monotone() {
        // A ↦ Σ_B q(B)·CC(G|A∩B) with q = e_V on P3: 2 at {0,2}, 1 at V
        let p3 = builtin("path", &[3]).unwrap();
        let f = SetFunction::from_fn(3, |a| int(p3.connected_component_count(a) as i64));
        let rep = is_polymatroidal(&f, &p3, true);
        assert!(rep.violations.iter().any(|v| v.kind == ViolationKind::Monotone));
        let q = sf(3, &[(0b111, int(1))]);
        let m = q_to_polymatroid(&q, &p3);
        assert!(is_polymatroidal(&m, &p3, true).ok);
        assert_eq!(m, transform_L_inverse(&lift_q(&q)));
    }

    #[test]
    fn separation_reading_on_paths() {
        // one shared variable along P3: X0 and X2 dependent, independent given X1
        let p3 = builtin("path", &[3]).unwrap();
        let rho = SetFunction::from_fn(3, |a| if a.is_empty() { int(0) } else { int(1) });
        assert!(is_polymatroidal(&rho, &p3, true).ok);
        assert!(build_P_polytope(&p3).unwrap().lp.is_feasible(rho.values()));
        assert!(!is_polymatroidal(&rho, &Graph::edgeless(3), true).ok);
        let rows = p_polytope_rows(&p3);
        assert!(rows.contains(&RowId::Independence { s: 0b010, i: 0, j: 2 }));
        assert!(!rows.contains(&RowId::Independence { s: 0, i: 0, j: 2 }));
        assert!(!RowId::Independence { s: 0, i: 0, j: 2 }.is_valid_for(&p3));
    }

    #[test]
    fn expansions_telescope() {
        let n = 5;
        let sum = |rows: &[RowId]| -> SetFunction {
            let mut f = SetFunction::zero(n);
            for r in rows {
                for (a, c) in r.terms(n) {
                    let cur = f.get(a) + int(c);
                    f.set(a, cur);
                }
            }
            f
        };
        let a = VertexSet::from_bits(0b00101);
        let got = sum(&monotone_step_expansion(n, a, 1));
        assert_eq!(got, sf(n, &[(0b00111, int(1)), (0b00101, int(-1))]));
        let (x, s, y) = (VertexSet::from_bits(0b00011), VertexSet::from_bits(0b00100), VertexSet::from_bits(0b11000));
        let got = sum(&independence_expansion(x, s, y));
        let want = sf(n, &[(0b00111, int(1)), (0b11100, int(1)), (0b11111, int(-1)), (0b00100, int(-1))]);
        assert_eq!(got, want);
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

    /// Random point satisfying the elemental rows: a nonnegative combination
    /// of the vertex indicator "rank" functions `A ↦ [A ∩ X ≠ ∅]` over cliques
    /// X is always G-polymatroidal.
    fn random_polymatroid(g: &Graph, weights: &[u8]) -> SetFunction {
        let cl = g.cliques();
        let mut f = SetFunction::zero(g.n());
        for (c, w) in cl.iter().zip(weights.iter().cycle()) {
            let r = SetFunction::from_fn(g.n(), |a| if a.intersection(*c).is_empty() { int(0) } else { int(1) });
            let w = *w as i64 % 4;
            f = f.add(&r.scale(&int(w)));
        }
        f
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn l_round_trip(n in 0usize..=4, vals in proptest::collection::vec(-9i64..=9, 16)) {
            let f = SetFunction::from_values(n, vals[..1 << n].iter().map(|&v| int(v)).collect()).unwrap();
            prop_assert_eq!(transform_L(&transform_L_inverse(&f)), f.clone());
            prop_assert_eq!(transform_L_inverse(&transform_L(&f)), f);
        }

        #[test]
        fn closed_form_and_component_split(n in 1usize..=4, bits in any::<u64>(), vals in proptest::collection::vec(0i64..=9, 16)) {
            let g = random_graph(n, bits);
            let q = SetFunction::from_fn(n, |a| if a.is_empty() { int(0) } else { int(vals[a.index()]) });
            let m = q_to_polymatroid(&q, &g);
            prop_assert_eq!(transform_L(&m), split_components(&q, &g));
            // on connected support the lifted inverse is the closed form
            let conn = SetFunction::from_fn(n, |a| {
                if g.connected_component_count(a) == 1 { q.get(a).clone() } else { int(0) }
            });
            let total: Rational = conn.values().iter().sum();
            prop_assume!(!total.is_zero());
            let conn = conn.scale(&total.recip());
            prop_assert_eq!(transform_L_inverse(&lift_q(&conn)), q_to_polymatroid(&conn, &g));
        }

        #[test]
        fn elemental_rows_imply_full_conditions(n in 1usize..=5, bits in any::<u64>(), w in proptest::collection::vec(any::<u8>(), 1..8), perturb in proptest::collection::vec(-2i64..=2, 32)) {
            let g = random_graph(n, bits);
            let frag = build_P_polytope(&g).unwrap();
            // random candidates: polymatroids and perturbed ones
            let base = random_polymatroid(&g, &w);
            let total = base.get(VertexSet::full(n)).clone();
            prop_assume!(!total.is_zero());
            let base = base.scale(&total.recip());
            let pert = SetFunction::from_fn(n, |a| base.get(a) + rat(perturb[a.index() % 32], 7) * int(if a.is_empty() || a == VertexSet::full(n) { 0 } else { 1 }));
            for f in [base, pert] {
                if frag.lp.is_feasible(f.values()) {
                    let all: Vec<VertexSet> = VertexSet::full(n).subsets().collect();
                    for &a in &all {
                        for &b in &all {
                            if a.is_subset(b) {
                                prop_assert!(f.get(a) <= f.get(b));
                            }
                            prop_assert!(f.get(a) + f.get(b) >= f.get(a.union(b)) + f.get(a.intersection(b)));
                            let (x, y) = (a.difference(b), b.difference(a));
                            if !x.is_empty() && !y.is_empty() && g.separates(a.intersection(b), x, y) {
                                prop_assert_eq!(f.get(a) + f.get(b), f.get(a.union(b)) + f.get(a.intersection(b)));
                            }
                        }
                    }
                }
            }
        }

        #[test]
        fn closed_form_lands_in_p(n in 1usize..=5, bits in any::<u64>(), vals in proptest::collection::vec(0u32..=5, 32)) {
            let g = random_graph(n, bits);
            let mut q = SetFunction::from_fn(n, |a| if a.is_empty() { int(0) } else { int(vals[a.index() % 32] as i64) });
            let w: Rational = VertexSet::full(n).subsets().map(|a| q.get(a) * int(g.connected_component_count(a) as i64)).sum();
            prop_assume!(!w.is_zero());
            q = q.scale(&w.recip());
            prop_assert!(build_Q_polytope(&g).unwrap().is_feasible(q.values()));
            let rep = is_polymatroidal(&q_to_polymatroid(&q, &g), &g, true);
            prop_assert!(rep.ok, "{:?}", rep.violations);
        }
    }
}

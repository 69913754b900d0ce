//! Exact rational linear programming: two-phase dense tableau simplex with
//! Bland's rule, duals read from the final basis inverse.

use crate::rational::{fmt_rational, Rational};
use num_traits::{One, Signed, Zero};
use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    NonNegative,
    Free,
}

/// A sparse row `Σ coeffs · x  (sense)  rhs`.
#[derive(Clone, Debug)]
pub struct Row {
    pub name: String,
    pub coeffs: Vec<(usize, Rational)>,
    pub sense: Sense,
    pub rhs: Rational,
}

impl Row {
    pub fn new(name: impl Into<String>, coeffs: Vec<(usize, Rational)>, sense: Sense, rhs: Rational) -> Self {
        Row {
            name: name.into(),
            coeffs,
            sense,
            rhs,
        }
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(j, c)| c * &x[*j]).sum()
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        let v = self.eval(x);
        match self.sense {
            Sense::Le => v <= self.rhs,
            Sense::Ge => v >= self.rhs,
            Sense::Eq => v == self.rhs,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    pub var_names: Vec<String>,
    pub var_kinds: Vec<VarKind>,
    pub rows: Vec<Row>,
    /// Dense objective coefficients.
    pub objective: Vec<Rational>,
    pub maximize: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl LpStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
        }
    }
}

/// Duals follow the Lagrangian convention `value = Σ rhs_i · dual_i`.
/// For a minimization, `≥` rows get nonnegative duals and `≤` rows nonpositive.
#[derive(Clone, Debug)]
pub struct LPSolution {
    pub status: LpStatus,
    pub value: Option<Rational>,
    pub primal: Vec<Rational>,
    pub duals: Vec<Rational>,
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, kind: VarKind) -> usize {
        self.var_names.push(name.into());
        self.var_kinds.push(kind);
        self.objective.push(Rational::zero());
        self.var_names.len() - 1
    }

    pub fn add_row(&mut self, row: Row) -> usize {
        self.rows.push(row);
        self.rows.len() - 1
    }

    pub fn var_count(&self) -> usize {
        self.var_names.len()
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.var_count()
            && self.rows.iter().all(|r| r.holds(x))
            && self.var_kinds.iter().zip(x).all(|(k, v)| *k == VarKind::Free || !v.is_negative())
    }

    /// One row per line, coefficients as `p/q`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let term = |c: &Rational, j: usize| format!("{} {}", fmt_rational(c), self.var_names[j]);
        let obj: Vec<String> = self
            .objective
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| term(c, j))
            .collect();
        let _ = writeln!(s, "{} {}", if self.maximize { "max" } else { "min" }, obj.join(" + "));
        for r in &self.rows {
            let lhs: Vec<String> = r.coeffs.iter().map(|(j, c)| term(c, *j)).collect();
            let op = match r.sense {
                Sense::Le => "<=",
                Sense::Ge => ">=",
                Sense::Eq => "=",
            };
            let _ = writeln!(s, "{}: {} {} {}", r.name, lhs.join(" + "), op, fmt_rational(&r.rhs));
        }
        for (j, k) in self.var_kinds.iter().enumerate() {
            if *k == VarKind::Free {
                let _ = writeln!(s, "free {}", self.var_names[j]);
            }
        }
        s
    }
}

struct Tableau {
    /// m rows of width `cols + 1`; last entry is the right-hand side.
    a: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize, obj: &mut [Rational]) {
        let inv = self.a[r][c].recip();
        for v in self.a[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let nz: Vec<usize> = (0..=self.cols).filter(|&j| !self.a[r][j].is_zero()).collect();
        let prow: Vec<Rational> = nz.iter().map(|&j| self.a[r][j].clone()).collect();
        let eliminate = |row: &mut Vec<Rational>| {
            let f = row[c].clone();
            if f.is_zero() {
                return;
            }
            for (&j, pv) in nz.iter().zip(&prow) {
                row[j] -= &f * pv;
            }
        };
        for (i, row) in self.a.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        let mut o = obj.to_vec();
        eliminate(&mut o);
        obj.clone_from_slice(&o);
        self.basis[r] = c;
    }

    /// Minimizes the objective row `obj` (reduced costs, last entry = −value)
    /// over columns `< allowed`. Returns false when unbounded.
    fn run(&mut self, obj: &mut [Rational], allowed: usize) -> bool {
        loop {
            let Some(c) = (0..allowed).find(|&j| obj[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(Rational, usize, usize)> = None;
            for (i, row) in self.a.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[self.cols] / &row[c];
                    let better = match &best {
                        None => true,
                        Some((br, _, bb)) => ratio < *br || (ratio == *br && self.basis[i] < *bb),
                    };
                    if better {
                        best = Some((ratio, i, self.basis[i]));
                    }
                }
            }
            let Some((_, r, _)) = best else {
                return false;
            };
            self.pivot(r, c, obj);
        }
    }
}

/// Solves `lp` exactly.
pub fn solve_lp(lp: &LinearProgram) -> LPSolution {
    let n = lp.var_count();
    let m = lp.rows.len();
    // standard-form columns: split variables, then one slack per inequality
    let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(n);
    let mut ncols = 0;
    for k in &lp.var_kinds {
        match k {
            VarKind::NonNegative => {
                col_of.push((ncols, None));
                ncols += 1;
            }
            VarKind::Free => {
                col_of.push((ncols, Some(ncols + 1)));
                ncols += 2;
            }
        }
    }
    let mut slack_of = vec![None; m];
    for (i, r) in lp.rows.iter().enumerate() {
        if r.sense != Sense::Eq {
            slack_of[i] = Some(ncols);
            ncols += 1;
        }
    }
    let art0 = ncols;
    let cols = ncols + m;
    let mut flip = vec![false; m];
    let mut a = vec![vec![Rational::zero(); cols + 1]; m];
    for (i, r) in lp.rows.iter().enumerate() {
        let row = &mut a[i];
        for (j, c) in &r.coeffs {
            let (p, q) = col_of[*j];
            row[p] += c;
            if let Some(q) = q {
                row[q] -= c;
            }
        }
        if let Some(s) = slack_of[i] {
            row[s] = if r.sense == Sense::Le { Rational::one() } else { -Rational::one() };
        }
        row[cols] = r.rhs.clone();
        if r.rhs.is_negative() {
            flip[i] = true;
            for v in row.iter_mut() {
                *v = -v.clone();
            }
        }
        row[art0 + i] = Rational::one();
    }
    let mut t = Tableau {
        a,
        basis: (art0..art0 + m).collect(),
        cols,
    };

    // phase 1: minimize the sum of artificials
    let mut obj = vec![Rational::zero(); cols + 1];
    for row in &t.a {
        for j in 0..art0 {
            obj[j] -= &row[j];
        }
        obj[cols] -= &row[cols];
    }
    t.run(&mut obj, art0);
    if !obj[cols].is_zero() {
        return LPSolution {
            status: LpStatus::Infeasible,
            value: None,
            primal: vec![],
            duals: vec![],
        };
    }
    for r in 0..m {
        if t.basis[r] >= art0 {
            if let Some(c) = (0..art0).find(|&j| !t.a[r][j].is_zero()) {
                t.pivot(r, c, &mut obj);
            }
        }
    }

    // phase 2
    let sign = if lp.maximize { -Rational::one() } else { Rational::one() };
    let mut cost = vec![Rational::zero(); cols];
    for (j, c) in lp.objective.iter().enumerate() {
        let (p, q) = col_of[j];
        cost[p] = &sign * c;
        if let Some(q) = q {
            cost[q] = -(&sign * c);
        }
    }
    let mut obj = vec![Rational::zero(); cols + 1];
    obj[..cols].clone_from_slice(&cost);
    for (r, &b) in t.basis.iter().enumerate() {
        if b < cols && !cost[b].is_zero() {
            let cb = cost[b].clone();
            for (o, v) in obj.iter_mut().zip(&t.a[r]) {
                *o -= &cb * v;
            }
        }
    }
    if !t.run(&mut obj, art0) {
        return LPSolution {
            status: LpStatus::Unbounded,
            value: None,
            primal: vec![],
            duals: vec![],
        };
    }

    let mut xs = vec![Rational::zero(); cols];
    for (r, &b) in t.basis.iter().enumerate() {
        xs[b] = t.a[r][cols].clone();
    }
    let primal: Vec<Rational> = col_of
        .iter()
        .map(|&(p, q)| match q {
            Some(q) => &xs[p] - &xs[q],
            None => xs[p].clone(),
        })
        .collect();
    // y_std = c_B B^{-1}; B^{-1} sits in the artificial columns
    let duals: Vec<Rational> = (0..m)
        .map(|i| {
            let mut y = Rational::zero();
            for (r, &b) in t.basis.iter().enumerate() {
                let cb = if b < cols { &cost[b] } else { continue };
                if !cb.is_zero() {
                    y += cb * &t.a[r][art0 + i];
                }
            }
            let y = if flip[i] { -y } else { y };
            &sign * y
        })
        .collect();
    let value = lp.objective_value(&primal);
    let sol = LPSolution {
        status: LpStatus::Optimal,
        value: Some(value),
        primal,
        duals,
    };
    debug_assert!(verify_optimality(lp, &sol), "simplex produced an unverified optimum");
    sol
}

/// Exact post-hoc check: primal feasibility, dual feasibility and zero gap.
pub fn verify_optimality(lp: &LinearProgram, sol: &LPSolution) -> bool {
    let Some(value) = &sol.value else {
        return false;
    };
    if !lp.is_feasible(&sol.primal) || sol.duals.len() != lp.rows.len() {
        return false;
    }
    // min: reduced cost c - A^T y >= 0 on nonnegative vars, = 0 on free vars
    let dir = if lp.maximize { -Rational::one() } else { Rational::one() };
    let mut reduced: Vec<Rational> = lp.objective.clone();
    for (r, y) in lp.rows.iter().zip(&sol.duals) {
        for (j, c) in &r.coeffs {
            reduced[*j] -= c * y;
        }
        let signed = &dir * y;
        let ok = match r.sense {
            Sense::Ge => !signed.is_negative(),
            Sense::Le => !signed.is_positive(),
            Sense::Eq => true,
        };
        if !ok {
            return false;
        }
    }
    let dual_ok = reduced.iter().zip(&lp.var_kinds).all(|(d, k)| match k {
        VarKind::Free => d.is_zero(),
        VarKind::NonNegative => !(&dir * d).is_negative(),
    });
    let dual_value: Rational = lp.rows.iter().zip(&sol.duals).map(|(r, y)| &r.rhs * y).sum();
    dual_ok && dual_value == *value && lp.objective_value(&sol.primal) == *value
}

/// Solves a square system exactly; `None` when singular.
pub fn solve_linear_system(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        b.swap(c, p);
        let inv = a[c][c].recip();
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = &a[r][c] * &inv;
                for k in c..n {
                    let d = &f * &a[c][k];
                    a[r][k] -= d;
                }
                let d = &f * &b[c];
                b[r] -= d;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Every vertex of the feasible region: each is the unique solution of some n
/// linearly independent constraints (rows or nonnegativity bounds) held tight.
/// Exponential; only for tiny LPs.
pub fn enumerate_vertices(lp: &LinearProgram) -> Vec<Vec<Rational>> {
    let n = lp.var_count();
    let mut cons: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for r in &lp.rows {
        let mut dense = vec![Rational::zero(); n];
        for (j, c) in &r.coeffs {
            dense[*j] += c;
        }
        cons.push((dense, r.rhs.clone()));
    }
    for (j, k) in lp.var_kinds.iter().enumerate() {
        if *k == VarKind::NonNegative {
            let mut e = vec![Rational::zero(); n];
            e[j] = Rational::one();
            cons.push((e, Rational::zero()));
        }
    }
    let mut out: Vec<Vec<Rational>> = Vec::new();
    let mut chosen = Vec::new();
    fn rec(
        start: usize,
        chosen: &mut Vec<usize>,
        cons: &[(Vec<Rational>, Rational)],
        lp: &LinearProgram,
        out: &mut Vec<Vec<Rational>>,
    ) {
        if chosen.len() == lp.var_count() {
            let a = chosen.iter().map(|&i| cons[i].0.clone()).collect();
            let b = chosen.iter().map(|&i| cons[i].1.clone()).collect();
            // feasibility also enforces the equality rows left out of the system
            if let Some(x) = solve_linear_system(a, b) {
                if lp.is_feasible(&x) && !out.contains(&x) {
                    out.push(x);
                }
            }
            return;
        }
        for i in start..cons.len() {
            chosen.push(i);
            rec(i + 1, chosen, cons, lp, out);
            chosen.pop();
        }
    }
    rec(0, &mut chosen, &cons, lp, &mut out);
    out
}

/// Optimum by vertex enumeration; `None` when no vertex is feasible.
pub fn brute_force_optimum(lp: &LinearProgram) -> Option<Rational> {
    let vals = enumerate_vertices(lp).into_iter().map(|x| lp.objective_value(&x));
    if lp.maximize {
        vals.max()
    } else {
        vals.min()
    }
}

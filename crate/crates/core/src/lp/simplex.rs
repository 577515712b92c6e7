//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Constraints of the form `c * x >= 0` with `c > 0` are turned into sign
//! bounds on `x`; every other variable is split into a positive and a
//! negative part. Each remaining constraint becomes one tableau row.

use super::{LinearForm, LinearSystem, Relation};
use crate::rational::{self, Rational};
use num_traits::{One, Signed, Zero};

pub(super) enum Solved {
    /// Farkas multipliers, one per constraint.
    Infeasible(Vec<Rational>),
    Unbounded,
    /// `duals[i]` is the multiplier of constraint `i` at the optimal basis:
    /// `sum duals[i] * form_i = -objective + const`, non-negative on `>=`.
    Optimal {
        witness: Vec<Rational>,
        duals: Vec<Rational>,
    },
}

enum ColumnKind {
    /// Positive part of a variable.
    Plus(usize),
    /// Negative part of a free variable.
    Minus(usize),
    /// Surplus of a `>=` row.
    Surplus,
    Artificial,
}

struct Tableau {
    a: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Reduced costs.
    obj: Vec<Rational>,
    kinds: Vec<ColumnKind>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.a[r][c].clone();
        if !p.is_one() {
            for v in self.a[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
            self.rhs[r] /= &p;
        }
        let pivot_row = self.a[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        let nz: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
        for i in 0..self.a.len() {
            if i == r || self.a[i][c].is_zero() {
                continue;
            }
            let f = self.a[i][c].clone();
            for &j in &nz {
                let d = &f * &pivot_row[j];
                self.a[i][j] -= d;
            }
            let d = &f * &pivot_rhs;
            self.rhs[i] -= d;
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for &j in &nz {
                let d = &f * &pivot_row[j];
                self.obj[j] -= d;
            }
        }
        self.basis[r] = c;
    }

    /// Reduced costs for cost vector `cost` under the current basis.
    fn price(&mut self, cost: &[Rational]) {
        let mut obj = cost.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, v) in self.a[i].iter().enumerate() {
                if !v.is_zero() {
                    obj[j] -= cb * v;
                }
            }
        }
        self.obj = obj;
    }

    /// Minimizes with Bland's rule. Returns false on unboundedness.
    fn run(&mut self, allow_artificial: bool) -> bool {
        loop {
            let entering = (0..self.obj.len()).find(|&j| {
                self.obj[j].is_negative() && (allow_artificial || !matches!(self.kinds[j], ColumnKind::Artificial))
            });
            let Some(c) = entering else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.a.len() {
                let coef = &self.a[i][c];
                if !coef.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / coef;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return false,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }
}

pub(super) fn solve(system: &LinearSystem, objective: Option<&LinearForm>) -> Solved {
    let n = system.num_vars();
    let cons = system.constraints();
    debug_assert!(cons.iter().all(|c| c.rel != Relation::Gt));

    // Constraints of the shape `c * x >= 0`, c > 0, act as sign bounds.
    let mut bound_of: Vec<Option<usize>> = vec![None; n];
    let mut is_bound = vec![false; cons.len()];
    for (i, c) in cons.iter().enumerate() {
        if c.rel != Relation::Ge || !c.form.constant_term().is_zero() {
            continue;
        }
        let mut terms = c.form.terms();
        if let (Some((v, coef)), None) = (terms.next(), terms.next()) {
            if coef.is_positive() {
                is_bound[i] = true;
                if bound_of[v.0].is_none() {
                    bound_of[v.0] = Some(i);
                }
            }
        }
    }

    let mut kinds = Vec::new();
    let mut plus_col = vec![0; n];
    let mut minus_col: Vec<Option<usize>> = vec![None; n];
    for v in 0..n {
        plus_col[v] = kinds.len();
        kinds.push(ColumnKind::Plus(v));
        if bound_of[v].is_none() {
            minus_col[v] = Some(kinds.len());
            kinds.push(ColumnKind::Minus(v));
        }
    }
    let rows: Vec<usize> = (0..cons.len()).filter(|&i| !is_bound[i]).collect();
    let mut surplus_col = vec![None; cons.len()];
    for &i in &rows {
        if cons[i].rel == Relation::Ge {
            surplus_col[i] = Some(kinds.len());
            kinds.push(ColumnKind::Surplus);
        }
    }
    let n_struct = kinds.len();
    let m = rows.len();
    for _ in 0..m {
        kinds.push(ColumnKind::Artificial);
    }
    let width = kinds.len();

    // Row r: sign * (sum coef x - surplus) = sign * (-constant), rhs >= 0.
    let mut a = vec![vec![rational::zero(); width]; m];
    let mut rhs = vec![rational::zero(); m];
    let mut flip = vec![false; m];
    for (r, &i) in rows.iter().enumerate() {
        let form = &cons[i].form;
        let b = -form.constant_term().clone();
        flip[r] = b.is_negative();
        let s = if flip[r] { rational::int(-1) } else { rational::one() };
        for (v, coef) in form.terms() {
            a[r][plus_col[v.0]] = coef * &s;
            if let Some(mc) = minus_col[v.0] {
                a[r][mc] = -(coef * &s);
            }
        }
        if let Some(sc) = surplus_col[i] {
            a[r][sc] = -s.clone();
        }
        rhs[r] = b * &s;
        a[r][n_struct + r] = rational::one();
    }

    let mut tab = Tableau {
        a,
        rhs,
        basis: (n_struct..width).collect(),
        obj: Vec::new(),
        kinds,
    };

    // Phase I: minimize the sum of artificials.
    let mut phase1_cost = vec![rational::zero(); width];
    for c in phase1_cost.iter_mut().skip(n_struct) {
        *c = rational::one();
    }
    tab.price(&phase1_cost);
    let bounded = tab.run(true);
    debug_assert!(bounded);
    let infeasibility: Rational = tab
        .basis
        .iter()
        .zip(&tab.rhs)
        .filter(|(&b, _)| b >= n_struct)
        .map(|(_, v)| v.clone())
        .sum();
    if infeasibility.is_positive() {
        let duals = extract_duals(&tab, &phase1_cost, cons, &rows, &flip, &bound_of, &plus_col, n_struct);
        return Solved::Infeasible(duals);
    }

    // Drive zero-valued artificials out of the basis where possible.
    for r in 0..m {
        if tab.basis[r] < n_struct {
            continue;
        }
        if let Some(c) = (0..n_struct).find(|&j| !tab.a[r][j].is_zero()) {
            tab.pivot(r, c);
        }
    }

    // Phase II: minimize -objective.
    let mut cost = vec![rational::zero(); width];
    if let Some(obj) = objective {
        for (v, coef) in obj.terms() {
            cost[plus_col[v.0]] = -coef.clone();
            if let Some(mc) = minus_col[v.0] {
                cost[mc] = coef.clone();
            }
        }
    }
    tab.price(&cost);
    if !tab.run(false) {
        return Solved::Unbounded;
    }

    let mut witness = vec![rational::zero(); n];
    for (r, &b) in tab.basis.iter().enumerate() {
        match tab.kinds[b] {
            ColumnKind::Plus(v) => witness[v] += &tab.rhs[r],
            ColumnKind::Minus(v) => witness[v] -= &tab.rhs[r],
            _ => {}
        }
    }
    let duals = extract_duals(&tab, &cost, cons, &rows, &flip, &bound_of, &plus_col, n_struct);
    Solved::Optimal { witness, duals }
}

/// Reads constraint multipliers off the reduced costs: with `y` the simplex
/// multipliers of the rows, row constraint `i` gets `sign_i * y_i` and a sign
/// bound gets the reduced cost of its variable's column.
#[allow(clippy::too_many_arguments)]
fn extract_duals(
    tab: &Tableau,
    cost: &[Rational],
    cons: &[super::Constraint],
    rows: &[usize],
    flip: &[bool],
    bound_of: &[Option<usize>],
    plus_col: &[usize],
    n_struct: usize,
) -> Vec<Rational> {
    let mut duals = vec![rational::zero(); cons.len()];
    for (r, &i) in rows.iter().enumerate() {
        let col = n_struct + r;
        let y = &cost[col] - &tab.obj[col];
        duals[i] = if flip[r] { -y } else { y };
    }
    for (v, b) in bound_of.iter().enumerate() {
        if let Some(i) = *b {
            // A positive coefficient on the bound row scales the multiplier.
            let coef = cons[i].form.terms().next().map(|(_, c)| c.clone()).unwrap();
            duals[i] = &tab.obj[plus_col[v]] / coef;
        }
    }
    duals
}

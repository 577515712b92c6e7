//! Exact rational linear programming.
//!
//! Systems are lists of `form REL 0` constraints over free variables, with
//! `REL` one of `=`, `>=`, `>`. A dense two-phase simplex with Bland's rule
//! solves them; infeasibility always comes with a certificate that can be
//! checked independently of the solver.

mod simplex;

use crate::rational::{self, Rational};
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub usize);

/// Affine form `sum coeff * var + constant`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LinearForm {
    coeffs: BTreeMap<usize, Rational>,
    constant: Rational,
}

impl LinearForm {
    pub fn zero() -> LinearForm {
        LinearForm::default()
    }

    pub fn constant(c: Rational) -> LinearForm {
        LinearForm {
            coeffs: BTreeMap::new(),
            constant: c,
        }
    }

    pub fn var(v: Var) -> LinearForm {
        LinearForm::term(v, rational::one())
    }

    pub fn term(v: Var, c: Rational) -> LinearForm {
        let mut f = LinearForm::zero();
        f.add_term(v, &c);
        f
    }

    pub fn add_term(&mut self, v: Var, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(v.0).or_insert_with(rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&v.0);
        }
    }

    pub fn add_constant(&mut self, c: &Rational) {
        self.constant += c;
    }

    /// `self += scale * other`
    pub fn add_scaled(&mut self, other: &LinearForm, scale: &Rational) {
        if scale.is_zero() {
            return;
        }
        for (&v, c) in &other.coeffs {
            self.add_term(Var(v), &(c * scale));
        }
        self.constant += &other.constant * scale;
    }

    pub fn scaled(&self, scale: &Rational) -> LinearForm {
        let mut out = LinearForm::zero();
        out.add_scaled(self, scale);
        out
    }

    pub fn negated(&self) -> LinearForm {
        self.scaled(&rational::int(-1))
    }

    pub fn minus(&self, other: &LinearForm) -> LinearForm {
        let mut out = self.clone();
        out.add_scaled(other, &rational::int(-1));
        out
    }

    pub fn coeff(&self, v: Var) -> Rational {
        self.coeffs.get(&v.0).cloned().unwrap_or_else(rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Var, &Rational)> {
        self.coeffs.iter().map(|(&v, c)| (Var(v), c))
    }

    pub fn constant_term(&self) -> &Rational {
        &self.constant
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.constant.is_zero()
    }

    pub fn max_var(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    /// Exact evaluation; variables beyond `point` count as 0.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = self.constant.clone();
        for (&v, c) in &self.coeffs {
            if let Some(x) = point.get(v) {
                acc += c * x;
            }
        }
        acc
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Eq,
    Ge,
    Gt,
}

impl Relation {
    pub fn holds(self, value: &Rational) -> bool {
        match self {
            Relation::Eq => value.is_zero(),
            Relation::Ge => !value.is_negative(),
            Relation::Gt => value.is_positive(),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Eq => "=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub form: LinearForm,
    pub rel: Relation,
}

/// Constraints `form REL 0` over named variables.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinearSystem {
    names: Vec<String>,
    constraints: Vec<Constraint>,
}

impl LinearSystem {
    pub fn new() -> LinearSystem {
        LinearSystem::default()
    }

    pub fn with_vars<S: Into<String>>(names: impl IntoIterator<Item = S>) -> LinearSystem {
        LinearSystem {
            names: names.into_iter().map(Into::into).collect(),
            constraints: Vec::new(),
        }
    }

    pub fn add_var(&mut self, name: impl Into<String>) -> Var {
        self.names.push(name.into());
        Var(self.names.len() - 1)
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn var_name(&self, v: Var) -> &str {
        &self.names[v.0]
    }

    pub fn var_names(&self) -> &[String] {
        &self.names
    }

    pub fn var_by_name(&self, name: &str) -> Option<Var> {
        self.names.iter().position(|n| n == name).map(Var)
    }

    /// Adds `form REL 0`.
    ///
    /// # Panics
    /// If the form references an undeclared variable.
    pub fn add(&mut self, form: LinearForm, rel: Relation) {
        if let Some(v) = form.max_var() {
            assert!(v < self.names.len(), "constraint references undeclared variable {v}");
        }
        self.constraints.push(Constraint { form, rel });
    }

    pub fn add_ge(&mut self, form: LinearForm) {
        self.add(form, Relation::Ge);
    }

    pub fn add_eq(&mut self, form: LinearForm) {
        self.add(form, Relation::Eq);
    }

    pub fn add_gt(&mut self, form: LinearForm) {
        self.add(form, Relation::Gt);
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn has_strict(&self) -> bool {
        self.constraints.iter().any(|c| c.rel == Relation::Gt)
    }

    pub fn is_satisfied_by(&self, point: &[Rational]) -> bool {
        point.len() == self.names.len() && self.constraints.iter().all(|c| c.rel.holds(&c.form.eval(point)))
    }

    pub fn extend(&mut self, other: &LinearSystem) {
        assert!(other.names.len() <= self.names.len());
        self.constraints.extend(other.constraints.iter().cloned());
    }
}

/// Multipliers, one per constraint, whose combination `sum m_i f_i` is a
/// constant `c` such that either `c < 0`, or `c = 0` while some strict
/// constraint has a positive multiplier. Multipliers of `>=`/`>` constraints
/// are non-negative. Either way the system cannot hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub multipliers: Vec<Rational>,
}

impl FarkasCertificate {
    /// Re-checks the certificate against `system` with exact arithmetic.
    pub fn verify(&self, system: &LinearSystem) -> bool {
        let cons = system.constraints();
        if self.multipliers.len() != cons.len() {
            return false;
        }
        let mut combo = LinearForm::zero();
        let mut strict_weight = rational::zero();
        for (m, c) in self.multipliers.iter().zip(cons) {
            if c.rel != Relation::Eq && m.is_negative() {
                return false;
            }
            if c.rel == Relation::Gt {
                strict_weight += m;
            }
            combo.add_scaled(&c.form, m);
        }
        if !combo.is_constant() {
            return false;
        }
        let c = combo.constant_term();
        c.is_negative() || (c.is_zero() && strict_weight.is_positive())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    Infeasible(FarkasCertificate),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }

    pub fn witness(&self) -> Option<&[Rational]> {
        match self {
            Feasibility::Feasible(w) => Some(w),
            Feasibility::Infeasible(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Infeasible(FarkasCertificate),
    Unbounded,
    Optimal { value: Rational, witness: Vec<Rational> },
}

/// Feasibility of a system with only `=` and `>=` constraints.
///
/// # Panics
/// If the system contains a strict constraint; use [`strict_feasible`].
pub fn lp_feasible(system: &LinearSystem) -> Feasibility {
    assert!(!system.has_strict(), "lp_feasible does not accept strict constraints");
    match simplex::solve(system, None) {
        simplex::Solved::Infeasible(m) => Feasibility::Infeasible(FarkasCertificate { multipliers: m }),
        simplex::Solved::Optimal { witness, .. } => Feasibility::Feasible(witness),
        simplex::Solved::Unbounded => unreachable!("feasibility problem has no objective"),
    }
}

/// Maximizes `objective` over a system with only `=` and `>=` constraints.
///
/// # Panics
/// If the system contains a strict constraint.
pub fn lp_max(system: &LinearSystem, objective: &LinearForm) -> Outcome {
    assert!(!system.has_strict(), "lp_max does not accept strict constraints");
    match simplex::solve(system, Some(objective)) {
        simplex::Solved::Infeasible(m) => Outcome::Infeasible(FarkasCertificate { multipliers: m }),
        simplex::Solved::Unbounded => Outcome::Unbounded,
        simplex::Solved::Optimal { witness, .. } => Outcome::Optimal {
            value: objective.eval(&witness),
            witness,
        },
    }
}

/// Feasibility with strict constraints. Each `f > 0` becomes `f - t >= 0`,
/// `t <= 1` is added and `t` is maximized; the system is feasible iff the
/// optimum is positive.
pub fn strict_feasible(system: &LinearSystem) -> Feasibility {
    if !system.has_strict() {
        return lp_feasible(system);
    }
    let n = system.num_vars();
    let mut lifted = LinearSystem::with_vars(system.var_names().iter().cloned());
    let t = lifted.add_var("__slack_t");
    for c in system.constraints() {
        match c.rel {
            Relation::Gt => {
                let mut f = c.form.clone();
                f.add_term(t, &rational::int(-1));
                lifted.add_ge(f);
            }
            rel => lifted.add(c.form.clone(), rel),
        }
    }
    let mut cap = LinearForm::constant(rational::one());
    cap.add_term(t, &rational::int(-1));
    lifted.add_ge(cap);
    let objective = LinearForm::var(t);
    let m = system.constraints().len();
    match simplex::solve(&lifted, Some(&objective)) {
        simplex::Solved::Infeasible(mult) => Feasibility::Infeasible(FarkasCertificate {
            multipliers: mult[..m].to_vec(),
        }),
        simplex::Solved::Unbounded => unreachable!("slack variable is capped"),
        simplex::Solved::Optimal { mut witness, duals } => {
            if witness[t.0].is_positive() {
                witness.truncate(n);
                Feasibility::Feasible(witness)
            } else {
                Feasibility::Infeasible(FarkasCertificate {
                    multipliers: duals[..m].to_vec(),
                })
            }
        }
    }
}

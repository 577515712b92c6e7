//! The length LP of one branch.

use super::branch::admitted;
use super::BranchGuess;
use crate::graph::{EdgeId, End};
use crate::lp::{LinearForm, LinearSystem, Var};
use crate::model::{AgentId, Instance};
use crate::rational;

fn x(e: EdgeId, end: End) -> Var {
    match end {
        End::Low => Var(3 * e.0),
        End::High => Var(3 * e.0 + 2),
    }
}

fn delta(e: EdgeId) -> Var {
    Var(3 * e.0 + 1)
}

/// `viewer`'s value for the ends held by `holder`.
fn share(instance: &Instance, guess: &BranchGuess, holder: AgentId, viewer: AgentId) -> LinearForm {
    let mut f = LinearForm::zero();
    for (e, end) in guess.ends_of(holder) {
        f.add_term(x(e, end), instance.utility(viewer, e));
    }
    f
}

/// Variables `x0_e, d_e, x1_e` per edge (in that order). Constraints:
/// non-negative lengths tiling each edge, no envy from end holders towards
/// each other or towards inside pieces, pair-critical agents not envying
/// other edges, and every admitted agent inside `e` not envying the end
/// holder it was compared against.
pub fn build_lp(instance: &Instance, guess: &BranchGuess) -> LinearSystem {
    let g = instance.graph();
    let mut names = Vec::with_capacity(3 * g.num_edges());
    for e in g.edges() {
        names.push(format!("x0_{}", e.name));
        names.push(format!("d_{}", e.name));
        names.push(format!("x1_{}", e.name));
    }
    let mut sys = LinearSystem::with_vars(names);
    for e in g.edge_ids() {
        let mut sum = LinearForm::constant(rational::int(-1));
        for v in [x(e, End::Low), delta(e), x(e, End::High)] {
            sys.add_ge(LinearForm::var(v));
        }
        sum.add_term(x(e, End::Low), &rational::one());
        sum.add_term(delta(e), &rational::int(guess.n[e.0] as i64));
        sum.add_term(x(e, End::High), &rational::one());
        sys.add_eq(sum);
    }
    for &a in &guess.a_v {
        let own = share(instance, guess, a, a);
        for &b in &guess.a_v {
            if a != b {
                sys.add_ge(own.minus(&share(instance, guess, b, a)));
            }
        }
        for e in g.edge_ids() {
            sys.add_ge(own.minus(&LinearForm::term(delta(e), instance.utility(a, e).clone())));
        }
    }
    for (&(e, f), &c) in &guess.pair_critical {
        let mut form = LinearForm::term(delta(e), instance.utility(c, e).clone());
        form.add_term(delta(f), &-instance.utility(c, f).clone());
        sys.add_ge(form);
    }
    for (&(e, holder), &c) in &guess.vertex_critical {
        let point = &guess.sample_points[&(e, holder)];
        for a in admitted(instance, guess, e, holder, c, point) {
            let inside = LinearForm::term(delta(e), instance.utility(a, e).clone());
            sys.add_ge(inside.minus(&share(instance, guess, holder, a)));
        }
    }
    sys
}

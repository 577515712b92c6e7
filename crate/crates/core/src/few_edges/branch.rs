//! Initial branches, envy-critical candidates, and the agent orderings that
//! drive the vertex-critical guesses.

use super::BranchGuess;
use crate::arrangement::{self, CellWitness};
use crate::graph::{Dsu, EdgeId, End};
use crate::lp::{LinearForm, LinearSystem, Var};
use crate::model::{AgentId, Instance, Variant};
use crate::rational::{self, Rational};
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// Tie classes of agents, most envious first.
pub type WeakOrder = Vec<Vec<AgentId>>;

pub(super) fn endpoint_code_count(instance: &Instance) -> u64 {
    let n = instance.num_agents() as u64;
    n.checked_pow(2 * instance.graph().num_edges() as u32)
        .expect("endpoint branch count overflows")
}

/// Every endpoint map and inside-count map passing the sanity checks, in
/// lexicographic order.
pub fn enumerate_initial_branches(instance: &Instance) -> impl Iterator<Item = BranchGuess> + '_ {
    (0..endpoint_code_count(instance)).flat_map(move |code| branches_for_code(instance, code))
}

pub(super) fn branches_for_code(instance: &Instance, code: u64) -> Vec<BranchGuess> {
    let g = instance.graph();
    let k = g.num_edges();
    let n = instance.num_agents();
    let mut digits = vec![0usize; 2 * k];
    let mut c = code;
    for d in digits.iter_mut().rev() {
        *d = (c % n as u64) as usize;
        c /= n as u64;
    }
    let endpoint_agent: Vec<[AgentId; 2]> = (0..k)
        .map(|e| [AgentId(digits[2 * e]), AgentId(digits[2 * e + 1])])
        .collect();
    if instance.variant() == Variant::Vdgc && !single_owner_per_vertex(instance, &endpoint_agent) {
        return Vec::new();
    }
    let a_v: BTreeSet<AgentId> = endpoint_agent.iter().flatten().copied().collect();
    let rest = n - a_v.len();
    let mut out = Vec::new();
    for counts in compositions(rest, k) {
        let guess = BranchGuess {
            endpoint_agent: endpoint_agent.clone(),
            a_v: a_v.clone(),
            n: counts,
            pair_critical: BTreeMap::new(),
            vertex_critical: BTreeMap::new(),
            sample_points: BTreeMap::new(),
        };
        if ends_connected(instance, &guess) {
            out.push(guess);
        }
    }
    out
}

/// All ways to write `total` as `parts` non-negative summands, lexicographic.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut tail in compositions(total - first, parts - 1) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

/// Every end an agent holds is reachable from its other ends through edges
/// it holds entirely (both ends, nobody inside).
fn ends_connected(instance: &Instance, guess: &BranchGuess) -> bool {
    let g = instance.graph();
    for &a in &guess.a_v {
        let mut dsu = Dsu::new(g.num_vertices());
        let mut touched = Vec::new();
        for (e, pair) in guess.endpoint_agent.iter().enumerate() {
            let edge = &g.edges()[e];
            if pair[0] == a {
                touched.push(edge.low.0);
            }
            if pair[1] == a {
                touched.push(edge.high.0);
            }
            if pair[0] == a && pair[1] == a && guess.n[e] == 0 {
                dsu.union(edge.low.0, edge.high.0);
            }
        }
        let root = dsu.find(touched[0]);
        if touched.iter().any(|&v| dsu.find(v) != root) {
            return false;
        }
    }
    true
}

/// Under VDGC all ends meeting at a vertex go to one agent.
fn single_owner_per_vertex(instance: &Instance, endpoint_agent: &[[AgentId; 2]]) -> bool {
    let g = instance.graph();
    let mut owner: Vec<Option<AgentId>> = vec![None; g.num_vertices()];
    for (e, pair) in endpoint_agent.iter().enumerate() {
        for end in End::BOTH {
            let v = g.edges()[e].endpoint(end);
            match owner[v.0] {
                Some(o) if o != pair[end.index()] => return false,
                _ => owner[v.0] = Some(pair[end.index()]),
            }
        }
    }
    true
}

/// Agents that may sit inside `e`: not end holders, and valuing `e`.
/// An agent with `u(e) = 0` inside `e` gets nothing and envies any piece it
/// values.
pub(super) fn candidates(instance: &Instance, guess: &BranchGuess, e: EdgeId) -> Vec<AgentId> {
    instance
        .agent_ids()
        .filter(|a| !guess.a_v.contains(a) && instance.utility(*a, e).is_positive())
        .collect()
}

fn sample_var(e: EdgeId, end: End) -> Var {
    Var(2 * e.0 + end.index())
}

/// `viewer`'s value for the ends held by `holder`, over the sample variables.
fn share_form(instance: &Instance, guess: &BranchGuess, holder: AgentId, viewer: AgentId) -> LinearForm {
    let mut f = LinearForm::zero();
    for (e, end) in guess.ends_of(holder) {
        f.add_term(sample_var(e, end), instance.utility(viewer, e));
    }
    f
}

/// Positive where `a1` is closer than `a2` to envying `holder` from inside `e`.
fn comparison_form(
    instance: &Instance,
    guess: &BranchGuess,
    e: EdgeId,
    holder: AgentId,
    a1: AgentId,
    a2: AgentId,
) -> LinearForm {
    let mut f = LinearForm::zero();
    f.add_scaled(&share_form(instance, guess, holder, a1), instance.utility(a2, e));
    f.add_scaled(&share_form(instance, guess, holder, a2), &-instance.utility(a1, e).clone());
    f
}

/// Comparison forms for every edge, end holder and pair of agents, without
/// the identically zero ones. Variables follow [`sample_region`].
pub fn build_ordering_forms(instance: &Instance, guess: &BranchGuess) -> Vec<LinearForm> {
    let agents: Vec<AgentId> = instance.agent_ids().collect();
    let mut out = Vec::new();
    for e in instance.graph().edge_ids() {
        for &a in &guess.a_v {
            for (i, &a1) in agents.iter().enumerate() {
                for &a2 in &agents[i + 1..] {
                    let f = comparison_form(instance, guess, e, a, a1, a2);
                    if !f.is_zero() {
                        out.push(f);
                    }
                }
            }
        }
    }
    out
}

/// End lengths `x0_e, x1_e` (variable `2e + end`): non-negative, at most 1
/// per edge (exactly 1 without inside agents), with no envy among end
/// holders.
pub fn sample_region(instance: &Instance, guess: &BranchGuess) -> LinearSystem {
    let g = instance.graph();
    let mut names = Vec::new();
    for e in g.edges() {
        names.push(format!("x0_{}", e.name));
        names.push(format!("x1_{}", e.name));
    }
    let mut region = LinearSystem::with_vars(names);
    for e in g.edge_ids() {
        let lo = sample_var(e, End::Low);
        let hi = sample_var(e, End::High);
        region.add_ge(LinearForm::var(lo));
        region.add_ge(LinearForm::var(hi));
        let mut rest = LinearForm::constant(rational::one());
        rest.add_term(lo, &rational::int(-1));
        rest.add_term(hi, &rational::int(-1));
        if guess.n[e.0] == 0 {
            region.add_eq(rest);
        } else {
            region.add_ge(rest);
        }
    }
    for &a in &guess.a_v {
        let own = share_form(instance, guess, a, a);
        for &b in &guess.a_v {
            if a != b {
                region.add_ge(own.minus(&share_form(instance, guess, b, a)));
            }
        }
    }
    region
}

/// How close `viewer` sitting inside `e` is to envying `holder`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Closeness {
    Ratio(Rational),
    /// Values the holder's piece but not `e`.
    Unbounded,
}

fn closeness(
    instance: &Instance,
    guess: &BranchGuess,
    e: EdgeId,
    holder: AgentId,
    viewer: AgentId,
    point: &[Rational],
) -> Closeness {
    let s = share_form(instance, guess, holder, viewer).eval(point);
    let u = instance.utility(viewer, e);
    if u.is_positive() {
        Closeness::Ratio(s / u)
    } else if s.is_positive() {
        Closeness::Unbounded
    } else {
        Closeness::Ratio(Rational::zero())
    }
}

fn weak_order(
    instance: &Instance,
    guess: &BranchGuess,
    e: EdgeId,
    holder: AgentId,
    agents: &[AgentId],
    point: &[Rational],
) -> WeakOrder {
    let mut keyed: Vec<(Closeness, AgentId)> = agents
        .iter()
        .map(|&a| (closeness(instance, guess, e, holder, a, point), a))
        .collect();
    keyed.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
    let mut out: WeakOrder = Vec::new();
    let mut last: Option<Closeness> = None;
    for (k, a) in keyed {
        if last.as_ref() == Some(&k) {
            out.last_mut().expect("class exists").push(a);
        } else {
            out.push(vec![a]);
            last = Some(k);
        }
    }
    out
}

/// The ordering of all agents for every edge and end holder at the witness
/// point. Agents valuing neither count as ratio 0.
pub fn portfolio_from_witness(
    instance: &Instance,
    guess: &BranchGuess,
    witness: &CellWitness,
) -> BTreeMap<(EdgeId, AgentId), WeakOrder> {
    let agents: Vec<AgentId> = instance.agent_ids().collect();
    let mut out = BTreeMap::new();
    for e in instance.graph().edge_ids() {
        for &a in &guess.a_v {
            out.insert((e, a), weak_order(instance, guess, e, a, &agents, &witness.point));
        }
    }
    out
}

/// Candidates `a'` with `S_a'(y) u_c(e) <= S_c(y) u_a'(e)`: they envy
/// `holder` at most as much as `critical` does at `point`.
pub(super) fn admitted(
    instance: &Instance,
    guess: &BranchGuess,
    e: EdgeId,
    holder: AgentId,
    critical: AgentId,
    point: &[Rational],
) -> BTreeSet<AgentId> {
    let sc = share_form(instance, guess, holder, critical).eval(point);
    let uc = instance.utility(critical, e);
    candidates(instance, guess, e)
        .into_iter()
        .filter(|&a| {
            let sa = share_form(instance, guess, holder, a).eval(point);
            sa * uc <= &sc * instance.utility(a, e)
        })
        .collect()
}

/// One vertex-critical choice for an `(edge, holder)` pair.
#[derive(Debug, Clone)]
pub(super) struct VertexOption {
    pub critical: AgentId,
    pub point: Vec<Rational>,
}

/// Distinct (critical agent, admitted set) choices over all cells of the
/// candidates' comparison forms for this pair.
pub(super) fn vertex_options(
    instance: &Instance,
    guess: &BranchGuess,
    region: &LinearSystem,
    e: EdgeId,
    holder: AgentId,
) -> Vec<VertexOption> {
    let cands = candidates(instance, guess, e);
    let mut forms = Vec::new();
    for (i, &a1) in cands.iter().enumerate() {
        for &a2 in &cands[i + 1..] {
            forms.push(comparison_form(instance, guess, e, holder, a1, a2));
        }
    }
    let Ok(cells) = arrangement::enumerate_sign_conditions(&forms, region) else {
        return Vec::new();
    };
    let mut seen: BTreeSet<(AgentId, BTreeSet<AgentId>)> = BTreeSet::new();
    let mut out = Vec::new();
    for cell in cells {
        for &c in &cands {
            let set = admitted(instance, guess, e, holder, c, &cell.point);
            if seen.insert((c, set)) {
                out.push(VertexOption {
                    critical: c,
                    point: cell.point.clone(),
                });
            }
        }
    }
    out
}

/// Checks the guesses made so far for agents inside `e`: at most `n_e` of
/// them, none guessed on another edge, pair-critical agents minimal in
/// ratio, and every guessed agent admitted by each vertex-critical choice.
pub(super) fn consistent_on(instance: &Instance, guess: &BranchGuess, e: EdgeId) -> bool {
    let here = guess.guessed_on(e);
    if here.len() > guess.n[e.0] {
        return false;
    }
    let elsewhere = guess
        .pair_critical
        .iter()
        .filter(|((x, _), _)| *x != e)
        .map(|(_, a)| a)
        .chain(guess.vertex_critical.iter().filter(|((x, _), _)| *x != e).map(|(_, a)| a));
    for a in elsewhere {
        if here.contains(a) {
            return false;
        }
    }
    for (&(x, f), &c) in &guess.pair_critical {
        if x != e {
            continue;
        }
        for &g in &here {
            // u_g(e) / u_g(f) >= u_c(e) / u_c(f), cross-multiplied.
            let lhs = instance.utility(g, e) * instance.utility(c, f);
            let rhs = instance.utility(c, e) * instance.utility(g, f);
            if lhs < rhs {
                return false;
            }
        }
    }
    for (&(x, holder), &c) in &guess.vertex_critical {
        if x != e {
            continue;
        }
        let point = &guess.sample_points[&(x, holder)];
        let ok = admitted(instance, guess, e, holder, c, point);
        if here.iter().any(|g| !ok.contains(g)) {
            return false;
        }
    }
    true
}

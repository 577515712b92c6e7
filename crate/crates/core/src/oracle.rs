//! Brute-force ground truth for small instances.
//!
//! Enumerates who holds each edge end (each vertex, for VDGC) and, for every
//! remaining agent, the edge it sits inside. Pieces inside one edge all have
//! the same length in any envy-free solution, so each branch is a small LP
//! with explicit envy constraints between every pair of agents.

use crate::lp::{self, Feasibility, LinearForm, LinearSystem, Var};
use crate::model::{AgentId, Assignment, Instance, Variant};
use crate::rational::{self, Rational};
use crate::solve::Verdict;
use crate::verify::verify_assignment;
use rayon::prelude::*;

pub const ORACLE_MAX_EDGES: usize = 4;
pub const ORACLE_MAX_AGENTS: usize = 4;

/// A warning when the instance is beyond the sizes the oracle is meant for.
pub fn scale_warning(instance: &Instance) -> Option<String> {
    let k = instance.graph().num_edges();
    let n = instance.num_agents();
    (k > ORACLE_MAX_EDGES || n > ORACLE_MAX_AGENTS).then(|| {
        format!(
            "oracle is intended for at most {ORACLE_MAX_EDGES} edges and {ORACLE_MAX_AGENTS} agents (got {k} and {n}); this may take very long"
        )
    })
}

/// Decides the instance by exhaustive branching. Returns a verified witness
/// on Yes.
pub fn solve_explicit_oracle(instance: &Instance) -> Verdict {
    let g = instance.graph();
    let n = instance.num_agents() as u64;
    let slots = match instance.variant() {
        Variant::Vdgc => g.num_vertices(),
        Variant::Gc => 2 * g.num_edges(),
    };
    let total = n.checked_pow(slots as u32).expect("oracle branch count overflows");
    let found = (0..total)
        .into_par_iter()
        .find_map_first(|code| try_end_map(instance, &decode(code, n, slots)));
    match found {
        Some(a) => Verdict::Yes(a),
        None => Verdict::No,
    }
}

fn decode(mut code: u64, base: u64, len: usize) -> Vec<usize> {
    let mut digits = vec![0; len];
    for d in digits.iter_mut().rev() {
        *d = (code % base) as usize;
        code /= base;
    }
    digits
}

/// `ends[2e + i]` is the agent holding end `i` of edge `e`.
fn try_end_map(instance: &Instance, slots: &[usize]) -> Option<Assignment> {
    let g = instance.graph();
    let k = g.num_edges();
    let ends: Vec<usize> = match instance.variant() {
        Variant::Vdgc => (0..k)
            .flat_map(|e| {
                let edge = &g.edges()[e];
                [slots[edge.low.0], slots[edge.high.0]]
            })
            .collect(),
        Variant::Gc => slots.to_vec(),
    };
    let n = instance.num_agents();
    let mut holds_end = vec![false; n];
    for &a in &ends {
        holds_end[a] = true;
    }
    let rest: Vec<usize> = (0..n).filter(|&a| !holds_end[a]).collect();
    let combos = (k as u64).pow(rest.len() as u32);
    for code in 0..combos {
        let inside_edge = decode(code, k as u64, rest.len());
        let mut inside: Vec<Vec<usize>> = vec![Vec::new(); k];
        for (&a, &e) in rest.iter().zip(&inside_edge) {
            inside[e].push(a);
        }
        if !ends_connected(instance, &ends, &inside) {
            continue;
        }
        if let Some(asg) = solve_branch(instance, &ends, &inside) {
            return Some(asg);
        }
    }
    None
}

/// Every agent's ends lie in one component of the edges it holds entirely.
fn ends_connected(instance: &Instance, ends: &[usize], inside: &[Vec<usize>]) -> bool {
    let g = instance.graph();
    let nv = g.num_vertices();
    for a in 0..instance.num_agents() {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nv];
        let mut touched = Vec::new();
        for (e, edge) in g.edges().iter().enumerate() {
            let lo = ends[2 * e] == a;
            let hi = ends[2 * e + 1] == a;
            if lo {
                touched.push(edge.low.0);
            }
            if hi {
                touched.push(edge.high.0);
            }
            if lo && hi && inside[e].is_empty() {
                adj[edge.low.0].push(edge.high.0);
                adj[edge.high.0].push(edge.low.0);
            }
        }
        let Some(&start) = touched.first() else {
            continue;
        };
        let mut seen = vec![false; nv];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if touched.iter().any(|&v| !seen[v]) {
            return false;
        }
    }
    true
}

fn solve_branch(instance: &Instance, ends: &[usize], inside: &[Vec<usize>]) -> Option<Assignment> {
    let g = instance.graph();
    let k = g.num_edges();
    let n = instance.num_agents();
    let mut sys = LinearSystem::new();
    // Per edge: low end length, inside length, high end length.
    let vars: Vec<[Var; 3]> = g
        .edges()
        .iter()
        .map(|e| {
            [
                sys.add_var(format!("lo_{}", e.name)),
                sys.add_var(format!("mid_{}", e.name)),
                sys.add_var(format!("hi_{}", e.name)),
            ]
        })
        .collect();
    for (e, v) in vars.iter().enumerate() {
        for &x in v {
            sys.add_ge(LinearForm::var(x));
        }
        let mut sum = LinearForm::constant(rational::int(-1));
        sum.add_term(v[0], &rational::one());
        sum.add_term(v[1], &rational::int(inside[e].len() as i64));
        sum.add_term(v[2], &rational::one());
        sys.add_eq(sum);
    }
    // Lengths making up each agent's piece.
    let mut parts: Vec<Vec<(usize, Var)>> = vec![Vec::new(); n];
    for e in 0..k {
        parts[ends[2 * e]].push((e, vars[e][0]));
        parts[ends[2 * e + 1]].push((e, vars[e][2]));
        for &a in &inside[e] {
            parts[a].push((e, vars[e][1]));
        }
    }
    let value = |viewer: usize, owner: usize| {
        let mut f = LinearForm::zero();
        for &(e, x) in &parts[owner] {
            f.add_term(x, instance.utility(AgentId(viewer), crate::graph::EdgeId(e)));
        }
        f
    };
    for a in 0..n {
        let own = value(a, a);
        for b in 0..n {
            if a != b {
                sys.add_ge(own.minus(&value(a, b)));
            }
        }
    }
    let Feasibility::Feasible(x) = lp::lp_feasible(&sys) else {
        return None;
    };
    let mut asg = Assignment::empty(n);
    for e in 0..k {
        let len = |i: usize| -> Rational { x[vars[e][i].0].clone() };
        let mut segments = vec![(AgentId(ends[2 * e]), len(0))];
        segments.extend(inside[e].iter().map(|&a| (AgentId(a), len(1))));
        segments.push((AgentId(ends[2 * e + 1]), len(2)));
        asg.push_edge_layout(crate::graph::EdgeId(e), &segments);
    }
    let report = verify_assignment(instance, &asg);
    debug_assert!(report.is_valid(), "oracle produced an invalid witness: {:?}", report.failures);
    report.is_valid().then_some(asg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_star_from_numpart;
    use crate::graph::Graph;
    use crate::model::normalize;
    use crate::rational::{int, ratio};

    fn inst(vertices: &[&str], edges: &[(&str, &str, &str)], rows: &[&[i64]], variant: Variant) -> Instance {
        let g = Graph::new(vertices, edges).unwrap();
        let names = (0..rows.len()).map(|i| format!("a{}", i + 1)).collect();
        let u = rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect();
        normalize(&Instance::new(g, names, u, variant).unwrap()).unwrap()
    }

    #[test]
    fn star_of_three_is_no() {
        let star = gen_star_from_numpart(&[1, 1, 1]).unwrap();
        assert_eq!(solve_explicit_oracle(&star), Verdict::No);
        assert_eq!(solve_explicit_oracle(&star.with_variant(Variant::Vdgc)), Verdict::No);
    }

    #[test]
    fn single_edge_thirds() {
        let i = inst(&["u", "v"], &[("e", "u", "v")], &[&[1], &[1], &[1]], Variant::Gc);
        let Verdict::Yes(a) = solve_explicit_oracle(&i) else {
            panic!("expected Yes");
        };
        for p in &a.pieces {
            let len: Rational = p.edge_pieces.iter().map(|ep| ep.length()).sum();
            assert_eq!(len, ratio(1, 3));
        }
    }

    #[test]
    fn path_with_disjoint_interests() {
        let i = inst(
            &["v1", "v2", "v3"],
            &[("e1", "v1", "v2"), ("e2", "v2", "v3")],
            &[&[1, 0], &[0, 1]],
            Variant::Vdgc,
        );
        assert!(solve_explicit_oracle(&i).is_yes());
    }
}

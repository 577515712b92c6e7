//! Solvers for trees and cycles built on a fixed cut set `F`.
//!
//! Every component of `G - F` that contains an edge goes wholly to one
//! agent (for VDGC isolated vertices too). Each end of a cut edge is held by
//! the agent owning that vertex; at a GC vertex owned by nobody any agent may
//! hold it. Agents with neither a component nor an end sit inside one cut
//! edge. A small LP then fixes the lengths.

use crate::graph::{Dsu, EdgeId, End, VertexId};
use crate::lp::{self, Feasibility, LinearForm, LinearSystem, Var};
use crate::model::{AgentId, Assignment, Instance, Variant};
use crate::rational::{self, Rational};
use crate::solve::Verdict;
use crate::verify::verify_assignment;
use rayon::prelude::*;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CutSetError {
    #[error("graph is not a tree")]
    NotTree,
    #[error("graph is not a cycle")]
    NotCycle,
    #[error("graph is neither a tree nor a cycle")]
    NotTreeOrCycle,
    #[error("solver requires variant {0}")]
    WrongVariant(Variant),
}

/// Decides whether an envy-free assignment exists in which each component of
/// `G - cut` belongs to a single agent.
pub fn solve_with_cut_set(instance: &Instance, cut: &[EdgeId]) -> Result<Verdict, CutSetError> {
    let g = instance.graph();
    if !g.is_tree() && !g.is_cycle() {
        return Err(CutSetError::NotTreeOrCycle);
    }
    Ok(to_verdict(search_cut(instance, cut)))
}

/// Trees under VDGC: some cut of at most `|A| - 1` edges leaves components
/// that each belong to one agent.
pub fn solve_tree_vdgc(instance: &Instance) -> Result<Verdict, CutSetError> {
    if !instance.graph().is_tree() {
        return Err(CutSetError::NotTree);
    }
    if instance.variant() != Variant::Vdgc {
        return Err(CutSetError::WrongVariant(Variant::Vdgc));
    }
    let k = instance.graph().num_edges();
    let cuts = subsets_up_to(k, instance.num_agents().saturating_sub(1));
    Ok(first_accepting(instance, &cuts))
}

/// Trees under GC: at most `|A|` vertices and edges are shared between
/// agents. Cutting the shared edges and every edge at a shared vertex leaves
/// single-owner components.
pub fn solve_tree_gc_bounded_degree(instance: &Instance) -> Result<Verdict, CutSetError> {
    let g = instance.graph();
    if !g.is_tree() {
        return Err(CutSetError::NotTree);
    }
    if instance.variant() != Variant::Gc {
        return Err(CutSetError::WrongVariant(Variant::Gc));
    }
    let nv = g.num_vertices();
    let k = g.num_edges();
    // Items 0..nv are vertices, nv.. are edges.
    let mut cuts: BTreeSet<Vec<EdgeId>> = BTreeSet::new();
    for items in subsets_up_to(nv + k, instance.num_agents()) {
        let mut cut = BTreeSet::new();
        for item in items {
            if item.0 < nv {
                cut.extend(g.incident(VertexId(item.0)).iter().copied());
            } else {
                cut.insert(EdgeId(item.0 - nv));
            }
        }
        cuts.insert(cut.into_iter().collect());
    }
    let mut cuts: Vec<Vec<EdgeId>> = cuts.into_iter().collect();
    cuts.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(first_accepting(instance, &cuts))
}

/// Cycles: at most `|A|` edges are shared between agents.
pub fn solve_cycle(instance: &Instance) -> Result<Verdict, CutSetError> {
    if !instance.graph().is_cycle() {
        return Err(CutSetError::NotCycle);
    }
    let k = instance.graph().num_edges();
    let cuts = subsets_up_to(k, instance.num_agents());
    Ok(first_accepting(instance, &cuts))
}

fn to_verdict(found: Option<Assignment>) -> Verdict {
    match found {
        Some(a) => Verdict::Yes(a),
        None => Verdict::No,
    }
}

fn first_accepting(instance: &Instance, cuts: &[Vec<EdgeId>]) -> Verdict {
    to_verdict(cuts.par_iter().find_map_first(|cut| search_cut(instance, cut)))
}

/// All subsets of `0..n` with at most `max` elements, by size then
/// lexicographically.
fn subsets_up_to(n: usize, max: usize) -> Vec<Vec<EdgeId>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max.min(n) {
        let mut next = Vec::new();
        for s in &layer {
            let start = s.last().map_or(0, |&x| x + 1);
            for x in start..n {
                let mut t = s.clone();
                t.push(x);
                next.push(t);
            }
        }
        out.extend(next.iter().map(|s| s.iter().map(|&x| EdgeId(x)).collect()));
        layer = next;
    }
    out
}

fn odometer(base: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = if len == 0 { 1 } else if base == 0 { 0 } else { base.pow(len as u32) };
    (0..total).map(move |mut code| {
        let mut digits = vec![0; len];
        for d in digits.iter_mut().rev() {
            *d = code % base;
            code /= base;
        }
        digits
    })
}

struct Layout<'a> {
    instance: &'a Instance,
    cut: &'a [EdgeId],
    comps: Vec<Vec<VertexId>>,
    comp_edges: Vec<Vec<EdgeId>>,
    comp_of: Vec<usize>,
    /// Components that must go to exactly one agent.
    owned: Vec<usize>,
}

/// One branch: component owners, cut-edge end holders, inside agents.
struct Branch {
    comp_owner: Vec<Option<usize>>,
    /// `holders[i]` for cut edge `i`: agent at the low and the high end.
    holders: Vec<[usize; 2]>,
    /// `inside[i]` for cut edge `i`, ascending agent order.
    inside: Vec<Vec<usize>>,
}

fn search_cut(instance: &Instance, cut: &[EdgeId]) -> Option<Assignment> {
    let g = instance.graph();
    let n = instance.num_agents();
    let in_cut: BTreeSet<EdgeId> = cut.iter().copied().collect();
    let kept: Vec<EdgeId> = g.edge_ids().filter(|e| !in_cut.contains(e)).collect();
    let comps = g.vertex_components(&kept);
    let mut comp_of = vec![0; g.num_vertices()];
    for (i, c) in comps.iter().enumerate() {
        for v in c {
            comp_of[v.0] = i;
        }
    }
    let mut comp_edges = vec![Vec::new(); comps.len()];
    for &e in &kept {
        comp_edges[comp_of[g.edge(e).low.0]].push(e);
    }
    let vdgc = instance.variant() == Variant::Vdgc;
    let owned: Vec<usize> = (0..comps.len()).filter(|&c| vdgc || !comp_edges[c].is_empty()).collect();
    let layout = Layout {
        instance,
        cut,
        comps,
        comp_edges,
        comp_of,
        owned,
    };

    for owners in odometer(n, layout.owned.len()) {
        let mut comp_owner = vec![None; layout.comps.len()];
        for (&c, &a) in layout.owned.iter().zip(&owners) {
            comp_owner[c] = Some(a);
        }
        // Ends at vertices nobody owns.
        let mut free: Vec<(usize, End)> = Vec::new();
        for (i, &e) in cut.iter().enumerate() {
            for end in End::BOTH {
                if comp_owner[layout.comp_of[g.edge(e).endpoint(end).0]].is_none() {
                    free.push((i, end));
                }
            }
        }
        for free_holders in odometer(n, free.len()) {
            let mut holders: Vec<[usize; 2]> = cut
                .iter()
                .map(|&e| {
                    let edge = g.edge(e);
                    let at = |v: VertexId| comp_owner[layout.comp_of[v.0]].unwrap_or(usize::MAX);
                    [at(edge.low), at(edge.high)]
                })
                .collect();
            for (&(i, end), &a) in free.iter().zip(&free_holders) {
                holders[i][end.index()] = a;
            }
            let mut busy = vec![false; n];
            for a in comp_owner.iter().flatten() {
                busy[*a] = true;
            }
            for h in &holders {
                busy[h[0]] = true;
                busy[h[1]] = true;
            }
            let idle: Vec<usize> = (0..n).filter(|&a| !busy[a]).collect();
            for placement in odometer(cut.len(), idle.len()) {
                let mut inside = vec![Vec::new(); cut.len()];
                for (&a, &i) in idle.iter().zip(&placement) {
                    inside[i].push(a);
                }
                let branch = Branch {
                    comp_owner: comp_owner.clone(),
                    holders: holders.clone(),
                    inside,
                };
                if !layout.connected(&branch) {
                    continue;
                }
                if let Some(asg) = layout.solve(&branch) {
                    return Some(asg);
                }
            }
        }
    }
    None
}

impl Layout<'_> {
    /// Each agent's components and held ends are linked through edges it
    /// holds entirely.
    fn connected(&self, b: &Branch) -> bool {
        let g = self.instance.graph();
        for a in 0..self.instance.num_agents() {
            let mut dsu = Dsu::new(g.num_vertices());
            let mut touched: Vec<usize> = Vec::new();
            for (c, owner) in b.comp_owner.iter().enumerate() {
                if *owner == Some(a) {
                    for e in &self.comp_edges[c] {
                        dsu.union(g.edge(*e).low.0, g.edge(*e).high.0);
                    }
                    touched.push(self.comps[c][0].0);
                }
            }
            for (i, &e) in self.cut.iter().enumerate() {
                let edge = g.edge(e);
                let [lo, hi] = b.holders[i];
                if lo == a {
                    touched.push(edge.low.0);
                }
                if hi == a {
                    touched.push(edge.high.0);
                }
                if lo == a && hi == a && b.inside[i].is_empty() {
                    dsu.union(edge.low.0, edge.high.0);
                }
            }
            if let Some((&first, rest)) = touched.split_first() {
                let root = dsu.find(first);
                if rest.iter().any(|&v| dsu.find(v) != root) {
                    return false;
                }
            }
        }
        true
    }

    fn solve(&self, b: &Branch) -> Option<Assignment> {
        let inst = self.instance;
        let g = inst.graph();
        let n = inst.num_agents();
        let mut sys = LinearSystem::new();
        // Per cut edge: low holder, high holder, then one variable per inside agent.
        let mut ends: Vec<[Var; 2]> = Vec::new();
        let mut inner: Vec<Vec<Var>> = Vec::new();
        for (i, &e) in self.cut.iter().enumerate() {
            let name = &g.edge(e).name;
            let lo = sys.add_var(format!("{name}_lo"));
            let hi = sys.add_var(format!("{name}_hi"));
            let mids: Vec<Var> = b.inside[i]
                .iter()
                .map(|&a| sys.add_var(format!("{name}_{}", inst.agent_name(AgentId(a)))))
                .collect();
            let mut sum = LinearForm::constant(rational::int(-1));
            for &v in [lo, hi].iter().chain(&mids) {
                sys.add_ge(LinearForm::var(v));
                sum.add_term(v, &rational::one());
            }
            sys.add_eq(sum);
            ends.push([lo, hi]);
            inner.push(mids);
        }
        let value = |viewer: usize, owner: usize| {
            let viewer = AgentId(viewer);
            let mut f = LinearForm::zero();
            for (c, o) in b.comp_owner.iter().enumerate() {
                if *o == Some(owner) {
                    for &e in &self.comp_edges[c] {
                        f.add_constant(inst.utility(viewer, e));
                    }
                }
            }
            for (i, &e) in self.cut.iter().enumerate() {
                let u = inst.utility(viewer, e);
                for side in 0..2 {
                    if b.holders[i][side] == owner {
                        f.add_term(ends[i][side], u);
                    }
                }
                if let Some(j) = b.inside[i].iter().position(|&a| a == owner) {
                    f.add_term(inner[i][j], u);
                }
            }
            f
        };
        for a in 0..n {
            let own = value(a, a);
            for other in 0..n {
                if other != a {
                    sys.add_ge(own.minus(&value(a, other)));
                }
            }
        }
        let Feasibility::Feasible(x) = lp::lp_feasible(&sys) else {
            return None;
        };
        let mut asg = Assignment::empty(n);
        for (c, owner) in b.comp_owner.iter().enumerate() {
            if let Some(o) = owner {
                for &e in &self.comp_edges[c] {
                    asg.push_edge_layout(e, &[(AgentId(*o), rational::one())]);
                }
            }
        }
        for (i, &e) in self.cut.iter().enumerate() {
            let len = |v: Var| -> Rational { x[v.0].clone() };
            let mut segments = vec![(AgentId(b.holders[i][0]), len(ends[i][0]))];
            for (j, &a) in b.inside[i].iter().enumerate() {
                segments.push((AgentId(a), len(inner[i][j])));
            }
            segments.push((AgentId(b.holders[i][1]), len(ends[i][1])));
            asg.push_edge_layout(e, &segments);
        }
        let report = verify_assignment(inst, &asg);
        debug_assert!(report.is_valid(), "cut-set witness rejected: {:?}", report.failures);
        report.is_valid().then_some(asg)
    }
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

    fn path3(rows: &[&[i64]], variant: Variant) -> Instance {
        inst(&["v1", "v2", "v3"], &[("e1", "v1", "v2"), ("e2", "v2", "v3")], rows, variant)
    }

    #[test]
    fn path_with_one_cut_edge() {
        let i = path3(&[&[1, 0], &[0, 1]], Variant::Gc);
        assert!(solve_with_cut_set(&i, &[EdgeId(1)]).unwrap().is_yes());
    }

    #[test]
    fn star_is_no_for_small_cuts() {
        let star = gen_star_from_numpart(&[1, 1, 1]).unwrap();
        assert_eq!(solve_with_cut_set(&star, &[]).unwrap(), Verdict::No);
        for e in 0..3 {
            assert_eq!(solve_with_cut_set(&star, &[EdgeId(e)]).unwrap(), Verdict::No);
        }
        assert_eq!(solve_tree_gc_bounded_degree(&star).unwrap(), Verdict::No);
        assert_eq!(solve_tree_vdgc(&star.with_variant(Variant::Vdgc)).unwrap(), Verdict::No);
    }

    #[test]
    fn single_edge_halves() {
        let i = inst(&["u", "v"], &[("e", "u", "v")], &[&[1], &[1]], Variant::Gc);
        let Verdict::Yes(a) = solve_with_cut_set(&i, &[EdgeId(0)]).unwrap() else {
            panic!("expected Yes");
        };
        for p in &a.pieces {
            let len: Rational = p.edge_pieces.iter().map(|ep| ep.length()).sum();
            assert_eq!(len, ratio(1, 2));
        }
        let three = inst(&["u", "v"], &[("e", "u", "v")], &[&[1], &[1], &[1]], Variant::Gc);
        assert!(solve_tree_gc_bounded_degree(&three).unwrap().is_yes());
    }

    #[test]
    fn tree_vdgc_examples() {
        assert!(solve_tree_vdgc(&path3(&[&[1, 0], &[0, 1]], Variant::Vdgc)).unwrap().is_yes());
        let star = inst(
            &["c", "l1", "l2", "l3"],
            &[("e1", "c", "l1"), ("e2", "c", "l2"), ("e3", "c", "l3")],
            &[&[1, 1, 0], &[0, 0, 1]],
            Variant::Vdgc,
        );
        assert!(solve_tree_vdgc(&star).unwrap().is_yes());
        assert_eq!(
            solve_tree_vdgc(&star.with_variant(Variant::Gc)),
            Err(CutSetError::WrongVariant(Variant::Vdgc))
        );
    }

    #[test]
    fn tree_gc_path_uniform() {
        assert!(solve_tree_gc_bounded_degree(&path3(&[&[1, 1], &[1, 1]], Variant::Gc))
            .unwrap()
            .is_yes());
    }

    #[test]
    fn cycle_examples() {
        let tri = |rows: &[&[i64]], v| {
            inst(&["a", "b", "c"], &[("e1", "a", "b"), ("e2", "b", "c"), ("e3", "a", "c")], rows, v)
        };
        assert!(solve_cycle(&tri(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], Variant::Vdgc)).unwrap().is_yes());
        assert!(solve_cycle(&tri(&[&[1, 1, 1], &[1, 1, 1]], Variant::Gc)).unwrap().is_yes());
        assert!(solve_cycle(&tri(&[&[1, 1, 1], &[1, 1, 1]], Variant::Vdgc)).unwrap().is_yes());
        assert!(solve_cycle(&tri(&[&[1, 1, 1]], Variant::Gc)).unwrap().is_yes());
        assert_eq!(
            solve_cycle(&path3(&[&[1, 1]], Variant::Gc)),
            Err(CutSetError::NotCycle)
        );
    }
}

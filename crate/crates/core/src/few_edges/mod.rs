//! Exact solver for graphs with few edges.
//!
//! A branch guesses who holds each edge end and how many agents sit fully
//! inside each edge. Envy among the inside agents is controlled through a
//! few envy-critical agents, guessed per edge pair and per (edge, end-holding
//! agent). An LP fixes the lengths and a bipartite matching places the
//! agents that were not guessed.

mod branch;
mod extract;
mod system;

pub use branch::{
    build_ordering_forms, enumerate_initial_branches, portfolio_from_witness, sample_region, WeakOrder,
};
pub use extract::{complete_assignment, extract_assignment, ExtractError, Extraction};
pub use system::build_lp;

use crate::graph::{EdgeId, End};
use crate::lp::{self, Feasibility};
use crate::model::{AgentId, Assignment, Instance};
use crate::rational::Rational;
use crate::solve::Verdict;
use crate::verify::verify_assignment;
use branch::VertexOption;
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};

/// One node of the search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchGuess {
    /// `endpoint_agent[e][end]` holds the piece of `e` touching that end.
    pub endpoint_agent: Vec<[AgentId; 2]>,
    pub a_v: BTreeSet<AgentId>,
    /// Number of agents fully inside each edge.
    pub n: Vec<usize>,
    /// Agent inside `e` with the smallest `u(e) / u(f)`, per ordered pair `(e, f)`.
    pub pair_critical: BTreeMap<(EdgeId, EdgeId), AgentId>,
    /// Agent inside `e` that envies the end holder `a` the most, per `(e, a)`.
    pub vertex_critical: BTreeMap<(EdgeId, AgentId), AgentId>,
    /// End lengths at which each vertex-critical choice was made, indexed
    /// like the variables of [`sample_region`].
    pub sample_points: BTreeMap<(EdgeId, AgentId), Vec<Rational>>,
}

impl BranchGuess {
    pub fn holder(&self, e: EdgeId, end: End) -> AgentId {
        self.endpoint_agent[e.0][end.index()]
    }

    /// Edge ends held by `a`.
    pub fn ends_of(&self, a: AgentId) -> Vec<(EdgeId, End)> {
        let mut out = Vec::new();
        for (e, pair) in self.endpoint_agent.iter().enumerate() {
            for end in End::BOTH {
                if pair[end.index()] == a {
                    out.push((EdgeId(e), end));
                }
            }
        }
        out
    }

    /// Agents guessed to sit inside `e`, ascending.
    pub fn guessed_on(&self, e: EdgeId) -> Vec<AgentId> {
        let set: BTreeSet<AgentId> = self
            .pair_critical
            .iter()
            .filter(|((x, _), _)| *x == e)
            .map(|(_, a)| *a)
            .chain(self.vertex_critical.iter().filter(|((x, _), _)| *x == e).map(|(_, a)| *a))
            .collect();
        set.into_iter().collect()
    }
}

/// Lengths read off an LP solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthSolution {
    pub x0: Vec<Rational>,
    pub delta: Vec<Rational>,
    pub x1: Vec<Rational>,
}

impl LengthSolution {
    /// Splits a witness of [`build_lp`] (three variables per edge).
    pub fn from_lp(witness: &[Rational]) -> LengthSolution {
        let k = witness.len() / 3;
        let pick = |i: usize| (0..k).map(|e| witness[3 * e + i].clone()).collect();
        LengthSolution {
            x0: pick(0),
            delta: pick(1),
            x1: pick(2),
        }
    }

    pub fn to_lp(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(3 * self.x0.len());
        for e in 0..self.x0.len() {
            out.extend([self.x0[e].clone(), self.delta[e].clone(), self.x1[e].clone()]);
        }
        out
    }

    pub fn end(&self, e: EdgeId, end: End) -> &Rational {
        match end {
            End::Low => &self.x0[e.0],
            End::High => &self.x1[e.0],
        }
    }
}

/// Decides the instance. On Yes the witness has passed verification.
pub fn solve_few_edges(instance: &Instance) -> Verdict {
    let total = branch::endpoint_code_count(instance);
    let found = (0..total).into_par_iter().find_map_first(|code| {
        branch::branches_for_code(instance, code)
            .into_iter()
            .find_map(|guess| solve_initial_branch(instance, guess))
    });
    match found {
        Some(a) => Verdict::Yes(a),
        None => Verdict::No,
    }
}

/// Slots still to be guessed below an initial branch.
struct Search<'a> {
    instance: &'a Instance,
    pairs: Vec<((EdgeId, EdgeId), Vec<AgentId>)>,
    vertices: Vec<((EdgeId, AgentId), Vec<VertexOption>)>,
}

fn solve_initial_branch(instance: &Instance, guess: BranchGuess) -> Option<Assignment> {
    let busy: Vec<EdgeId> = instance.graph().edge_ids().filter(|e| guess.n[e.0] > 0).collect();
    let candidates: Vec<Vec<AgentId>> = instance
        .graph()
        .edge_ids()
        .map(|e| branch::candidates(instance, &guess, e))
        .collect();
    if busy.iter().any(|e| candidates[e.0].is_empty()) {
        return None;
    }
    // Without critical agents the system only has the length and end-holder
    // envy constraints; if that fails every refinement fails.
    if !lp::lp_feasible(&build_lp(instance, &guess)).is_feasible() {
        return None;
    }
    let mut pairs = Vec::new();
    for &e in &busy {
        for &f in &busy {
            if e != f {
                pairs.push(((e, f), candidates[e.0].clone()));
            }
        }
    }
    let region = sample_region(instance, &guess);
    let mut vertices = Vec::new();
    for &e in &busy {
        for &a in &guess.a_v {
            let options = branch::vertex_options(instance, &guess, &region, e, a);
            if options.is_empty() {
                return None;
            }
            vertices.push(((e, a), options));
        }
    }
    let search = Search {
        instance,
        pairs,
        vertices,
    };
    let mut guess = guess;
    search.descend(&mut guess, 0)
}

impl Search<'_> {
    fn descend(&self, guess: &mut BranchGuess, depth: usize) -> Option<Assignment> {
        if depth < self.pairs.len() {
            let (key, cands) = &self.pairs[depth];
            for &c in cands {
                guess.pair_critical.insert(*key, c);
                if branch::consistent_on(self.instance, guess, key.0) {
                    if let Some(a) = self.descend(guess, depth + 1) {
                        return Some(a);
                    }
                }
            }
            guess.pair_critical.remove(key);
            return None;
        }
        let i = depth - self.pairs.len();
        if i < self.vertices.len() {
            let (key, options) = &self.vertices[i];
            for opt in options {
                guess.vertex_critical.insert(*key, opt.critical);
                guess.sample_points.insert(*key, opt.point.clone());
                if branch::consistent_on(self.instance, guess, key.0) {
                    if let Some(a) = self.descend(guess, depth + 1) {
                        return Some(a);
                    }
                }
            }
            guess.vertex_critical.remove(key);
            guess.sample_points.remove(key);
            return None;
        }
        self.finish(guess)
    }

    fn finish(&self, guess: &BranchGuess) -> Option<Assignment> {
        let Feasibility::Feasible(w) = lp::lp_feasible(&build_lp(self.instance, guess)) else {
            return None;
        };
        let lengths = LengthSolution::from_lp(&w);
        let extraction = extract_assignment(self.instance, guess, &lengths).ok()?;
        let asg = complete_assignment(self.instance, &extraction)?;
        let report = verify_assignment(self.instance, &asg);
        debug_assert!(report.is_valid(), "few-edges witness rejected: {:?}", report.failures);
        report.is_valid().then_some(asg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_star_from_numpart;
    use crate::graph::Graph;
    use crate::model::{normalize, Variant};
    use crate::rational::int;

    fn inst(vertices: &[&str], edges: &[(&str, &str, &str)], rows: &[&[i64]], variant: Variant) -> Instance {
        let g = Graph::new(vertices, edges).unwrap();
        let names = (0..rows.len()).map(|i| format!("a{}", i + 1)).collect();
        let u = rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect();
        normalize(&Instance::new(g, names, u, variant).unwrap()).unwrap()
    }

    #[test]
    fn star_is_no() {
        let star = gen_star_from_numpart(&[1, 1, 1]).unwrap();
        assert_eq!(solve_few_edges(&star), Verdict::No);
        assert_eq!(solve_few_edges(&star.with_variant(Variant::Vdgc)), Verdict::No);
    }

    #[test]
    fn path_disjoint_interests() {
        let p = inst(
            &["v1", "v2", "v3"],
            &[("e1", "v1", "v2"), ("e2", "v2", "v3")],
            &[&[1, 0], &[0, 1]],
            Variant::Gc,
        );
        assert!(solve_few_edges(&p).is_yes());
    }

    #[test]
    fn triangle_identical() {
        let t = inst(
            &["a", "b", "c"],
            &[("e1", "a", "b"), ("e2", "b", "c"), ("e3", "a", "c")],
            &[&[1, 1, 1], &[1, 1, 1]],
            Variant::Gc,
        );
        assert!(solve_few_edges(&t).is_yes());
    }

    #[test]
    fn single_edge_many_agents() {
        let e = inst(&["u", "v"], &[("e", "u", "v")], &[&[1], &[1], &[1], &[1]], Variant::Vdgc);
        let Verdict::Yes(a) = solve_few_edges(&e) else {
            panic!("expected Yes");
        };
        for p in &a.pieces {
            let len: Rational = p.edge_pieces.iter().map(|ep| ep.length()).sum();
            assert_eq!(len, crate::rational::ratio(1, 4));
        }
    }
}

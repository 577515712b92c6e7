//! Fixed instances for the solver benchmarks.

use efgc_core::generators::{gen_ladder_tw2, gen_star_from_numpart};
use efgc_core::graph::Graph;
use efgc_core::lp::{LinearForm, Var};
use efgc_core::model::{normalize, Instance, Variant};
use efgc_core::rational::int;

/// K_{1,3} with two identical uniform agents; every solver must say No.
pub fn star3_identical() -> Instance {
    gen_star_from_numpart(&[1, 1, 1]).expect("positive values")
}

fn preference_rows(edges: usize, agents: usize) -> Vec<Vec<efgc_core::Rational>> {
    (0..agents)
        .map(|a| (0..edges).map(|e| int(if e == a % edges { 3 } else { 1 })).collect())
        .collect()
}

fn build(vertices: usize, edges: &[(usize, usize)], agents: usize, variant: Variant) -> Instance {
    let names: Vec<String> = (0..vertices).map(|i| format!("v{i}")).collect();
    let es: Vec<(String, String, String)> = edges
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| (format!("e{i}"), names[a].clone(), names[b].clone()))
        .collect();
    let graph = Graph::new(&names, &es).expect("fixture graphs are valid");
    let agent_names = (0..agents).map(|a| format!("a{a}")).collect();
    let rows = preference_rows(edges.len(), agents);
    normalize(&Instance::new(graph, agent_names, rows, variant).expect("valid")).expect("positive rows")
}

/// A path on `edges` edges where agent `i` prefers edge `i mod edges`.
pub fn path_instance(edges: usize, agents: usize, variant: Variant) -> Instance {
    let es: Vec<(usize, usize)> = (0..edges).map(|i| (i, i + 1)).collect();
    build(edges + 1, &es, agents, variant)
}

/// The same preferences on a cycle of length `len`.
pub fn cycle_instance(len: usize, agents: usize, variant: Variant) -> Instance {
    let es: Vec<(usize, usize)> = (0..len).map(|i| (i, (i + 1) % len)).collect();
    build(len, &es, agents, variant)
}

pub fn ladder(values: &[u64]) -> Instance {
    gen_ladder_tw2(values, Variant::Vdgc).expect("positive values")
}

/// `count` pairwise non-parallel lines `x + (i+1) y = i^2`.
pub fn generic_lines(count: usize) -> Vec<LinearForm> {
    (0..count as i64)
        .map(|i| {
            let mut f = LinearForm::term(Var(0), int(1));
            f.add_term(Var(1), &int(i + 1));
            f.add_constant(&int(-(i * i)));
            f
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_shapes() {
        assert!(path_instance(3, 2, Variant::Gc).graph().is_tree());
        assert!(cycle_instance(4, 3, Variant::Vdgc).graph().is_cycle());
        assert_eq!(ladder(&[1, 2]).graph().num_edges(), 8);
        assert!(star3_identical().is_normalized());
        assert_eq!(generic_lines(4).len(), 4);
    }
}

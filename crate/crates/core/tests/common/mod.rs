#![allow(dead_code)]

use efgc_core::graph::Graph;
use efgc_core::model::{normalize, Instance, Variant};
use efgc_core::rational::{int, Rational};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn build(vertices: usize, edges: &[(usize, usize)]) -> Graph {
    let names: Vec<String> = (1..=vertices).map(|i| format!("v{i}")).collect();
    let es: Vec<(String, String, String)> = edges
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| (format!("e{}", i + 1), names[a].clone(), names[b].clone()))
        .collect();
    Graph::new(&names, &es).expect("generated graphs are valid")
}

pub fn path(edges: usize) -> Graph {
    let es: Vec<(usize, usize)> = (0..edges).map(|i| (i, i + 1)).collect();
    build(edges + 1, &es)
}

pub fn cycle(len: usize) -> Graph {
    let mut es: Vec<(usize, usize)> = (0..len - 1).map(|i| (i, i + 1)).collect();
    es.push((0, len - 1));
    build(len, &es)
}

pub fn star(leaves: usize) -> Graph {
    let es: Vec<(usize, usize)> = (1..=leaves).map(|v| (0, v)).collect();
    build(leaves + 1, &es)
}

/// Agents with one shared random row, the hard case for envy.
pub fn identical_instance(r: &mut impl Rng, graph: Graph, agents: usize, variant: Variant) -> Instance {
    let row: Vec<Rational> = (0..graph.num_edges()).map(|_| int(r.gen_range(1..=3))).collect();
    let names = (1..=agents).map(|i| format!("a{i}")).collect();
    normalize(&Instance::new(graph, names, vec![row; agents], variant).expect("valid instance")).expect("rows are positive")
}

/// Each new vertex hangs off a uniformly chosen earlier one.
pub fn random_tree(r: &mut impl Rng, edges: usize) -> Graph {
    let es: Vec<(usize, usize)> = (1..=edges).map(|v| (r.gen_range(0..v), v)).collect();
    build(edges + 1, &es)
}

/// A random connected graph on at most `max_edges` edges: a tree, a cycle,
/// or a triangle with a pendant edge.
pub fn random_graph(r: &mut impl Rng, max_edges: usize) -> Graph {
    let k = r.gen_range(1..=max_edges);
    match r.gen_range(0..3) {
        1 if k >= 3 => cycle(k),
        2 if k >= 4 => build(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]),
        _ => random_tree(r, k),
    }
}

/// Small integer utilities, every row non-zero, then normalized.
pub fn random_instance(r: &mut impl Rng, graph: Graph, agents: usize, variant: Variant) -> Instance {
    let k = graph.num_edges();
    // Half the time agents share a base row, so envy is hard to avoid.
    let base: Option<Vec<i64>> = r.gen_bool(0.5).then(|| (0..k).map(|_| r.gen_range(0..=3)).collect());
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for _ in 0..agents {
        let mut row: Vec<i64> = match &base {
            Some(b) => b.iter().map(|&x| if r.gen_bool(0.2) { r.gen_range(0..=3) } else { x }).collect(),
            None => (0..k).map(|_| r.gen_range(0..=4)).collect(),
        };
        if row.iter().all(|&x| x == 0) {
            let j = r.gen_range(0..k);
            row[j] = 1;
        }
        rows.push(row.into_iter().map(int).collect());
    }
    let names = (1..=agents).map(|i| format!("a{i}")).collect();
    normalize(&Instance::new(graph, names, rows, variant).expect("valid instance")).expect("rows are non-zero")
}

pub fn random_variant(r: &mut impl Rng) -> Variant {
    if r.gen_bool(0.5) {
        Variant::Gc
    } else {
        Variant::Vdgc
    }
}

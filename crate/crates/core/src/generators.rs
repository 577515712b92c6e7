//! Instance families built from Number Partitioning inputs, the clique
//! blow-up from GC to VDGC, and a subset-sum decision procedure.

use crate::graph::Graph;
use crate::model::{normalize, Instance, Variant};
use crate::rational::{self, Rational};
use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("value list is empty")]
    EmptyInput,
    #[error("values sum to zero")]
    ZeroSum,
    #[error("values must be positive")]
    ZeroValue,
}

fn value(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

fn two_identical_agents(graph: Graph, row: Vec<Rational>, variant: Variant) -> Instance {
    let inst = Instance::new(graph, vec!["a1".into(), "a2".into()], vec![row.clone(), row], variant)
        .expect("generated instances are well formed");
    normalize(&inst).expect("sum checked by caller")
}

fn require_positive(values: &[u64]) -> Result<(), GenError> {
    if values.is_empty() || values.iter().sum::<u64>() == 0 {
        return Err(GenError::ZeroSum);
    }
    if values.contains(&0) {
        return Err(GenError::ZeroValue);
    }
    Ok(())
}

/// Star with center `c` and one leaf edge per value; two agents that both
/// value leaf edge `i` at `values[i]`. Variant GC.
pub fn gen_star_from_numpart(values: &[u64]) -> Result<Instance, GenError> {
    if values.is_empty() {
        return Err(GenError::EmptyInput);
    }
    if values.iter().sum::<u64>() == 0 {
        return Err(GenError::ZeroSum);
    }
    let n = values.len();
    let mut vertices = vec!["c".to_string()];
    vertices.extend((1..=n).map(|i| format!("l{i}")));
    let edges: Vec<(String, String, String)> = (1..=n)
        .map(|i| (format!("e{i}"), "c".to_string(), format!("l{i}")))
        .collect();
    let graph = Graph::new(&vertices, &edges).expect("star is a valid graph");
    let row = values.iter().map(|&v| value(v)).collect();
    Ok(two_identical_agents(graph, row, Variant::Gc))
}

/// Vertices `c1`, `c2` joined to every `l_i`, plus a pendant edge
/// `(l_i, m_i)` per value. Both agents value only the pendant edges.
/// Variant VDGC.
pub fn gen_matching_plus_two(values: &[u64]) -> Result<Instance, GenError> {
    require_positive(values)?;
    let n = values.len();
    let mut vertices = vec!["c1".to_string(), "c2".to_string()];
    for i in 1..=n {
        vertices.push(format!("l{i}"));
        vertices.push(format!("m{i}"));
    }
    let mut edges = Vec::new();
    let mut row = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        let l = format!("l{}", i + 1);
        let m = format!("m{}", i + 1);
        edges.push((format!("c1{l}"), "c1".to_string(), l.clone()));
        row.push(rational::zero());
        edges.push((format!("c2{l}"), "c2".to_string(), l.clone()));
        row.push(rational::zero());
        edges.push((format!("{l}{m}"), l, m));
        row.push(value(v));
    }
    let graph = Graph::new(&vertices, &edges).expect("construction is a valid graph");
    Ok(two_identical_agents(graph, row, Variant::Vdgc))
}

/// Ladder of treewidth 2 and maximum degree 3: for each value a claw
/// `a_i - c_i - b_i` with pendant `(c_i, d_i)` valued at `values[i]`, and
/// rails `(a_i, a_{i+1})`, `(b_i, b_{i+1})`.
pub fn gen_ladder_tw2(values: &[u64], variant: Variant) -> Result<Instance, GenError> {
    require_positive(values)?;
    let n = values.len();
    let mut vertices = Vec::new();
    for i in 1..=n {
        for p in ["a", "b", "c", "d"] {
            vertices.push(format!("{p}{i}"));
        }
    }
    let mut edges = Vec::new();
    let mut row = Vec::new();
    let mut push = |u: String, v: String, w: Rational| {
        edges.push((format!("{u}{v}"), u, v));
        row.push(w);
    };
    for (i, &v) in values.iter().enumerate() {
        let k = i + 1;
        push(format!("a{k}"), format!("c{k}"), rational::zero());
        push(format!("c{k}"), format!("b{k}"), rational::zero());
        push(format!("c{k}"), format!("d{k}"), value(v));
        if k < n {
            push(format!("a{k}"), format!("a{}", k + 1), rational::zero());
            push(format!("b{k}"), format!("b{}", k + 1), rational::zero());
        }
    }
    let graph = Graph::new(&vertices, &edges).expect("construction is a valid graph");
    Ok(two_identical_agents(graph, row, variant))
}

/// Replaces every vertex by a clique on `|E|` fresh vertices. Original edge
/// `j` is reattached to clique vertex `j` at both of its ends; clique edges
/// are worth 0 to everyone. The result is VDGC.
pub fn blowup_gc_to_vdgc(instance: &Instance) -> Instance {
    let g = instance.graph();
    let k = g.num_edges();
    let slot = |v: usize, j: usize| format!("{}#{}", g.vertex_name(crate::graph::VertexId(v)), j + 1);
    let mut vertices = Vec::with_capacity(g.num_vertices() * k);
    for v in 0..g.num_vertices() {
        for j in 0..k {
            vertices.push(slot(v, j));
        }
    }
    let mut edges = Vec::new();
    for (j, e) in g.edges().iter().enumerate() {
        edges.push((e.name.clone(), slot(e.low.0, j), slot(e.high.0, j)));
    }
    for v in 0..g.num_vertices() {
        for i in 0..k {
            for j in i + 1..k {
                edges.push((format!("{}~{}", slot(v, i), slot(v, j)), slot(v, i), slot(v, j)));
            }
        }
    }
    let graph = Graph::new(&vertices, &edges).expect("blow-up of a connected graph is connected");
    let extra = graph.num_edges() - k;
    let utilities = instance
        .utilities()
        .iter()
        .map(|row| {
            let mut r = row.clone();
            r.extend(std::iter::repeat_with(rational::zero).take(extra));
            r
        })
        .collect();
    Instance::new(graph, instance.agent_names().to_vec(), utilities, Variant::Vdgc)
        .expect("utilities carried over unchanged")
}

/// Whether `values` splits into two parts of equal sum.
pub fn numpart_dp(values: &[u64]) -> bool {
    let total: u64 = values.iter().sum();
    if total % 2 == 1 {
        return false;
    }
    let half = (total / 2) as usize;
    let mut reach = vec![false; half + 1];
    reach[0] = true;
    for &v in values {
        let v = v as usize;
        if v > half {
            continue;
        }
        for s in (v..=half).rev() {
            if reach[s - v] {
                reach[s] = true;
            }
        }
    }
    reach[half]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeId;
    use crate::rational::ratio;

    #[test]
    fn numpart_examples() {
        assert!(numpart_dp(&[1, 2, 3]));
        assert!(!numpart_dp(&[1, 1, 3]));
        assert!(numpart_dp(&[]));
        assert!(!numpart_dp(&[3]));
        assert!(numpart_dp(&[0, 0]));
    }

    #[test]
    fn star_shape() {
        let inst = gen_star_from_numpart(&[1, 2, 3]).unwrap();
        assert_eq!(inst.graph().num_vertices(), 4);
        assert_eq!(inst.graph().num_edges(), 3);
        assert_eq!(inst.utilities()[0], vec![ratio(1, 6), ratio(1, 3), ratio(1, 2)]);
        assert_eq!(inst.utilities()[0], inst.utilities()[1]);
        assert_eq!(gen_star_from_numpart(&[]), Err(GenError::EmptyInput));
        assert_eq!(gen_star_from_numpart(&[0]), Err(GenError::ZeroSum));
    }

    #[test]
    fn matching_shape() {
        let inst = gen_matching_plus_two(&[1, 1]).unwrap();
        assert_eq!(inst.graph().num_vertices(), 6);
        assert_eq!(inst.graph().num_edges(), 6);
        assert_eq!(inst.variant(), Variant::Vdgc);
        assert_eq!(gen_matching_plus_two(&[0, 1]), Err(GenError::ZeroValue));
        assert_eq!(gen_matching_plus_two(&[]), Err(GenError::ZeroSum));
    }

    #[test]
    fn ladder_shape() {
        let inst = gen_ladder_tw2(&[1, 1], Variant::Gc).unwrap();
        assert_eq!(inst.graph().num_vertices(), 8);
        assert_eq!(inst.graph().num_edges(), 8);
        assert_eq!(inst.graph().max_degree(), 3);
        let single = gen_ladder_tw2(&[5], Variant::Vdgc).unwrap();
        assert_eq!(single.graph().num_vertices(), 4);
        assert_eq!(single.graph().num_edges(), 3);
    }

    #[test]
    fn blowup_counts() {
        let single = gen_star_from_numpart(&[1]).unwrap();
        let b = blowup_gc_to_vdgc(&single);
        assert_eq!(b.graph().num_vertices(), 2);
        assert_eq!(b.graph().num_edges(), 1);

        let star = gen_star_from_numpart(&[1, 1, 1]).unwrap();
        let b = blowup_gc_to_vdgc(&star);
        assert_eq!(b.graph().num_vertices(), 12);
        assert_eq!(b.graph().num_edges(), 15);
        assert_eq!(b.variant(), Variant::Vdgc);
        assert_eq!(b.utility(crate::model::AgentId(0), EdgeId(0)), &ratio(1, 3));
        assert!(b.is_normalized());
    }
}

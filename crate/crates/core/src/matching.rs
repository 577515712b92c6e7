//! Bipartite matching between unassigned agents and leftover pieces.

use crate::model::{piece_utility, AgentId, Instance, Piece};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bigraph {
    pub left: Vec<AgentId>,
    /// Indices into the leftover piece list.
    pub right: Vec<usize>,
    /// `adj[i]` lists right indices joined to left index `i`, ascending.
    pub adj: Vec<Vec<usize>>,
}

impl Bigraph {
    pub fn new(left: Vec<AgentId>, right: Vec<usize>, edges: &[(usize, usize)]) -> Bigraph {
        let mut adj = vec![Vec::new(); left.len()];
        for &(l, r) in edges {
            adj[l].push(r);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
        Bigraph { left, right, adj }
    }

    pub fn has_edge(&self, l: usize, r: usize) -> bool {
        self.adj[l].binary_search(&r).is_ok()
    }
}

/// `pairs[i] = (left index, right index)`, sorted by left index.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.pairs.len()
    }

    /// Covers every vertex on both sides.
    pub fn is_perfect(&self, g: &Bigraph) -> bool {
        g.left.len() == g.right.len() && self.pairs.len() == g.left.len()
    }
}

/// Agent `a` is joined to leftover piece `p` iff `a` values `p` at least as
/// much as every piece of `full_partition`.
pub fn compatibility_graph(
    instance: &Instance,
    full_partition: &[Piece],
    unassigned: &[AgentId],
    leftover: &[Piece],
) -> Bigraph {
    let mut edges = Vec::new();
    for (i, &a) in unassigned.iter().enumerate() {
        let value = |p: &Piece| piece_utility(a, p, instance).expect("pieces come from the instance");
        let best = full_partition.iter().map(value).max();
        for (j, p) in leftover.iter().enumerate() {
            let v = value(p);
            if best.as_ref().is_none_or(|b| v >= *b) {
                edges.push((i, j));
            }
        }
    }
    Bigraph::new(unassigned.to_vec(), (0..leftover.len()).collect(), &edges)
}

/// Maximum matching by repeated augmenting paths, scanning left vertices and
/// their neighbours in index order.
pub fn max_bipartite_matching(g: &Bigraph) -> Matching {
    let mut owner: Vec<Option<usize>> = vec![None; g.right.len()];
    for l in 0..g.left.len() {
        let mut seen = vec![false; g.right.len()];
        augment(g, l, &mut seen, &mut owner);
    }
    let mut pairs: Vec<(usize, usize)> = owner
        .iter()
        .enumerate()
        .filter_map(|(r, l)| l.map(|l| (l, r)))
        .collect();
    pairs.sort_unstable();
    Matching { pairs }
}

fn augment(g: &Bigraph, l: usize, seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
    for &r in &g.adj[l] {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        if owner[r].is_none_or(|other| augment(g, other, seen, owner)) {
            owner[r] = Some(l);
            return true;
        }
    }
    false
}

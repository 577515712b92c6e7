//! Instances, pieces and assignments.

use crate::graph::{EdgeId, End, Graph};
use crate::rational::{self, Rational};
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentId(pub usize);

/// Whether pieces may share vertices (`Gc`) or must be vertex-disjoint (`Vdgc`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Gc,
    Vdgc,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Gc => f.write_str("gc"),
            Variant::Vdgc => f.write_str("vdgc"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("instance needs at least one agent")]
    NoAgents,
    #[error("duplicate agent `{0}`")]
    DuplicateAgent(String),
    #[error("utility table has wrong shape")]
    Shape,
    #[error("agent `{agent}` has a negative utility on edge `{edge}`")]
    NegativeUtility { agent: String, edge: String },
    #[error("agent `{0}` values every edge at 0")]
    AllZeroAgent(String),
    #[error("piece references unknown edge index {0}")]
    UnknownEdge(usize),
}

/// A graph, a set of agents and their per-edge utilities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    graph: Graph,
    agents: Vec<String>,
    /// `utilities[agent][edge]`
    utilities: Vec<Vec<Rational>>,
    variant: Variant,
}

impl Instance {
    pub fn new(
        graph: Graph,
        agents: Vec<String>,
        utilities: Vec<Vec<Rational>>,
        variant: Variant,
    ) -> Result<Instance, ModelError> {
        if agents.is_empty() {
            return Err(ModelError::NoAgents);
        }
        for (i, a) in agents.iter().enumerate() {
            if agents[..i].contains(a) {
                return Err(ModelError::DuplicateAgent(a.clone()));
            }
        }
        if utilities.len() != agents.len()
            || utilities.iter().any(|row| row.len() != graph.num_edges())
        {
            return Err(ModelError::Shape);
        }
        for (a, row) in utilities.iter().enumerate() {
            for (e, u) in row.iter().enumerate() {
                if u.is_negative() {
                    return Err(ModelError::NegativeUtility {
                        agent: agents[a].clone(),
                        edge: graph.edges()[e].name.clone(),
                    });
                }
            }
        }
        Ok(Instance {
            graph,
            agents,
            utilities,
            variant,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn with_variant(&self, variant: Variant) -> Instance {
        Instance {
            variant,
            ..self.clone()
        }
    }

    pub fn num_agents(&self) -> usize {
        self.agents.len()
    }

    pub fn agent_ids(&self) -> impl Iterator<Item = AgentId> {
        (0..self.agents.len()).map(AgentId)
    }

    pub fn agent_name(&self, a: AgentId) -> &str {
        &self.agents[a.0]
    }

    pub fn agent_names(&self) -> &[String] {
        &self.agents
    }

    pub fn agent_by_name(&self, name: &str) -> Option<AgentId> {
        self.agents.iter().position(|a| a == name).map(AgentId)
    }

    pub fn utility(&self, a: AgentId, e: EdgeId) -> &Rational {
        &self.utilities[a.0][e.0]
    }

    pub fn utilities(&self) -> &[Vec<Rational>] {
        &self.utilities
    }

    /// Sum of an agent's utilities over the whole graph.
    pub fn total_utility(&self, a: AgentId) -> Rational {
        self.utilities[a.0].iter().sum()
    }

    pub fn is_normalized(&self) -> bool {
        self.agent_ids().all(|a| self.total_utility(a).is_one())
    }
}

/// Scales every agent's utilities so they sum to exactly 1.
pub fn normalize(instance: &Instance) -> Result<Instance, ModelError> {
    let mut utilities = instance.utilities.clone();
    for (a, row) in utilities.iter_mut().enumerate() {
        let total: Rational = row.iter().sum();
        if total.is_zero() {
            return Err(ModelError::AllZeroAgent(instance.agents[a].clone()));
        }
        for u in row.iter_mut() {
            *u = &*u / &total;
        }
    }
    Ok(Instance {
        utilities,
        ..instance.clone()
    })
}

/// A sub-interval of one edge, with explicit boundary closure.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgePiece {
    pub edge: EdgeId,
    pub lo: Rational,
    pub hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl EdgePiece {
    pub fn closed(edge: EdgeId, lo: Rational, hi: Rational) -> EdgePiece {
        EdgePiece {
            edge,
            lo,
            hi,
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn whole(edge: EdgeId) -> EdgePiece {
        EdgePiece::closed(edge, rational::zero(), rational::one())
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    /// Checks `0 <= lo <= hi <= 1` and that point pieces are closed.
    pub fn is_well_formed(&self) -> bool {
        !self.lo.is_negative()
            && self.lo <= self.hi
            && self.hi <= rational::one()
            && (!self.is_degenerate() || (self.lo_closed && self.hi_closed))
    }

    pub fn contains(&self, p: &Rational) -> bool {
        (self.lo < *p && *p < self.hi)
            || (*p == self.lo && self.lo_closed)
            || (*p == self.hi && self.hi_closed)
    }

    /// Contains the vertex sitting at the given end of its edge.
    pub fn contains_end(&self, end: End) -> bool {
        match end {
            End::Low => self.contains(&rational::zero()),
            End::High => self.contains(&rational::one()),
        }
    }

    fn touches_on_same_edge(&self, other: &EdgePiece) -> bool {
        let (first, second) = if self.lo <= other.lo {
            (self, other)
        } else {
            (other, self)
        };
        if second.lo < first.hi {
            return true;
        }
        // Abutting intervals: the shared endpoint must belong to one of them.
        second.lo == first.hi && (first.hi_closed || second.lo_closed)
    }
}

/// A collection of edge pieces held by one agent.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Piece {
    pub edge_pieces: Vec<EdgePiece>,
}

impl Piece {
    pub fn new(edge_pieces: Vec<EdgePiece>) -> Piece {
        Piece { edge_pieces }
    }

    pub fn is_empty(&self) -> bool {
        self.edge_pieces.is_empty()
    }
}

/// `u_a(P)`: sum of length times utility over the edge pieces of `piece`.
pub fn piece_utility(agent: AgentId, piece: &Piece, instance: &Instance) -> Result<Rational, ModelError> {
    let mut total = rational::zero();
    for ep in &piece.edge_pieces {
        if ep.edge.0 >= instance.graph.num_edges() {
            return Err(ModelError::UnknownEdge(ep.edge.0));
        }
        total += ep.length() * instance.utility(agent, ep.edge);
    }
    Ok(total)
}

fn adjacent(graph: &Graph, a: &EdgePiece, b: &EdgePiece) -> bool {
    if a.edge == b.edge {
        return a.touches_on_same_edge(b);
    }
    let ea = graph.edge(a.edge);
    let eb = graph.edge(b.edge);
    End::BOTH.iter().any(|&end| {
        let v = ea.endpoint(end);
        match eb.end_at(v) {
            Some(other_end) => a.contains_end(end) && b.contains_end(other_end),
            None => false,
        }
    })
}

/// Whether the edge pieces form one connected piece of the graph.
pub fn is_connected_piece(piece: &Piece, graph: &Graph) -> bool {
    let parts = &piece.edge_pieces;
    if parts.iter().any(|p| p.edge.0 >= graph.num_edges()) {
        return false;
    }
    if parts.len() <= 1 {
        return true;
    }
    let mut seen = vec![false; parts.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..parts.len() {
            if !seen[j] && adjacent(graph, &parts[i], &parts[j]) {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// One piece per agent, indexed by agent.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Assignment {
    pub pieces: Vec<Piece>,
}

impl Assignment {
    pub fn empty(num_agents: usize) -> Assignment {
        Assignment {
            pieces: vec![Piece::default(); num_agents],
        }
    }

    pub fn piece(&self, a: AgentId) -> &Piece {
        &self.pieces[a.0]
    }

    /// Lays out consecutive segments along an edge (from coordinate 0 to 1)
    /// and appends the resulting edge pieces to their owners.
    pub fn push_edge_layout(&mut self, edge: EdgeId, segments: &[(AgentId, Rational)]) {
        for (agent, ep) in layout_edge(edge, segments) {
            self.pieces[agent.0].edge_pieces.push(ep);
        }
    }
}

/// Converts `(owner, length)` segments along an edge into edge pieces that
/// tile `[0, 1]`.
///
/// Consecutive segments of the same owner are merged. Vertices (0 and 1)
/// belong to the first and last segment. A zero-length segment owns its
/// point; otherwise an interior cut point belongs to the segment on its left.
pub fn layout_edge(edge: EdgeId, segments: &[(AgentId, Rational)]) -> Vec<(AgentId, EdgePiece)> {
    let mut merged: Vec<(AgentId, Rational)> = Vec::new();
    for (owner, len) in segments {
        match merged.last_mut() {
            Some((prev, acc)) if prev == owner => *acc += len,
            _ => merged.push((*owner, len.clone())),
        }
    }
    let mut out: Vec<(AgentId, EdgePiece)> = Vec::with_capacity(merged.len());
    let mut pos = rational::zero();
    for (owner, len) in &merged {
        let lo = pos.clone();
        pos += len;
        out.push((
            *owner,
            EdgePiece {
                edge,
                lo,
                hi: pos.clone(),
                lo_closed: true,
                hi_closed: true,
            },
        ));
    }
    for i in 1..out.len() {
        let left_deg = out[i - 1].1.is_degenerate();
        let right_deg = out[i].1.is_degenerate();
        if right_deg && !left_deg {
            out[i - 1].1.hi_closed = false;
        } else if !right_deg {
            out[i].1.lo_closed = false;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn path3(u: [[i64; 2]; 2]) -> Instance {
        let g = Graph::new(&["v1", "v2", "v3"], &[("e1", "v1", "v2"), ("e2", "v2", "v3")]).unwrap();
        Instance::new(
            g,
            vec!["a1".into(), "a2".into()],
            u.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect(),
            Variant::Gc,
        )
        .unwrap()
    }

    #[test]
    fn normalize_scales_by_sum() {
        let g = Graph::new(
            &["a", "b", "c", "d"],
            &[("e1", "a", "b"), ("e2", "b", "c"), ("e3", "c", "d")],
        )
        .unwrap();
        let inst = Instance::new(g, vec!["x".into()], vec![vec![int(1), int(2), int(3)]], Variant::Gc).unwrap();
        let n = normalize(&inst).unwrap();
        assert_eq!(n.utilities()[0], vec![ratio(1, 6), ratio(1, 3), ratio(1, 2)]);
        assert_eq!(normalize(&n).unwrap(), n);
    }

    #[test]
    fn normalize_rejects_all_zero() {
        let inst = path3([[0, 0], [1, 1]]);
        assert_eq!(normalize(&inst), Err(ModelError::AllZeroAgent("a1".into())));
    }

    #[test]
    fn utility_of_pieces() {
        let g = Graph::new(&["u", "v"], &[("e", "u", "v")]).unwrap();
        let inst = Instance::new(g, vec!["a".into()], vec![vec![ratio(1, 2)]], Variant::Gc).unwrap();
        let p = Piece::new(vec![EdgePiece::whole(EdgeId(0))]);
        assert_eq!(piece_utility(AgentId(0), &p, &inst).unwrap(), ratio(1, 2));

        let inst = normalize(&path3([[1, 2], [1, 1]])).unwrap();
        let p = Piece::new(vec![
            EdgePiece::closed(EdgeId(0), int(0), ratio(1, 2)),
            EdgePiece::closed(EdgeId(1), ratio(1, 2), int(1)),
        ]);
        assert_eq!(piece_utility(AgentId(0), &p, &inst).unwrap(), ratio(1, 2));
        let whole = Piece::new(vec![EdgePiece::whole(EdgeId(0)), EdgePiece::whole(EdgeId(1))]);
        assert_eq!(piece_utility(AgentId(1), &whole, &inst).unwrap(), int(1));
        let bad = Piece::new(vec![EdgePiece::whole(EdgeId(7))]);
        assert_eq!(piece_utility(AgentId(0), &bad, &inst), Err(ModelError::UnknownEdge(7)));
    }

    /// The six-vertex example graph with the pink, blue and green collections.
    fn figure_graph() -> Graph {
        Graph::new(
            &["v1", "v2", "v3", "v4", "v5", "v6"],
            &[
                ("v1v2", "v1", "v2"),
                ("v1v3", "v1", "v3"),
                ("v1v4", "v1", "v4"),
                ("v1v5", "v1", "v5"),
                ("v1v6", "v1", "v6"),
                ("v2v3", "v2", "v3"),
                ("v3v4", "v3", "v4"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn figure_collections() {
        let g = figure_graph();
        let id = |n: &str| g.edge_by_name(n).unwrap();
        let pink = Piece::new(vec![
            EdgePiece::closed(id("v1v2"), int(0), ratio(1, 2)),
            EdgePiece::whole(id("v1v3")),
            EdgePiece::whole(id("v1v4")),
            EdgePiece::closed(id("v1v5"), int(0), ratio(5, 6)),
            EdgePiece::whole(id("v3v4")),
        ]);
        assert!(is_connected_piece(&pink, &g));
        let blue = Piece::new(vec![
            EdgePiece::closed(id("v2v3"), int(0), ratio(1, 2)),
            EdgePiece::closed(id("v2v3"), ratio(3, 4), int(1)),
        ]);
        assert!(!is_connected_piece(&blue, &g));
        let green = Piece::new(vec![
            EdgePiece::closed(id("v1v5"), ratio(5, 6), int(1)),
            EdgePiece::closed(id("v1v6"), ratio(1, 2), ratio(3, 4)),
        ]);
        assert!(!is_connected_piece(&green, &g));
    }

    #[test]
    fn non_adjacent_edges_disconnected() {
        let g = Graph::new(
            &["a", "b", "c", "d"],
            &[("e", "a", "b"), ("m", "b", "c"), ("f", "c", "d")],
        )
        .unwrap();
        let p = Piece::new(vec![
            EdgePiece::closed(EdgeId(0), int(0), ratio(1, 3)),
            EdgePiece::closed(EdgeId(2), ratio(2, 3), int(1)),
        ]);
        assert!(!is_connected_piece(&p, &g));
        assert!(is_connected_piece(&Piece::default(), &g));
    }

    #[test]
    fn open_vertex_breaks_adjacency() {
        let inst = path3([[1, 1], [1, 1]]);
        let g = inst.graph();
        let mut left = EdgePiece::whole(EdgeId(0));
        let right = EdgePiece::whole(EdgeId(1));
        assert!(is_connected_piece(&Piece::new(vec![left.clone(), right.clone()]), g));
        left.hi_closed = false;
        assert!(!is_connected_piece(&Piece::new(vec![left, right]), g));
    }

    #[test]
    fn layout_assigns_cut_points_once() {
        let a = AgentId(0);
        let b = AgentId(1);
        let c = AgentId(2);
        let parts = layout_edge(EdgeId(0), &[(a, int(0)), (b, ratio(1, 2)), (c, ratio(1, 2))]);
        assert_eq!(parts.len(), 3);
        assert!(parts[0].1.lo_closed && parts[0].1.hi_closed);
        assert!(!parts[1].1.lo_closed && parts[1].1.hi_closed);
        assert!(!parts[2].1.lo_closed && parts[2].1.hi_closed);

        let parts = layout_edge(EdgeId(0), &[(a, int(1)), (b, int(0))]);
        assert!(parts[0].1.lo_closed && !parts[0].1.hi_closed);
        assert!(parts[1].1.is_degenerate() && parts[1].1.lo_closed);

        let parts = layout_edge(EdgeId(0), &[(a, ratio(1, 4)), (a, ratio(3, 4))]);
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].1, EdgePiece::whole(EdgeId(0)));
    }
}

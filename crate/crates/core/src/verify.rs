//! Independent checker for assignments. Every solver output is run through it.

use crate::graph::{EdgeId, VertexId};
use crate::model::{is_connected_piece, piece_utility, AgentId, Assignment, EdgePiece, Instance, Variant};
use crate::rational::{self, Rational};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// Assignment does not hold exactly one piece per agent.
    AgentCount { expected: usize, found: usize },
    /// An edge piece has bounds outside `[0,1]`, `lo > hi`, an open point
    /// piece, or an unknown edge.
    Malformed { agent: AgentId, index: usize },
    Tiling { edge: EdgeId, reason: String },
    Disconnected { agent: AgentId },
    SharedVertex { vertex: VertexId, agents: Vec<AgentId> },
    Envy {
        agent: AgentId,
        envied: AgentId,
        own: Rational,
        other: Rational,
    },
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::AgentCount { expected, found } => {
                write!(f, "tiling: expected {expected} pieces, found {found}")
            }
            Failure::Malformed { agent, index } => {
                write!(f, "tiling: malformed edge piece #{index} of agent {}", agent.0)
            }
            Failure::Tiling { edge, reason } => write!(f, "tiling: edge {}: {reason}", edge.0),
            Failure::Disconnected { agent } => write!(f, "connectivity: piece of agent {} is not connected", agent.0),
            Failure::SharedVertex { vertex, agents } => {
                let names: Vec<String> = agents.iter().map(|a| a.0.to_string()).collect();
                write!(f, "vertex-disjointness: vertex {} held by agents {}", vertex.0, names.join(","))
            }
            Failure::Envy {
                agent,
                envied,
                own,
                other,
            } => write!(
                f,
                "envy: agent {} values own piece at {} but piece of agent {} at {}",
                agent.0,
                rational::format_rational(own),
                envied.0,
                rational::format_rational(other)
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerificationReport {
    pub failures: Vec<Failure>,
}

impl VerificationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks tiling, connectivity, vertex-disjointness (VDGC only) and
/// envy-freeness of `assignment`.
pub fn verify_assignment(instance: &Instance, assignment: &Assignment) -> VerificationReport {
    let mut failures = Vec::new();
    let n = instance.num_agents();
    if assignment.pieces.len() != n {
        failures.push(Failure::AgentCount {
            expected: n,
            found: assignment.pieces.len(),
        });
        return VerificationReport { failures };
    }
    let graph = instance.graph();
    let mut malformed = false;
    for (a, piece) in assignment.pieces.iter().enumerate() {
        for (i, ep) in piece.edge_pieces.iter().enumerate() {
            if ep.edge.0 >= graph.num_edges() || !ep.is_well_formed() {
                failures.push(Failure::Malformed {
                    agent: AgentId(a),
                    index: i,
                });
                malformed = true;
            }
        }
    }
    if malformed {
        return VerificationReport { failures };
    }

    for e in graph.edge_ids() {
        let on_edge: Vec<&EdgePiece> = assignment
            .pieces
            .iter()
            .flat_map(|p| p.edge_pieces.iter())
            .filter(|ep| ep.edge == e)
            .collect();
        if let Err(reason) = check_tiling(&on_edge) {
            failures.push(Failure::Tiling { edge: e, reason });
        }
    }

    for (a, piece) in assignment.pieces.iter().enumerate() {
        if !is_connected_piece(piece, graph) {
            failures.push(Failure::Disconnected { agent: AgentId(a) });
        }
    }

    if instance.variant() == Variant::Vdgc {
        for v in graph.vertex_ids() {
            let mut holders = Vec::new();
            for (a, piece) in assignment.pieces.iter().enumerate() {
                let holds = piece.edge_pieces.iter().any(|ep| {
                    graph
                        .edge(ep.edge)
                        .end_at(v)
                        .is_some_and(|end| ep.contains_end(end))
                });
                if holds {
                    holders.push(AgentId(a));
                }
            }
            if holders.len() > 1 {
                failures.push(Failure::SharedVertex { vertex: v, agents: holders });
            }
        }
    }

    let values: Vec<Vec<Rational>> = instance
        .agent_ids()
        .map(|a| {
            assignment
                .pieces
                .iter()
                .map(|p| piece_utility(a, p, instance).expect("edges checked above"))
                .collect()
        })
        .collect();
    for a in 0..n {
        for b in 0..n {
            if a != b && values[a][a] < values[a][b] {
                failures.push(Failure::Envy {
                    agent: AgentId(a),
                    envied: AgentId(b),
                    own: values[a][a].clone(),
                    other: values[a][b].clone(),
                });
            }
        }
    }
    VerificationReport { failures }
}

/// Per edge: the non-degenerate intervals abut exactly from 0 to 1 and every
/// cut point (including both vertices) is covered by some piece.
fn check_tiling(pieces: &[&EdgePiece]) -> Result<(), String> {
    let mut spans: Vec<&EdgePiece> = pieces.iter().copied().filter(|p| !p.is_degenerate()).collect();
    spans.sort_by(|a, b| a.lo.cmp(&b.lo));
    let zero = rational::zero();
    let one = rational::one();
    let mut cursor = zero.clone();
    let mut cut_points = vec![zero.clone()];
    for span in &spans {
        if span.lo != cursor {
            return Err(if span.lo > cursor {
                format!("gap before {}", rational::format_rational(&span.lo))
            } else {
                format!("overlap at {}", rational::format_rational(&span.lo))
            });
        }
        cursor = span.hi.clone();
        cut_points.push(cursor.clone());
    }
    if cursor != one {
        return Err(format!("covered only up to {}", rational::format_rational(&cursor)));
    }
    for p in &cut_points {
        if !pieces.iter().any(|ep| ep.contains(p)) {
            return Err(format!("point {} not covered", rational::format_rational(p)));
        }
    }
    Ok(())
}

//! From lengths to pieces, and the final matching step.

use super::{build_lp, BranchGuess, LengthSolution};
use crate::graph::End;
use crate::matching::{compatibility_graph, max_bipartite_matching};
use crate::model::{layout_edge, AgentId, Assignment, Instance, Piece};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("lengths do not satisfy the branch constraints")]
    InconsistentLengths,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extraction {
    /// Pieces of the end holders and the guessed inside agents; empty for
    /// everyone else.
    pub partial: Assignment,
    /// Inside intervals nobody has been placed on yet.
    pub leftovers: Vec<Piece>,
    /// Agents still without a piece, ascending.
    pub unassigned: Vec<AgentId>,
}

/// Lays out every edge as: low-end holder, `n_e` intervals of length
/// `delta_e`, high-end holder. Guessed inside agents take the leftmost
/// intervals of their edge.
pub fn extract_assignment(
    instance: &Instance,
    guess: &BranchGuess,
    lengths: &LengthSolution,
) -> Result<Extraction, ExtractError> {
    if !build_lp(instance, guess).is_satisfied_by(&lengths.to_lp()) {
        return Err(ExtractError::InconsistentLengths);
    }
    let n = instance.num_agents();
    let mut partial = Assignment::empty(n);
    let mut leftovers = Vec::new();
    let mut placed = vec![false; n];
    for &a in &guess.a_v {
        placed[a.0] = true;
    }
    for e in instance.graph().edge_ids() {
        let mut segments = vec![(guess.holder(e, End::Low), lengths.end(e, End::Low).clone())];
        let pinned = guess.guessed_on(e);
        for j in 0..guess.n[e.0] {
            // Placeholder owners past the last agent mark free intervals.
            let owner = match pinned.get(j) {
                Some(&a) => {
                    placed[a.0] = true;
                    a
                }
                None => AgentId(n + j),
            };
            segments.push((owner, lengths.delta[e.0].clone()));
        }
        segments.push((guess.holder(e, End::High), lengths.end(e, End::High).clone()));
        for (owner, ep) in layout_edge(e, &segments) {
            if owner.0 < n {
                partial.pieces[owner.0].edge_pieces.push(ep);
            } else {
                leftovers.push(Piece::new(vec![ep]));
            }
        }
    }
    let unassigned = (0..n).filter(|&a| !placed[a]).map(AgentId).collect();
    Ok(Extraction {
        partial,
        leftovers,
        unassigned,
    })
}

/// Places the unassigned agents on leftover intervals they like at least as
/// much as every piece of the partition. `None` without a perfect matching.
pub fn complete_assignment(instance: &Instance, extraction: &Extraction) -> Option<Assignment> {
    let mut full: Vec<Piece> = extraction
        .partial
        .pieces
        .iter()
        .enumerate()
        .filter(|(a, _)| !extraction.unassigned.contains(&AgentId(*a)))
        .map(|(_, p)| p.clone())
        .collect();
    full.extend(extraction.leftovers.iter().cloned());
    let h = compatibility_graph(instance, &full, &extraction.unassigned, &extraction.leftovers);
    let m = max_bipartite_matching(&h);
    if !m.is_perfect(&h) {
        return None;
    }
    let mut asg = extraction.partial.clone();
    for &(l, r) in &m.pairs {
        asg.pieces[h.left[l].0] = extraction.leftovers[h.right[r]].clone();
    }
    Some(asg)
}

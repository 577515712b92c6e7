//! Exact solvers for envy-free division of graphs with divisible edges.
//!
//! Agents receive connected pieces of a graph whose edges can be cut
//! anywhere. Under `Variant::Gc` pieces may share vertices; under
//! `Variant::Vdgc` they may not. All arithmetic is exact.

pub mod arrangement;
pub mod cutset;
pub mod few_edges;
pub mod format;
pub mod generators;
pub mod graph;
pub mod lp;
pub mod matching;
pub mod model;
pub mod oracle;
pub mod rational;
pub mod solve;
pub mod verify;

pub use graph::{EdgeId, End, Graph, VertexId};
pub use model::{AgentId, Assignment, EdgePiece, Instance, Piece, Variant};
pub use rational::Rational;
pub use solve::{solve, SolverSelection, Verdict};
pub use verify::{verify_assignment, VerificationReport};

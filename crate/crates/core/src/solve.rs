//! Verdicts and solver dispatch.

use crate::cutset::{solve_cycle, solve_tree_gc_bounded_degree, solve_tree_vdgc, CutSetError};
use crate::few_edges::solve_few_edges;
use crate::model::{Assignment, Instance, Variant};
use crate::oracle::solve_explicit_oracle;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Yes(Assignment),
    No,
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn assignment(&self) -> Option<&Assignment> {
        match self {
            Verdict::Yes(a) => Some(a),
            Verdict::No => None,
        }
    }
}

/// Which solver to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverSelection {
    /// Tree and cycle solvers where they apply, otherwise few-edges.
    Auto,
    FewEdges,
    TreeVdgc,
    TreeGc,
    Cycle,
    Oracle,
}

impl SolverSelection {
    pub const ALL: [SolverSelection; 6] = [
        SolverSelection::Auto,
        SolverSelection::FewEdges,
        SolverSelection::TreeVdgc,
        SolverSelection::TreeGc,
        SolverSelection::Cycle,
        SolverSelection::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolverSelection::Auto => "auto",
            SolverSelection::FewEdges => "few-edges",
            SolverSelection::TreeVdgc => "tree-vdgc",
            SolverSelection::TreeGc => "tree-gc",
            SolverSelection::Cycle => "cycle",
            SolverSelection::Oracle => "oracle",
        }
    }

    /// The concrete solver `Auto` resolves to for this instance.
    pub fn resolve(self, instance: &Instance) -> SolverSelection {
        if self != SolverSelection::Auto {
            return self;
        }
        let g = instance.graph();
        match (g.is_tree(), g.is_cycle(), instance.variant()) {
            (true, _, Variant::Vdgc) => SolverSelection::TreeVdgc,
            (true, _, Variant::Gc) => SolverSelection::TreeGc,
            (_, true, _) => SolverSelection::Cycle,
            _ => SolverSelection::FewEdges,
        }
    }
}

impl fmt::Display for SolverSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverSelection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SolverSelection::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown solver mode `{s}`"))
    }
}

/// Runs the selected solver.
pub fn solve(instance: &Instance, mode: SolverSelection) -> Result<Verdict, CutSetError> {
    match mode.resolve(instance) {
        SolverSelection::Auto | SolverSelection::FewEdges => Ok(solve_few_edges(instance)),
        SolverSelection::TreeVdgc => solve_tree_vdgc(instance),
        SolverSelection::TreeGc => solve_tree_gc_bounded_degree(instance),
        SolverSelection::Cycle => solve_cycle(instance),
        SolverSelection::Oracle => Ok(solve_explicit_oracle(instance)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_star_from_numpart;

    #[test]
    fn auto_resolution() {
        let star = gen_star_from_numpart(&[1, 1, 1]).unwrap();
        assert_eq!(SolverSelection::Auto.resolve(&star), SolverSelection::TreeGc);
        let v = star.with_variant(Variant::Vdgc);
        assert_eq!(SolverSelection::Auto.resolve(&v), SolverSelection::TreeVdgc);
        assert_eq!(SolverSelection::Oracle.resolve(&v), SolverSelection::Oracle);
        for m in SolverSelection::ALL {
            assert_eq!(m.name().parse::<SolverSelection>(), Ok(m));
        }
        assert!("fast".parse::<SolverSelection>().is_err());
    }

    #[test]
    fn every_mode_says_no_on_the_star() {
        let star = gen_star_from_numpart(&[1, 1, 1]).unwrap();
        for m in [SolverSelection::Auto, SolverSelection::FewEdges, SolverSelection::TreeGc, SolverSelection::Oracle] {
            assert_eq!(solve(&star, m), Ok(Verdict::No));
        }
        assert!(solve(&star, SolverSelection::Cycle).is_err());
    }
}

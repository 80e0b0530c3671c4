//! CDCL satisfiability with assumptions, cores, and biased sampling.

mod enumerate;
mod solver;

pub use enumerate::{enumerate_models, enumerate_projected, EnumError};
pub use solver::{
    SampleError, SatOutcome, Solver, SolverStats, UnknownReason, DEFAULT_CONFLICT_BUDGET,
};

use std::time::Instant;

/// Resource limits applied to every solver handle of a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub deadline: Option<Instant>,
    pub conflict_budget: Option<u64>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            deadline: None,
            conflict_budget: Some(DEFAULT_CONFLICT_BUDGET),
        }
    }
}

impl Limits {
    pub fn apply(&self, s: &mut Solver) {
        s.set_deadline(self.deadline);
        s.set_conflict_budget(self.conflict_budget);
    }

    pub fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    pub fn solver(&self, f: &crate::formula::CnfFormula) -> Solver {
        let mut s = Solver::from_cnf(f);
        self.apply(&mut s);
        s
    }
}

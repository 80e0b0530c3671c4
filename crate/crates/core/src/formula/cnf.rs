use std::collections::BTreeSet;

use super::assignment::Assignment;
use super::lit::{Lit, Var};
use super::EvalError;

/// A disjunction of literals with no repeated literal and no complementary pair.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    /// Removes duplicate literals (keeping first occurrence order).
    /// Returns `None` for a tautology.
    pub fn new<I: IntoIterator<Item = Lit>>(lits: I) -> Option<Clause> {
        let mut out: Vec<Lit> = Vec::new();
        for l in lits {
            if out.contains(&!l) {
                return None;
            }
            if !out.contains(&l) {
                out.push(l);
            }
        }
        Some(Clause { lits: out })
    }

    pub fn from_dimacs(lits: &[i64]) -> Option<Clause> {
        Clause::new(lits.iter().map(|&l| Lit::from_dimacs(l)))
    }

    pub fn empty() -> Clause {
        Clause { lits: Vec::new() }
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn contains(&self, l: Lit) -> bool {
        self.lits.contains(&l)
    }

    pub fn mentions(&self, v: Var) -> bool {
        self.lits.iter().any(|l| l.var() == v)
    }

    pub fn eval(&self, a: &Assignment) -> Result<bool, EvalError> {
        let mut sat = false;
        for &l in &self.lits {
            match a.lit_value(l) {
                Some(true) => sat = true,
                Some(false) => {}
                None => return Err(EvalError::Unbound(l.var())),
            }
        }
        Ok(sat)
    }
}

/// A conjunction of clauses over variables `1..=num_vars`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CnfFormula {
    clauses: Vec<Clause>,
    num_vars: u32,
}

impl CnfFormula {
    pub fn new(num_vars: u32) -> CnfFormula {
        CnfFormula {
            clauses: Vec::new(),
            num_vars,
        }
    }

    /// Convenience constructor from signed integers; tautologies are dropped.
    pub fn from_dimacs(num_vars: u32, clauses: &[&[i64]]) -> CnfFormula {
        let mut f = CnfFormula::new(num_vars);
        for c in clauses {
            f.add_dimacs(c);
        }
        f
    }

    /// The canonical unsatisfiable formula: a single empty clause.
    pub fn unsat(num_vars: u32) -> CnfFormula {
        CnfFormula {
            clauses: vec![Clause::empty()],
            num_vars,
        }
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Raises `num_vars` to at least `n`.
    pub fn reserve_vars(&mut self, n: u32) {
        self.num_vars = self.num_vars.max(n);
    }

    /// Allocates a fresh variable above every existing one.
    pub fn fresh_var(&mut self) -> Var {
        self.num_vars += 1;
        Var::new(self.num_vars)
    }

    /// Adds a clause; tautologies are dropped. `num_vars` grows to cover it.
    pub fn add_clause<I: IntoIterator<Item = Lit>>(&mut self, lits: I) {
        if let Some(c) = Clause::new(lits) {
            self.push(c);
        }
    }

    pub fn add_dimacs(&mut self, lits: &[i64]) {
        self.add_clause(lits.iter().map(|&l| Lit::from_dimacs(l)));
    }

    pub fn push(&mut self, c: Clause) {
        if let Some(m) = c.lits().iter().map(|l| l.var().index()).max() {
            self.reserve_vars(m);
        }
        self.clauses.push(c);
    }

    pub fn extend(&mut self, other: &CnfFormula) {
        self.reserve_vars(other.num_vars);
        self.clauses.extend(other.clauses.iter().cloned());
    }

    pub fn has_empty_clause(&self) -> bool {
        self.clauses.iter().any(Clause::is_empty)
    }

    /// Variables occurring in some clause, ascending.
    pub fn occurring_vars(&self) -> BTreeSet<Var> {
        self.clauses
            .iter()
            .flat_map(|c| c.lits().iter().map(|l| l.var()))
            .collect()
    }

    /// 1 iff every clause has a true literal. Errors on a variable of a clause
    /// that `a` leaves unassigned.
    pub fn eval(&self, a: &Assignment) -> Result<bool, EvalError> {
        for c in &self.clauses {
            if !c.eval(a)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `self|_{v=b}`: satisfied clauses vanish, the falsified literal is removed
    /// from the rest. An emptied clause collapses the result to [`CnfFormula::unsat`].
    pub fn substitute_const(&self, v: Var, b: bool) -> CnfFormula {
        let sat_lit = v.lit(b);
        let mut out = CnfFormula::new(self.num_vars);
        for c in &self.clauses {
            if c.contains(sat_lit) {
                continue;
            }
            let rest: Vec<Lit> = c.lits().iter().copied().filter(|&l| l != !sat_lit).collect();
            if rest.is_empty() {
                return CnfFormula::unsat(self.num_vars);
            }
            out.clauses.push(Clause { lits: rest });
        }
        out
    }

    /// Applies `rename` to every literal's variable.
    pub fn rename<F: Fn(Var) -> Var>(&self, rename: F) -> CnfFormula {
        let mut out = CnfFormula::new(self.num_vars);
        for c in &self.clauses {
            out.add_clause(c.lits().iter().map(|l| Lit::new(rename(l.var()), l.is_negated())));
        }
        out
    }
}

pub fn eval_cnf(f: &CnfFormula, a: &Assignment) -> Result<bool, EvalError> {
    f.eval(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> Var {
        Var::new(i)
    }

    #[test]
    fn tautology_dropped_duplicates_merged() {
        assert!(Clause::from_dimacs(&[1, -1]).is_none());
        let c = Clause::from_dimacs(&[2, 1, 2]).unwrap();
        assert_eq!(c.len(), 2);
        let f = CnfFormula::from_dimacs(2, &[&[1, -1], &[1, 2]]);
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn eval_examples() {
        let f = CnfFormula::from_dimacs(2, &[&[1, 2]]);
        let a = Assignment::from_pairs([(v(1), false), (v(2), true)]);
        assert_eq!(eval_cnf(&f, &a), Ok(true));
        let g = CnfFormula::from_dimacs(1, &[&[1], &[-1]]);
        for b in [false, true] {
            assert_eq!(g.eval(&Assignment::from_pairs([(v(1), b)])), Ok(false));
        }
    }

    #[test]
    fn eval_incomplete_assignment_errors() {
        let f = CnfFormula::from_dimacs(2, &[&[1, 2]]);
        let a = Assignment::from_pairs([(v(1), false)]);
        assert_eq!(f.eval(&a), Err(EvalError::Unbound(v(2))));
    }

    #[test]
    fn substitute_examples() {
        // (y1 ∨ x1) ∧ (¬y1 ∨ x2) | y1=1 → (x2)
        let f = CnfFormula::from_dimacs(3, &[&[3, 1], &[-3, 2]]);
        let g = f.substitute_const(v(3), true);
        assert_eq!(g.clauses(), &[Clause::from_dimacs(&[2]).unwrap()]);
        // (y1) | y1=0 → empty clause
        let h = CnfFormula::from_dimacs(1, &[&[1]]).substitute_const(v(1), false);
        assert_eq!(h, CnfFormula::unsat(1));
        assert!(h.has_empty_clause());
    }

    #[test]
    fn substitute_matches_eval_exhaustively() {
        let f = CnfFormula::from_dimacs(
            4,
            &[&[1, -2, 3], &[-1, 4], &[2, 3, -4], &[-3], &[1, 2, 3, 4]],
        );
        let rest = [v(1), v(2), v(4)];
        for b in [false, true] {
            let g = f.substitute_const(v(3), b);
            for bits in 0..8u64 {
                let mut a = Assignment::from_bits(&rest, bits);
                let lhs = g.eval(&a).unwrap();
                a.set(v(3), b);
                assert_eq!(lhs, f.eval(&a).unwrap());
            }
        }
    }
}

use std::collections::HashMap;

use crate::formula::{negate_cnf, Assignment, CnfFormula, ExprArena, ExprId, QbfSpec, TseitinEncoder, Var};
use crate::sat::{Limits, SatOutcome, UnknownReason};

/// `F(X,Y) ∧ ¬F(X,Y') ∧ ⋀ (y'_i ↔ ψ_i)` with fresh primed copies of the outputs.
#[derive(Clone, Debug)]
pub struct ErrorFormula {
    pub cnf: CnfFormula,
    /// Output variable → primed copy.
    pub prime: HashMap<Var, Var>,
}

/// Builds the error formula. With `primed_refs`, output references inside the
/// candidates read the primed copies, so `Y'` must be self-consistent;
/// otherwise they read the unprimed outputs.
pub fn build_error_formula(
    spec: &QbfSpec,
    arena: &ExprArena,
    psi: &HashMap<Var, ExprId>,
    primed_refs: bool,
) -> ErrorFormula {
    let mut cnf = spec.matrix.clone();
    let base = spec.num_vars();
    let prime: HashMap<Var, Var> = spec
        .y_vars
        .iter()
        .enumerate()
        .map(|(i, &y)| (y, Var::new(base + 1 + i as u32)))
        .collect();
    cnf.reserve_vars(base + spec.y_vars.len() as u32);
    let to_prime = |v: Var| *prime.get(&v).unwrap_or(&v);
    let r = negate_cnf(&spec.matrix, to_prime, &mut cnf);
    cnf.add_clause([r]);
    let mut enc = TseitinEncoder::new(|v: Var| if primed_refs { to_prime(v) } else { v });
    for &y in &spec.y_vars {
        let f = psi[&y];
        let l = enc.encode(arena, f, &mut cnf);
        let yp = prime[&y].pos();
        cnf.add_clause([!yp, l]);
        cnf.add_clause([yp, !l]);
    }
    ErrorFormula { cnf, prime }
}

/// A model of the error formula, split into unprimed and primed parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    /// Values of X ∪ Y.
    pub sigma: Assignment,
    /// Values of the primed outputs, keyed by the unprimed output variable.
    pub primed: Assignment,
}

impl Counterexample {
    pub fn primed_value(&self, y: Var) -> bool {
        self.primed.value(y)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyOutcome {
    Valid,
    Counterexample(Counterexample),
    Unknown(UnknownReason),
}

/// Valid iff the error formula is unsatisfiable.
pub fn verify(
    spec: &QbfSpec,
    arena: &ExprArena,
    psi: &HashMap<Var, ExprId>,
    primed_refs: bool,
    limits: &Limits,
) -> VerifyOutcome {
    let ef = build_error_formula(spec, arena, psi, primed_refs);
    let mut s = limits.solver(&ef.cnf);
    match s.solve(&[]) {
        SatOutcome::Unsat { .. } => VerifyOutcome::Valid,
        SatOutcome::Unknown(r) => VerifyOutcome::Unknown(r),
        SatOutcome::Sat(m) => {
            let mut sigma = Assignment::new(spec.num_vars());
            for &v in spec.x_vars.iter().chain(&spec.y_vars) {
                sigma.set(v, m.value(v));
            }
            let mut primed = Assignment::new(spec.num_vars());
            for &y in &spec.y_vars {
                primed.set(y, m.value(ef.prime[&y]));
            }
            VerifyOutcome::Counterexample(Counterexample { sigma, primed })
        }
    }
}

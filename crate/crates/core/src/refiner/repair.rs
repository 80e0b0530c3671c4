use std::collections::HashMap;

use crate::formula::{Assignment, CnfFormula, ExprArena, ExprId, Lit, QbfSpec, Var};
use crate::maxsat::{maxsat_with, MaxSatError, MaxSatOptions, MaxSatQuery};
use crate::sat::Limits;

use super::verify::Counterexample;

/// Outputs blamed for a counterexample, with the MaxSAT model of the hard part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Localization {
    pub ind: Vec<Var>,
    pub model: Option<Assignment>,
}

/// Partial MaxSAT: hard `F ∧ (X ↔ σ[X])`, softs `y ↔ σ[y']` in `y_vars` order.
pub fn fault_localize(
    spec: &QbfSpec,
    cex: &Counterexample,
    opts: MaxSatOptions,
    limits: &Limits,
) -> Result<Localization, MaxSatError> {
    let mut hard = spec.matrix.clone();
    for &x in &spec.x_vars {
        hard.add_clause([x.lit(cex.sigma.value(x))]);
    }
    let soft = spec
        .y_vars
        .iter()
        .map(|&y| (y.lit(cex.primed_value(y)), y))
        .collect();
    let q = MaxSatQuery { hard, soft };
    let apply = |s: &mut crate::sat::Solver| limits.apply(s);
    let r = maxsat_with(&q, opts, Some(&apply))?;
    Ok(Localization {
        ind: r.falsified,
        model: Some(r.model),
    })
}

/// Blames every output whose counterexample value differs from its candidate value.
pub fn naive_localize(spec: &QbfSpec, cex: &Counterexample) -> Localization {
    Localization {
        ind: spec
            .y_vars
            .iter()
            .copied()
            .filter(|&y| cex.sigma.value(y) != cex.primed_value(y))
            .collect(),
        model: None,
    }
}

/// Assumptions for the repair query of `y_k`: the output literal first, then
/// the input cube, then the frozen later outputs.
pub fn gk_assumptions(x_vars: &[Var], yk: Lit, x_vals: &Assignment, frozen: &[(Var, bool)]) -> Vec<Lit> {
    let mut a = vec![yk];
    a.extend(x_vars.iter().map(|&x| x.lit(x_vals.value(x))));
    a.extend(frozen.iter().map(|&(v, b)| v.lit(b)));
    a
}

/// `β` as a cube over the core variables (excluding `y_k`), reading each
/// variable's assumed value. Falls back to the whole input cube when the core
/// holds nothing else.
pub fn repair_cube(core: &[Lit], yk: Var, x_vars: &[Var], x_vals: &Assignment) -> Vec<Lit> {
    let mut beta: Vec<Lit> = core.iter().copied().filter(|l| l.var() != yk).collect();
    beta.sort();
    beta.dedup();
    if beta.is_empty() {
        beta = x_vars.iter().map(|&x| x.lit(x_vals.value(x))).collect();
    }
    beta
}

/// `ψ ∧ ¬β` when the candidate output was 1, `ψ ∨ β` otherwise.
pub fn apply_repair(arena: &mut ExprArena, psi: ExprId, beta: &[Lit], primed_out: bool) -> ExprId {
    let b = arena.cube(beta);
    if primed_out {
        let nb = arena.not(b);
        arena.and2(psi, nb)
    } else {
        arena.or2(psi, b)
    }
}

/// `∃Z. F|y=1` as an expression: the clauses of the cofactor, with the
/// outputs in `z` eliminated by Shannon expansion.
pub fn self_substitution(matrix: &CnfFormula, y: Var, z: &[Var], arena: &mut ExprArena) -> ExprId {
    let cof = matrix.substitute_const(y, true);
    let all: Vec<ExprId> = cof.clauses().iter().map(|c| arena.clause(c.lits())).collect();
    let mut e = arena.and(all);
    for &v in z {
        let f = arena.fls();
        let t = arena.tru();
        let e0 = arena.substitute(e, v, f);
        let e1 = arena.substitute(e, v, t);
        e = arena.or2(e0, e1);
    }
    e
}

/// Resolves output references back to front along `order`: each function may
/// only refer to outputs placed after it.
pub fn substitute_all(
    arena: &mut ExprArena,
    psi: &HashMap<Var, ExprId>,
    order: &[Var],
) -> HashMap<Var, ExprId> {
    let mut resolved: HashMap<Var, ExprId> = HashMap::new();
    for &y in order.iter().rev() {
        let e = arena.substitute_map(psi[&y], &resolved);
        resolved.insert(y, e);
    }
    resolved
}

//! Brute-force oracles shared by the integration tests. Nothing here calls the
//! SAT solver.
#![allow(dead_code)]

use std::collections::HashMap;

use skolem_core::formula::{Assignment, CnfFormula, ExprArena, ExprId, Lit, QbfSpec, Var};

pub fn v(i: u32) -> Var {
    Var::new(i)
}

pub fn assignments(vars: &[Var]) -> Vec<Assignment> {
    (0u64..1 << vars.len()).map(|b| Assignment::from_bits(vars, b)).collect()
}

pub fn merge(a: &Assignment, b: &Assignment) -> Assignment {
    let mut m = a.clone();
    for (v, x) in b.iter() {
        m.set(v, x);
    }
    m
}

pub fn example1() -> QbfSpec {
    skolem_core::formula::parse_qdimacs(include_str!("../fixtures/example1.qdimacs")).unwrap()
}

/// ∀x. (∃y F(x,y)) → F(x, Ψ(x)) for input-only functions.
pub fn skolem_valid(spec: &QbfSpec, arena: &ExprArena, funcs: &HashMap<Var, ExprId>) -> bool {
    let ys = assignments(&spec.y_vars);
    assignments(&spec.x_vars).iter().all(|x| {
        let realizable = ys.iter().any(|y| spec.matrix.eval(&merge(x, y)).unwrap());
        if !realizable {
            return true;
        }
        let mut full = x.clone();
        for &y in &spec.y_vars {
            full.set(y, arena.eval(funcs[&y], x).unwrap());
        }
        spec.matrix.eval(&full).unwrap()
    })
}

/// Existence of (x, y, y') with F(x,y), ¬F(x,y') and y' = Ψ(x, y') where
/// output references read y'.
pub fn error_formula_sat(spec: &QbfSpec, arena: &ExprArena, funcs: &HashMap<Var, ExprId>) -> bool {
    let ys = assignments(&spec.y_vars);
    assignments(&spec.x_vars).iter().any(|x| {
        let realizable = ys.iter().any(|y| spec.matrix.eval(&merge(x, y)).unwrap());
        realizable
            && ys.iter().any(|yp| {
                let full = merge(x, yp);
                !spec.matrix.eval(&full).unwrap()
                    && spec.y_vars.iter().all(|&y| arena.eval(funcs[&y], &full).unwrap() == full.value(y))
            })
    })
}

/// Truth-table monotonicity: positive unate iff F|y=0 → F|y=1 everywhere.
pub fn unate_by_table(f: &CnfFormula, y: Var, positive: bool) -> bool {
    let others: Vec<Var> = (1..=f.num_vars()).map(Var::new).filter(|&u| u != y).collect();
    assignments(&others).iter().all(|a| {
        let mut lo = a.clone();
        lo.set(y, !positive);
        let mut hi = a.clone();
        hi.set(y, positive);
        !f.eval(&lo).unwrap() || f.eval(&hi).unwrap()
    })
}

pub fn exprs_equivalent(arena: &ExprArena, a: ExprId, b: ExprId, vars: &[Var]) -> bool {
    assignments(vars).iter().all(|p| arena.eval(a, p).unwrap() == arena.eval(b, p).unwrap())
}

pub fn cube_of(a: &Assignment, vars: &[Var]) -> Vec<Lit> {
    vars.iter().map(|&v| v.lit(a.value(v))).collect()
}

/// Expression for a truth table over `inputs` (`inputs[0]` = lowest bit).
pub fn table_expr(arena: &mut ExprArena, inputs: &[Var], table: &[bool]) -> ExprId {
    let cubes: Vec<ExprId> = table
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(c, _)| {
            let lits: Vec<Lit> = inputs.iter().enumerate().map(|(i, &v)| v.lit((c >> i) & 1 == 1)).collect();
            arena.cube(&lits)
        })
        .collect();
    arena.or(cubes)
}

/// Planted functions of a generated instance, resolved to inputs only.
pub fn planted_exprs(
    inst: &skolem_core::generator::PlantedInstance,
    arena: &mut ExprArena,
) -> HashMap<Var, ExprId> {
    let mut out: HashMap<Var, ExprId> = HashMap::new();
    for p in &inst.planted {
        let e = table_expr(arena, &p.inputs, &p.table);
        let e = arena.substitute_map(e, &out);
        out.insert(p.var, e);
    }
    out
}

//! Unate detection and elimination.
//!
//! `y` is positive unate when flipping it from 0 to 1 never breaks the matrix
//! (`F|y=0 ∧ ¬F|y=1` is unsatisfiable); its Skolem function is then the
//! constant 1. Negative unate is the mirror image.

use log::info;

use crate::formula::{negate_cnf, CnfFormula, ExprArena, ExprId, QbfSpec, Var};
use crate::sat::{SatOutcome, Solver};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnateCheck {
    Unate,
    NotUnate,
    /// The solver gave up; treated as not unate.
    Unknown,
}

impl UnateCheck {
    pub fn holds(self) -> bool {
        self == UnateCheck::Unate
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnateReport {
    pub positive: Vec<Var>,
    pub negative: Vec<Var>,
    pub reduced_matrix: CnfFormula,
}

impl UnateReport {
    pub fn is_unate(&self, v: Var) -> bool {
        self.positive.contains(&v) || self.negative.contains(&v)
    }

    /// `unate +y<i>` / `unate -y<i>` in detection order.
    pub fn lines(&self, y_order: &[Var]) -> Vec<String> {
        y_order
            .iter()
            .filter_map(|&y| {
                if self.positive.contains(&y) {
                    Some(format!("unate +y{}", y.index()))
                } else if self.negative.contains(&y) {
                    Some(format!("unate -y{}", y.index()))
                } else {
                    None
                }
            })
            .collect()
    }
}

/// `F|y=¬b ∧ ¬F|y=b` unsatisfiable means `y = b` is always safe.
fn check(f: &CnfFormula, y: Var, b: bool, configure: Option<&dyn Fn(&mut Solver)>) -> UnateCheck {
    let mut q = f.substitute_const(y, !b);
    q.reserve_vars(f.num_vars());
    let r = negate_cnf(&f.substitute_const(y, b), |v| v, &mut q);
    q.add_clause([r]);
    let mut s = Solver::from_cnf(&q);
    if let Some(c) = configure {
        c(&mut s);
    }
    match s.solve(&[]) {
        SatOutcome::Unsat { .. } => UnateCheck::Unate,
        SatOutcome::Sat(_) => UnateCheck::NotUnate,
        SatOutcome::Unknown(_) => UnateCheck::Unknown,
    }
}

pub fn check_positive_unate(f: &CnfFormula, y: Var, configure: Option<&dyn Fn(&mut Solver)>) -> UnateCheck {
    check(f, y, true, configure)
}

pub fn check_negative_unate(f: &CnfFormula, y: Var, configure: Option<&dyn Fn(&mut Solver)>) -> UnateCheck {
    check(f, y, false, configure)
}

/// One pass over `y_vars` in order. Each detected unate is substituted into the
/// matrix before the next check. Returns the report and constant functions for
/// the unates.
pub fn preprocess(
    spec: &QbfSpec,
    arena: &mut ExprArena,
    configure: Option<&dyn Fn(&mut Solver)>,
) -> (UnateReport, Vec<(Var, ExprId)>) {
    let mut matrix = spec.matrix.clone();
    let mut positive = Vec::new();
    let mut negative = Vec::new();
    let mut funcs = Vec::new();
    for &y in &spec.y_vars {
        if check_positive_unate(&matrix, y, configure).holds() {
            info!("unate +y{}", y.index());
            matrix = matrix.substitute_const(y, true);
            positive.push(y);
            funcs.push((y, arena.tru()));
        } else if check_negative_unate(&matrix, y, configure).holds() {
            info!("unate -y{}", y.index());
            matrix = matrix.substitute_const(y, false);
            negative.push(y);
            funcs.push((y, arena.fls()));
        }
    }
    matrix.reserve_vars(spec.num_vars());
    (
        UnateReport {
            positive,
            negative,
            reduced_matrix: matrix,
        },
        funcs,
    )
}

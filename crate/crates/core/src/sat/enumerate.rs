use crate::formula::{Assignment, CnfFormula, Lit, Var};

use super::solver::{SatOutcome, Solver, UnknownReason};

#[derive(Debug, thiserror::Error, PartialEq, Eq, Clone, Copy)]
pub enum EnumError {
    #[error("more than {cap} models")]
    CapExceeded { cap: usize },
    #[error("solver gave up: {0:?}")]
    Unknown(UnknownReason),
}

/// All models of `f` over variables `1..=num_vars`, in discovery order.
pub fn enumerate_models(f: &CnfFormula, cap: usize) -> Result<Vec<Assignment>, EnumError> {
    let vars: Vec<Var> = (1..=f.num_vars()).map(Var::new).collect();
    enumerate_projected(f, &vars, cap)
}

/// Distinct projections of the models of `f` onto `vars`. Each returned
/// assignment only binds `vars`.
pub fn enumerate_projected(
    f: &CnfFormula,
    vars: &[Var],
    cap: usize,
) -> Result<Vec<Assignment>, EnumError> {
    let mut s = Solver::from_cnf(f);
    s.set_conflict_budget(None);
    let mut out = Vec::new();
    loop {
        match s.solve(&[]) {
            SatOutcome::Unsat { .. } => return Ok(out),
            SatOutcome::Unknown(r) => return Err(EnumError::Unknown(r)),
            SatOutcome::Sat(m) => {
                if out.len() == cap {
                    return Err(EnumError::CapExceeded { cap });
                }
                let p = m.project(vars);
                let block: Vec<Lit> = vars.iter().map(|&v| v.lit(!m.value(v))).collect();
                out.push(p);
                if block.is_empty() || !s.add_clause(&block) {
                    return Ok(out);
                }
            }
        }
    }
}

//! Formula representations: literals, CNF, QDIMACS specs, expression DAGs and
//! their CNF encodings.

mod assignment;
mod cnf;
pub mod expr;
mod lit;
pub mod qdimacs;
pub mod skolem_file;
mod tseitin;

use thiserror::Error;

pub use assignment::Assignment;
pub use cnf::{eval_cnf, Clause, CnfFormula};
pub use expr::{ExprArena, ExprId, ExprParseError, Node};
pub use lit::{Lit, Var};
pub use qdimacs::{parse_qdimacs, ParseError, QbfSpec, SpecError};
pub use tseitin::{negate_cnf, tseitin, TseitinEncoder};
pub use skolem_file::{parse_skolem_file, write_skolem_file, SkolemFileError};

#[derive(Debug, Error, PartialEq, Eq, Clone, Copy)]
pub enum EvalError {
    #[error("variable {0} is unassigned")]
    Unbound(Var),
}

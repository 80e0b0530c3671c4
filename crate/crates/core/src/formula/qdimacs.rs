//! QDIMACS reading and writing for 2-QBF instances `∀X ∃Y F(X,Y)`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use super::cnf::{Clause, CnfFormula};
use super::lit::Var;

/// A 2-QBF instance: CNF matrix, universal inputs X and ordered existential outputs Y.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QbfSpec {
    pub matrix: CnfFormula,
    /// Ascending.
    pub x_vars: Vec<Var>,
    pub y_vars: Vec<Var>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpecError {
    #[error("variable {0} is both universal and existential")]
    Overlap(Var),
    #[error("variable {0} occurs in the matrix but is not quantified")]
    Unquantified(Var),
    #[error("no existential variables")]
    NoExistentials,
}

impl QbfSpec {
    pub fn new(matrix: CnfFormula, x_vars: Vec<Var>, y_vars: Vec<Var>) -> Result<QbfSpec, SpecError> {
        let mut x_vars = x_vars;
        x_vars.sort();
        x_vars.dedup();
        if y_vars.is_empty() {
            return Err(SpecError::NoExistentials);
        }
        let xs: BTreeSet<Var> = x_vars.iter().copied().collect();
        for &y in &y_vars {
            if xs.contains(&y) {
                return Err(SpecError::Overlap(y));
            }
        }
        let ys: BTreeSet<Var> = y_vars.iter().copied().collect();
        for v in matrix.occurring_vars() {
            if !xs.contains(&v) && !ys.contains(&v) {
                return Err(SpecError::Unquantified(v));
            }
        }
        let mut matrix = matrix;
        if let Some(m) = x_vars.iter().chain(&y_vars).map(|v| v.index()).max() {
            matrix.reserve_vars(m);
        }
        Ok(QbfSpec {
            matrix,
            x_vars,
            y_vars,
        })
    }

    pub fn num_vars(&self) -> u32 {
        self.matrix.num_vars()
    }

    pub fn is_input(&self, v: Var) -> bool {
        self.x_vars.binary_search(&v).is_ok()
    }

    pub fn is_output(&self, v: Var) -> bool {
        self.y_vars.contains(&v)
    }

    /// Position of `v` in `y_vars`.
    pub fn output_position(&self, v: Var) -> Option<usize> {
        self.y_vars.iter().position(|&y| y == v)
    }

    /// Serializes to QDIMACS. Free variables were folded into X at parse time, so
    /// the output declares them on the `a` line and reparses to the same spec.
    pub fn to_qdimacs(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "p cnf {} {}", self.num_vars(), self.matrix.len());
        if !self.x_vars.is_empty() {
            s.push('a');
            for v in &self.x_vars {
                let _ = write!(s, " {v}");
            }
            s.push_str(" 0\n");
        }
        s.push('e');
        for v in &self.y_vars {
            let _ = write!(s, " {v}");
        }
        s.push_str(" 0\n");
        for c in self.matrix.clauses() {
            for l in c.lits() {
                let _ = write!(s, "{l} ");
            }
            s.push_str("0\n");
        }
        s
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: malformed header (expected `p cnf <nvars> <nclauses>`)")]
    MalformedHeader { line: usize },
    #[error("missing `p cnf` header")]
    MissingHeader,
    #[error("line {line}: duplicate header")]
    DuplicateHeader { line: usize },
    #[error("line {line}: invalid token `{token}`")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: literal {lit} out of range 1..={max}")]
    LiteralOutOfRange { line: usize, lit: i64, max: u32 },
    #[error("line {line}: missing terminating 0")]
    MissingTerminator { line: usize },
    #[error("header declares {expected} clauses, found {found}")]
    ClauseCountMismatch { expected: usize, found: usize },
    #[error("line {line}: empty existential block")]
    EmptyExistentialBlock { line: usize },
    #[error("line {line}: empty universal block")]
    EmptyUniversalBlock { line: usize },
    #[error("line {line}: quantifier prefix is not of the form ∀∃")]
    UnsupportedPrefix { line: usize },
    #[error("line {line}: quantifier line after the first clause")]
    LateQuantifier { line: usize },
    #[error("line {line}: variable {var} quantified twice")]
    DuplicateQuantifier { line: usize, var: u32 },
    #[error("no existential block")]
    NoExistentials,
}

#[derive(Clone, Copy, PartialEq)]
enum Block {
    None,
    Universal,
    Existential,
}

pub fn parse_qdimacs(text: &str) -> Result<QbfSpec, ParseError> {
    let mut header: Option<(u32, usize)> = None;
    let mut x_vars: Vec<Var> = Vec::new();
    let mut y_vars: Vec<Var> = Vec::new();
    let mut quantified: BTreeSet<u32> = BTreeSet::new();
    let mut last_block = Block::None;
    let mut clauses: Vec<Option<Clause>> = Vec::new();
    let mut pending: Vec<i64> = Vec::new();
    let mut pending_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let first = tokens.next().unwrap_or_default();
        match first {
            "p" => {
                if header.is_some() {
                    return Err(ParseError::DuplicateHeader { line });
                }
                let parts: Vec<&str> = tokens.collect();
                if parts.len() != 3 || parts[0] != "cnf" {
                    return Err(ParseError::MalformedHeader { line });
                }
                let nv = parts[1].parse::<u32>().map_err(|_| ParseError::MalformedHeader { line })?;
                let nc = parts[2].parse::<usize>().map_err(|_| ParseError::MalformedHeader { line })?;
                header = Some((nv, nc));
            }
            "a" | "e" => {
                let (nv, _) = header.ok_or(ParseError::MissingHeader)?;
                if !clauses.is_empty() || !pending.is_empty() {
                    return Err(ParseError::LateQuantifier { line });
                }
                let block = if first == "a" { Block::Universal } else { Block::Existential };
                if block == Block::Universal && last_block == Block::Existential {
                    return Err(ParseError::UnsupportedPrefix { line });
                }
                let mut vars = Vec::new();
                let mut terminated = false;
                for tok in tokens {
                    if terminated {
                        return Err(ParseError::InvalidToken { line, token: tok.to_string() });
                    }
                    let n = tok
                        .parse::<i64>()
                        .map_err(|_| ParseError::InvalidToken { line, token: tok.to_string() })?;
                    if n == 0 {
                        terminated = true;
                        continue;
                    }
                    if n < 0 || n > nv as i64 {
                        return Err(ParseError::LiteralOutOfRange { line, lit: n, max: nv });
                    }
                    if !quantified.insert(n as u32) {
                        return Err(ParseError::DuplicateQuantifier { line, var: n as u32 });
                    }
                    vars.push(Var::new(n as u32));
                }
                if !terminated {
                    return Err(ParseError::MissingTerminator { line });
                }
                if vars.is_empty() {
                    return Err(if block == Block::Existential {
                        ParseError::EmptyExistentialBlock { line }
                    } else {
                        ParseError::EmptyUniversalBlock { line }
                    });
                }
                match block {
                    Block::Universal => x_vars.extend(vars),
                    _ => y_vars.extend(vars),
                }
                last_block = block;
            }
            _ => {
                let (nv, _) = header.ok_or(ParseError::MissingHeader)?;
                for tok in trimmed.split_whitespace() {
                    let n = tok
                        .parse::<i64>()
                        .map_err(|_| ParseError::InvalidToken { line, token: tok.to_string() })?;
                    if n == 0 {
                        clauses.push(Clause::from_dimacs(&pending));
                        pending.clear();
                        continue;
                    }
                    if n.unsigned_abs() > nv as u64 {
                        return Err(ParseError::LiteralOutOfRange { line, lit: n, max: nv });
                    }
                    if pending.is_empty() {
                        pending_line = line;
                    }
                    pending.push(n);
                }
            }
        }
    }

    let (nv, nc) = header.ok_or(ParseError::MissingHeader)?;
    if !pending.is_empty() {
        return Err(ParseError::MissingTerminator { line: pending_line });
    }
    if clauses.len() != nc {
        return Err(ParseError::ClauseCountMismatch {
            expected: nc,
            found: clauses.len(),
        });
    }
    if y_vars.is_empty() {
        return Err(ParseError::NoExistentials);
    }
    // Free variables are inputs.
    for v in 1..=nv {
        if !quantified.contains(&v) {
            x_vars.push(Var::new(v));
        }
    }
    let mut matrix = CnfFormula::new(nv);
    for c in clauses.into_iter().flatten() {
        matrix.push(c);
    }
    Ok(QbfSpec::new(matrix, x_vars, y_vars).expect("parser upholds spec invariants"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_instance() {
        let s = parse_qdimacs("p cnf 3 2\na 1 2 0\ne 3 0\n1 2 3 0\n-3 1 0\n").unwrap();
        assert_eq!(s.x_vars, vec![Var::new(1), Var::new(2)]);
        assert_eq!(s.y_vars, vec![Var::new(3)]);
        assert_eq!(s.matrix.len(), 2);
    }

    #[test]
    fn no_universals() {
        let s = parse_qdimacs("p cnf 2 1\ne 1 2 0\n1 0\n").unwrap();
        assert!(s.x_vars.is_empty());
        assert_eq!(s.y_vars, vec![Var::new(1), Var::new(2)]);
    }

    #[test]
    fn free_variables_become_universal() {
        let s = parse_qdimacs("c hi\np cnf 4 1\ne 3 0\n1 3 0\n").unwrap();
        assert_eq!(s.x_vars, vec![Var::new(1), Var::new(2), Var::new(4)]);
    }

    #[test]
    fn clause_spanning_lines_and_comments() {
        let s = parse_qdimacs("p cnf 3 1\na 1 0\ne 2 3 0\nc mid\n1 2\n3 0\n").unwrap();
        assert_eq!(s.matrix.clauses()[0].len(), 3);
    }

    #[test]
    fn error_cases() {
        use ParseError::*;
        let cases: &[(&str, ParseError)] = &[
            ("p cnf x 1\ne 1 0\n1 0\n", MalformedHeader { line: 1 }),
            ("p dnf 1 1\ne 1 0\n1 0\n", MalformedHeader { line: 1 }),
            ("e 1 0\n", MissingHeader),
            ("p cnf 2 1\ne 1 0\n1 3 0\n", LiteralOutOfRange { line: 3, lit: 3, max: 2 }),
            ("p cnf 2 1\ne 1 0\n1 2\n", MissingTerminator { line: 3 }),
            ("p cnf 2 2\ne 1 0\n1 2 0\n", ClauseCountMismatch { expected: 2, found: 1 }),
            ("p cnf 2 1\na 1 0\ne 0\n1 0\n", EmptyExistentialBlock { line: 3 }),
            ("p cnf 2 1\ne 1 0\na 2 0\n1 0\n", UnsupportedPrefix { line: 3 }),
            ("p cnf 2 1\na 1 0\n1 0\n", NoExistentials),
            ("p cnf 2 1\ne 1 2\n1 0\n", MissingTerminator { line: 2 }),
            ("p cnf 2 1\ne 1 1 0\n1 0\n", DuplicateQuantifier { line: 2, var: 1 }),
            ("p cnf 2 1\ne 1 0\n1 q 0\n", InvalidToken { line: 3, token: "q".into() }),
            ("p cnf 2 1\ne 1 0\n1 0\ne 2 0\n", LateQuantifier { line: 4 }),
        ];
        for (text, err) in cases {
            assert_eq!(parse_qdimacs(text).as_ref().err(), Some(err), "{text:?}");
        }
    }

    #[test]
    fn serialize_reparses() {
        let text = "p cnf 5 3\na 1 2 0\ne 3 4 5 0\n1 -3 0\n-2 4 5 0\n3 0\n";
        let s = parse_qdimacs(text).unwrap();
        assert_eq!(parse_qdimacs(&s.to_qdimacs()).unwrap(), s);
    }

    #[test]
    fn spec_invariants() {
        let m = CnfFormula::from_dimacs(2, &[&[1, 2]]);
        assert_eq!(
            QbfSpec::new(m.clone(), vec![Var::new(1)], vec![Var::new(1)]).unwrap_err(),
            SpecError::Overlap(Var::new(1))
        );
        assert_eq!(
            QbfSpec::new(m.clone(), vec![], vec![Var::new(1)]).unwrap_err(),
            SpecError::Unquantified(Var::new(2))
        );
        assert_eq!(QbfSpec::new(m, vec![], vec![]).unwrap_err(), SpecError::NoExistentials);
    }
}

//! Text format for Skolem function vectors: one `y<i> := <expr>` per line,
//! `c ...` comment lines. See `docs/skolem-format.md`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use super::expr::{parse_var_name, ExprArena, ExprId, ExprParseError};
use super::lit::Var;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SkolemFileError {
    #[error("line {line}: expected `<var> := <expr>`")]
    BadLine { line: usize },
    #[error("line {line}: {source}")]
    Expr { line: usize, source: ExprParseError },
    #[error("line {line}: variable {var} defined twice")]
    Duplicate { line: usize, var: Var },
}

pub fn write_skolem_file(arena: &ExprArena, functions: &[(Var, ExprId)]) -> String {
    let mut s = String::new();
    for &(y, e) in functions {
        let _ = writeln!(s, "y{y} := {}", arena.render(e));
    }
    s
}

pub fn parse_skolem_file(text: &str, arena: &mut ExprArena) -> Result<Vec<(Var, ExprId)>, SkolemFileError> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') || t.starts_with('#') {
            continue;
        }
        let (lhs, rhs) = t.split_once(":=").ok_or(SkolemFileError::BadLine { line })?;
        let var = parse_var_name(lhs.trim()).map_err(|_| SkolemFileError::BadLine { line })?;
        let e = arena
            .parse(rhs)
            .map_err(|source| SkolemFileError::Expr { line, source })?;
        if !seen.insert(var) {
            return Err(SkolemFileError::Duplicate { line, var });
        }
        out.push((var, e));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let mut a = ExprArena::new();
        let e = a.parse("(or x1 (and x2 (not x1)))").unwrap();
        let fs = vec![(Var::new(3), e), (Var::new(5), a.tru())];
        let text = write_skolem_file(&a, &fs);
        assert!(text.contains("y5 := true"));
        let back = parse_skolem_file(&format!("c header\n{text}"), &mut a).unwrap();
        assert_eq!(back, fs);
    }

    #[test]
    fn errors() {
        let mut a = ExprArena::new();
        assert_eq!(parse_skolem_file("y1 = x2", &mut a), Err(SkolemFileError::BadLine { line: 1 }));
        assert!(matches!(
            parse_skolem_file("y1 := (and", &mut a),
            Err(SkolemFileError::Expr { line: 1, .. })
        ));
        assert_eq!(
            parse_skolem_file("y1 := x2\ny1 := x3\n", &mut a),
            Err(SkolemFileError::Duplicate { line: 2, var: Var::new(1) })
        );
    }
}

//! Tseitin encoding of expressions and of CNF negation.
//!
//! Definitions are full biconditionals, so every model of the original variables
//! extends uniquely to the auxiliaries and every model of the encoding projects
//! back to a model of the source formula.

use std::collections::HashMap;

use super::cnf::CnfFormula;
use super::expr::{ExprArena, ExprId, Node};
use super::lit::{Lit, Var};

/// Encodes expressions into a CNF sink, caching one literal per expression node.
/// `rename` maps the expression's variables to sink variables.
pub struct TseitinEncoder<F: Fn(Var) -> Var> {
    rename: F,
    cache: HashMap<ExprId, Lit>,
}

impl TseitinEncoder<fn(Var) -> Var> {
    pub fn identity() -> Self {
        TseitinEncoder::new(|v| v)
    }
}

impl<F: Fn(Var) -> Var> TseitinEncoder<F> {
    pub fn new(rename: F) -> Self {
        TseitinEncoder {
            rename,
            cache: HashMap::new(),
        }
    }

    /// Appends definitions for `e` to `sink` and returns a literal equivalent to it.
    /// Fresh variables are allocated above `sink.num_vars()`.
    pub fn encode(&mut self, arena: &ExprArena, e: ExprId, sink: &mut CnfFormula) -> Lit {
        for n in arena.postorder(&[e]) {
            if self.cache.contains_key(&n) {
                continue;
            }
            let lit = match arena.node(n) {
                Node::Const(b) => {
                    let t = sink.fresh_var();
                    sink.add_clause([t.pos()]);
                    t.lit(*b)
                }
                Node::Var(v) => (self.rename)(*v).pos(),
                Node::Not(c) => !self.cache[c],
                Node::And(cs) => {
                    let ls: Vec<Lit> = cs.iter().map(|c| self.cache[c]).collect();
                    define_and(sink, &ls)
                }
                Node::Or(cs) => {
                    let ls: Vec<Lit> = cs.iter().map(|c| !self.cache[c]).collect();
                    !define_and(sink, &ls)
                }
            };
            self.cache.insert(n, lit);
        }
        self.cache[&e]
    }
}

/// Fresh `a ↔ ⋀ lits`.
fn define_and(sink: &mut CnfFormula, lits: &[Lit]) -> Lit {
    let a = sink.fresh_var();
    for &l in lits {
        sink.add_clause([a.neg(), l]);
    }
    sink.add_clause(std::iter::once(a.pos()).chain(lits.iter().map(|&l| !l)));
    a.pos()
}

/// Encodes `e` with the identity variable map.
pub fn tseitin(arena: &ExprArena, e: ExprId, sink: &mut CnfFormula) -> Lit {
    TseitinEncoder::identity().encode(arena, e, sink)
}

/// Encodes `¬f` with variables renamed by `rename`. One selector `z_i ↔ clause_i`
/// per clause (a unit clause reuses its literal); the returned literal `r` carries
/// `r → ⋁ ¬z_i`, so asserting `r` yields exactly `¬f[rename]`.
pub fn negate_cnf<F: Fn(Var) -> Var>(f: &CnfFormula, rename: F, sink: &mut CnfFormula) -> Lit {
    sink.reserve_vars(f.num_vars());
    let mut selectors = Vec::with_capacity(f.len());
    let mut trivially_true = false;
    for c in f.clauses() {
        let lits: Vec<Lit> = c
            .lits()
            .iter()
            .map(|l| Lit::new(rename(l.var()), l.is_negated()))
            .collect();
        match lits.len() {
            0 => trivially_true = true,
            1 => selectors.push(lits[0]),
            _ => {
                let negs: Vec<Lit> = lits.iter().map(|&l| !l).collect();
                // z ↔ ⋁ lits  is  ¬z ↔ ⋀ ¬lits
                selectors.push(!define_and(sink, &negs));
            }
        }
    }
    let r = sink.fresh_var();
    if !trivially_true {
        sink.add_clause(std::iter::once(r.neg()).chain(selectors.iter().map(|&z| !z)));
    }
    r.pos()
}

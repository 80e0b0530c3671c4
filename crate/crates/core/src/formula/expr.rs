//! Hash-consed Boolean expression DAGs.
//!
//! Every node lives in an [`ExprArena`] and is identified by an [`ExprId`]. The
//! constructors keep nodes canonical: `Not(Not(e))` collapses, constants fold,
//! nested `And`/`Or` flatten, children are sorted and deduplicated, and a
//! complementary pair of children folds to the absorbing constant. Structurally
//! equal expressions therefore share one id.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use super::assignment::Assignment;
use super::lit::{Lit, Var};
use super::EvalError;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ExprId(u32);

impl ExprId {
    fn idx(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Node {
    Const(bool),
    Var(Var),
    Not(ExprId),
    And(Vec<ExprId>),
    Or(Vec<ExprId>),
}

#[derive(Clone, Debug)]
pub struct ExprArena {
    nodes: Vec<Node>,
    table: HashMap<Node, ExprId>,
}

impl Default for ExprArena {
    fn default() -> Self {
        ExprArena::new()
    }
}

impl ExprArena {
    pub fn new() -> ExprArena {
        let mut arena = ExprArena {
            nodes: Vec::new(),
            table: HashMap::new(),
        };
        arena.intern(Node::Const(false));
        arena.intern(Node::Const(true));
        arena
    }

    fn intern(&mut self, node: Node) -> ExprId {
        if let Some(&id) = self.table.get(&node) {
            return id;
        }
        let id = ExprId(self.nodes.len() as u32);
        self.nodes.push(node.clone());
        self.table.insert(node, id);
        id
    }

    pub fn node(&self, e: ExprId) -> &Node {
        &self.nodes[e.idx()]
    }

    /// Number of nodes ever created in this arena.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn constant(&self, b: bool) -> ExprId {
        ExprId(b as u32)
    }

    pub fn tru(&self) -> ExprId {
        self.constant(true)
    }

    pub fn fls(&self) -> ExprId {
        self.constant(false)
    }

    pub fn as_const(&self, e: ExprId) -> Option<bool> {
        match self.node(e) {
            Node::Const(b) => Some(*b),
            _ => None,
        }
    }

    pub fn var(&mut self, v: Var) -> ExprId {
        self.intern(Node::Var(v))
    }

    pub fn lit(&mut self, l: Lit) -> ExprId {
        let v = self.var(l.var());
        if l.is_negated() {
            self.not(v)
        } else {
            v
        }
    }

    pub fn not(&mut self, e: ExprId) -> ExprId {
        match self.node(e) {
            Node::Const(b) => self.constant(!*b),
            Node::Not(inner) => *inner,
            _ => self.intern(Node::Not(e)),
        }
    }

    fn nary<I: IntoIterator<Item = ExprId>>(&mut self, is_and: bool, children: I) -> ExprId {
        // And: unit 1, zero 0. Or: unit 0, zero 1.
        let unit = is_and;
        let mut flat: Vec<ExprId> = Vec::new();
        for c in children {
            match self.node(c) {
                Node::Const(b) if *b == unit => {}
                Node::Const(_) => return self.constant(!unit),
                Node::And(cs) if is_and => flat.extend_from_slice(cs),
                Node::Or(cs) if !is_and => flat.extend_from_slice(cs),
                _ => flat.push(c),
            }
        }
        flat.sort();
        flat.dedup();
        for &c in &flat {
            if let Node::Not(inner) = self.node(c) {
                if flat.binary_search(inner).is_ok() {
                    return self.constant(!unit);
                }
            }
        }
        match flat.len() {
            0 => self.constant(unit),
            1 => flat[0],
            _ => self.intern(if is_and { Node::And(flat) } else { Node::Or(flat) }),
        }
    }

    pub fn and<I: IntoIterator<Item = ExprId>>(&mut self, children: I) -> ExprId {
        self.nary(true, children)
    }

    pub fn or<I: IntoIterator<Item = ExprId>>(&mut self, children: I) -> ExprId {
        self.nary(false, children)
    }

    pub fn and2(&mut self, a: ExprId, b: ExprId) -> ExprId {
        self.and([a, b])
    }

    pub fn or2(&mut self, a: ExprId, b: ExprId) -> ExprId {
        self.or([a, b])
    }

    /// `if c then t else e`
    pub fn ite(&mut self, c: ExprId, t: ExprId, e: ExprId) -> ExprId {
        let nc = self.not(c);
        let a = self.and2(c, t);
        let b = self.and2(nc, e);
        self.or2(a, b)
    }

    /// Conjunction of the literals of `cube`.
    pub fn cube(&mut self, cube: &[Lit]) -> ExprId {
        let lits: Vec<ExprId> = cube.iter().map(|&l| self.lit(l)).collect();
        self.and(lits)
    }

    /// Disjunction of the literals of `clause`.
    pub fn clause(&mut self, clause: &[Lit]) -> ExprId {
        let lits: Vec<ExprId> = clause.iter().map(|&l| self.lit(l)).collect();
        self.or(lits)
    }

    fn children(&self, e: ExprId) -> &[ExprId] {
        match self.node(e) {
            Node::Const(_) | Node::Var(_) => &[],
            Node::Not(c) => std::slice::from_ref(c),
            Node::And(cs) | Node::Or(cs) => cs,
        }
    }

    /// Nodes reachable from `roots`, children before parents.
    pub fn postorder(&self, roots: &[ExprId]) -> Vec<ExprId> {
        let mut seen = vec![false; self.nodes.len()];
        let mut order = Vec::new();
        let mut stack: Vec<(ExprId, bool)> = roots.iter().rev().map(|&r| (r, false)).collect();
        while let Some((e, expanded)) = stack.pop() {
            if expanded {
                order.push(e);
                continue;
            }
            if seen[e.idx()] {
                continue;
            }
            seen[e.idx()] = true;
            stack.push((e, true));
            for &c in self.children(e).iter().rev() {
                if !seen[c.idx()] {
                    stack.push((c, false));
                }
            }
        }
        order
    }

    /// Evaluates `e` under `a`, visiting each shared node once.
    pub fn eval(&self, e: ExprId, a: &Assignment) -> Result<bool, EvalError> {
        let mut memo: HashMap<ExprId, bool> = HashMap::new();
        for n in self.postorder(&[e]) {
            let v = match self.node(n) {
                Node::Const(b) => *b,
                Node::Var(v) => a.get(*v).ok_or(EvalError::Unbound(*v))?,
                Node::Not(c) => !memo[c],
                Node::And(cs) => cs.iter().all(|c| memo[c]),
                Node::Or(cs) => cs.iter().any(|c| memo[c]),
            };
            memo.insert(n, v);
        }
        Ok(memo[&e])
    }

    /// Variables referenced by `e`.
    pub fn support(&self, e: ExprId) -> BTreeSet<Var> {
        self.postorder(&[e])
            .into_iter()
            .filter_map(|n| match self.node(n) {
                Node::Var(v) => Some(*v),
                _ => None,
            })
            .collect()
    }

    /// Number of distinct nodes reachable from `e`.
    pub fn size(&self, e: ExprId) -> usize {
        self.postorder(&[e]).len()
    }

    /// Replaces every `Var(v)` by `g`.
    pub fn substitute(&mut self, e: ExprId, v: Var, g: ExprId) -> ExprId {
        let map = HashMap::from([(v, g)]);
        self.substitute_map(e, &map)
    }

    /// Simultaneous substitution of several variables.
    pub fn substitute_map(&mut self, e: ExprId, map: &HashMap<Var, ExprId>) -> ExprId {
        let mut memo: HashMap<ExprId, ExprId> = HashMap::new();
        for n in self.postorder(&[e]) {
            let out = match self.node(n).clone() {
                Node::Const(_) => n,
                Node::Var(v) => map.get(&v).copied().unwrap_or(n),
                Node::Not(c) => {
                    let c2 = memo[&c];
                    if c2 == c {
                        n
                    } else {
                        self.not(c2)
                    }
                }
                Node::And(cs) | Node::Or(cs) => {
                    let is_and = matches!(self.node(n), Node::And(_));
                    let cs2: Vec<ExprId> = cs.iter().map(|c| memo[c]).collect();
                    if cs2 == cs {
                        n
                    } else {
                        self.nary(is_and, cs2)
                    }
                }
            };
            memo.insert(n, out);
        }
        memo[&e]
    }

    /// Renders `e` in prefix notation. `name` prints a variable.
    pub fn render_with<F: Fn(Var) -> String>(&self, e: ExprId, name: &F) -> String {
        let mut out = String::new();
        self.render_into(e, name, &mut out);
        out
    }

    /// Renders with every variable printed as `x<i>`.
    pub fn render(&self, e: ExprId) -> String {
        self.render_with(e, &|v: Var| format!("x{v}"))
    }

    fn render_into<F: Fn(Var) -> String>(&self, e: ExprId, name: &F, out: &mut String) {
        // Explicit stack: rendered trees can be deeper than the call stack allows.
        enum Item {
            Expr(ExprId),
            Text(&'static str),
        }
        let mut stack = vec![Item::Expr(e)];
        while let Some(item) = stack.pop() {
            match item {
                Item::Text(t) => out.push_str(t),
                Item::Expr(e) => match self.node(e) {
                    Node::Const(true) => out.push_str("true"),
                    Node::Const(false) => out.push_str("false"),
                    Node::Var(v) => out.push_str(&name(*v)),
                    node => {
                        let (op, cs): (&str, &[ExprId]) = match node {
                            Node::Not(c) => ("not", std::slice::from_ref(c)),
                            Node::And(cs) => ("and", cs),
                            Node::Or(cs) => ("or", cs),
                            _ => unreachable!(),
                        };
                        let _ = write!(out, "({op}");
                        stack.push(Item::Text(")"));
                        for &c in cs.iter().rev() {
                            stack.push(Item::Expr(c));
                            stack.push(Item::Text(" "));
                        }
                    }
                },
            }
        }
    }

    /// Parses prefix notation: `true`, `false`, `x<i>`/`y<i>`, `(not e)`,
    /// `(and e ...)`, `(or e ...)`.
    pub fn parse(&mut self, text: &str) -> Result<ExprId, ExprParseError> {
        let tokens = tokenize(text);
        let mut pos = 0;
        let e = self.parse_tokens(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(ExprParseError::Trailing(tokens[pos].to_string()));
        }
        Ok(e)
    }

    fn parse_tokens(&mut self, tokens: &[&str], pos: &mut usize) -> Result<ExprId, ExprParseError> {
        // Frames of (operator, collected children).
        let mut frames: Vec<(String, Vec<ExprId>)> = Vec::new();
        loop {
            let tok = *tokens.get(*pos).ok_or(ExprParseError::UnexpectedEnd)?;
            *pos += 1;
            let done = match tok {
                "(" => {
                    let op = *tokens.get(*pos).ok_or(ExprParseError::UnexpectedEnd)?;
                    *pos += 1;
                    if !matches!(op, "and" | "or" | "not") {
                        return Err(ExprParseError::UnknownOperator(op.to_string()));
                    }
                    frames.push((op.to_string(), Vec::new()));
                    None
                }
                ")" => {
                    let (op, cs) = frames.pop().ok_or(ExprParseError::Unbalanced)?;
                    let e = match op.as_str() {
                        "not" => {
                            if cs.len() != 1 {
                                return Err(ExprParseError::Arity(op));
                            }
                            self.not(cs[0])
                        }
                        "and" => self.and(cs),
                        _ => self.or(cs),
                    };
                    Some(e)
                }
                "true" => Some(self.tru()),
                "false" => Some(self.fls()),
                atom => Some(self.var(parse_var_name(atom)?)),
            };
            if let Some(e) = done {
                match frames.last_mut() {
                    Some((_, cs)) => cs.push(e),
                    None => return Ok(e),
                }
            }
        }
    }
}

fn tokenize(text: &str) -> Vec<&str> {
    let mut tokens = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in text.char_indices() {
        if ch == '(' || ch == ')' || ch.is_whitespace() {
            if let Some(s) = start.take() {
                tokens.push(&text[s..i]);
            }
            if !ch.is_whitespace() {
                tokens.push(&text[i..i + 1]);
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push(&text[s..]);
    }
    tokens
}

/// `x<i>` or `y<i>` with `i ≥ 1`.
pub fn parse_var_name(atom: &str) -> Result<Var, ExprParseError> {
    let digits = atom
        .strip_prefix('x')
        .or_else(|| atom.strip_prefix('y'))
        .ok_or_else(|| ExprParseError::BadAtom(atom.to_string()))?;
    match digits.parse::<u32>() {
        Ok(i) if i >= 1 => Ok(Var::new(i)),
        _ => Err(ExprParseError::BadAtom(atom.to_string())),
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExprParseError {
    #[error("unexpected end of expression")]
    UnexpectedEnd,
    #[error("unbalanced parentheses")]
    Unbalanced,
    #[error("unknown operator `{0}`")]
    UnknownOperator(String),
    #[error("wrong number of arguments to `{0}`")]
    Arity(String),
    #[error("bad atom `{0}`")]
    BadAtom(String),
    #[error("trailing input at `{0}`")]
    Trailing(String),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> Var {
        Var::new(i)
    }

    #[test]
    fn hash_consing_shares_nodes() {
        let mut a = ExprArena::new();
        let x1 = a.var(v(1));
        let x2 = a.var(v(2));
        let e1 = a.and2(x1, x2);
        let e2 = a.and2(x2, x1);
        assert_eq!(e1, e2);
        let n = a.not(e1);
        assert_eq!(a.not(n), e1);
    }

    #[test]
    fn flattening_and_folding() {
        let mut a = ExprArena::new();
        let (x1, x2, x3) = (a.var(v(1)), a.var(v(2)), a.var(v(3)));
        let inner = a.and2(x1, x2);
        let outer = a.and2(inner, x3);
        assert_eq!(a.node(outer), &Node::And(vec![x1, x2, x3]));
        let t = a.tru();
        assert_eq!(a.and2(x1, t), x1);
        let f = a.fls();
        assert_eq!(a.and2(x1, f), f);
        let nx1 = a.not(x1);
        assert_eq!(a.or2(x1, nx1), t);
        assert_eq!(a.and2(x1, x1), x1);
        assert_eq!(a.and(std::iter::empty()), t);
        assert_eq!(a.or(std::iter::empty()), f);
    }

    #[test]
    fn eval_worked_formula() {
        // (¬x1 ∧ x2) ∨ x1 at x1=0, x2=1
        let mut a = ExprArena::new();
        let (x1, x2) = (a.var(v(1)), a.var(v(2)));
        let nx1 = a.not(x1);
        let p = a.and2(nx1, x2);
        let e = a.or2(p, x1);
        let asg = Assignment::from_pairs([(v(1), false), (v(2), true)]);
        assert_eq!(a.eval(e, &asg), Ok(true));
        assert_eq!(a.eval(a.tru(), &Assignment::default()), Ok(true));
        assert_eq!(a.eval(x2, &Assignment::default()), Err(EvalError::Unbound(v(2))));
    }

    #[test]
    fn substitute_examples() {
        let mut a = ExprArena::new();
        let (x1, x2, y1) = (a.var(v(1)), a.var(v(2)), a.var(v(3)));
        let g = a.or2(x1, x2);
        assert_eq!(a.substitute(y1, v(3), g), g);
        let e = a.and2(y1, x1);
        let r = a.substitute(e, v(3), g);
        let expected = a.and2(g, x1);
        assert_eq!(r, expected);
        assert_eq!(a.substitute(x2, v(3), g), x2);
    }

    #[test]
    fn render_and_parse() {
        let mut a = ExprArena::new();
        let e = a.parse("(or (and (not x1) x2) x1)").unwrap();
        let text = a.render(e);
        assert_eq!(a.parse(&text).unwrap(), e);
        assert_eq!(a.parse("true").unwrap(), a.tru());
        assert_eq!(a.parse("(not (not y4))").unwrap(), a.var(v(4)));
        assert!(matches!(a.parse("(xor x1 x2)"), Err(ExprParseError::UnknownOperator(_))));
        assert!(matches!(a.parse("(and x1"), Err(ExprParseError::UnexpectedEnd)));
        assert!(matches!(a.parse("x0"), Err(ExprParseError::BadAtom(_))));
        assert!(matches!(a.parse("x1 x2"), Err(ExprParseError::Trailing(_))));
        assert!(matches!(a.parse("(not x1 x2)"), Err(ExprParseError::Arity(_))));
    }

    #[test]
    fn support_and_size() {
        let mut a = ExprArena::new();
        let e = a.parse("(or (and x1 x3) (and x1 x2))").unwrap();
        assert_eq!(a.support(e), BTreeSet::from([v(1), v(2), v(3)]));
        assert_eq!(a.size(e), 6);
    }
}

mod common;

use common::*;
use proptest::prelude::*;
use skolem_core::formula::{parse_qdimacs, tseitin, CnfFormula, ExprArena, ExprId, Lit, Var};

#[derive(Clone, Debug)]
enum Shape {
    Var(u32),
    Const(bool),
    Not(Box<Shape>),
    And(Vec<Shape>),
    Or(Vec<Shape>),
}

fn shape(max_var: u32) -> impl Strategy<Value = Shape> {
    let leaf = prop_oneof![(1..=max_var).prop_map(Shape::Var), any::<bool>().prop_map(Shape::Const)];
    leaf.prop_recursive(4, 24, 4, |inner| {
        prop_oneof![
            inner.clone().prop_map(|s| Shape::Not(Box::new(s))),
            prop::collection::vec(inner.clone(), 0..4).prop_map(Shape::And),
            prop::collection::vec(inner, 0..4).prop_map(Shape::Or),
        ]
    })
}

fn build(a: &mut ExprArena, s: &Shape) -> ExprId {
    match s {
        Shape::Var(i) => a.var(Var::new(*i)),
        Shape::Const(b) => a.constant(*b),
        Shape::Not(c) => {
            let c = build(a, c);
            a.not(c)
        }
        Shape::And(cs) => {
            let cs: Vec<ExprId> = cs.iter().map(|c| build(a, c)).collect();
            a.and(cs)
        }
        Shape::Or(cs) => {
            let cs: Vec<ExprId> = cs.iter().map(|c| build(a, c)).collect();
            a.or(cs)
        }
    }
}

fn eval_shape(s: &Shape, p: &skolem_core::formula::Assignment) -> bool {
    match s {
        Shape::Var(i) => p.value(Var::new(*i)),
        Shape::Const(b) => *b,
        Shape::Not(c) => !eval_shape(c, p),
        Shape::And(cs) => cs.iter().all(|c| eval_shape(c, p)),
        Shape::Or(cs) => cs.iter().any(|c| eval_shape(c, p)),
    }
}

proptest! {
    #[test]
    fn hash_consing_and_evaluation(s in shape(6)) {
        let mut a = ExprArena::new();
        let e1 = build(&mut a, &s);
        let e2 = build(&mut a, &s);
        prop_assert_eq!(e1, e2);
        let vars: Vec<Var> = (1..=6).map(Var::new).collect();
        for p in assignments(&vars) {
            prop_assert_eq!(a.eval(e1, &p).unwrap(), eval_shape(&s, &p));
        }
    }

    #[test]
    fn substitution_semantics(s in shape(6), g in shape(6), v in 1u32..=6) {
        let mut a = ExprArena::new();
        let e = build(&mut a, &s);
        let ge = build(&mut a, &g);
        let r = a.substitute(e, Var::new(v), ge);
        let vars: Vec<Var> = (1..=6).map(Var::new).collect();
        for p in assignments(&vars) {
            let mut q = p.clone();
            q.set(Var::new(v), a.eval(ge, &p).unwrap());
            prop_assert_eq!(a.eval(r, &p).unwrap(), a.eval(e, &q).unwrap());
        }
    }

    #[test]
    fn tseitin_projects_exactly(s in shape(5)) {
        let mut a = ExprArena::new();
        let e = build(&mut a, &s);
        let mut sink = CnfFormula::new(5);
        let l = tseitin(&a, e, &mut sink);
        sink.add_clause([l]);
        let orig: Vec<Var> = (1..=5).map(Var::new).collect();
        let aux: Vec<Var> = (6..=sink.num_vars()).map(Var::new).collect();
        prop_assume!(aux.len() <= 10);
        let aux_pts = assignments(&aux);
        for p in assignments(&orig) {
            let extendable = aux_pts.iter().any(|q| sink.eval(&merge(&p, q)).unwrap());
            prop_assert_eq!(extendable, a.eval(e, &p).unwrap());
        }
    }

    #[test]
    fn constant_substitution(clauses in prop::collection::vec(prop::collection::vec((1u32..=8, any::<bool>()), 0..4), 0..12), v in 1u32..=8, b in any::<bool>()) {
        let mut f = CnfFormula::new(8);
        for c in &clauses {
            f.add_clause(c.iter().map(|&(x, s)| Var::new(x).lit(s)).collect::<Vec<Lit>>());
        }
        let g = f.substitute_const(Var::new(v), b);
        let rest: Vec<Var> = (1..=8).map(Var::new).filter(|u| u.index() != v).collect();
        for p in assignments(&rest) {
            let mut q = p.clone();
            q.set(Var::new(v), b);
            prop_assert_eq!(g.eval(&q).unwrap(), f.eval(&q).unwrap());
        }
    }
}

#[test]
fn fixture_round_trip() {
    let text = include_str!("fixtures/example1.qdimacs");
    let spec = parse_qdimacs(text).unwrap();
    let again = parse_qdimacs(&spec.to_qdimacs()).unwrap();
    assert_eq!(spec, again);
    assert_eq!(spec.x_vars, vec![v(1), v(2)]);
    assert_eq!(spec.y_vars, vec![v(3), v(4), v(5)]);
    assert_eq!(spec.matrix.len(), 8);
}

#[test]
fn example1_model_count() {
    let spec = example1();
    let all: Vec<Var> = (1..=5).map(Var::new).collect();
    let count = assignments(&all).iter().filter(|p| spec.matrix.eval(p).unwrap()).count();
    let models = skolem_core::sat::enumerate_models(&spec.matrix, 1000).unwrap();
    assert_eq!(models.len(), count);
    assert!(skolem_core::sat::enumerate_models(&CnfFormula::unsat(3), 10).unwrap().is_empty());
    let or = CnfFormula::from_dimacs(2, &[&[1, 2]]);
    assert_eq!(skolem_core::sat::enumerate_models(&or, 10).unwrap().len(), 3);
}

mod common;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skolem_core::formula::{parse_qdimacs, CnfFormula, ExprArena, Lit, QbfSpec, Var};
use skolem_core::preprocess::{check_negative_unate, check_positive_unate, preprocess};

fn random_cnf(rng: &mut ChaCha8Rng, n: u32) -> CnfFormula {
    let mut f = CnfFormula::new(n);
    for _ in 0..rng.gen_range(1..=2 * n) {
        let len = rng.gen_range(1..=3);
        let c: Vec<Lit> = (0..len).map(|_| Var::new(rng.gen_range(1..=n)).lit(rng.gen())).collect();
        f.add_clause(c);
    }
    f
}

#[test]
fn single_checks_match_truth_table() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let n = rng.gen_range(2..=10);
        let f = random_cnf(&mut rng, n);
        let y = Var::new(rng.gen_range(1..=n));
        assert_eq!(check_positive_unate(&f, y, None).holds(), unate_by_table(&f, y, true));
        assert_eq!(check_negative_unate(&f, y, None).holds(), unate_by_table(&f, y, false));
    }
}

/// Sequential pass re-implemented on truth tables.
fn table_pass(spec: &QbfSpec) -> (Vec<Var>, Vec<Var>, CnfFormula) {
    let mut f = spec.matrix.clone();
    let (mut pos, mut neg) = (vec![], vec![]);
    for &y in &spec.y_vars {
        if unate_by_table(&f, y, true) {
            pos.push(y);
            f = f.substitute_const(y, true);
        } else if unate_by_table(&f, y, false) {
            neg.push(y);
            f = f.substitute_const(y, false);
        }
    }
    (pos, neg, f)
}

#[test]
fn pass_matches_truth_table_and_preserves_realizability() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let n = rng.gen_range(2..=10);
        let f = random_cnf(&mut rng, n);
        let nx = rng.gen_range(0..n);
        let spec = QbfSpec::new(f, (1..=nx).map(Var::new).collect(), (nx + 1..=n).map(Var::new).collect()).unwrap();
        let mut a = ExprArena::new();
        let (rep, funcs) = preprocess(&spec, &mut a, None);
        let (pos, neg, reduced) = table_pass(&spec);
        assert_eq!(rep.positive, pos);
        assert_eq!(rep.negative, neg);
        assert_eq!(rep.reduced_matrix.clauses(), reduced.clauses());
        assert!(rep.positive.iter().all(|p| !rep.negative.contains(p)));
        assert_eq!(funcs.len(), pos.len() + neg.len());
        // ∃Y F and ∃Y F_reduced agree on every input
        let ys = assignments(&spec.y_vars);
        for x in assignments(&spec.x_vars) {
            let before = ys.iter().any(|y| spec.matrix.eval(&merge(&x, y)).unwrap());
            let after = ys.iter().any(|y| rep.reduced_matrix.eval(&merge(&x, y)).unwrap());
            assert_eq!(before, after);
        }
    }
}

#[test]
fn example1_detects_y3_only() {
    let spec = example1();
    let mut a = ExprArena::new();
    let (rep, funcs) = preprocess(&spec, &mut a, None);
    assert_eq!(rep.positive, vec![v(5)]);
    assert!(rep.negative.is_empty());
    assert_eq!(a.as_const(funcs[0].1), Some(true));
    assert!(!check_negative_unate(&spec.matrix, v(5), None).holds());
    // reduced ≡ (y1 ↔ x1∨x2) ∧ (y2 ↔ x1∧(x2∨y1))
    for p in assignments(&[v(1), v(2), v(3), v(4)]) {
        let (x1, x2, y1, y2) = (p.value(v(1)), p.value(v(2)), p.value(v(3)), p.value(v(4)));
        let want = (y1 == (x1 || x2)) && (y2 == (x1 && (x2 || y1)));
        assert_eq!(rep.reduced_matrix.eval(&p).unwrap(), want);
    }
}

#[test]
fn mutual_exclusion_has_no_unates() {
    let spec = parse_qdimacs("p cnf 2 2\ne 1 2 0\n1 2 0\n-1 -2 0\n").unwrap();
    let (rep, _) = preprocess(&spec, &mut ExprArena::new(), None);
    assert!(rep.positive.is_empty() && rep.negative.is_empty());
}

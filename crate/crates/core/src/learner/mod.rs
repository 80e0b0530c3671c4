//! Candidate functions from decision trees, and the output ordering used for
//! repair and substitution.

mod deps;
mod tree;

pub use deps::{find_order, CycleError, DependencySets};
pub use tree::{gini, gini_decrease, DecisionTree, Hyperparams, TreeNode};

use crate::formula::{ExprArena, ExprId, Var};
use crate::sampler::SampleSet;

/// Features usable for `y`: all inputs plus outputs that do not already
/// depend on `y`.
pub fn feature_set(x_vars: &[Var], y_vars: &[Var], y: Var, deps: &DependencySets) -> Vec<Var> {
    let mut f: Vec<Var> = x_vars.to_vec();
    f.extend(y_vars.iter().copied().filter(|&k| k != y && !deps.depends_on(k, y)));
    f
}

#[derive(Clone, Debug)]
pub struct Candidate {
    pub var: Var,
    pub func: ExprId,
    pub tree: DecisionTree,
}

/// Learns a candidate for `y` and records the outputs it uses in `deps`.
pub fn candidate_skf(
    samples: &SampleSet,
    x_vars: &[Var],
    y_vars: &[Var],
    y: Var,
    deps: &mut DependencySets,
    h: &Hyperparams,
    arena: &mut ExprArena,
) -> Candidate {
    let feats = feature_set(x_vars, y_vars, y, deps);
    let tree = DecisionTree::build(samples, &feats, y, h);
    let func = tree.extract_function(arena);
    for k in arena.support(func) {
        if y_vars.contains(&k) {
            deps.add(y, k);
        }
    }
    Candidate { var: y, func, tree }
}

/// Learns candidates for every output in ascending index order.
pub fn learn_all(
    samples: &SampleSet,
    x_vars: &[Var],
    y_vars: &[Var],
    h: &Hyperparams,
    arena: &mut ExprArena,
) -> (Vec<Candidate>, DependencySets) {
    let mut deps = DependencySets::new(y_vars);
    let mut order = y_vars.to_vec();
    order.sort();
    let cands = order
        .into_iter()
        .map(|y| candidate_skf(samples, x_vars, y_vars, y, &mut deps, h, arena))
        .collect();
    (cands, deps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Assignment;

    fn v(i: u32) -> Var {
        Var::new(i)
    }

    fn table() -> SampleSet {
        // x1 x2 y1 y2
        let rows = [[0, 0, 0, 0], [0, 1, 1, 0], [0, 1, 1, 0], [1, 0, 1, 1], [1, 1, 1, 1]];
        SampleSet {
            columns: vec![v(1), v(2), v(3), v(4)],
            rows: rows.iter().map(|r| r.iter().map(|&b| b == 1).collect()).collect(),
            stats: vec![],
        }
    }

    #[test]
    fn worked_example_trees() {
        let s = table();
        let mut a = ExprArena::new();
        let (c, deps) = learn_all(&s, &[v(1), v(2)], &[v(3), v(4)], &Hyperparams::default(), &mut a);
        let vars = [v(1), v(2)];
        for bits in 0..4 {
            let p = Assignment::from_bits(&vars, bits);
            let (x1, x2) = (p.value(v(1)), p.value(v(2)));
            assert_eq!(a.eval(c[0].func, &p).unwrap(), x1 || x2);
            assert_eq!(a.eval(c[1].func, &p).unwrap(), x1);
        }
        assert!(matches!(c[0].tree.nodes[c[0].tree.root], TreeNode::Split { feature, .. } if feature == v(2)));
        assert!(deps.get(v(3)).is_empty() && deps.get(v(4)).is_empty());
    }

    #[test]
    fn gini_values() {
        assert!((gini(4, 5) - 0.32).abs() < 1e-12);
        assert!((gini_decrease(4, 5, 1, 2) - 0.12).abs() < 1e-12);
    }

    #[test]
    fn constant_labels_give_leaf() {
        let mut s = table();
        for r in &mut s.rows {
            r[2] = false;
        }
        let t = DecisionTree::build(&s, &[v(1), v(2)], v(3), &Hyperparams::default());
        assert_eq!(t, DecisionTree::leaf(false));
        let mut a = ExprArena::new();
        let f = t.extract_function(&mut a);
        assert_eq!(a.as_const(f), Some(false));
    }

    #[test]
    fn empty_data_gives_true() {
        let s = SampleSet { columns: vec![v(1), v(2)], rows: vec![], stats: vec![] };
        assert_eq!(DecisionTree::build(&s, &[v(1)], v(2), &Hyperparams::default()), DecisionTree::leaf(true));
    }

    #[test]
    fn transitive_closure_reaches_dependents() {
        let mut d = DependencySets::new(&[v(1), v(2), v(3), v(4)]);
        d.add(v(1), v(2));
        d.add(v(2), v(3));
        assert!(d.depends_on(v(1), v(3)));
        d.add(v(3), v(4));
        assert!(d.depends_on(v(1), v(4)) && d.depends_on(v(2), v(4)));
        assert_eq!(find_order(&[v(1), v(2), v(3), v(4)], &d).unwrap(), vec![v(1), v(2), v(3), v(4)]);
    }

    #[test]
    fn order_puts_dependents_first() {
        let mut d = DependencySets::new(&[v(1), v(2), v(3)]);
        d.add(v(1), v(3));
        assert_eq!(find_order(&[v(1), v(2), v(3)], &d).unwrap(), vec![v(1), v(2), v(3)]);
        let mut d = DependencySets::new(&[v(1), v(2), v(3)]);
        d.add(v(3), v(1));
        assert_eq!(find_order(&[v(1), v(2), v(3)], &d).unwrap(), vec![v(2), v(3), v(1)]);
    }

    #[test]
    fn dot_output() {
        let t = DecisionTree::build(&table(), &[v(1), v(2)], v(4), &Hyperparams::default());
        let dot = t.to_dot("y4", &|x| format!("x{}", x.index()));
        assert!(dot.starts_with("digraph \"y4\" {") && dot.contains("label=\"x1\""));
    }
}

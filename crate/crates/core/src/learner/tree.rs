use std::fmt::Write as _;

use crate::formula::{Assignment, ExprArena, ExprId, Var};
use crate::sampler::SampleSet;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hyperparams {
    pub min_impurity_decrease: f64,
    pub max_depth: Option<usize>,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Hyperparams {
            min_impurity_decrease: 0.005,
            max_depth: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeNode {
    Leaf(bool),
    Split { feature: Var, low: usize, high: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionTree {
    pub nodes: Vec<TreeNode>,
    pub root: usize,
}

/// Gini impurity of a node with `pos` positive labels out of `total`.
pub fn gini(pos: usize, total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let p = pos as f64 / total as f64;
    1.0 - p * p - (1.0 - p) * (1.0 - p)
}

/// Parent impurity minus the size-weighted mean of the child impurities.
pub fn gini_decrease(pos: usize, total: usize, low_pos: usize, low_total: usize) -> f64 {
    let (high_pos, high_total) = (pos - low_pos, total - low_total);
    let t = total as f64;
    gini(pos, total)
        - (low_total as f64 / t) * gini(low_pos, low_total)
        - (high_total as f64 / t) * gini(high_pos, high_total)
}

struct Job {
    slot: usize,
    rows: Vec<u32>,
    used: Vec<bool>,
    depth: usize,
}

impl DecisionTree {
    pub fn leaf(label: bool) -> DecisionTree {
        DecisionTree {
            nodes: vec![TreeNode::Leaf(label)],
            root: 0,
        }
    }

    /// ID3 with Gini impurity. `features` are tried in ascending variable
    /// order so the lowest index wins ties. Features constant within a node
    /// are skipped. Majority ties give label 1; no rows gives a single leaf 1.
    pub fn build(samples: &SampleSet, features: &[Var], label: Var, h: &Hyperparams) -> DecisionTree {
        let mut feats: Vec<Var> = features.to_vec();
        feats.sort();
        feats.dedup();
        let cols: Vec<usize> = feats
            .iter()
            .map(|&f| samples.column(f).expect("feature is a sample column"))
            .collect();
        let lc = samples.column(label).expect("label is a sample column");
        if samples.is_empty() {
            return DecisionTree::leaf(true);
        }
        let rows = &samples.rows;
        let mut nodes = vec![TreeNode::Leaf(true)];
        let mut stack = vec![Job {
            slot: 0,
            rows: (0..rows.len() as u32).collect(),
            used: vec![false; feats.len()],
            depth: 0,
        }];
        while let Some(job) = stack.pop() {
            let total = job.rows.len();
            let pos = job.rows.iter().filter(|&&r| rows[r as usize][lc]).count();
            let majority = 2 * pos >= total;
            let pure = pos == 0 || pos == total;
            let depth_ok = h.max_depth.is_none_or(|d| job.depth < d);
            let mut best: Option<(usize, f64)> = None;
            if !pure && depth_ok {
                for (fi, &c) in cols.iter().enumerate() {
                    if job.used[fi] {
                        continue;
                    }
                    let mut low_total = 0;
                    let mut low_pos = 0;
                    for &r in &job.rows {
                        let row = &rows[r as usize];
                        if !row[c] {
                            low_total += 1;
                            if row[lc] {
                                low_pos += 1;
                            }
                        }
                    }
                    if low_total == 0 || low_total == total {
                        continue;
                    }
                    let dec = gini_decrease(pos, total, low_pos, low_total);
                    if best.is_none_or(|(_, b)| dec > b) {
                        best = Some((fi, dec));
                    }
                }
            }
            match best {
                Some((fi, dec)) if dec >= h.min_impurity_decrease => {
                    let c = cols[fi];
                    let (high, low): (Vec<u32>, Vec<u32>) = job.rows.iter().partition(|&&r| rows[r as usize][c]);
                    let lo = nodes.len();
                    let hi = lo + 1;
                    nodes.push(TreeNode::Leaf(true));
                    nodes.push(TreeNode::Leaf(true));
                    nodes[job.slot] = TreeNode::Split {
                        feature: feats[fi],
                        low: lo,
                        high: hi,
                    };
                    let mut used = job.used;
                    used[fi] = true;
                    stack.push(Job { slot: hi, rows: high, used: used.clone(), depth: job.depth + 1 });
                    stack.push(Job { slot: lo, rows: low, used, depth: job.depth + 1 });
                }
                _ => nodes[job.slot] = TreeNode::Leaf(majority),
            }
        }
        DecisionTree { nodes, root: 0 }
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn classify(&self, a: &Assignment) -> bool {
        let mut n = self.root;
        loop {
            match self.nodes[n] {
                TreeNode::Leaf(b) => return b,
                TreeNode::Split { feature, low, high } => {
                    n = if a.value(feature) { high } else { low };
                }
            }
        }
    }

    /// Root-to-leaf paths as (literal list, label), low branch first.
    pub fn paths(&self) -> Vec<(Vec<crate::formula::Lit>, bool)> {
        let mut out = Vec::new();
        let mut stack = vec![(self.root, Vec::new())];
        while let Some((n, path)) = stack.pop() {
            match self.nodes[n] {
                TreeNode::Leaf(b) => out.push((path, b)),
                TreeNode::Split { feature, low, high } => {
                    let mut hp = path.clone();
                    hp.push(feature.pos());
                    let mut lp = path;
                    lp.push(feature.neg());
                    stack.push((high, hp));
                    stack.push((low, lp));
                }
            }
        }
        out
    }

    /// Disjunction over label-1 paths of the conjunction of branch literals.
    pub fn extract_function(&self, arena: &mut ExprArena) -> ExprId {
        let cubes: Vec<ExprId> = self
            .paths()
            .into_iter()
            .filter(|(_, b)| *b)
            .map(|(p, _)| arena.cube(&p))
            .collect();
        arena.or(cubes)
    }

    /// Graphviz rendering; `name` labels feature variables.
    pub fn to_dot(&self, title: &str, name: &dyn Fn(Var) -> String) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{title}\" {{");
        for (i, n) in self.nodes.iter().enumerate() {
            match *n {
                TreeNode::Leaf(b) => {
                    let _ = writeln!(s, "  n{i} [shape=box,label=\"{}\"];", b as u8);
                }
                TreeNode::Split { feature, low, high } => {
                    let _ = writeln!(s, "  n{i} [label=\"{}\"];", name(feature));
                    let _ = writeln!(s, "  n{i} -> n{low} [label=\"0\",style=dashed];");
                    let _ = writeln!(s, "  n{i} -> n{high} [label=\"1\"];");
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

use std::collections::{BTreeMap, BTreeSet};

use crate::formula::Var;

/// `d[y]` holds every output that the function for `y` depends on, directly or
/// transitively.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DependencySets {
    d: BTreeMap<Var, BTreeSet<Var>>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq, Clone)]
#[error("dependency cycle among outputs {0:?}")]
pub struct CycleError(pub Vec<Var>);

impl DependencySets {
    pub fn new(y_vars: &[Var]) -> DependencySets {
        DependencySets {
            d: y_vars.iter().map(|&y| (y, BTreeSet::new())).collect(),
        }
    }

    pub fn get(&self, y: Var) -> &BTreeSet<Var> {
        static EMPTY: BTreeSet<Var> = BTreeSet::new();
        self.d.get(&y).unwrap_or(&EMPTY)
    }

    pub fn depends_on(&self, y: Var, k: Var) -> bool {
        self.get(y).contains(&k)
    }

    /// Records that the function for `j` uses `k`. Keeps every set transitively
    /// closed, including the sets of outputs that already depend on `j`.
    pub fn add(&mut self, j: Var, k: Var) {
        let mut add: BTreeSet<Var> = self.get(k).clone();
        add.insert(k);
        let dependents: Vec<Var> = self
            .d
            .iter()
            .filter(|(_, s)| s.contains(&j))
            .map(|(&m, _)| m)
            .collect();
        for m in dependents.into_iter().chain([j]) {
            self.d.entry(m).or_default().extend(add.iter().copied());
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, &BTreeSet<Var>)> {
        self.d.iter().map(|(&v, s)| (v, s))
    }

    pub fn is_acyclic(&self) -> bool {
        self.d.iter().all(|(v, s)| !s.contains(v))
    }
}

/// Orders outputs so that every function only refers to outputs placed after
/// it: dependents come before their dependencies. Ties go to the lower index.
pub fn find_order(y_vars: &[Var], deps: &DependencySets) -> Result<Vec<Var>, CycleError> {
    // indegree = number of outputs depending on y
    let mut indegree: BTreeMap<Var, usize> = y_vars.iter().map(|&y| (y, 0)).collect();
    for (_, s) in deps.iter() {
        for k in s {
            if let Some(c) = indegree.get_mut(k) {
                *c += 1;
            }
        }
    }
    let mut ready: BTreeSet<Var> = indegree.iter().filter(|(_, &c)| c == 0).map(|(&v, _)| v).collect();
    let mut order = Vec::with_capacity(y_vars.len());
    while let Some(&y) = ready.iter().next() {
        ready.remove(&y);
        order.push(y);
        for k in deps.get(y) {
            if let Some(c) = indegree.get_mut(k) {
                *c -= 1;
                if *c == 0 {
                    ready.insert(*k);
                }
            }
        }
    }
    if order.len() != y_vars.len() {
        let rest = y_vars.iter().copied().filter(|y| !order.contains(y)).collect();
        return Err(CycleError(rest));
    }
    Ok(order)
}

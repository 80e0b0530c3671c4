//! Partial MaxSAT with unit-weight soft literals.
//!
//! Core-guided linear search gives an upper bound, a totalizer at-most-k
//! layer proves it optimal, and a final lexicographic pass fixes which optimum
//! is returned so results are reproducible.

mod totalizer;

use std::fmt::Write as _;

use crate::formula::{Assignment, CnfFormula, Lit, Var};
use crate::sat::{SatOutcome, Solver, UnknownReason};

pub use totalizer::Totalizer;

#[derive(Clone, Debug)]
pub struct MaxSatQuery {
    pub hard: CnfFormula,
    /// Soft unit literals with their tags. Order is the tie-break priority
    /// (earlier softs are preferred satisfied) and the order of `falsified`.
    pub soft: Vec<(Lit, Var)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxSatResult {
    pub model: Assignment,
    pub falsified: Vec<Var>,
}

impl MaxSatResult {
    pub fn cost(&self) -> usize {
        self.falsified.len()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MaxSatOptions {
    /// Prefer satisfying later softs instead of earlier ones among optima.
    pub reverse_tie_break: bool,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq, Clone)]
pub enum MaxSatError {
    #[error("hard clauses are unsatisfiable")]
    HardUnsat,
    #[error("duplicate soft tag {0}")]
    DuplicateTag(Var),
    #[error("solver gave up: {0:?}")]
    Unknown(UnknownReason),
}

pub fn maxsat(q: &MaxSatQuery) -> Result<MaxSatResult, MaxSatError> {
    maxsat_with(q, MaxSatOptions::default(), None)
}

/// Solves `q`. `configure` may set a deadline or budget on the private solver.
pub fn maxsat_with(
    q: &MaxSatQuery,
    opts: MaxSatOptions,
    configure: Option<&dyn Fn(&mut Solver)>,
) -> Result<MaxSatResult, MaxSatError> {
    let mut tags: Vec<Var> = q.soft.iter().map(|&(_, t)| t).collect();
    tags.sort();
    if let Some(w) = tags.windows(2).find(|w| w[0] == w[1]) {
        return Err(MaxSatError::DuplicateTag(w[0]));
    }
    if let Ok(dir) = std::env::var("SKOLEM_DUMP_WCNF") {
        let _ = std::fs::create_dir_all(&dir);
        let name = format!("maxsat-{:016x}.wcnf", fingerprint(q));
        let _ = std::fs::write(std::path::Path::new(&dir).join(name), to_wcnf(q));
    }

    let mut s = Solver::from_cnf(&q.hard);
    if let Some(f) = configure {
        f(&mut s);
    }
    let base_model = match s.solve(&[]) {
        SatOutcome::Sat(m) => m,
        SatOutcome::Unsat { .. } => return Err(MaxSatError::HardUnsat),
        SatOutcome::Unknown(r) => return Err(MaxSatError::Unknown(r)),
    };

    let softs: Vec<Lit> = q.soft.iter().map(|&(l, _)| l).collect();
    let violated = |m: &Assignment| softs.iter().filter(|&&l| !holds(m, l)).count();

    // Core-guided linear search for an upper bound.
    let mut active: Vec<usize> = (0..softs.len()).collect();
    let mut best = base_model;
    loop {
        let assumptions: Vec<Lit> = active.iter().map(|&i| softs[i]).collect();
        match s.solve(&assumptions) {
            SatOutcome::Sat(m) => {
                if violated(&m) <= violated(&best) {
                    best = m;
                }
                break;
            }
            SatOutcome::Unsat { core } => {
                let drop = active
                    .iter()
                    .copied()
                    .filter(|&i| core.contains(&softs[i]))
                    .min_by_key(|&i| q.soft[i].1);
                match drop {
                    Some(i) => active.retain(|&j| j != i),
                    None => return Err(MaxSatError::HardUnsat),
                }
            }
            SatOutcome::Unknown(r) => return Err(MaxSatError::Unknown(r)),
        }
    }
    let mut ub = violated(&best);

    // Descending cardinality check: at most ub-1 violations, and so on.
    let mut next = s.num_vars() + 1;
    let viol_lits: Vec<Lit> = softs.iter().map(|&l| !l).collect();
    let tot = Totalizer::build(&viol_lits, &mut next, &mut |c| {
        s.add_clause(&c);
    });
    while ub > 0 {
        match s.solve(&[tot.at_most(ub - 1).unwrap()]) {
            SatOutcome::Sat(m) => {
                ub = violated(&m);
                best = m;
            }
            SatOutcome::Unsat { .. } => break,
            SatOutcome::Unknown(r) => return Err(MaxSatError::Unknown(r)),
        }
    }

    // Lexicographic pass among optimal solutions.
    let mut fixed: Vec<Lit> = tot.at_most(ub).into_iter().collect();
    let order: Vec<usize> = if opts.reverse_tie_break {
        (0..softs.len()).rev().collect()
    } else {
        (0..softs.len()).collect()
    };
    for i in order {
        let l = softs[i];
        if holds(&best, l) {
            fixed.push(l);
            continue;
        }
        fixed.push(l);
        match s.solve(&fixed) {
            SatOutcome::Sat(m) => best = m,
            SatOutcome::Unsat { .. } => {
                fixed.pop();
                fixed.push(!l);
            }
            SatOutcome::Unknown(r) => return Err(MaxSatError::Unknown(r)),
        }
    }

    let model = best.project(&(1..=q.hard.num_vars().max(max_soft_var(q))).map(Var::new).collect::<Vec<_>>());
    let falsified = q
        .soft
        .iter()
        .filter(|&&(l, _)| !holds(&model, l))
        .map(|&(_, t)| t)
        .collect();
    Ok(MaxSatResult { model, falsified })
}

fn holds(m: &Assignment, l: Lit) -> bool {
    m.lit_value(l) == Some(true)
}

fn max_soft_var(q: &MaxSatQuery) -> u32 {
    q.soft.iter().map(|&(l, _)| l.var().index()).max().unwrap_or(0)
}

fn fingerprint(q: &MaxSatQuery) -> u64 {
    use std::hash::{Hash, Hasher};
    let mut h = std::collections::hash_map::DefaultHasher::new();
    to_wcnf(q).hash(&mut h);
    h.finish()
}

/// WDIMACS text: hard clauses carry the `top` weight, softs weight 1.
pub fn to_wcnf(q: &MaxSatQuery) -> String {
    let top = q.soft.len() + 1;
    let nvars = q.hard.num_vars().max(max_soft_var(q));
    let mut s = String::new();
    let _ = writeln!(s, "p wcnf {} {} {}", nvars, q.hard.len() + q.soft.len(), top);
    for c in q.hard.clauses() {
        let _ = write!(s, "{top}");
        for l in c.lits() {
            let _ = write!(s, " {l}");
        }
        s.push_str(" 0\n");
    }
    for (l, _) in &q.soft {
        let _ = writeln!(s, "1 {l} 0");
    }
    s
}

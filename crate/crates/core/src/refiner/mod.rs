//! Counterexample-guided repair of candidate functions.
//!
//! Each round checks the candidates with the error formula. A counterexample
//! is localized to a set of outputs (partial MaxSAT), and each blamed output
//! is either repaired with a cube taken from an unsat core or, when its value
//! is actually fine, the blame is pushed to earlier outputs.

mod repair;
mod verify;

use std::collections::{BTreeSet, HashMap, HashSet};

use log::debug;
use serde::Serialize;

use crate::formula::{Assignment, ExprArena, ExprId, QbfSpec, Var};
use crate::maxsat::{MaxSatError, MaxSatOptions};
use crate::sat::{Limits, SatOutcome, UnknownReason};

pub use repair::{
    apply_repair, fault_localize, gk_assumptions, naive_localize, repair_cube, self_substitution, substitute_all,
    Localization,
};
pub use verify::{build_error_formula, verify, Counterexample, ErrorFormula, VerifyOutcome};

pub const DEFAULT_SELF_SUB_THRESHOLD: u32 = 10;
pub const DEFAULT_ITERATION_CAP: usize = 5000;
/// Largest number of outputs eliminated by Shannon expansion in a
/// self-substitution.
pub const SELF_SUB_MAX_ELIMINATED: usize = 10;

/// Which counterexample values freeze the later outputs in a repair query.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, serde::Deserialize)]
pub enum YhatMode {
    /// `σ[Ŷ]`, the counterexample's witness values.
    #[default]
    Unprimed,
    /// `σ[Ŷ']`, the candidates' values.
    Primed,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, serde::Deserialize)]
pub enum LocalizationMode {
    #[default]
    MaxSat,
    /// Every output whose witness and candidate values differ.
    Naive,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RefineConfig {
    /// `None` disables self-substitution.
    pub self_sub_threshold: Option<u32>,
    pub iteration_cap: usize,
    pub yhat: YhatMode,
    pub localization: LocalizationMode,
    pub reverse_tie_break: bool,
    /// Candidates' output references read primed outputs in the error formula.
    pub primed_refs: bool,
    pub limits: Limits,
}

impl Default for RefineConfig {
    fn default() -> Self {
        RefineConfig {
            self_sub_threshold: Some(DEFAULT_SELF_SUB_THRESHOLD),
            iteration_cap: DEFAULT_ITERATION_CAP,
            yhat: YhatMode::Unprimed,
            localization: LocalizationMode::MaxSat,
            reverse_tie_break: false,
            primed_refs: true,
            limits: Limits::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RepairKind {
    UnsatCore { var: u32, core: Vec<i64> },
    SatPropagate { var: u32, appended: Vec<u32> },
    SelfSub { var: u32 },
    SelfSubSkipped { var: u32, eliminated: usize },
    SelfSubNoRepair { var: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundRecord {
    pub round: usize,
    pub ind: Vec<u32>,
    pub repairs: Vec<RepairKind>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq, Clone)]
pub enum RefineError {
    #[error("refinement did not converge within {0} rounds")]
    IterationCap(usize),
    #[error("solver gave up: {0:?}")]
    Unknown(UnknownReason),
    #[error("fault localization failed: {0}")]
    MaxSat(#[from] MaxSatError),
    #[error("output {0} still referenced after substitution")]
    ResidualOutput(Var),
}

/// Mutable refinement state for one synthesis run.
#[derive(Clone, Debug)]
pub struct RefineState {
    pub psi: HashMap<Var, ExprId>,
    /// Linear order: each function may only refer to outputs after it.
    pub order: Vec<Var>,
    pub refine_count: HashMap<Var, u32>,
    /// Outputs whose learned tree was a single leaf.
    pub single_node: HashSet<Var>,
    pub self_substituted: BTreeSet<Var>,
    pub rounds: usize,
    /// (output, input values, frozen values) of every core-based repair.
    seen_repairs: HashSet<(Var, Vec<bool>, Vec<bool>)>,
    pub repetition_violations: usize,
    pub records: Vec<RoundRecord>,
}

impl RefineState {
    pub fn new(psi: HashMap<Var, ExprId>, order: Vec<Var>, single_node: HashSet<Var>) -> RefineState {
        RefineState {
            refine_count: order.iter().map(|&y| (y, 0)).collect(),
            psi,
            order,
            single_node,
            self_substituted: BTreeSet::new(),
            rounds: 0,
            seen_repairs: HashSet::new(),
            repetition_violations: 0,
            records: Vec::new(),
        }
    }

    pub fn position(&self, y: Var) -> usize {
        self.order.iter().position(|&v| v == y).expect("output in order")
    }

    /// Outputs after `y` in the order.
    pub fn later(&self, y: Var) -> &[Var] {
        &self.order[self.position(y) + 1..]
    }

    pub fn total_repairs(&self) -> u64 {
        self.refine_count.values().map(|&c| c as u64).sum()
    }

    /// True once `y` was repaired more than `threshold` times and its tree
    /// was a single leaf.
    pub fn should_self_substitute(&self, y: Var, threshold: Option<u32>) -> bool {
        match threshold {
            Some(t) => self.refine_count.get(&y).copied().unwrap_or(0) > t && self.single_node.contains(&y),
            None => false,
        }
    }
}

/// One repair round for counterexample `cex`.
pub fn refine_skf(
    spec: &QbfSpec,
    arena: &mut ExprArena,
    state: &mut RefineState,
    cex: &Counterexample,
    cfg: &RefineConfig,
) -> Result<RoundRecord, RefineError> {
    let loc = match cfg.localization {
        LocalizationMode::MaxSat => fault_localize(
            spec,
            cex,
            MaxSatOptions {
                reverse_tie_break: cfg.reverse_tie_break,
            },
            &cfg.limits,
        )?,
        LocalizationMode::Naive => naive_localize(spec, cex),
    };
    let mut sigma = cex.sigma.clone();
    if let Some(m) = &loc.model {
        for &y in &spec.y_vars {
            sigma.set(y, m.value(y));
        }
    }
    let mut record = RoundRecord {
        round: state.rounds,
        ind: loc.ind.iter().map(|v| v.index()).collect(),
        repairs: Vec::new(),
    };

    let mut solver = cfg.limits.solver(&spec.matrix);
    // Worklist popped from the latest position in the order.
    let mut pending: BTreeSet<(usize, Var)> = loc.ind.iter().map(|&y| (state.position(y), y)).collect();
    while let Some((pos, yk)) = pending.pop_last() {
        let target = cex.primed_value(yk);
        let frozen: Vec<(Var, bool)> = state.order[pos + 1..]
            .iter()
            .map(|&v| {
                let b = match cfg.yhat {
                    YhatMode::Unprimed => sigma.value(v),
                    YhatMode::Primed => cex.primed_value(v),
                };
                (v, b)
            })
            .collect();
        let assumptions = gk_assumptions(&spec.x_vars, yk.lit(target), &sigma, &frozen);
        match solver.solve(&assumptions) {
            SatOutcome::Unknown(r) => return Err(RefineError::Unknown(r)),
            SatOutcome::Unsat { core } => {
                if state.self_substituted.contains(&yk) {
                    record.repairs.push(RepairKind::SelfSubNoRepair { var: yk.index() });
                    continue;
                }
                let key = (
                    yk,
                    sigma.values_of(&spec.x_vars),
                    frozen.iter().map(|&(_, b)| b).collect::<Vec<bool>>(),
                );
                if !state.seen_repairs.insert(key) {
                    state.repetition_violations += 1;
                    debug!("repeated repair point for y{}", yk.index());
                }
                let beta = repair_cube(&core, yk, &spec.x_vars, &sigma);
                let old = state.psi[&yk];
                let new = apply_repair(arena, old, &beta, target);
                let mut point = Assignment::new(spec.num_vars());
                for &x in &spec.x_vars {
                    point.set(x, sigma.value(x));
                }
                for &(v, b) in &frozen {
                    point.set(v, b);
                }
                debug_assert_eq!(arena.eval(new, &point), Ok(!target));
                state.psi.insert(yk, new);
                *state.refine_count.entry(yk).or_insert(0) += 1;
                record.repairs.push(RepairKind::UnsatCore {
                    var: yk.index(),
                    core: beta.iter().map(|l| l.to_dimacs()).collect(),
                });
                if state.should_self_substitute(yk, cfg.self_sub_threshold) {
                    let later: HashSet<Var> = state.order[pos + 1..].iter().copied().collect();
                    let z: Vec<Var> = spec
                        .y_vars
                        .iter()
                        .copied()
                        .filter(|&v| v != yk && !later.contains(&v))
                        .collect();
                    if z.len() > SELF_SUB_MAX_ELIMINATED {
                        record.repairs.push(RepairKind::SelfSubSkipped {
                            var: yk.index(),
                            eliminated: z.len(),
                        });
                    } else {
                        let f = self_substitution(&spec.matrix, yk, &z, arena);
                        state.psi.insert(yk, f);
                        state.self_substituted.insert(yk);
                        record.repairs.push(RepairKind::SelfSub { var: yk.index() });
                    }
                }
            }
            SatOutcome::Sat(rho) => {
                let mut appended = Vec::new();
                for &yt in &state.order[..pos] {
                    if rho.value(yt) != cex.primed_value(yt) && pending.insert((state.position(yt), yt)) {
                        appended.push(yt.index());
                    }
                }
                sigma.set(yk, target);
                record.repairs.push(RepairKind::SatPropagate {
                    var: yk.index(),
                    appended,
                });
            }
        }
    }
    Ok(record)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RefineOutcome {
    Valid,
}

/// Alternates verification and repair until the candidates are valid.
pub fn refine_until_valid(
    spec: &QbfSpec,
    arena: &mut ExprArena,
    state: &mut RefineState,
    cfg: &RefineConfig,
) -> Result<RefineOutcome, RefineError> {
    loop {
        match verify(spec, arena, &state.psi, cfg.primed_refs, &cfg.limits) {
            VerifyOutcome::Valid => return Ok(RefineOutcome::Valid),
            VerifyOutcome::Unknown(r) => return Err(RefineError::Unknown(r)),
            VerifyOutcome::Counterexample(cex) => {
                if state.rounds >= cfg.iteration_cap {
                    return Err(RefineError::IterationCap(cfg.iteration_cap));
                }
                state.rounds += 1;
                let rec = refine_skf(spec, arena, state, &cex, cfg)?;
                state.records.push(rec);
            }
        }
    }
}

/// Substitutes along the order and checks that only inputs remain.
pub fn resolve_functions(
    spec: &QbfSpec,
    arena: &mut ExprArena,
    state: &RefineState,
) -> Result<HashMap<Var, ExprId>, RefineError> {
    let out = substitute_all(arena, &state.psi, &state.order);
    for &e in out.values() {
        if let Some(v) = arena.support(e).into_iter().find(|v| !spec.is_input(*v)) {
            return Err(RefineError::ResidualOutput(v));
        }
    }
    Ok(out)
}

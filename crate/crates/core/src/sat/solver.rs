use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{Assignment, CnfFormula, Lit, Var};

/// Default per-call conflict budget.
pub const DEFAULT_CONFLICT_BUDGET: u64 = 10_000_000;

const LUBY_UNIT: u64 = 100;
const VAR_DECAY: f64 = 0.95;
const CLAUSE_DECAY: f64 = 0.999;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum UnknownReason {
    ConflictBudget,
    Timeout,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SatOutcome {
    Sat(Assignment),
    /// `core` is a subset of the assumptions that is unsatisfiable together with
    /// the clauses. Empty when the clauses alone are unsatisfiable.
    Unsat { core: Vec<Lit> },
    Unknown(UnknownReason),
}

impl SatOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatOutcome::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, SatOutcome::Unsat { .. })
    }

    pub fn model(&self) -> Option<&Assignment> {
        match self {
            SatOutcome::Sat(m) => Some(m),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Value {
    True,
    False,
    Undef,
}

struct ClauseData {
    lits: Vec<Lit>,
    learnt: bool,
    deleted: bool,
    activity: f64,
}

/// Binary max-heap of variables ordered by activity (ties: lower index first).
#[derive(Default)]
struct VarHeap {
    heap: Vec<u32>,
    /// Position in `heap`, or `usize::MAX` when absent.
    pos: Vec<usize>,
}

impl VarHeap {
    fn grow(&mut self, n: usize) {
        if self.pos.len() < n {
            self.pos.resize(n, usize::MAX);
        }
    }

    fn contains(&self, v: usize) -> bool {
        self.pos[v] != usize::MAX
    }

    fn better(act: &[f64], a: u32, b: u32) -> bool {
        let (x, y) = (act[a as usize], act[b as usize]);
        x > y || (x == y && a < b)
    }

    fn up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            if !Self::better(act, v, self.heap[parent]) {
                break;
            }
            self.heap[i] = self.heap[parent];
            self.pos[self.heap[i] as usize] = i;
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v as usize] = i;
    }

    fn down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        loop {
            let l = 2 * i + 1;
            if l >= self.heap.len() {
                break;
            }
            let r = l + 1;
            let c = if r < self.heap.len() && Self::better(act, self.heap[r], self.heap[l]) {
                r
            } else {
                l
            };
            if !Self::better(act, self.heap[c], v) {
                break;
            }
            self.heap[i] = self.heap[c];
            self.pos[self.heap[i] as usize] = i;
            i = c;
        }
        self.heap[i] = v;
        self.pos[v as usize] = i;
    }

    fn insert(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.heap.push(v as u32);
        let i = self.heap.len() - 1;
        self.pos[v] = i;
        self.up(i, act);
    }

    fn increased(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            self.up(self.pos[v], act);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<usize> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().unwrap();
        self.pos[top as usize] = usize::MAX;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last as usize] = 0;
            self.down(0, act);
        }
        Some(top as usize)
    }
}

/// Incremental CDCL solver: two watched literals, VSIDS, first-UIP learning,
/// Luby restarts, assumptions with failed-assumption cores, and an optional
/// per-variable polarity bias with random decision order for sampling.
pub struct Solver {
    num_vars: usize,
    ok: bool,
    clauses: Vec<ClauseData>,
    original: Vec<Vec<Lit>>,
    num_learnts: usize,
    max_learnts: f64,
    watches: Vec<Vec<usize>>,
    assigns: Vec<Value>,
    level: Vec<u32>,
    reason: Vec<Option<usize>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    heap: VarHeap,
    phase: Vec<bool>,
    seen: Vec<bool>,
    bias: Option<Vec<f64>>,
    random_order: bool,
    order: Vec<u32>,
    order_pos: Vec<usize>,
    order_ptr: usize,
    rng: ChaCha8Rng,
    conflict_budget: Option<u64>,
    deadline: Option<Instant>,
    dump_dir: Option<PathBuf>,
    queries: u64,
    pub stats: SolverStats,
}

#[derive(Clone, Copy, Default, Debug)]
pub struct SolverStats {
    pub solves: u64,
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
}

impl Default for Solver {
    fn default() -> Self {
        Solver::new(0)
    }
}

impl Solver {
    pub fn new(num_vars: u32) -> Solver {
        let mut s = Solver {
            num_vars: 0,
            ok: true,
            clauses: Vec::new(),
            original: Vec::new(),
            num_learnts: 0,
            max_learnts: 2000.0,
            watches: Vec::new(),
            assigns: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: Vec::new(),
            var_inc: 1.0,
            cla_inc: 1.0,
            heap: VarHeap::default(),
            phase: Vec::new(),
            seen: Vec::new(),
            bias: None,
            random_order: false,
            order: Vec::new(),
            order_pos: Vec::new(),
            order_ptr: 0,
            rng: ChaCha8Rng::seed_from_u64(0),
            conflict_budget: Some(DEFAULT_CONFLICT_BUDGET),
            deadline: None,
            dump_dir: std::env::var_os("SKOLEM_DUMP_DIMACS").map(PathBuf::from),
            queries: 0,
            stats: SolverStats::default(),
        };
        s.ensure_vars(num_vars);
        s
    }

    pub fn from_cnf(f: &CnfFormula) -> Solver {
        let mut s = Solver::new(f.num_vars());
        s.add_cnf(f);
        s
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars as u32
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.rng = ChaCha8Rng::seed_from_u64(seed);
    }

    /// `None` disables the budget.
    pub fn set_conflict_budget(&mut self, budget: Option<u64>) {
        self.conflict_budget = budget;
    }

    pub fn set_deadline(&mut self, deadline: Option<Instant>) {
        self.deadline = deadline;
    }

    /// Writes every query as DIMACS (assumptions as unit clauses) into `dir`.
    pub fn set_dump_dir(&mut self, dir: Option<PathBuf>) {
        self.dump_dir = dir;
    }

    /// Per-variable probability of deciding `true` (index = variable index).
    /// While a bias is set, phase saving is off and decisions pick a uniformly
    /// shuffled variable order instead of VSIDS.
    pub fn set_polarity_bias(&mut self, bias: Option<Vec<f64>>) {
        self.random_order = bias.is_some();
        self.bias = bias;
    }

    pub fn ensure_vars(&mut self, n: u32) {
        let n = n as usize;
        if n <= self.num_vars {
            return;
        }
        let slots = n + 1;
        self.assigns.resize(slots, Value::Undef);
        self.level.resize(slots, 0);
        self.reason.resize(slots, None);
        self.activity.resize(slots, 0.0);
        self.phase.resize(slots, false);
        self.seen.resize(slots, false);
        self.watches.resize(2 * slots, Vec::new());
        self.heap.grow(slots);
        for v in self.num_vars + 1..=n {
            self.heap.insert(v, &self.activity);
        }
        self.num_vars = n;
    }

    fn value(&self, l: Lit) -> Value {
        match self.assigns[l.var().idx()] {
            Value::Undef => Value::Undef,
            Value::True if l.is_negated() => Value::False,
            Value::False if l.is_negated() => Value::True,
            v => v,
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    pub fn add_cnf(&mut self, f: &CnfFormula) -> bool {
        self.ensure_vars(f.num_vars());
        for c in f.clauses() {
            self.add_clause(c.lits());
        }
        self.ok
    }

    /// Adds a clause at decision level 0. Returns `false` once the clause set is
    /// known to be unsatisfiable.
    pub fn add_clause(&mut self, lits: &[Lit]) -> bool {
        if let Some(m) = lits.iter().map(|l| l.var().index()).max() {
            self.ensure_vars(m);
        }
        self.original.push(lits.to_vec());
        if !self.ok {
            return false;
        }
        debug_assert_eq!(self.decision_level(), 0);
        let mut c: Vec<Lit> = Vec::with_capacity(lits.len());
        for &l in lits {
            match self.value(l) {
                Value::True => return true,
                Value::False => {}
                Value::Undef => {
                    if c.contains(&!l) {
                        return true;
                    }
                    if !c.contains(&l) {
                        c.push(l);
                    }
                }
            }
        }
        match c.len() {
            0 => {
                self.ok = false;
            }
            1 => {
                self.enqueue(c[0], None);
                if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            _ => {
                self.attach(c, false);
            }
        }
        self.ok
    }

    fn attach(&mut self, lits: Vec<Lit>, learnt: bool) -> usize {
        let cr = self.clauses.len();
        self.watches[(!lits[0]).code()].push(cr);
        self.watches[(!lits[1]).code()].push(cr);
        self.clauses.push(ClauseData {
            lits,
            learnt,
            deleted: false,
            activity: 0.0,
        });
        if learnt {
            self.num_learnts += 1;
        }
        cr
    }

    fn enqueue(&mut self, l: Lit, reason: Option<usize>) {
        let v = l.var().idx();
        debug_assert_eq!(self.assigns[v], Value::Undef);
        self.assigns[v] = if l.is_negated() { Value::False } else { Value::True };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Unit propagation; returns a conflicting clause.
    fn propagate(&mut self) -> Option<usize> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[p.code()]);
            let mut i = 0;
            let mut j = 0;
            let mut conflict = None;
            while i < ws.len() {
                let cr = ws[i];
                i += 1;
                if self.clauses[cr].deleted {
                    continue;
                }
                {
                    let c = &mut self.clauses[cr].lits;
                    if c[0] == false_lit {
                        c.swap(0, 1);
                    }
                }
                let first = self.clauses[cr].lits[0];
                if self.value(first) == Value::True {
                    ws[j] = cr;
                    j += 1;
                    continue;
                }
                let len = self.clauses[cr].lits.len();
                let mut moved = false;
                for k in 2..len {
                    let l = self.clauses[cr].lits[k];
                    if self.value(l) != Value::False {
                        self.clauses[cr].lits.swap(1, k);
                        self.watches[(!l).code()].push(cr);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = cr;
                j += 1;
                if self.value(first) == Value::False {
                    conflict = Some(cr);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, Some(cr));
                }
            }
            ws.truncate(j);
            self.watches[p.code()] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in self.activity.iter_mut() {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.increased(v, &self.activity);
    }

    fn bump_clause(&mut self, cr: usize) {
        let c = &mut self.clauses[cr];
        if !c.learnt {
            return;
        }
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for c in self.clauses.iter_mut().filter(|c| c.learnt) {
                c.activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP conflict analysis: learnt clause (asserting literal first) and
    /// backjump level.
    fn analyze(&mut self, mut confl: usize) -> (Vec<Lit>, u32) {
        let mut learnt = vec![Lit::from_code(0)];
        let mut path = 0;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        let current = self.decision_level();
        loop {
            self.bump_clause(confl);
            let lits = self.clauses[confl].lits.clone();
            for q in lits {
                if Some(q.var()) == p.map(|p| p.var()) {
                    continue;
                }
                let v = q.var().idx();
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump_var(v);
                    if self.level[v] >= current {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var().idx()] {
                    break;
                }
            }
            let pl = self.trail[index];
            p = Some(pl);
            self.seen[pl.var().idx()] = false;
            path -= 1;
            if path == 0 {
                break;
            }
            confl = self.reason[pl.var().idx()].expect("non-decision literal has a reason");
        }
        learnt[0] = !p.unwrap();
        for l in &learnt[1..] {
            self.seen[l.var().idx()] = false;
        }
        let mut bt = 0;
        if learnt.len() > 1 {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[learnt[i].var().idx()] > self.level[learnt[max_i].var().idx()] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            bt = self.level[learnt[1].var().idx()];
        }
        (learnt, bt)
    }

    /// Assumptions responsible for `p` (an assumption) being false.
    fn analyze_final(&mut self, p: Lit) -> Vec<Lit> {
        let mut core = vec![p];
        let pv = p.var().idx();
        if self.level[pv] == 0 {
            return core;
        }
        self.seen[pv] = true;
        let start = self.trail_lim[0];
        for i in (start..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var().idx();
            if !self.seen[v] {
                continue;
            }
            match self.reason[v] {
                // An assumption decision (possibly the complement of `p`).
                None => core.push(l),
                Some(cr) => {
                    for &q in &self.clauses[cr].lits {
                        let qv = q.var().idx();
                        if qv != v && self.level[qv] > 0 {
                            self.seen[qv] = true;
                        }
                    }
                }
            }
            self.seen[v] = false;
        }
        self.seen[pv] = false;
        core.sort();
        core.dedup();
        core
    }

    fn cancel_until(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level as usize];
        for i in (lim..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var().idx();
            self.assigns[v] = Value::Undef;
            self.reason[v] = None;
            if self.bias.is_none() {
                self.phase[v] = !l.is_negated();
            }
            self.heap.insert(v, &self.activity);
            if self.random_order {
                self.order_ptr = self.order_ptr.min(self.order_pos[v]);
            }
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(level as usize);
        self.qhead = self.trail.len();
    }

    fn pick_branch_var(&mut self) -> Option<usize> {
        if self.random_order {
            while self.order_ptr < self.order.len() {
                let v = self.order[self.order_ptr] as usize;
                if self.assigns[v] == Value::Undef {
                    return Some(v);
                }
                self.order_ptr += 1;
            }
            return None;
        }
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.assigns[v] == Value::Undef {
                return Some(v);
            }
        }
        None
    }

    fn pick_polarity(&mut self, v: usize) -> bool {
        match &self.bias {
            Some(b) => {
                let p = b.get(v).copied().unwrap_or(0.5);
                self.rng.gen::<f64>() < p
            }
            None => self.phase[v],
        }
    }

    fn reduce_db(&mut self) {
        let mut cands: Vec<usize> = (0..self.clauses.len())
            .filter(|&cr| {
                let c = &self.clauses[cr];
                c.learnt && !c.deleted && c.lits.len() > 2 && !self.is_locked(cr)
            })
            .collect();
        cands.sort_by(|&a, &b| {
            self.clauses[a]
                .activity
                .partial_cmp(&self.clauses[b].activity)
                .unwrap()
                .then(a.cmp(&b))
        });
        for &cr in &cands[..cands.len() / 2] {
            let c = &mut self.clauses[cr];
            c.deleted = true;
            c.lits = Vec::new();
            self.num_learnts -= 1;
        }
    }

    fn is_locked(&self, cr: usize) -> bool {
        let l = self.clauses[cr].lits[0];
        self.value(l) == Value::True && self.reason[l.var().idx()] == Some(cr)
    }

    fn luby(mut i: u64) -> u64 {
        // Luby sequence 1,1,2,1,1,2,4,... (0-based index)
        let mut size = 1u64;
        let mut seq = 0u32;
        while size < i + 1 {
            seq += 1;
            size = 2 * size + 1;
        }
        while size - 1 != i {
            size = (size - 1) >> 1;
            seq -= 1;
            i %= size;
        }
        1u64 << seq
    }

    fn dump(&mut self, assumptions: &[Lit]) {
        let Some(dir) = self.dump_dir.clone() else {
            return;
        };
        self.queries += 1;
        let path = dir.join(format!("query-{:06}.cnf", self.queries));
        let _ = std::fs::create_dir_all(&dir);
        let _ = std::fs::write(path, self.to_dimacs(assumptions));
    }

    /// The clauses as added (plus `assumptions` as units) in DIMACS.
    pub fn to_dimacs(&self, assumptions: &[Lit]) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "p cnf {} {}",
            self.num_vars,
            self.original.len() + assumptions.len()
        );
        for c in self.original.iter().map(|c| c.as_slice()).chain(assumptions.iter().map(std::slice::from_ref)) {
            for l in c {
                let _ = write!(s, "{l} ");
            }
            s.push_str("0\n");
        }
        s
    }

    /// Decides satisfiability of the clauses under `assumptions`. Deterministic
    /// for a fixed seed and clause insertion order.
    pub fn solve(&mut self, assumptions: &[Lit]) -> SatOutcome {
        self.stats.solves += 1;
        self.dump(assumptions);
        if let Some(m) = assumptions.iter().map(|l| l.var().index()).max() {
            self.ensure_vars(m);
        }
        if !self.ok {
            return SatOutcome::Unsat { core: Vec::new() };
        }
        if self.random_order {
            self.order = (1..=self.num_vars as u32).collect();
            self.order.shuffle(&mut self.rng);
            self.order_pos = vec![0; self.num_vars + 1];
            for (i, &v) in self.order.iter().enumerate() {
                self.order_pos[v as usize] = i;
            }
            self.order_ptr = 0;
        }
        let result = self.search(assumptions);
        self.cancel_until(0);
        result
    }

    fn search(&mut self, assumptions: &[Lit]) -> SatOutcome {
        let mut conflicts: u64 = 0;
        let mut restart_idx = 0;
        let mut next_restart = Self::luby(restart_idx) * LUBY_UNIT;
        let mut since_restart = 0;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts += 1;
                since_restart += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return SatOutcome::Unsat { core: Vec::new() };
                }
                let (learnt, bt) = self.analyze(confl);
                self.cancel_until(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], None);
                } else {
                    let first = learnt[0];
                    let cr = self.attach(learnt, true);
                    self.bump_clause(cr);
                    self.enqueue(first, Some(cr));
                }
                self.var_inc /= VAR_DECAY;
                self.cla_inc /= CLAUSE_DECAY;
                if let Some(b) = self.conflict_budget {
                    if conflicts >= b {
                        return SatOutcome::Unknown(UnknownReason::ConflictBudget);
                    }
                }
                if conflicts.is_multiple_of(256) {
                    if let Some(d) = self.deadline {
                        if Instant::now() >= d {
                            return SatOutcome::Unknown(UnknownReason::Timeout);
                        }
                    }
                }
                continue;
            }
            if since_restart >= next_restart {
                self.stats.restarts += 1;
                since_restart = 0;
                restart_idx += 1;
                next_restart = Self::luby(restart_idx) * LUBY_UNIT;
                self.cancel_until(0);
                continue;
            }
            if self.num_learnts as f64 >= self.max_learnts + self.trail.len() as f64 {
                self.reduce_db();
                self.max_learnts *= 1.1;
            }
            // Assumptions occupy the first decision levels.
            let mut next: Option<Lit> = None;
            while (self.decision_level() as usize) < assumptions.len() {
                let a = assumptions[self.decision_level() as usize];
                match self.value(a) {
                    Value::True => self.trail_lim.push(self.trail.len()),
                    Value::False => {
                        let core = self.analyze_final(a);
                        return SatOutcome::Unsat { core };
                    }
                    Value::Undef => {
                        next = Some(a);
                        break;
                    }
                }
            }
            let lit = match next {
                Some(a) => a,
                None => {
                    self.stats.decisions += 1;
                    match self.pick_branch_var() {
                        None => {
                            let model = self.current_model();
                            return SatOutcome::Sat(model);
                        }
                        Some(v) => {
                            let b = self.pick_polarity(v);
                            Var::new(v as u32).lit(b)
                        }
                    }
                }
            };
            self.trail_lim.push(self.trail.len());
            self.enqueue(lit, None);
        }
    }

    fn current_model(&self) -> Assignment {
        let mut a = Assignment::new(self.num_vars as u32);
        for v in 1..=self.num_vars {
            a.set(Var::new(v as u32), self.assigns[v] == Value::True);
        }
        a
    }

    /// Draws one model with decisions biased by `bias` (probability of `true`
    /// per variable, index = variable index). Fresh RNG draws on every call.
    pub fn sample_model(&mut self, bias: &[f64]) -> Result<Assignment, SampleError> {
        let saved = self.bias.take();
        self.set_polarity_bias(Some(bias.to_vec()));
        let out = self.solve(&[]);
        self.set_polarity_bias(saved);
        match out {
            SatOutcome::Sat(m) => Ok(m),
            SatOutcome::Unsat { .. } => Err(SampleError::Unsat),
            SatOutcome::Unknown(r) => Err(SampleError::Unknown(r)),
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq, Clone, Copy)]
pub enum SampleError {
    #[error("formula is unsatisfiable")]
    Unsat,
    #[error("solver gave up: {0:?}")]
    Unknown(UnknownReason),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lits(v: &[i64]) -> Vec<Lit> {
        v.iter().map(|&l| Lit::from_dimacs(l)).collect()
    }

    #[test]
    fn luby_prefix() {
        let seq: Vec<u64> = (0..15).map(Solver::luby).collect();
        assert_eq!(seq, vec![1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }

    #[test]
    fn unsat_under_assumption() {
        // (a ∨ b) ∧ ¬a, assume ¬b
        let mut s = Solver::new(2);
        s.add_clause(&lits(&[1, 2]));
        s.add_clause(&lits(&[-1]));
        match s.solve(&lits(&[-2])) {
            SatOutcome::Unsat { core } => assert_eq!(core, lits(&[-2])),
            o => panic!("{o:?}"),
        }
        assert!(s.solve(&[]).is_sat());
    }

    #[test]
    fn sat_model_satisfies() {
        let f = CnfFormula::from_dimacs(2, &[&[1, 2]]);
        let mut s = Solver::from_cnf(&f);
        let m = s.solve(&[]).model().cloned().unwrap();
        assert!(f.eval(&m).unwrap());
    }

    #[test]
    fn contradictory_assumptions() {
        let mut s = Solver::new(1);
        match s.solve(&lits(&[1, -1])) {
            SatOutcome::Unsat { core } => assert_eq!(core, lits(&[1, -1])),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn empty_clause_is_unsat() {
        let mut s = Solver::from_cnf(&CnfFormula::unsat(2));
        assert_eq!(s.solve(&[]), SatOutcome::Unsat { core: vec![] });
    }

    #[test]
    fn budget_reports_unknown() {
        // pigeonhole 6→5 needs many conflicts
        let n = 5;
        let var = |p: i64, h: i64| p * n + h + 1;
        let mut f = CnfFormula::new(((n + 1) * n) as u32);
        for p in 0..=n {
            f.add_clause((0..n).map(|h| Lit::from_dimacs(var(p, h))));
        }
        for h in 0..n {
            for p in 0..=n {
                for q in p + 1..=n {
                    f.add_dimacs(&[-var(p, h), -var(q, h)]);
                }
            }
        }
        let mut s = Solver::from_cnf(&f);
        s.set_conflict_budget(Some(5));
        assert_eq!(s.solve(&[]), SatOutcome::Unknown(UnknownReason::ConflictBudget));
        s.set_conflict_budget(None);
        assert!(s.solve(&[]).is_unsat());
    }

    #[test]
    fn forced_sample() {
        let mut s = Solver::from_cnf(&CnfFormula::from_dimacs(1, &[&[1]]));
        for _ in 0..20 {
            assert!(s.sample_model(&[0.0, 0.0]).unwrap().value(Var::new(1)));
        }
        let mut u = Solver::from_cnf(&CnfFormula::unsat(1));
        assert_eq!(u.sample_model(&[0.5, 0.5]), Err(SampleError::Unsat));
    }

    #[test]
    fn dimacs_dump_text() {
        let mut s = Solver::new(2);
        s.add_clause(&lits(&[1, -2]));
        assert_eq!(s.to_dimacs(&lits(&[2])), "p cnf 2 2\n1 -2 0\n2 0\n");
    }
}

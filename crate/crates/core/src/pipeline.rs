//! End-to-end synthesis, standalone verification and the benchmark sweep.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use log::{info, warn};
use rayon::prelude::*;
use serde::Serialize;

use crate::formula::{parse_qdimacs, ExprArena, ExprId, QbfSpec, Var};
use crate::learner::{find_order, learn_all, Hyperparams};
use crate::preprocess::preprocess;
use crate::refiner::{
    refine_until_valid, resolve_functions, verify, LocalizationMode, RefineConfig, RefineError, RefineState,
    VerifyOutcome, YhatMode, DEFAULT_ITERATION_CAP, DEFAULT_SELF_SUB_THRESHOLD,
};
use crate::sampler::{default_sample_count, get_samples, NjMode, SamplerConfig, SamplerError, DEFAULT_PROBE_SAMPLES};
use crate::sat::{Limits, SampleError, SatOutcome, UnknownReason, DEFAULT_CONFLICT_BUDGET};
use crate::seed::fnv1a;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SampleCount {
    /// Tiered by the number of outputs.
    Auto,
    Fixed(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub samples: SampleCount,
    pub min_impurity_decrease: f64,
    pub probe_n: usize,
    /// `None` disables self-substitution.
    pub self_sub_threshold: Option<u32>,
    pub seed: u64,
    pub conflict_budget: Option<u64>,
    pub iteration_cap: usize,
    pub timeout_secs: Option<f64>,
    pub nj_mode: NjMode,
    pub yhat: YhatMode,
    pub localization: LocalizationMode,
    pub reverse_tie_break: bool,
    pub primed_refs: bool,
    /// Directory for decision-tree DOT files and the sample CSV.
    pub dump_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            samples: SampleCount::Auto,
            min_impurity_decrease: Hyperparams::default().min_impurity_decrease,
            probe_n: DEFAULT_PROBE_SAMPLES,
            self_sub_threshold: Some(DEFAULT_SELF_SUB_THRESHOLD),
            seed: 0,
            conflict_budget: Some(DEFAULT_CONFLICT_BUDGET),
            iteration_cap: DEFAULT_ITERATION_CAP,
            timeout_secs: None,
            nj_mode: NjMode::Sigma2,
            yhat: YhatMode::Unprimed,
            localization: LocalizationMode::MaxSat,
            reverse_tie_break: false,
            primed_refs: true,
            dump_dir: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    SolvedPreprocess,
    SolvedLearn,
    SolvedRefine,
    Failed,
    Timeout,
}

impl Status {
    pub fn is_solved(self) -> bool {
        matches!(self, Status::SolvedPreprocess | Status::SolvedLearn | Status::SolvedRefine)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::SolvedPreprocess => "solved-preprocess",
            Status::SolvedLearn => "solved-learn",
            Status::SolvedRefine => "solved-refine",
            Status::Failed => "failed",
            Status::Timeout => "timeout",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub instance: String,
    pub num_x: usize,
    pub num_y: usize,
    pub status: Status,
    pub preprocess_secs: f64,
    pub sampling_secs: f64,
    pub learning_secs: f64,
    pub refinement_secs: f64,
    pub total_secs: f64,
    pub num_unates: usize,
    pub num_samples: usize,
    pub refine_iterations: usize,
    pub total_repairs: u64,
    pub refine_counts: BTreeMap<u32, u32>,
    pub self_substituted: Vec<u32>,
    pub repetition_violations: usize,
    pub message: Option<String>,
    pub config: RunConfig,
}

impl RunRecord {
    fn new(name: &str, spec: &QbfSpec, cfg: &RunConfig) -> RunRecord {
        RunRecord {
            instance: name.to_string(),
            num_x: spec.x_vars.len(),
            num_y: spec.y_vars.len(),
            status: Status::Failed,
            preprocess_secs: 0.0,
            sampling_secs: 0.0,
            learning_secs: 0.0,
            refinement_secs: 0.0,
            total_secs: 0.0,
            num_unates: 0,
            num_samples: 0,
            refine_iterations: 0,
            total_repairs: 0,
            refine_counts: BTreeMap::new(),
            self_substituted: Vec::new(),
            repetition_violations: 0,
            message: None,
            config: cfg.clone(),
        }
    }
}

pub struct SynthesisResult {
    pub arena: ExprArena,
    /// Final functions over X, in `y_vars` order. Empty unless solved.
    pub functions: Vec<(Var, ExprId)>,
    pub record: RunRecord,
    /// JSON-lines diagnostics (one value per line).
    pub diagnostics: Vec<serde_json::Value>,
}

impl SynthesisResult {
    pub fn skolem_text(&self) -> String {
        crate::formula::write_skolem_file(&self.arena, &self.functions)
    }
}

struct Failure(Status, String);

impl From<RefineError> for Failure {
    fn from(e: RefineError) -> Failure {
        match e {
            RefineError::Unknown(UnknownReason::Timeout) => Failure(Status::Timeout, e.to_string()),
            _ => Failure(Status::Failed, e.to_string()),
        }
    }
}

impl From<SamplerError> for Failure {
    fn from(e: SamplerError) -> Failure {
        match e {
            SamplerError::Solver(SampleError::Unknown(UnknownReason::Timeout)) => Failure(Status::Timeout, e.to_string()),
            _ => Failure(Status::Failed, e.to_string()),
        }
    }
}

fn check_deadline(limits: &Limits) -> Result<(), Failure> {
    if limits.expired() {
        Err(Failure(Status::Timeout, "timeout".into()))
    } else {
        Ok(())
    }
}

/// Runs preprocessing, sampling, learning and refinement on `spec`. A solved
/// status is only reported after the final input-only functions pass a fresh
/// verification against the original matrix.
pub fn synthesize(spec: &QbfSpec, name: &str, cfg: &RunConfig) -> SynthesisResult {
    let start = Instant::now();
    let limits = Limits {
        deadline: cfg.timeout_secs.map(|t| start + Duration::from_secs_f64(t.max(0.0))),
        conflict_budget: cfg.conflict_budget,
    };
    let mut res = SynthesisResult {
        arena: ExprArena::new(),
        functions: Vec::new(),
        record: RunRecord::new(name, spec, cfg),
        diagnostics: Vec::new(),
    };
    let outcome = run(spec, cfg, &limits, &mut res);
    res.record.total_secs = start.elapsed().as_secs_f64();
    match outcome {
        Ok(status) => res.record.status = status,
        Err(Failure(status, msg)) => {
            warn!("{name}: {msg}");
            res.record.status = status;
            res.record.message = Some(msg);
            res.functions.clear();
        }
    }
    res.diagnostics.push(serde_json::json!({
        "event": "result",
        "status": res.record.status.as_str(),
        "rounds": res.record.refine_iterations,
    }));
    res
}

fn run(spec: &QbfSpec, cfg: &RunConfig, limits: &Limits, res: &mut SynthesisResult) -> Result<Status, Failure> {
    let apply = |s: &mut crate::sat::Solver| limits.apply(s);
    let arena = &mut res.arena;
    let rec = &mut res.record;
    let diag = &mut res.diagnostics;

    let t = Instant::now();
    let (report, unate_fns) = preprocess(spec, arena, Some(&apply));
    rec.preprocess_secs = t.elapsed().as_secs_f64();
    rec.num_unates = unate_fns.len();
    for line in report.lines(&spec.y_vars) {
        info!("{line}");
        diag.push(serde_json::json!({ "event": "unate", "line": line }));
    }
    check_deadline(limits)?;
    let mut funcs: HashMap<Var, ExprId> = unate_fns.into_iter().collect();

    let rest: Vec<Var> = spec.y_vars.iter().copied().filter(|y| !report.is_unate(*y)).collect();
    if rest.is_empty() {
        finish(spec, arena, &funcs, limits, &mut res.functions)?;
        return Ok(Status::SolvedPreprocess);
    }
    let reduced = QbfSpec {
        matrix: report.reduced_matrix.clone(),
        x_vars: spec.x_vars.clone(),
        y_vars: rest.clone(),
    };

    // Unsatisfiable matrix: constant 0 everywhere, vacuously valid.
    match limits.solver(&reduced.matrix).solve(&[]) {
        SatOutcome::Unsat { .. } => {
            warn!("matrix is unsatisfiable; emitting constant functions");
            diag.push(serde_json::json!({ "event": "unsat-matrix" }));
            for &y in &rest {
                funcs.insert(y, arena.fls());
            }
            finish(spec, arena, &funcs, limits, &mut res.functions)?;
            return Ok(Status::SolvedLearn);
        }
        SatOutcome::Unknown(r) => return Err(RefineError::Unknown(r).into()),
        SatOutcome::Sat(_) => {}
    }

    let t = Instant::now();
    let n_samples = match cfg.samples {
        SampleCount::Auto => default_sample_count(rest.len()),
        SampleCount::Fixed(n) => n,
    };
    let scfg = SamplerConfig {
        n_samples,
        n_probe: cfg.probe_n,
        nj_mode: cfg.nj_mode,
        seed: cfg.seed,
    };
    let samples = get_samples(&reduced, &scfg, Some(&apply))?;
    rec.sampling_secs = t.elapsed().as_secs_f64();
    rec.num_samples = samples.len();
    diag.push(serde_json::json!({ "event": "samples", "rows": samples.len() }));
    if let Some(dir) = &cfg.dump_dir {
        let _ = std::fs::create_dir_all(dir);
        if let Ok(f) = std::fs::File::create(dir.join("samples.csv")) {
            let _ = samples.write_csv(f);
        }
    }
    check_deadline(limits)?;

    let t = Instant::now();
    let h = Hyperparams {
        min_impurity_decrease: cfg.min_impurity_decrease,
        max_depth: None,
    };
    let (cands, deps) = learn_all(&samples, &reduced.x_vars, &reduced.y_vars, &h, arena);
    let order = find_order(&reduced.y_vars, &deps).map_err(|e| Failure(Status::Failed, e.to_string()))?;
    let single: HashSet<Var> = cands.iter().filter(|c| c.tree.num_nodes() == 1).map(|c| c.var).collect();
    if let Some(dir) = &cfg.dump_dir {
        for c in &cands {
            let dot = c.tree.to_dot(&format!("y{}", c.var.index()), &|v| {
                let p = if spec.is_input(v) { "x" } else { "y" };
                format!("{p}{}", v.index())
            });
            let _ = std::fs::write(dir.join(format!("tree-y{}.dot", c.var.index())), dot);
        }
    }
    let psi: HashMap<Var, ExprId> = cands.iter().map(|c| (c.var, c.func)).collect();
    rec.learning_secs = t.elapsed().as_secs_f64();
    diag.push(serde_json::json!({
        "event": "order",
        "order": order.iter().map(|v| v.index()).collect::<Vec<_>>(),
    }));
    check_deadline(limits)?;

    let t = Instant::now();
    let rcfg = RefineConfig {
        self_sub_threshold: cfg.self_sub_threshold,
        iteration_cap: cfg.iteration_cap,
        yhat: cfg.yhat,
        localization: cfg.localization,
        reverse_tie_break: cfg.reverse_tie_break,
        primed_refs: cfg.primed_refs,
        limits: *limits,
    };
    let mut state = RefineState::new(psi, order, single);
    let outcome = refine_until_valid(&reduced, arena, &mut state, &rcfg);
    rec.refinement_secs = t.elapsed().as_secs_f64();
    rec.refine_iterations = state.rounds;
    rec.total_repairs = state.total_repairs();
    rec.refine_counts = state.refine_count.iter().map(|(v, &c)| (v.index(), c)).collect();
    rec.self_substituted = state.self_substituted.iter().map(|v| v.index()).collect();
    rec.repetition_violations = state.repetition_violations;
    for r in &state.records {
        diag.push(serde_json::json!({ "event": "round", "record": r }));
    }
    outcome?;

    let resolved = resolve_functions(&reduced, arena, &state)?;
    funcs.extend(resolved);
    finish(spec, arena, &funcs, limits, &mut res.functions)?;
    Ok(if state.rounds == 0 {
        Status::SolvedLearn
    } else {
        Status::SolvedRefine
    })
}

/// Final check of input-only functions against the original matrix.
fn finish(
    spec: &QbfSpec,
    arena: &ExprArena,
    funcs: &HashMap<Var, ExprId>,
    limits: &Limits,
    out: &mut Vec<(Var, ExprId)>,
) -> Result<(), Failure> {
    match verify(spec, arena, funcs, true, limits) {
        VerifyOutcome::Valid => {
            *out = spec.y_vars.iter().map(|&y| (y, funcs[&y])).collect();
            Ok(())
        }
        VerifyOutcome::Unknown(r) => Err(RefineError::Unknown(r).into()),
        VerifyOutcome::Counterexample(_) => Err(Failure(Status::Failed, "final verification failed".into())),
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CheckError {
    #[error("missing function for output y{0}")]
    Missing(u32),
    #[error("y{0} is not an output of the specification")]
    NotOutput(u32),
    #[error("function for y{0} refers to non-input variable {1}")]
    NotInput(u32, u32),
    #[error("solver gave up: {0:?}")]
    Unknown(UnknownReason),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckVerdict {
    Valid,
    /// Input values (in `x_vars` order) on which the functions fail.
    Invalid(Vec<(Var, bool)>),
}

/// Certifies input-only functions against a specification.
pub fn check_functions(
    spec: &QbfSpec,
    arena: &ExprArena,
    funcs: &[(Var, ExprId)],
    limits: &Limits,
) -> Result<CheckVerdict, CheckError> {
    let mut map = HashMap::new();
    for &(y, e) in funcs {
        if !spec.is_output(y) {
            return Err(CheckError::NotOutput(y.index()));
        }
        if let Some(v) = arena.support(e).into_iter().find(|v| !spec.is_input(*v)) {
            return Err(CheckError::NotInput(y.index(), v.index()));
        }
        map.insert(y, e);
    }
    if let Some(y) = spec.y_vars.iter().find(|y| !map.contains_key(y)) {
        return Err(CheckError::Missing(y.index()));
    }
    match verify(spec, arena, &map, true, limits) {
        VerifyOutcome::Valid => Ok(CheckVerdict::Valid),
        VerifyOutcome::Unknown(r) => Err(CheckError::Unknown(r)),
        VerifyOutcome::Counterexample(c) => Ok(CheckVerdict::Invalid(
            spec.x_vars.iter().map(|&x| (x, c.sigma.value(x))).collect(),
        )),
    }
}

/// Per-instance seed derived from the master seed and the instance name.
pub fn instance_seed(master: u64, name: &str) -> u64 {
    fnv1a(master, name.as_bytes())
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BenchSummary {
    pub instances: usize,
    pub solved_preprocess: usize,
    pub solved_learn: usize,
    pub solved_refine: usize,
    pub failed: usize,
    pub timeout: usize,
}

impl BenchSummary {
    pub fn from_records(records: &[RunRecord]) -> BenchSummary {
        let mut s = BenchSummary {
            instances: records.len(),
            ..Default::default()
        };
        for r in records {
            match r.status {
                Status::SolvedPreprocess => s.solved_preprocess += 1,
                Status::SolvedLearn => s.solved_learn += 1,
                Status::SolvedRefine => s.solved_refine += 1,
                Status::Failed => s.failed += 1,
                Status::Timeout => s.timeout += 1,
            }
        }
        s
    }

    pub fn solved(&self) -> usize {
        self.solved_preprocess + self.solved_learn + self.solved_refine
    }

    pub fn to_csv(&self) -> String {
        format!(
            "phase,count\npreprocess,{}\nlearn,{}\nrefine,{}\nsolved,{}\nfailed,{}\ntimeout,{}\ntotal,{}\n",
            self.solved_preprocess,
            self.solved_learn,
            self.solved_refine,
            self.solved(),
            self.failed,
            self.timeout,
            self.instances
        )
    }
}

pub const BENCH_COLUMNS: [&str; 17] = [
    "instance",
    "num_x",
    "num_y",
    "status",
    "preprocess_secs",
    "sampling_secs",
    "learning_secs",
    "refinement_secs",
    "total_secs",
    "cumulative_secs",
    "num_unates",
    "num_samples",
    "refine_iterations",
    "total_repairs",
    "refine_counts",
    "self_substituted",
    "message",
];

/// Bench CSV; `cumulative_secs` is the running sum of `total_secs` in row order.
pub fn bench_csv(records: &[RunRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(BENCH_COLUMNS).expect("in-memory write");
    let mut cumulative = 0.0;
    for r in records {
        cumulative += r.total_secs;
        let counts: Vec<String> = r.refine_counts.iter().map(|(v, c)| format!("y{v}:{c}")).collect();
        let subs: Vec<String> = r.self_substituted.iter().map(|v| format!("y{v}")).collect();
        w.write_record([
            r.instance.clone(),
            r.num_x.to_string(),
            r.num_y.to_string(),
            r.status.as_str().to_string(),
            format!("{:.6}", r.preprocess_secs),
            format!("{:.6}", r.sampling_secs),
            format!("{:.6}", r.learning_secs),
            format!("{:.6}", r.refinement_secs),
            format!("{:.6}", r.total_secs),
            format!("{:.6}", cumulative),
            r.num_unates.to_string(),
            r.num_samples.to_string(),
            r.refine_iterations.to_string(),
            r.total_repairs.to_string(),
            counts.join(";"),
            subs.join(";"),
            r.message.clone().unwrap_or_default(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

/// `*.qdimacs` files in `dir`, sorted by file name.
pub fn bench_instances(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == "qdimacs"))
        .collect();
    files.sort();
    Ok(files)
}

/// Synthesizes every instance; parse failures become failed rows. `jobs`
/// bounds the worker count (1 = sequential).
pub fn bench(dir: &Path, cfg: &RunConfig, jobs: usize) -> std::io::Result<Vec<RunRecord>> {
    let files = bench_instances(dir)?;
    let one = |p: &PathBuf| -> RunRecord {
        let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        let mut c = cfg.clone();
        c.seed = instance_seed(cfg.seed, &name);
        c.dump_dir = None;
        let parsed = std::fs::read_to_string(p)
            .map_err(|e| e.to_string())
            .and_then(|t| parse_qdimacs(&t).map_err(|e| e.to_string()));
        match parsed {
            Ok(spec) => synthesize(&spec, &name, &c).record,
            Err(msg) => {
                let empty = QbfSpec {
                    matrix: crate::formula::CnfFormula::new(0),
                    x_vars: vec![],
                    y_vars: vec![],
                };
                let mut r = RunRecord::new(&name, &empty, &c);
                r.message = Some(msg);
                r
            }
        }
    };
    if jobs <= 1 {
        return Ok(files.iter().map(one).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(std::io::Error::other)?;
    Ok(pool.install(|| files.par_iter().map(one).collect()))
}

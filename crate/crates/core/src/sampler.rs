//! Training data generation: two probing rounds fix a per-output polarity
//! bias, then the main sample set is drawn with it.

use std::collections::HashMap;
use std::io::Write;

use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{Assignment, CnfFormula, QbfSpec, Var};
use crate::sat::{enumerate_projected, EnumError, SampleError, Solver};
use crate::seed::derive_seed;

pub const DEFAULT_PROBE_SAMPLES: usize = 500;
pub const PROBE_HIGH: f64 = 0.9;
pub const PROBE_LOW: f64 = 0.1;
pub const UNIVERSAL_BIAS: f64 = 0.5;
/// Bias used for outputs whose frequency reacts to the probe bias.
pub const FALLBACK_BIAS: f64 = 0.9;
pub const BAND: (f64, f64) = (0.35, 0.65);
/// Model count up to which exact weighted sampling is available.
pub const EXACT_SAMPLING_CAP: usize = 50_000;
const DEDUP_THRESHOLD: f64 = 0.9;

/// How the second probe statistic is computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum NjMode {
    /// Frequency of `y = 1` in the low-bias probe.
    #[default]
    Sigma2,
    /// Frequency of `y = 0` in the high-bias probe.
    Sigma1,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BiasProfile {
    pub universal_bias: f64,
    pub q: HashMap<Var, f64>,
}

impl BiasProfile {
    pub fn uniform(y_vars: &[Var], q: f64) -> BiasProfile {
        BiasProfile {
            universal_bias: UNIVERSAL_BIAS,
            q: y_vars.iter().map(|&y| (y, q)).collect(),
        }
    }

    /// Bias table indexed by variable for `num_vars` variables.
    pub fn table(&self, num_vars: u32) -> Vec<f64> {
        let mut t = vec![self.universal_bias; num_vars as usize + 1];
        for (&v, &p) in &self.q {
            if v.idx() < t.len() {
                t[v.idx()] = p;
            }
        }
        t
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeStat {
    pub var: Var,
    pub m: f64,
    pub n: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Probes {
    pub sigma1: Vec<Assignment>,
    pub sigma2: Vec<Assignment>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SampleSet {
    /// X variables then Y variables.
    pub columns: Vec<Var>,
    pub rows: Vec<Vec<bool>>,
    pub stats: Vec<ProbeStat>,
}

impl SampleSet {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, v: Var) -> Option<usize> {
        self.columns.iter().position(|&c| c == v)
    }

    pub fn row_assignment(&self, i: usize) -> Assignment {
        Assignment::from_pairs(self.columns.iter().copied().zip(self.rows[i].iter().copied()))
    }

    /// Fraction of rows with `v = 1`.
    pub fn frequency(&self, v: Var) -> f64 {
        let Some(c) = self.column(v) else { return 0.0 };
        if self.rows.is_empty() {
            return 0.0;
        }
        self.rows.iter().filter(|r| r[c]).count() as f64 / self.rows.len() as f64
    }

    /// CSV with variable names as header and 0/1 cells.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), csv::Error> {
        let mut out = csv::Writer::from_writer(w);
        let names: Vec<String> = self.columns.iter().map(|v| format!("v{}", v.index())).collect();
        out.write_record(&names)?;
        for r in &self.rows {
            out.write_record(r.iter().map(|&b| if b { "1" } else { "0" }))?;
        }
        out.flush()?;
        Ok(())
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq, Clone)]
pub enum SamplerError {
    #[error("sampling failed: {0}")]
    Solver(#[from] SampleError),
    #[error("exact sampling unavailable: {0}")]
    Enumeration(#[from] EnumError),
}

/// Sample count for a given number of outputs.
pub fn default_sample_count(num_outputs: usize) -> usize {
    if num_outputs < 1200 {
        10_000
    } else if num_outputs < 4000 {
        5_000
    } else {
        1_000
    }
}

fn draw_models(
    f: &CnfFormula,
    bias: &[f64],
    n: usize,
    seed: u64,
    configure: Option<&dyn Fn(&mut Solver)>,
) -> Result<Vec<Assignment>, SampleError> {
    let mut s = Solver::from_cnf(f);
    s.set_seed(seed);
    if let Some(c) = configure {
        c(&mut s);
    }
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(s.sample_model(bias)?);
    }
    Ok(out)
}

/// Two probes of `n_probe` models: outputs biased to 0.9 and to 0.1.
/// An unsatisfiable matrix yields empty probes and a warning.
pub fn probe(spec: &QbfSpec, n_probe: usize, seed: u64) -> Result<Probes, SamplerError> {
    probe_with(spec, n_probe, seed, None)
}

pub fn probe_with(
    spec: &QbfSpec,
    n_probe: usize,
    seed: u64,
    configure: Option<&dyn Fn(&mut Solver)>,
) -> Result<Probes, SamplerError> {
    let hi = BiasProfile::uniform(&spec.y_vars, PROBE_HIGH).table(spec.num_vars());
    let lo = BiasProfile::uniform(&spec.y_vars, PROBE_LOW).table(spec.num_vars());
    let run = |bias: &[f64], salt| match draw_models(&spec.matrix, bias, n_probe, derive_seed(seed, salt), configure) {
        Err(SampleError::Unsat) => {
            warn!("specification matrix is unsatisfiable; probes are empty");
            Ok(Vec::new())
        }
        r => r,
    };
    Ok(Probes {
        sigma1: run(&hi, 1)?,
        sigma2: run(&lo, 2)?,
    })
}

fn freq(rows: &[Assignment], v: Var, value: bool) -> f64 {
    if rows.is_empty() {
        return 0.0;
    }
    rows.iter().filter(|r| r.get(v) == Some(value)).count() as f64 / rows.len() as f64
}

pub fn probe_stats(y_vars: &[Var], probes: &Probes, mode: NjMode) -> Vec<ProbeStat> {
    y_vars
        .iter()
        .map(|&y| ProbeStat {
            var: y,
            m: freq(&probes.sigma1, y, true),
            n: match mode {
                NjMode::Sigma2 => freq(&probes.sigma2, y, true),
                NjMode::Sigma1 => freq(&probes.sigma1, y, false),
            },
        })
        .collect()
}

/// Outputs whose frequency stays inside the band under both probes keep
/// their observed frequency as bias; all others get the fallback.
pub fn bias_for(m: f64, n: f64) -> f64 {
    let inside = |p: f64| BAND.0 < p && p < BAND.1;
    if inside(m) && inside(n) {
        m
    } else {
        FALLBACK_BIAS
    }
}

pub fn adapt_bias(stats: &[ProbeStat]) -> BiasProfile {
    BiasProfile {
        universal_bias: UNIVERSAL_BIAS,
        q: stats.iter().map(|s| (s.var, bias_for(s.m, s.n))).collect(),
    }
}

fn columns(spec: &QbfSpec) -> Vec<Var> {
    spec.x_vars.iter().chain(&spec.y_vars).copied().collect()
}

fn finish(spec: &QbfSpec, models: Vec<Assignment>, stats: Vec<ProbeStat>) -> SampleSet {
    let columns = columns(spec);
    let rows: Vec<Vec<bool>> = models
        .iter()
        .map(|m| {
            assert!(spec.matrix.eval(m).unwrap_or(false), "sample is not a model");
            columns.iter().map(|&v| m.get(v).unwrap_or(false)).collect()
        })
        .collect();
    SampleSet { columns, rows, stats }
}

/// Drops repeated rows when more than 90% of them are repeats, so a
/// degenerate training set does not swamp the learner. Returns whether rows
/// were removed.
pub fn dedup_if_degenerate(set: &mut SampleSet) -> bool {
    if set.rows.len() < 2 {
        return false;
    }
    let mut seen = std::collections::HashSet::new();
    let distinct = set.rows.iter().filter(|r| seen.insert(r.to_vec())).count();
    if 1.0 - (distinct as f64 / set.rows.len() as f64) <= DEDUP_THRESHOLD {
        return false;
    }
    let mut seen = std::collections::HashSet::new();
    set.rows.retain(|r| seen.insert(r.clone()));
    true
}

/// Draws `n` models with the given bias profile via biased CDCL decisions.
pub fn draw(spec: &QbfSpec, profile: &BiasProfile, n: usize, seed: u64) -> Result<SampleSet, SamplerError> {
    draw_with(spec, profile, n, seed, Vec::new(), None)
}

pub fn draw_with(
    spec: &QbfSpec,
    profile: &BiasProfile,
    n: usize,
    seed: u64,
    stats: Vec<ProbeStat>,
    configure: Option<&dyn Fn(&mut Solver)>,
) -> Result<SampleSet, SamplerError> {
    if n == 0 {
        return Ok(SampleSet { columns: columns(spec), rows: Vec::new(), stats });
    }
    let table = profile.table(spec.num_vars());
    let models = draw_models(&spec.matrix, &table, n, derive_seed(seed, 3), configure)?;
    Ok(finish(spec, models, stats))
}

/// Weight of a full assignment under `table` (product of per-variable biases).
pub fn weight(table: &[f64], vars: &[Var], a: &Assignment) -> f64 {
    vars.iter()
        .map(|&v| {
            let p = table[v.idx()];
            if a.value(v) {
                p
            } else {
                1.0 - p
            }
        })
        .product()
}

/// Models of the matrix over X ∪ Y with normalized weights.
pub fn exact_distribution(
    spec: &QbfSpec,
    profile: &BiasProfile,
) -> Result<Vec<(Assignment, f64)>, SamplerError> {
    let vars = columns(spec);
    let models = enumerate_projected(&spec.matrix, &vars, EXACT_SAMPLING_CAP)?;
    let table = profile.table(spec.num_vars());
    let ws: Vec<f64> = models.iter().map(|m| weight(&table, &vars, m)).collect();
    let total: f64 = ws.iter().sum();
    Ok(models.into_iter().zip(ws).map(|(m, w)| (m, w / total)).collect())
}

/// Exact weighted sampling: Pr[σ] proportional to its weight.
pub fn draw_exact(spec: &QbfSpec, profile: &BiasProfile, n: usize, seed: u64) -> Result<SampleSet, SamplerError> {
    let dist = exact_distribution(spec, profile)?;
    if dist.is_empty() && n > 0 {
        return Err(SampleError::Unsat.into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 4));
    let mut cumulative = Vec::with_capacity(dist.len());
    let mut acc = 0.0;
    for (_, p) in &dist {
        acc += p;
        cumulative.push(acc);
    }
    let models = (0..n)
        .map(|_| {
            let r: f64 = rng.gen::<f64>() * acc;
            let i = cumulative.partition_point(|&c| c <= r).min(dist.len() - 1);
            dist[i].0.clone()
        })
        .collect();
    Ok(finish(spec, models, Vec::new()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplerConfig {
    pub n_samples: usize,
    pub n_probe: usize,
    pub nj_mode: NjMode,
    pub seed: u64,
}

/// Probe, adapt and draw. Unsatisfiable matrices give an empty set.
pub fn get_samples(
    spec: &QbfSpec,
    cfg: &SamplerConfig,
    configure: Option<&dyn Fn(&mut Solver)>,
) -> Result<SampleSet, SamplerError> {
    let probes = probe_with(spec, cfg.n_probe, cfg.seed, configure)?;
    if cfg.n_probe > 0 && probes.sigma1.is_empty() {
        return Ok(SampleSet { columns: columns(spec), rows: Vec::new(), stats: Vec::new() });
    }
    let stats = probe_stats(&spec.y_vars, &probes, cfg.nj_mode);
    let profile = adapt_bias(&stats);
    match draw_with(spec, &profile, cfg.n_samples, cfg.seed, stats, configure) {
        Ok(mut set) => {
            if dedup_if_degenerate(&mut set) {
                log::info!("samples deduplicated to {} distinct rows", set.len());
            }
            Ok(set)
        }
        Err(SamplerError::Solver(SampleError::Unsat)) => {
            warn!("specification matrix is unsatisfiable; no samples");
            Ok(SampleSet { columns: columns(spec), rows: Vec::new(), stats: Vec::new() })
        }
        Err(e) => Err(e),
    }
}

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use skolem_core::formula::{parse_qdimacs, parse_skolem_file, ExprArena, QbfSpec};
use skolem_core::pipeline::{
    bench, bench_csv, check_functions, synthesize, BenchSummary, CheckVerdict, RunConfig, SampleCount,
};
use skolem_core::refiner::{LocalizationMode, YhatMode};
use skolem_core::sampler::NjMode;
use skolem_core::sat::Limits;

const EXIT_OK: u8 = 0;
const EXIT_INVALID: u8 = 1;
const EXIT_FAILURE: u8 = 2;
const EXIT_USAGE: u8 = 3;

/// Skolem function synthesis for 2-QBF specifications in QDIMACS.
///
/// Every option can also be set through an environment variable named
/// SKOLEM_<OPTION>, e.g. SKOLEM_SEED=7 or SKOLEM_SAMPLES=auto.
#[derive(Parser)]
#[command(name = "skolem", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize Skolem functions for one instance.
    Synth {
        file: PathBuf,
        #[command(flatten)]
        cfg: ConfigArgs,
        /// Write the functions here instead of stdout.
        #[arg(long, env = "SKOLEM_OUT")]
        out: Option<PathBuf>,
        /// Write JSON-lines diagnostics and the run record here.
        #[arg(long, env = "SKOLEM_DIAG")]
        diag: Option<PathBuf>,
    },
    /// Check a function file against a specification.
    Verify {
        spec: PathBuf,
        skf: PathBuf,
        #[arg(long, env = "SKOLEM_TIMEOUT", value_parser = parse_positive)]
        timeout: Option<f64>,
    },
    /// Run synthesis over every .qdimacs file in a directory.
    Bench {
        dir: PathBuf,
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long, env = "SKOLEM_JOBS", default_value_t = 1)]
        jobs: usize,
        /// Per-instance CSV; stdout when absent. The per-phase summary goes
        /// next to it with a `.summary.csv` suffix.
        #[arg(long, env = "SKOLEM_CSV")]
        csv: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum NjArg {
    Sigma2,
    Sigma1,
}

#[derive(Clone, Copy, ValueEnum)]
enum YhatArg {
    Unprimed,
    Primed,
}

#[derive(Clone, Copy, ValueEnum)]
enum LocArg {
    Maxsat,
    Naive,
}

#[derive(Args)]
struct ConfigArgs {
    /// Number of samples, or `auto` for the size-based default.
    #[arg(long, env = "SKOLEM_SAMPLES", default_value = "auto", value_parser = parse_samples)]
    samples: SampleCount,
    #[arg(long, env = "SKOLEM_MIN_IMPURITY_DECREASE", default_value_t = 0.005)]
    min_impurity_decrease: f64,
    #[arg(long, env = "SKOLEM_PROBE_N", default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
    probe_n: u64,
    /// Repairs before an output is self-substituted; `off` disables it.
    #[arg(long, env = "SKOLEM_SELF_SUB_THRESHOLD", default_value = "10", value_parser = parse_threshold)]
    self_sub_threshold: OrNone<u32>,
    #[arg(long, env = "SKOLEM_SEED", default_value_t = 0)]
    seed: u64,
    /// Conflicts per SAT call; `none` removes the limit.
    #[arg(long, env = "SKOLEM_CONFLICT_BUDGET", default_value = "10000000", value_parser = parse_budget)]
    conflict_budget: OrNone<u64>,
    #[arg(long, env = "SKOLEM_ITERATION_CAP", default_value_t = 5000, value_parser = clap::value_parser!(u64).range(1..))]
    iteration_cap: u64,
    /// Wall-clock limit in seconds.
    #[arg(long, env = "SKOLEM_TIMEOUT", value_parser = parse_positive)]
    timeout: Option<f64>,
    #[arg(long, env = "SKOLEM_NJ_MODE", value_enum, default_value_t = NjArg::Sigma2)]
    nj_mode: NjArg,
    /// Values the later outputs are frozen to in the repair query.
    #[arg(long, env = "SKOLEM_YHAT", value_enum, default_value_t = YhatArg::Unprimed)]
    yhat: YhatArg,
    #[arg(long, env = "SKOLEM_LOCALIZATION", value_enum, default_value_t = LocArg::Maxsat)]
    localization: LocArg,
    /// Prefer blaming later outputs among equally small localizations.
    #[arg(long, env = "SKOLEM_REVERSE_TIE_BREAK")]
    reverse_tie_break: bool,
    /// Read output references in candidates as the unprimed copies.
    #[arg(long, env = "SKOLEM_UNPRIMED_REFS")]
    unprimed_refs: bool,
    /// Directory for decision-tree DOT files and the sample CSV.
    #[arg(long, env = "SKOLEM_DUMP_DIR")]
    dump_dir: Option<PathBuf>,
}

fn parse_samples(s: &str) -> Result<SampleCount, String> {
    if s == "auto" {
        return Ok(SampleCount::Auto);
    }
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(SampleCount::Fixed(n)),
        _ => Err("expected a positive integer or `auto`".into()),
    }
}

/// A number, or a keyword meaning "no limit".
#[derive(Clone, Copy)]
struct OrNone<T>(Option<T>);

fn parse_threshold(s: &str) -> Result<OrNone<u32>, String> {
    if s == "off" {
        return Ok(OrNone(None));
    }
    s.parse().map(|n| OrNone(Some(n))).map_err(|_| "expected an integer or `off`".into())
}

fn parse_budget(s: &str) -> Result<OrNone<u64>, String> {
    if s == "none" {
        return Ok(OrNone(None));
    }
    match s.parse::<u64>() {
        Ok(n) if n > 0 => Ok(OrNone(Some(n))),
        _ => Err("expected a positive integer or `none`".into()),
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err("expected a positive number".into()),
    }
}

impl ConfigArgs {
    fn to_config(&self) -> Result<RunConfig, String> {
        if !(self.min_impurity_decrease >= 0.0 && self.min_impurity_decrease.is_finite()) {
            return Err("--min-impurity-decrease must be a non-negative number".into());
        }
        Ok(RunConfig {
            samples: self.samples,
            min_impurity_decrease: self.min_impurity_decrease,
            probe_n: self.probe_n as usize,
            self_sub_threshold: self.self_sub_threshold.0,
            seed: self.seed,
            conflict_budget: self.conflict_budget.0,
            iteration_cap: self.iteration_cap as usize,
            timeout_secs: self.timeout,
            nj_mode: match self.nj_mode {
                NjArg::Sigma2 => NjMode::Sigma2,
                NjArg::Sigma1 => NjMode::Sigma1,
            },
            yhat: match self.yhat {
                YhatArg::Unprimed => YhatMode::Unprimed,
                YhatArg::Primed => YhatMode::Primed,
            },
            localization: match self.localization {
                LocArg::Maxsat => LocalizationMode::MaxSat,
                LocArg::Naive => LocalizationMode::Naive,
            },
            reverse_tie_break: self.reverse_tie_break,
            primed_refs: !self.unprimed_refs,
            dump_dir: self.dump_dir.clone(),
        })
    }
}

struct Fail(u8, String);

impl Fail {
    fn failure(msg: impl std::fmt::Display) -> Fail {
        Fail(EXIT_FAILURE, msg.to_string())
    }
}

fn read_spec(path: &Path) -> Result<QbfSpec, Fail> {
    let text = fs::read_to_string(path).map_err(|e| Fail::failure(format!("{}: {e}", path.display())))?;
    parse_qdimacs(&text).map_err(|e| Fail::failure(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Fail> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Fail::failure(format!("{}: {e}", p.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(Fail::failure),
    }
}

fn synth(file: &Path, cfg: &ConfigArgs, out: Option<&Path>, diag: Option<&Path>) -> Result<u8, Fail> {
    let cfg = cfg.to_config().map_err(|m| Fail(EXIT_USAGE, m))?;
    let spec = read_spec(file)?;
    let name = file.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    log::debug!("{name}: {cfg:?}");
    let result = synthesize(&spec, &name, &cfg);
    let rec = &result.record;
    if let Some(p) = diag {
        let mut text = String::new();
        for d in &result.diagnostics {
            text.push_str(&d.to_string());
            text.push('\n');
        }
        let record = serde_json::json!({ "record": rec });
        text.push_str(&record.to_string());
        text.push('\n');
        fs::write(p, text).map_err(|e| Fail::failure(format!("{}: {e}", p.display())))?;
    }
    eprintln!("{}: {} in {:.3}s ({} refinement rounds)", name, rec.status.as_str(), rec.total_secs, rec.refine_iterations);
    if !rec.status.is_solved() {
        return Err(Fail::failure(rec.message.clone().unwrap_or_else(|| rec.status.as_str().into())));
    }
    write_out(out, &result.skolem_text())?;
    Ok(EXIT_OK)
}

fn verify_cmd(spec: &Path, skf: &Path, timeout: Option<f64>) -> Result<u8, Fail> {
    let spec = read_spec(spec)?;
    let text = fs::read_to_string(skf).map_err(|e| Fail::failure(format!("{}: {e}", skf.display())))?;
    let mut arena = ExprArena::new();
    let funcs = parse_skolem_file(&text, &mut arena).map_err(|e| Fail::failure(format!("{}: {e}", skf.display())))?;
    let limits = Limits {
        deadline: timeout.map(|t| Instant::now() + Duration::from_secs_f64(t)),
        ..Limits::default()
    };
    match check_functions(&spec, &arena, &funcs, &limits).map_err(Fail::failure)? {
        CheckVerdict::Valid => {
            println!("valid");
            Ok(EXIT_OK)
        }
        CheckVerdict::Invalid(cex) => {
            let lits: Vec<String> =
                cex.iter().map(|(x, b)| format!("{}{}", if *b { "" } else { "-" }, x.index())).collect();
            println!("invalid");
            println!("counterexample: {}", lits.join(" "));
            Ok(EXIT_INVALID)
        }
    }
}

fn bench_cmd(dir: &Path, cfg: &ConfigArgs, jobs: usize, csv: Option<&Path>) -> Result<u8, Fail> {
    let cfg = cfg.to_config().map_err(|m| Fail(EXIT_USAGE, m))?;
    if jobs == 0 {
        return Err(Fail(EXIT_USAGE, "--jobs must be at least 1".into()));
    }
    let records = bench(dir, &cfg, jobs).map_err(|e| Fail::failure(format!("{}: {e}", dir.display())))?;
    let summary = BenchSummary::from_records(&records);
    write_out(csv, &bench_csv(&records))?;
    match csv {
        Some(p) => {
            let mut s = p.as_os_str().to_owned();
            s.push(".summary.csv");
            let sp = PathBuf::from(s);
            fs::write(&sp, summary.to_csv()).map_err(|e| Fail::failure(format!("{}: {e}", sp.display())))?;
        }
        None => eprint!("{}", summary.to_csv()),
    }
    eprintln!("solved {}/{}", summary.solved(), summary.instances);
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("SKOLEM_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    let res = match &cli.cmd {
        Command::Synth { file, cfg, out, diag } => synth(file, cfg, out.as_deref(), diag.as_deref()),
        Command::Verify { spec, skf, timeout } => verify_cmd(spec, skf, *timeout),
        Command::Bench { dir, cfg, jobs, csv } => bench_cmd(dir, cfg, *jobs, csv.as_deref()),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

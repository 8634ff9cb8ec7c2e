//! `degperc`: reproducible percolation experiments on random graphs with a
//! prescribed degree sequence.
//!
//! Every JSON artifact has the shape `{"schema": 1, "config": ..., "result": ...}`
//! where `config` is the full run configuration including the seed.
//!
//! Exit codes: 0 pass, 1 statistical validation failure, 2 usage or
//! classification error, 3 infeasible input.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use degperc::degseq::{powerlaw_normalization, powerlaw_sequence, ClassifyParams};
use degperc::exploration::{explore, ExploreConfig};
use degperc::graph::{default_steps, havel_hakimi};
use degperc::harness::{
    linear_grid, model_separation, sweep, trace_ensemble, validate_robust, validate_thin_tail, RobustConfig,
    SeparationConfig, StartPolicy, SweepConfig, ThinTailConfig, TraceConfig,
};
use degperc::io::{format_degree_counts, format_edge_list, read_degree_file};
use degperc::rng::{stream_rng, Stream};
use degperc::{DegreeSequence, Error};

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "degperc", version, about = "Bond percolation on random graphs with a given degree sequence")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Critical quantities, tail conditions and classification of a sequence.
    Analyze(AnalyzeArgs),
    /// Sample a graph with the switch chain and write its edge list.
    Sample(SampleArgs),
    /// Giant-fraction curves over a grid of retention probabilities.
    Scan(ScanArgs),
    /// Check the thin-tail or robust prediction for a sequence.
    Validate(ValidateArgs),
    /// Run one exploration and write its trace.
    Explore(ExploreArgs),
    /// Aggregate exploration traces over replicas.
    Trace(TraceArgs),
    /// Generate a power-law degree file.
    Powerlaw(PowerlawArgs),
    /// Hub-hub edge frequency under the two percolation models.
    Separation(SeparationArgs),
}

#[derive(Args, Clone, Serialize)]
struct ClassifyArgs {
    #[arg(long, default_value_t = 0.3)]
    eps: f64,
    /// Subcritical giant level used by the classifier.
    #[arg(long = "gamma-level", default_value_t = 0.05)]
    gamma_level: f64,
    #[arg(long, default_value_t = 0.5)]
    eta: f64,
    #[arg(long = "K", default_value_t = 64)]
    k: u32,
    #[arg(long, default_value_t = 256)]
    c: u32,
    #[arg(long, default_value_t = 4)]
    c1: u32,
    #[arg(long, default_value_t = 16)]
    c2: u32,
}

impl ClassifyArgs {
    fn params(&self) -> ClassifyParams {
        ClassifyParams {
            eps: self.eps,
            gamma: self.gamma_level,
            c1: self.c1,
            c2: self.c2,
            eta: self.eta,
            k: self.k,
            c: self.c,
        }
    }
}

#[derive(Args, Clone, Serialize)]
struct RunArgs {
    /// 64-bit seed; drawn from entropy and recorded when absent.
    #[arg(long)]
    seed: Option<u64>,
    /// Switch-chain steps per graph (default 20 m ln(m + 1)).
    #[arg(long)]
    steps: Option<u64>,
    /// Worker threads (default: available parallelism). Not recorded, as
    /// results do not depend on it.
    #[arg(long)]
    #[serde(skip)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct AnalyzeArgs {
    file: PathBuf,
    #[arg(long)]
    p: Option<f64>,
    #[command(flatten)]
    classify: ClassifyArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct SampleArgs {
    file: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    steps: Option<u64>,
    /// Edge-list path; a JSON sidecar is written next to it.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Serialize)]
struct ScanArgs {
    file: PathBuf,
    #[arg(long = "p-min", default_value_t = 0.2)]
    p_min: f64,
    #[arg(long = "p-max", default_value_t = 0.8)]
    p_max: f64,
    /// Number of grid points.
    #[arg(long = "p-steps", default_value_t = 31)]
    p_steps: usize,
    #[arg(long, default_value_t = 30)]
    replicas: usize,
    #[arg(long, default_value_t = 0.05)]
    rho: f64,
    #[arg(long, default_value_t = 16)]
    c2: u32,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum RegimeArg {
    Thin,
    Robust,
}

#[derive(Args, Serialize)]
struct ValidateArgs {
    file: PathBuf,
    #[arg(long, value_enum)]
    regime: RegimeArg,
    /// Retention probabilities probed by the robust check.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.2, 0.5, 0.8])]
    p: Vec<f64>,
    #[arg(long, default_value_t = 30)]
    replicas: usize,
    /// Giant level.
    #[arg(long, default_value_t = 0.05)]
    rho: f64,
    /// Subcritical ceiling for the thin-tail check.
    #[arg(long, default_value_t = 0.05)]
    level: f64,
    /// Tolerated failure rate for the robust check.
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[command(flatten)]
    classify: ClassifyArgs,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Serialize)]
struct ExploreArgs {
    file: PathBuf,
    #[arg(long)]
    p: f64,
    /// Start from the k vertices of largest degree.
    #[arg(long = "s0-top", default_value_t = 0)]
    s0_top: usize,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Serialize)]
struct TraceArgs {
    file: PathBuf,
    #[arg(long)]
    p: f64,
    #[arg(long = "s0-top", default_value_t = 0)]
    s0_top: usize,
    #[arg(long, default_value_t = 20)]
    replicas: usize,
    /// Level above which a component counts as linear.
    #[arg(long = "giant-level", default_value_t = 0.1)]
    giant_level: f64,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Serialize)]
struct PowerlawArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    gamma: f64,
    #[arg(long, default_value_t = 1)]
    k0: u32,
    /// Count scale; defaults to the normalising constant of the exponent.
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Degree-file path; a JSON sidecar is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct SeparationArgs {
    #[arg(long, default_value_t = 500)]
    n: usize,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, default_value_t = 500)]
    replicas: usize,
    #[arg(long, default_value_t = 100)]
    retries: usize,
    #[command(flatten)]
    run: RunArgs,
}

enum Failure {
    Core(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Core(Error::Io(e))
    }
}

type CmdResult = Result<bool, Failure>;

fn exit_code(f: &Failure) -> u8 {
    match f {
        Failure::Usage(_) => 2,
        Failure::Core(Error::NotGraphical | Error::Construction(_)) => 3,
        Failure::Core(_) => 2,
    }
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(rand::random)
}

fn sidecar(path: &Path, ext: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(ext);
    PathBuf::from(s)
}

fn envelope(command: &str, seed: Option<u64>, params: &impl Serialize, result: Value) -> Value {
    json!({
        "schema": SCHEMA,
        "config": { "command": command, "seed": seed, "params": params },
        "result": result,
    })
}

fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialise");
    s.push('\n');
    s
}

/// Writes the JSON report to `out` or stdout.
fn emit(out: Option<&Path>, report: &Value) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, to_pretty(report))?,
        None => print!("{}", to_pretty(report)),
    }
    Ok(())
}

fn load(file: &Path) -> Result<DegreeSequence, Failure> {
    Ok(read_degree_file(file)?)
}

fn with_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        if w == 0 {
            return Err(Failure::Usage("--workers must be at least 1".into()));
        }
        b = b.num_threads(w);
    }
    let pool = b.build().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(pool.install(f))
}

fn cmd_analyze(a: &AnalyzeArgs) -> CmdResult {
    let d = load(&a.file)?;
    let graphical = d.is_graphical();
    if !graphical {
        eprintln!("warning: {} is not graphical", a.file.display());
    }
    let class = d.classify(&a.classify.params())?;
    let profile = a.p.map(|p| d.critical_profile(p)).transpose()?;
    let result = json!({
        "n": d.n(),
        "sigma": d.sigma(),
        "stripped_zeros": d.stripped_zeros(),
        "max_degree": d.max_degree(),
        "graphical": graphical,
        "p_crit": class.p_crit,
        "profile": profile,
        "classification": class,
    });
    emit(a.out.as_deref(), &envelope("analyze", None, a, result))?;
    Ok(true)
}

fn cmd_sample(a: &SampleArgs) -> CmdResult {
    let d = load(&a.file)?;
    let seed = resolve_seed(a.seed);
    let mut g = havel_hakimi(&d)?;
    let steps = a.steps.unwrap_or_else(|| default_steps(g.m()));
    let accepted = g.run_switch_chain(steps, &mut stream_rng(seed, 0, Stream::Graph));
    std::fs::write(&a.out, format_edge_list(&g))?;
    let result = json!({ "n": g.n(), "m": g.m(), "steps": steps, "accepted": accepted });
    emit(Some(&sidecar(&a.out, ".json")), &envelope("sample", Some(seed), a, result))?;
    Ok(true)
}

fn cmd_scan(a: &ScanArgs) -> CmdResult {
    let d = load(&a.file)?;
    let seed = resolve_seed(a.run.seed);
    let cfg = SweepConfig {
        p_grid: linear_grid(a.p_min, a.p_max, a.p_steps)?,
        replicas: a.replicas,
        rho: a.rho,
        seed,
        steps: a.run.steps,
        c2: a.c2,
    };
    let report = with_pool(a.run.workers, || sweep(&d, &cfg))??;
    let value = envelope("scan", Some(seed), a, serde_json::to_value(&report).expect("serialisable"));
    match &a.run.out {
        Some(p) => {
            std::fs::write(sidecar(p, ".csv"), report.to_csv())?;
            emit(Some(p), &value)?;
        }
        None => emit(None, &value)?,
    }
    Ok(report.monotone_violations == 0)
}

fn cmd_validate(a: &ValidateArgs) -> CmdResult {
    let d = load(&a.file)?;
    let seed = resolve_seed(a.run.seed);
    let classify = a.classify.params();
    let (result, pass) = match a.regime {
        RegimeArg::Thin => {
            let cfg =
                ThinTailConfig { classify, rho: a.rho, level: a.level, replicas: a.replicas, seed, steps: a.run.steps };
            let v = with_pool(a.run.workers, || validate_thin_tail(&d, &cfg))??;
            (serde_json::to_value(&v).expect("serialisable"), v.pass)
        }
        RegimeArg::Robust => {
            let cfg = RobustConfig {
                classify,
                p_list: a.p.clone(),
                rho: a.rho,
                delta: a.delta,
                replicas: a.replicas,
                seed,
                steps: a.run.steps,
            };
            let v = with_pool(a.run.workers, || validate_robust(&d, &cfg))??;
            (serde_json::to_value(&v).expect("serialisable"), v.pass)
        }
    };
    emit(a.run.out.as_deref(), &envelope("validate", Some(seed), a, result))?;
    Ok(pass)
}

fn cmd_explore(a: &ExploreArgs) -> CmdResult {
    let d = load(&a.file)?;
    let seed = resolve_seed(a.run.seed);
    let steps = a.run.steps.unwrap_or_else(|| default_steps((d.sigma() / 2) as usize));
    let g = degperc::graph::sample_uniform(&d, steps, &mut stream_rng(seed, 0, Stream::Graph))?;
    let n = d.n();
    let cfg =
        ExploreConfig { s0: (n.saturating_sub(a.s0_top)..n).map(|v| v as u32).collect(), ..ExploreConfig::new(a.p) };
    let ex =
        explore(&g, &cfg, &mut stream_rng(seed, 0, Stream::Structure), &mut stream_rng(seed, 0, Stream::Percolation))?;
    let result = json!({
        "n": n,
        "steps": ex.trace.steps,
        "component_sizes": ex.trace.component_sizes,
        "seeds": ex.seeds,
        "sample": ex.sample.summary(seed),
    });
    let value = envelope("explore", Some(seed), a, result);
    match &a.run.out {
        Some(p) => {
            std::fs::write(sidecar(p, ".csv"), ex.trace.to_csv())?;
            emit(Some(p), &value)?;
        }
        None => emit(None, &value)?,
    }
    Ok(true)
}

fn cmd_trace(a: &TraceArgs) -> CmdResult {
    let d = load(&a.file)?;
    let seed = resolve_seed(a.run.seed);
    let cfg = TraceConfig {
        p: a.p,
        start: if a.s0_top == 0 { StartPolicy::Empty } else { StartPolicy::TopDegree { k: a.s0_top } },
        replicas: a.replicas,
        seed,
        steps: a.run.steps,
        giant_level: a.giant_level,
    };
    let report = with_pool(a.run.workers, || trace_ensemble(&d, &cfg))??;
    emit(
        a.run.out.as_deref(),
        &envelope("trace", Some(seed), a, serde_json::to_value(&report).expect("serialisable")),
    )?;
    Ok(true)
}

fn cmd_powerlaw(a: &PowerlawArgs) -> CmdResult {
    let seed = resolve_seed(a.seed);
    let c = a.c.unwrap_or_else(|| powerlaw_normalization(a.gamma, a.k0));
    let pl = powerlaw_sequence(a.n, a.gamma, a.k0, c, seed)?;
    let text = format_degree_counts(&pl.sequence);
    let result = json!({
        "n": pl.sequence.n(),
        "sigma": pl.sequence.sigma(),
        "c": pl.c,
        "max_degree": pl.sequence.max_degree(),
        "bulk_max_degree": pl.bulk_max_degree,
        "lambda1": pl.lambda1,
        "lambda2": pl.lambda2,
        "lambda2_all": pl.lambda2_all,
    });
    match &a.out {
        Some(p) => {
            std::fs::write(p, text)?;
            emit(Some(&sidecar(p, ".json")), &envelope("powerlaw", Some(seed), a, result))?;
        }
        None => print!("{text}"),
    }
    Ok(true)
}

fn cmd_separation(a: &SeparationArgs) -> CmdResult {
    let seed = resolve_seed(a.run.seed);
    let cfg =
        SeparationConfig { n: a.n, p: a.p, replicas: a.replicas, seed, steps: a.run.steps, max_retries: a.retries };
    let report = with_pool(a.run.workers, || model_separation(&cfg))??;
    emit(
        a.run.out.as_deref(),
        &envelope("separation", Some(seed), a, serde_json::to_value(&report).expect("serialisable")),
    )?;
    Ok(report.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Scan(a) => cmd_scan(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Explore(a) => cmd_explore(a),
        Command::Trace(a) => cmd_trace(a),
        Command::Powerlaw(a) => cmd_powerlaw(a),
        Command::Separation(a) => cmd_separation(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            match &f {
                Failure::Usage(msg) => eprintln!("error: {msg}"),
                Failure::Core(e) => eprintln!("error: {e}"),
            }
            ExitCode::from(exit_code(&f))
        }
    }
}

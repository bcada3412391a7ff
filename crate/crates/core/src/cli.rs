//! Command-line front end. Every command writes one JSON document (or CSV
//! for `sweep --format csv`) to stdout.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::analytic::{
    disjoint_probability, sc_exponent_ratio, sc_pr_a, two_thread_pr_a, window_pmf, window_pmf_bounds,
    BoundedValue, ExactValue, TwoThreadValue,
};
use crate::error::{Error, Result};
use crate::format::json_float;
use crate::model::{MemoryModel, ModelParams, PairMatrix, DEFAULT_PROGRAM_LEN};
use crate::montecarlo::{estimate_pr_a, PrAOptions, Sampling};
use crate::oracle::{exact_disjoint, exact_window_pmf};
use crate::shift::{Overlap, SegmentLengths};
use crate::verify::{run_checks, VerifyConfig};
use crate::DEFAULT_SEED;

pub const WORKERS_ENV: &str = "MCVULN_WORKERS";

/// Largest thread count accepted by `analytic sc-pr-a` and `exponent`.
pub const MAX_CLOSED_FORM_THREADS: usize = 4096;

/// Inclusive integer range written `A..B`, or a single `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntRange {
    pub start: usize,
    pub end: usize,
}

impl IntRange {
    pub fn iter(self) -> std::ops::RangeInclusive<usize> {
        self.start..=self.end
    }
}

impl FromStr for IntRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
        let (start, end) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let v = num(s)?;
                (v, v)
            }
        };
        if start > end {
            return Err(format!("empty range {s}"));
        }
        Ok(IntRange { start, end })
    }
}

impl fmt::Display for IntRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

fn parse_model(s: &str) -> std::result::Result<MemoryModel, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_lengths(s: &str) -> std::result::Result<SegmentLengths, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_overlap(s: &str) -> std::result::Result<Overlap, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_models(s: &str) -> std::result::Result<ModelList, String> {
    s.split(',')
        .map(parse_model)
        .collect::<std::result::Result<_, _>>()
        .map(ModelList)
}

#[derive(Clone, Debug, PartialEq)]
struct ModelList(Vec<MemoryModel>);

#[derive(Parser, Debug)]
#[command(
    name = "mcvuln",
    version,
    about = "Memory-model bug vulnerability: simulation and exact analytics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Monte Carlo estimate of the probability that no critical windows overlap.
    Simulate(SimulateArgs),
    /// Closed-form values.
    #[command(subcommand)]
    Analytic(AnalyticCommand),
    /// Brute-force exact values for small instances.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Cross-check closed forms, oracles and simulation.
    Verify(VerifyArgs),
    /// Simulate a grid of models and thread counts.
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Clone)]
struct GenerationArgs {
    /// Non-critical instructions per program.
    #[arg(long, default_value_t = DEFAULT_PROGRAM_LEN)]
    program_len: usize,
    /// Probability that a body instruction is a store.
    #[arg(long, default_value_t = 0.5)]
    store_prob: f64,
    /// Success probability of every permitted swap.
    #[arg(long, default_value_t = 0.5)]
    swap_prob: f64,
}

impl GenerationArgs {
    fn params(&self) -> Result<ModelParams> {
        let p = ModelParams {
            store_prob: self.store_prob,
            swap_prob: PairMatrix::splat(self.swap_prob),
            program_len: self.program_len,
        };
        p.validate()?;
        Ok(p)
    }
}

#[derive(Args, Debug, Clone)]
struct SamplingArgs {
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads (0 = available parallelism).
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long, value_parser = parse_model)]
    model: MemoryModel,
    #[arg(long, default_value_t = 2)]
    threads: usize,
    #[command(flatten)]
    generation: GenerationArgs,
    #[command(flatten)]
    sampling: SamplingArgs,
    #[arg(long, value_parser = parse_overlap, default_value = "closed")]
    overlap: Overlap,
    /// Draw a separate random program for each thread.
    #[arg(long)]
    independent_programs: bool,
}

#[derive(Subcommand, Debug)]
enum AnalyticCommand {
    /// Window pmf over a gamma range.
    Window {
        #[arg(long, value_parser = parse_model)]
        model: MemoryModel,
        #[arg(long, default_value = "0..8")]
        gamma: IntRange,
    },
    /// Exact disjointness probability for fixed segment lengths.
    Disjoint {
        #[arg(long, value_parser = parse_lengths)]
        lengths: SegmentLengths,
    },
    /// Two-thread probability that the bug does not manifest.
    TwoThread {
        #[arg(long, value_parser = parse_model)]
        model: MemoryModel,
    },
    /// SC closed form for n threads.
    ScPrA {
        #[arg(long)]
        threads: usize,
    },
    /// log2(sc-pr-a(n)) / n^2 over a range of n.
    Exponent {
        #[arg(long, default_value = "2..50")]
        threads: IntRange,
    },
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    /// Exhaustive window pmf at finite program length.
    Window {
        #[arg(long, value_parser = parse_model)]
        model: MemoryModel,
        #[arg(long, default_value_t = 10)]
        program_len: usize,
    },
    /// Enumerated bracket on the disjointness probability.
    Disjoint {
        #[arg(long, value_parser = parse_lengths)]
        lengths: SegmentLengths,
        #[arg(long, default_value_t = 24)]
        cap: u64,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    sampling: SamplingArgs,
    /// Body length for the exhaustive window check.
    #[arg(long, default_value_t = 10)]
    oracle_len: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SweepFormat {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_parser = parse_models, default_value = "sc,tso,pso,wo")]
    models: ModelList,
    #[arg(long, default_value = "2..8")]
    threads: IntRange,
    #[command(flatten)]
    generation: GenerationArgs,
    #[command(flatten)]
    sampling: SamplingArgs,
    #[arg(long, value_enum, default_value_t = SweepFormat::Csv)]
    format: SweepFormat,
}

/// Parses `argv` (program name first), runs the command against the
/// process streams and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let env_workers = std::env::var(WORKERS_ENV).ok();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(
        argv,
        env_workers.as_deref(),
        &mut stdout.lock(),
        &mut stderr.lock(),
    )
}

/// [`run`] with an explicit worker override and output streams.
pub fn run_with<I, T>(argv: I, env_workers: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    1
                }
            };
            return code;
        }
    };
    match execute(cli.command, env_workers, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn workers(flag: usize, env: Option<&str>) -> Result<usize> {
    match env {
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Usage(format!("{WORKERS_ENV}={v} is not a worker count"))),
        None => Ok(flag),
    }
}

fn sampling(args: &SamplingArgs, env: Option<&str>) -> Result<Sampling> {
    if args.samples == 0 {
        return Err(Error::Usage("--samples must be at least 1".into()));
    }
    Ok(Sampling::new(args.samples, args.seed).with_workers(workers(args.workers, env)?))
}

fn exact_json(v: &ExactValue) -> Value {
    json!({ "value": v.to_string(), "float": json_float(v.to_f64()) })
}

fn bounded_json(b: &BoundedValue) -> Value {
    json!({ "lower": exact_json(b.lower()), "upper": exact_json(b.upper()) })
}

fn params_json(p: &ModelParams) -> Map<String, Value> {
    use crate::model::InstructionType::Load;
    let mut m = Map::new();
    m.insert("program_len".into(), json!(p.program_len));
    m.insert("store_prob".into(), json_float(p.store_prob));
    m.insert("swap_prob".into(), json_float(p.swap_prob.get(Load, Load)));
    m
}

/// Assembles the output document: the echo fields plus `result` merged in.
fn document(command: &str, params: Value, seed: Option<u64>, result: Value) -> Value {
    let mut doc = Map::new();
    doc.insert("command".into(), json!(command));
    doc.insert("params".into(), params);
    doc.insert("seed".into(), json!(seed));
    doc.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    match result {
        Value::Object(fields) => {
            for (k, v) in fields {
                doc.entry(k).or_insert(v);
            }
        }
        other => {
            doc.insert("result".into(), other);
        }
    }
    Value::Object(doc)
}

fn emit(out: &mut dyn Write, doc: &Value) -> Result<()> {
    Ok(writeln!(out, "{doc}")?)
}

fn execute(command: Command, env_workers: Option<&str>, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Simulate(a) => {
            let params = a.generation.params()?;
            let s = sampling(&a.sampling, env_workers)?;
            let opts = PrAOptions {
                overlap: a.overlap,
                independent_programs: a.independent_programs,
            };
            let est = estimate_pr_a(&a.model, a.threads, &params, &s, &opts)?;
            let mut p = params_json(&params);
            p.insert("model".into(), json!(a.model.name()));
            p.insert("threads".into(), json!(a.threads));
            p.insert("samples".into(), json!(s.samples));
            p.insert("overlap".into(), json!(a.overlap));
            p.insert("independent_programs".into(), json!(a.independent_programs));
            let result = serde_json::to_value(&est).expect("estimate serializes");
            emit(out, &document("simulate", Value::Object(p), Some(s.seed), result))?;
            Ok(0)
        }
        Command::Analytic(a) => analytic(a, out),
        Command::Oracle(o) => oracle(o, out),
        Command::Verify(v) => {
            let config = VerifyConfig {
                sampling: sampling(&v.sampling, env_workers)?,
                oracle_len: v.oracle_len,
            };
            let checks = run_checks(&config);
            let passed = checks.iter().all(|c| c.passed);
            let params = json!({ "samples": config.sampling.samples, "oracle_len": config.oracle_len });
            let result = json!({ "passed": passed, "checks": checks });
            emit(
                out,
                &document("verify", params, Some(config.sampling.seed), result),
            )?;
            if !passed {
                let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
                return Err(Error::Verification(format!(
                    "failed checks: {}",
                    failed.join(", ")
                )));
            }
            Ok(0)
        }
        Command::Sweep(a) => sweep(a, env_workers, out),
    }
}

fn check_closed_form_threads(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Usage(format!("need at least 2 threads, got {n}")));
    }
    if n > MAX_CLOSED_FORM_THREADS {
        return Err(Error::ResourceGuard(format!(
            "{n} threads exceeds the closed-form limit {MAX_CLOSED_FORM_THREADS}"
        )));
    }
    Ok(())
}

fn analytic(command: AnalyticCommand, out: &mut dyn Write) -> Result<i32> {
    let doc = match command {
        AnalyticCommand::Window { model, gamma } => {
            let name = model.name();
            let rows: Vec<Value> = gamma
                .iter()
                .map(|g| {
                    let g32 = u32::try_from(g).map_err(|_| Error::Usage(format!("gamma {g} too large")))?;
                    let mut row = match name {
                        crate::ModelName::Tso => bounded_json(&window_pmf_bounds(g32)),
                        _ => exact_json(&window_pmf(name, g32)?),
                    };
                    row["gamma"] = json!(g);
                    Ok(row)
                })
                .collect::<Result<_>>()?;
            let params = json!({ "model": name, "gamma": gamma.to_string() });
            document("analytic window", params, None, json!({ "rows": rows }))
        }
        AnalyticCommand::Disjoint { lengths } => {
            let v = disjoint_probability(&lengths)?;
            document(
                "analytic disjoint",
                json!({ "lengths": lengths.to_string() }),
                None,
                exact_json(&v),
            )
        }
        AnalyticCommand::TwoThread { model } => {
            let result = match two_thread_pr_a(model.name())? {
                TwoThreadValue::Exact(v) => exact_json(&v),
                TwoThreadValue::Bounded(b) => bounded_json(&b),
            };
            document(
                "analytic two-thread",
                json!({ "model": model.name() }),
                None,
                result,
            )
        }
        AnalyticCommand::ScPrA { threads } => {
            check_closed_form_threads(threads)?;
            let v = sc_pr_a(threads)?;
            let mut result = exact_json(&v);
            result["log2"] = json_float(v.log2());
            document("analytic sc-pr-a", json!({ "threads": threads }), None, result)
        }
        AnalyticCommand::Exponent { threads } => {
            check_closed_form_threads(threads.start)?;
            check_closed_form_threads(threads.end)?;
            let rows: Vec<Value> = threads
                .iter()
                .map(|n| Ok(json!({ "n": n, "ratio": json_float(sc_exponent_ratio(n)?) })))
                .collect::<Result<_>>()?;
            document(
                "analytic exponent",
                json!({ "threads": threads.to_string() }),
                None,
                json!({ "rows": rows, "limit": json_float(-1.5) }),
            )
        }
    };
    emit(out, &doc)?;
    Ok(0)
}

fn oracle(command: OracleCommand, out: &mut dyn Write) -> Result<i32> {
    let doc = match command {
        OracleCommand::Window { model, program_len } => {
            let params = ModelParams::with_program_len(program_len);
            let pmf = exact_window_pmf(&model, &params)?;
            let rows: Vec<Value> = pmf
                .iter()
                .map(|(&g, v)| {
                    let mut row = exact_json(v);
                    row["gamma"] = json!(g);
                    row
                })
                .collect();
            let p = json!({ "model": model.name(), "program_len": program_len });
            document("oracle window", p, None, json!({ "rows": rows }))
        }
        OracleCommand::Disjoint { lengths, cap } => {
            let b = exact_disjoint(&lengths, cap)?;
            let p = json!({ "lengths": lengths.to_string(), "cap": cap });
            document("oracle disjoint", p, None, bounded_json(&b))
        }
    };
    emit(out, &doc)?;
    Ok(0)
}

pub const SWEEP_COLUMNS: [&str; 8] = [
    "model",
    "n",
    "m",
    "samples",
    "seed",
    "pr_a_mean",
    "pr_a_lo95",
    "pr_a_hi95",
];

fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.into())
}

fn sweep(a: SweepArgs, env_workers: Option<&str>, out: &mut dyn Write) -> Result<i32> {
    let params = a.generation.params()?;
    let s = sampling(&a.sampling, env_workers)?;
    let mut rows = Vec::new();
    for model in &a.models.0 {
        for n in a.threads.iter() {
            let e = estimate_pr_a(model, n, &params, &s, &PrAOptions::default())?;
            rows.push((model.name(), n, e));
        }
    }
    match a.format {
        SweepFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(SWEEP_COLUMNS).map_err(csv_error)?;
            for (name, n, e) in &rows {
                let record = [
                    name.to_string(),
                    n.to_string(),
                    params.program_len.to_string(),
                    e.samples.to_string(),
                    e.seed.to_string(),
                    crate::format::float12(e.mean),
                    crate::format::float12(e.ci95.0),
                    crate::format::float12(e.ci95.1),
                ];
                w.write_record(&record).map_err(csv_error)?;
            }
            w.flush()?;
        }
        SweepFormat::Json => {
            let table: Vec<Value> = rows
                .iter()
                .map(|(name, n, e)| {
                    json!({
                        "model": name,
                        "n": n,
                        "m": params.program_len,
                        "samples": e.samples,
                        "seed": e.seed,
                        "pr_a_mean": json_float(e.mean),
                        "pr_a_lo95": json_float(e.ci95.0),
                        "pr_a_hi95": json_float(e.ci95.1),
                    })
                })
                .collect();
            let mut p = params_json(&params);
            p.insert(
                "models".into(),
                json!(a.models.0.iter().map(|m| m.name()).collect::<Vec<_>>()),
            );
            p.insert("threads".into(), json!(a.threads.to_string()));
            p.insert("samples".into(), json!(s.samples));
            emit(
                out,
                &document("sweep", Value::Object(p), Some(s.seed), json!({ "rows": table })),
            )?;
        }
    }
    Ok(0)
}

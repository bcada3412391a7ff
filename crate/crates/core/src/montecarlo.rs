//! Sampling engine: one program per sample, `n` independently settled
//! copies, geometric shifts, disjointness test.
//!
//! Samples are split into fixed-size blocks processed in parallel. Every
//! sample draws from `master.split(sample_index)` and blocks return integer
//! tallies that are summed, so results depend on the seed and the
//! configuration but never on the worker count or scheduling.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::format;
use crate::model::{InstructionType, MemoryModel, ModelName, ModelParams};
use crate::rng::RandomStream;
use crate::settling::{generate_program, Program, Settler};
use crate::shift::{disjoint_slices, sample_shift, Overlap, SegmentLengths};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;

pub const MAX_MC_THREADS: usize = 1 << 12;
pub const MAX_MC_PROGRAM_LEN: usize = 1 << 20;

const BLOCK: u64 = 1 << 13;

/// Sample count, master seed and parallelism of one estimation run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sampling {
    pub samples: u64,
    pub seed: u64,
    /// Worker threads; `0` means available parallelism.
    pub workers: usize,
}

impl Sampling {
    pub fn new(samples: u64, seed: u64) -> Self {
        Sampling {
            samples,
            seed,
            workers: 0,
        }
    }

    pub fn with_workers(self, workers: usize) -> Self {
        Sampling { workers, ..self }
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Usage("samples must be at least 1".into()));
        }
        Ok(())
    }
}

/// Proportion estimate with its Wilson 95% interval.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    #[serde(serialize_with = "format::serialize_f64")]
    pub mean: f64,
    #[serde(serialize_with = "format::serialize_f64")]
    pub stderr: f64,
    #[serde(serialize_with = "format::serialize_f64_pair")]
    pub ci95: (f64, f64),
    pub samples: u64,
    pub hits: u64,
    pub seed: u64,
    pub config_echo: Value,
}

impl Estimate {
    pub fn from_counts(hits: u64, samples: u64, seed: u64, config_echo: Value) -> Self {
        assert!(samples > 0 && hits <= samples);
        let n = samples as f64;
        let p = hits as f64 / n;
        Estimate {
            mean: p,
            stderr: (p * (1.0 - p) / n).sqrt(),
            ci95: wilson_interval(hits, samples, Z95),
            samples,
            hits,
            seed,
            config_echo,
        }
    }

    /// `|mean - target| <= k_sigma * stderr + slack`.
    pub fn within(&self, target: f64, k_sigma: f64, slack: f64) -> bool {
        (self.mean - target).abs() <= k_sigma * self.stderr + slack
    }

    /// Like [`Estimate::within`] with the standard error evaluated at
    /// `target` instead of at the sample mean, which stays meaningful
    /// when the expected hit count is near zero.
    pub fn within_target_sigma(&self, target: f64, k_sigma: f64) -> bool {
        let sigma = (target * (1.0 - target) / self.samples as f64).sqrt();
        (self.mean - target).abs() <= k_sigma * sigma
    }

    /// Whether the estimate lies in `[lo - k stderr, hi + k stderr]`.
    pub fn within_range(&self, lo: f64, hi: f64, k_sigma: f64) -> bool {
        let d = k_sigma * self.stderr;
        self.mean >= lo - d && self.mean <= hi + d
    }
}

/// Wilson score interval for `hits` successes out of `samples`.
pub fn wilson_interval(hits: u64, samples: u64, z: f64) -> (f64, f64) {
    let n = samples as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Counts over a non-negative integer statistic.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub counts: Vec<u64>,
    pub samples: u64,
    pub seed: u64,
    pub config_echo: Value,
}

impl Histogram {
    /// Per-bin proportion estimate; bins beyond the observed range are
    /// empty.
    pub fn estimate(&self, bin: usize) -> Estimate {
        let hits = self.counts.get(bin).copied().unwrap_or(0);
        let mut echo = self.config_echo.clone();
        if let Value::Object(map) = &mut echo {
            map.insert("bin".into(), json!(bin));
        }
        Estimate::from_counts(hits, self.samples, self.seed, echo)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn max_bin(&self) -> Option<usize> {
        self.counts.iter().rposition(|&c| c > 0)
    }
}

/// Options of [`estimate_pr_a`] outside the acceptance configuration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PrAOptions {
    pub overlap: Overlap,
    /// Draw a fresh program per thread instead of one shared program.
    pub independent_programs: bool,
}

trait Tally: Send {
    fn merge(&mut self, other: Self);
}

impl Tally for u64 {
    fn merge(&mut self, other: Self) {
        *self += other;
    }
}

impl Tally for Vec<u64> {
    fn merge(&mut self, other: Self) {
        if other.len() > self.len() {
            self.resize(other.len(), 0);
        }
        for (a, b) in self.iter_mut().zip(other) {
            *a += b;
        }
    }
}

fn bump(counts: &mut Vec<u64>, bin: usize) {
    if bin >= counts.len() {
        counts.resize(bin + 1, 0);
    }
    counts[bin] += 1;
}

/// Runs `body(scratch, tally, stream)` once per sample, `stream` being the
/// sample's own substream, and sums the block tallies.
fn run_blocks<T, S>(
    sampling: &Sampling,
    scratch: impl Fn() -> S + Sync + Send,
    body: impl Fn(&mut S, &mut T, RandomStream) + Sync + Send,
) -> Result<T>
where
    T: Tally + Default,
{
    sampling.validate()?;
    let master = RandomStream::new(sampling.seed);
    let blocks = sampling.samples.div_ceil(BLOCK);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(sampling.workers)
        .build()
        .map_err(|e| Error::ResourceGuard(format!("cannot start worker pool: {e}")))?;
    let total = pool.install(|| {
        (0..blocks)
            .into_par_iter()
            .map_init(&scratch, |s, b| {
                let mut tally = T::default();
                let end = ((b + 1) * BLOCK).min(sampling.samples);
                for i in b * BLOCK..end {
                    body(s, &mut tally, master.split(i));
                }
                tally
            })
            .reduce(T::default, |mut a, b| {
                a.merge(b);
                a
            })
    });
    Ok(total)
}

fn check_program_len(params: &ModelParams) -> Result<()> {
    params.validate()?;
    if params.program_len > MAX_MC_PROGRAM_LEN {
        return Err(Error::ResourceGuard(format!(
            "program length {} exceeds the sampling limit {MAX_MC_PROGRAM_LEN}",
            params.program_len
        )));
    }
    Ok(())
}

fn params_echo(params: &ModelParams) -> Value {
    use InstructionType::{Load as Ld, Store as St};
    let s = &params.swap_prob;
    json!({
        "program_len": params.program_len,
        "store_prob": format::json_float(params.store_prob),
        "swap_prob": {
            "ld_ld": format::json_float(s.get(Ld, Ld)),
            "ld_st": format::json_float(s.get(Ld, St)),
            "st_ld": format::json_float(s.get(St, Ld)),
            "st_st": format::json_float(s.get(St, St)),
        },
    })
}

fn require_tso(model: &MemoryModel, what: &'static str) -> Result<()> {
    if model.name() != ModelName::Tso {
        return Err(Error::UnsupportedModel {
            model: model.to_string(),
            what,
        });
    }
    Ok(())
}

struct PrAScratch {
    settler: Settler,
    lengths: Vec<usize>,
    shifts: Vec<u64>,
}

/// Estimates `Pr[A]`, the probability that no two of `threads` critical
/// windows overlap after settling and shifting.
///
/// Per sample: one program (unless `independent_programs`), `threads`
/// independent settlings of it and one geometric shift per thread.
pub fn estimate_pr_a(
    model: &MemoryModel,
    threads: usize,
    params: &ModelParams,
    sampling: &Sampling,
    options: &PrAOptions,
) -> Result<Estimate> {
    if threads < 2 {
        return Err(Error::Usage(format!("need at least 2 threads, got {threads}")));
    }
    if threads > MAX_MC_THREADS {
        return Err(Error::ResourceGuard(format!(
            "{threads} threads exceeds the sampling limit {MAX_MC_THREADS}"
        )));
    }
    check_program_len(params)?;
    let hits: u64 = run_blocks(
        sampling,
        || PrAScratch {
            settler: Settler::new(model, params),
            lengths: vec![0; threads],
            shifts: vec![0; threads],
        },
        |s, hits, stream| {
            let shared = generate_program(params, &mut stream.split(0));
            let mut own: Program;
            for k in 0..threads {
                let mut ts = stream.split(k as u64 + 1);
                let program = if options.independent_programs {
                    own = generate_program(params, &mut ts.split(u64::MAX));
                    &own
                } else {
                    &shared
                };
                s.lengths[k] = s.settler.window(program, &mut ts).segment_length;
                s.shifts[k] = sample_shift(&mut ts);
            }
            *hits += disjoint_slices(&s.lengths, &s.shifts, options.overlap) as u64;
        },
    )?;
    let echo = json!({
        "estimator": "pr_a",
        "model": model.name(),
        "threads": threads,
        "params": params_echo(params),
        "overlap": options.overlap,
        "independent_programs": options.independent_programs,
    });
    Ok(Estimate::from_counts(hits, sampling.samples, sampling.seed, echo))
}

/// Histogram of the critical window `gamma`, one settling per sample.
pub fn estimate_window_pmf(
    model: &MemoryModel,
    params: &ModelParams,
    sampling: &Sampling,
) -> Result<Histogram> {
    check_program_len(params)?;
    let counts: Vec<u64> = run_blocks(
        sampling,
        || Settler::new(model, params),
        |settler, counts, stream| {
            let program = generate_program(params, &mut stream.split(0));
            let w = settler.window(&program, &mut stream.split(1));
            bump(counts, w.gamma);
        },
    )?;
    Ok(Histogram {
        counts,
        samples: sampling.samples,
        seed: sampling.seed,
        config_echo: json!({
            "estimator": "window_pmf",
            "model": model.name(),
            "params": params_echo(params),
        }),
    })
}

/// Histogram of `mu`, the length of the store run directly above the
/// critical load's slot once the body has settled under TSO.
pub fn estimate_l_mu(params: &ModelParams, sampling: &Sampling) -> Result<Histogram> {
    check_program_len(params)?;
    let model = MemoryModel::TSO;
    let counts: Vec<u64> = run_blocks(
        sampling,
        || Settler::new(&model, params),
        |settler, counts, stream| {
            let program = generate_program(params, &mut stream.split(0));
            let settled: Vec<InstructionType> = settler.body(&program, &mut stream.split(1)).collect();
            let mu = settled.iter().rev().take_while(|t| t.is_store()).count();
            bump(counts, mu);
        },
    )?;
    Ok(Histogram {
        counts,
        samples: sampling.samples,
        seed: sampling.seed,
        config_echo: json!({
            "estimator": "l_mu",
            "model": model.name(),
            "params": params_echo(params),
        }),
    })
}

/// Fraction of samples whose bottom body instruction is a store after the
/// body settles under `model` (TSO only).
pub fn estimate_bottom_store(
    model: &MemoryModel,
    params: &ModelParams,
    sampling: &Sampling,
) -> Result<Estimate> {
    require_tso(model, "bottom-store estimate is defined for tso")?;
    if params.program_len == 0 {
        return Err(Error::Usage(
            "bottom-store estimate needs program length >= 1".into(),
        ));
    }
    check_program_len(params)?;
    let hits: u64 = run_blocks(
        sampling,
        || Settler::new(model, params),
        |settler, hits, stream| {
            let program = generate_program(params, &mut stream.split(0));
            let last = settler.body(&program, &mut stream.split(1)).last();
            *hits += last.is_some_and(InstructionType::is_store) as u64;
        },
    )?;
    let echo = json!({
        "estimator": "bottom_store",
        "model": model.name(),
        "params": params_echo(params),
    });
    Ok(Estimate::from_counts(hits, sampling.samples, sampling.seed, echo))
}

/// Shift-only estimate of `Pr[A(lengths)]` with fixed segment lengths.
pub fn estimate_disjoint_fixed(
    lengths: &SegmentLengths,
    sampling: &Sampling,
    overlap: Overlap,
) -> Result<Estimate> {
    let n = lengths.len();
    let lens = lengths.as_slice();
    let hits: u64 = run_blocks(
        sampling,
        || vec![0u64; n],
        |shifts, hits, mut stream| {
            for s in shifts.iter_mut() {
                *s = sample_shift(&mut stream);
            }
            *hits += disjoint_slices(lens, shifts, overlap) as u64;
        },
    )?;
    let echo = json!({
        "estimator": "disjoint_fixed",
        "lengths": lengths.to_string(),
        "overlap": overlap,
    });
    Ok(Estimate::from_counts(hits, sampling.samples, sampling.seed, echo))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{bottom_store_prob, disjoint_probability};

    fn run(samples: u64, seed: u64) -> Sampling {
        Sampling::new(samples, seed)
    }

    #[test]
    fn wilson_examples() {
        let (lo, hi) = wilson_interval(0, 10, Z95);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.2 && hi < 0.4);
        let (lo, hi) = wilson_interval(50, 100, Z95);
        assert!((lo + hi - 1.0).abs() < 1e-12);
        assert!(lo < 0.5 && hi > 0.5);
        let e = Estimate::from_counts(25, 100, 1, Value::Null);
        assert_eq!(e.mean, 0.25);
        assert!((e.stderr - (0.25f64 * 0.75 / 100.0).sqrt()).abs() < 1e-15);
        let empty = Estimate::from_counts(0, 1000, 1, Value::Null);
        assert!(!empty.within(1e-4, 3.0, 0.0));
        assert!(empty.within_target_sigma(1e-4, 3.0));
    }

    #[test]
    fn usage_errors() {
        let p = ModelParams::default();
        let o = PrAOptions::default();
        let zero = estimate_pr_a(&MemoryModel::SC, 2, &p, &run(0, 1), &o).unwrap_err();
        assert_eq!(zero.exit_code(), 1);
        let one = estimate_pr_a(&MemoryModel::SC, 1, &p, &run(10, 1), &o).unwrap_err();
        assert_eq!(one.exit_code(), 1);
        let many = estimate_pr_a(&MemoryModel::SC, MAX_MC_THREADS + 1, &p, &run(10, 1), &o).unwrap_err();
        assert_eq!(many.exit_code(), 2);
        assert!(estimate_bottom_store(&MemoryModel::WO, &p, &run(10, 1)).is_err());
    }

    #[test]
    fn worker_count_does_not_change_counts() {
        let p = ModelParams::with_program_len(16);
        let o = PrAOptions::default();
        let base = estimate_pr_a(&MemoryModel::TSO, 3, &p, &run(30_000, 9).with_workers(1), &o).unwrap();
        for w in [2, 3, 8] {
            let e = estimate_pr_a(&MemoryModel::TSO, 3, &p, &run(30_000, 9).with_workers(w), &o).unwrap();
            assert_eq!(e, base);
        }
        let other = estimate_pr_a(&MemoryModel::TSO, 3, &p, &run(30_000, 10), &o).unwrap();
        assert_ne!(other.hits, base.hits);
    }

    #[test]
    fn sc_window_is_degenerate() {
        let h = estimate_window_pmf(&MemoryModel::SC, &ModelParams::default(), &run(20_000, 3)).unwrap();
        assert_eq!(h.counts, vec![20_000]);
    }

    #[test]
    fn sc_two_threads_near_one_sixth() {
        let e = estimate_pr_a(
            &MemoryModel::SC,
            2,
            &ModelParams::default(),
            &run(200_000, 5),
            &PrAOptions::default(),
        )
        .unwrap();
        assert!(e.within(1.0 / 6.0, 4.0, 0.0), "{}", e.mean);
        assert!(e.ci95.0 < e.mean && e.mean < e.ci95.1);
    }

    #[test]
    fn bottom_store_small_bodies() {
        for m in 1..=3 {
            let e = estimate_bottom_store(
                &MemoryModel::TSO,
                &ModelParams::with_program_len(m),
                &run(200_000, m as u64),
            )
            .unwrap();
            let want = bottom_store_prob(m as u32).unwrap().to_f64();
            assert!(e.within(want, 4.0, 0.0), "m={m}: {} vs {want}", e.mean);
        }
    }

    #[test]
    fn l_mu_sums_to_samples() {
        let h = estimate_l_mu(&ModelParams::with_program_len(20), &run(10_000, 2)).unwrap();
        assert_eq!(h.total(), 10_000);
        assert!(h.max_bin().unwrap() <= 20);
    }

    #[test]
    fn shift_only_matches_exact() {
        let lengths = SegmentLengths::new(vec![2, 3]).unwrap();
        let e = estimate_disjoint_fixed(&lengths, &run(200_000, 4), Overlap::Closed).unwrap();
        let want = disjoint_probability(&lengths).unwrap().to_f64();
        assert!(e.within(want, 4.0, 0.0));
    }

    #[test]
    fn histogram_bins_past_the_end_are_empty() {
        let h = Histogram {
            counts: vec![3, 1],
            samples: 4,
            seed: 0,
            config_echo: json!({}),
        };
        assert_eq!(h.estimate(1).mean, 0.25);
        assert_eq!(h.estimate(7).hits, 0);
        assert_eq!(h.estimate(7).config_echo["bin"], 7);
    }
}

//! Space/time sweeps over `(variant, s)` on one text.

use std::fmt::Write as _;
use std::thread;
use std::time::Instant;

use crate::build::{build_index_from_context, BuildOptions};
use crate::error::BenchError;
use crate::oracle::scan_occurrences;
use crate::persist;
use crate::query::SrIndex;
use crate::subsample::Variant;
use crate::suffix::SuffixContext;
use crate::text::{sample_patterns, Text, RNG_ALGORITHM};

/// How patterns are drawn; echoed in every report.
pub const PATTERN_SAMPLING: &str = "uniform start positions, with replacement";

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub s_values: Vec<usize>,
    pub variants: Vec<Variant>,
    pub pattern_count: usize,
    pub m: usize,
    pub rng_seed: u64,
    /// Spread queries over threads. Timings become noisier; answers do not change.
    pub parallel: bool,
    /// Every `check_every`-th query is compared with a naive scan.
    pub check_every: usize,
}

impl BenchConfig {
    pub fn new(s_values: Vec<usize>, variants: Vec<Variant>) -> Self {
        Self {
            s_values,
            variants,
            pattern_count: 1000,
            m: 10,
            rng_seed: 1,
            parallel: false,
            check_every: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub s: usize,
    pub variant: Variant,
    pub index_bytes: usize,
    pub bits_per_symbol: f64,
    pub n: usize,
    pub r: usize,
    pub n_over_r: f64,
    /// Locate wall time over patterns that occur, divided by their occurrences.
    pub mean_time_per_occ_us: f64,
    /// Toehold plus recursion LF-steps per occurrence.
    pub mean_lf_steps_per_occ: f64,
    pub pattern_count: usize,
    pub m: usize,
    pub rng_seed: u64,
    pub total_occ: usize,
    pub spot_checked: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub rng: &'static str,
    pub sampling: &'static str,
    pub records: Vec<BenchRecord>,
}

const TSV_HEADER: &str = "s\tvariant\tindex_bytes\tbits_per_symbol\tn\tr\tn_over_r\tmean_time_per_occ_us\tmean_lf_steps_per_occ\tpattern_count\tm\trng_seed\trng";

impl BenchReport {
    /// One header line, then one tab-separated line per record.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from(TSV_HEADER);
        out.push('\n');
        for r in &self.records {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{:.4}\t{}\t{}\t{:.2}\t{:.4}\t{:.3}\t{}\t{}\t{}\t{}",
                r.s,
                r.variant,
                r.index_bytes,
                r.bits_per_symbol,
                r.n,
                r.r,
                r.n_over_r,
                r.mean_time_per_occ_us,
                r.mean_lf_steps_per_occ,
                r.pattern_count,
                r.m,
                r.rng_seed,
                self.rng
            );
        }
        out
    }

    pub fn summary_table(&self) -> String {
        let mut out = format!("{:>7} {:>4} {:>12} {:>8} {:>10} {:>10}\n", "variant", "s", "bytes", "bps", "us/occ", "steps/occ");
        for r in &self.records {
            let _ = writeln!(
                out,
                "{:>7} {:>4} {:>12} {:>8.3} {:>10.3} {:>10.2}",
                r.variant.to_string(),
                r.s,
                r.index_bytes,
                r.bits_per_symbol,
                r.mean_time_per_occ_us,
                r.mean_lf_steps_per_occ
            );
        }
        let _ = writeln!(out, "patterns: {} ({PATTERN_SAMPLING}); rng: {}", self.records.first().map_or(0, |r| r.pattern_count), self.rng);
        out
    }
}

#[derive(Debug, Default, Clone, Copy)]
struct Outcome {
    nanos: u128,
    occ: usize,
    steps: usize,
}

fn run_queries(idx: &SrIndex, patterns: &[Vec<u8>]) -> Result<Vec<(Outcome, Vec<usize>)>, BenchError> {
    patterns
        .iter()
        .map(|p| {
            let t = Instant::now();
            let (res, stats) = idx.locate_codes_with_stats(p)?;
            let nanos = t.elapsed().as_nanos();
            let out = Outcome {
                nanos,
                occ: res.len(),
                steps: stats.lf_steps + stats.toehold_steps,
            };
            Ok((out, res))
        })
        .collect()
}

/// Builds every configuration and times locate on sampled patterns. A
/// spot-check mismatch aborts the whole run.
pub fn run_bench(text: &Text, cfg: &BenchConfig) -> Result<BenchReport, BenchError> {
    if cfg.s_values.is_empty() || cfg.variants.is_empty() || cfg.check_every == 0 {
        return Err(BenchError::InvalidConfig("need at least one s, one variant and check_every >= 1".into()));
    }
    let ctx = SuffixContext::new(text);
    let set = sample_patterns(text, cfg.pattern_count, cfg.m, cfg.rng_seed)?;
    let codes = text.codes();
    let mut configs: Vec<(Variant, usize)> = cfg
        .variants
        .iter()
        .flat_map(|&v| cfg.s_values.iter().map(move |&s| (v, s)))
        .collect();
    configs.sort_unstable();
    configs.dedup();

    let mut records = Vec::with_capacity(configs.len());
    for (variant, s) in configs {
        let idx = build_index_from_context(text, &ctx, &BuildOptions::new(s, variant))?;
        let results = if cfg.parallel {
            let threads = thread::available_parallelism().map_or(1, |n| n.get());
            let chunk = set.patterns.len().div_ceil(threads).max(1);
            thread::scope(|sc| {
                let handles: Vec<_> = set.patterns.chunks(chunk).map(|ch| sc.spawn(|| run_queries(&idx, ch))).collect();
                let mut all = Vec::with_capacity(set.patterns.len());
                for h in handles {
                    all.extend(h.join().expect("query thread panicked")?);
                }
                Ok::<_, BenchError>(all)
            })?
        } else {
            run_queries(&idx, &set.patterns)?
        };

        let mut spot_checked = 0;
        for (i, (_, res)) in results.iter().enumerate().filter(|(i, _)| i % cfg.check_every == 0) {
            let mut got = res.clone();
            got.sort_unstable();
            let expected = scan_occurrences(&codes[..codes.len() - 1], &set.patterns[i]);
            if got != expected {
                return Err(BenchError::SpotCheckFailed {
                    s,
                    variant: variant.as_u8(),
                    pattern: i,
                    got: got.len(),
                    expected: expected.len(),
                });
            }
            spot_checked += 1;
        }

        let (mut nanos, mut occ, mut steps) = (0u128, 0usize, 0usize);
        for (o, _) in results.iter().filter(|(o, _)| o.occ > 0) {
            nanos += o.nanos;
            occ += o.occ;
            steps += o.steps;
        }
        let index_bytes = persist::to_bytes(&idx).len();
        let per = |x: f64| if occ == 0 { 0.0 } else { x / occ as f64 };
        records.push(BenchRecord {
            s,
            variant,
            index_bytes,
            bits_per_symbol: 8.0 * index_bytes as f64 / text.n() as f64,
            n: text.n(),
            r: idx.r(),
            n_over_r: text.n() as f64 / idx.r() as f64,
            mean_time_per_occ_us: per(nanos as f64 / 1000.0),
            mean_lf_steps_per_occ: per(steps as f64),
            pattern_count: set.patterns.len(),
            m: cfg.m,
            rng_seed: cfg.rng_seed,
            total_occ: occ,
            spot_checked,
        });
    }
    Ok(BenchReport {
        rng: RNG_ALGORITHM,
        sampling: PATTERN_SAMPLING,
        records,
    })
}

use std::fmt;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use srindex::bench::{run_bench, BenchConfig};
use srindex::build::build_index_reported;
use srindex::persist;
use srindex::text::{gen_mutated_dna_bytes, DnaSpec};
use srindex::{BuildOptions, SrIndex, Text, Variant, VerifyLevel};

const SEED_ENV: &str = "SRINDEX_SEED";

#[derive(Parser)]
#[command(name = "srindex", version, about = "Build and query subsampled r-indexes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Index a text file.
    Build {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = 8)]
        s: usize,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(0..=2))]
        variant: u8,
        #[arg(long, value_enum, default_value_t = Verify::Lemmas)]
        verify: Verify,
    },
    /// Count occurrences of each pattern line.
    Count {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        patterns: PathBuf,
    },
    /// List occurrence positions of each pattern line.
    Locate {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        patterns: PathBuf,
        /// Print positions in ascending order instead of emission order.
        #[arg(long)]
        sorted: bool,
    },
    /// Print index parameters and space usage.
    Stats {
        #[arg(long)]
        index: PathBuf,
    },
    /// Generate a synthetic text collection.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        seed_len: usize,
        #[arg(long)]
        copies: usize,
        #[arg(long)]
        rate: f64,
        #[arg(long, default_value_t = 1)]
        rng_seed: u64,
        #[arg(long)]
        output: PathBuf,
    },
    /// Time locate over sampled patterns for several configurations.
    Bench {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = [4, 8, 16, 32, 64])]
        s: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = [0, 1, 2], value_parser = clap::value_parser!(u8).range(0..=2))]
        variants: Vec<u8>,
        #[arg(long, default_value_t = 1000)]
        pattern_count: usize,
        #[arg(long, default_value_t = 10)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        rng_seed: u64,
        /// Run queries on several threads.
        #[arg(long)]
        parallel: bool,
        /// Write the TSV report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Verify {
    None,
    Lemmas,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Dna,
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn io(path: &Path, e: impl fmt::Display) -> Self {
        Self { code: 2, msg: format!("{}: {e}", path.display()) }
    }

    fn query(e: impl fmt::Display) -> Self {
        Self { code: 1, msg: e.to_string() }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Build { input, output, s, variant, verify } => build(&input, &output, s, variant, verify),
        Cmd::Count { index, patterns } => query(&index, &patterns, None),
        Cmd::Locate { index, patterns, sorted } => query(&index, &patterns, Some(sorted)),
        Cmd::Stats { index } => stats(&index),
        Cmd::Gen { kind: Kind::Dna, seed_len, copies, rate, rng_seed, output } => {
            let spec = DnaSpec { seed_len, copies, mutation_rate: rate, rng_seed: seed_override(rng_seed) };
            gen(&spec, &output)
        }
        Cmd::Bench { input, s, variants, pattern_count, m, rng_seed, parallel, output } => {
            let variants = variants.into_iter().map(|v| Variant::from_u8(v).expect("range-checked")).collect();
            let mut cfg = BenchConfig::new(s, variants);
            cfg.pattern_count = pattern_count;
            cfg.m = m;
            cfg.rng_seed = seed_override(rng_seed);
            cfg.parallel = parallel;
            bench(&input, &cfg, output.as_deref())
        }
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn seed_override(flag: u64) -> u64 {
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().unwrap_or_else(|_| {
            eprintln!("warning: ignoring unparsable {SEED_ENV}={v}");
            flag
        }),
        Err(_) => flag,
    }
}

fn read_text(path: &Path) -> Result<Text, Failure> {
    let raw = fs::read(path).map_err(|e| Failure::io(path, e))?;
    Text::from_bytes(&raw).map_err(|e| Failure::io(path, e))
}

fn load(path: &Path) -> Result<SrIndex, Failure> {
    persist::load_file(path).map_err(|e| Failure::io(path, e))
}

fn build(input: &Path, output: &Path, s: usize, variant: u8, verify: Verify) -> CmdResult {
    let text = read_text(input)?;
    let level = match verify {
        Verify::None => VerifyLevel::None,
        Verify::Lemmas => VerifyLevel::Lemmas,
        Verify::Full => VerifyLevel::FullOracle,
    };
    let variant = Variant::from_u8(variant).expect("range-checked");
    let opts = BuildOptions::new(s, variant).verify(level).instrumented(true);
    let (idx, report) = build_index_reported(&text, &opts).map_err(Failure::query)?;
    let written = persist::save_file(&idx, output).map_err(|e| Failure::io(output, e))?;
    println!("n={}", idx.n());
    println!("r={}", idx.r());
    println!("n/r={:.3}", idx.n() as f64 / idx.r() as f64);
    println!("s={s}");
    println!("variant={variant}");
    println!("retained={}", idx.retained());
    for c in persist::component_sizes(&idx) {
        println!("bytes.{}={}", c.name, c.bytes);
    }
    println!("bytes.total={written}");
    if let Some(r) = report {
        eprintln!(
            "suffix array {:.3}s, index {:.3}s, verify {:.3}s",
            r.suffix_time.as_secs_f64(),
            r.index_time.as_secs_f64(),
            r.verify_time.as_secs_f64()
        );
    }
    Ok(())
}

/// Runs count (`locate == None`) or locate over every non-empty line.
fn query(index: &Path, patterns: &Path, locate: Option<bool>) -> CmdResult {
    let idx = load(index)?;
    let data = fs::read(patterns).map_err(|e| Failure::io(patterns, e))?;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let mut lines: Vec<&[u8]> = data.split(|&b| b == b'\n').collect();
    if data.ends_with(b"\n") {
        lines.pop();
    }
    for (no, line) in lines.into_iter().enumerate() {
        if line.is_empty() {
            eprintln!("warning: skipping empty pattern on line {}", no + 1);
            continue;
        }
        let shown = String::from_utf8_lossy(line);
        let res = match locate {
            None => idx.count(line).map(|c| format!("{shown}\t{}", c.occ())),
            Some(sorted) => idx.locate(line).map(|mut pos| {
                if sorted {
                    pos.sort_unstable();
                }
                let list: Vec<String> = pos.iter().map(usize::to_string).collect();
                format!("{shown}\t{}\t{}", pos.len(), list.join(","))
            }),
        };
        let rec = res.map_err(|e| Failure::query(format!("line {}: {e}", no + 1)))?;
        writeln!(out, "{rec}").map_err(|e| Failure { code: 2, msg: e.to_string() })?;
    }
    out.flush().map_err(|e| Failure { code: 2, msg: e.to_string() })
}

fn stats(index: &Path) -> CmdResult {
    let idx = load(index)?;
    let n = idx.n() as f64;
    let sizes = persist::component_sizes(&idx);
    let total = persist::HEADER_LEN + sizes.iter().map(|c| c.bytes).sum::<usize>();
    println!("n={}", idx.n());
    println!("r={}", idx.r());
    println!("n/r={:.3}", n / idx.r() as f64);
    println!("sigma={}", idx.sigma());
    println!("s={}", idx.s());
    println!("variant={}", idx.variant());
    println!("retained={}", idx.retained());
    println!("bytes.total={total}");
    println!("bps.total={:.4}", 8.0 * total as f64 / n);
    println!("bps.header={:.4}", 8.0 * persist::HEADER_LEN as f64 / n);
    for c in sizes {
        println!("bps.{}={:.4}", c.name, 8.0 * c.bytes as f64 / n);
    }
    Ok(())
}

fn gen(spec: &DnaSpec, output: &Path) -> CmdResult {
    let bytes = gen_mutated_dna_bytes(spec).map_err(|e| Failure { code: 2, msg: e.to_string() })?;
    fs::write(output, &bytes).map_err(|e| Failure::io(output, e))?;
    eprintln!("wrote {} bytes to {}", bytes.len(), output.display());
    Ok(())
}

fn bench(input: &Path, cfg: &BenchConfig, output: Option<&Path>) -> CmdResult {
    let text = read_text(input)?;
    let report = run_bench(&text, cfg).map_err(Failure::query)?;
    match output {
        Some(path) => fs::write(path, report.to_tsv()).map_err(|e| Failure::io(path, e))?,
        None => print!("{}", report.to_tsv()),
    }
    eprint!("{}", report.summary_table());
    Ok(())
}

mod cache;
mod jobs;
mod report;
mod word;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use cyclotomic::numeric::{Method, DEFAULT_PRECISION};

use cache::{Cache, Stats};
use jobs::{Suite, VerifyParams};
use report::{emit_tables, CheckRecord, Format, Report};
use word::ParsedWord;

/// Inclusive range `a..b`, `a..=b` or a single value.
#[derive(Clone, Debug)]
struct Span(Vec<u32>);

fn parse_range(s: &str) -> Result<Span, String> {
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim(), b.trim().trim_start_matches('=')),
        None => (s.trim(), s.trim()),
    };
    let lo: u32 = lo.parse().map_err(|_| format!("bad range start {lo:?}"))?;
    let hi: u32 = hi.parse().map_err(|_| format!("bad range end {hi:?}"))?;
    if lo > hi {
        return Err(format!("empty range {s}"));
    }
    Ok(Span((lo..=hi).collect()))
}

fn parse_level(s: &str) -> Result<i64, String> {
    match s.parse::<i64>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("level must be a positive integer, got {s:?}")),
    }
}

fn parse_tol(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
        _ => Err(format!("tolerance must be positive, got {s:?}")),
    }
}

#[derive(Parser)]
#[command(name = "cyclo", version, about = "Dihedral Lie coalgebra dimensions, verification suites and multiple polylogarithms")]
struct Cli {
    /// Directory for cached results (disabled when unset).
    #[arg(long, env = "CYCLO_CACHE_DIR", global = true)]
    cache_dir: Option<PathBuf>,
    /// Worker threads (defaults to the available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Print stage timings and cache statistics to stderr.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Partial,
    Extrapolate,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension table of 𝒟_{w,m}(μ_N) as CSV.
    Dim {
        #[arg(long = "N", value_delimiter = ',', default_value = "1", value_parser = parse_level)]
        levels: Vec<i64>,
        #[arg(long, value_parser = parse_range)]
        m: Span,
        #[arg(long, value_parser = parse_range)]
        w: Span,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cobracket of each quotient basis vector of 𝒟_{w,m}(μ_N) as CSV.
    Cobracket {
        #[arg(long = "N", default_value = "1", value_parser = parse_level)]
        level: i64,
        #[arg(long)]
        w: u32,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite; exits 1 if any identity fails.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long = "N", value_delimiter = ',', default_value = "1", value_parser = parse_level)]
        levels: Vec<i64>,
        #[arg(long, default_value_t = 6)]
        w_max: u32,
        #[arg(long, default_value_t = 3)]
        m_max: usize,
        /// Coordinate bound for the lattice-basis enumeration.
        #[arg(long, default_value_t = 1)]
        bound: i64,
        #[arg(long, default_value_t = DEFAULT_PRECISION as u32, value_parser = clap::value_parser!(u32).range(64..))]
        prec: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a word such as "zeta(2,1)" or "Li(2,1; 1/2, w{1/3})".
    Eval {
        #[arg(long)]
        word: String,
        #[arg(long, default_value = "1e-10", value_parser = parse_tol)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_PRECISION as u32, value_parser = clap::value_parser!(u32).range(64..))]
        prec: u32,
        #[arg(long, value_enum, default_value = "partial")]
        method: MethodArg,
        /// Second word; passes iff the two values agree within --tol.
        #[arg(long)]
        compare: Option<String>,
        #[arg(long, default_value_t = 1 << 31)]
        max_terms: u64,
    },
    /// Write dimension tables and a text report into a directory.
    Tables {
        #[arg(long = "N", value_delimiter = ',', default_value = "1", value_parser = parse_level)]
        levels: Vec<i64>,
        #[arg(long, value_parser = parse_range)]
        m: Span,
        #[arg(long, value_parser = parse_range)]
        w: Span,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        format: Format,
    },
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn write_out(out: Option<&Path>, body: &str) -> std::io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, body),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}


fn run(cli: Cli) -> Result<bool, Failure> {
    let cache = Cache::new(cli.cache_dir.clone())?;
    let mut report = Report::new();
    let mut stats = Stats::default();
    let t0 = Instant::now();
    let passed = match cli.command {
        Command::Dim { levels, m, w, out } => {
            let ms: Vec<usize> = m.0.iter().map(|&x| x as usize).collect();
            let (d, st) = jobs::dims(&levels, &w.0, &ms, &cache)?;
            report.dims = d;
            stats = st;
            report.sort();
            write_out(out.as_deref(), &report.dims_csv())?;
            report.passed()
        }
        Command::Cobracket { level, w, m, out } => {
            if m < 2 || (w as usize) < m {
                return Err(Failure::Usage(format!("cobracket needs 2 <= m <= w, got w={w} m={m}")));
            }
            write_out(out.as_deref(), &jobs::cobracket_rows(level, w, m))?;
            true
        }
        Command::Verify { suite, levels, w_max, m_max, bound, prec, out } => {
            if bound < 1 {
                return Err(Failure::Usage("--bound must be at least 1".into()));
            }
            let p = VerifyParams { levels, w_max, m_max, bound, prec: prec as usize };
            let (c, st) = jobs::verify(suite, &p, &cache)?;
            report.checks = c;
            stats = st;
            report.sort();
            write_out(out.as_deref(), &report.checks_csv())?;
            report.passed()
        }
        Command::Eval { word, tol, prec, method, compare, max_terms } => {
            let method = match method {
                MethodArg::Partial => Method::Partial,
                MethodArg::Extrapolate => Method::Extrapolate { period: 1 },
            };
            let parse = |s: &str| s.parse::<ParsedWord>().map_err(|e| Failure::Usage(e.to_string()));
            let a = parse(&word)?;
            let b = compare.as_deref().map(parse).transpose()?;
            let ev = |w: &ParsedWord| {
                jobs::evaluate(w, prec as usize, tol, method, max_terms).map_err(|e| Failure::Runtime(e.to_string()))
            };
            let (ra, va) = ev(&a)?;
            report.evals.push(ra);
            if let Some(b) = b {
                let (rb, vb) = ev(&b)?;
                let d = va.sub(&vb).abs_f64();
                report.checks.push(CheckRecord {
                    suite: "eval".into(),
                    identity: format!("{} = {}", report.evals[0].word, rb.word),
                    level: 1,
                    weight: 0,
                    depth: 0,
                    passed: d < tol,
                    detail: format!("difference {d:e}, tolerance {tol:e}"),
                });
                report.evals.push(rb);
            }
            let mut body = report.evals_csv();
            if !report.checks.is_empty() {
                body.push('\n');
                body.push_str(&report.checks_csv());
            }
            print!("{body}");
            report.passed()
        }
        Command::Tables { levels, m, w, out_dir, format } => {
            let ms: Vec<usize> = m.0.iter().map(|&x| x as usize).collect();
            let (d, st) = jobs::dims(&levels, &w.0, &ms, &cache)?;
            report.dims = d;
            stats = st;
            report.sort();
            for p in emit_tables(&report, &out_dir, format)? {
                eprintln!("wrote {}", p.display());
            }
            report.passed()
        }
    };
    report.timings.push(("total".into(), t0.elapsed().as_secs_f64()));
    if cli.timings {
        for (stage, secs) in &report.timings {
            eprintln!("{stage}: {secs:.3} s");
        }
        eprintln!("cache: {} hits, {} misses, {} corrupt", stats.hits, stats.misses, stats.corrupt);
    }
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if n == 0 {
            eprintln!("error: --workers must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

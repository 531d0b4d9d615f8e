//! The `cubeball` command line.
//!
//! Every command produces a list of flat records. Each record starts with
//! the tool name, version, command, mode and the flags that shaped the
//! result, then the result fields. Records print as JSON Lines by default
//! or as CSV with `--format csv`. Rationals are always `"p/q"` strings.
//!
//! The worker count never appears in a record: results do not depend on it,
//! and leaving it out keeps reports byte-identical across `--workers`.
//!
//! Failures print one JSON line on stderr. Malformed flags exit with
//! [`EXIT_USAGE`], errors raised by a computation with [`EXIT_COMPUTATION`].

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use serde_json::{json, Map, Value};

use crate::analysis;
use crate::bijections::{audit_bijection, BallVector, BijectionKind};
use crate::bits::{BitVector, EdgeId};
use crate::chains::{mark, position};
use crate::error::Error;
use crate::metrics::{self, AverageStretch, Direction, RatioAudit, StretchReport, SweepOptions};
use crate::selftest;

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Enumeration cap used unless `--cap` and `--allow-large` raise it.
pub const DEFAULT_CLI_CAP: u64 = 1 << 24;
pub const DEFAULT_SAMPLES: u64 = 100_000;

pub const EXIT_COMPUTATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "cubeball", version, about = "Chains of the Boolean cube and bijections onto the Hamming ball")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads for sweeps; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,

    /// Enumeration cap in domain elements, as an integer or `2^k`.
    #[arg(long, global = true, value_parser = parse_cap)]
    cap: Option<u64>,

    /// Acknowledge a `--cap` above the default of 2^24.
    #[arg(long, global = true)]
    allow_large: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Apply a bijection to a cube vertex.
    Map {
        #[arg(long, value_enum, default_value_t = Kind::Psi)]
        bijection: Kind,
        #[arg(long)]
        input: String,
    },
    /// Apply the inverse of a bijection to a ball vertex.
    Invmap {
        #[arg(long, value_enum, default_value_t = Kind::Psi)]
        bijection: Kind,
        #[arg(long)]
        input: String,
    },
    /// Marking, chain code and position of a vertex.
    Chain {
        #[arg(long)]
        input: String,
        /// Also list every member of the chain, bottom to top.
        #[arg(long)]
        full: bool,
    },
    /// Maximum and average stretch of a bijection or its inverse.
    Verify {
        #[arg(long, value_enum, default_value_t = Kind::Psi)]
        bijection: Kind,
        #[arg(long, value_enum, default_value_t = Dir::Fwd)]
        direction: Dir,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = VerifyMode::Exhaustive)]
        mode: VerifyMode,
        #[arg(long)]
        samples: Option<u64>,
        /// Required with `--mode sample`.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Extreme distance ratios over all vertex pairs, or over the ball
    /// under the automorphism swapping `--x` and `--y`.
    PairsAudit {
        #[arg(long, value_enum, default_value_t = Kind::Psi)]
        bijection: Kind,
        #[arg(long, required_unless_present = "x")]
        n: Option<usize>,
        #[arg(long, requires = "y", conflicts_with = "n")]
        x: Option<String>,
        #[arg(long, requires = "x")]
        y: Option<String>,
    },
    /// Counting formulas, flip probabilities and influences.
    Stats {
        #[command(subcommand)]
        stat: Stat,
    },
    /// The reduction from majority to the first output bit of psi.
    ReduceMajority {
        #[arg(long)]
        input: String,
    },
    /// Run the acceptance criteria.
    Selftest {
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

#[derive(Subcommand, Debug)]
enum Stat {
    /// Number of chains of each length.
    Chains {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = StatMode::Exact)]
        mode: StatMode,
    },
    /// Vertices leaving `a` unmarked zeros (and `b` unmarked ones).
    Profile {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: Option<usize>,
        #[arg(long, value_enum, default_value_t = StatMode::Exact)]
        mode: StatMode,
    },
    /// Probability that output bit i of psi differs from input bit i.
    Flipprob {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        bit: Option<usize>,
        #[arg(long, value_enum, default_value_t = StatMode::Exact)]
        mode: StatMode,
    },
    /// Influence of every output bit.
    Influence {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Kind::Psi)]
        bijection: Kind,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Psi,
    Phi,
    Naive,
}

impl From<Kind> for BijectionKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Psi => BijectionKind::Psi,
            Kind::Phi => BijectionKind::Phi,
            Kind::Naive => BijectionKind::Naive,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Dir {
    Fwd,
    Inv,
}

impl From<Dir> for Direction {
    fn from(d: Dir) -> Self {
        match d {
            Dir::Fwd => Direction::Forward,
            Dir::Inv => Direction::Inverse,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VerifyMode {
    Exhaustive,
    Sample,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StatMode {
    Exact,
    Exhaustive,
}

impl StatMode {
    fn name(self) -> &'static str {
        match self {
            StatMode::Exact => "exact",
            StatMode::Exhaustive => "exhaustive",
        }
    }
}

fn parse_cap(s: &str) -> Result<u64, String> {
    let parsed = match s.split_once('^') {
        Some(("2", e)) => e.parse::<u32>().ok().and_then(|e| 1u64.checked_shl(e).filter(|_| e < 64)),
        Some(_) => None,
        None => s.parse().ok(),
    };
    parsed.ok_or_else(|| format!("expected an integer or 2^k with k < 64, got {s:?}"))
}

/// What a finished run printed and how it exits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Computation(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Computation(e)
    }
}

type Record = Map<String, Value>;

/// Parses `args` (program name first) and runs the command without touching
/// the process's standard streams.
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                let code = if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand { EXIT_USAGE } else { 0 };
                return Outcome { code, stdout: e.render().to_string(), stderr: String::new() };
            }
            let message = e.render().to_string();
            let first = message.lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            return failure(Failure::Usage(first));
        }
    };
    match run(&cli).and_then(|(code, records)| {
        let text = render(&records, cli.format)?;
        Ok((code, text))
    }) {
        Ok((code, text)) => match &cli.out {
            Some(path) => match std::fs::write(path, &text) {
                Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
                Err(e) => failure(Failure::Io(format!("{}: {e}", path.display()))),
            },
            None => Outcome { code, stdout: text, stderr: String::new() },
        },
        Err(f) => failure(f),
    }
}

fn failure(f: Failure) -> Outcome {
    let (code, kind, message) = match f {
        Failure::Usage(m) => (EXIT_USAGE, "usage", m),
        Failure::Computation(e) => (EXIT_COMPUTATION, e.kind(), e.to_string()),
        Failure::Io(m) => (EXIT_COMPUTATION, "io", m),
    };
    let record = json!({
        "tool": TOOL,
        "version": VERSION,
        "status": "error",
        "error": kind,
        "exit_code": code,
        "message": message,
    });
    Outcome { code, stdout: String::new(), stderr: format!("{record}\n") }
}

fn render(records: &[Record], format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => Ok(records.iter().map(|r| format!("{}\n", Value::Object(r.clone()))).collect()),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            if let Some(first) = records.first() {
                w.write_record(first.keys()).map_err(|e| Failure::Io(e.to_string()))?;
            }
            for r in records {
                w.write_record(r.values().map(cell)).map_err(|e| Failure::Io(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Failure::Io(e.to_string()))
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn frac(r: &Ratio<u64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn big_frac(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn bits(s: &str) -> Result<BitVector, Failure> {
    s.parse().map_err(|e: Error| Failure::Usage(format!("--input {s:?}: {e}")))
}

fn record(command: &str, mode: &str) -> Record {
    let mut r = Record::new();
    r.insert("tool".into(), TOOL.into());
    r.insert("version".into(), VERSION.into());
    r.insert("command".into(), command.into());
    r.insert("mode".into(), mode.into());
    r
}

fn put(r: &mut Record, key: &str, value: impl Into<Value>) {
    r.insert(key.into(), value.into());
}

fn options(cli: &Cli) -> Result<SweepOptions, Failure> {
    let cap = match cli.cap {
        None => DEFAULT_CLI_CAP,
        Some(cap) if cap > DEFAULT_CLI_CAP && !cli.allow_large => {
            return Err(Failure::Usage(format!("--cap {cap} is above the default 2^24; pass --allow-large to accept it")));
        }
        Some(cap) => cap,
    };
    Ok(SweepOptions { workers: cli.workers, cap })
}

fn run(cli: &Cli) -> Result<(i32, Vec<Record>), Failure> {
    let opts = options(cli)?;
    let records = match &cli.command {
        Command::Map { bijection, input } => {
            let x = bits(input)?;
            let kind = BijectionKind::from(*bijection);
            let z = kind.forward(&x)?;
            let mut r = record("map", "exact");
            put(&mut r, "bijection", kind.name());
            put(&mut r, "input", input.as_str());
            put(&mut r, "n", x.len());
            put(&mut r, "output", z.to_string());
            put(&mut r, "output_weight", z.bits().weight());
            vec![r]
        }
        Command::Invmap { bijection, input } => {
            let z = bits(input)?;
            let kind = BijectionKind::from(*bijection);
            let x = kind.inverse(&z)?;
            let mut r = record("invmap", "exact");
            put(&mut r, "bijection", kind.name());
            put(&mut r, "input", input.as_str());
            put(&mut r, "n", x.len());
            put(&mut r, "output", x.to_string());
            vec![r]
        }
        Command::Chain { input, full } => vec![chain_record(&bits(input)?, input, *full)],
        Command::Verify { bijection, direction, n, mode, samples, seed } => {
            vec![verify_record(BijectionKind::from(*bijection), Direction::from(*direction), *n, *mode, *samples, *seed, opts)?]
        }
        Command::PairsAudit { bijection, n, x, y } => vec![pairs_record(BijectionKind::from(*bijection), *n, x.as_deref(), y.as_deref(), opts)?],
        Command::Stats { stat } => stats_records(stat, opts)?,
        Command::ReduceMajority { input } => {
            let x = bits(input)?;
            let reduced = analysis::majority_reduction(&x)?;
            let majority = analysis::majority(&x)?;
            let first = analysis::output_bit(BijectionKind::Psi, &reduced, 1)?;
            let mut r = record("reduce-majority", "exact");
            put(&mut r, "input", input.as_str());
            put(&mut r, "n", x.len());
            put(&mut r, "reduced", reduced.to_string());
            put(&mut r, "majority", majority);
            put(&mut r, "psi_1", first);
            put(&mut r, "psi_1_equals_majority", first == majority);
            vec![r]
        }
        Command::Selftest { only } => {
            let ids: Vec<u8> = if only.is_empty() { selftest::CRITERIA.iter().map(|c| c.id).collect() } else { only.clone() };
            let mut records = Vec::new();
            let mut all_passed = true;
            for id in ids {
                let outcome = selftest::run_criterion(id, opts).map_err(|e| Failure::Usage(e.to_string()))?;
                all_passed &= outcome.passed;
                let mut r = record("selftest", "exhaustive");
                put(&mut r, "id", outcome.id);
                put(&mut r, "title", outcome.title);
                put(&mut r, "status", if outcome.passed { "pass" } else { "fail" });
                put(&mut r, "detail", outcome.detail);
                records.push(r);
            }
            return Ok((if all_passed { 0 } else { EXIT_COMPUTATION }, records));
        }
    };
    Ok((0, records))
}

fn chain_record(x: &BitVector, input: &str, full: bool) -> Record {
    let marked = mark(x);
    let p = position(x);
    let (zeros, ones) = marked.unmarked_profile();
    let mut r = record("chain", "exact");
    put(&mut r, "input", input);
    put(&mut r, "full", full);
    put(&mut r, "n", x.len());
    put(&mut r, "marked_mask", marked.marked_mask().to_string());
    put(&mut r, "unmarked_zeros", zeros);
    put(&mut r, "unmarked_ones", ones);
    put(&mut r, "code", p.code.to_string());
    put(&mut r, "bottom", p.k);
    put(&mut r, "level", p.j);
    put(&mut r, "top", p.top());
    put(&mut r, "chain_length", p.code.chain_length());
    put(&mut r, "ell", p.ell);
    if full {
        let members: Vec<String> = p.code.members().iter().map(ToString::to_string).collect();
        put(&mut r, "members", members.join(" "));
    }
    r
}

fn witness(w: &Option<EdgeId>) -> Value {
    w.as_ref().map_or(Value::Null, |e| e.to_string().into())
}

fn verify_record(
    kind: BijectionKind,
    direction: Direction,
    n: usize,
    mode: VerifyMode,
    samples: Option<u64>,
    seed: Option<u64>,
    opts: SweepOptions,
) -> Result<Record, Failure> {
    let (report, bijective): (StretchReport, Option<bool>) = match mode {
        VerifyMode::Exhaustive => {
            if samples.is_some() || seed.is_some() {
                return Err(Failure::Usage("--samples and --seed only apply to --mode sample".into()));
            }
            let report = metrics::stretch_exhaustive(kind, direction, n, opts)?;
            (report, Some(audit_bijection(kind, n, opts.cap)?.is_bijection()))
        }
        VerifyMode::Sample => {
            let Some(seed) = seed else {
                return Err(Failure::Usage("--mode sample requires --seed".into()));
            };
            let samples = samples.unwrap_or(DEFAULT_SAMPLES);
            if samples == 0 {
                return Err(Failure::Usage("--samples must be positive".into()));
            }
            (metrics::stretch_sampled(kind, direction, n, samples, seed, opts)?, None)
        }
    };
    let mut r = record("verify", report.mode.name());
    put(&mut r, "bijection", kind.name());
    put(&mut r, "direction", direction.name());
    put(&mut r, "n", n);
    match &report.average {
        AverageStretch::Exact { .. } => {
            put(&mut r, "samples", Value::Null);
            put(&mut r, "seed", Value::Null);
        }
        AverageStretch::Estimate { samples, seed, .. } => {
            put(&mut r, "samples", *samples);
            put(&mut r, "seed", *seed);
        }
    }
    put(&mut r, "cap", opts.cap);
    put(&mut r, "bijective", bijective.map_or(Value::Null, Value::Bool));
    put(&mut r, "max_stretch", report.max_stretch);
    put(&mut r, "max_witness", witness(&report.max_witness));
    match &report.average {
        AverageStretch::Exact { .. } => {
            put(&mut r, "avg_stretch", frac(&report.average.exact().expect("exact")));
            put(&mut r, "avg_stretch_f64", report.average.as_f64());
            put(&mut r, "std_error", Value::Null);
        }
        AverageStretch::Estimate { mean, std_error, .. } => {
            put(&mut r, "avg_stretch", Value::Null);
            put(&mut r, "avg_stretch_f64", *mean);
            put(&mut r, "std_error", *std_error);
        }
    }
    put(&mut r, "edges_considered", report.edges_considered);
    Ok(r)
}

fn put_ratios(r: &mut Record, audit: &RatioAudit) {
    put(r, "pairs", audit.pairs);
    put(r, "min_ratio", frac(&audit.min_ratio));
    put(r, "min_witness", format!("{},{}", audit.min_witness.0, audit.min_witness.1));
    put(r, "max_ratio", frac(&audit.max_ratio));
    put(r, "max_witness", format!("{},{}", audit.max_witness.0, audit.max_witness.1));
}

fn pairs_record(kind: BijectionKind, n: Option<usize>, x: Option<&str>, y: Option<&str>, opts: SweepOptions) -> Result<Record, Failure> {
    if let (Some(xs), Some(ys)) = (x, y) {
        let bx = BallVector::new(bits(xs)?)?;
        let by = BallVector::new(bits(ys)?)?;
        let audit = metrics::transitivity_audit(&bx, &by, opts)?;
        let mut r = record("pairs-audit", "exhaustive");
        put(&mut r, "target", "transitivity");
        put(&mut r, "x", xs);
        put(&mut r, "y", ys);
        put(&mut r, "n", bx.n());
        put(&mut r, "cap", opts.cap);
        put(&mut r, "maps_x_to_y", audit.maps_x_to_y);
        put(&mut r, "maps_y_to_x", audit.maps_y_to_x);
        put_ratios(&mut r, &audit.ratios);
        return Ok(r);
    }
    let n = n.expect("clap requires --n without --x");
    let audit = metrics::pairwise_ratio_audit(kind, n, opts)?;
    let mut r = record("pairs-audit", "exhaustive");
    put(&mut r, "target", "bijection");
    put(&mut r, "bijection", kind.name());
    put(&mut r, "n", n);
    put(&mut r, "cap", opts.cap);
    put_ratios(&mut r, &audit);
    Ok(r)
}

fn stats_records(stat: &Stat, opts: SweepOptions) -> Result<Vec<Record>, Failure> {
    match *stat {
        Stat::Chains { n, mode } => {
            if n == 0 {
                return Err(Error::EmptyVector.into());
            }
            let enumerated = match mode {
                StatMode::Exact => None,
                StatMode::Exhaustive => Some(analysis::chain_count_enumerated(n, opts.cap)?),
            };
            let formula = analysis::ChainCountTable::from_formula(n);
            Ok((1..=n + 1)
                .map(|t| {
                    let mut r = record("stats chains", mode.name());
                    put(&mut r, "n", n);
                    put(&mut r, "t", t);
                    put(&mut r, "formula", formula.get(t).to_string());
                    match &enumerated {
                        Some(table) => {
                            put(&mut r, "enumerated", table.get(t).to_string());
                            put(&mut r, "agree", table.get(t) == formula.get(t));
                        }
                        None => {
                            put(&mut r, "enumerated", Value::Null);
                            put(&mut r, "agree", Value::Null);
                        }
                    }
                    r
                })
                .collect())
        }
        Stat::Profile { n, a, b, mode } => {
            let formula = match b {
                Some(b) => analysis::unmarked_profile_count(n, a, b)?,
                None => analysis::unmarked_zeros_count(n, a)?,
            };
            let mut r = record("stats profile", mode.name());
            put(&mut r, "n", n);
            put(&mut r, "a", a);
            put(&mut r, "b", b.map_or(Value::Null, Value::from));
            put(&mut r, "formula", formula.to_string());
            match mode {
                StatMode::Exact => {
                    put(&mut r, "enumerated", Value::Null);
                    put(&mut r, "agree", Value::Null);
                }
                StatMode::Exhaustive => {
                    let table = analysis::unmarked_profile_enumerated(n, opts.cap)?;
                    let count: u64 = table.iter().filter(|((za, zb), _)| *za == a && b.is_none_or(|b| *zb == b)).map(|(_, c)| c).sum();
                    put(&mut r, "enumerated", count.to_string());
                    put(&mut r, "agree", formula == count.into());
                }
            }
            Ok(vec![r])
        }
        Stat::Flipprob { n, bit, mode } => {
            let coords: Vec<usize> = match bit {
                Some(i) => vec![i],
                None => (1..=n).collect(),
            };
            let counts = match mode {
                StatMode::Exact => None,
                StatMode::Exhaustive => Some(analysis::flip_counts_exhaustive(n, opts.cap)?),
            };
            coords
                .into_iter()
                .map(|i| {
                    let p = analysis::flip_probability_exact(n, i)?;
                    let value = analysis::rational_to_f64(&p);
                    let mut r = record("stats flipprob", mode.name());
                    put(&mut r, "n", n);
                    put(&mut r, "bit", i);
                    put(&mut r, "probability", big_frac(&p));
                    put(&mut r, "probability_f64", value);
                    put(&mut r, "scaled_sqrt_n", value * (n as f64).sqrt());
                    match &counts {
                        Some(c) => {
                            let count = c[i - 1];
                            put(&mut r, "disagree_count", count);
                            put(&mut r, "agree", p == BigRational::new(BigInt::from(count), BigInt::from(1u8) << n));
                        }
                        None => {
                            put(&mut r, "disagree_count", Value::Null);
                            put(&mut r, "agree", Value::Null);
                        }
                    }
                    Ok(r)
                })
                .collect()
        }
        Stat::Influence { n, bijection } => {
            let kind = BijectionKind::from(bijection);
            let infs = analysis::influences(kind, n, opts.cap)?;
            let total: BigRational = infs.iter().sum();
            let avg = metrics::forward_stretch_exhaustive(kind, n, opts)?.average.exact().expect("exhaustive");
            let n_avg = BigRational::new(BigInt::from(*avg.numer() * n as u64), BigInt::from(*avg.denom()));
            Ok(infs
                .iter()
                .enumerate()
                .map(|(idx, inf)| {
                    let mut r = record("stats influence", "exhaustive");
                    put(&mut r, "bijection", kind.name());
                    put(&mut r, "n", n);
                    put(&mut r, "bit", idx + 1);
                    put(&mut r, "influence", big_frac(inf));
                    put(&mut r, "influence_f64", analysis::rational_to_f64(inf));
                    put(&mut r, "total", big_frac(&total));
                    put(&mut r, "n_times_avg_stretch", big_frac(&n_avg));
                    put(&mut r, "identity_holds", total == n_avg);
                    r
                })
                .collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Outcome {
        execute(std::iter::once("cubeball").chain(args.iter().copied()))
    }

    fn field(out: &Outcome, key: &str) -> Value {
        let v: Value = serde_json::from_str(out.stdout.lines().next().unwrap()).unwrap();
        v[key].clone()
    }

    #[test]
    fn map_and_invmap() {
        let out = run(&["map", "--bijection", "psi", "--input", "0000"]);
        assert_eq!(out.code, 0, "{out:?}");
        assert_eq!(field(&out, "output"), "00111");
        let out = run(&["invmap", "--bijection", "psi", "--input", "01110"]);
        assert_eq!(field(&out, "output"), "0001");
        assert_eq!(field(&out, "version"), VERSION);
    }

    #[test]
    fn error_records_and_exit_codes() {
        let out = run(&["map", "--input", "000"]);
        assert_eq!(out.code, EXIT_COMPUTATION);
        let err: Value = serde_json::from_str(out.stderr.trim()).unwrap();
        assert_eq!(err["error"], "odd_dimension");
        assert_eq!(out.stderr.lines().count(), 1);

        let out = run(&["invmap", "--input", "00011"]);
        assert_eq!(out.code, EXIT_COMPUTATION);
        assert!(out.stderr.contains("not_in_ball"));

        for bad in [
            &["map", "--input", "01x0"][..],
            &["verify", "--n", "4", "--mode", "sample"],
            &["verify", "--n", "4", "--cap", "2^30"],
            &["frobnicate"],
            &["map", "--bijection", "rho", "--input", "0000"],
        ] {
            let out = run(bad);
            assert_eq!(out.code, EXIT_USAGE, "{bad:?}: {out:?}");
            let err: Value = serde_json::from_str(out.stderr.trim()).unwrap();
            assert_eq!(err["error"], "usage");
        }

        let out = run(&["verify", "--n", "8", "--cap", "100"]);
        assert_eq!(out.code, EXIT_COMPUTATION);
        assert!(out.stderr.contains("cap_exceeded"));
    }

    #[test]
    fn csv_has_header_and_rows() {
        let out = run(&["stats", "chains", "--n", "4", "--mode", "exhaustive", "--format", "csv"]);
        let lines: Vec<&str> = out.stdout.lines().collect();
        assert_eq!(lines.len(), 6);
        assert_eq!(lines[0], "tool,version,command,mode,n,t,formula,enumerated,agree");
        assert!(lines[3].ends_with(",4,3,3,3,true"));
    }

    #[test]
    fn cap_parser() {
        assert_eq!(parse_cap("2^24"), Ok(1 << 24));
        assert_eq!(parse_cap("1000"), Ok(1000));
        assert!(parse_cap("3^4").is_err());
        assert!(parse_cap("2^64").is_err());
    }
}

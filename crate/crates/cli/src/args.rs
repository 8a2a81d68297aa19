use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "qsearch", version, about = "Seeded quantum search experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Repeated searches with known, unknown or no quantum knowledge of the marked count.
    Search(SearchArgs),
    /// Success probability after k iterations: closed form against simulation.
    Curve(CurveArgs),
    /// Quantum counting sweep.
    Count(CountArgs),
    /// Amplitude amplification of a random state preparation.
    Amplify(AmplifyArgs),
    /// Hybrid-argument checks on random query algorithms.
    Lowerbound(LowerboundArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Master seed; every random draw derives from it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file (default stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Marked set: `--a` draws that many distinct indices from the seed,
/// `--marked-file` reads them (whitespace or comma separated, `#` comments).
#[derive(Debug, Args, Serialize)]
#[group(required = true, multiple = false)]
#[serde(rename_all = "camelCase")]
pub struct Marked {
    #[arg(long)]
    pub a: Option<u64>,
    #[arg(long)]
    pub marked_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Known,
    Unknown,
    Classical,
    /// Estimate the count first, then search with it.
    Counting,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchArgs {
    #[arg(long)]
    pub n: u32,
    #[command(flatten)]
    pub marked: Marked,
    #[arg(long, value_enum, default_value_t = SearchMode::Unknown)]
    pub mode: SearchMode,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    /// Schedule growth factor for the unknown mode.
    #[arg(long, default_value_t = 1.2)]
    pub lambda: f64,
    /// Precision qubits for the counting mode (default ⌈n/2⌉ + 3).
    #[arg(long)]
    pub t: Option<u32>,
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CurveArgs {
    #[arg(long)]
    pub n: u32,
    #[command(flatten)]
    pub marked: Marked,
    #[arg(long, default_value_t = 60)]
    pub k_max: u64,
    /// Writes the state after `k_max` iterations as JSON.
    #[arg(long)]
    pub dump_state: Option<PathBuf>,
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PathArg {
    Fast,
    Full,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CountArgs {
    #[arg(long)]
    pub n: u32,
    #[command(flatten)]
    pub marked: Marked,
    #[arg(long)]
    pub t: u32,
    #[arg(long, value_enum, default_value_t = PathArg::Fast)]
    pub path: PathArg,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AmplifyMode {
    Known,
    Unknown,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AmplifyArgs {
    /// Qubits of the random preparation (at most 10).
    #[arg(long)]
    pub n: u32,
    /// Good set of the predicate.
    #[command(flatten)]
    pub marked: Marked,
    #[arg(long, value_enum, default_value_t = AmplifyMode::Known)]
    pub mode: AmplifyMode,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 1.2)]
    pub lambda: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LowerboundArgs {
    #[arg(long, default_value_t = 4)]
    pub n: u32,
    /// Workspace qubits (default n + 1).
    #[arg(long)]
    pub m: Option<u32>,
    /// Query counts: `k`, `lo..hi` or `lo..=hi`, both ends included.
    #[arg(long, default_value = "1..8", value_parser = parse_k_range)]
    #[serde(serialize_with = "range_string")]
    pub k: RangeInclusive<usize>,
    /// Random algorithms per query count.
    #[arg(long, alias = "trials", default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub algs: u64,
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
}

pub fn parse_k_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|e| format!("bad query count {t:?}: {e}"))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (num(lo)?, num(hi.strip_prefix('=').unwrap_or(hi))?),
        None => {
            let k = num(s)?;
            (k, k)
        }
    };
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok(lo..=hi)
}

fn range_string<S: serde::Serializer>(r: &RangeInclusive<usize>, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}..={}", r.start(), r.end()))
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Search(a) => &a.common,
            Command::Curve(a) => &a.common,
            Command::Count(a) => &a.common,
            Command::Amplify(a) => &a.common,
            Command::Lowerbound(a) => &a.common,
        }
    }
}

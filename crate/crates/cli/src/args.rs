use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;

#[derive(Debug, Parser)]
#[command(
    name = "cyclo",
    version,
    about = "Ternary cyclotomic coefficients, bounds and checks"
)]
pub struct Cli {
    /// Worker threads for batch commands
    #[arg(long, global = true, env = "CYCLO_WORKERS")]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the coefficients of Phi_pqr
    Compute(ComputeArgs),
    /// Check every identity and bound for one triple or a sweep
    Verify(VerifyArgs),
    /// One summary row per triple with pqr <= --pqr-max
    Sweep(SweepArgs),
    /// Residue-grid statistics for a prime p
    Grid(GridArgs),
    /// Time the coefficient algorithms against each other
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Oracle,
    Fk,
    Both,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file (atomically) instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TripleArgs {
    pub p: u64,
    pub q: u64,
    pub r: u64,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub triple: TripleArgs,
    #[arg(long, value_enum, default_value_t = Method::Both)]
    pub method: Method,
    /// Only the coefficient at this index
    #[arg(long)]
    pub at: Option<i64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RangeArgs {
    /// Largest pqr to include (accepts forms like 10^6)
    #[arg(long, value_parser = parse_count)]
    pub pqr_max: Option<u64>,
    /// Largest smallest prime p to include
    #[arg(long)]
    pub p_max: Option<u64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// p q r; omit with --sweep
    pub triple: Vec<u64>,
    #[arg(long)]
    pub sweep: bool,
    #[command(flatten)]
    pub range: RangeArgs,
    /// Check every k and n instead of a seeded sample
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub range: RangeArgs,
    /// Fill elapsed_ms (makes output non-reproducible)
    #[arg(long)]
    pub timings: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    pub p: u64,
    /// Density threshold as an exact fraction, e.g. 2/3 (repeatable)
    #[arg(long = "c", value_parser = parse_fraction)]
    pub thresholds: Vec<Ratio<i64>>,
    /// Also write the full grid as CSV to this path
    #[arg(long)]
    pub grid_csv: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// p q r; omit to sample triples from --pqr-max
    pub triple: Vec<u64>,
    #[command(flatten)]
    pub range: RangeArgs,
    /// Number of triples drawn from the range
    #[arg(long, default_value_t = 5)]
    pub sample: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Skip the O(p * deg) point-query timing
    #[arg(long)]
    pub no_point: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Parses `123`, `1_000_000` or `10^6`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let s = s.replace('_', "");
    if let Some((base, exp)) = s.split_once('^') {
        let base: u64 = base.trim().parse().map_err(|e| format!("bad base: {e}"))?;
        let exp: u32 = exp
            .trim()
            .parse()
            .map_err(|e| format!("bad exponent: {e}"))?;
        return base
            .checked_pow(exp)
            .ok_or_else(|| "value overflows".to_string());
    }
    s.trim().parse().map_err(|e| format!("{e}"))
}

/// Parses `a/b` or an integer. Decimal notation is rejected.
pub fn parse_fraction(s: &str) -> Result<Ratio<i64>, String> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: i64 = num
        .parse()
        .map_err(|_| format!("'{s}' is not a fraction like 2/3"))?;
    let den: i64 = den
        .parse()
        .map_err(|_| format!("'{s}' is not a fraction like 2/3"))?;
    if den == 0 {
        return Err("zero denominator".into());
    }
    Ok(Ratio::new(num, den))
}

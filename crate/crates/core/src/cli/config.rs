//! Command-line surface and the validated run configuration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::exact::arith::is_prime;
use crate::kms::{Beta, DEFAULT_DIGITS};

/// Largest lattice index `lattices` will enumerate.
pub const MAX_LATTICE_INDEX: u64 = 5000;
/// Largest index bound for global windows.
pub const MAX_WINDOW_BOUND: u64 = 2000;
/// Largest number of basis vectors in a prime window.
pub const MAX_WINDOW_DIM: u64 = 5000;
/// Largest truncation for global partition sums.
pub const MAX_PARTITION_BOUND: u64 = 1_000_000;
/// Largest depth for local sums and states.
pub const MAX_DEPTH: u32 = 400;
pub const PRECISION_RANGE: (usize, usize) = (10, 2000);

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "hecke", version, about = "Lattices, Hecke operators and KMS numerics for the GL2 Hecke pair")]
pub struct Cli {
    #[command(flatten)]
    pub opts: Options,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Comma-separated primes; an empty list is allowed.
    #[arg(long, global = true, alias = "p", default_value = "2,3")]
    pub primes: String,
    /// Comma-separated inverse temperatures (integers, decimals or p/q).
    #[arg(long, global = true, default_value = "3")]
    pub beta: String,
    /// Depth of local sums and states.
    #[arg(long, global = true, default_value_t = 40)]
    pub depth: u32,
    /// Index bound for global windows and sums (per-check default when absent).
    #[arg(long, global = true)]
    pub bound: Option<u64>,
    /// Depth of prime windows (per-check default when absent).
    #[arg(long, global = true)]
    pub k: Option<u32>,
    /// Significant decimal digits for floating evaluation.
    #[arg(long, global = true, default_value_t = DEFAULT_DIGITS)]
    pub precision: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// States are taken at beta * det_power.
    #[arg(long, global = true, default_value_t = 1)]
    pub det_power: u32,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Largest modulus used for orbit computations.
    #[arg(long, global = true, default_value_t = 24)]
    pub modcap: u64,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// List the lattices containing Z^2 of a given index.
    Lattices {
        #[arg(long, conflicts_with = "range", required_unless_present = "range")]
        n: Option<u64>,
        /// Inclusive range `a..b`.
        #[arg(long)]
        range: Option<String>,
        #[arg(long, value_enum)]
        check: Option<CheckKind>,
    },
    /// Run one verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Coset counts and modular function on the standard semidirect vectors.
    PairVerify,
    /// Structure constants of the Hecke algebra.
    HeckeMul {
        /// Class `d1,d2`; omit both sides for the full table up to `--bound`.
        #[arg(long, requires = "rhs")]
        lhs: Option<String>,
        #[arg(long, requires = "lhs")]
        rhs: Option<String>,
    },
    /// Emit an operator on a truncated basis as triplets.
    OpMatrix {
        #[arg(long, value_enum)]
        op: OpKind,
        /// Class `d1,d2` for `--op hecke`.
        #[arg(long)]
        class: Option<String>,
    },
    /// Local and global partition functions.
    Partition,
    /// KMS state values and the KMS condition.
    KmsVerify,
    /// Write every suite report and the data tables to `--out`.
    Report,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Sigma,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Pair,
    Hecke,
    Projection,
    Tensor,
    Kms,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Pair, Suite::Hecke, Suite::Projection, Suite::Tensor, Suite::Kms];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Pair => "pair",
            Suite::Hecke => "hecke",
            Suite::Projection => "projection",
            Suite::Tensor => "tensor",
            Suite::Kms => "kms",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OpKind {
    V,
    VStar,
    U,
    UStar,
    H,
    E,
    Hecke,
}

/// Validated configuration, echoed into every report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub primes: Vec<u64>,
    pub beta: Vec<Beta>,
    pub depth: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    pub precision: usize,
    pub format: Format,
    pub seed: u64,
    pub det_power: u32,
    pub modcap: u64,
}

impl RunConfig {
    pub fn from_options(o: &Options) -> Result<RunConfig, String> {
        let mut primes = Vec::new();
        for s in o.primes.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let p: u64 = s.parse().map_err(|_| format!("--primes: `{s}` is not an integer"))?;
            if !is_prime(p) {
                return Err(format!("--primes: {p} is not prime"));
            }
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
        primes.sort_unstable();
        let mut beta = Vec::new();
        for s in o.beta.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            beta.push(Beta::parse(s).map_err(|e| format!("--beta: {e}"))?);
        }
        if beta.is_empty() {
            return Err("--beta: at least one value is required".into());
        }
        let (lo, hi) = PRECISION_RANGE;
        if !(lo..=hi).contains(&o.precision) {
            return Err(format!("--precision must be in {lo}..={hi}"));
        }
        if o.det_power == 0 {
            return Err("--det-power must be positive".into());
        }
        if o.modcap == 0 {
            return Err("--modcap must be positive".into());
        }
        Ok(RunConfig {
            primes,
            beta,
            depth: o.depth,
            bound: o.bound,
            k: o.k,
            precision: o.precision,
            format: o.format,
            seed: o.seed,
            det_power: o.det_power,
            modcap: o.modcap,
        })
    }
}

/// `d1,d2` as a pair of positive integers.
pub fn parse_class(s: &str) -> Result<(u64, u64), String> {
    let mut it = s.split(',').map(str::trim);
    let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
        return Err(format!("class `{s}` must have the form d1,d2"));
    };
    let a: u64 = a.parse().map_err(|_| format!("class `{s}`: bad integer"))?;
    let b: u64 = b.parse().map_err(|_| format!("class `{s}`: bad integer"))?;
    Ok((a, b))
}

/// Inclusive `a..b` (also accepts `a..=b`).
pub fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("range `{s}` must have the form a..b"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: u64 = a.trim().parse().map_err(|_| format!("range `{s}`: bad start"))?;
    let b: u64 = b.trim().parse().map_err(|_| format!("range `{s}`: bad end"))?;
    if a == 0 || a > b {
        return Err(format!("range `{s}` must satisfy 1 <= a <= b"));
    }
    Ok((a, b))
}

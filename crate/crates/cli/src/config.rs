//! Command-line flags and their environment overrides.
//!
//! Every global flag can also be set through a `SPIN16_*` variable. An
//! explicit flag wins over the variable, which wins over the built-in default.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "spin16", version, about = "Spin symbols and the 16-rank of Q(sqrt(-p))")]
pub struct Cli {
    /// Field constants JSON; the shipped file is used when absent.
    #[arg(long, env = "SPIN16_CONSTANTS", global = true)]
    pub constants: Option<PathBuf>,
    /// Directory for cached records and reports.
    #[arg(long, env = "SPIN16_CACHE", default_value = ".spin16-cache", global = true)]
    pub cache: PathBuf,
    #[arg(long, env = "SPIN16_SEED", default_value_t = 0, global = true)]
    pub seed: u64,
    /// Worker threads; defaults to one per core.
    #[arg(long, env = "SPIN16_THREADS", global = true)]
    pub threads: Option<usize>,
    #[arg(long, env = "SPIN16_FORMAT", value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare the spin prediction with class numbers for primes in a range.
    Verify {
        /// `LO:HI`, or just `HI` for [3, HI].
        #[arg(long, default_value = "3:1000000", value_parser = parse_range)]
        range: (u64, u64),
    },
    /// Frequencies of the 2-part of h(-4p) for p <= X.
    Density {
        #[arg(long, default_value_t = 1_000_000)]
        max_x: u64,
    },
    /// Prime, von Mangoldt, type I and type II sums.
    Sums {
        #[command(subcommand)]
        kind: SumKind,
    },
    /// The spin factors at a completely split prime.
    Spin {
        p: u64,
        #[arg(long, default_value = "standard")]
        variant: String,
    },
    /// Maxima of short sums of the real character mod q.
    Charsum {
        #[arg(long, default_value_t = 10_000)]
        q_lo: u64,
        #[arg(long, default_value_t = 100_000)]
        q_hi: u64,
        #[arg(long, default_value_t = 0.125)]
        theta: f64,
        /// Stride between window starts; default max(1, N/4).
        #[arg(long)]
        step: Option<u64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SumKind {
    /// Sum of e_p over p <= X.
    Prime {
        #[arg(long, default_value_t = 1_000_000)]
        max_x: u64,
    },
    /// Sha-variant spins over split p <= X.
    Sha {
        #[arg(long, default_value_t = 1_000_000)]
        max_x: u64,
    },
    /// Sum of a_n Lambda(n) over ideals of norm <= X.
    Mangoldt {
        #[arg(long, default_value_t = 100_000)]
        max_x: u64,
    },
    /// Sum of a_n over multiples of a fixed ideal.
    Type1 {
        #[arg(long, default_value_t = 10_000)]
        max_x: u64,
        /// `unit`, `two`, `P` or `P/I` (the I-th prime above P).
        #[arg(long, default_value = "unit")]
        divisor: String,
    },
    /// Bilinear sum with random signs.
    Type2 {
        #[arg(long, default_value_t = 256)]
        mb: u64,
        #[arg(long, default_value_t = 256)]
        nb: u64,
        #[arg(long, default_value_t = 20)]
        repeats: usize,
    },
    /// Type II sums at Mb = Nb = 2^k for a range of k.
    Type2Sweep {
        #[arg(long, default_value_t = 8)]
        k_lo: u32,
        #[arg(long, default_value_t = 11)]
        k_hi: u32,
        #[arg(long, default_value_t = 20)]
        repeats: usize,
    },
}

pub fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let num = |t: &str| t.trim().replace('_', "").parse::<u64>().map_err(|e| format!("bad bound {t:?}: {e}"));
    let (lo, hi) = match s.split_once(':') {
        Some((a, b)) => (num(a)?, num(b)?),
        None => (3, num(s)?),
    };
    if lo > hi {
        return Err(format!("empty range {lo}:{hi}"));
    }
    Ok((lo, hi))
}

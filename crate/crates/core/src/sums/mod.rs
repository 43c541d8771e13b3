//! Numerical experiments around the 16-rank: sums of e_p over primes, the
//! density ladder of the 2-part, the von Mangoldt sum S(X), type I and type II
//! sums of a_𝔫, and a scanner for short character sums.
//!
//! Every experiment returns a [`SumReport`]. The bounds that can be proved at
//! finite height (trivial bounds, Pólya–Vinogradov, the criterion itself) are
//! recorded as [`Check`]s; asymptotic exponents are only fitted and reported.

pub mod charsum;
pub mod ideals;
pub mod primes;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::classgroup::RecordError;
use crate::field_core::FieldConstants;
use crate::ideals_units::IdealError;
use crate::spin::SpinError;

pub use charsum::{charsum_scan, CharsumParams};
pub use ideals::{bilinear, enumerate_ideals, mangoldt_sum, prime_table, rescale_generators, type1_sum, type2_matrix, type2_sum, IdealRec, PrimeTable};
pub use primes::{density_table, prime_sum, sha_report, split_spins, SplitSpin};

/// Largest X for the von Mangoldt sum.
pub const MANGOLDT_MAX_X: u64 = 1_000_000;
/// Largest X for type I sums.
pub const TYPE1_MAX_X: u64 = 100_000;
/// Largest Mb·Nb for type II sums.
pub const TYPE2_MAX_PAIRS: u64 = 10_000_000;
/// Largest modulus for the character-sum scanner.
pub const CHARSUM_MAX_Q: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum SumError {
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Spin(#[from] SpinError),
    #[error(transparent)]
    Record(#[from] RecordError),
}

/// Values of a partial sum at increasing checkpoints.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    pub checkpoints: Vec<u64>,
    pub values: Vec<f64>,
}

impl Series {
    pub fn new(name: &str) -> Self {
        Series { name: name.to_string(), checkpoints: Vec::new(), values: Vec::new() }
    }

    pub fn push(&mut self, x: u64, v: f64) {
        debug_assert!(self.checkpoints.last().map_or(true, |&l| l < x), "checkpoints must increase");
        self.checkpoints.push(x);
        self.values.push(v);
    }

    pub fn last(&self) -> Option<f64> {
        self.values.last().copied()
    }
}

/// A bound or identity verified on the data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Exponents from the asymptotic statements, as multiples of δ where they
/// depend on it. These are comparison values only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceExponents {
    /// Type I saving θ₁ = δ/4.
    pub theta1_over_delta: f64,
    /// Type II saving θ₂ = 1/48.
    pub theta2: f64,
    /// Prime-sum saving c(δ) = δ/400.
    pub c_over_delta: f64,
}

impl Default for ReferenceExponents {
    fn default() -> Self {
        ReferenceExponents { theta1_over_delta: 0.25, theta2: 1.0 / 48.0, c_over_delta: 1.0 / 400.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SumReport {
    pub experiment: String,
    pub tool_version: String,
    pub constants_hash: String,
    pub seed: u64,
    pub parameters: BTreeMap<String, Value>,
    pub series: Vec<Series>,
    /// Least-squares slope of log|S| against log X for the primary series.
    pub fitted_exponent: Option<f64>,
    pub reference: ReferenceExponents,
    pub metrics: BTreeMap<String, f64>,
    pub lists: BTreeMap<String, Vec<u64>>,
    pub checks: Vec<Check>,
}

impl SumReport {
    pub fn new(experiment: &str, fc: &FieldConstants, seed: u64) -> Self {
        SumReport {
            experiment: experiment.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            constants_hash: fc.hash.clone(),
            seed,
            parameters: BTreeMap::new(),
            series: Vec::new(),
            fitted_exponent: None,
            reference: ReferenceExponents::default(),
            metrics: BTreeMap::new(),
            lists: BTreeMap::new(),
            checks: Vec::new(),
        }
    }

    pub fn param(&mut self, k: &str, v: impl Into<Value>) {
        self.parameters.insert(k.to_string(), v.into());
    }

    pub fn metric(&mut self, k: &str, v: f64) {
        self.metrics.insert(k.to_string(), v);
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.to_string(), passed, detail: detail.into() });
    }

    pub fn series(&self, name: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.name == name)
    }

    pub fn checks_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Flat CSV: one line per (series, checkpoint).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("series,x,value\n");
        for s in &self.series {
            for (x, v) in s.checkpoints.iter().zip(&s.values) {
                out.push_str(&format!("{},{},{}\n", s.name, x, v));
            }
        }
        out
    }
}

/// 1·10ᵏ, 2·10ᵏ, 5·10ᵏ in [lo, x], then x itself.
pub fn log_checkpoints(lo: u64, x: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1u64;
    'outer: loop {
        for m in [1u64, 2, 5] {
            let c = m.saturating_mul(d);
            if c > x {
                break 'outer;
            }
            if c >= lo {
                out.push(c);
            }
        }
        d = d.saturating_mul(10);
    }
    if out.last() != Some(&x) {
        out.push(x);
    }
    out
}

/// Slope of the least-squares line through (log x, log|v|) over points with
/// v ≠ 0; needs at least three points.
pub fn fit_exponent(s: &Series) -> Option<f64> {
    let pts: Vec<(f64, f64)> = s
        .checkpoints
        .iter()
        .zip(&s.values)
        .filter(|(&x, v)| x > 1 && v.abs() > 0.0)
        .map(|(&x, v)| ((x as f64).ln(), v.abs().ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Partial sums of (key, value) pairs sorted by key, sampled at checkpoints.
pub(crate) fn sample_prefix(name: &str, items: &[(u64, f64)], checkpoints: &[u64]) -> Series {
    let mut s = Series::new(name);
    let mut acc = 0.0;
    let mut i = 0;
    for &c in checkpoints {
        while i < items.len() && items[i].0 <= c {
            acc += items[i].1;
            i += 1;
        }
        s.push(c, acc);
    }
    s
}

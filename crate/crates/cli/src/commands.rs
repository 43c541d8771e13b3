//! Subcommand implementations. Each one produces a serializable report,
//! stores it in the cache as JSON and CSV, and prints it in the requested
//! format. A repeated run prints the stored bytes.

use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use spin16::arith::is_prime_u64;
use spin16::classgroup::{class_number, e_from_class_number, splits_completely_in_M};
use spin16::field_core::load_constants;
use spin16::ideals_units::{ideal_from_generator, prime_above_two, primes_above_u64, OMIdeal, UnitContext};
use spin16::spin::{split_prime_spin, SpinError, SpinVariant};
use spin16::sums::{self, fit_exponent, CharsumParams, Series, SumError, SumReport};
use spin16::FieldConstants;

use crate::cache::Cache;
use crate::config::{Cli, Command, Format, SumKind};
use crate::{CliError, Outcome};

/// Largest upper bound accepted by `verify`.
pub const VERIFY_MAX: u64 = 1_000_000;

const VERSION: &str = env!("CARGO_PKG_VERSION");

struct Ctx {
    fc: Arc<FieldConstants>,
    cache: Cache,
    seed: u64,
    format: Format,
}

impl Ctx {
    fn units(&self) -> UnitContext {
        UnitContext::new(&self.fc)
    }

    fn stamp(&self, rep: &mut SumReport) {
        rep.seed = self.seed;
    }
}

trait Report: Serialize + DeserializeOwned {
    fn csv(&self) -> String;
    fn outcome(&self) -> Outcome;
}

fn meta_line(version: &str, hash: &str, seed: u64) -> String {
    format!("# spin16 {version} constants {hash} seed {seed}\n")
}

impl Report for SumReport {
    fn csv(&self) -> String {
        let mut out = meta_line(&self.tool_version, &self.constants_hash, self.seed);
        out.push_str(&format!("# experiment {}\n", self.experiment));
        for c in &self.checks {
            out.push_str(&format!("# check {}: {}\n", if c.passed { "pass" } else { "FAIL" }, c.name));
        }
        for (k, v) in &self.metrics {
            out.push_str(&format!("# metric {k} = {v}\n"));
        }
        out.push_str(&self.to_csv());
        out
    }

    fn outcome(&self) -> Outcome {
        match self.checks.iter().find(|c| !c.passed) {
            None => Outcome::Ok,
            Some(c) => Outcome::Mismatch(format!("{}: {} ({})", self.experiment, c.name, c.detail)),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub tool_version: String,
    pub constants_hash: String,
    pub seed: u64,
    pub lo: u64,
    pub hi: u64,
    pub prime_count: usize,
    pub split_count: usize,
    pub rk16_count: usize,
    /// Split p with e_pred ≠ e_true.
    pub criterion_mismatches: Vec<u64>,
    /// p where "splits completely in M" and 8 | h(−4p) disagree.
    pub stevenhagen_mismatches: Vec<u64>,
}

impl Report for VerifyReport {
    fn csv(&self) -> String {
        let mut out = meta_line(&self.tool_version, &self.constants_hash, self.seed);
        out.push_str("key,value\n");
        for (k, v) in [
            ("lo", self.lo as usize),
            ("hi", self.hi as usize),
            ("prime_count", self.prime_count),
            ("split_count", self.split_count),
            ("rk16_count", self.rk16_count),
            ("criterion_mismatches", self.criterion_mismatches.len()),
            ("stevenhagen_mismatches", self.stevenhagen_mismatches.len()),
        ] {
            out.push_str(&format!("{k},{v}\n"));
        }
        for p in &self.criterion_mismatches {
            out.push_str(&format!("criterion_mismatch,{p}\n"));
        }
        for p in &self.stevenhagen_mismatches {
            out.push_str(&format!("stevenhagen_mismatch,{p}\n"));
        }
        out
    }

    fn outcome(&self) -> Outcome {
        if let Some(p) = self.criterion_mismatches.first() {
            Outcome::Mismatch(format!("e_pred != e_true at p = {p} ({} in total)", self.criterion_mismatches.len()))
        } else if let Some(p) = self.stevenhagen_mismatches.first() {
            Outcome::Mismatch(format!("splitting and 8 | h disagree at p = {p}"))
        } else {
            Outcome::Ok
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SpinFactor {
    pub name: String,
    pub value: i8,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SpinReport {
    pub tool_version: String,
    pub constants_hash: String,
    pub seed: u64,
    pub p: u64,
    pub variant: SpinVariant,
    pub splits_completely: bool,
    /// Coordinates of a generator of the first prime above p.
    pub generator: Option<Vec<String>>,
    pub factors: Vec<SpinFactor>,
    pub total: i8,
    pub class_number: u64,
    pub e_true: i8,
}

impl Report for SpinReport {
    fn csv(&self) -> String {
        let mut out = meta_line(&self.tool_version, &self.constants_hash, self.seed);
        out.push_str("key,value\n");
        out.push_str(&format!("p,{}\nvariant,{}\nsplits_completely,{}\n", self.p, self.variant, self.splits_completely as u8));
        if let Some(g) = &self.generator {
            out.push_str(&format!("generator,{}\n", g.join(" ")));
        }
        for f in &self.factors {
            out.push_str(&format!("{},{}\n", f.name, f.value));
        }
        out.push_str(&format!("total,{}\nclass_number,{}\ne_true,{}\n", self.total, self.class_number, self.e_true));
        out
    }

    fn outcome(&self) -> Outcome {
        // The Sha variant has no class-number counterpart.
        if self.variant == SpinVariant::Standard && self.total != self.e_true {
            Outcome::Mismatch(format!("spin {} but e_true {} at p = {}", self.total, self.e_true, self.p))
        } else {
            Outcome::Ok
        }
    }
}

fn sum_err(e: SumError) -> CliError {
    match e {
        SumError::Budget(m) => CliError::Budget(m),
        SumError::InvalidParameter(m) => CliError::Config(m),
        e => CliError::Failed(e.to_string()),
    }
}

fn spin_err(e: SpinError) -> CliError {
    CliError::Failed(e.to_string())
}

fn print(text: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| CliError::Failed(format!("stdout: {e}")))
}

/// Serve `key` from the cache, or compute, store and print it.
fn emit<T: Report>(ctx: &Ctx, key: &str, compute: impl FnOnce() -> Result<T, CliError>) -> Result<Outcome, CliError> {
    let jp = ctx.cache.path(key, ctx.seed, "json");
    let cp = ctx.cache.path(key, ctx.seed, "csv");
    if let (Some(json), Some(csv)) = (ctx.cache.read(&jp), ctx.cache.read(&cp)) {
        if let Ok(rep) = serde_json::from_str::<T>(&json) {
            eprintln!("spin16: served from cache {}", jp.display());
            print(if ctx.format == Format::Json { &json } else { &csv })?;
            return Ok(rep.outcome());
        }
    }
    let rep = compute()?;
    let json = serde_json::to_string_pretty(&rep).map_err(|e| CliError::Failed(e.to_string()))? + "\n";
    let csv = rep.csv();
    ctx.cache.write(&jp, &json)?;
    ctx.cache.write(&cp, &csv)?;
    print(if ctx.format == Format::Json { &json } else { &csv })?;
    Ok(rep.outcome())
}

fn load_fc(path: Option<&Path>) -> Result<Arc<FieldConstants>, CliError> {
    match path {
        None => Ok(FieldConstants::builtin()),
        Some(p) => load_constants(p).map(Arc::new).map_err(|e| CliError::Config(format!("{}: {e}", p.display()))),
    }
}

pub fn execute(cli: Cli) -> Result<Outcome, CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Failed(format!("thread pool: {e}")))?;
    }
    let fc = load_fc(cli.constants.as_deref())?;
    let cache = Cache::new(&cli.cache, &fc.hash);
    let ctx = Ctx { fc, cache, seed: cli.seed, format: cli.format };
    match cli.command {
        Command::Verify { range: (lo, hi) } => verify(&ctx, lo, hi),
        Command::Density { max_x } => emit(&ctx, &format!("density_x{max_x}"), || {
            let recs = ctx.cache.records(&ctx.fc, 3, max_x)?;
            let mut rep = sums::density_table(&ctx.fc, &recs, max_x).map_err(sum_err)?;
            ctx.stamp(&mut rep);
            Ok(rep)
        }),
        Command::Sums { kind } => run_sums(&ctx, kind),
        Command::Spin { p, variant } => {
            let variant: SpinVariant = variant.parse().map_err(CliError::Config)?;
            emit(&ctx, &format!("spin_p{p}_{variant}"), || spin(&ctx, p, variant))
        }
        Command::Charsum { q_lo, q_hi, theta, step } => {
            let params = CharsumParams { q_lo, q_hi, theta, step };
            let key = format!("charsum_q{q_lo}-{q_hi}_t{theta}_s{}", step.map_or("auto".into(), |s| s.to_string()));
            emit(&ctx, &key, || {
                let mut rep = sums::charsum_scan(&ctx.fc, params).map_err(sum_err)?;
                ctx.stamp(&mut rep);
                Ok(rep)
            })
        }
    }
}

fn verify(ctx: &Ctx, lo: u64, hi: u64) -> Result<Outcome, CliError> {
    if hi > VERIFY_MAX {
        return Err(CliError::Config(format!("verify supports ranges up to {VERIFY_MAX}, got {hi}")));
    }
    emit(ctx, &format!("verify_{lo}-{hi}"), || {
        let recs = ctx.cache.records(&ctx.fc, lo, hi)?;
        Ok(VerifyReport {
            tool_version: VERSION.into(),
            constants_hash: ctx.fc.hash.clone(),
            seed: ctx.seed,
            lo,
            hi,
            prime_count: recs.len(),
            split_count: recs.iter().filter(|r| r.splits_m).count(),
            rk16_count: recs.iter().filter(|r| r.rk16).count(),
            criterion_mismatches: recs.iter().filter(|r| r.splits_m && !r.agrees()).map(|r| r.p).collect(),
            stevenhagen_mismatches: recs.iter().filter(|r| r.splits_m != r.rk8).map(|r| r.p).collect(),
        })
    })
}

fn spin(ctx: &Ctx, p: u64, variant: SpinVariant) -> Result<SpinReport, CliError> {
    if p == 2 || !is_prime_u64(p) {
        return Err(CliError::Config(format!("{p} is not an odd prime")));
    }
    let h = class_number(-4 * p as i64).map_err(|e| CliError::Failed(e.to_string()))?;
    let split = split_prime_spin(&ctx.fc, p, variant).map_err(spin_err)?;
    let (generator, factors, total) = match &split {
        Some(s) => (
            Some(s.generator.coords.iter().map(|c| c.to_string()).collect()),
            s.breakdown.factors.iter().map(|(n, v)| SpinFactor { name: n.clone(), value: v.as_i8() }).collect(),
            s.breakdown.total.as_i8(),
        ),
        None => (None, Vec::new(), 0),
    };
    Ok(SpinReport {
        tool_version: VERSION.into(),
        constants_hash: ctx.fc.hash.clone(),
        seed: ctx.seed,
        p,
        variant,
        splits_completely: splits_completely_in_M(p),
        generator,
        factors,
        total,
        class_number: h,
        e_true: e_from_class_number(h),
    })
}

fn divisor_ideal(fc: &FieldConstants, spec: &str) -> Result<OMIdeal, CliError> {
    match spec {
        "unit" => ideal_from_generator(fc, &fc.one).map_err(|e| CliError::Failed(e.to_string())),
        "two" => Ok(prime_above_two(fc)),
        _ => {
            let bad = || CliError::Config(format!("divisor must be unit, two, P or P/I; got {spec:?}"));
            let (p, i) = match spec.split_once('/') {
                Some((p, i)) => (p.parse::<u64>().map_err(|_| bad())?, i.parse::<usize>().map_err(|_| bad())?),
                None => (spec.parse::<u64>().map_err(|_| bad())?, 0),
            };
            if p == 2 || !is_prime_u64(p) {
                return Err(CliError::Config(format!("divisor {p} is not an odd prime")));
            }
            let mut ps = primes_above_u64(fc, p).map_err(|e| CliError::Failed(e.to_string()))?;
            if i >= ps.len() {
                return Err(CliError::Config(format!("{p} has only {} primes above it", ps.len())));
            }
            Ok(ps.swap_remove(i).ideal)
        }
    }
}

fn run_sums(ctx: &Ctx, kind: SumKind) -> Result<Outcome, CliError> {
    let fc = &ctx.fc;
    let stamped = |r: Result<SumReport, SumError>| {
        let mut r = r.map_err(sum_err)?;
        ctx.stamp(&mut r);
        Ok(r)
    };
    match kind {
        SumKind::Prime { max_x } => emit(ctx, &format!("prime_sum_x{max_x}"), || {
            let recs = ctx.cache.records(fc, 3, max_x)?;
            let splits = sums::split_spins(fc, &ctx.units(), max_x).map_err(sum_err)?;
            stamped(sums::prime_sum(fc, &recs, &splits, max_x))
        }),
        SumKind::Sha { max_x } => emit(ctx, &format!("sha_x{max_x}"), || {
            let splits = sums::split_spins(fc, &ctx.units(), max_x).map_err(sum_err)?;
            stamped(sums::sha_report(fc, &splits, max_x))
        }),
        SumKind::Mangoldt { max_x } => emit(ctx, &format!("mangoldt_x{max_x}"), || stamped(sums::mangoldt_sum(fc, &ctx.units(), max_x))),
        SumKind::Type1 { max_x, divisor } => {
            let d = divisor_ideal(fc, &divisor)?;
            let key = format!("type1_x{max_x}_d{}", divisor.replace('/', "i"));
            emit(ctx, &key, || stamped(sums::type1_sum(fc, &ctx.units(), &d, max_x, ctx.seed)))
        }
        SumKind::Type2 { mb, nb, repeats } => {
            emit(ctx, &format!("type2_mb{mb}_nb{nb}_r{repeats}"), || stamped(sums::type2_sum(fc, &ctx.units(), mb, nb, ctx.seed, repeats)))
        }
        SumKind::Type2Sweep { k_lo, k_hi, repeats } => {
            if k_lo < 1 || k_lo > k_hi || k_hi > 20 {
                return Err(CliError::Config(format!("need 1 <= k_lo <= k_hi <= 20, got {k_lo}..{k_hi}")));
            }
            emit(ctx, &format!("type2_sweep_k{k_lo}-{k_hi}_r{repeats}"), || type2_sweep(ctx, k_lo, k_hi, repeats))
        }
    }
}

fn median_abs(s: &Series) -> f64 {
    let mut v: Vec<f64> = s.values.iter().map(|x| x.abs()).collect();
    v.sort_by(f64::total_cmp);
    match v.len() {
        0 => 0.0,
        n if n % 2 == 1 => v[n / 2],
        n => (v[n / 2 - 1] + v[n / 2]) / 2.0,
    }
}

/// Type II sums at Mb = Nb = 2^k. The decrease of the median ratio with k is
/// reported, not asserted.
fn type2_sweep(ctx: &Ctx, k_lo: u32, k_hi: u32, repeats: usize) -> Result<SumReport, CliError> {
    let uc = ctx.units();
    let mut rep = SumReport::new("type2_sweep", &ctx.fc, ctx.seed);
    rep.param("k_lo", k_lo);
    rep.param("k_hi", k_hi);
    rep.param("repeats", repeats as u64);
    let mut ratio = Series::new("median_ratio");
    let mut shape = Series::new("median_shape_ratio");
    let mut abs_b = Series::new("median_abs_b");
    for k in k_lo..=k_hi {
        let m = 1u64 << k;
        let r = sums::type2_sum(&ctx.fc, &uc, m, m, ctx.seed, repeats).map_err(sum_err)?;
        for c in &r.checks {
            rep.check(&format!("k={k}: {}", c.name), c.passed, c.detail.clone());
        }
        let pairs = m * m;
        ratio.push(pairs, r.metrics["median_ratio"]);
        shape.push(pairs, r.metrics["median_shape_ratio"]);
        abs_b.push(pairs, r.series("b").map_or(0.0, median_abs));
    }
    let decreasing = ratio.values.windows(2).all(|w| w[1] <= w[0]);
    rep.metric("median_ratio_non_increasing", decreasing as u8 as f64);
    rep.fitted_exponent = fit_exponent(&abs_b);
    rep.series = vec![ratio, shape, abs_b];
    Ok(rep)
}

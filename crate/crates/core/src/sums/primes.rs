//! Experiments indexed by rational primes: Σ e_p, the density ladder of the
//! 2-part of h(−4p), and the Sha-variant equidistribution count.

use rayon::prelude::*;

use super::{fit_exponent, log_checkpoints, sample_prefix, SumError, SumReport};
use crate::arith::primes_up_to;
use crate::classgroup::{splits_completely_in_M, PrimeRecord};
use crate::field_core::FieldConstants;
use crate::ideals_units::UnitContext;
use crate::spin::table::{a_from_factors, prime_chars_above, PairTable};
use crate::spin::SpinVariant;

/// Spin data at a completely split p, from the eight conjugate primes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitSpin {
    pub p: u64,
    pub standard: i8,
    pub sha: i8,
    /// Σ a_𝔭 over the eight primes above p.
    pub a_sum: i32,
    /// All eight primes gave the same standard and Sha spins.
    pub conjugates_agree: bool,
}

/// [`SplitSpin`] for every completely split p ≤ x, ascending.
pub fn split_spins(fc: &FieldConstants, uc: &UnitContext, x: u64) -> Result<Vec<SplitSpin>, SumError> {
    let ps: Vec<u64> = primes_up_to(x).into_iter().filter(|&p| p > 2 && splits_completely_in_M(p)).collect();
    ps.par_iter()
        .map(|&p| {
            let pcs = prime_chars_above(fc, uc, p, u64::MAX)?;
            let mut pairs = PairTable::new();
            let a_sum = (0..pcs.len()).map(|t| a_from_factors(&pcs, &[(t, 1)], SpinVariant::Standard, &mut pairs) as i32).sum();
            let standard = pcs[0].prime_spin(SpinVariant::Standard);
            let sha = pcs[0].prime_spin(SpinVariant::Sha);
            let conjugates_agree = pcs.len() == 8
                && pcs.iter().all(|c| c.prime_spin(SpinVariant::Standard) == standard && c.prime_spin(SpinVariant::Sha) == sha);
            Ok(SplitSpin { p, standard, sha, a_sum, conjugates_agree })
        })
        .collect()
}

fn odd_records(records: &[PrimeRecord], x: u64) -> Vec<&PrimeRecord> {
    records.iter().filter(|r| r.p > 2 && r.p <= x).collect()
}

/// Σ_{p≤X} e_p from class numbers and from the spin prediction, and the
/// degree-1 prime-ideal form (1/8) Σ_{N𝔭≤X} a_𝔭.
pub fn prime_sum(fc: &FieldConstants, records: &[PrimeRecord], splits: &[SplitSpin], x: u64) -> Result<SumReport, SumError> {
    if x < 100 {
        return Err(SumError::InvalidParameter(format!("prime_sum needs X >= 100, got {x}")));
    }
    let recs = odd_records(records, x);
    let cps = log_checkpoints(100, x);
    let item = |f: fn(&PrimeRecord) -> f64| recs.iter().map(|r| (r.p, f(r))).collect::<Vec<_>>();
    let e_true = sample_prefix("e_true", &item(|r| r.e_true as f64), &cps);
    let e_pred = sample_prefix("e_pred", &item(|r| r.e_pred as f64), &cps);
    let rk8 = sample_prefix("rk8_count", &item(|r| r.rk8 as u8 as f64), &cps);
    let a_items: Vec<(u64, f64)> = splits.iter().filter(|s| s.p <= x).map(|s| (s.p, s.a_sum as f64 / 8.0)).collect();
    let a_p = sample_prefix("a_p_over_8", &a_items, &cps);

    let mut rep = SumReport::new("prime_sum", fc, 0);
    rep.param("x", x);
    let identical = e_true.values == e_pred.values;
    rep.check("e_pred series equals e_true series", identical, format!("{} checkpoints", cps.len()));
    let trivial = e_true.values.iter().zip(&rk8.values).all(|(s, n)| s.abs() <= *n);
    rep.check("|sum e_p| <= #{p : rk8}", trivial, "at every checkpoint");
    rep.check("(1/8) sum a_p equals sum e_pred", a_p.values == e_pred.values, "degree-1 primes only");
    let split = rk8.last().unwrap_or(0.0);
    let total = e_true.last().unwrap_or(0.0);
    rep.metric("sum_e", total);
    rep.metric("split_count", split);
    rep.metric("prime_count", recs.len() as f64);
    rep.metric("oscillation_ratio", if split > 0.0 { total.abs() / split } else { 0.0 });
    rep.fitted_exponent = fit_exponent(&e_true);
    rep.series = vec![e_true, e_pred, rk8, a_p];
    Ok(rep)
}

/// Frequencies of h₂ ∈ {1, 2, 4, 8, ≥16} among odd p ≤ X.
pub fn density_table(fc: &FieldConstants, records: &[PrimeRecord], x: u64) -> Result<SumReport, SumError> {
    let recs = odd_records(records, x);
    if recs.is_empty() {
        return Err(SumError::InvalidParameter(format!("no odd primes up to {x}")));
    }
    let bucket = |h2: u64| match h2 {
        1 => 0,
        2 => 1,
        4 => 2,
        8 => 3,
        _ => 4,
    };
    let names = ["mu_1", "mu_2", "mu_4", "mu_8", "mu_16plus"];
    let limits = [0.5, 0.25, 0.125, 0.0625, 0.0625];
    let cps = log_checkpoints(10, x);
    let mut rep = SumReport::new("density", fc, 0);
    rep.param("x", x);
    let mut counts = [0u64; 5];
    let mut i = 0;
    let mut series: Vec<super::Series> = names.iter().map(|n| super::Series::new(n)).collect();
    for &c in &cps {
        while i < recs.len() && recs[i].p <= c {
            counts[bucket(recs[i].h2)] += 1;
            i += 1;
        }
        let n = counts.iter().sum::<u64>().max(1) as f64;
        for (s, &k) in series.iter_mut().zip(&counts) {
            s.push(c, k as f64 / n);
        }
    }
    let n = recs.len() as f64;
    for ((name, lim), k) in names.iter().zip(limits).zip(counts) {
        rep.metric(name, k as f64 / n);
        rep.metric(&format!("{name}_limit"), lim);
    }
    let d16 = recs.iter().filter(|r| r.rk16).count() as f64 / n;
    rep.metric("density_16", d16);
    rep.metric("density_16_limit", 1.0 / 16.0);
    rep.metric("prime_count", n);
    rep.check("rows sum to 1", counts.iter().sum::<u64>() == recs.len() as u64, format!("{counts:?}"));
    rep.check("16 | h matches the top bucket", (d16 - counts[4] as f64 / n).abs() < 1e-15, "2-part is cyclic");
    rep.series = series;
    Ok(rep)
}

/// Fraction of split p ≤ X with Sha-variant spin −1; these p are witnesses
/// for (Z/4Z)² inside Ш(E_p).
pub fn sha_report(fc: &FieldConstants, splits: &[SplitSpin], x: u64) -> Result<SumReport, SumError> {
    let sp: Vec<&SplitSpin> = splits.iter().filter(|s| s.p <= x).collect();
    let mut rep = SumReport::new("sha", fc, 0);
    rep.param("x", x);
    let witnesses: Vec<u64> = sp.iter().filter(|s| s.sha == -1).map(|s| s.p).collect();
    let n = sp.len() as f64;
    rep.metric("split_count", n);
    rep.metric("witness_count", witnesses.len() as f64);
    rep.metric("minus_fraction", if n > 0.0 { witnesses.len() as f64 / n } else { 0.0 });
    rep.check("sha spins are nonzero", sp.iter().all(|s| s.sha != 0), "split primes only");
    rep.check("conjugate primes agree", sp.iter().all(|s| s.conjugates_agree), "eight primes per p");
    let cps = log_checkpoints(100, x.max(100));
    let items: Vec<(u64, f64)> = sp.iter().map(|s| (s.p, (s.sha == -1) as u8 as f64)).collect();
    rep.series = vec![sample_prefix("witness_count", &items, &cps)];
    rep.lists.insert("witnesses".into(), witnesses);
    Ok(rep)
}

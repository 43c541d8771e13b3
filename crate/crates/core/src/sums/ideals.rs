//! Sums of a_𝔫 over ideals: the von Mangoldt sum S(X), type I congruence
//! sums A_𝔡(X) and type II bilinear sums B(M, N).
//!
//! Ideals are enumerated as exponent vectors over a table of prime ideals
//! sorted by norm, with the prime above 2 tracked separately (a_𝔫 = 0 when
//! it divides 𝔫). Values come from the character shortcut in
//! [`crate::spin::table`].

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{fit_exponent, log_checkpoints, sample_prefix, Series, SumError, SumReport, MANGOLDT_MAX_X, TYPE1_MAX_X, TYPE2_MAX_PAIRS};
use crate::arith::primes_up_to;
use crate::classgroup::{class_numbers_minus_4p, e_from_class_number, splits_completely_in_M};
use crate::field_core::FieldConstants;
use crate::ideals_units::{ideal_divides, ideal_from_generator, ideal_pow, prime_above_two, OMIdeal, UnitContext};
use crate::spin::table::{a_from_factors, prime_chars_above, PairTable, PrimeChar};
use crate::spin::SpinVariant;

/// Odd prime ideals of norm ≤ `max_norm`, sorted by norm then by p.
#[derive(Clone, Debug)]
pub struct PrimeTable {
    pub primes: Vec<PrimeChar>,
    pub max_norm: u64,
}

pub fn prime_table(fc: &FieldConstants, uc: &UnitContext, max_norm: u64) -> Result<PrimeTable, SumError> {
    // Above a p that does not split completely every prime has norm ≥ p².
    let ps: Vec<u64> = primes_up_to(max_norm)
        .into_iter()
        .filter(|&p| p > 2 && (p.saturating_mul(p) <= max_norm || splits_completely_in_M(p)))
        .collect();
    let per_p: Vec<Vec<PrimeChar>> = ps.par_iter().map(|&p| prime_chars_above(fc, uc, p, max_norm)).collect::<Result<_, _>>()?;
    let mut primes: Vec<PrimeChar> = per_p.into_iter().flatten().collect();
    primes.sort_by_key(|q| q.norm);
    Ok(PrimeTable { primes, max_norm })
}

/// The same primes with every generator multiplied by a random unit.
/// a_𝔫 must not change.
pub fn rescale_generators(fc: &FieldConstants, uc: &UnitContext, table: &PrimeTable, seed: u64) -> PrimeTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let primes = table
        .primes
        .iter()
        .map(|q| {
            let k = [rng.random_range(-2..=2), rng.random_range(-2..=2), rng.random_range(-2..=2)];
            let u = fc.mul(&uc.torsion[rng.random_range(0..8)], &uc.unit_power(fc, k));
            PrimeChar::new(fc, uc, q.p, q.degree, fc.mul(&u, &q.generator), q.base.clone())
        })
        .collect();
    PrimeTable { primes, max_norm: table.max_norm }
}

/// An ideal 𝔭₂^two · ∏ primes[t]^k.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct IdealRec {
    pub norm: u64,
    pub two: u32,
    /// (index into the prime table, exponent), indices increasing.
    pub factors: Vec<(u32, u32)>,
}

impl IdealRec {
    pub fn is_odd(&self) -> bool {
        self.two == 0
    }

    fn factor_list(&self) -> Vec<(usize, u32)> {
        self.factors.iter().map(|&(t, k)| (t as usize, k)).collect()
    }

    pub fn a(&self, table: &PrimeTable, pairs: &mut PairTable) -> i8 {
        if !self.is_odd() {
            return 0;
        }
        a_from_factors(&table.primes, &self.factor_list(), SpinVariant::Standard, pairs)
    }
}

/// All ideals of norm ≤ x, sorted by (norm, two, factors).
pub fn enumerate_ideals(table: &PrimeTable, x: u64) -> Result<Vec<IdealRec>, SumError> {
    if x > table.max_norm {
        return Err(SumError::InvalidParameter(format!("prime table only reaches norm {}", table.max_norm)));
    }
    fn rec(primes: &[PrimeChar], start: usize, norm: u64, x: u64, two: u32, cur: &mut Vec<(u32, u32)>, out: &mut Vec<IdealRec>) {
        out.push(IdealRec { norm, two, factors: cur.clone() });
        for t in start..primes.len() {
            let q = primes[t].norm;
            if q > x / norm {
                break;
            }
            let mut n = norm * q;
            let mut k = 1;
            loop {
                cur.push((t as u32, k));
                rec(primes, t + 1, n, x, two, cur, out);
                cur.pop();
                if q > x / n {
                    break;
                }
                n *= q;
                k += 1;
            }
        }
    }
    let mut out = Vec::new();
    let mut two = 0;
    let mut n2 = 1u64;
    while n2 <= x {
        rec(&table.primes, 0, n2, x, two, &mut Vec::new(), &mut out);
        two += 1;
        n2 *= 2;
    }
    out.sort();
    Ok(out)
}

/// S(X) = Σ_{N𝔫≤X} a_𝔫 Λ(𝔫), over prime powers 𝔭ᵏ with Λ = log N𝔭.
///
/// Also reports the part from ideals whose norm is not a rational prime, and
/// compares S(X) with 8·Σ_{p≤X} e_p log p computed from class numbers.
pub fn mangoldt_sum(fc: &FieldConstants, uc: &UnitContext, x: u64) -> Result<SumReport, SumError> {
    if x > MANGOLDT_MAX_X {
        return Err(SumError::Budget(format!("mangoldt_sum supports X <= {MANGOLDT_MAX_X}, got {x}")));
    }
    if x < 10 {
        return Err(SumError::InvalidParameter(format!("mangoldt_sum needs X >= 10, got {x}")));
    }
    let table = prime_table(fc, uc, x)?;
    let mut pairs = PairTable::new();
    // (norm, index, k, value, prime norm?)
    let mut items: Vec<(u64, usize, u32, f64, bool)> = Vec::new();
    for (t, q) in table.primes.iter().enumerate() {
        let lg = (q.norm as f64).ln();
        let (mut n, mut k) = (q.norm, 1u32);
        loop {
            let a = a_from_factors(&table.primes, &[(t, k)], SpinVariant::Standard, &mut pairs);
            items.push((n, t, k, a as f64 * lg, q.degree == 1 && k == 1));
            if n > x / q.norm {
                break;
            }
            n *= q.norm;
            k += 1;
        }
    }
    items.sort_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)));
    let cps = log_checkpoints(10, x);
    let all: Vec<(u64, f64)> = items.iter().map(|i| (i.0, i.3)).collect();
    let higher: Vec<(u64, f64)> = items.iter().filter(|i| !i.4).map(|i| (i.0, i.3)).collect();
    let s = sample_prefix("s", &all, &cps);
    let hi = sample_prefix("higher_powers", &higher, &cps);
    let h = class_numbers_minus_4p(x);
    let lead_items: Vec<(u64, f64)> = primes_up_to(x)
        .into_iter()
        .filter(|&p| p > 2)
        .map(|p| (p, 8.0 * e_from_class_number(h[p as usize] as u64) as f64 * (p as f64).ln()))
        .collect();
    let lead = sample_prefix("class_number_leading_term", &lead_items, &cps);

    let mut rep = SumReport::new("mangoldt", fc, 0);
    rep.param("x", x);
    let bound = |c: u64| 4.0 * (c as f64).sqrt() * (c as f64).ln();
    let hi_ok = hi.checkpoints.iter().zip(&hi.values).all(|(&c, v)| v.abs() <= bound(c));
    rep.check("|higher-power part| <= 4 sqrt(X) log X", hi_ok, "at every checkpoint");
    let gap = s.values.iter().zip(&lead.values).zip(&cps).map(|((a, b), &c)| ((a - b).abs(), bound(c))).collect::<Vec<_>>();
    rep.check("|S(X) - 8 sum e_p log p| <= 4 sqrt(X) log X", gap.iter().all(|(g, b)| g <= b), "leading term from class numbers");
    let prime_part = s.values.iter().zip(&hi.values).map(|(a, b)| a - b).collect::<Vec<_>>();
    let lead_equal = prime_part.iter().zip(&lead.values).all(|(a, b)| (a - b).abs() <= 1e-6 * (1.0 + b.abs()));
    rep.check("degree-1 part equals 8 sum e_p log p", lead_equal, "criterion lifted to S(X)");
    rep.metric("s", s.last().unwrap_or(0.0));
    rep.metric("higher_powers", hi.last().unwrap_or(0.0));
    rep.metric("prime_ideal_count", table.primes.len() as f64);
    rep.fitted_exponent = fit_exponent(&s);
    rep.series = vec![s, hi, lead];
    Ok(rep)
}

/// Exponents of 𝔡 over the table, or None when some prime factor of 𝔡 has
/// norm beyond the table (then no 𝔫 of norm ≤ X is divisible by 𝔡).
fn factor_over_table(fc: &FieldConstants, table: &PrimeTable, d: &OMIdeal) -> Result<Option<(u32, Vec<(u32, u32)>)>, SumError> {
    let Some(mut rest) = d.norm().to_u64().filter(|&n| n <= table.max_norm) else {
        return Ok(None);
    };
    let power = |base: &OMIdeal, rest: &mut u64, q: u64| {
        let mut k = 0u32;
        while *rest % q == 0 && ideal_divides(&ideal_pow(fc, base, k + 1), d) {
            k += 1;
            *rest /= q;
        }
        k
    };
    let two = power(&prime_above_two(fc), &mut rest, 2);
    let mut fs = Vec::new();
    for (t, q) in table.primes.iter().enumerate() {
        if rest == 1 {
            break;
        }
        if rest % q.norm != 0 {
            continue;
        }
        let k = power(&ideal_from_generator(fc, &q.generator)?, &mut rest, q.norm);
        if k > 0 {
            fs.push((t as u32, k));
        }
    }
    Ok((rest == 1).then_some((two, fs)))
}

fn divides(two: u32, fs: &[(u32, u32)], n: &IdealRec) -> bool {
    n.two >= two && fs.iter().all(|&(t, k)| n.factors.iter().any(|&(s, j)| s == t && j >= k))
}

fn type1_series(table: &PrimeTable, ideals: &[IdealRec], dfac: &Option<(u32, Vec<(u32, u32)>)>, cps: &[u64]) -> (Series, Series) {
    let mut pairs = PairTable::new();
    let hits: Vec<&IdealRec> = match dfac {
        Some((two, fs)) => ideals.iter().filter(|n| divides(*two, fs, n)).collect(),
        None => Vec::new(),
    };
    let vals: Vec<(u64, f64)> = hits.iter().map(|n| (n.norm, n.a(table, &mut pairs) as f64)).collect();
    let counts: Vec<(u64, f64)> = hits.iter().map(|n| (n.norm, 1.0)).collect();
    (sample_prefix("a_sum", &vals, cps), sample_prefix("ideal_count", &counts, cps))
}

/// A_𝔡(X) = Σ_{N𝔫≤X, 𝔡|𝔫} a_𝔫.
pub fn type1_sum(fc: &FieldConstants, uc: &UnitContext, d: &OMIdeal, x: u64, seed: u64) -> Result<SumReport, SumError> {
    if x > TYPE1_MAX_X {
        return Err(SumError::Budget(format!("type1_sum supports X <= {TYPE1_MAX_X}, got {x}")));
    }
    if x < 10 {
        return Err(SumError::InvalidParameter(format!("type1_sum needs X >= 10, got {x}")));
    }
    let table = prime_table(fc, uc, x)?;
    let ideals = enumerate_ideals(&table, x)?;
    let dfac = factor_over_table(fc, &table, d)?;
    let cps = log_checkpoints(10, x);
    let (a, count) = type1_series(&table, &ideals, &dfac, &cps);
    let alt = rescale_generators(fc, uc, &table, seed);
    let (a_alt, _) = type1_series(&alt, &ideals, &dfac, &cps);

    let mut rep = SumReport::new("type1", fc, seed);
    rep.param("x", x);
    rep.param("d_norm", d.norm().to_string());
    rep.param("d_hnf_diagonal", (0..8).map(|i| d.hnf()[i][i].to_string()).collect::<Vec<_>>());
    let trivial = a.values.iter().zip(&count.values).all(|(s, n)| s.abs() <= *n);
    rep.check("|A(X)| <= #{n : d | n}", trivial, "at every checkpoint");
    rep.check("alternate generators give identical series", a.values == a_alt.values, format!("unit seed {seed}"));
    rep.metric("a_sum", a.last().unwrap_or(0.0));
    rep.metric("ideal_count", count.last().unwrap_or(0.0));
    rep.metric("all_ideals", ideals.len() as f64);
    rep.metric("reference_exponent_minus_1_over_delta", -rep.reference.theta1_over_delta);
    rep.fitted_exponent = fit_exponent(&a);
    rep.series = vec![a, count];
    Ok(rep)
}

fn merge(a: &[(u32, u32)], b: &[(u32, u32)]) -> Vec<(usize, u32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push((a[i].0 as usize, a[i].1));
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0 as usize, b[j].1));
            j += 1;
        } else {
            out.push((a[i].0 as usize, a[i].1 + b[j].1));
            i += 1;
            j += 1;
        }
    }
    out
}

/// a_{𝔪𝔫} for odd 𝔪 in `ms`, odd 𝔫 in `ns`, row-major.
pub fn type2_matrix(table: &PrimeTable, ms: &[&IdealRec], ns: &[&IdealRec]) -> Vec<i8> {
    ms.par_iter()
        .map_init(PairTable::new, |pairs, m| {
            ns.iter().map(|n| a_from_factors(&table.primes, &merge(&m.factors, &n.factors), SpinVariant::Standard, pairs)).collect::<Vec<i8>>()
        })
        .flatten_iter()
        .collect()
}

/// Σ_i Σ_j α_i β_j A_ij.
pub fn bilinear(matrix: &[i8], alpha: &[i8], beta: &[i8]) -> i64 {
    assert_eq!(matrix.len(), alpha.len() * beta.len());
    matrix
        .chunks(beta.len().max(1))
        .zip(alpha)
        .map(|(row, &a)| if a == 0 { 0 } else { a as i64 * row.iter().zip(beta).map(|(&v, &b)| (v * b) as i64).sum::<i64>() })
        .sum()
}

fn signs(rng: &mut ChaCha8Rng, n: usize) -> Vec<i8> {
    (0..n).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// B(M, N) = Σ_{N𝔪≤M} Σ_{N𝔫≤N} α_𝔪 β_𝔫 a_{𝔪𝔫} with α, β uniform ±1, over
/// `repeats` consecutive seeds starting at `seed`.
pub fn type2_sum(fc: &FieldConstants, uc: &UnitContext, mb: u64, nb: u64, seed: u64, repeats: usize) -> Result<SumReport, SumError> {
    if mb.saturating_mul(nb) > TYPE2_MAX_PAIRS {
        return Err(SumError::Budget(format!("type2_sum supports Mb*Nb <= {TYPE2_MAX_PAIRS}, got {mb}*{nb}")));
    }
    if mb < 2 || nb < 2 || repeats == 0 {
        return Err(SumError::InvalidParameter("type2_sum needs Mb, Nb >= 2 and at least one repeat".into()));
    }
    let top = mb.max(nb);
    let table = prime_table(fc, uc, top)?;
    let ideals = enumerate_ideals(&table, top)?;
    let ms: Vec<&IdealRec> = ideals.iter().filter(|n| n.is_odd() && n.norm <= mb).collect();
    let ns: Vec<&IdealRec> = ideals.iter().filter(|n| n.is_odd() && n.norm <= nb).collect();
    let matrix = type2_matrix(&table, &ms, &ns);
    let alt = rescale_generators(fc, uc, &table, seed);
    let alt_matrix = type2_matrix(&alt, &ms, &ns);

    let mut rep = SumReport::new("type2", fc, seed);
    rep.param("mb", mb);
    rep.param("nb", nb);
    rep.param("repeats", repeats as u64);
    let (mf, nf) = (mb as f64, nb as f64);
    let theta2 = rep.reference.theta2;
    let shape = (mf + nf).powf(theta2) * (mf * nf).powf(1.0 - theta2);
    let mut b_series = Series::new("b");
    let mut ratios = Vec::new();
    let mut shape_ratios = Vec::new();
    let pair_count = (ms.len() * ns.len()) as i64;
    let mut trivial = true;
    let mut within_mn = true;
    for s in 0..repeats as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(s));
        let alpha = signs(&mut rng, ms.len());
        let beta = signs(&mut rng, ns.len());
        let b = bilinear(&matrix, &alpha, &beta);
        trivial &= b.abs() <= pair_count;
        within_mn &= b.unsigned_abs() <= mb * nb;
        b_series.push(seed.wrapping_add(s), b as f64);
        ratios.push(b.abs() as f64 / (mf * nf));
        shape_ratios.push(b.abs() as f64 / shape);
    }
    rep.check("|B| <= #pairs of odd ideals", trivial, format!("{} x {}", ms.len(), ns.len()));
    rep.check("|B| <= Mb*Nb", within_mn, "all seeds");
    rep.check("alternate generators give identical coefficients", matrix == alt_matrix, format!("unit seed {seed}"));
    rep.metric("median_ratio", median(ratios));
    rep.metric("median_shape_ratio", median(shape_ratios));
    rep.metric("m_ideals", ms.len() as f64);
    rep.metric("n_ideals", ns.len() as f64);
    rep.metric("nonzero_fraction", matrix.iter().filter(|&&v| v != 0).count() as f64 / matrix.len().max(1) as f64);
    rep.series = vec![b_series];
    Ok(rep)
}

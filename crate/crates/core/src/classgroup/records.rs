//! Per-prime records: class number of discriminant −4p, 2-power ranks,
//! splitting in M and the true and predicted e_p.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{class_number, splits_completely_in_M};
use crate::arith::prime_flags;
use crate::field_core::FieldConstants;
use crate::spin::{predicted_e, SpinError, SpinVariant};

#[derive(Debug, Error)]
pub enum RecordError {
    #[error(transparent)]
    Spin(#[from] SpinError),
    #[error("malformed record line {0:?}")]
    Parse(String),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeRecord {
    pub p: u64,
    pub h: u64,
    /// 2-part of h.
    pub h2: u64,
    pub rk4: bool,
    pub rk8: bool,
    pub rk16: bool,
    pub splits_m: bool,
    pub e_true: i8,
    pub e_pred: i8,
}

pub const CSV_HEADER: &str = "p,h,h2,rk4,rk8,rk16,splits,e_true,e_pred";

impl PrimeRecord {
    pub fn from_class_number(p: u64, h: u64, splits_m: bool, e_pred: i8) -> Self {
        let h2 = 1u64 << h.trailing_zeros();
        PrimeRecord {
            p,
            h,
            h2,
            rk4: h % 4 == 0,
            rk8: h % 8 == 0,
            rk16: h % 16 == 0,
            splits_m,
            e_true: e_from_class_number(h),
            e_pred,
        }
    }

    pub fn to_csv(&self) -> String {
        let b = |x: bool| x as u8;
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.p,
            self.h,
            self.h2,
            b(self.rk4),
            b(self.rk8),
            b(self.rk16),
            b(self.splits_m),
            self.e_true,
            self.e_pred
        )
    }

    pub fn from_csv(line: &str) -> Result<Self, RecordError> {
        let bad = || RecordError::Parse(line.to_string());
        let f: Vec<&str> = line.trim().split(',').collect();
        if f.len() != 9 {
            return Err(bad());
        }
        let u = |s: &str| s.parse::<u64>().map_err(|_| bad());
        let flag = |s: &str| match s {
            "0" => Ok(false),
            "1" => Ok(true),
            _ => Err(bad()),
        };
        let e = |s: &str| s.parse::<i8>().ok().filter(|v| (-1..=1).contains(v)).ok_or_else(bad);
        let r = PrimeRecord {
            p: u(f[0])?,
            h: u(f[1])?,
            h2: u(f[2])?,
            rk4: flag(f[3])?,
            rk8: flag(f[4])?,
            rk16: flag(f[5])?,
            splits_m: flag(f[6])?,
            e_true: e(f[7])?,
            e_pred: e(f[8])?,
        };
        if r != PrimeRecord::from_class_number(r.p, r.h, r.splits_m, r.e_pred) {
            return Err(bad());
        }
        Ok(r)
    }

    /// The prediction matches the class number.
    pub fn agrees(&self) -> bool {
        self.e_true == self.e_pred
    }
}

/// e_p = 0 without an element of order 8, 1 with one of order 16, −1 otherwise.
pub fn e_from_class_number(h: u64) -> i8 {
    if h % 8 != 0 {
        0
    } else if h % 16 == 0 {
        1
    } else {
        -1
    }
}

pub fn build_record(fc: &FieldConstants, p: u64) -> Result<PrimeRecord, RecordError> {
    if p < 3 || p % 2 == 0 || !crate::arith::is_prime_u64(p) {
        return Err(RecordError::NotOddPrime(p));
    }
    let d = -4i64 * i64::try_from(p).map_err(|_| RecordError::NotOddPrime(p))?;
    let h = class_number(d).expect("−4p is a discriminant");
    let e_pred = predicted_e(fc, p, SpinVariant::Standard)?;
    Ok(PrimeRecord::from_class_number(p, h, splits_completely_in_M(p), e_pred))
}

/// h(−4n) for every odd prime n ≤ limit (0 at other indices).
///
/// Reduced forms (a, 2b, c) of discriminant −4n satisfy n = ac − b² with
/// 0 ≤ |b| ≤ a/2 and a ≤ c, so a single sweep over (a, b, c) counts the forms
/// of all n at once. Forms with a, c both even are imprimitive and skipped.
pub fn class_numbers_minus_4p(limit: u64) -> Vec<u32> {
    let limit = limit as usize;
    let is_prime = prime_flags(limit);
    let mut h = vec![0u32; limit + 1];
    let mut a = 1usize;
    while 3 * a * a <= 4 * limit {
        for b in 0..=a / 2 {
            let w = if b == 0 || 2 * b == a { 1 } else { 2 };
            // c = a first: the boundary a = c counts once.
            let mut n = (a * a).wrapping_sub(b * b);
            let mut c = a;
            while n <= limit {
                if n % 2 == 1 && is_prime[n] && !(a % 2 == 0 && c % 2 == 0) {
                    h[n] += if c == a { 1 } else { w };
                }
                n += a;
                c += 1;
            }
        }
        a += 1;
    }
    h
}

/// Records for the odd primes in [lo, hi], ascending.
pub fn records_in_range(fc: &FieldConstants, lo: u64, hi: u64) -> Result<Vec<PrimeRecord>, RecordError> {
    let table = class_numbers_minus_4p(hi);
    let primes: Vec<u64> = crate::arith::primes_up_to(hi).into_iter().filter(|&p| p >= lo.max(3)).collect();
    primes
        .par_iter()
        .map(|&p| {
            let e_pred = predicted_e(fc, p, SpinVariant::Standard)?;
            Ok(PrimeRecord::from_class_number(p, table[p as usize] as u64, splits_completely_in_M(p), e_pred))
        })
        .collect()
}

//! Class numbers of imaginary quadratic orders by counting reduced binary
//! quadratic forms, and the per-prime records comparing the 16-rank with the
//! spin prediction.

pub mod records;

use num_integer::Integer;
use thiserror::Error;

use crate::arith::{jacobi, sqrt_mod_prime};

pub use records::{build_record, class_numbers_minus_4p, e_from_class_number, records_in_range, PrimeRecord, RecordError, CSV_HEADER};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClassGroupError {
    #[error("{0} is not a negative discriminant")]
    InvalidDiscriminant(i64),
}

/// The form a x² + b xy + c y².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    /// |b| ≤ a ≤ c, and b ≥ 0 when |b| = a or a = c.
    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        a > 0 && b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    /// The reduced form equivalent to a positive definite form.
    pub fn reduce(mut self) -> QuadForm {
        debug_assert!(self.a > 0 && self.discriminant() < 0);
        loop {
            // Normalize b into (−a, a].
            let two_a = 2 * self.a;
            let k = Integer::div_floor(&(self.a - self.b), &two_a);
            let nb = self.b + k * two_a;
            self.c += k * (self.b + k * self.a);
            self.b = nb;
            if self.a > self.c {
                std::mem::swap(&mut self.a, &mut self.c);
                self.b = -self.b;
                continue;
            }
            if self.a == self.c && self.b < 0 {
                self.b = -self.b;
            }
            return self;
        }
    }
}

fn check_discriminant(d: i64) -> Result<(), ClassGroupError> {
    if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(ClassGroupError::InvalidDiscriminant(d));
    }
    Ok(())
}

/// All primitive reduced forms of discriminant d, sorted.
pub fn reduced_forms(d: i64) -> Result<Vec<QuadForm>, ClassGroupError> {
    check_discriminant(d)?;
    let n = -d;
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= n {
        let mut b = -a + 1;
        if (b - d).rem_euclid(2) != 0 {
            b += 1;
        }
        while b <= a {
            let num = b * b - d;
            if num % (4 * a) == 0 {
                let f = QuadForm::new(a, b, num / (4 * a));
                if f.is_reduced() && f.is_primitive() {
                    out.push(f);
                }
            }
            b += 2;
        }
        a += 1;
    }
    out.sort();
    Ok(out)
}

/// h(d): the number of primitive reduced forms of discriminant d.
pub fn class_number(d: i64) -> Result<u64, ClassGroupError> {
    Ok(reduced_forms(d)?.len() as u64)
}

/// ((1+i)/π) for p ≡ 1 mod 4, via i ↦ a square root of −1 mod p.
///
/// The value does not depend on the root: (1+i)(1−i) = 2 and (2/p) = 1
/// whenever the symbol is needed (p ≡ 1 mod 8).
pub fn gaussian_spin(p: u64) -> i8 {
    assert!(p % 4 == 1, "gaussian_spin needs p ≡ 1 mod 4");
    let i = sqrt_mod_prime(p - 1, p).expect("−1 is a square mod p");
    jacobi((1 + i) % p, p)
}

/// p splits completely in M iff p ≡ 1 mod 8 and ((1+i)/π) = 1.
#[allow(non_snake_case)]
pub fn splits_completely_in_M(p: u64) -> bool {
    p % 8 == 1 && gaussian_spin(p) == 1
}

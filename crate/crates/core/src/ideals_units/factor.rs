//! Factorization of principal ideals (x) with odd norm into prime ideals.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};

use super::ideal::{ideal_mul, OMIdeal};
use super::primes::{primes_above, PrimeIdeal};
use super::IdealError;
use crate::arith::{factor, FactorBudget};
use crate::field_core::{FieldConstants, OMElement};

/// v_𝔭(x) for x ≠ 0, with `cap` an upper bound (e.g. from the norm).
pub fn valuation(fc: &FieldConstants, prime: &PrimeIdeal, x: &OMElement, cap: u32) -> u32 {
    if !prime.contains(x) {
        return 0;
    }
    let mut k = 1;
    let mut pk: OMIdeal = prime.ideal.clone();
    while k < cap {
        pk = ideal_mul(fc, &pk, &prime.ideal);
        if !pk.contains(x) {
            break;
        }
        k += 1;
    }
    k
}

/// (x) = ∏ 𝔭^{k}, for x with odd norm. Primes are grouped by rational prime
/// in ascending order.
pub fn factor_element(fc: &FieldConstants, x: &OMElement, budget: &FactorBudget) -> Result<Vec<(PrimeIdeal, u32)>, IdealError> {
    if x.is_zero() {
        return Err(IdealError::ZeroGenerator);
    }
    let n: BigInt = fc.norm(x).abs();
    if n.is_one() {
        return Ok(Vec::new());
    }
    let n: BigUint = n.to_biguint().expect("positive norm");
    if !n.bit(0) {
        return Err(IdealError::EvenPrime);
    }
    let rational = factor(&n, budget).map_err(|e| IdealError::Budget(e.to_string()))?;
    let mut out = Vec::new();
    for (q, e) in rational {
        let mut left = e;
        for pr in primes_above(fc, &q)? {
            if left == 0 {
                break;
            }
            let cap = left / pr.degree as u32;
            if cap == 0 {
                continue;
            }
            let v = valuation(fc, &pr, x, cap);
            if v > 0 {
                left -= v * pr.degree as u32;
                out.push((pr, v));
            }
        }
        if left != 0 {
            return Err(IdealError::Internal(format!("valuations above {q} do not account for q^{e}")));
        }
    }
    Ok(out)
}

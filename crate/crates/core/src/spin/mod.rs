//! Quadratic residue symbols in O_M and the spins built from them.
//!
//! For an odd w, the total spin is the symbol
//! (r(w)·r²(w)·sr(w)·sr²(w)·√(1+i) / w), optionally times (ζ₈/w) for the
//! Sha variant. At a prime w above a completely split p it is +1 exactly
//! when Cl(−4p) has an element of order 16.

pub mod properties;
pub mod table;

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::FactorBudget;
use crate::field_core::{FieldConstants, GaloisElement, OMElement};
use crate::ideals_units::{
    domain_reduce, factor_element, find_generator, primes_above_u64, residue_degree, IdealError, OMIdeal, PrimeIdeal,
    UnitContext,
};

pub use table::{CharMap, PairTable, PrimeChar};

/// The four automorphisms whose spins enter the criterion, in order r, r², sr, sr².
pub const SPIN_AUTOMORPHISMS: [GaloisElement; 4] = [GaloisElement::R, GaloisElement::R2, GaloisElement::SR, GaloisElement::SR2];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum SpinValue {
    Minus,
    Zero,
    Plus,
}

impl SpinValue {
    pub fn from_i8(v: i8) -> SpinValue {
        match v.signum() {
            1 => SpinValue::Plus,
            -1 => SpinValue::Minus,
            _ => SpinValue::Zero,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            SpinValue::Minus => -1,
            SpinValue::Zero => 0,
            SpinValue::Plus => 1,
        }
    }

    pub fn pow(self, k: u32) -> SpinValue {
        match (self, k) {
            (_, 0) => SpinValue::Plus,
            (SpinValue::Minus, k) if k % 2 == 0 => SpinValue::Plus,
            (v, _) => v,
        }
    }
}

impl From<SpinValue> for i8 {
    fn from(v: SpinValue) -> i8 {
        v.as_i8()
    }
}

impl TryFrom<i8> for SpinValue {
    type Error = String;
    fn try_from(v: i8) -> Result<Self, String> {
        if (-1..=1).contains(&v) {
            Ok(SpinValue::from_i8(v))
        } else {
            Err(format!("spin value {v} outside {{-1, 0, 1}}"))
        }
    }
}

impl Mul for SpinValue {
    type Output = SpinValue;
    fn mul(self, o: SpinValue) -> SpinValue {
        SpinValue::from_i8(self.as_i8() * o.as_i8())
    }
}

impl fmt::Display for SpinValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.as_i8())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpinVariant {
    #[default]
    Standard,
    /// Adds the factor (ζ₈/w).
    Sha,
}

impl fmt::Display for SpinVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpinVariant::Standard => "standard",
            SpinVariant::Sha => "sha",
        })
    }
}

impl FromStr for SpinVariant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "standard" => Ok(SpinVariant::Standard),
            "sha" => Ok(SpinVariant::Sha),
            _ => Err(format!("unknown spin variant {s:?}")),
        }
    }
}

#[derive(Debug, Error)]
pub enum SpinError {
    #[error("the denominator has even norm")]
    EvenArgument,
    #[error("the spin of the identity automorphism is not used")]
    Identity,
    #[error(transparent)]
    Ideal(#[from] IdealError),
}

fn map_even(e: IdealError) -> SpinError {
    match e {
        IdealError::EvenPrime => SpinError::EvenArgument,
        e => SpinError::Ideal(e),
    }
}

/// (a/𝔭): 0 if a ∈ 𝔭, otherwise the quadratic character of a mod 𝔭.
pub fn qr_symbol_prime(a: &OMElement, prime: &PrimeIdeal) -> SpinValue {
    SpinValue::from_i8(prime.residue.legendre(a))
}

/// (a/𝔫) for 𝔫 given by its factorization.
pub fn qr_symbol_factored(a: &OMElement, factors: &[(PrimeIdeal, u32)]) -> SpinValue {
    factors.iter().fold(SpinValue::Plus, |acc, (q, k)| acc * qr_symbol_prime(a, q).pow(*k))
}

/// (a/b) for b of odd norm, through the factorization of (b).
pub fn qr_symbol(fc: &FieldConstants, a: &OMElement, b: &OMElement) -> Result<SpinValue, SpinError> {
    let fs = factor_element(fc, b, &FactorBudget::default()).map_err(map_even)?;
    Ok(qr_symbol_factored(a, &fs))
}

/// [w]_σ = (σ(w)/w).
pub fn spin_sigma(fc: &FieldConstants, w: &OMElement, g: GaloisElement) -> Result<SpinValue, SpinError> {
    if g.is_identity() {
        return Err(SpinError::Identity);
    }
    qr_symbol(fc, &fc.galois_apply(g, w), w)
}

/// r(w)·r²(w)·sr(w)·sr²(w)·√(1+i), times ζ₈ for the Sha variant.
pub fn spin_numerator(fc: &FieldConstants, w: &OMElement, variant: SpinVariant) -> OMElement {
    let mut x = fc.sqrt_1pi.clone();
    for g in SPIN_AUTOMORPHISMS {
        x = fc.mul(&x, &fc.galois_apply(g, w));
    }
    if variant == SpinVariant::Sha {
        x = fc.mul(&x, &fc.zeta8);
    }
    x
}

/// The individual factors of the total spin and their product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpinBreakdown {
    /// Labelled factors: r, r², sr, sr², √(1+i) and, for Sha, ζ₈.
    pub factors: Vec<(String, SpinValue)>,
    /// Symbol of the full product, evaluated directly.
    pub total: SpinValue,
}

pub fn total_spin_breakdown(fc: &FieldConstants, w: &OMElement, variant: SpinVariant) -> Result<SpinBreakdown, SpinError> {
    let fs = factor_element(fc, w, &FactorBudget::default()).map_err(map_even)?;
    let mut factors: Vec<(String, SpinValue)> = SPIN_AUTOMORPHISMS
        .iter()
        .map(|&g| (g.to_string(), qr_symbol_factored(&fc.galois_apply(g, w), &fs)))
        .collect();
    factors.push(("sqrt(1+i)".into(), qr_symbol_factored(&fc.sqrt_1pi, &fs)));
    if variant == SpinVariant::Sha {
        factors.push(("zeta8".into(), qr_symbol_factored(&fc.zeta8, &fs)));
    }
    let total = qr_symbol_factored(&spin_numerator(fc, w, variant), &fs);
    Ok(SpinBreakdown { factors, total })
}

pub fn total_spin(fc: &FieldConstants, w: &OMElement, variant: SpinVariant) -> Result<SpinValue, SpinError> {
    Ok(total_spin_breakdown(fc, w, variant)?.total)
}

/// a_𝔫 = (1/64) Σ_{ζ} Σ_{v ∈ V/V²} [ζ v w], and 0 for ideals of even norm.
///
/// Evaluated from scratch: a generator is recovered, reduced into the
/// fundamental domain, and each of the 64 symbols is computed separately.
pub fn a_of_ideal(fc: &FieldConstants, uc: &UnitContext, ideal: &OMIdeal, variant: SpinVariant) -> Result<Ratio<i64>, SpinError> {
    if ideal.norm().is_zero() || !ideal.norm().bit(0) {
        return Ok(Ratio::from_integer(0));
    }
    let g = find_generator(fc, ideal)?;
    let (_, y) = domain_reduce(fc, uc, &g);
    a_of_generator(fc, uc, &y, variant)
}

/// The 64-term average for the ideal generated by w (odd norm).
pub fn a_of_generator(fc: &FieldConstants, uc: &UnitContext, w: &OMElement, variant: SpinVariant) -> Result<Ratio<i64>, SpinError> {
    let fs = factor_element(fc, w, &FactorBudget::default()).map_err(map_even)?;
    let mut s = 0i64;
    for z in &uc.torsion {
        let zw = fc.mul(z, w);
        for v in &uc.square_class_reps {
            let x = fc.mul(v, &zw);
            s += qr_symbol_factored(&spin_numerator(fc, &x, variant), &fs).as_i8() as i64;
        }
    }
    Ok(Ratio::new(s, 64))
}

/// Spin data at one prime above a completely split p.
#[derive(Clone, Debug, Serialize)]
pub struct SplitPrimeSpin {
    pub p: u64,
    pub generator: OMElement,
    pub breakdown: SpinBreakdown,
}

/// For split p: a generator w of the first prime above p and its spin factors.
pub fn split_prime_spin(fc: &FieldConstants, p: u64, variant: SpinVariant) -> Result<Option<SplitPrimeSpin>, SpinError> {
    if p == 2 {
        return Err(SpinError::EvenArgument);
    }
    if residue_degree(fc, p) != 1 {
        return Ok(None);
    }
    let prime = primes_above_u64(fc, p)?.swap_remove(0);
    let w = find_generator(fc, &prime.ideal)?;
    let fs = [(prime, 1u32)];
    let mut factors: Vec<(String, SpinValue)> = SPIN_AUTOMORPHISMS
        .iter()
        .map(|&g| (g.to_string(), qr_symbol_factored(&fc.galois_apply(g, &w), &fs)))
        .collect();
    factors.push(("sqrt(1+i)".into(), qr_symbol_factored(&fc.sqrt_1pi, &fs)));
    if variant == SpinVariant::Sha {
        factors.push(("zeta8".into(), qr_symbol_factored(&fc.zeta8, &fs)));
    }
    let total = qr_symbol_factored(&spin_numerator(fc, &w, variant), &fs);
    Ok(Some(SplitPrimeSpin { p, generator: w, breakdown: SpinBreakdown { factors, total } }))
}

/// Predicted e_p: 0 unless p splits completely in M, else the total spin at
/// a prime above p.
pub fn predicted_e(fc: &FieldConstants, p: u64, variant: SpinVariant) -> Result<i8, SpinError> {
    Ok(split_prime_spin(fc, p, variant)?.map_or(0, |s| s.breakdown.total.as_i8()))
}

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::hnf::{hnf_contains, hnf_det, hnf_mod, is_canonical, Hnf};
use super::IdealError;
use crate::field_core::{FieldConstants, OMElement};

/// A nonzero ideal of O_M in canonical Hermite normal form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OMIdeal {
    hnf: Hnf,
    norm: BigInt,
}

impl OMIdeal {
    pub fn unit() -> Self {
        let mut hnf: Hnf = Default::default();
        for (i, col) in hnf.iter_mut().enumerate() {
            col[i] = BigInt::one();
        }
        OMIdeal { hnf, norm: BigInt::one() }
    }

    /// The ideal generated by `gens`, given a positive integer `m` known to lie in it.
    pub fn from_generators(fc: &FieldConstants, gens: &[OMElement], m: &BigInt) -> Result<Self, IdealError> {
        let m = m.abs();
        if m.is_zero() {
            return Err(IdealError::ZeroGenerator);
        }
        let mut cols = Vec::with_capacity(8 * gens.len());
        let basis = basis_elements();
        for g in gens {
            if g.is_zero() {
                continue;
            }
            for b in &basis {
                cols.push(fc.mul(g, b).coords);
            }
        }
        Self::from_hnf(fc, hnf_mod(&cols, &m))
    }

    /// Wrap an HNF, verifying canonical form and closure under multiplication by O_M.
    pub fn from_hnf(fc: &FieldConstants, hnf: Hnf) -> Result<Self, IdealError> {
        if !is_canonical(&hnf) {
            return Err(IdealError::NotCanonical);
        }
        let norm = hnf_det(&hnf);
        let id = OMIdeal { hnf, norm };
        let basis = basis_elements();
        for col in id.basis() {
            for b in &basis[1..] {
                if !id.contains(&fc.mul(&col, b)) {
                    return Err(IdealError::NotAnIdeal);
                }
            }
        }
        Ok(id)
    }

    pub fn hnf(&self) -> &Hnf {
        &self.hnf
    }

    pub fn norm(&self) -> &BigInt {
        &self.norm
    }

    pub fn is_unit(&self) -> bool {
        self.norm.is_one()
    }

    /// The HNF columns as elements: a Z-basis of the ideal.
    pub fn basis(&self) -> Vec<OMElement> {
        self.hnf.iter().map(|c| OMElement { coords: c.clone() }).collect()
    }

    pub fn contains(&self, x: &OMElement) -> bool {
        hnf_contains(&self.hnf, &x.coords)
    }

    /// b ⊆ self.
    pub fn contains_ideal(&self, b: &OMIdeal) -> bool {
        b.norm.is_multiple_of(&self.norm) && b.hnf.iter().all(|c| hnf_contains(&self.hnf, c))
    }
}

pub(crate) fn basis_elements() -> Vec<OMElement> {
    (0..8)
        .map(|i| {
            let mut c = [0i64; 8];
            c[i] = 1;
            OMElement::from_i64s(c)
        })
        .collect()
}

pub fn ideal_from_generator(fc: &FieldConstants, x: &OMElement) -> Result<OMIdeal, IdealError> {
    if x.is_zero() {
        return Err(IdealError::ZeroGenerator);
    }
    let n = fc.norm(x).abs();
    let id = OMIdeal::from_generators(fc, std::slice::from_ref(x), &n)?;
    debug_assert_eq!(id.norm, n);
    Ok(id)
}

pub fn ideal_mul(fc: &FieldConstants, a: &OMIdeal, b: &OMIdeal) -> OMIdeal {
    if a.is_unit() {
        return b.clone();
    }
    if b.is_unit() {
        return a.clone();
    }
    let m = &a.norm * &b.norm;
    let mut cols = Vec::with_capacity(64);
    for x in a.basis() {
        for y in b.basis() {
            cols.push(fc.mul(&x, &y).coords);
        }
    }
    let out = OMIdeal::from_hnf(fc, hnf_mod(&cols, &m)).expect("product of ideals is an ideal");
    debug_assert_eq!(out.norm, m);
    out
}

pub fn ideal_pow(fc: &FieldConstants, a: &OMIdeal, k: u32) -> OMIdeal {
    let mut r = OMIdeal::unit();
    for _ in 0..k {
        r = ideal_mul(fc, &r, a);
    }
    r
}

pub fn ideal_add(fc: &FieldConstants, a: &OMIdeal, b: &OMIdeal) -> OMIdeal {
    let m = a.norm.gcd(&b.norm);
    let cols: Vec<[BigInt; 8]> = a.hnf.iter().chain(b.hnf.iter()).cloned().collect();
    OMIdeal::from_hnf(fc, hnf_mod(&cols, &m)).expect("sum of ideals is an ideal")
}

/// a | b, i.e. b ⊆ a.
pub fn ideal_divides(a: &OMIdeal, b: &OMIdeal) -> bool {
    a.contains_ideal(b)
}

/// a + b = (1).
pub fn ideal_coprime(fc: &FieldConstants, a: &OMIdeal, b: &OMIdeal) -> bool {
    if a.norm.gcd(&b.norm).is_one() {
        return true;
    }
    ideal_add(fc, a, b).is_unit()
}

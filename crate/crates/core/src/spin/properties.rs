//! Sampled checks of the algebraic identities behind the spin symbols.
//!
//! Each check draws its samples from a seeded generator and reports how many
//! failed. "Depends only on the classes" properties are checked by drawing
//! many samples in a few fixed residue classes and comparing each against the
//! first value seen in its class.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{a_of_generator, a_of_ideal, qr_symbol, spin_sigma, SpinValue, SpinVariant};
use crate::arith::is_probable_prime;
use crate::field_core::{FieldConstants, GaloisElement, OMElement};
use crate::ideals_units::{domain_reduce, generates, generators_in_domain, ideal_from_generator, in_domain, UnitContext};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PropertyReport {
    pub name: String,
    pub samples: usize,
    pub failures: usize,
    /// Samples whose checked symbol was −1; shows the check is not vacuous.
    pub negatives: usize,
    pub first_failure: Option<String>,
}

impl PropertyReport {
    fn new(name: &str) -> Self {
        PropertyReport { name: name.to_string(), samples: 0, failures: 0, negatives: 0, first_failure: None }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.samples += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    fn record_value(&mut self, ok: bool, v: SpinValue, detail: impl FnOnce() -> String) {
        self.negatives += (v == SpinValue::Minus) as usize;
        self.record(ok, detail);
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.samples > 0
    }
}

fn random_element(rng: &mut ChaCha8Rng, bound: i64) -> OMElement {
    OMElement::from_i64s(std::array::from_fn(|_| rng.random_range(-bound..=bound)))
}

fn is_odd(fc: &FieldConstants, x: &OMElement) -> bool {
    fc.norm(x).bit(0)
}

/// base + 8·x for random small x, retried until odd.
fn random_in_class(fc: &FieldConstants, rng: &mut ChaCha8Rng, base: &OMElement, bound: i64) -> OMElement {
    loop {
        let x = &random_element(rng, bound).scale(&BigInt::from(8)) + base;
        if is_odd(fc, &x) {
            return x;
        }
    }
}

fn random_odd(fc: &FieldConstants, rng: &mut ChaCha8Rng, bound: i64) -> OMElement {
    loop {
        let x = random_element(rng, bound);
        if is_odd(fc, &x) {
            return x;
        }
    }
}

fn sym(fc: &FieldConstants, a: &OMElement, b: &OMElement) -> SpinValue {
    qr_symbol(fc, a, b).expect("odd denominator with small norm")
}

/// [wz]_r = [w]_r·[z]_r·(r(w)/z)·(r(z)/w) for odd w, z with all factors nonzero.
pub fn twisted_multiplicativity(fc: &FieldConstants, samples: usize, seed: u64) -> PropertyReport {
    let mut rep = PropertyReport::new("twisted multiplicativity");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = GaloisElement::R;
    while rep.samples < samples {
        let w = random_odd(fc, &mut rng, 2);
        let z = random_odd(fc, &mut rng, 2);
        let (rw, rz) = (fc.galois_apply(r, &w), fc.galois_apply(r, &z));
        let parts = [sym(fc, &rw, &w), sym(fc, &rz, &z), sym(fc, &rw, &z), sym(fc, &rz, &w)];
        if parts.contains(&SpinValue::Zero) {
            continue;
        }
        let wz = fc.mul(&w, &z);
        let lhs = spin_sigma(fc, &wz, r).expect("odd product");
        let rhs = parts.iter().fold(SpinValue::Plus, |a, &b| a * b);
        rep.record_value(lhs == rhs, lhs, || format!("w = {w}, z = {z}: {lhs} vs {rhs}"));
    }
    rep
}

/// γ(w,z)·γ(z,w) with γ(w,z) = (z / r(w)r³(w)) is constant on classes mod 8.
pub fn gamma_symmetry(fc: &FieldConstants, samples: usize, seed: u64) -> PropertyReport {
    let mut rep = PropertyReport::new("gamma symmetry mod 8");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let classes: Vec<(OMElement, OMElement)> = (0..5).map(|_| (random_odd(fc, &mut rng, 3), random_odd(fc, &mut rng, 3))).collect();
    let gamma = |w: &OMElement, z: &OMElement| {
        let d = fc.mul(&fc.galois_apply(GaloisElement::R, w), &fc.galois_apply(GaloisElement::R3, w));
        sym(fc, z, &d)
    };
    let mut seen: BTreeMap<usize, SpinValue> = BTreeMap::new();
    while rep.samples < samples {
        let c = rep.samples % classes.len();
        let w = random_in_class(fc, &mut rng, &classes[c].0, 1);
        let z = random_in_class(fc, &mut rng, &classes[c].1, 1);
        let v = gamma(&w, &z) * gamma(&z, &w);
        if v == SpinValue::Zero {
            continue;
        }
        let first = *seen.entry(c).or_insert(v);
        rep.record_value(v == first, v, || format!("class {c}: w = {w}, z = {z} gives {v}, class value {first}"));
    }
    rep
}

/// (a/b)·(b/a) is constant on classes of (a, b) mod 8.
pub fn reciprocity_classes(fc: &FieldConstants, samples: usize, seed: u64) -> PropertyReport {
    let mut rep = PropertyReport::new("reciprocity sign mod 8");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let classes: Vec<(OMElement, OMElement)> = (0..5).map(|_| (random_odd(fc, &mut rng, 3), random_odd(fc, &mut rng, 3))).collect();
    let mut seen: BTreeMap<usize, SpinValue> = BTreeMap::new();
    while rep.samples < samples {
        let c = rep.samples % classes.len();
        let a = random_in_class(fc, &mut rng, &classes[c].0, 1);
        let b = random_in_class(fc, &mut rng, &classes[c].1, 1);
        let v = sym(fc, &a, &b) * sym(fc, &b, &a);
        if v == SpinValue::Zero {
            continue;
        }
        let first = *seen.entry(c).or_insert(v);
        rep.record_value(v == first, v, || format!("class {c}: a = {a}, b = {b} gives {v}, class value {first}"));
    }
    rep
}

/// (α/β) = (α/β′) whenever β ≡ β′ mod 8α.
pub fn mod8_periodicity(fc: &FieldConstants, samples: usize, seed: u64) -> PropertyReport {
    let mut rep = PropertyReport::new("mod 8 alpha periodicity");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let specials = [fc.sqrt_1pi.clone(), fc.zeta8.clone(), &fc.one + &fc.gen_i];
    while rep.samples < samples {
        let alpha = if rep.samples % 4 < 3 { specials[rep.samples % 4].clone() } else { random_element(&mut rng, 1) };
        if alpha.is_zero() {
            continue;
        }
        let beta = random_odd(fc, &mut rng, 2);
        let mut y = OMElement::zero();
        let i = rng.random_range(0..8);
        y.coords[i] = BigInt::from(if rng.random_bool(0.5) { 1 } else { -1 });
        let shift = fc.mul(&fc.mul(&alpha, &y), &OMElement::rational(BigInt::from(8)));
        let beta2 = &beta + &shift;
        if !is_odd(fc, &beta2) {
            continue;
        }
        let (s1, s2) = (sym(fc, &alpha, &beta), sym(fc, &alpha, &beta2));
        rep.record_value(s1 == s2, s1, || format!("alpha = {alpha}, beta = {beta}, beta' = {beta2}: {s1} vs {s2}"));
    }
    rep
}

/// For an involution σ and w ≡ w′ mod 2²²: [w]_σ = [w′]_σ.
///
/// With `one_mod_8` the sample is restricted to w ≡ 1 mod 8, where the
/// involution spins turn out to be almost always +1; the unrestricted sample
/// sees both signs. w′ is drawn with prime norm so that its symbol needs no
/// factoring; it is then a degree-1 prime, automatically coprime to σ(w′).
pub fn involution_periodicity(fc: &FieldConstants, sigma: GaloisElement, one_mod_8: bool, samples: usize, seed: u64) -> PropertyReport {
    assert_eq!(sigma.order(), 2, "involution expected");
    let tag = if one_mod_8 { ", w = 1 mod 8" } else { ", w odd" };
    let mut rep = PropertyReport::new(&format!("involution spin periodicity ({sigma}{tag})"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modulus = BigInt::one() << 22;
    while rep.samples < samples {
        let w = if one_mod_8 { random_in_class(fc, &mut rng, &fc.one, 1) } else { random_odd(fc, &mut rng, 2) };
        let s = spin_sigma(fc, &w, sigma).expect("odd w");
        if s == SpinValue::Zero {
            continue;
        }
        // Some w have no prime-norm shift among small y; move on after a while.
        let found = (0..4000).find_map(|_| {
            let mut y = OMElement::zero();
            for _ in 0..3 {
                let i = rng.random_range(0..8);
                y.coords[i] += rng.random_range(-3i64..=3);
            }
            let cand = &w + &y.scale(&modulus);
            let n = fc.norm(&cand).abs();
            (!y.is_zero() && is_probable_prime(n.magnitude())).then_some(cand)
        });
        let Some(w2) = found else { continue };
        let s2 = spin_sigma(fc, &w2, sigma).expect("prime norm");
        rep.record_value(s == s2, s, || format!("w = {w}, w' = {w2}: {s} vs {s2}"));
    }
    rep
}

/// a_𝔫 computed from the reduced generator equals the value from u·x for a
/// random unit u, and lies in {k/64}.
pub fn a_generator_invariance(fc: &FieldConstants, uc: &UnitContext, samples: usize, seed: u64) -> PropertyReport {
    let mut rep = PropertyReport::new("a_n generator invariance");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while rep.samples < samples {
        let x = random_odd(fc, &mut rng, 2);
        let id = ideal_from_generator(fc, &x).expect("nonzero");
        let k = [rng.random_range(-2..=2), rng.random_range(-2..=2), rng.random_range(-2..=2)];
        let u = fc.mul(&uc.torsion[rng.random_range(0..8)], &uc.unit_power(fc, k));
        let ux = fc.mul(&u, &x);
        let a = a_of_ideal(fc, uc, &id, SpinVariant::Standard).expect("odd ideal");
        let b = a_of_generator(fc, uc, &ux, SpinVariant::Standard).expect("odd generator");
        let in_range = (a * 64).is_integer() && a.abs() <= num_rational::Ratio::from_integer(1);
        rep.record(a == b && in_range, || format!("x = {x}: {a} vs {b}"));
    }
    rep
}

/// Domain reduction keeps the ideal, is idempotent, and every ideal has eight
/// generators in the domain closed under ζ₈.
pub fn fundamental_domain(fc: &FieldConstants, uc: &UnitContext, samples: usize, seed: u64) -> PropertyReport {
    let mut rep = PropertyReport::new("fundamental domain");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while rep.samples < samples {
        let x = random_element(&mut rng, 20);
        if x.is_zero() {
            continue;
        }
        let id = ideal_from_generator(fc, &x).expect("nonzero");
        let (_, y) = domain_reduce(fc, uc, &x);
        let (v2, y2) = domain_reduce(fc, uc, &y);
        let mut ok = ideal_from_generator(fc, &y).expect("nonzero") == id && v2 == fc.one && y2 == y && in_domain(fc, uc, &y);
        if rep.samples % 4 == 0 {
            let gs = generators_in_domain(fc, uc, &id).expect("principal");
            ok &= gs.len() == 8
                && gs.iter().all(|g| generates(fc, g, &id) && in_domain(fc, uc, g) && gs.contains(&fc.mul(&fc.zeta8, g)));
        }
        rep.record(ok, || format!("x = {x}"));
    }
    rep
}

/// N(xy) = N(x)N(y) and ∏_g g(x) = N(x).
pub fn norm_identities(fc: &FieldConstants, samples: usize, seed: u64) -> PropertyReport {
    let mut rep = PropertyReport::new("norm multiplicativity and Galois product");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while rep.samples < samples {
        let x = random_element(&mut rng, 1_000_000);
        let y = random_element(&mut rng, 1_000_000);
        let nx = fc.norm(&x);
        let mult = fc.norm(&fc.mul(&x, &y)) == &nx * fc.norm(&y);
        let small = random_element(&mut rng, 50);
        let conj: Vec<OMElement> = GaloisElement::all().iter().map(|&g| fc.galois_apply(g, &small)).collect();
        let prod = fc.product(conj.iter());
        let galois = prod == OMElement::rational(fc.norm(&small));
        rep.record(mult && galois, || format!("x = {x}, y = {y}, small = {small}"));
    }
    rep
}

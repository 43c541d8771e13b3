//! Fast evaluation of a_𝔫 from prime-level character data.
//!
//! a_𝔫 does not depend on the generator, so for 𝔫 = ∏ 𝔭_t^{k_t} we may use
//! w = ∏ g_t^{k_t} with g_t a fixed generator of 𝔭_t. Writing χ_t for the
//! quadratic character mod 𝔭_t and S_t(x) = ∏_σ χ_t(σ(x)) over σ ∈ {r, r², sr, sr²}:
//!
//! * torsion drops out, since ∏_σ σ(ζ₈) = 1;
//! * v ↦ ∏_t S_t(v)^{k_t} is a character of V/V², so the unit average is 1
//!   when it is trivial and 0 otherwise;
//! * the remaining sign is ∏_t (χ_t(√(1+i)) · ∏_s S_t(g_s)^{k_s})^{k_t}.

use std::collections::HashMap;

use super::{SpinVariant, SPIN_AUTOMORPHISMS};
use crate::field_core::{FieldConstants, GaloisElement, OMElement};
use crate::ideals_units::{find_generator, primes_above_u64, DegreeOneMap, IdealError, ResidueMap, UnitContext};

type Mat8 = [[i64; 8]; 8];

/// A quadratic character x ↦ (x/𝔭) through an explicit residue map.
#[derive(Clone, Debug)]
pub enum CharMap {
    One(DegreeOneMap),
    General(ResidueMap),
}

impl CharMap {
    pub fn from_residue(r: &ResidueMap) -> CharMap {
        match r.degree_one() {
            Some(d) => CharMap::One(d),
            None => CharMap::General(r.clone()),
        }
    }

    pub fn legendre(&self, x: &OMElement) -> i8 {
        match self {
            CharMap::One(d) => d.legendre(x),
            CharMap::General(r) => r.legendre(x),
        }
    }

    pub fn twisted(&self, m: &Mat8) -> CharMap {
        match self {
            CharMap::One(d) => CharMap::One(d.twisted(m)),
            CharMap::General(r) => CharMap::General(r.twisted(m)),
        }
    }
}

/// Character data of one odd prime ideal together with a fixed generator.
#[derive(Clone, Debug)]
pub struct PrimeChar {
    pub p: u64,
    pub degree: usize,
    pub norm: u64,
    pub generator: OMElement,
    pub base: CharMap,
    /// χ∘σ for σ in r, r², sr, sr².
    pub spins: [CharMap; 4],
    pub chi_sqrt_1pi: i8,
    pub chi_zeta8: i8,
    /// Bit i set when S(v_i) = −1.
    pub unit_mask: u8,
}

impl PrimeChar {
    pub fn new(fc: &FieldConstants, uc: &UnitContext, p: u64, degree: usize, generator: OMElement, base: CharMap) -> Self {
        let spins = SPIN_AUTOMORPHISMS.map(|g| base.twisted(fc.galois_matrix(g)));
        let mut pc = PrimeChar {
            p,
            degree,
            norm: p.pow(degree as u32),
            chi_sqrt_1pi: base.legendre(&fc.sqrt_1pi),
            chi_zeta8: base.legendre(&fc.zeta8),
            generator,
            base,
            spins,
            unit_mask: 0,
        };
        for (i, v) in uc.fund_units.iter().enumerate() {
            if pc.spin_against(v) < 0 {
                pc.unit_mask |= 1 << i;
            }
        }
        pc
    }

    /// S(x) = ∏_σ (σ(x)/𝔭).
    pub fn spin_against(&self, x: &OMElement) -> i8 {
        self.spins.iter().map(|c| c.legendre(x)).product()
    }

    /// The data of g(𝔭): generator g(w), character x ↦ χ(g⁻¹x).
    pub fn conjugate(&self, fc: &FieldConstants, uc: &UnitContext, g: GaloisElement) -> PrimeChar {
        let base = self.base.twisted(fc.galois_matrix(g.inverse()));
        PrimeChar::new(fc, uc, self.p, self.degree, fc.galois_apply(g, &self.generator), base)
    }

    /// [w] at the prime itself: the total spin of its generator.
    pub fn prime_spin(&self, variant: SpinVariant) -> i8 {
        let z = if variant == SpinVariant::Sha { self.chi_zeta8 } else { 1 };
        self.spin_against(&self.generator) * self.chi_sqrt_1pi * z
    }
}

/// The prime ideals above the odd prime p with norm ≤ `max_norm`, each with a
/// generator. Above a completely split p the eight primes are the Galois
/// conjugates of the first, which needs only one generator search.
pub fn prime_chars_above(fc: &FieldConstants, uc: &UnitContext, p: u64, max_norm: u64) -> Result<Vec<PrimeChar>, IdealError> {
    let ps = primes_above_u64(fc, p)?;
    let f = ps[0].degree;
    if (p as u128).pow(f as u32) > max_norm as u128 {
        return Ok(Vec::new());
    }
    if f == 1 {
        let g = find_generator(fc, &ps[0].ideal)?;
        let first = PrimeChar::new(fc, uc, p, 1, g, CharMap::from_residue(&ps[0].residue));
        return Ok(GaloisElement::all().iter().map(|&s| first.conjugate(fc, uc, s)).collect());
    }
    ps.iter()
        .map(|q| {
            let g = find_generator(fc, &q.ideal)?;
            Ok(PrimeChar::new(fc, uc, p, f, g, CharMap::from_residue(&q.residue)))
        })
        .collect()
}

/// Cache of S_t(g_s) over pairs of prime indices.
#[derive(Debug, Default)]
pub struct PairTable {
    cache: HashMap<(u32, u32), i8>,
}

impl PairTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, primes: &[PrimeChar], t: usize, s: usize) -> i8 {
        *self
            .cache
            .entry((t as u32, s as u32))
            .or_insert_with(|| primes[t].spin_against(&primes[s].generator))
    }
}

/// a_𝔫 for 𝔫 = ∏ primes[t]^{k}, all primes odd. Factors must list distinct indices.
pub fn a_from_factors(primes: &[PrimeChar], factors: &[(usize, u32)], variant: SpinVariant, pairs: &mut PairTable) -> i8 {
    let mask = factors.iter().filter(|(_, k)| k % 2 == 1).fold(0u8, |m, &(t, _)| m ^ primes[t].unit_mask);
    if mask != 0 {
        return 0;
    }
    let mut sign = 1i8;
    for &(t, kt) in factors {
        let pt = &primes[t];
        let mut e = pt.chi_sqrt_1pi;
        if variant == SpinVariant::Sha {
            e *= pt.chi_zeta8;
        }
        for &(s, ks) in factors {
            let c = pairs.get(primes, t, s);
            if c == 0 {
                return 0;
            }
            if ks % 2 == 1 {
                e *= c;
            }
        }
        if kt % 2 == 1 {
            sign *= e;
        }
    }
    sign
}

/// Same value computed without the character shortcut: the explicit
/// generator ∏ g_t^{k_t} times `unit`, with all 64 unit twists summed.
/// Returns 64·a_𝔫.
pub fn a_from_factors_explicit(
    fc: &FieldConstants,
    uc: &UnitContext,
    primes: &[PrimeChar],
    factors: &[(usize, u32)],
    unit: &OMElement,
    variant: SpinVariant,
) -> i64 {
    let mut w = unit.clone();
    for &(t, k) in factors {
        w = fc.mul(&w, &fc.pow(&primes[t].generator, k as u64));
    }
    let mut s = 0i64;
    for z in &uc.torsion {
        for v in &uc.square_class_reps {
            let x = fc.mul(&fc.mul(z, v), &w);
            let num = super::spin_numerator(fc, &x, variant);
            let val: i8 = factors.iter().map(|&(t, k)| primes[t].base.legendre(&num).pow(k)).product();
            s += val as i64;
        }
    }
    s
}

//! Prime ideals of O_M above odd rational primes, each paired with an
//! explicit map to its residue field.
//!
//! The minimal polynomial of θ has discriminant a power of 2, so every odd p
//! is unramified and pO_M = ∏ (p, g(θ)) over the irreducible factors g of the
//! minimal polynomial mod p.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ideal::OMIdeal;
use super::IdealError;
use crate::arith;
use crate::field_core::{FieldConstants, GaloisElement, OMElement};
use crate::fp::{self, BigPrime, ExtField, Poly, PrimeField, SmallPrime};

type Mat8 = [[i64; 8]; 8];

/// Reduction O_M → O_M/𝔭 ≅ F_p[x]/(g), stored as the images of the basis.
#[derive(Clone, Debug)]
pub struct ResidueData<F: PrimeField> {
    pub ext: ExtField<F>,
    pub images: Vec<Poly<F::El>>,
}

impl<F: PrimeField> ResidueData<F> {
    pub fn reduce(&self, x: &OMElement) -> Poly<F::El> {
        let f = &self.ext.base;
        let mut acc: Poly<F::El> = Vec::new();
        for (c, img) in x.coords.iter().zip(&self.images) {
            if c.is_zero() || img.is_empty() {
                continue;
            }
            acc = fp::add(f, &acc, &fp::scale(f, img, &f.from_bigint(c)));
        }
        acc
    }

    pub fn legendre(&self, x: &OMElement) -> i8 {
        self.ext.legendre(&self.reduce(x))
    }

    /// The map x ↦ φ(g(x)) for the Galois element with coordinate matrix `m`.
    pub fn twisted(&self, m: &Mat8) -> Self {
        let f = &self.ext.base;
        let images = (0..8)
            .map(|i| {
                let mut acc: Poly<F::El> = Vec::new();
                for (j, img) in self.images.iter().enumerate() {
                    if m[j][i] != 0 {
                        acc = fp::add(f, &acc, &fp::scale(f, img, &f.from_i64(m[j][i])));
                    }
                }
                acc
            })
            .collect();
        ResidueData { ext: self.ext.clone(), images }
    }
}

#[derive(Clone, Debug)]
pub enum ResidueMap {
    Small(ResidueData<SmallPrime>),
    Big(ResidueData<BigPrime>),
}

impl ResidueMap {
    pub fn degree(&self) -> usize {
        match self {
            ResidueMap::Small(d) => d.ext.degree(),
            ResidueMap::Big(d) => d.ext.degree(),
        }
    }

    /// Quadratic character of the residue field, 0 on the prime itself.
    pub fn legendre(&self, x: &OMElement) -> i8 {
        match self {
            ResidueMap::Small(d) => d.legendre(x),
            ResidueMap::Big(d) => d.legendre(x),
        }
    }

    pub fn is_zero(&self, x: &OMElement) -> bool {
        match self {
            ResidueMap::Small(d) => d.reduce(x).is_empty(),
            ResidueMap::Big(d) => d.reduce(x).is_empty(),
        }
    }

    pub fn twisted(&self, m: &Mat8) -> Self {
        match self {
            ResidueMap::Small(d) => ResidueMap::Small(d.twisted(m)),
            ResidueMap::Big(d) => ResidueMap::Big(d.twisted(m)),
        }
    }

    /// For a degree-1 prime over p < 2⁶³: the reduction as 8 residues mod p.
    pub fn degree_one(&self) -> Option<DegreeOneMap> {
        match self {
            ResidueMap::Small(d) if d.ext.degree() == 1 => {
                let img = std::array::from_fn(|i| d.images[i].first().copied().unwrap_or(0));
                Some(DegreeOneMap { p: d.ext.base.p, img })
            }
            _ => None,
        }
    }
}

/// Reduction modulo a degree-1 prime as a linear form mod p.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeOneMap {
    pub p: u64,
    pub img: [u64; 8],
}

impl DegreeOneMap {
    pub fn reduce(&self, x: &OMElement) -> u64 {
        let mut acc = 0u64;
        for (c, &m) in x.coords.iter().zip(&self.img) {
            acc = (acc + arith::mul_mod(arith::reduce_bigint(c, self.p), m, self.p)) % self.p;
        }
        acc
    }

    pub fn reduce_i64s(&self, x: &[i64; 8]) -> u64 {
        let mut acc = 0u64;
        for (&c, &m) in x.iter().zip(&self.img) {
            acc = (acc + arith::mul_mod(arith::reduce_i64(c, self.p), m, self.p)) % self.p;
        }
        acc
    }

    pub fn legendre(&self, x: &OMElement) -> i8 {
        arith::jacobi(self.reduce(x), self.p)
    }

    pub fn twisted(&self, m: &Mat8) -> Self {
        let img = std::array::from_fn(|i| {
            let mut acc = 0u64;
            for j in 0..8 {
                acc = (acc + arith::mul_mod(arith::reduce_i64(m[j][i], self.p), self.img[j], self.p)) % self.p;
            }
            acc
        });
        DegreeOneMap { p: self.p, img }
    }
}

/// A prime ideal of O_M over an odd rational prime.
#[derive(Clone, Debug)]
pub struct PrimeIdeal {
    pub p: BigUint,
    pub degree: usize,
    pub ideal: OMIdeal,
    pub residue: ResidueMap,
}

impl PrimeIdeal {
    pub fn norm(&self) -> &BigInt {
        self.ideal.norm()
    }

    pub fn contains(&self, x: &OMElement) -> bool {
        self.residue.is_zero(x)
    }

    /// The residue map of g⁻¹(𝔭): x ↦ φ_𝔭(g(x)).
    pub fn twisted(&self, fc: &FieldConstants, g: GaloisElement) -> ResidueMap {
        self.residue.twisted(fc.galois_matrix(g))
    }
}

/// Coordinates of θ⁰, …, θ⁷.
fn theta_powers(fc: &FieldConstants) -> Vec<OMElement> {
    let mut out = vec![fc.one.clone()];
    for j in 1..8 {
        out.push(fc.mul(&out[j - 1], &fc.theta));
    }
    out
}

fn decompose<F: PrimeField>(fc: &FieldConstants, f: F, p: &BigUint) -> Result<Vec<(OMIdeal, ResidueData<F>)>, IdealError> {
    let minpoly: Poly<F::El> = fp::trim(&f, fc.min_poly.iter().map(|&c| f.from_i64(c)).collect());
    let seed = (p % BigUint::from(u64::MAX)).to_u64().unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7072_696d_6573);
    let factors = fp::factor_squarefree(&f, &minpoly, &mut rng);
    let den_inv = f
        .inv(&f.from_bigint(&fc.theta_inv_den))
        .ok_or_else(|| IdealError::Internal(format!("θ-index not invertible mod {p}")))?;
    let pw = theta_powers(fc);
    let pz = BigInt::from(p.clone());
    let mut out = Vec::with_capacity(factors.len());
    for g in factors {
        let ext = ExtField::new(f.clone(), g.clone());
        let images = (0..8)
            .map(|i| {
                let coeffs: Poly<F::El> = (0..8)
                    .map(|j| f.mul(&f.from_bigint(&fc.theta_inv_num[j][i]), &den_inv))
                    .collect();
                ext.reduce(&fp::trim(&f, coeffs))
            })
            .collect();
        // g(θ) with coefficients lifted to [0, p).
        let mut gt = OMElement::zero();
        for (j, c) in g.iter().enumerate() {
            let c = BigInt::from(f.to_biguint(c));
            if !c.is_zero() {
                gt = &gt + &pw[j].scale(&c);
            }
        }
        let ideal = OMIdeal::from_generators(fc, &[gt, OMElement::rational(pz.clone())], &pz)?;
        let expect = pz.pow(ext.degree() as u32);
        if ideal.norm() != &expect {
            return Err(IdealError::Internal(format!(
                "prime above {p} has norm {} instead of {expect}",
                ideal.norm()
            )));
        }
        out.push((ideal, ResidueData { ext, images }));
    }
    let total: usize = out.iter().map(|(_, d)| d.ext.degree()).sum();
    if total != 8 {
        return Err(IdealError::Internal(format!("residue degrees above {p} sum to {total}")));
    }
    Ok(out)
}

/// All primes above the odd prime p, sorted by (degree, defining factor).
pub fn primes_above(fc: &FieldConstants, p: &BigUint) -> Result<Vec<PrimeIdeal>, IdealError> {
    if p == &BigUint::from(2u32) {
        return Err(IdealError::EvenPrime);
    }
    if !arith::is_probable_prime(p) {
        return Err(IdealError::NotPrime(p.clone()));
    }
    match p.to_u64().filter(|&q| q < 1 << 62) {
        Some(q) => Ok(decompose(fc, SmallPrime { p: q }, p)?
            .into_iter()
            .map(|(ideal, d)| PrimeIdeal { p: p.clone(), degree: d.ext.degree(), ideal, residue: ResidueMap::Small(d) })
            .collect()),
        None => Ok(decompose(fc, BigPrime { p: p.clone() }, p)?
            .into_iter()
            .map(|(ideal, d)| PrimeIdeal { p: p.clone(), degree: d.ext.degree(), ideal, residue: ResidueMap::Big(d) })
            .collect()),
    }
}

/// Common residue degree of the primes above the odd prime p < 2⁶².
pub fn residue_degree(fc: &FieldConstants, p: u64) -> usize {
    assert!(p % 2 == 1 && p < 1 << 62, "residue_degree needs an odd prime below 2^62");
    let f = SmallPrime { p };
    let minpoly: Poly<u64> = fp::trim(&f, fc.min_poly.iter().map(|&c| f.from_i64(c)).collect());
    fp::distinct_degree(&f, &minpoly).first().map(|(d, _)| *d).unwrap_or(0)
}

pub fn primes_above_u64(fc: &FieldConstants, p: u64) -> Result<Vec<PrimeIdeal>, IdealError> {
    primes_above(fc, &BigUint::from(p))
}

/// The unique prime above 2: the kernel of x ↦ x⁸ on O_M/2O_M, which is
/// F₂-linear because Frobenius is.
pub fn prime_above_two(fc: &FieldConstants) -> OMIdeal {
    let two = BigInt::from(2);
    // Columns: images of η_i under x ↦ x⁸, mod 2.
    let mut a = [[0u8; 8]; 8];
    for i in 0..8 {
        let mut c = [0i64; 8];
        c[i] = 1;
        let y = fc.pow(&OMElement::from_i64s(c), 8);
        for (r, v) in y.coords.iter().enumerate() {
            a[r][i] = (v % &two != BigInt::zero()) as u8;
        }
    }
    let mut gens: Vec<[BigInt; 8]> = kernel_f2(&a).into_iter().map(|v| v.map(BigInt::from)).collect();
    for i in 0..8 {
        let mut c: [BigInt; 8] = Default::default();
        c[i] = two.clone();
        gens.push(c);
    }
    let id = OMIdeal::from_hnf(fc, super::hnf::hnf_mod(&gens, &two)).expect("kernel of Frobenius power is an ideal");
    debug_assert!(id.norm().is_one() || id.norm() == &two);
    id
}

fn kernel_f2(a: &[[u8; 8]; 8]) -> Vec<[u8; 8]> {
    let mut m = *a;
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..8 {
        let Some(r) = (row..8).find(|&r| m[r][col] == 1) else { continue };
        m.swap(row, r);
        for rr in 0..8 {
            if rr != row && m[rr][col] == 1 {
                for c in 0..8 {
                    m[rr][c] ^= m[row][c];
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..8).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fcol| {
            let mut v = [0u8; 8];
            v[fcol] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = m[r][fcol];
            }
            v
        })
        .collect()
}

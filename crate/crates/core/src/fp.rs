//! Prime fields, polynomials over them, and Cantor-Zassenhaus factorisation.
//!
//! Two field representations share one trait: `SmallPrime` (p < 2⁶⁴) and
//! `BigPrime`. Polynomials are coefficient vectors, constant term first,
//! with no trailing zeros.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::arith;

pub trait PrimeField: Clone + Send + Sync + std::fmt::Debug {
    type El: Clone + PartialEq + Eq + Ord + std::fmt::Debug + Send + Sync;

    fn characteristic(&self) -> BigUint;
    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn from_bigint(&self, x: &BigInt) -> Self::El;
    fn from_i64(&self, x: i64) -> Self::El;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn neg(&self, a: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn inv(&self, a: &Self::El) -> Option<Self::El>;
    fn is_zero(&self, a: &Self::El) -> bool;
    fn legendre(&self, a: &Self::El) -> i8;
    fn random(&self, rng: &mut ChaCha8Rng) -> Self::El;
    fn to_biguint(&self, a: &Self::El) -> BigUint;

    fn pow(&self, a: &Self::El, e: &BigUint) -> Self::El {
        let mut r = self.one();
        for i in (0..e.bits()).rev() {
            r = self.mul(&r, &r);
            if e.bit(i) {
                r = self.mul(&r, a);
            }
        }
        r
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SmallPrime {
    pub p: u64,
}

impl PrimeField for SmallPrime {
    type El = u64;

    fn characteristic(&self) -> BigUint {
        BigUint::from(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_bigint(&self, x: &BigInt) -> u64 {
        arith::reduce_bigint(x, self.p)
    }
    fn from_i64(&self, x: i64) -> u64 {
        arith::reduce_i64(x, self.p)
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = *a as u128 + *b as u128;
        (s % self.p as u128) as u64
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        arith::mul_mod(*a, *b, self.p)
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            arith::inv_mod(*a, self.p)
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn legendre(&self, a: &u64) -> i8 {
        arith::jacobi(*a, self.p)
    }
    fn random(&self, rng: &mut ChaCha8Rng) -> u64 {
        rng.random_range(0..self.p)
    }
    fn to_biguint(&self, a: &u64) -> BigUint {
        BigUint::from(*a)
    }
    fn pow(&self, a: &u64, e: &BigUint) -> u64 {
        match e.to_u64() {
            Some(e) => arith::pow_mod(*a, e, self.p),
            None => {
                let mut r = 1 % self.p;
                for i in (0..e.bits()).rev() {
                    r = self.mul(&r, &r);
                    if e.bit(i) {
                        r = self.mul(&r, a);
                    }
                }
                r
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigPrime {
    pub p: BigUint,
}

impl PrimeField for BigPrime {
    type El = BigUint;

    fn characteristic(&self) -> BigUint {
        self.p.clone()
    }
    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn one(&self) -> BigUint {
        BigUint::one()
    }
    fn from_bigint(&self, x: &BigInt) -> BigUint {
        let p = BigInt::from(self.p.clone());
        x.mod_floor(&p).to_biguint().unwrap()
    }
    fn from_i64(&self, x: i64) -> BigUint {
        self.from_bigint(&BigInt::from(x))
    }
    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if s >= self.p {
            s - &self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            &self.p - (b - a)
        }
    }
    fn neg(&self, a: &BigUint) -> BigUint {
        if a.is_zero() {
            BigUint::zero()
        } else {
            &self.p - a
        }
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.p
    }
    fn inv(&self, a: &BigUint) -> Option<BigUint> {
        if a.is_zero() {
            return None;
        }
        let p = BigInt::from(self.p.clone());
        let g = BigInt::from(a.clone()).extended_gcd(&p);
        if !g.gcd.is_one() {
            return None;
        }
        Some(g.x.mod_floor(&p).to_biguint().unwrap())
    }
    fn is_zero(&self, a: &BigUint) -> bool {
        a.is_zero()
    }
    fn legendre(&self, a: &BigUint) -> i8 {
        arith::jacobi_big(&BigInt::from(a.clone()), &self.p)
    }
    fn random(&self, rng: &mut ChaCha8Rng) -> BigUint {
        let bits = self.p.bits();
        let words = bits.div_ceil(32) as usize;
        let top = bits - 32 * (words as u64 - 1);
        loop {
            let mut digits: Vec<u32> = (0..words).map(|_| rng.random::<u32>()).collect();
            if top < 32 {
                digits[words - 1] &= (1u32 << top) - 1;
            }
            let x = BigUint::from_slice(&digits);
            if x < self.p {
                return x;
            }
        }
    }
    fn to_biguint(&self, a: &BigUint) -> BigUint {
        a.clone()
    }
    fn pow(&self, a: &BigUint, e: &BigUint) -> BigUint {
        a.modpow(e, &self.p)
    }
}

pub type Poly<E> = Vec<E>;

pub fn trim<F: PrimeField>(f: &F, mut a: Poly<F::El>) -> Poly<F::El> {
    while a.last().is_some_and(|c| f.is_zero(c)) {
        a.pop();
    }
    a
}

pub fn deg<E>(a: &[E]) -> isize {
    a.len() as isize - 1
}

pub fn add<F: PrimeField>(f: &F, a: &[F::El], b: &[F::El]) -> Poly<F::El> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let r = (0..n)
        .map(|i| f.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trim(f, r)
}

pub fn sub<F: PrimeField>(f: &F, a: &[F::El], b: &[F::El]) -> Poly<F::El> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let r = (0..n)
        .map(|i| f.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trim(f, r)
}

pub fn scale<F: PrimeField>(f: &F, a: &[F::El], c: &F::El) -> Poly<F::El> {
    trim(f, a.iter().map(|x| f.mul(x, c)).collect())
}

pub fn mul<F: PrimeField>(f: &F, a: &[F::El], b: &[F::El]) -> Poly<F::El> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] = f.add(&r[i + j], &f.mul(x, y));
        }
    }
    trim(f, r)
}

/// Division with remainder; `b` must be nonzero.
pub fn divrem<F: PrimeField>(f: &F, a: &[F::El], b: &[F::El]) -> (Poly<F::El>, Poly<F::El>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut r: Vec<F::El> = a.to_vec();
    if a.len() < b.len() {
        return (Vec::new(), trim(f, r));
    }
    let lead_inv = f.inv(b.last().unwrap()).expect("leading coefficient invertible");
    let mut q = vec![f.zero(); a.len() - b.len() + 1];
    for k in (0..q.len()).rev() {
        let c = f.mul(&r[k + b.len() - 1], &lead_inv);
        if f.is_zero(&c) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[k + j] = f.sub(&r[k + j], &f.mul(&c, y));
        }
        q[k] = c;
    }
    r.truncate(b.len() - 1);
    (trim(f, q), trim(f, r))
}

pub fn rem<F: PrimeField>(f: &F, a: &[F::El], b: &[F::El]) -> Poly<F::El> {
    divrem(f, a, b).1
}

pub fn monic<F: PrimeField>(f: &F, a: &[F::El]) -> Poly<F::El> {
    match a.last() {
        None => Vec::new(),
        Some(l) => {
            let li = f.inv(l).unwrap();
            scale(f, a, &li)
        }
    }
}

pub fn gcd<F: PrimeField>(f: &F, a: &[F::El], b: &[F::El]) -> Poly<F::El> {
    let mut a = trim(f, a.to_vec());
    let mut b = trim(f, b.to_vec());
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    monic(f, &a)
}

pub fn mulmod<F: PrimeField>(f: &F, a: &[F::El], b: &[F::El], m: &[F::El]) -> Poly<F::El> {
    rem(f, &mul(f, a, b), m)
}

pub fn powmod<F: PrimeField>(f: &F, a: &[F::El], e: &BigUint, m: &[F::El]) -> Poly<F::El> {
    let mut r = rem(f, &[f.one()], m);
    let base = rem(f, a, m);
    for i in (0..e.bits()).rev() {
        r = mulmod(f, &r, &r, m);
        if e.bit(i) {
            r = mulmod(f, &r, &base, m);
        }
    }
    r
}

pub fn eval<F: PrimeField>(f: &F, a: &[F::El], x: &F::El) -> F::El {
    let mut r = f.zero();
    for c in a.iter().rev() {
        r = f.add(&f.mul(&r, x), c);
    }
    r
}

fn x_poly<F: PrimeField>(f: &F) -> Poly<F::El> {
    vec![f.zero(), f.one()]
}

/// Distinct-degree factorisation of a monic squarefree polynomial:
/// pairs (d, product of all irreducible factors of degree d).
pub fn distinct_degree<F: PrimeField>(f: &F, poly: &[F::El]) -> Vec<(usize, Poly<F::El>)> {
    let p = f.characteristic();
    let mut out = Vec::new();
    let mut rest = monic(f, poly);
    let mut h = x_poly(f);
    let mut d = 0;
    while deg(&rest) >= 2 * (d as isize + 1) {
        d += 1;
        h = powmod(f, &h, &p, &rest);
        let g = gcd(f, &sub(f, &h, &x_poly(f)), &rest);
        if deg(&g) > 0 {
            rest = divrem(f, &rest, &g).0;
            h = rem(f, &h, &rest);
            out.push((d, g));
        }
    }
    if deg(&rest) > 0 {
        out.push((deg(&rest) as usize, rest));
    }
    out
}

/// Equal-degree splitting of a product of distinct monic irreducibles of degree d (odd p).
pub fn equal_degree<F: PrimeField>(f: &F, poly: &[F::El], d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly<F::El>> {
    let n = deg(poly) as usize;
    if n == d {
        return vec![monic(f, poly)];
    }
    let p = f.characteristic();
    let e = (p.pow(d as u32) - 1u32) >> 1;
    loop {
        let a: Poly<F::El> = trim(f, (0..n).map(|_| f.random(rng)).collect());
        if deg(&a) < 1 {
            continue;
        }
        let g0 = gcd(f, &a, poly);
        let g = if deg(&g0) > 0 {
            g0
        } else {
            let b = powmod(f, &a, &e, poly);
            gcd(f, &sub(f, &b, &[f.one()]), poly)
        };
        if deg(&g) > 0 && deg(&g) < n as isize {
            let h = divrem(f, poly, &g).0;
            let mut out = equal_degree(f, &g, d, rng);
            out.extend(equal_degree(f, &h, d, rng));
            return out;
        }
    }
}

/// Monic irreducible factors of a squarefree polynomial over an odd prime field,
/// sorted by (degree, coefficients).
pub fn factor_squarefree<F: PrimeField>(f: &F, poly: &[F::El], rng: &mut ChaCha8Rng) -> Vec<Poly<F::El>> {
    let mut out = Vec::new();
    for (d, g) in distinct_degree(f, poly) {
        out.extend(equal_degree(f, &g, d, rng));
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Arithmetic in F_p[x]/(g) for an irreducible monic g.
#[derive(Clone, Debug)]
pub struct ExtField<F: PrimeField> {
    pub base: F,
    pub modulus: Poly<F::El>,
    order_half: BigUint,
}

impl<F: PrimeField> ExtField<F> {
    pub fn new(base: F, modulus: Poly<F::El>) -> Self {
        let d = deg(&modulus) as u32;
        let q = base.characteristic().pow(d);
        ExtField { base, modulus, order_half: (q - 1u32) >> 1 }
    }

    pub fn degree(&self) -> usize {
        deg(&self.modulus) as usize
    }

    pub fn reduce(&self, a: &[F::El]) -> Poly<F::El> {
        rem(&self.base, a, &self.modulus)
    }

    pub fn mul(&self, a: &[F::El], b: &[F::El]) -> Poly<F::El> {
        mulmod(&self.base, a, b, &self.modulus)
    }

    /// Quadratic character: a^((q-1)/2) ∈ {0, 1, -1}.
    pub fn legendre(&self, a: &[F::El]) -> i8 {
        if a.is_empty() {
            return 0;
        }
        if self.degree() == 1 {
            return self.base.legendre(&a[0]);
        }
        let r = powmod(&self.base, a, &self.order_half, &self.modulus);
        if r.len() == 1 && r[0] == self.base.one() {
            1
        } else {
            debug_assert!(r.len() == 1 && r[0] == self.base.neg(&self.base.one()));
            -1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn brute_roots(p: u64, poly: &[u64]) -> Vec<u64> {
        let f = SmallPrime { p };
        (0..p).filter(|x| eval(&f, poly, x) == 0).collect()
    }

    #[test]
    fn divrem_identity() {
        let f = SmallPrime { p: 101 };
        let a = vec![3, 0, 7, 1, 9, 4];
        let b = vec![5, 1, 2];
        let (q, r) = divrem(&f, &a, &b);
        assert_eq!(add(&f, &mul(&f, &q, &b), &r), a);
        assert!(r.len() < b.len());
    }

    #[test]
    fn min_poly_factorisations() {
        let mp: [i64; 9] = [1, 0, -4, 0, 22, 0, -4, 0, 1];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in arith::primes_up_to(2000).into_iter().skip(1) {
            let f = SmallPrime { p };
            let poly: Vec<u64> = trim(&f, mp.iter().map(|&c| f.from_i64(c)).collect());
            let facs = factor_squarefree(&f, &poly, &mut rng);
            let mut prod = vec![1];
            for g in &facs {
                prod = mul(&f, &prod, g);
            }
            assert_eq!(prod, poly);
            let lin: Vec<u64> = facs.iter().filter(|g| g.len() == 2).map(|g| f.neg(&g[0])).collect();
            let mut lin_sorted = lin.clone();
            lin_sorted.sort();
            assert_eq!(lin_sorted, brute_roots(p, &poly));
            let d0 = facs[0].len();
            assert!(facs.iter().all(|g| g.len() == d0), "Galois: equal degrees at p={p}");
        }
    }

    #[test]
    fn big_field_roots() {
        let p: BigUint = (BigUint::one() << 127u32) - 1u32;
        let f = BigPrime { p: p.clone() };
        let r1 = BigUint::from(123456789u64);
        let r2 = &p - BigUint::from(42u32);
        let poly = mul(&f, &[f.neg(&r1), f.one()], &[f.neg(&r2), f.one()]);
        let poly = mul(&f, &poly, &[f.one(), f.zero(), f.one()]);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let facs = factor_squarefree(&f, &poly, &mut rng);
        let roots: Vec<BigUint> = facs.iter().filter(|g| g.len() == 2).map(|g| f.neg(&g[0])).collect();
        assert!(roots.contains(&r1) && roots.contains(&r2));
    }

    #[test]
    fn extension_legendre_counts() {
        let f = SmallPrime { p: 7 };
        let ext = ExtField::new(f, vec![1, 0, 1]);
        let mut counts = [0i32; 3];
        for a in 0..7u64 {
            for b in 0..7u64 {
                let el = trim(&f, vec![a, b]);
                counts[(ext.legendre(&el) + 1) as usize] += 1;
            }
        }
        assert_eq!(counts, [24, 1, 24]);
        // elements of F_7 are squares in F_49
        for a in 1..7u64 {
            assert_eq!(ext.legendre(&[a]), 1);
        }
    }
}

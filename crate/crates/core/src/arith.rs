//! Rational-integer helpers: modular arithmetic, sieves, primality and factorisation.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Trial division reaches this bound before rho takes over.
pub const TRIAL_BOUND: u32 = 1_000_000;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Reduce a signed integer into `[0, m)`.
#[inline]
pub fn reduce_i64(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

pub fn reduce_bigint(a: &BigInt, m: u64) -> u64 {
    let r = (a.magnitude() % m).to_u64().unwrap();
    if a.sign() == Sign::Minus && r != 0 {
        m - r
    } else {
        r
    }
}

/// Jacobi symbol (a/n) for odd positive n.
pub fn jacobi(mut a: u64, mut n: u64) -> i8 {
    debug_assert!(n & 1 == 1);
    a %= n;
    let mut t = 1i8;
    while a != 0 {
        let z = a.trailing_zeros();
        a >>= z;
        if z & 1 == 1 && (n & 7 == 3 || n & 7 == 5) {
            t = -t;
        }
        if a & 3 == 3 && n & 3 == 3 {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

pub fn jacobi_i64(a: i64, n: u64) -> i8 {
    jacobi(reduce_i64(a, n), n)
}

/// Jacobi symbol (a/n) for odd positive n of any size.
pub fn jacobi_big(a: &BigInt, n: &BigUint) -> i8 {
    assert!(n.is_odd(), "Jacobi symbol needs an odd modulus");
    let mut n = n.clone();
    let mut a = {
        let r = a.magnitude() % &n;
        if a.sign() == Sign::Minus && !r.is_zero() {
            &n - r
        } else {
            r
        }
    };
    let mut t = 1i8;
    while !a.is_zero() {
        let z = a.trailing_zeros().unwrap_or(0);
        a >>= z;
        let n8 = (&n % 8u32).to_u32().unwrap();
        if z & 1 == 1 && (n8 == 3 || n8 == 5) {
            t = -t;
        }
        if (&a % 4u32).to_u32().unwrap() == 3 && n8 & 3 == 3 {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        a %= &n;
    }
    if n.is_one() {
        t
    } else {
        0
    }
}

/// Square root of `a` modulo an odd prime `p` (Tonelli-Shanks).
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p & 3 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Sieve of Eratosthenes: `flags[n]` is true iff n is prime, for n ≤ limit.
pub fn prime_flags(limit: usize) -> Vec<bool> {
    let mut f = vec![true; limit + 1];
    f[0] = false;
    if limit >= 1 {
        f[1] = false;
    }
    let mut i = 2;
    while i * i <= limit {
        if f[i] {
            let mut j = i * i;
            while j <= limit {
                f[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    f
}

pub fn primes_up_to(limit: u64) -> Vec<u64> {
    prime_flags(limit as usize)
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i as u64))
        .collect()
}

/// Smallest-prime-factor table for n ≤ limit (spf[0] = spf[1] = 0).
pub fn spf_table(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    for i in 2..=limit {
        if spf[i] == 0 {
            let mut j = i;
            while j <= limit {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

fn small_primes() -> &'static [u32] {
    static P: OnceLock<Vec<u32>> = OnceLock::new();
    P.get_or_init(|| {
        primes_up_to(TRIAL_BOUND as u64)
            .into_iter()
            .map(|p| p as u32)
            .collect()
    })
}

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin with fixed bases; exact below 3.3e24, overwhelmingly reliable beyond.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    for &p in small_primes().iter().take(200) {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap();
    let d = &nm1 >> s;
    let bases = [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71];
    'outer: for &a in &bases {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

#[derive(Clone, Copy, Debug)]
pub struct FactorBudget {
    /// Total Pollard-Brent iterations allowed across all cofactors.
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget { rho_iterations: 20_000_000 }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorError {
    #[error("factorisation budget exhausted on composite cofactor {0}")]
    Budget(BigUint),
}

/// Full factorisation n = ∏ pᵉ, primes ascending. n = 1 gives the empty list.
pub fn factor(n: &BigUint, budget: &FactorBudget) -> Result<Vec<(BigUint, u32)>, FactorError> {
    assert!(!n.is_zero(), "factor(0)");
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    let mut m = n.clone();
    for &p in small_primes() {
        if let Some(v) = m.to_u64() {
            if (p as u64) * (p as u64) > v {
                break;
            }
        }
        if (&m % p).is_zero() {
            let mut e = 0;
            while (&m % p).is_zero() {
                m /= p;
                e += 1;
            }
            out.push((BigUint::from(p), e));
        }
    }
    if m.is_one() {
        return Ok(out);
    }
    let mut left = budget.rho_iterations;
    let mut stack = vec![m];
    let mut large: Vec<BigUint> = Vec::new();
    while let Some(c) = stack.pop() {
        if c.is_one() {
            continue;
        }
        if is_probable_prime(&c) {
            large.push(c);
            continue;
        }
        let d = match c.to_u64() {
            Some(v) => rho_u64(v, &mut left).map(BigUint::from),
            None => rho_big(&c, &mut left),
        };
        match d {
            Some(d) => {
                let q = &c / &d;
                stack.push(d);
                stack.push(q);
            }
            None => return Err(FactorError::Budget(c)),
        }
    }
    large.sort();
    for q in large {
        match out.last_mut() {
            Some((p, e)) if *p == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    factor(&BigUint::from(n), &FactorBudget::default())
        .expect("64-bit inputs always factor within budget")
        .into_iter()
        .map(|(p, e)| (p.to_u64().unwrap(), e))
        .collect()
}

fn rho_u64(n: u64, left: &mut u64) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, m) = (2u64, 128u64);
        let (mut g, mut r, mut q) = (1u64, 1u64, 1u64);
        let (mut x, mut ys) = (0u64, 0u64);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let lim = m.min(r - k);
                for _ in 0..lim {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                if *left < lim {
                    return None;
                }
                *left -= lim;
                g = q.gcd(&n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Some(g);
        }
        if c > 64 {
            return None;
        }
    }
    None
}

fn rho_big(n: &BigUint, left: &mut u64) -> Option<BigUint> {
    let one = BigUint::one();
    for c in 1u32..=64 {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let m = 128u64;
        let mut y = BigUint::from(2u32);
        let (mut g, mut r, mut q) = (one.clone(), 1u64, one.clone());
        let (mut x, mut ys) = (BigUint::zero(), BigUint::zero());
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let lim = m.min(r - k);
                for _ in 0..lim {
                    y = f(&y);
                    let d = if x > y { &x - &y } else { &y - &x };
                    q = (&q * d) % n;
                }
                if *left < lim {
                    return None;
                }
                *left -= lim;
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let d = if x > ys { &x - &ys } else { &ys - &x };
                g = d.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    None
}

/// Squarefree flags on [lo, hi].
pub fn squarefree_flags(lo: u64, hi: u64) -> Vec<bool> {
    let mut f = vec![true; (hi - lo + 1) as usize];
    let mut d = 2u64;
    while d * d <= hi {
        let s = d * d;
        let mut k = lo.div_ceil(s) * s;
        while k <= hi {
            f[(k - lo) as usize] = false;
            k += s;
        }
        d += 1;
    }
    f
}

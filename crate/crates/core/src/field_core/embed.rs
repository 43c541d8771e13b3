//! Complex embeddings as fixed-point balls.
//!
//! A value is (re + i·im)/2^prec with an absolute error at most rad/2^prec.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::element::OMElement;

pub const DEFAULT_PRECISION: u32 = 128;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexBall {
    pub re: BigInt,
    pub im: BigInt,
    pub prec: u32,
    pub rad: BigUint,
}

/// Round x / 2^k to nearest.
pub(crate) fn shr_round(x: &BigInt, k: u32) -> BigInt {
    if k == 0 {
        return x.clone();
    }
    let half = BigInt::one() << (k - 1);
    if x.sign() == Sign::Minus {
        -((-x + &half) >> k)
    } else {
        (x + &half) >> k
    }
}

/// Natural log of a positive big integer.
pub fn ln_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        if let Some(v) = n.to_f64() {
            if v.is_finite() {
                return v.ln();
            }
        }
    }
    let shift = bits.saturating_sub(64);
    (n >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

impl ComplexBall {
    pub fn exact_int(n: &BigInt, prec: u32) -> Self {
        ComplexBall { re: n << prec, im: BigInt::zero(), prec, rad: BigUint::zero() }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        let s = 2f64.powi(-(self.prec as i32));
        (big_to_f64(&self.re) * s, big_to_f64(&self.im) * s)
    }

    pub fn abs_f64(&self) -> f64 {
        let (a, b) = self.to_f64();
        a.hypot(b)
    }

    /// |re| + |im| in ulps: an upper bound for 2^prec·|z|.
    fn l1(&self) -> BigUint {
        self.re.magnitude() + self.im.magnitude()
    }

    pub fn mul(&self, o: &ComplexBall) -> ComplexBall {
        assert_eq!(self.prec, o.prec);
        let p = self.prec;
        let re = shr_round(&(&self.re * &o.re - &self.im * &o.im), p);
        let im = shr_round(&(&self.re * &o.im + &self.im * &o.re), p);
        let cross = (self.l1() * &o.rad + o.l1() * &self.rad + &self.rad * &o.rad) >> p;
        ComplexBall { re, im, prec: p, rad: cross + 2u32 }
    }

    /// Certainly nonzero: one component exceeds the error radius.
    pub fn certified_nonzero(&self) -> bool {
        self.re.magnitude() > &self.rad || self.im.magnitude() > &self.rad
    }

    /// The ball contains the integer n (as a complex number with zero imaginary part).
    pub fn contains_integer(&self, n: &BigInt) -> bool {
        let d = (&self.re - (n << self.prec)).abs();
        d.magnitude() <= &self.rad && self.im.magnitude() <= &self.rad
    }

    /// Relative accuracy: |z| is at least 2^bits times the radius.
    pub fn has_relative_bits(&self, bits: u32) -> bool {
        let big = self.re.magnitude().max(self.im.magnitude()).clone();
        big > (&self.rad << bits)
    }

    /// ln |z|², with z assumed nonzero.
    pub fn ln_abs2(&self) -> f64 {
        let n2 = (&self.re * &self.re + &self.im * &self.im).to_biguint().unwrap();
        ln_big(&n2) - 2.0 * self.prec as f64 * std::f64::consts::LN_2
    }
}

pub(crate) fn big_to_f64(x: &BigInt) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    match x.to_f64() {
        Some(v) if v.is_finite() => v,
        _ => {
            if x.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        }
    }
}

/// Values of the 8 basis elements under the 8 embeddings at one precision.
#[derive(Clone, Debug)]
pub struct EmbeddingTable {
    pub prec: u32,
    /// vals[i][k] = (re, im) of the k-th embedding of basis element i.
    pub vals: Vec<Vec<(BigInt, BigInt)>>,
    /// Error bound per entry, in ulps.
    pub err: BigUint,
}

impl EmbeddingTable {
    pub fn parse_decimal(values: &[Vec<[String; 2]>], digits: u32, prec: u32) -> Result<Self, String> {
        let pow10 = BigInt::from(10u32).pow(digits);
        let parse = |s: &str| -> Result<BigInt, String> {
            let (neg, body) = match s.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, s),
            };
            let (ip, fp) = body.split_once('.').ok_or_else(|| format!("bad decimal {s}"))?;
            if fp.len() != digits as usize {
                return Err(format!("decimal {s} does not carry {digits} digits"));
            }
            let n: BigInt = format!("{ip}{fp}").parse().map_err(|_| format!("bad decimal {s}"))?;
            let scaled = (n << (prec + 1)) / &pow10;
            let v: BigInt = (scaled + 1) >> 1;
            Ok(if neg { -v } else { v })
        };
        let mut vals = Vec::with_capacity(values.len());
        for row in values {
            let mut r = Vec::with_capacity(row.len());
            for [re, im] in row {
                r.push((parse(re)?, parse(im)?));
            }
            vals.push(r);
        }
        Ok(EmbeddingTable { prec, vals, err: BigUint::from(2u32) })
    }

    /// Rounded copy at a lower precision.
    pub fn truncate(&self, prec: u32) -> EmbeddingTable {
        assert!(prec <= self.prec);
        let k = self.prec - prec;
        let vals = self
            .vals
            .iter()
            .map(|row| row.iter().map(|(a, b)| (shr_round(a, k), shr_round(b, k))).collect())
            .collect();
        let err = (&self.err >> k) + 1u32;
        EmbeddingTable { prec, vals, err }
    }

    /// Embedding `k` (0-based) of x.
    pub fn eval(&self, x: &OMElement, k: usize) -> ComplexBall {
        let mut re = BigInt::zero();
        let mut im = BigInt::zero();
        let mut l1 = BigUint::zero();
        for (i, c) in x.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (a, b) = &self.vals[i][k];
            re += c * a;
            im += c * b;
            l1 += c.magnitude();
        }
        ComplexBall { re, im, prec: self.prec, rad: l1 * &self.err }
    }

    pub fn to_f64(&self) -> [[(f64, f64); 8]; 8] {
        let s = 2f64.powi(-(self.prec as i32));
        let mut out = [[(0.0, 0.0); 8]; 8];
        for i in 0..8 {
            for k in 0..8 {
                let (a, b) = &self.vals[i][k];
                out[i][k] = (big_to_f64(a) * s, big_to_f64(b) * s);
            }
        }
        out
    }
}

/// Fixed-point complex arithmetic on (re, im) pairs at a shared precision.
fn cmul(a: &(BigInt, BigInt), b: &(BigInt, BigInt), p: u32) -> (BigInt, BigInt) {
    (
        shr_round(&(&a.0 * &b.0 - &a.1 * &b.1), p),
        shr_round(&(&a.0 * &b.1 + &a.1 * &b.0), p),
    )
}

fn cdiv(a: &(BigInt, BigInt), b: &(BigInt, BigInt), p: u32) -> (BigInt, BigInt) {
    let den = &b.0 * &b.0 + &b.1 * &b.1;
    let re = &a.0 * &b.0 + &a.1 * &b.1;
    let im = &a.1 * &b.0 - &a.0 * &b.1;
    ((re << p) / &den, (im << p) / &den)
}

/// Refine the roots of a monic integer polynomial by Newton's method.
///
/// `seeds` are approximations at precision `seed_prec`; the result is at `prec`
/// with the final Newton step size (in ulps) as error estimate.
pub(crate) fn newton_roots(
    poly: &[i64],
    seeds: &[(BigInt, BigInt)],
    seed_prec: u32,
    prec: u32,
) -> (Vec<(BigInt, BigInt)>, BigUint) {
    let guard = 32;
    let wp = prec + guard;
    let mut worst = BigUint::zero();
    let roots = seeds
        .iter()
        .map(|s| {
            let mut z = (&s.0 << (wp - seed_prec), &s.1 << (wp - seed_prec));
            let mut step_size = BigUint::one() << wp;
            let mut iters = 0;
            while step_size > BigUint::from(16u32) || iters < 2 {
                let mut f = (BigInt::zero(), BigInt::zero());
                let mut df = (BigInt::zero(), BigInt::zero());
                for &c in poly.iter().rev() {
                    df = cmul(&df, &z, wp);
                    df.0 += &f.0;
                    df.1 += &f.1;
                    f = cmul(&f, &z, wp);
                    f.0 += BigInt::from(c) << wp;
                }
                let step = cdiv(&f, &df, wp);
                z.0 -= &step.0;
                z.1 -= &step.1;
                step_size = step.0.magnitude() + step.1.magnitude();
                iters += 1;
                assert!(iters < 64, "Newton refinement failed to converge");
            }
            let e = (&step_size >> guard) + 2u32;
            if e > worst {
                worst = e.clone();
            }
            (shr_round(&z.0, guard), shr_round(&z.1, guard))
        })
        .collect();
    (roots, worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_shift() {
        assert_eq!(shr_round(&BigInt::from(5), 1), BigInt::from(3));
        assert_eq!(shr_round(&BigInt::from(-5), 1), BigInt::from(-3));
        assert_eq!(shr_round(&BigInt::from(4), 1), BigInt::from(2));
    }

    #[test]
    fn newton_sqrt2() {
        let p = 200;
        let seed = (BigInt::from(362u32) << 0, BigInt::zero());
        let (r, err) = newton_roots(&[-2, 0, 1], &[seed], 8, p);
        let sq = cmul(&r[0], &r[0], p);
        let two = BigInt::from(2) << p;
        assert!((&sq.0 - two).magnitude() <= &(&err * 4u32 + 4u32));
    }

    #[test]
    fn ln_of_big() {
        let n = BigUint::from(10u32).pow(400);
        assert!((ln_big(&n) - 400.0 * 10f64.ln()).abs() < 1e-9);
    }
}

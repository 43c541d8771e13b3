//! Generator recovery for principal ideals: LLL on the Minkowski image of
//! the HNF basis, followed by Fincke–Pohst enumeration of short vectors.
//!
//! Lattice coordinates are exact i128; Gram–Schmidt data is f64 and is only
//! used to steer the search. Every candidate is confirmed by an exact norm.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use super::ideal::OMIdeal;
use super::IdealError;
use crate::field_core::{FieldConstants, OMElement};

pub const LLL_DELTA: f64 = 0.99;
/// Number of radius doublings tried after the reduced basis itself.
pub const RADIUS_DOUBLINGS: u32 = 6;
const NODE_BUDGET: u64 = 5_000_000;

type Vec8 = [i128; 8];
type Emb = [[(f64, f64); 8]; 8];

/// Minkowski image: (√2·Re σ_{2j}, √2·Im σ_{2j}) for the four conjugate pairs.
fn minkowski(e: &Emb, c: &Vec8) -> [f64; 8] {
    let mut out = [0.0; 8];
    for j in 0..4 {
        let (mut re, mut im) = (0.0, 0.0);
        for i in 0..8 {
            let x = c[i] as f64;
            re += x * e[i][2 * j].0;
            im += x * e[i][2 * j].1;
        }
        out[2 * j] = re * std::f64::consts::SQRT_2;
        out[2 * j + 1] = im * std::f64::consts::SQRT_2;
    }
    out
}

fn dot(a: &[f64; 8], b: &[f64; 8]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gso(m: &[[f64; 8]; 8]) -> ([[f64; 8]; 8], [f64; 8]) {
    let mut mu = [[0.0; 8]; 8];
    let mut bs = [[0.0; 8]; 8];
    let mut bn = [0.0; 8];
    for i in 0..8 {
        let mut v = m[i];
        for j in 0..i {
            mu[i][j] = dot(&m[i], &bs[j]) / bn[j];
            for t in 0..8 {
                v[t] -= mu[i][j] * bs[j][t];
            }
        }
        bn[i] = dot(&v, &v);
        bs[i] = v;
    }
    (mu, bn)
}

fn axpy(b: &mut Vec8, q: i128, a: &Vec8) -> Result<(), IdealError> {
    for t in 0..8 {
        b[t] = q
            .checked_mul(a[t])
            .and_then(|x| b[t].checked_sub(x))
            .ok_or(IdealError::TooLarge)?;
    }
    Ok(())
}

/// LLL-reduce the rows of `b` with respect to the Minkowski inner product.
pub fn lll(e: &Emb, b: &mut [Vec8; 8], delta: f64) -> Result<(), IdealError> {
    let mut m: [[f64; 8]; 8] = std::array::from_fn(|i| minkowski(e, &b[i]));
    let mut k = 1;
    let mut steps = 0u32;
    while k < 8 {
        steps += 1;
        if steps > 200_000 {
            return Err(IdealError::Internal("LLL did not terminate".into()));
        }
        // Size reduction, repeated while float rounding leaves large μ.
        for _ in 0..8 {
            let (mut mu, _) = gso(&m);
            let mut changed = false;
            for j in (0..k).rev() {
                let q = mu[k][j].round();
                if q != 0.0 {
                    let (head, tail) = b.split_at_mut(k);
                    axpy(&mut tail[0], q as i128, &head[j])?;
                    for l in 0..j {
                        mu[k][l] -= q * mu[j][l];
                    }
                    mu[k][j] -= q;
                    changed = true;
                }
            }
            m[k] = minkowski(e, &b[k]);
            if !changed {
                break;
            }
        }
        let (mu, bn) = gso(&m);
        if bn[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * bn[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            m.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    Ok(())
}

fn approx_norm(v: &[f64; 8]) -> f64 {
    (0..4).map(|j| (v[2 * j] * v[2 * j] + v[2 * j + 1] * v[2 * j + 1]) / 2.0).product()
}

struct Enum<'a> {
    mu: &'a [[f64; 8]; 8],
    bn: &'a [f64; 8],
    radius: f64,
    x: [i64; 8],
    out: Vec<[i64; 8]>,
    nodes: u64,
}

impl Enum<'_> {
    fn rec(&mut self, i: usize, partial: f64, top_zero: bool) -> Result<(), ()> {
        self.nodes += 1;
        if self.nodes > NODE_BUDGET {
            return Err(());
        }
        let c: f64 = -(i + 1..8).map(|j| self.mu[j][i] * self.x[j] as f64).sum::<f64>();
        let rem = self.radius - partial;
        if rem < 0.0 {
            return Ok(());
        }
        let r = (rem / self.bn[i]).sqrt();
        let mut lo = (c - r).ceil() as i64;
        let hi = (c + r).floor() as i64;
        if top_zero {
            lo = lo.max(0);
        }
        for xi in lo..=hi {
            let d = xi as f64 - c;
            let l = partial + self.bn[i] * d * d;
            if l > self.radius {
                continue;
            }
            self.x[i] = xi;
            if i == 0 {
                if self.x.iter().any(|&t| t != 0) {
                    self.out.push(self.x);
                }
            } else {
                self.rec(i - 1, l, top_zero && xi == 0)?;
            }
        }
        self.x[i] = 0;
        Ok(())
    }
}

fn to_element(v: &Vec8) -> OMElement {
    OMElement { coords: v.map(BigInt::from) }
}

/// An element generating `ideal`. O_M is a PID, so failure indicates a bug.
pub fn find_generator(fc: &FieldConstants, ideal: &OMIdeal) -> Result<OMElement, IdealError> {
    if ideal.is_unit() {
        return Ok(fc.one.clone());
    }
    let n = ideal.norm().clone();
    let nf = n.to_f64().unwrap_or(f64::INFINITY);
    let mut b: [Vec8; 8] = [[0; 8]; 8];
    for (j, col) in ideal.hnf().iter().enumerate() {
        for i in 0..8 {
            b[j][i] = col[i].to_i128().ok_or(IdealError::TooLarge)?;
        }
    }
    let e = fc.embeddings_f64();
    lll(e, &mut b, LLL_DELTA)?;
    let is_generator = |v: &Vec8, approx: f64| -> bool {
        ((approx / nf) - 1.0).abs() < 1e-6 && {
            let x = to_element(v);
            fc.norm(&x).abs() == n
        }
    };
    let m: [[f64; 8]; 8] = std::array::from_fn(|i| minkowski(e, &b[i]));
    for (v, mv) in b.iter().zip(&m) {
        if is_generator(v, approx_norm(mv)) {
            return Ok(to_element(v));
        }
    }
    let (mu, bn) = gso(&m);
    let base = m.iter().map(|v| dot(v, v)).fold(f64::INFINITY, f64::min);
    let mut tried = 0usize;
    for s in 0..=RADIUS_DOUBLINGS {
        let radius = base * (1u64 << s) as f64 * (1.0 + 1e-9);
        let mut en = Enum { mu: &mu, bn: &bn, radius, x: [0; 8], out: Vec::new(), nodes: 0 };
        if en.rec(7, 0.0, true).is_err() {
            break;
        }
        let mut cands: Vec<(f64, Vec8, [f64; 8])> = en
            .out
            .iter()
            .map(|x| {
                let mut v = [0i128; 8];
                let mut mv = [0.0; 8];
                for i in 0..8 {
                    if x[i] != 0 {
                        for t in 0..8 {
                            v[t] += x[i] as i128 * b[i][t];
                            mv[t] += x[i] as f64 * m[i][t];
                        }
                    }
                }
                (dot(&mv, &mv), v, mv)
            })
            .collect();
        cands.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        tried = cands.len();
        for (_, v, mv) in &cands {
            if is_generator(v, approx_norm(mv)) {
                return Ok(to_element(v));
            }
        }
    }
    Err(IdealError::GeneratorNotFound {
        norm: n,
        diagnostics: format!(
            "LLL basis T2 lengths {:?}; {tried} enumerated candidates at final radius",
            m.iter().map(|v| dot(v, v)).collect::<Vec<_>>()
        ),
    })
}

/// True when `g` generates `ideal` (membership plus equal norm).
pub fn generates(fc: &FieldConstants, g: &OMElement, ideal: &OMIdeal) -> bool {
    !g.is_zero() && ideal.contains(g) && fc.norm(g).abs() == *ideal.norm()
}

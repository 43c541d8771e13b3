//! Exact arithmetic in O_M, M = Q(ζ₈, √(1+i)): the ring of integers in a fixed
//! integral basis, the dihedral Galois action and certified complex embeddings.

mod constants;
pub mod element;
pub mod embed;
pub mod galois;

use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

pub use constants::{load_constants, ConstantsError, BUILTIN_CONSTANTS};
pub use element::{om_add, om_neg, om_sub, OMElement};
pub use embed::{ln_big, ComplexBall, EmbeddingTable, DEFAULT_PRECISION};
pub use galois::GaloisElement;

use crate::linalg::det_bareiss;

pub type Mat8 = [[i64; 8]; 8];

/// The frozen description of O_M together with tables derived from it at load time.
#[derive(Debug)]
pub struct FieldConstants {
    pub min_poly: [i64; 9],
    /// mult_tensor[i][j][k]: k-th coordinate of ηᵢηⱼ.
    pub mult_tensor: [[[i64; 8]; 8]; 8],
    /// Row-major; column j holds the coordinates of r(ηⱼ).
    pub galois_r: Mat8,
    pub galois_s: Mat8,
    pub zeta8: OMElement,
    pub gen_i: OMElement,
    pub sqrt_1pi: OMElement,
    pub one: OMElement,
    pub theta: OMElement,
    pub fund_units: [OMElement; 3],
    pub disc: BigInt,
    pub galois_images: BTreeMap<String, String>,
    /// SHA-256 of the constants file bytes, hex.
    pub hash: String,
    pub(crate) sparse: Vec<Vec<Vec<(usize, i64)>>>,
    pub(crate) galois_mats: [Mat8; 8],
    pub(crate) traces: [i64; 8],
    /// ηᵢ = Σⱼ theta_inv_num[j][i]·θʲ / theta_inv_den.
    pub(crate) theta_inv_num: [[BigInt; 8]; 8],
    pub(crate) theta_inv_den: BigInt,
    stored: EmbeddingTable,
    tables: RwLock<BTreeMap<u32, Arc<EmbeddingTable>>>,
    pub(crate) emb_f64: [[(f64, f64); 8]; 8],
}

pub(crate) fn mat_mul(a: &Mat8, b: &Mat8) -> Mat8 {
    let mut c = [[0i64; 8]; 8];
    for i in 0..8 {
        for k in 0..8 {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..8 {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

pub(crate) const IDENTITY: Mat8 = {
    let mut m = [[0i64; 8]; 8];
    let mut i = 0;
    while i < 8 {
        m[i][i] = 1;
        i += 1;
    }
    m
};

impl FieldConstants {
    /// The constants shipped with the crate.
    pub fn builtin() -> Arc<FieldConstants> {
        static FC: std::sync::OnceLock<Arc<FieldConstants>> = std::sync::OnceLock::new();
        FC.get_or_init(|| {
            Arc::new(constants::parse_constants(BUILTIN_CONSTANTS.as_bytes()).expect("shipped constants are valid"))
        })
        .clone()
    }

    pub fn mul(&self, x: &OMElement, y: &OMElement) -> OMElement {
        let mut out = OMElement::zero();
        for (i, a) in x.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for &(k, c) in &self.sparse[i][j] {
                    out.coords[k] += &ab * c;
                }
            }
        }
        out
    }

    pub fn pow(&self, x: &OMElement, mut e: u64) -> OMElement {
        let mut r = self.one.clone();
        let mut b = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        r
    }

    pub fn product<'a>(&self, xs: impl IntoIterator<Item = &'a OMElement>) -> OMElement {
        xs.into_iter().fold(self.one.clone(), |acc, x| self.mul(&acc, x))
    }

    /// Matrix of multiplication by x: column j holds the coordinates of x·ηⱼ.
    pub fn mult_matrix(&self, x: &OMElement) -> Vec<Vec<BigInt>> {
        let mut m = vec![vec![BigInt::zero(); 8]; 8];
        for (i, a) in x.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for j in 0..8 {
                for &(k, c) in &self.sparse[i][j] {
                    m[k][j] += a * c;
                }
            }
        }
        m
    }

    /// Absolute norm, as the determinant of multiplication by x.
    pub fn norm(&self, x: &OMElement) -> BigInt {
        det_bareiss(self.mult_matrix(x))
    }

    pub fn trace(&self, x: &OMElement) -> BigInt {
        x.coords.iter().zip(&self.traces).map(|(c, &t)| c * t).sum()
    }

    pub fn galois_matrix(&self, g: GaloisElement) -> &Mat8 {
        &self.galois_mats[g.index()]
    }

    pub fn galois_apply(&self, g: GaloisElement, x: &OMElement) -> OMElement {
        let m = self.galois_matrix(g);
        let mut out = OMElement::zero();
        for (i, row) in m.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if c != 0 && !x.coords[j].is_zero() {
                    out.coords[i] += &x.coords[j] * c;
                }
            }
        }
        out
    }

    /// Embedding table at the given precision, computing and caching it on first use.
    pub fn embedding_table(&self, prec: u32) -> Arc<EmbeddingTable> {
        if let Some(t) = self.tables.read().unwrap().get(&prec) {
            return t.clone();
        }
        let t = Arc::new(if prec <= self.stored.prec {
            self.stored.truncate(prec)
        } else {
            self.refined_table(prec)
        });
        self.tables.write().unwrap().insert(prec, t.clone());
        t
    }

    fn refined_table(&self, prec: u32) -> EmbeddingTable {
        let guard = 16;
        let wp = prec + guard;
        let seeds: Vec<(BigInt, BigInt)> = (0..8).map(|k| {
            let b = self.stored.eval(&self.theta, k);
            (b.re, b.im)
        }).collect();
        let (roots, err) = embed::newton_roots(&self.min_poly, &seeds, self.stored.prec, wp);
        let mut vals = vec![vec![(BigInt::zero(), BigInt::zero()); 8]; 8];
        for (k, z) in roots.iter().enumerate() {
            let mut pw = Vec::with_capacity(8);
            pw.push((BigInt::from(1) << wp, BigInt::zero()));
            for j in 1..8 {
                let prev: &(BigInt, BigInt) = &pw[j - 1];
                let re = embed::shr_round(&(&prev.0 * &z.0 - &prev.1 * &z.1), wp);
                let im = embed::shr_round(&(&prev.0 * &z.1 + &prev.1 * &z.0), wp);
                pw.push((re, im));
            }
            for i in 0..8 {
                let mut re = BigInt::zero();
                let mut im = BigInt::zero();
                for (j, w) in pw.iter().enumerate() {
                    let c = &self.theta_inv_num[j][i];
                    re += c * &w.0;
                    im += c * &w.1;
                }
                vals[i][k] = (
                    embed::shr_round(&(re / &self.theta_inv_den), guard),
                    embed::shr_round(&(im / &self.theta_inv_den), guard),
                );
            }
        }
        let scale: BigInt = self.theta_inv_num.iter().flatten().map(|c| c.abs()).sum::<BigInt>() / &self.theta_inv_den + 1;
        let err = ((err * scale.magnitude() * 64u32) >> guard) + 4u32;
        EmbeddingTable { prec, vals, err }
    }

    /// Embedding `k` (0-based) of x at `prec` bits.
    pub fn embedding(&self, x: &OMElement, k: usize, prec: u32) -> ComplexBall {
        self.embedding_table(prec).eval(x, k)
    }

    /// Embedding `k` (0-based), doubling precision until the value has `bits`
    /// bits of relative accuracy. x must be nonzero.
    pub fn embedding_certified(&self, x: &OMElement, k: usize, bits: u32) -> ComplexBall {
        let mut prec = DEFAULT_PRECISION;
        loop {
            let b = self.embedding(x, k, prec);
            if b.has_relative_bits(bits) {
                return b;
            }
            assert!(prec < 1 << 16, "embedding precision runaway for a nonzero element");
            prec *= 2;
        }
    }

    /// f64 Minkowski-type data for lattice reduction: emb_f64[i][k].
    pub fn embeddings_f64(&self) -> &[[(f64, f64); 8]; 8] {
        &self.emb_f64
    }
}

pub fn om_mul(fc: &FieldConstants, x: &OMElement, y: &OMElement) -> OMElement {
    fc.mul(x, y)
}

pub fn om_norm(fc: &FieldConstants, x: &OMElement) -> BigInt {
    fc.norm(x)
}

pub fn galois_apply(fc: &FieldConstants, g: GaloisElement, x: &OMElement) -> OMElement {
    fc.galois_apply(g, x)
}

/// The k-th complex embedding of x, k ∈ 1..=8, at the default precision.
pub fn embed(fc: &FieldConstants, x: &OMElement, k: usize) -> ComplexBall {
    assert!((1..=8).contains(&k), "embedding index runs from 1 to 8");
    fc.embedding(x, k - 1, DEFAULT_PRECISION)
}

/// ∏ₖ embed(x, k) as a ball.
pub fn embedding_product(fc: &FieldConstants, x: &OMElement, prec: u32) -> ComplexBall {
    let t = fc.embedding_table(prec);
    let mut acc = ComplexBall::exact_int(&BigInt::from(1), prec);
    for k in 0..8 {
        acc = acc.mul(&t.eval(x, k));
    }
    acc
}

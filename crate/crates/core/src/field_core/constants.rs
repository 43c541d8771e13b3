//! Loading and validating the constants file.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::One;
use serde::Deserialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::element::OMElement;
use super::embed::{EmbeddingTable, DEFAULT_PRECISION};
use super::galois::GaloisElement;
use super::{mat_mul, FieldConstants, Mat8, IDENTITY};
use crate::linalg::{det3, det_bareiss, inverse_rational};

pub const BUILTIN_CONSTANTS: &str = include_str!("../../data/m_constants.json");

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ConstantsError {
    #[error("cannot read constants file: {0}")]
    Io(#[from] std::io::Error),
    #[error("constants file does not parse: {0}")]
    Parse(String),
    #[error("constants file schema: {0}")]
    Schema(String),
    #[error("{0}")]
    Invariant(String),
}

#[derive(Deserialize)]
struct RawEmbeddings {
    decimal_digits: u32,
    precision_bits: u32,
    values: Vec<Vec<[String; 2]>>,
}

#[derive(Deserialize)]
struct RawConstants {
    schema_version: u32,
    disc: i64,
    min_poly: Vec<i64>,
    mult_tensor: Vec<Vec<Vec<i64>>>,
    galois_r: Vec<Vec<i64>>,
    galois_s: Vec<Vec<i64>>,
    #[serde(default)]
    galois_images: BTreeMap<String, String>,
    embeddings: RawEmbeddings,
    zeta8: Vec<i64>,
    gen_i: Vec<i64>,
    sqrt_1pi: Vec<i64>,
    one: Vec<i64>,
    theta: Vec<i64>,
    fund_units: Vec<Vec<i64>>,
}

/// Load and validate a constants file; every invariant is checked.
pub fn load_constants(path: &Path) -> Result<FieldConstants, ConstantsError> {
    let bytes = std::fs::read(path)?;
    parse_constants(&bytes)
}

fn vec8(name: &str, v: &[i64]) -> Result<[i64; 8], ConstantsError> {
    v.try_into()
        .map_err(|_| ConstantsError::Schema(format!("{name} must have 8 entries")))
}

fn mat8(name: &str, v: &[Vec<i64>]) -> Result<Mat8, ConstantsError> {
    if v.len() != 8 {
        return Err(ConstantsError::Schema(format!("{name} must be 8x8")));
    }
    let mut m = [[0i64; 8]; 8];
    for (row, src) in m.iter_mut().zip(v) {
        *row = vec8(name, src)?;
    }
    Ok(m)
}

fn invariant(ok: bool, msg: impl FnOnce() -> String) -> Result<(), ConstantsError> {
    if ok {
        Ok(())
    } else {
        Err(ConstantsError::Invariant(msg()))
    }
}

pub(crate) fn parse_constants(bytes: &[u8]) -> Result<FieldConstants, ConstantsError> {
    let raw: RawConstants = serde_json::from_slice(bytes).map_err(|e| ConstantsError::Parse(e.to_string()))?;
    if raw.schema_version != SCHEMA_VERSION {
        return Err(ConstantsError::Schema(format!(
            "schema_version {} unsupported (expected {SCHEMA_VERSION})",
            raw.schema_version
        )));
    }
    let hash = hex::encode(Sha256::digest(bytes));
    let min_poly: [i64; 9] = raw
        .min_poly
        .as_slice()
        .try_into()
        .map_err(|_| ConstantsError::Schema("min_poly must have 9 coefficients".into()))?;
    if raw.mult_tensor.len() != 8 {
        return Err(ConstantsError::Schema("mult_tensor must be 8x8x8".into()));
    }
    let mut mult_tensor = [[[0i64; 8]; 8]; 8];
    for i in 0..8 {
        if raw.mult_tensor[i].len() != 8 {
            return Err(ConstantsError::Schema("mult_tensor must be 8x8x8".into()));
        }
        for j in 0..8 {
            mult_tensor[i][j] = vec8("mult_tensor", &raw.mult_tensor[i][j])?;
        }
    }
    let galois_r = mat8("galois_r", &raw.galois_r)?;
    let galois_s = mat8("galois_s", &raw.galois_s)?;
    let el = |name: &str, v: &[i64]| vec8(name, v).map(OMElement::from_i64s);
    let zeta8 = el("zeta8", &raw.zeta8)?;
    let gen_i = el("gen_i", &raw.gen_i)?;
    let sqrt_1pi = el("sqrt_1pi", &raw.sqrt_1pi)?;
    let one = el("one", &raw.one)?;
    let theta = el("theta", &raw.theta)?;
    if raw.fund_units.len() != 3 {
        return Err(ConstantsError::Schema("fund_units must list 3 units".into()));
    }
    let fund_units = [
        el("fund_units", &raw.fund_units[0])?,
        el("fund_units", &raw.fund_units[1])?,
        el("fund_units", &raw.fund_units[2])?,
    ];
    let e = &raw.embeddings;
    if e.values.len() != 8 || e.values.iter().any(|r| r.len() != 8) {
        return Err(ConstantsError::Schema("embeddings must be 8x8".into()));
    }
    if (e.decimal_digits as f64) * std::f64::consts::LOG2_10 < e.precision_bits as f64 || e.precision_bits < 100 {
        return Err(ConstantsError::Schema("embedding precision below 100 bits or not carried by the digits".into()));
    }
    let stored = EmbeddingTable::parse_decimal(&e.values, e.decimal_digits, e.precision_bits)
        .map_err(ConstantsError::Schema)?;

    let mut sparse = vec![vec![Vec::new(); 8]; 8];
    for i in 0..8 {
        for j in 0..8 {
            for k in 0..8 {
                if mult_tensor[i][j][k] != 0 {
                    sparse[i][j].push((k, mult_tensor[i][j][k]));
                }
            }
        }
    }
    let traces: [i64; 8] = std::array::from_fn(|i| (0..8).map(|k| mult_tensor[i][k][k]).sum());

    let mut galois_mats = [IDENTITY; 8];
    for g in GaloisElement::all() {
        let mut m = IDENTITY;
        for _ in 0..g.a() {
            m = mat_mul(&m, &galois_r);
        }
        if g.b() == 1 {
            m = mat_mul(&m, &galois_s);
        }
        galois_mats[g.index()] = m;
    }

    let mut fc = FieldConstants {
        min_poly,
        mult_tensor,
        galois_r,
        galois_s,
        zeta8,
        gen_i,
        sqrt_1pi,
        one,
        theta,
        fund_units,
        disc: BigInt::from(raw.disc),
        galois_images: raw.galois_images,
        hash,
        sparse,
        galois_mats,
        traces,
        theta_inv_num: Default::default(),
        theta_inv_den: BigInt::one(),
        emb_f64: [[(0.0, 0.0); 8]; 8],
        tables: RwLock::new(BTreeMap::new()),
        stored,
    };
    validate(&mut fc)?;
    fc.emb_f64 = fc.embedding_table(DEFAULT_PRECISION).to_f64();
    Ok(fc)
}

fn validate(fc: &mut FieldConstants) -> Result<(), ConstantsError> {
    let basis: Vec<OMElement> = (0..8)
        .map(|i| {
            let mut c = [0i64; 8];
            c[i] = 1;
            OMElement::from_i64s(c)
        })
        .collect();

    invariant(fc.one == basis[0], || "one must be the first basis element".into())?;
    for i in 0..8 {
        invariant(fc.mul(&fc.one, &basis[i]) == basis[i], || format!("one is not the identity on basis element {i}"))?;
        for j in 0..8 {
            invariant(fc.mult_tensor[i][j] == fc.mult_tensor[j][i], || {
                format!("mult_tensor not commutative at ({i},{j})")
            })?;
        }
    }
    for i in 0..8 {
        for j in 0..8 {
            let ij = fc.mul(&basis[i], &basis[j]);
            for k in 0..8 {
                let l = fc.mul(&ij, &basis[k]);
                let r = fc.mul(&basis[i], &fc.mul(&basis[j], &basis[k]));
                invariant(l == r, || format!("mult_tensor not associative at ({i},{j},{k})"))?;
            }
        }
    }

    // Discriminant of the trace form.
    let tr: Vec<Vec<BigInt>> = (0..8)
        .map(|i| (0..8).map(|j| fc.trace(&fc.mul(&basis[i], &basis[j]))).collect())
        .collect();
    let d = det_bareiss(tr);
    invariant(d == fc.disc, || format!("trace-form discriminant {d} differs from disc {}", fc.disc))?;
    invariant(fc.disc == BigInt::from(1i64 << 22), || format!("disc {} is not 2^22", fc.disc))?;

    // Galois relations and multiplicativity.
    let r = fc.galois_r;
    let s = fc.galois_s;
    let r2 = mat_mul(&r, &r);
    let r3 = mat_mul(&r2, &r);
    let r4 = mat_mul(&r3, &r);
    invariant(r4 == IDENTITY, || "Galois relation violated: r^4 != id".into())?;
    invariant(mat_mul(&s, &s) == IDENTITY, || "Galois relation violated: s^2 != id".into())?;
    invariant(mat_mul(&r, &s) == mat_mul(&s, &r3), || "Galois relation violated: rs != sr^3".into())?;
    invariant(r2 != IDENTITY && r != IDENTITY && s != IDENTITY, || "Galois relation violated: action not faithful".into())?;
    for g in [GaloisElement::R, GaloisElement::S] {
        for i in 0..8 {
            for j in 0..8 {
                let l = fc.galois_apply(g, &fc.mul(&basis[i], &basis[j]));
                let rr = fc.mul(&fc.galois_apply(g, &basis[i]), &fc.galois_apply(g, &basis[j]));
                invariant(l == rr, || format!("Galois relation violated: {g} not multiplicative on ({i},{j})"))?;
            }
        }
    }

    // Distinguished elements.
    let z2 = fc.mul(&fc.zeta8, &fc.zeta8);
    invariant(z2 == fc.gen_i, || "gen_i is not zeta8^2".into())?;
    let z4 = fc.mul(&z2, &z2);
    invariant(z4 == -&fc.one, || "zeta8 does not have order 8".into())?;
    let a2 = fc.mul(&fc.sqrt_1pi, &fc.sqrt_1pi);
    invariant(a2 == &fc.one + &fc.gen_i, || "sqrt_1pi^2 != 1 + i".into())?;
    invariant(fc.galois_apply(GaloisElement::R2, &fc.zeta8) == fc.zeta8, || "r^2 does not fix zeta8".into())?;
    invariant(fc.galois_apply(GaloisElement::S, &fc.gen_i) == fc.gen_i, || "s does not fix gen_i".into())?;
    invariant(fc.galois_apply(GaloisElement::S, &fc.sqrt_1pi) == fc.sqrt_1pi, || "s does not fix sqrt_1pi".into())?;
    invariant(fc.galois_apply(GaloisElement::R, &fc.zeta8) != fc.zeta8, || "r fixes zeta8".into())?;

    // Primitive element and the inverse of its power matrix.
    let mut pw = vec![fc.one.clone()];
    for j in 1..=8 {
        pw.push(fc.mul(&pw[j - 1], &fc.theta));
    }
    let mut acc = OMElement::zero();
    for (j, &c) in fc.min_poly.iter().enumerate() {
        acc = &acc + &pw[j].scale(&BigInt::from(c));
    }
    invariant(acc.is_zero(), || "theta is not a root of min_poly".into())?;
    invariant(fc.min_poly[8] == 1, || "min_poly must be monic".into())?;
    let pmat: Vec<Vec<BigInt>> = (0..8).map(|i| (0..8).map(|j| pw[j].coords[i].clone()).collect()).collect();
    let inv = inverse_rational(&pmat).ok_or_else(|| ConstantsError::Invariant("theta does not generate M".into()))?;
    let mut den = BigInt::one();
    for row in &inv {
        for q in row {
            den = num_integer::Integer::lcm(&den, q.denom());
        }
    }
    for j in 0..8 {
        for i in 0..8 {
            fc.theta_inv_num[j][i] = (&inv[j][i] * num_rational::BigRational::from_integer(den.clone())).to_integer();
        }
    }
    fc.theta_inv_den = den;

    // Embeddings: products of basis pairs must match the tensor numerically.
    let t = fc.embedding_table(DEFAULT_PRECISION);
    let tol = 1e-12;
    for i in 0..8 {
        for j in 0..8 {
            let ij = fc.mul(&basis[i], &basis[j]);
            for k in 0..8 {
                let a = t.eval(&basis[i], k).to_f64();
                let b = t.eval(&basis[j], k).to_f64();
                let c = t.eval(&ij, k).to_f64();
                let pr = (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
                invariant((pr.0 - c.0).abs() < tol && (pr.1 - c.1).abs() < tol, || {
                    format!("embedding {k} is not multiplicative on ({i},{j})")
                })?;
            }
        }
    }
    for k in 0..8 {
        let z = t.eval(&fc.zeta8, k);
        invariant((z.abs_f64() - 1.0).abs() < tol, || format!("embedding {k} of zeta8 is not on the unit circle"))?;
        let (a, b) = (k & !1, k | 1);
        let (x, y) = (t.eval(&fc.theta, a).to_f64(), t.eval(&fc.theta, b).to_f64());
        invariant((x.0 - y.0).abs() < tol && (x.1 + y.1).abs() < tol, || {
            format!("embeddings {a} and {b} are not complex conjugate")
        })?;
    }

    // Units: norm 1 and independent logarithms.
    let mut logs = [[0.0f64; 3]; 3];
    for (u, unit) in fc.fund_units.iter().enumerate() {
        let n = fc.norm(unit);
        invariant(n == BigInt::one(), || format!("fund_units[{u}] has norm {n}, not 1"))?;
        for j in 0..3 {
            logs[u][j] = t.eval(unit, 2 * j).ln_abs2();
        }
    }
    invariant(det3(&logs).abs() > 1e-3, || "fund_units do not have log-embedding rank 3".into())?;
    Ok(())
}

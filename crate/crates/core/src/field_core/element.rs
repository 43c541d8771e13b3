use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// An element of O_M as 8 integer coordinates in the fixed integral basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct OMElement {
    pub coords: [BigInt; 8],
}

impl OMElement {
    pub fn zero() -> Self {
        OMElement::default()
    }

    pub fn from_i64s(c: [i64; 8]) -> Self {
        OMElement { coords: c.map(BigInt::from) }
    }

    pub fn from_slice(c: &[i64]) -> Self {
        assert_eq!(c.len(), 8, "an element has 8 coordinates");
        let mut out = OMElement::zero();
        for (o, &x) in out.coords.iter_mut().zip(c) {
            *o = BigInt::from(x);
        }
        out
    }

    pub fn rational(n: BigInt) -> Self {
        let mut out = OMElement::zero();
        out.coords[0] = n;
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// True iff the element lies in Z (the first basis element is 1).
    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        OMElement { coords: std::array::from_fn(|i| &self.coords[i] * c) }
    }

    pub fn max_abs_coord(&self) -> BigInt {
        self.coords.iter().map(|x| x.abs()).max().unwrap()
    }

    pub fn to_i64s(&self) -> Option<[i64; 8]> {
        let mut out = [0i64; 8];
        for (o, c) in out.iter_mut().zip(&self.coords) {
            *o = c.to_i64()?;
        }
        Some(out)
    }

    pub fn to_i128s(&self) -> Option<[i128; 8]> {
        let mut out = [0i128; 8];
        for (o, c) in out.iter_mut().zip(&self.coords) {
            *o = c.to_i128()?;
        }
        Some(out)
    }
}

impl fmt::Display for OMElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl Add for &OMElement {
    type Output = OMElement;
    fn add(self, o: &OMElement) -> OMElement {
        OMElement { coords: std::array::from_fn(|i| &self.coords[i] + &o.coords[i]) }
    }
}

impl Sub for &OMElement {
    type Output = OMElement;
    fn sub(self, o: &OMElement) -> OMElement {
        OMElement { coords: std::array::from_fn(|i| &self.coords[i] - &o.coords[i]) }
    }
}

impl Neg for &OMElement {
    type Output = OMElement;
    fn neg(self) -> OMElement {
        OMElement { coords: std::array::from_fn(|i| -&self.coords[i]) }
    }
}

pub fn om_add(x: &OMElement, y: &OMElement) -> OMElement {
    x + y
}

pub fn om_sub(x: &OMElement, y: &OMElement) -> OMElement {
    x - y
}

pub fn om_neg(x: &OMElement) -> OMElement {
    -x
}

// Coordinates serialize as decimal strings so no precision is lost in JSON.
impl serde::Serialize for OMElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(8))?;
        for c in &self.coords {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

impl<'de> serde::Deserialize<'de> for OMElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<String> = serde::Deserialize::deserialize(d)?;
        if v.len() != 8 {
            return Err(serde::de::Error::custom(format!("expected 8 coordinates, got {}", v.len())));
        }
        let mut coords: [BigInt; 8] = Default::default();
        for (c, s) in coords.iter_mut().zip(&v) {
            *c = s.parse().map_err(serde::de::Error::custom)?;
        }
        Ok(OMElement { coords })
    }
}

use std::fmt;

use serde::{Deserialize, Serialize};

/// The automorphism rᵃsᵇ of M, with r⁴ = s² = 1 and rs = sr³.
///
/// Acting on x, rᵃsᵇ applies s first.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct GaloisElement {
    a: u8,
    b: u8,
}

impl GaloisElement {
    pub const ID: GaloisElement = GaloisElement { a: 0, b: 0 };
    pub const R: GaloisElement = GaloisElement { a: 1, b: 0 };
    pub const R2: GaloisElement = GaloisElement { a: 2, b: 0 };
    pub const R3: GaloisElement = GaloisElement { a: 3, b: 0 };
    pub const S: GaloisElement = GaloisElement { a: 0, b: 1 };
    /// s∘r = r³s.
    pub const SR: GaloisElement = GaloisElement { a: 3, b: 1 };
    /// s∘r² = r²s.
    pub const SR2: GaloisElement = GaloisElement { a: 2, b: 1 };
    /// s∘r³ = rs.
    pub const SR3: GaloisElement = GaloisElement { a: 1, b: 1 };

    pub fn new(a: i64, b: i64) -> Self {
        GaloisElement { a: a.rem_euclid(4) as u8, b: b.rem_euclid(2) as u8 }
    }

    pub fn a(self) -> u8 {
        self.a
    }

    pub fn b(self) -> u8 {
        self.b
    }

    /// Index 0..8 used for the precomputed matrix table.
    pub fn index(self) -> usize {
        (self.a + 4 * self.b) as usize
    }

    /// self ∘ other.
    pub fn compose(self, other: GaloisElement) -> GaloisElement {
        let c = if self.b == 0 { other.a as i64 } else { -(other.a as i64) };
        GaloisElement::new(self.a as i64 + c, (self.b + other.b) as i64)
    }

    pub fn inverse(self) -> GaloisElement {
        if self.b == 0 {
            GaloisElement::new(-(self.a as i64), 0)
        } else {
            self
        }
    }

    pub fn is_identity(self) -> bool {
        self == GaloisElement::ID
    }

    pub fn all() -> [GaloisElement; 8] {
        std::array::from_fn(|i| GaloisElement { a: (i % 4) as u8, b: (i / 4) as u8 })
    }

    pub fn order(self) -> u32 {
        let mut g = self;
        let mut n = 1;
        while !g.is_identity() {
            g = g.compose(self);
            n += 1;
        }
        n
    }
}

impl fmt::Display for GaloisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (0, 0) => write!(f, "id"),
            (a, 0) => write!(f, "r^{a}"),
            (0, _) => write!(f, "s"),
            (a, _) => write!(f, "r^{a}s"),
        }
    }
}

//! The unit group O_M^× = ⟨ζ₈⟩ × V and a fundamental domain for its action.
//!
//! The domain is the set of x whose normalized log-embedding lies in the
//! half-open box [0,1)³ spanned by the logs of the fundamental units, with
//! full torsion allowed. It is therefore stable under ζ₈.

use num_traits::ToPrimitive;

use super::ideal::OMIdeal;
use super::lattice::find_generator;
use super::IdealError;
use crate::field_core::{ln_big, FieldConstants, GaloisElement, OMElement};
use crate::linalg::{det3, solve3};

/// Shift applied before flooring so exact unit multiples reduce stably.
pub const FLOOR_SLACK: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct UnitContext {
    /// ζ₈⁰, …, ζ₈⁷.
    pub torsion: [OMElement; 8],
    pub fund_units: [OMElement; 3],
    pub fund_inverses: [OMElement; 3],
    /// log_basis[i][j] = ln|σ_{2j}(v_i)|².
    pub log_basis: [[f64; 4]; 3],
    /// Index bit i selects v_i.
    pub square_class_reps: [OMElement; 8],
}

fn inverse_of_unit(fc: &FieldConstants, u: &OMElement) -> OMElement {
    // u⁻¹ = ∏_{g ≠ 1} g(u) / N(u), and N(u) = 1.
    let conj: Vec<OMElement> =
        GaloisElement::all().iter().filter(|g| !g.is_identity()).map(|&g| fc.galois_apply(g, u)).collect();
    let inv = fc.product(conj.iter());
    assert_eq!(fc.mul(&inv, u), fc.one, "fundamental unit inverse");
    inv
}

impl UnitContext {
    pub fn new(fc: &FieldConstants) -> Self {
        let mut torsion: [OMElement; 8] = Default::default();
        torsion[0] = fc.one.clone();
        for k in 1..8 {
            torsion[k] = fc.mul(&torsion[k - 1], &fc.zeta8);
        }
        let fund_units = fc.fund_units.clone();
        let fund_inverses = std::array::from_fn(|i| inverse_of_unit(fc, &fund_units[i]));
        let log_basis = std::array::from_fn(|i| log_vector(fc, &fund_units[i]));
        let square_class_reps = std::array::from_fn(|mask| {
            let mut x = fc.one.clone();
            for (i, v) in fund_units.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    x = fc.mul(&x, v);
                }
            }
            x
        });
        let uc = UnitContext { torsion, fund_units, fund_inverses, log_basis, square_class_reps };
        assert!(det3(&uc.system()).abs() > 1e-6, "unit logs have rank < 3");
        uc
    }

    fn system(&self) -> [[f64; 3]; 3] {
        std::array::from_fn(|j| std::array::from_fn(|i| self.log_basis[i][j]))
    }

    /// Coordinates of the normalized log-embedding of x in the unit log basis.
    pub fn domain_coords(&self, fc: &FieldConstants, x: &OMElement) -> [f64; 3] {
        let l = log_vector(fc, x);
        let norm = fc.norm(x).magnitude().clone();
        let shift = ln_big(&norm) / 4.0;
        solve3(self.system(), [l[0] - shift, l[1] - shift, l[2] - shift])
    }

    /// ∏ v_i^{k_i} for integer exponents of either sign.
    pub fn unit_power(&self, fc: &FieldConstants, k: [i64; 3]) -> OMElement {
        let mut out = fc.one.clone();
        for i in 0..3 {
            let base = if k[i] >= 0 { &self.fund_units[i] } else { &self.fund_inverses[i] };
            if k[i] != 0 {
                out = fc.mul(&out, &fc.pow(base, k[i].unsigned_abs()));
            }
        }
        out
    }
}

/// ln|σ_{2j}(x)|² for the four conjugate pairs, with certified relative precision.
pub fn log_vector(fc: &FieldConstants, x: &OMElement) -> [f64; 4] {
    std::array::from_fn(|j| fc.embedding_certified(x, 2 * j, 30).ln_abs2())
}

/// Move x into the fundamental domain: returns (v, y) with v a unit and y = v·x.
pub fn domain_reduce(fc: &FieldConstants, uc: &UnitContext, x: &OMElement) -> (OMElement, OMElement) {
    assert!(!x.is_zero(), "domain_reduce of zero");
    let c = uc.domain_coords(fc, x);
    let k: [i64; 3] = std::array::from_fn(|i| (c[i] + FLOOR_SLACK).floor().to_i64().expect("finite log coordinate"));
    if k == [0; 3] {
        return (fc.one.clone(), x.clone());
    }
    let v = uc.unit_power(fc, [-k[0], -k[1], -k[2]]);
    let y = fc.mul(&v, x);
    (v, y)
}

/// The eight generators of `ideal` lying in the fundamental domain.
pub fn generators_in_domain(fc: &FieldConstants, uc: &UnitContext, ideal: &OMIdeal) -> Result<Vec<OMElement>, IdealError> {
    let g = find_generator(fc, ideal)?;
    let (_, y) = domain_reduce(fc, uc, &g);
    Ok(uc.torsion.iter().map(|z| fc.mul(z, &y)).collect())
}

/// Whether x lies in the fundamental domain.
pub fn in_domain(fc: &FieldConstants, uc: &UnitContext, x: &OMElement) -> bool {
    uc.domain_coords(fc, x).iter().all(|&c| (c + FLOOR_SLACK).floor() == 0.0)
}

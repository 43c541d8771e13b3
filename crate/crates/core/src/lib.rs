//! Spin symbols in the governing field M = Q(ζ₈, √(1+i)) and the 16-rank of
//! class groups of Q(√−p).
//!
//! The crate is organised as the chain of objects used to decide whether
//! Cl(−4p) has an element of order 16:
//!
//! * [`field_core`]: exact arithmetic in O_M.
//! * [`ideals_units`]: ideals in Hermite normal form, primes above p, generators, units.
//! * [`spin`]: residue symbols, spins and the sequence a_𝔫.
//! * [`classgroup`]: class numbers by reduced forms, the independent ground truth.
//! * [`sums`]: prime sums, density tables, type I/II sums and character-sum scans.

pub mod arith;
pub mod fp;
pub mod linalg;

pub mod field_core;
pub mod ideals_units;
pub mod spin;
pub mod classgroup;
pub mod sums;

pub use field_core::{FieldConstants, GaloisElement, OMElement};

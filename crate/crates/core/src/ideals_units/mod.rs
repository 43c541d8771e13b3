//! Ideals of O_M, primes above a rational prime, generators of principal
//! ideals and the unit group with its fundamental domain.

pub mod factor;
pub mod hnf;
pub mod ideal;
pub mod lattice;
pub mod primes;
pub mod units;

use num_bigint::{BigInt, BigUint};
use thiserror::Error;

pub use factor::{factor_element, valuation};
pub use ideal::{ideal_add, ideal_coprime, ideal_divides, ideal_from_generator, ideal_mul, ideal_pow, OMIdeal};
pub use lattice::{find_generator, generates};
pub use primes::{prime_above_two, primes_above, primes_above_u64, residue_degree, DegreeOneMap, PrimeIdeal, ResidueMap};
pub use units::{domain_reduce, generators_in_domain, in_domain, log_vector, UnitContext};

#[derive(Debug, Error)]
pub enum IdealError {
    #[error("zero does not generate a nonzero ideal")]
    ZeroGenerator,
    #[error("matrix is not in canonical Hermite normal form")]
    NotCanonical,
    #[error("lattice is not closed under multiplication by O_M")]
    NotAnIdeal,
    #[error("the prime 2 is totally ramified and not handled here")]
    EvenPrime,
    #[error("{0} is not prime")]
    NotPrime(BigUint),
    #[error("no generator found for ideal of norm {norm}: {diagnostics}")]
    GeneratorNotFound { norm: BigInt, diagnostics: String },
    #[error("coordinates exceed the 128-bit lattice range")]
    TooLarge,
    #[error("factorization budget exceeded: {0}")]
    Budget(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

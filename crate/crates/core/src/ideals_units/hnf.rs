//! Hermite normal form of full-rank sublattices of Z⁸, computed modulo a
//! multiple of the determinant.
//!
//! Convention: columns generate the lattice; the matrix is lower triangular
//! with positive diagonal, and in each row the entries left of the diagonal
//! lie in [0, diagonal).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// hnf[j] is column j; hnf[j][i] is the entry in row i.
pub type Hnf = [[BigInt; 8]; 8];

fn reduce_col(c: &mut [BigInt; 8], from: usize, d: &BigInt) {
    for x in c[from..].iter_mut() {
        *x = x.mod_floor(d);
    }
}

/// HNF of the lattice spanned by `gens` together with d·Z⁸.
///
/// Requires d·Z⁸ ⊆ L(gens); then the result is the HNF of L(gens).
pub fn hnf_mod(gens: &[[BigInt; 8]], d: &BigInt) -> Hnf {
    assert!(d.is_positive(), "HNF modulus must be positive");
    let mut work: Vec<[BigInt; 8]> = gens
        .iter()
        .map(|g| {
            let mut c = g.clone();
            reduce_col(&mut c, 0, d);
            c
        })
        .filter(|c| c.iter().any(|x| !x.is_zero()))
        .collect();
    let mut out: Hnf = Default::default();
    for i in 0..8 {
        // Pivot column starts as d·eᵢ, which lies in the lattice.
        let mut piv: [BigInt; 8] = Default::default();
        piv[i] = d.clone();
        for c in work.iter_mut() {
            if c[i].is_zero() {
                continue;
            }
            let g = piv[i].extended_gcd(&c[i]);
            let (a, b) = (&piv[i] / &g.gcd, &c[i] / &g.gcd);
            let mut np: [BigInt; 8] = Default::default();
            let mut nc: [BigInt; 8] = Default::default();
            for r in i..8 {
                np[r] = &g.x * &piv[r] + &g.y * &c[r];
                nc[r] = &a * &c[r] - &b * &piv[r];
            }
            debug_assert!(nc[i].is_zero());
            reduce_col(&mut np, i + 1, d);
            reduce_col(&mut nc, i + 1, d);
            piv = np;
            *c = nc;
        }
        if piv[i].is_negative() {
            for x in piv[i..].iter_mut() {
                *x = -&*x;
            }
            reduce_col(&mut piv, i + 1, d);
        }
        work.retain(|c| c.iter().any(|x| !x.is_zero()));
        out[i] = piv;
    }
    // Reduce entries left of each diagonal.
    for i in 1..8 {
        let (left, right) = out.split_at_mut(i);
        let pc = &right[0];
        for col in left.iter_mut() {
            let q = col[i].div_floor(&pc[i]);
            if !q.is_zero() {
                for r in i..8 {
                    col[r] -= &q * &pc[r];
                }
            }
        }
    }
    out
}

pub fn hnf_det(h: &Hnf) -> BigInt {
    (0..8).map(|i| h[i][i].clone()).fold(BigInt::one(), |a, b| a * b)
}

/// Solve H·c = x by forward substitution; `None` if x is not in the lattice.
pub fn hnf_solve(h: &Hnf, x: &[BigInt; 8]) -> Option<[BigInt; 8]> {
    let mut rest = x.clone();
    let mut c: [BigInt; 8] = Default::default();
    for i in 0..8 {
        let (q, r) = rest[i].div_rem(&h[i][i]);
        if !r.is_zero() {
            return None;
        }
        for k in i + 1..8 {
            rest[k] -= &q * &h[i][k];
        }
        c[i] = q;
    }
    Some(c)
}

pub fn hnf_contains(h: &Hnf, x: &[BigInt; 8]) -> bool {
    hnf_solve(h, x).is_some()
}

pub fn is_canonical(h: &Hnf) -> bool {
    for j in 0..8 {
        if !h[j][j].is_positive() {
            return false;
        }
        for i in 0..j {
            if !h[j][i].is_zero() {
                return false;
            }
        }
        for i in j + 1..8 {
            if h[j][i].is_negative() || h[j][i] >= h[i][i] {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn col(v: [i64; 8]) -> [BigInt; 8] {
        v.map(BigInt::from)
    }

    #[test]
    fn identity_lattice() {
        let gens: Vec<_> = (0..8).map(|i| {
            let mut v = [0i64; 8];
            v[i] = 1;
            col(v)
        }).collect();
        let h = hnf_mod(&gens, &BigInt::from(5));
        assert!(is_canonical(&h));
        assert_eq!(hnf_det(&h), BigInt::from(1));
    }

    #[test]
    fn random_lattices_are_canonical_and_span() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let gens: Vec<[BigInt; 8]> = (0..10)
                .map(|_| col(std::array::from_fn(|_| rng.random_range(-20..=20))))
                .collect();
            let m: Vec<Vec<BigInt>> = (0..8).map(|i| (0..8).map(|j| gens[j][i].clone()).collect()).collect();
            let det = crate::linalg::det_bareiss(m).abs();
            if det.is_zero() {
                continue;
            }
            let h = hnf_mod(&gens, &det);
            assert!(is_canonical(&h));
            for g in &gens {
                assert!(hnf_contains(&h, g));
            }
            // the lattice of the first 8 columns contains the HNF columns' lattice only if equal index
            let sub = hnf_mod(&gens[..8], &det);
            assert_eq!(hnf_det(&sub), det);
            // HNF of generators permuted is identical
            let mut perm = gens.clone();
            perm.reverse();
            assert_eq!(hnf_mod(&perm, &det), h);
            // a larger multiple of the determinant gives the same answer
            assert_eq!(hnf_mod(&gens, &(&det * 6)), h);
        }
    }
}

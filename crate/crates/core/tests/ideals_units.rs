use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spin16::arith::primes_up_to;
use spin16::field_core::*;
use spin16::ideals_units::*;
use std::sync::Arc;

fn fc() -> Arc<FieldConstants> {
    FieldConstants::builtin()
}

fn random_element(rng: &mut ChaCha8Rng, bound: i64) -> OMElement {
    OMElement::from_i64s(std::array::from_fn(|_| rng.random_range(-bound..=bound)))
}

fn random_odd_element(fc: &FieldConstants, rng: &mut ChaCha8Rng, bound: i64) -> OMElement {
    loop {
        let x = random_element(rng, bound);
        if fc.norm(&x).bit(0) {
            return x;
        }
    }
}

#[test]
fn ideal_from_generator_examples() {
    let fc = fc();
    let one = ideal_from_generator(&fc, &fc.one).unwrap();
    assert!(one.is_unit());
    assert_eq!(one, OMIdeal::unit());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let x = random_element(&mut rng, 20);
        let a = ideal_from_generator(&fc, &x).unwrap();
        assert_eq!(a.norm(), &fc.norm(&x).abs());
        assert_eq!(ideal_from_generator(&fc, &fc.mul(&fc.zeta8, &x)).unwrap(), a);
    }
    let s = ideal_from_generator(&fc, &fc.sqrt_1pi).unwrap();
    assert_eq!(s.norm(), &fc.norm(&fc.sqrt_1pi));
    assert_eq!(s.norm(), &BigInt::from(4));
    assert!(matches!(ideal_from_generator(&fc, &OMElement::zero()), Err(IdealError::ZeroGenerator)));
}

#[test]
fn prime_above_two_squares_to_sqrt_1pi() {
    let fc = fc();
    let p2 = prime_above_two(&fc);
    assert_eq!(p2.norm(), &BigInt::from(2));
    let sq = ideal_mul(&fc, &p2, &p2);
    assert_eq!(sq, ideal_from_generator(&fc, &fc.sqrt_1pi).unwrap());
    assert_eq!(ideal_pow(&fc, &p2, 8), ideal_from_generator(&fc, &OMElement::rational(BigInt::from(2))).unwrap());
    let g = find_generator(&fc, &p2).unwrap();
    assert_eq!(fc.norm(&g).abs(), BigInt::from(2));
}

#[test]
fn ideal_products_and_divisibility() {
    let fc = fc();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..30 {
        let a = ideal_from_generator(&fc, &random_element(&mut rng, 6)).unwrap();
        let b = ideal_from_generator(&fc, &random_element(&mut rng, 6)).unwrap();
        let ab = ideal_mul(&fc, &a, &b);
        assert_eq!(ab.norm(), &(a.norm() * b.norm()));
        assert_eq!(ideal_mul(&fc, &a, &OMIdeal::unit()), a);
        assert!(ideal_divides(&a, &ab));
        assert!(ideal_divides(&b, &ab));
        assert_eq!(ideal_mul(&fc, &b, &a), ab);
    }
    let p17 = primes_above_u64(&fc, 17).unwrap();
    let p41 = primes_above_u64(&fc, 41).unwrap();
    assert!(ideal_coprime(&fc, &p17[0].ideal, &p41[0].ideal));
    assert!(!ideal_coprime(&fc, &p41[0].ideal, &ideal_mul(&fc, &p41[0].ideal, &p17[0].ideal)));
    assert!(ideal_coprime(&fc, &p41[0].ideal, &p41[1].ideal));
    assert!(!ideal_divides(&p41[0].ideal, &p41[1].ideal));
}

#[test]
fn primes_above_examples() {
    let fc = fc();
    let p41 = primes_above_u64(&fc, 41).unwrap();
    assert_eq!(p41.len(), 8);
    assert!(p41.iter().all(|q| q.degree == 1 && q.norm() == &BigInt::from(41)));
    let p17 = primes_above_u64(&fc, 17).unwrap();
    assert!(p17.iter().filter(|q| q.degree == 1).count() < 8);
    for p in [3u64, 7, 11, 19, 23, 31, 43] {
        assert!(primes_above_u64(&fc, p).unwrap().iter().all(|q| q.degree > 1), "p = {p}");
    }
    assert!(matches!(primes_above_u64(&fc, 2), Err(IdealError::EvenPrime)));
    assert!(matches!(primes_above_u64(&fc, 15), Err(IdealError::NotPrime(_))));
}

#[test]
fn residue_degrees_multiply_out_to_eight() {
    let fc = fc();
    for p in primes_up_to(10_000).into_iter().skip(1) {
        let ps = primes_above_u64(&fc, p).unwrap();
        let total: usize = ps.iter().map(|q| q.degree).sum();
        assert_eq!(total, 8, "p = {p}");
        // All primes above p have the same degree (Galois extension).
        assert!(ps.iter().all(|q| q.degree == ps[0].degree));
        let prod = ps.iter().fold(OMIdeal::unit(), |acc, q| ideal_mul(&fc, &acc, &q.ideal));
        if p < 500 {
            assert_eq!(prod, ideal_from_generator(&fc, &OMElement::rational(BigInt::from(p))).unwrap());
        }
    }
}

#[test]
fn large_prime_uses_big_residue_field() {
    let fc = fc();
    let p: BigUint = (BigUint::one() << 89u32) - 1u32;
    let ps = primes_above(&fc, &p).unwrap();
    assert_eq!(ps.iter().map(|q| q.degree).sum::<usize>(), 8);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let x = random_element(&mut rng, 100);
    let x2 = fc.mul(&x, &x);
    for q in &ps {
        assert!(matches!(q.residue, ResidueMap::Big(_)));
        assert_eq!(q.residue.legendre(&x2), 1);
    }
}

#[test]
fn generator_round_trip() {
    let fc = fc();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let x = random_element(&mut rng, 12);
        let id = ideal_from_generator(&fc, &x).unwrap();
        let g = find_generator(&fc, &id).unwrap();
        assert_eq!(ideal_from_generator(&fc, &g).unwrap(), id);
        // g / x is a unit: N(g) = N(x) and (g) = (x).
        assert_eq!(fc.norm(&g).abs(), fc.norm(&x).abs());
    }
    let u = find_generator(&fc, &OMIdeal::unit()).unwrap();
    assert_eq!(fc.norm(&u), BigInt::one());
}

#[test]
fn generators_of_split_primes_up_to_1e5() {
    let fc = fc();
    let mut count = 0;
    for p in primes_up_to(100_000).into_iter().skip(1) {
        if p % 8 != 1 {
            continue;
        }
        let ps = primes_above_u64(&fc, p).unwrap();
        if ps[0].degree != 1 {
            continue;
        }
        count += 1;
        for q in &ps {
            let g = find_generator(&fc, &q.ideal).unwrap();
            assert_eq!(fc.norm(&g), BigInt::from(p), "p = {p}");
            assert!(q.ideal.contains(&g));
        }
    }
    assert!(count > 1000, "{count} split primes");
}

#[test]
fn domain_reduction_properties() {
    let fc = fc();
    let uc = UnitContext::new(&fc);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let x = random_element(&mut rng, 30);
        let (v, y) = domain_reduce(&fc, &uc, &x);
        assert_eq!(fc.norm(&v), BigInt::one());
        assert_eq!(fc.mul(&v, &x), y);
        assert_eq!(ideal_from_generator(&fc, &y).unwrap(), ideal_from_generator(&fc, &x).unwrap());
        assert!(in_domain(&fc, &uc, &y));
        let (v2, y2) = domain_reduce(&fc, &uc, &y);
        assert_eq!(v2, fc.one);
        assert_eq!(y2, y);
    }
    // Same orbit gives the same representative.
    for _ in 0..20 {
        let x = random_element(&mut rng, 30);
        let moved = fc.mul(&fc.pow(&uc.fund_units[0], 10), &x);
        let moved = fc.mul(&uc.fund_inverses[2], &moved);
        assert_eq!(domain_reduce(&fc, &uc, &moved).1, domain_reduce(&fc, &uc, &x).1);
    }
}

#[test]
fn reduced_coordinates_are_bounded_by_norm_power() {
    let fc = fc();
    let uc = UnitContext::new(&fc);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut c_max: f64 = 0.0;
    for _ in 0..1000 {
        let x = random_element(&mut rng, 1000);
        let (_, y) = domain_reduce(&fc, &uc, &x);
        let n = fc.norm(&y).to_f64().unwrap();
        let m = y.max_abs_coord().to_f64().unwrap();
        c_max = c_max.max(m / n.powf(0.125));
    }
    // One constant serves the whole sample; it is a property of the chosen units.
    assert!(c_max.is_finite() && c_max < 1e3, "C = {c_max}");
}

#[test]
fn generators_in_domain_examples() {
    let fc = fc();
    let uc = UnitContext::new(&fc);
    let t = generators_in_domain(&fc, &uc, &OMIdeal::unit()).unwrap();
    let mut sorted = t.clone();
    sorted.sort();
    let mut tors = uc.torsion.to_vec();
    tors.sort();
    assert_eq!(sorted, tors);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..30 {
        let x = random_odd_element(&fc, &mut rng, 10);
        let id = ideal_from_generator(&fc, &x).unwrap();
        let gs = generators_in_domain(&fc, &uc, &id).unwrap();
        assert_eq!(gs.len(), 8);
        for g in &gs {
            assert!(generates(&fc, g, &id));
            assert!(in_domain(&fc, &uc, g));
            assert!(gs.contains(&fc.mul(&fc.zeta8, g)));
        }
    }
}

#[test]
fn factorization_matches_norm() {
    let fc = fc();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let budget = spin16::arith::FactorBudget::default();
    for _ in 0..40 {
        let x = random_odd_element(&fc, &mut rng, 8);
        let fs = factor_element(&fc, &x, &budget).unwrap();
        let prod = fs.iter().fold(OMIdeal::unit(), |acc, (q, k)| ideal_mul(&fc, &acc, &ideal_pow(&fc, &q.ideal, *k)));
        assert_eq!(prod, ideal_from_generator(&fc, &x).unwrap());
    }
}

#[test]
fn unit_context_invariants() {
    let fc = fc();
    let uc = UnitContext::new(&fc);
    for (v, w) in uc.fund_units.iter().zip(&uc.fund_inverses) {
        assert_eq!(fc.mul(v, w), fc.one);
    }
    for j in 0..3 {
        let s: f64 = uc.log_basis[j].iter().sum();
        assert!(s.abs() < 1e-9);
    }
    let mut reps = uc.square_class_reps.to_vec();
    reps.sort();
    reps.dedup();
    assert_eq!(reps.len(), 8);
    assert_eq!(fc.mul(&uc.torsion[7], &fc.zeta8), fc.one);
}

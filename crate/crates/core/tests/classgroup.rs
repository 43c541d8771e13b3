use num_integer::Integer;
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spin16::arith::{is_prime_u64, primes_up_to};
use spin16::classgroup::*;
use spin16::field_core::FieldConstants;

#[test]
fn class_number_examples() {
    assert_eq!(class_number(-4).unwrap(), 1);
    assert_eq!(class_number(-3).unwrap(), 1);
    assert_eq!(class_number(-23).unwrap(), 3);
    assert_eq!(class_number(-68).unwrap(), 4);
    assert_eq!(
        reduced_forms(-68).unwrap(),
        vec![QuadForm::new(1, 0, 17), QuadForm::new(2, 2, 9), QuadForm::new(3, -2, 6), QuadForm::new(3, 2, 6)]
    );
    assert_eq!(class_number(-164).unwrap(), 8);
    for d in [0, 5, -5, -6, 12] {
        assert_eq!(class_number(d), Err(ClassGroupError::InvalidDiscriminant(d)));
    }
}

#[test]
fn reduction_lands_on_reduced_forms() {
    let forms = reduced_forms(-4 * 1009).unwrap();
    for f in &forms {
        let g = QuadForm::new(f.a, f.b + 2 * f.a * 3, f.a * 9 + f.b * 3 + f.c);
        assert_eq!(g.discriminant(), f.discriminant());
        assert_eq!(g.reduce(), *f);
    }
}

#[test]
fn splitting_examples() {
    assert!(!splits_completely_in_M(17));
    // i ↦ 9 mod 41, and 1 + 9 = 10 = 16².
    assert_eq!(16 * 16 % 41, 10);
    assert!(splits_completely_in_M(41));
    for p in primes_up_to(2000).into_iter().filter(|p| p % 8 == 5) {
        assert!(!splits_completely_in_M(p));
    }
}

#[test]
fn record_examples() {
    let fc = FieldConstants::builtin();
    let r = build_record(&fc, 5).unwrap();
    assert_eq!((r.h, r.h2, r.e_true, r.e_pred), (2, 2, 0, 0));
    let r = build_record(&fc, 41).unwrap();
    assert_eq!((r.h, r.h2, r.e_true, r.e_pred, r.splits_m), (8, 8, -1, -1, true));
    assert!(r.rk8 && !r.rk16);
    for p in [3u64, 7, 11, 19, 23, 31, 43, 47] {
        let r = build_record(&fc, p).unwrap();
        assert!(r.h % 2 == 1 && r.e_true == 0, "p = {p}");
    }
    assert!(matches!(build_record(&fc, 2), Err(RecordError::NotOddPrime(2))));
    assert!(matches!(build_record(&fc, 15), Err(RecordError::NotOddPrime(15))));
}

#[test]
fn batch_table_matches_direct_count() {
    let table = class_numbers_minus_4p(6000);
    for p in primes_up_to(6000).into_iter().skip(1) {
        assert_eq!(table[p as usize] as u64, class_number(-4 * p as i64).unwrap(), "p = {p}");
    }
}

#[test]
fn stevenhagen_and_criterion_to_1e5() {
    let fc = FieldConstants::builtin();
    let recs = records_in_range(&fc, 3, 100_000).unwrap();
    assert_eq!(recs.len(), primes_up_to(100_000).len() - 1);
    let mut split = 0;
    for r in &recs {
        assert_eq!(r.splits_m, r.rk8, "p = {}", r.p);
        assert!(r.agrees(), "p = {}: e_true {} e_pred {}", r.p, r.e_true, r.e_pred);
        if r.p % 4 == 1 {
            assert_eq!(r.rk4, r.p % 8 == 1, "p = {}", r.p);
        }
        split += r.splits_m as usize;
    }
    assert!(split > 1000);
    assert!(recs.windows(2).all(|w| w[0].p < w[1].p));
}

#[test]
fn csv_round_trip() {
    let fc = FieldConstants::builtin();
    for r in records_in_range(&fc, 3, 3000).unwrap() {
        let line = r.to_csv();
        assert_eq!(PrimeRecord::from_csv(&line).unwrap(), r);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<PrimeRecord>(&json).unwrap(), r);
    }
    assert_eq!(CSV_HEADER.split(',').count(), 9);
    for bad in ["", "41,8,8,1,1,0,1,-1", "41,8,8,1,1,0,1,-1,2", "41,8,4,1,1,0,1,-1,-1", "41,x,8,1,1,0,1,-1,-1"] {
        assert!(PrimeRecord::from_csv(bad).is_err(), "{bad:?}");
    }
}

/// Composition of primitive forms of equal discriminant.
fn compose(f: QuadForm, g: QuadForm) -> QuadForm {
    let (f, g) = if f.a > g.a { (g, f) } else { (f, g) };
    let (a1, b1, a2, b2, c2) = (f.a as i128, f.b as i128, g.a as i128, g.b as i128, g.c as i128);
    let s = (b1 + b2) / 2;
    let n = b2 - s;
    let (d, y1) = if a2 % a1 == 0 {
        (a1, 0)
    } else {
        let e = a2.extended_gcd(&a1);
        (e.gcd, e.x)
    };
    let (d1, x2, y2) = if s % d == 0 {
        (d, 0, -1)
    } else {
        let e = s.extended_gcd(&d);
        (e.gcd, e.x, -e.y)
    };
    let v1 = a1 / d1;
    let v2 = a2 / d1;
    let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
    let b3 = b2 + 2 * v2 * r;
    let a3 = v1 * v2;
    let c3 = (c2 * d1 + r * (b2 + v2 * r)) / v1;
    let h = QuadForm::new(a3 as i64, b3 as i64, c3 as i64);
    assert_eq!(h.discriminant(), f.discriminant());
    h.reduce()
}

fn order(f: QuadForm, identity: QuadForm) -> u64 {
    let mut g = f;
    let mut k = 1;
    while g != identity {
        g = compose(g, f);
        k += 1;
    }
    k
}

#[test]
fn two_part_is_cyclic_on_a_sample() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let candidates: Vec<u64> = primes_up_to(100_000).into_iter().filter(|p| p % 4 == 1 && *p > 100).collect();
    for &p in candidates.choose_multiple(&mut rng, 50) {
        assert!(is_prime_u64(p));
        let forms = reduced_forms(-4 * p as i64).unwrap();
        let h = forms.len() as u64;
        let identity = QuadForm::new(1, 0, p as i64);
        // Orders divide h, and sum over forms confirms a group of order h.
        let orders: Vec<u64> = forms.iter().map(|&f| order(f, identity)).collect();
        assert!(orders.iter().all(|o| h % o == 0));
        let v = h.trailing_zeros();
        assert!(orders.iter().any(|o| o.trailing_zeros() == v), "p = {p}: 2-part not cyclic");
        // Exactly two elements of order dividing 2.
        assert_eq!(orders.iter().filter(|&&o| o <= 2).count(), 2, "p = {p}");
    }
}

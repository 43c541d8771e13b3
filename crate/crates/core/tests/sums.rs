use spin16::arith::is_prime_u64;
use spin16::classgroup::records_in_range;
use spin16::field_core::FieldConstants;
use spin16::ideals_units::{ideal_from_generator, prime_above_two, primes_above_u64, UnitContext};
use spin16::sums::charsum::{character_table, window_length, window_max};
use spin16::sums::*;
use std::sync::Arc;

fn setup() -> (Arc<FieldConstants>, UnitContext) {
    let fc = FieldConstants::builtin();
    let uc = UnitContext::new(&fc);
    (fc, uc)
}

#[test]
fn checkpoints_and_fit() {
    assert_eq!(log_checkpoints(100, 1000), vec![100, 200, 500, 1000]);
    assert_eq!(log_checkpoints(100, 1234), vec![100, 200, 500, 1000, 1234]);
    let mut s = Series::new("t");
    for x in [10u64, 100, 1000, 10000] {
        s.push(x, (x as f64).powf(0.75));
    }
    assert!((fit_exponent(&s).unwrap() - 0.75).abs() < 1e-12);
    assert_eq!(fit_exponent(&Series::new("empty")), None);
}

#[test]
fn prime_sum_density_and_sha_at_2e4() {
    let (fc, uc) = setup();
    let x = 20_000;
    let recs = records_in_range(&fc, 3, x).unwrap();
    let sp = split_spins(&fc, &uc, x).unwrap();
    let rep = prime_sum(&fc, &recs, &sp, x).unwrap();
    assert!(rep.checks_passed(), "{:?}", rep.checks);
    assert_eq!(rep.series("e_true").unwrap().values, rep.series("e_pred").unwrap().values);
    let sum = rep.metrics["sum_e"];
    assert!(sum.abs() <= rep.metrics["split_count"]);
    let cps = &rep.series("e_true").unwrap().checkpoints;
    assert!(cps.windows(2).all(|w| w[0] < w[1]) && *cps.last().unwrap() == x);

    let d = density_table(&fc, &recs, x).unwrap();
    assert!(d.checks_passed());
    let total: f64 = ["mu_1", "mu_2", "mu_4", "mu_8", "mu_16plus"].iter().map(|k| d.metrics[*k]).sum();
    assert!((total - 1.0).abs() < 1e-12);

    let sha = sha_report(&fc, &sp, x).unwrap();
    assert!(sha.checks_passed());
    let w = &sha.lists["witnesses"];
    assert_eq!(w.len() as f64, sha.metrics["witness_count"]);
    assert!(w.iter().all(|&p| p % 8 == 1 && is_prime_u64(p)));
    assert!(matches!(prime_sum(&fc, &recs, &sp, 50), Err(SumError::InvalidParameter(_))));
}

#[test]
fn small_prime_sum_trivial_bound() {
    let (fc, uc) = setup();
    let recs = records_in_range(&fc, 3, 1000).unwrap();
    let sp = split_spins(&fc, &uc, 1000).unwrap();
    let rep = prime_sum(&fc, &recs, &sp, 1000).unwrap();
    assert!(rep.checks_passed());
    assert!(rep.metrics["sum_e"].abs() <= rep.metrics["split_count"]);
}

#[test]
fn ideal_enumeration_counts() {
    let (fc, uc) = setup();
    let table = prime_table(&fc, &uc, 2000).unwrap();
    let ideals = enumerate_ideals(&table, 2000).unwrap();
    // Norms multiply out and the list is sorted without repeats.
    assert!(ideals.windows(2).all(|w| w[0] < w[1]));
    for n in &ideals {
        let norm: u64 = (1u64 << n.two) * n.factors.iter().map(|&(t, k)| table.primes[t as usize].norm.pow(k)).product::<u64>();
        assert_eq!(norm, n.norm);
    }
    // Ideals of norm 2^k: just 𝔭₂^k, since 2 is totally ramified.
    assert_eq!(ideals.iter().filter(|n| n.norm == 64).count(), 1);
    // Ideals of norm 41: the eight primes above 41.
    assert_eq!(ideals.iter().filter(|n| n.norm == 41).count(), 8);
    // Norm 17²: the four degree-2 primes above 17.
    assert_eq!(ideals.iter().filter(|n| n.norm == 289).count(), primes_above_u64(&fc, 17).unwrap().len());
}

#[test]
fn mangoldt_at_1e4() {
    let (fc, uc) = setup();
    let rep = mangoldt_sum(&fc, &uc, 10_000).unwrap();
    assert!(rep.checks_passed(), "{:?}", rep.checks);
    assert!(matches!(mangoldt_sum(&fc, &uc, 2_000_000), Err(SumError::Budget(_))));
}

#[test]
fn type1_examples() {
    let (fc, uc) = setup();
    let x = 5000;
    let unit = ideal_from_generator(&fc, &fc.one).unwrap();
    let r = type1_sum(&fc, &uc, &unit, x, 3).unwrap();
    assert!(r.checks_passed(), "{:?}", r.checks);
    assert_eq!(r.metrics["ideal_count"], r.metrics["all_ideals"]);

    let even = type1_sum(&fc, &uc, &prime_above_two(&fc), x, 3).unwrap();
    assert!(even.series("a_sum").unwrap().values.iter().all(|&v| v == 0.0));
    assert!(even.metrics["ideal_count"] > 0.0);

    let q41 = &primes_above_u64(&fc, 41).unwrap()[0];
    let a = type1_sum(&fc, &uc, &q41.ideal, x, 3).unwrap();
    let b = type1_sum(&fc, &uc, &q41.ideal, x, 3).unwrap();
    assert!(a.checks_passed());
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    // Every multiple of 𝔭 with norm ≤ x is 𝔭 times an ideal of norm ≤ x/41.
    let table = prime_table(&fc, &uc, x).unwrap();
    assert_eq!(a.metrics["ideal_count"] as usize, enumerate_ideals(&table, x / 41).unwrap().len());

    let q17 = &primes_above_u64(&fc, 17).unwrap()[0];
    assert!(type1_sum(&fc, &uc, &q17.ideal, x, 3).unwrap().checks_passed());
    assert!(matches!(type1_sum(&fc, &uc, &unit, 200_000, 3), Err(SumError::Budget(_))));
}

#[test]
fn type2_examples() {
    let (fc, uc) = setup();
    let a = type2_sum(&fc, &uc, 256, 256, 7, 20).unwrap();
    assert!(a.checks_passed(), "{:?}", a.checks);
    let b = type2_sum(&fc, &uc, 256, 256, 7, 20).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert_eq!(a.series("b").unwrap().values.len(), 20);
    assert!(matches!(type2_sum(&fc, &uc, 4096, 4096, 7, 20), Err(SumError::Budget(_))));

    let table = prime_table(&fc, &uc, 256).unwrap();
    let ideals = enumerate_ideals(&table, 256).unwrap();
    let odd: Vec<&IdealRec> = ideals.iter().filter(|n| n.is_odd()).collect();
    let m = type2_matrix(&table, &odd, &odd);
    assert_eq!(bilinear(&m, &vec![0; odd.len()], &vec![0; odd.len()]), 0);
    // Symmetric, since a_{𝔪𝔫} = a_{𝔫𝔪}.
    let n = odd.len();
    assert!((0..n).all(|i| (0..n).all(|j| m[i * n + j] == m[j * n + i])));
}

#[test]
fn character_tables() {
    // Jacobi symbols mod 15 and the even modulus 30.
    let chi15 = character_table(15);
    for n in 0..15u64 {
        assert_eq!(chi15[n as usize], spin16::arith::jacobi(n, 15));
    }
    let chi30 = character_table(30);
    for n in 0..30u64 {
        let expect = if n % 2 == 0 { 0 } else { spin16::arith::jacobi(n % 15, 15) };
        assert_eq!(chi30[n as usize], expect);
    }
    assert_eq!(window_length(10_000, 0.125), 3);
    assert_eq!(window_length(65_537, 0.125), 4);
    // A full period of a non-principal character sums to 0.
    assert_eq!(window_max(101, 100, 101), 0);
}

#[test]
fn charsum_small_range() {
    let (fc, _) = setup();
    let p = CharsumParams { q_lo: 1000, q_hi: 3000, theta: 0.125, step: None };
    let a = charsum_scan(&fc, p).unwrap();
    assert!(a.checks_passed(), "{:?}", a.checks);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&charsum_scan(&fc, p).unwrap()).unwrap());
    let b = charsum_scan(&fc, CharsumParams { theta: 0.3, step: Some(3), ..p }).unwrap();
    assert!(b.checks_passed());
    assert!(matches!(charsum_scan(&fc, CharsumParams { q_hi: 20_000_000, ..p }), Err(SumError::Budget(_))));
    assert!(matches!(charsum_scan(&fc, CharsumParams { theta: 1.5, ..p }), Err(SumError::InvalidParameter(_))));
}

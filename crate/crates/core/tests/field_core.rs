use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spin16::field_core::*;

fn fc() -> std::sync::Arc<FieldConstants> {
    FieldConstants::builtin()
}

fn random_element(rng: &mut ChaCha8Rng, bound: i64) -> OMElement {
    OMElement::from_i64s(std::array::from_fn(|_| rng.random_range(-bound..=bound)))
}

#[test]
fn builtin_constants_load() {
    let fc = fc();
    assert_eq!(fc.disc, BigInt::from(1i64 << 22));
    assert_eq!(fc.hash.len(), 64);
}

#[test]
fn load_from_file_matches_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c.json");
    std::fs::write(&p, BUILTIN_CONSTANTS).unwrap();
    let loaded = load_constants(&p).unwrap();
    assert_eq!(loaded.hash, fc().hash);
    assert_eq!(loaded.mult_tensor, fc().mult_tensor);
}

fn corrupt(edit: impl FnOnce(&mut serde_json::Value)) -> String {
    let mut v: serde_json::Value = serde_json::from_str(BUILTIN_CONSTANTS).unwrap();
    edit(&mut v);
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, serde_json::to_string(&v).unwrap()).unwrap();
    load_constants(&p).unwrap_err().to_string()
}

#[test]
fn broken_galois_relation_is_rejected() {
    let msg = corrupt(|v| {
        let s = v["galois_s"].clone();
        v["galois_r"] = s;
    });
    assert!(msg.contains("Galois relation violated"), "{msg}");
}

#[test]
fn broken_tensor_and_units_are_rejected() {
    let msg = corrupt(|v| v["mult_tensor"][1][2][3] = serde_json::json!(7));
    assert!(msg.contains("mult_tensor"), "{msg}");
    let msg = corrupt(|v| v["fund_units"][0] = serde_json::json!([2, 0, 0, 0, 0, 0, 0, 0]));
    assert!(msg.contains("norm"), "{msg}");
    let msg = corrupt(|v| v["schema_version"] = serde_json::json!(2));
    assert!(msg.contains("schema_version"), "{msg}");
    let msg = corrupt(|v| v["disc"] = serde_json::json!(1 << 20));
    assert!(msg.contains("disc"), "{msg}");
}

#[test]
fn unparsable_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("x.json");
    std::fs::write(&p, "{ not json").unwrap();
    assert!(matches!(load_constants(&p), Err(ConstantsError::Parse(_))));
    assert!(matches!(load_constants(&dir.path().join("missing.json")), Err(ConstantsError::Io(_))));
}

#[test]
fn distinguished_elements() {
    let fc = fc();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let x = random_element(&mut rng, 50);
    assert_eq!(om_mul(&fc, &fc.one, &x), x);
    assert_eq!(om_mul(&fc, &fc.zeta8, &fc.zeta8), fc.gen_i);
    assert_eq!(om_mul(&fc, &fc.sqrt_1pi, &fc.sqrt_1pi), om_add(&fc.one, &fc.gen_i));
    assert_eq!(om_add(&x, &om_neg(&x)), OMElement::zero());
}

#[test]
fn norms_of_distinguished_elements() {
    let fc = fc();
    assert_eq!(om_norm(&fc, &fc.one), BigInt::from(1));
    assert_eq!(om_norm(&fc, &fc.zeta8), BigInt::from(1));
    // (1+i) has norm 2 from Q(i); its square root generates the square of the prime above 2.
    assert_eq!(om_norm(&fc, &fc.sqrt_1pi), BigInt::from(4));
    let b = embedding_product(&fc, &fc.sqrt_1pi, DEFAULT_PRECISION);
    assert!(b.contains_integer(&BigInt::from(4)));
    assert_eq!(om_norm(&fc, &om_add(&fc.one, &fc.gen_i)), BigInt::from(16));
}

#[test]
fn galois_examples() {
    let fc = fc();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let x = random_element(&mut rng, 9);
    assert_eq!(galois_apply(&fc, GaloisElement::ID, &x), x);
    assert_eq!(galois_apply(&fc, GaloisElement::R2, &fc.zeta8), fc.zeta8);
    assert_eq!(galois_apply(&fc, GaloisElement::S, &fc.sqrt_1pi), fc.sqrt_1pi);
    // r: ζ ↦ ζ³, s: ζ ↦ ζ⁵
    let z3 = fc.pow(&fc.zeta8, 3);
    assert_eq!(galois_apply(&fc, GaloisElement::R, &fc.zeta8), z3);
    assert_eq!(galois_apply(&fc, GaloisElement::S, &fc.zeta8), fc.pow(&fc.zeta8, 5));
    for g in GaloisElement::all() {
        for h in GaloisElement::all() {
            let gh = galois_apply(&fc, g, &galois_apply(&fc, h, &x));
            assert_eq!(gh, galois_apply(&fc, g.compose(h), &x));
        }
    }
}

#[test]
fn embedding_examples() {
    let fc = fc();
    for k in 1..=8 {
        let e = embed(&fc, &fc.one, k);
        assert!(e.contains_integer(&BigInt::from(1)));
        let z = embed(&fc, &fc.zeta8, k);
        assert!((z.abs_f64() - 1.0).abs() < 2f64.powi(-90) + f64::EPSILON);
        let z8 = embed(&fc, &fc.pow(&fc.zeta8, 8), k);
        assert!(z8.contains_integer(&BigInt::from(1)));
    }
}

#[test]
fn embedding_product_contains_norm() {
    let fc = fc();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let x = random_element(&mut rng, 1000);
        let n = om_norm(&fc, &x);
        let b = embedding_product(&fc, &x, DEFAULT_PRECISION);
        assert!(b.contains_integer(&n), "norm {n} not in the embedding ball");
    }
}

#[test]
fn precision_doubling_beyond_stored_data() {
    let fc = fc();
    let lo = fc.embedding_table(256);
    let hi = fc.embedding_table(720);
    assert_eq!(hi.prec, 720);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let x = random_element(&mut rng, 100);
    for k in 0..8 {
        let a = lo.eval(&x, k);
        let b = hi.eval(&x, k);
        let shifted = ComplexBall {
            re: &a.re << 464,
            im: &a.im << 464,
            prec: 720,
            rad: &a.rad << 464,
        };
        let d = (&shifted.re - &b.re).magnitude().clone() + (&shifted.im - &b.im).magnitude();
        assert!(d <= shifted.rad.clone() * 2u32 + &b.rad * 2u32, "refined table disagrees at {k}");
        assert!(b.rad < (num_bigint::BigUint::from(1u32) << 400));
    }
    let n = om_norm(&fc, &x);
    assert!(embedding_product(&fc, &x, 720).contains_integer(&n));
}

#[test]
fn certified_embeddings_for_tiny_values() {
    let fc = fc();
    let u = fc.pow(&fc.fund_units[1], 40);
    for k in 0..8 {
        let b = fc.embedding_certified(&u, k, 40);
        assert!(b.has_relative_bits(40));
    }
}

#[test]
fn ring_axioms_on_random_triples() {
    let fc = fc();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let x = random_element(&mut rng, 1_000_000);
        let y = random_element(&mut rng, 1_000_000);
        let z = random_element(&mut rng, 1_000_000);
        assert_eq!(fc.mul(&x, &y), fc.mul(&y, &x));
        assert_eq!(fc.mul(&fc.mul(&x, &y), &z), fc.mul(&x, &fc.mul(&y, &z)));
        assert_eq!(fc.mul(&x, &(&y + &z)), &fc.mul(&x, &y) + &fc.mul(&x, &z));
    }
}

#[test]
fn norm_multiplicative_on_random_pairs() {
    let fc = fc();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..1000 {
        let x = random_element(&mut rng, 1_000_000);
        let y = random_element(&mut rng, 1_000_000);
        let nx = om_norm(&fc, &x);
        assert!(nx > BigInt::from(0));
        assert_eq!(om_norm(&fc, &fc.mul(&x, &y)), nx * om_norm(&fc, &y));
    }
}

#[test]
fn galois_product_is_the_norm() {
    let fc = fc();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let x = random_element(&mut rng, 30);
        let conj: Vec<OMElement> = GaloisElement::all().iter().map(|&g| galois_apply(&fc, g, &x)).collect();
        let prod = fc.product(conj.iter());
        assert!(prod.is_rational());
        assert_eq!(prod.coords[0], om_norm(&fc, &x));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn galois_is_a_norm_preserving_ring_map(
        a in proptest::array::uniform8(-1000i64..1000),
        b in proptest::array::uniform8(-1000i64..1000),
        gi in 0usize..8,
    ) {
        let fc = fc();
        let g = GaloisElement::all()[gi];
        let (x, y) = (OMElement::from_i64s(a), OMElement::from_i64s(b));
        let gx = galois_apply(&fc, g, &x);
        let gy = galois_apply(&fc, g, &y);
        prop_assert_eq!(galois_apply(&fc, g, &fc.mul(&x, &y)), fc.mul(&gx, &gy));
        prop_assert_eq!(galois_apply(&fc, g, &(&x + &y)), &gx + &gy);
        prop_assert_eq!(om_norm(&fc, &gx), om_norm(&fc, &x));
    }
}

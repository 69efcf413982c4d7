use super::*;
use crate::ecmodel::registry_lookup;
use crate::modgroup::{cartan_params, named_subgroup, CMOrder, NamedGroup};
use crate::quadfield::QuadNum;
use proptest::prelude::*;

fn e(a: i64, b: i64) -> Curve {
    Curve::short_rational(a, b).unwrap()
}

fn group(disc: i64, modulus: u32, name: &str) -> Subgroup {
    let params = cartan_params(CMOrder::from_disc(disc).unwrap(), modulus).unwrap();
    named_subgroup(&NamedGroup::parse(name).unwrap(), &params).unwrap()
}

#[test]
fn sampling_basics() {
    let d = sample_frobenius_data(&e(1, 0), 2, 3, 2000).unwrap();
    assert!(d.samples.iter().all(|s| s.det as u64 == s.p % 8));
    assert!(invariant_violations(&d, -4).is_empty());
    assert!(matches!(sample_frobenius_data(&e(1, 0), 2, 3, 50), Err(FrobError::Budget(50))));
    assert_eq!(sample_prime(&e(1, 0), 2, 3, 3).unwrap(), Vec::new());
}

#[test]
fn j1728_model_mod_8() {
    let d = sample_frobenius_data(&e(1, 0), 2, 3, 10_000).unwrap();
    let g = group(-4, 32, "G_4_1+c'-1");
    let v = consistency_check(&d, &g);
    assert!(v.consistent, "witness {:?}", v.witness);
    assert!(v.coverage.supported);
    // y^2 = x^3 - 2x has a different image
    let d2 = sample_frobenius_data(&e(-2, 0), 2, 3, 1000).unwrap();
    assert!(!consistency_check(&d2, &g).consistent);
    let n = group(-4, 32, "N");
    assert!(consistency_check(&d2, &n).consistent);
}

#[test]
fn j0_model_mod_9() {
    let d = sample_frobenius_data(&e(0, 16), 3, 2, 10_000).unwrap();
    assert!(consistency_check(&d, &group(-3, 27, "G_6_1+c1")).consistent);
    assert!(invariant_violations(&d, -3).is_empty());
}

#[test]
fn empty_data_is_flagged() {
    let d = FrobData::empty(2, 3).unwrap();
    let v = consistency_check(&d, &group(-4, 32, "N"));
    assert!(v.consistent && v.coverage.flagged_empty && v.coverage.observed == 0);
}

#[test]
fn discrimination_picks_the_image() {
    let names = ["N", "G_4_1+c'-1", "G_4_1+c-1", "G_4_2+c-1", "G_4_2+c'-1"];
    let cands: Vec<Subgroup> = names.iter().map(|n| group(-4, 32, n)).collect();
    for n in [4, 5] {
        let d = sample_frobenius_data(&e(1, 0), 2, n, 4000).unwrap();
        let r = discriminate(&d, &cands).unwrap();
        // d = 1 and d = -4 images share their class data
        assert_eq!(r.best, [1, 2], "{r:?}");
        assert_eq!(r.ambiguous, [(1, 2)]);
    }
    let d = sample_frobenius_data(&e(1, 0), 2, 4, 4000).unwrap();
    let one = discriminate(&d, &cands[..1]).unwrap();
    assert_eq!(one.survivors, [0]);
    let bad = discriminate(&sample_frobenius_data(&e(-2, 0), 2, 4, 1000).unwrap(), &cands[1..2]);
    assert_eq!(bad, Err(FrobError::NoCandidates));
}

#[test]
fn isogeny_character_disc_minus_7() {
    let model = registry_lookup(&CMOrder::new(-7, 1).unwrap()).unwrap().curve;
    let primes: Vec<u64> = arith::primes_up_to(400).into_iter().filter(|&p| p > 7).collect();
    let vals = isogeny_character_values(&model, 7, &primes).unwrap();
    let decided: Vec<u32> = vals.iter().filter_map(|v| v.lambda).collect();
    assert!(decided.len() > 50);
    assert!(decided.iter().all(|&l| is_square_mod(l, 7)), "{vals:?}");
    assert!(vals.iter().any(|v| v.a_p == 0 && v.lambda.is_some()));
    let twist = model.quadratic_twist(&QuadNum::from_ints(-7, 0)).unwrap();
    let tv = isogeny_character_values(&twist, 7, &primes).unwrap();
    assert!(tv.iter().filter_map(|v| v.lambda).any(|l| !is_square_mod(l, 7)));
    for v in vals.iter().chain(tv.iter()) {
        if let Some(l) = v.lambda {
            let mu = (arith::inv_mod(l as i128, 7).unwrap() as u64 * v.p) % 7;
            assert_eq!((l as u64 + mu) % 7, v.a_p.rem_euclid(7) as u64);
        }
    }
}

#[test]
fn logarithm() {
    for &x in &[1e-9, 0.001, 0.5, 1.0, 2.0, 10.0, 12345.6] {
        let y = ln(x);
        assert!((libm_exp(y) - x).abs() <= 1e-9 * x.max(1.0), "{x}");
    }
}

fn libm_exp(y: f64) -> f64 {
    // exp by squaring a Taylor series at y / 2^k
    let k = 20;
    let z = y / (1u64 << k) as f64;
    let mut t = 1.0;
    let mut s = 1.0;
    for i in 1..20 {
        t *= z / i as f64;
        s += t;
    }
    for _ in 0..k {
        s *= s;
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn discrimination_is_monotone(cut in 40usize..300) {
        let names = ["N", "G_4_1+c'-1", "G_4_1+c-1", "G_4_2+c-1", "G_4_2+c'-1", "G_2_1+c1", "G_2_1+c-1"];
        let cands: Vec<Subgroup> = names.iter().map(|n| group(-4, 32, n)).collect();
        let full = sample_frobenius_data(&e(-2, 0), 2, 3, 2500).unwrap();
        let mut part = full.clone();
        part.samples.truncate(cut.min(full.samples.len()));
        let counts: Vec<_> = cands.iter().map(|c| class_counts(c, 8, 2).unwrap()).collect();
        let a = discriminate_counts(&part, &counts).unwrap();
        let b = discriminate_counts(&full, &counts).unwrap();
        for (i, _) in &a.eliminated {
            prop_assert!(b.eliminated.iter().any(|(j, _)| j == i));
        }
    }

    #[test]
    fn hasse_and_det(a in -30i64..30, b in -30i64..30) {
        prop_assume!(4 * a * a * a + 27 * b * b != 0);
        let d = sample_frobenius_data(&e(a, b), 3, 2, 300).unwrap();
        for s in &d.samples {
            prop_assert!((s.a_p * s.a_p) as u64 <= 4 * s.p);
            prop_assert_eq!(s.det as u64, s.p % 9);
        }
    }
}

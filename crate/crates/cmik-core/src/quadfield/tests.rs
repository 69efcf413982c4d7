use super::*;
use alloc::vec;
use proptest::prelude::*;

fn q(m: i64) -> QuadField {
    QuadField::new(m).unwrap()
}

fn el(x: i64, y: i64) -> QuadNum {
    QuadNum::from_ints(x, y)
}

/// Units of height <= bound by brute force.
fn small_units(f: &QuadField, bound: i64) -> Vec<QuadNum> {
    let mut out = Vec::new();
    for x in -bound..=bound {
        for y in -bound..=bound {
            let z = el(x, y);
            if f.norm(&z).abs().is_one() {
                out.push(z);
            }
        }
    }
    out
}

fn same_up_to_sign_inverse(f: &QuadField, u: &QuadNum, v: &QuadNum) -> bool {
    let vi = f.inv(v).unwrap();
    [v.clone(), f.neg(v), vi.clone(), f.neg(&vi)].contains(u)
}

#[test]
fn rejects_bad_radicands() {
    assert!(QuadField::new(1).is_err());
    assert!(QuadField::new(12).is_err());
    assert!(QuadField::new(-5).is_err());
    assert_eq!(q(21).relation(), (1, 5));
    assert_eq!(q(2).relation(), (0, 2));
    assert_eq!(q(21).minpoly(), "x^2-x-5");
}

#[test]
fn fundamental_units_examples() {
    let f = q(21);
    assert!(same_up_to_sign_inverse(&f, &f.fundamental_unit(), &el(3, -1)));
    let f = q(5);
    assert!(same_up_to_sign_inverse(&f, &f.fundamental_unit(), &el(0, 1)));
    let f = q(2);
    assert!(same_up_to_sign_inverse(&f, &f.fundamental_unit(), &el(1, 1)));
}

#[test]
fn fundamental_unit_is_minimal() {
    for m in [2, 3, 5, 6, 7, 13, 17, 21, 29, 33, 37, 41, 61, 89] {
        let f = q(m);
        let u = f.fundamental_unit();
        assert!(f.norm(&u).abs().is_one(), "{m}");
        assert_eq!(f.sign(&f.sub(&u, &f.one())), Ordering::Greater);
        // every unit of small height is +-u^k
        for v in small_units(&f, 60) {
            let mut w = if f.sign(&v) == Ordering::Less { f.neg(&v) } else { v.clone() };
            if f.sign(&f.sub(&w, &f.one())) == Ordering::Less {
                w = f.inv(&w).unwrap();
            }
            let mut p = f.one();
            let mut found = false;
            for _ in 0..40 {
                if p == w {
                    found = true;
                    break;
                }
                p = f.mul(&p, &u);
            }
            assert!(found, "{m}: {v} not a power of {u}");
        }
    }
}

#[test]
fn split_prime_examples() {
    let f = q(21);
    let PrimeSplit::Ramified(p7) = f.split_prime(7).unwrap() else { panic!() };
    assert_eq!(f.norm(&p7).abs(), int(7));
    // same ideal as -4 + a
    let r = f.div(&p7, &el(-4, 1)).unwrap();
    assert!(r.is_integral_coords() && f.norm(&r).abs().is_one());
    let PrimeSplit::Ramified(p3) = f.split_prime(3).unwrap() else { panic!() };
    let r = f.div(&p3, &el(2, -1)).unwrap();
    assert!(r.is_integral_coords() && f.norm(&r).abs().is_one());
    assert_eq!(q(5).split_prime(2).unwrap(), PrimeSplit::Inert);
    assert_eq!(PrimeSplit::Inert.ideal_generators(2), vec![el(2, 0)]);
    assert!(matches!(f.split_prime(5).unwrap(), PrimeSplit::Split(..)));
    assert_eq!(f.split_prime(9), Err(QuadError::NotPrime(9)));
}

#[test]
fn splitting_matches_kronecker() {
    for m in [2, 5, 13, 21, 61] {
        let f = q(m);
        for p in arith::primes_up_to(200) {
            let s = f.split_prime(p).unwrap();
            let k = f.kronecker(p);
            match s {
                PrimeSplit::Split(a, b) => {
                    assert_eq!(k, 1);
                    assert_eq!(f.norm(&a).abs(), int(p as i64));
                    assert_eq!(f.norm(&b).abs(), int(p as i64));
                    let r = f.div(&a, &b).unwrap();
                    assert!(!r.is_integral_coords(), "conjugate primes must differ");
                }
                PrimeSplit::Ramified(a) => {
                    assert_eq!(k, 0);
                    assert_eq!(f.norm(&a).abs(), int(p as i64));
                }
                PrimeSplit::Inert => assert_eq!(k, -1),
            }
        }
    }
}

#[test]
fn twist_candidate_counts() {
    let f = q(21);
    assert_eq!(f.twist_candidates(&[7]).unwrap().len(), 8);
    assert_eq!(f.twist_candidates(&[3, 7]).unwrap().len(), 16);
    let g = q(5);
    let c = g.twist_candidates(&[2, 5]).unwrap();
    assert_eq!(c.len(), 16);
    for want in [el(2, 0), el(1, -2), el(0, 1), el(-2, 0)] {
        assert!(c.iter().any(|z| g.same_square_class(z, &want)), "{want}");
    }
}

#[test]
fn squares_in_field() {
    let f = q(21);
    // (a - 3) / (-7) = ((4 - a) / 7)^2
    let ratio = f.div(&el(-3, 1), &el(-7, 0)).unwrap();
    let root = f.sqrt(&ratio).unwrap();
    assert_eq!(f.mul(&root, &root), ratio);
    assert!(f.same_square_class(&el(-3, 1), &el(-7, 0)));
    assert!(f.is_square(&f.one()));
    assert!(!f.is_square(&el(3, -1)));
    assert!(!f.is_square(&el(-1, 0)));
    // 21 = (2a - 1)^2
    assert!(f.is_square(&el(21, 0)));
    assert!(!q(2).is_square(&el(3, 0)));
    // (4a - 11) / (a + 1) = (3 - a)^2
    assert!(f.same_square_class(&el(-11, 4), &el(1, 1)));
}

#[test]
fn parse_and_display() {
    assert_eq!(parse_linear("-3/2+5*a"), Some(QuadNum::new(field::rat(-3, 2), int(5))));
    assert_eq!(parse_linear("a-1"), Some(el(-1, 1)));
    assert_eq!(parse_linear("-a"), Some(el(0, -1)));
    assert_eq!(parse_linear("7"), Some(el(7, 0)));
    assert_eq!(parse_linear("4131a - 11618"), Some(el(-11618, 4131)));
    assert_eq!(parse_linear("x"), None);
    assert_eq!(alloc::format!("{}", el(-4, 1)), "-4+a");
    assert_eq!(alloc::format!("{}", el(3, -1)), "3-a");
    assert_eq!(alloc::format!("{}", QuadNum::new(field::rat(1, 2), int(2))), "1/2+2*a");
}

#[test]
fn reduction_is_a_ring_map() {
    let f = q(21);
    let fp = PrimeField::new(101);
    for r in f.roots_mod(101) {
        let (a, b) = (el(3, -7), el(-11, 4));
        let ra = f.reduce(&a, &fp, r).unwrap();
        let rb = f.reduce(&b, &fp, r).unwrap();
        assert_eq!(f.reduce(&f.mul(&a, &b), &fp, r).unwrap(), fp.mul(&ra, &rb));
    }
}

proptest! {
    #[test]
    fn square_tests(x in -50i64..50, y in -50i64..50, m in prop::sample::select(vec![2i64, 5, 13, 21, 29])) {
        let f = q(m);
        let z = el(x, y);
        prop_assume!(!f.is_zero(&z));
        let sq = f.mul(&z, &z);
        prop_assert!(f.is_square(&sq));
        prop_assert!(!f.is_square(&f.mul(&sq, &f.fundamental_unit())));
        prop_assert_eq!(f.norm(&sq), f.norm(&z) * f.norm(&z));
        prop_assert_eq!(f.conjugate(&f.conjugate(&z)), z.clone());
        let zi = f.inv(&z).unwrap();
        prop_assert_eq!(f.mul(&z, &zi), f.one());
    }
}

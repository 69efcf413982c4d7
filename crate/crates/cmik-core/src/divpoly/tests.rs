use super::*;
use crate::field::{rat, Rationals};
use proptest::prelude::*;

fn e(a: i64, b: i64) -> Curve {
    Curve::short_rational(a, b).unwrap()
}

fn qpoly(f: &[QuadNum]) -> Vec<BigRational> {
    rational_coefficients(f).unwrap()
}

#[test]
fn small_division_polynomials() {
    let c = e(0, 16 * 5);
    let f3 = division_polynomial(&c, 3).unwrap();
    assert_eq!(qpoly(&f3), [0, 960, 0, 0, 3].map(|n| rat(n, 1)).to_vec());
    assert_eq!(division_polynomial(&c, 2).unwrap(), poly::constant(&BaseField::Rational, QuadNum::from_ints(1, 0)));
    assert!(division_polynomial(&c, 0).is_err());
    let r = division_ratio(&e(-4320, 96768), 4, 2, 2).unwrap();
    let want = poly::mul(&Rationals, &[-288, -96, 1].map(|n| rat(n, 1)), &[-19823616, 801792, -12096, 96, 1].map(|n| rat(n, 1)));
    assert_eq!(qpoly(&r), want);
}

#[test]
fn division_value_matches_polynomial() {
    let c = e(-11, 14);
    let fp = crate::field::PrimeField::new(1009);
    for n in 1..=9u64 {
        let f = division_polynomial(&c, n as u32).unwrap();
        let red = poly::reduce_rat_poly(&fp, &qpoly(&f)).unwrap();
        assert_eq!(division_value_mod_p(&c, n, 1009, 0, 123), Some(poly::eval(&fp, &red, &123)));
    }
}

#[test]
fn frobenius_orders() {
    // y^2 = x^3 + 16 has Q(E[3]) = Q(sqrt -3): Frobenius orders divide 2
    let c = e(0, 16);
    let order = CMOrder::from_disc(-3).unwrap();
    for p in [7u64, 13, 19, 31, 5, 11, 17] {
        let a = ecmodel::trace_of_frobenius(&c, p).unwrap();
        let k = frobenius_order(&order, p, a, 3).unwrap();
        assert!(k == 1 || k == 2, "p={p} k={k}");
    }
    assert_eq!(frobenius_s(-4, 5, 2), Some(2));
    assert_eq!(frobenius_s(-4, 5, 3), None);
}

#[test]
fn torsion_degree_examples() {
    let t = torsion_degree_bounds(&e(1, 0), 8, 300).unwrap();
    assert_eq!(t.group_bound, 16);
    assert_eq!(16 % t.exponent_bound, 0);
    let t = torsion_degree_bounds(&e(0, 16), 3, 168).unwrap();
    assert_eq!(2 % t.group_bound, 0);
    assert_eq!(torsion_degree_bounds(&e(0, 16), 2, 0).unwrap().group_bound, 6);
    assert_eq!(torsion_degree_bounds(&e(-11, 14), 2, 0).unwrap().group_bound, 2);
    assert_eq!(torsion_degree_bounds(&e(1, 0), 2, 0).unwrap().group_bound, 2);
    assert_eq!(torsion_degree_bounds(&e(-1, 0), 2, 0).unwrap().group_bound, 1);
}

#[test]
fn stated_identities() {
    let report = verify_stated_factorizations();
    for c in &report {
        std::println!("{} {} {}", c.id, c.passed, c.details);
    }
    for c in &report {
        assert!(c.passed, "{}: {}", c.id, c.details);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn degrees_and_divisibility(a in -20i64..20, b in -20i64..20) {
        prop_assume!(4 * a * a * a + 27 * b * b != 0);
        let c = e(a, b);
        let fs: Vec<_> = (1..=8u32).map(|n| division_polynomial(&c, n).unwrap()).collect();
        for n in 1..=8u32 {
            prop_assert_eq!(poly::degree(&fs[n as usize - 1]), Some(expected_degree(n)));
            for m in 1..n {
                if n % m == 0 {
                    let q = poly::div_exact(&c.field, &fs[n as usize - 1], &fs[m as usize - 1]);
                    prop_assert!(q.is_some(), "F_{} does not divide F_{}", m, n);
                }
            }
        }
    }
}

use super::*;
use crate::field::Ring;
use crate::hilbert::hilbert_class_polynomial;
use crate::modgroup::CMOrder;
use crate::quadfield::QuadField;
use proptest::prelude::*;

fn q(m: i64) -> BaseField {
    BaseField::Quadratic(QuadField::new(m).unwrap())
}

fn entry(dk: i64, f: u64) -> RegistryEntry {
    registry_lookup(&CMOrder::new(dk, f).unwrap()).unwrap()
}

#[test]
fn registry_rows_parse() {
    let reg = registry();
    assert_eq!(reg.len(), 42);
    let e = entry(-3, 1);
    assert_eq!(e.curve, Curve::short_rational(0, 16).unwrap());
    assert!(e.j.x.is_zero() && e.j.y.is_zero());
    let e = entry(-4, 4);
    assert_eq!(e.curve.field, q(2));
    assert_eq!(e.curve.a[3], QuadNum::from_ints(-22, 15));
    assert_eq!(e.j, QuadNum::from_ints(41113158120, -29071392966));
    let e = entry(-88, 1);
    assert_eq!(e.curve.a[4], QuadNum::from_ints(4008, 2233));
    assert!(registry_lookup(&CMOrder::new(-23, 1).unwrap()).is_err());
}

#[test]
fn conductor_norms() {
    assert_eq!(entry(-3, 7).row.conductor_norm(), Some(49));
    assert_eq!(entry(-3, 1).row.conductor_norm(), Some(27));
    assert_eq!(entry(-40, 1).row.conductor_norm(), Some(4096));
    assert_eq!(entry(-88, 1).row.conductor_norm(), None);
}

#[test]
fn j_invariants_from_examples() {
    assert_eq!(Curve::short_rational(1, 0).unwrap().j_invariant(), QuadNum::from_ints(1728, 0));
    let e = entry(-3, 7);
    assert_eq!(e.j, QuadNum::from_ints(-21226536456192000, 7604567359488000));
    let e = entry(-15, 1);
    let f = e.curve.field;
    let jc = e.curve.conjugate().unwrap().j_invariant();
    assert_eq!(jc, f.conjugate(&e.j));
    assert!(e.j == QuadNum::from_ints(-52515, -85995) || jc == QuadNum::from_ints(-52515, -85995));
}

#[test]
fn registry_j_is_class_polynomial_root() {
    for e in registry() {
        let (h, residual) = hilbert_class_polynomial(e.order.disc()).unwrap();
        assert!(residual < 1e-10);
        let f = e.curve.field;
        let val = h.iter().rev().fold(f.zero(), |acc, c| {
            f.add(&f.mul(&acc, &e.j), &QuadNum::rational(num_rational::BigRational::from_integer(c.clone())))
        });
        assert!(f.is_zero(&val), "row {} {}", e.order.disc_k(), e.order.conductor());
    }
}

#[test]
fn parse_and_display_round_trip() {
    for e in registry() {
        let s = alloc::format!("{}", e.curve);
        assert_eq!(parse_curve(&s, e.curve.field).unwrap(), e.curve, "{s}");
    }
    let c = parse_curve("y^2=x^3+16*81", BaseField::Rational).unwrap();
    assert_eq!(c, Curve::short_rational(0, 1296).unwrap());
    assert!(parse_curve("y^2=x^3+a", BaseField::Rational).is_err());
    assert!(parse_curve("y^2=x^3", BaseField::Rational).is_err());
    assert!(parse_curve("y^3=x^3+1", BaseField::Rational).is_err());
}

#[test]
fn twist_tags() {
    let tag = |s: &str| normalize_twist_parameter(&parse_curve(s, BaseField::Rational).unwrap()).unwrap().tag;
    assert_eq!(tag("y^2=x^3-2x"), "-2");
    assert_eq!(tag("y^2=x^3+16*81"), "81");
    assert_eq!(tag("y^2=x^3+9x"), "t^2");
    assert_eq!(tag("y^2=x^3+x"), "1");
    assert_eq!(tag("y^2=x^3+1"), "t^2");
    assert_eq!(tag("y^2=x^3+16*5"), "generic");
    assert_eq!(tag("y^2=x^3+16*8"), "t^3");
    assert_eq!(tag("y^2=x^3+16*25"), "t^2");
    assert_eq!(tag("y^2=x^3-44x-112"), "-2");
    assert_eq!(tag("y^2=x^3-4320x+96768"), "1");
    assert_eq!(tag("y^2=x^3-1715x-33614"), "-1");
    // y^2 = x^3 + x after x -> x + 1
    assert_eq!(tag("y^2=x^3+3x^2+4x+2"), "1");
}

#[test]
fn quadratic_field_twists() {
    let e = entry(-3, 7);
    let alpha = QuadNum::from_ints(-3, 1);
    let tw = e.curve.quadratic_twist(&alpha).unwrap();
    assert_eq!(tw.j_invariant(), e.j);
    let tc = normalize_twist_parameter(&tw).unwrap();
    assert!(e.curve.field.same_square_class(&tc.parameter, &alpha));
    let conj = e.curve.conjugate().unwrap();
    assert_eq!(normalize_twist_parameter(&conj).unwrap().tag, "1");
}

#[test]
fn conjugation_is_involution() {
    let e = entry(-15, 1);
    assert_eq!(e.curve.conjugate().unwrap().conjugate().unwrap(), e.curve);
    assert!(entry(-4, 1).curve.conjugate().is_err());
}

proptest! {
    #[test]
    fn twist_preserves_j_and_shifts_class(d in -60i64..60, t in 1i64..6) {
        prop_assume!(d != 0);
        let e = entry(-7, 1);
        let tw = e.curve.quadratic_twist(&QuadNum::from_ints(d * t * t, 0)).unwrap();
        prop_assert_eq!(tw.j_invariant(), e.j.clone());
        let tc = normalize_twist_parameter(&tw).unwrap();
        let (core, _) = crate::arith::powerfree_part(d as i128, 2).unwrap();
        prop_assert_eq!(tc.integer(), Some(core));
    }

    #[test]
    fn j1728_twist_action(d in -200i64..200, t in 1i64..5) {
        prop_assume!(d != 0);
        // twist by t sends y^2 = x^3 + d x to y^2 = x^3 + d t^2 x
        let c = Curve::short_rational(d, 0).unwrap().quadratic_twist(&QuadNum::from_ints(t, 0)).unwrap();
        let tc = normalize_twist_parameter(&c).unwrap();
        let (core, _) = crate::arith::powerfree_part((d * t * t) as i128, 4).unwrap();
        prop_assert_eq!(tc.integer(), Some(core));
    }

    #[test]
    fn j0_twist_action(d in -200i64..200, t in 1i64..5) {
        prop_assume!(d != 0);
        let c = Curve::short_rational(0, 16 * d).unwrap().quadratic_twist(&QuadNum::from_ints(t, 0)).unwrap();
        let tc = normalize_twist_parameter(&c).unwrap();
        let (core, _) = crate::arith::powerfree_part((d * t * t * t) as i128, 6).unwrap();
        prop_assert_eq!(tc.integer(), Some(core));
    }
}

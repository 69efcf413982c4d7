use super::*;
use crate::ecmodel::{normalize_twist_parameter, Curve};
use crate::modgroup::{cm_label, named_subgroup};
use proptest::prelude::*;

fn order(d: i64) -> CMOrder {
    CMOrder::from_disc(d).unwrap()
}

fn label_of(a: i64, b: i64, disc: i64, ell: u32) -> String {
    let t = normalize_twist_parameter(&Curve::short_rational(a, b).unwrap()).unwrap();
    assert_eq!(t.order.disc(), disc);
    predict_label(&order(disc), ell, &t).unwrap().to_string()
}

#[test]
fn j1728_boxes() {
    let cases = [
        (-4, "2.2.ns7-4.4.3"),
        (1, "2.2.ns7-4.4.2"),
        (-1, "2.2.ns7-4.4.4"),
        (4, "2.2.ns7-4.4.1"),
        (2, "2.2.ns7-16.4.1"),
        (-2, "2.2.ns7-16.4.4"),
        (8, "2.2.ns7-16.4.2"),
        (-8, "2.2.ns7-16.4.3"),
        (9, "2.2.ns7-4.2.1"),
        (-9, "2.2.ns7-4.2.2"),
        (18, "2.2.ns7-8.2.1"),
        (-18, "2.2.ns7-8.2.2"),
        (3, "2.2.ns7-1.1.1"),
    ];
    for (d, l) in cases {
        assert_eq!(label_of(d, 0, -4, 2), l, "d = {d}");
    }
}

#[test]
fn j0_boxes() {
    let cases = [
        (1, "3.1.ns-9.6.1"),
        (-27, "3.1.ns-9.6.2"),
        (81, "3.1.ns-27.6.1"),
        (-3, "3.1.ns-27.6.3"),
        (9, "3.1.ns-27.6.2"),
        (-243, "3.1.ns-27.6.4"),
        (4, "3.1.ns-9.2.1"),
        (-12, "3.1.ns-9.2.2"),
        (8, "3.1.ns-3.3.1"),
        (24, "3.1.ns-27.3.1"),
        (72, "3.1.ns-27.3.2"),
        (5, "3.1.ns-1.1.1"),
    ];
    for (d, l) in cases {
        assert_eq!(label_of(0, 16 * d, -3, 3), l, "d = {d}");
    }
    assert_eq!(label_of(0, 16, -3, 2), "2.0.ns5-1.1.1");
    assert_eq!(label_of(0, 64, -3, 2), "2.0.ns5-2.3.1");
    assert_eq!(label_of(0, 16 * 32, -3, 2), "2.0.ns5-2.3.1");
}

#[test]
fn disc8_and_disc16_boxes() {
    let d8 = |d: i64| label_of(-4320 * d * d, 96768 * d * d * d, -8, 2);
    assert_eq!(d8(2), "2.3.ns7-16.2.1");
    assert_eq!(d8(1), "2.3.ns7-16.2.2");
    assert_eq!(d8(-1), "2.3.ns7-16.2.3");
    assert_eq!(d8(-2), "2.3.ns7-16.2.4");
    assert_eq!(d8(3), "2.3.ns7-1.1.1");
    let d16 = |d: i64| label_of(-11 * d * d, 14 * d * d * d, -16, 2);
    assert_eq!(d16(2), "2.4.ns7-8.2.1");
    assert_eq!(d16(1), "2.4.ns7-8.2.2");
    assert_eq!(d16(-1), "2.4.ns7-8.2.3");
    assert_eq!(d16(-2), "2.4.ns7-8.2.4");
    assert_eq!(d16(5), "2.4.ns7-1.1.1");
}

#[test]
fn j0_large_primes() {
    // 7 = 7 mod 9: the index-3 family is 7^2 (Q*)^3
    assert_eq!(label_of(0, 16 * 49, -3, 7), "7.0.s-7.3.1");
    assert_eq!(label_of(0, 16 * 7, -3, 7), "7.0.s-1.1.1");
    // 5 = 5 mod 9: r = 1
    assert_eq!(label_of(0, 16 * 5, -3, 5), "5.0.ns-5.3.1");
    assert_eq!(label_of(0, 16 * 25, -3, 5), "5.0.ns-1.1.1");
    assert_eq!(label_of(0, 16, -3, 17), "17.0.ns-1.1.1");
    assert_eq!(label_of(0, 16, -3, 19), "19.0.s-1.1.1");
}

#[test]
fn odd_dividing_rules() {
    assert_eq!(label_of(-1715, 33614, -7, 7), "7.1.ns-7.2.1");
    let m = Curve::short_rational(-1715, 33614).unwrap();
    let t = normalize_twist_parameter(&m.quadratic_twist(&QuadNum::from_ints(-7, 0)).unwrap()).unwrap();
    assert_eq!(predict_label(&order(-7), 7, &t).unwrap().to_string(), "7.1.ns-7.2.2");
    let t = normalize_twist_parameter(&m.quadratic_twist(&QuadNum::from_ints(5, 0)).unwrap()).unwrap();
    assert_eq!(predict_label(&order(-7), 7, &t).unwrap().to_string(), "7.1.ns-1.1.1");
    assert_eq!(predict_label(&order(-7), 5, &t).unwrap().to_string(), "5.0.ns-1.1.1");
}

#[test]
fn admissible_counts() {
    assert_eq!(admissible_images(&order(-64), 2).unwrap().len(), 9);
    assert_eq!(admissible_images(&order(-88), 2).unwrap().len(), 5);
    assert_eq!(admissible_images(&order(-15), 7).unwrap(), vec![NamedGroup::normalizer()]);
    assert!(matches!(admissible_images(&order(-23), 2), Err(ClassifyError::ClassNumber(_))));
}

#[test]
fn uncovered_cells() {
    assert!(matches!(builtin_rows(&order(-15), 2), Err(ClassifyError::Uncovered(..))));
    assert_eq!(builtin_rows(&order(-15), 7).unwrap().len(), 1);
    assert_eq!(builtin_rows(&order(-147), 7).unwrap().len(), 3);
}

#[test]
fn row_labels_match_groups() {
    for (disc, ell) in [(-4, 2), (-8, 2), (-16, 2), (-3, 2), (-3, 3), (-7, 7), (-11, 11), (-12, 3)] {
        let o = order(disc);
        let params = cartan_params(o, working_modulus(ell)).unwrap();
        for r in builtin_rows(&o, ell).unwrap() {
            let g = named_subgroup(&r.named_group().unwrap(), &params).unwrap();
            assert_eq!(cm_label(&g, &o, ell).unwrap().to_string(), r.label, "{disc} {ell} {}", r.condition);
        }
    }
}

#[test]
fn condition_round_trip() {
    let conds = [
        Condition::Tag("-2t^2".into()),
        Condition::FourCube,
        Condition::PowerCube { ell: 7, r: 2 },
        Condition::SquareClass(-7),
        Condition::Alpha(QuadNum::from_ints(-3, 1)),
        Condition::Otherwise,
    ];
    for c in conds {
        assert_eq!(c.to_string().parse::<Condition>().unwrap(), c);
    }
    assert!("d in x".parse::<Condition>().is_err());
}

fn quick() -> MethodConfig {
    MethodConfig { prime_budget: 1500, supersingular_limit: 16 }
}

fn alpha_rows(out: &MethodOutcome) -> Vec<(String, String)> {
    out.rows.iter().map(|r| (r.condition.to_string(), r.label.clone())).collect()
}

#[test]
fn method_disc_minus_147_at_7() {
    let out = run_method(&order(-147), 7, &quick()).unwrap();
    assert_eq!(out.twists.len(), 8);
    let k = BaseField::Quadratic(crate::quadfield::QuadField::new(21).unwrap());
    let rows = &out.rows;
    assert_eq!(rows.len(), 3, "{:?}", alpha_rows(&out));
    let find = |a: QuadNum| rows.iter().find(|r| r.condition.matches_alpha(&a, &k)).unwrap().label.clone();
    assert_eq!(find(QuadNum::from_ints(1, 0)), "7.2.s-7.2.2");
    assert_eq!(find(QuadNum::from_ints(-3, 1)), "7.2.s-7.2.1");
    assert_eq!(rows[2].condition, Condition::Otherwise);
    assert_eq!(rows[2].label, "7.2.s-1.1.1");
}

#[test]
fn method_disc_minus_147_at_3() {
    let out = run_method(&order(-147), 3, &quick()).unwrap();
    assert_eq!(out.twists.len(), 16);
    let k = BaseField::Quadratic(crate::quadfield::QuadField::new(21).unwrap());
    let rows = &out.rows;
    assert_eq!(rows.len(), 3, "{:?}", alpha_rows(&out));
    let find = |a: QuadNum| rows.iter().find(|r| r.condition.matches_alpha(&a, &k)).unwrap().label.clone();
    assert_eq!(find(QuadNum::from_ints(2, -1)), "3.1.ns-3.2.2");
    assert_eq!(find(QuadNum::from_ints(1, 1)), "3.1.ns-3.2.1");
}

#[test]
fn method_maximal_cases() {
    for (d, ell) in [(-40, 5), (-88, 2)] {
        let out = run_method(&order(d), ell, &quick()).unwrap();
        assert_eq!(out.rows.len(), 1, "{d} {ell}: {:?}", alpha_rows(&out));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn rows_partition_j1728(d in -2000i64..2000) {
        prop_assume!(d != 0);
        let t = normalize_twist_parameter(&Curve::short_rational(d, 0).unwrap()).unwrap();
        let rows = builtin_rows(&order(-4), 2).unwrap();
        let hits: Vec<_> = rows.iter().filter(|r| r.condition != Condition::Otherwise && r.condition.matches(&t, &BaseField::Rational)).collect();
        prop_assert!(hits.len() <= 1);
    }

    #[test]
    fn rows_partition_j0(d in -2000i64..2000, ell in prop::sample::select(vec![2u32, 3, 5, 7, 11, 13, 29, 31])) {
        prop_assume!(d != 0);
        let t = normalize_twist_parameter(&Curve::short_rational(0, 16 * d).unwrap()).unwrap();
        let rows = builtin_rows(&order(-3), ell).unwrap();
        let hits: Vec<_> = rows.iter().filter(|r| r.condition != Condition::Otherwise && r.condition.matches(&t, &BaseField::Rational)).collect();
        prop_assert!(hits.len() <= 1);
        prop_assert!(predict_label(&order(-3), ell, &t).is_ok());
    }
}

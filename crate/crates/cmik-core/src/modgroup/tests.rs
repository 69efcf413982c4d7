use super::*;
use alloc::vec;
use alloc::vec::Vec;
use proptest::prelude::*;

fn ord(dk: i64, f: u64) -> CMOrder {
    CMOrder::new(dk, f).unwrap()
}

fn params(dk: i64, f: u64, m: u32) -> CartanParams {
    cartan_params(ord(dk, f), m).unwrap()
}

fn named(p: &CartanParams, s: &str) -> Subgroup {
    named_subgroup(&NamedGroup::parse(s).unwrap(), p).unwrap()
}

/// Unit count of O/l^k O by brute force over pairs `a + b theta`, using the
/// multiplication rule of the order directly.
fn unit_count_oracle(dk: i64, f: u64, m: i64) -> usize {
    let disc = dk * (f * f) as i64;
    // theta^2 = phi theta + delta with integer phi, delta
    let (phi, delta) = if disc.rem_euclid(4) == 0 { (0, disc / 4) } else { (1, (disc - 1) / 4) };
    let mul = |(a, b): (i64, i64), (c, d): (i64, i64)| {
        let bd = b * d;
        ((a * c + bd * delta).rem_euclid(m), (a * d + b * c + bd * phi).rem_euclid(m))
    };
    let mut n = 0;
    for a in 0..m {
        for b in 0..m {
            if (0..m).any(|c| (0..m).any(|d| mul((a, b), (c, d)) == (1 % m, 0))) {
                n += 1;
            }
        }
    }
    n
}

#[test]
fn cartan_params_examples() {
    let p = params(-4, 1, 8);
    assert_eq!((p.delta, p.phi), (7, 0));
    let p = params(-3, 1, 9);
    assert_eq!((p.delta, p.phi), (6, 0));
    let p = params(-3, 1, 2);
    assert_eq!((p.delta, p.phi), (1, 1));
    assert!(CMOrder::new(-12, 1).is_err());
    assert!(cartan_params(ord(-4, 1), 12).is_err());
}

#[test]
fn cartan_orders_match_unit_groups() {
    for &(dk, f) in &[(-4, 1), (-3, 1), (-8, 1), (-7, 1), (-3, 2), (-4, 2), (-3, 3), (-7, 2), (-15, 1)] {
        for &m in &[2u32, 4, 8, 3, 9, 5, 7] {
            let p = params(dk, f, m);
            let c = cartan_group(&p);
            assert_eq!(c.order(), unit_count_oracle(dk, f, m as i64), "{dk} {f} {m}");
            let n = normalizer_group(&p);
            let k = if c.contains(&p.gamma(Gamma::C1)) { 1 } else { 2 };
            assert_eq!(n.order(), k * c.order(), "{dk} {f} {m}");
        }
    }
    assert_eq!(cartan_group(&params(-3, 1, 9)).order(), 54);
    // Z[i]/2 has the two units 1 and i.
    assert_eq!(cartan_group(&params(-4, 1, 2)).order(), 2);
}

#[test]
fn normalizer_is_closed_and_normalizes() {
    for &(dk, f, m) in &[(-4i64, 1u64, 32u32), (-3, 1, 27), (-8, 1, 16), (-3, 1, 8), (-7, 4, 16)] {
        let p = params(dk, f, m);
        let c = cartan_group(&p);
        let n = normalizer_group(&p);
        let closed = close_generators(n.generators(), m).unwrap();
        assert_eq!(closed.packed(), n.packed(), "{dk} {f} {m}");
        let c1 = p.gamma(Gamma::C1);
        for g in c.elements() {
            assert!(c.contains(&c1.mul(&g).mul(&c1.inv())));
        }
        let dets: BTreeSet<u32> = n.elements().map(|g| g.det()).collect();
        let units = (1..m).filter(|x| arith::gcd_u128(*x as u128, m as u128) == 1).count();
        assert_eq!(dets.len(), units);
    }
}

#[test]
fn closure_examples() {
    let id = GL2Mod::identity(8);
    assert_eq!(close_generators(&[id], 8).unwrap().order(), 1);
    assert_eq!(close_generators(&[GL2Mod::scalar(-1, 8).unwrap()], 8).unwrap().order(), 2);
    let mixed = [GL2Mod::identity(8), GL2Mod::identity(4)];
    assert_eq!(close_generators(&mixed, 8), Err(ModGroupError::MixedModuli));
    let p = params(-3, 1, 9);
    let g21 = named(&p, "G_2_1");
    assert_eq!(normalizer_group(&p).order() / g21.order(), 4);
    let g21c = named(&p, "G_2_1+c1");
    assert_eq!(subgroup_index(&g21c, &normalizer_group(&p)).unwrap(), 2);
}

fn idx(p: &CartanParams, s: &str) -> usize {
    subgroup_index(&named(p, s), &normalizer_group(p)).unwrap()
}

#[test]
fn stated_indices() {
    let p = params(-4, 1, 8);
    for (s, i) in [
        ("G_2_1+c1", 2),
        ("G_2_2+c'1", 2),
        ("G_4_1+c-1", 4),
        ("G_4_1+c'-1", 4),
        ("G_4_2+c'-1", 4),
        ("G_4_3+c'1", 4),
        ("G_4_4+c-1", 4),
    ] {
        assert_eq!(idx(&p, s), i, "{s}");
    }
    assert_eq!(idx(&params(-3, 1, 2), "C3+c'1"), 3);
    let p = params(-3, 1, 9);
    for (s, i) in [("G_2_1+c1", 2), ("G_3_1+c1", 3), ("G_3_2+c1", 3), ("G_3_3+c1", 3), ("G_6_1+c1", 6)] {
        assert_eq!(idx(&p, s), i, "{s}");
    }
    let p = params(-3, 1, 27);
    for s in ["G_6_2+c1", "G_6_2+c-1", "G_6_3+c1", "G_6_3+c-1", "G_6_1+c-1"] {
        assert_eq!(idx(&p, s), 6, "{s}");
    }
    for (dk, f, fams) in [(-8, 1, &[3, 4][..]), (-4, 2, &[1, 2]), (-3, 4, &[1, 2]), (-4, 4, &[1, 2, 3, 4]), (-8, 2, &[1, 2, 3, 4]), (-3, 8, &[1, 2, 3, 4]), (-7, 2, &[])] {
        let p = params(dk, f, 16);
        let found: Vec<u8> = named_candidates(&p)
            .iter()
            .filter_map(|g| match g.id {
                GroupId::G(2, t) if g.gamma == Some(Gamma::C1) => Some(t),
                _ => None,
            })
            .collect();
        assert_eq!(found, fams, "{dk} {f}");
        for t in fams {
            for g in ["c1", "c-1"] {
                assert_eq!(idx(&p, &alloc::format!("G_2_{t}+{g}")), 2, "{dk} {f} {t}");
            }
        }
    }
    for (dk, f, l) in [(-7, 1, 7), (-3, 2, 3), (-3, 3, 3), (-11, 1, 11), (-3, 7, 7), (-88, 1, 11)] {
        let p = params(dk, f, l);
        assert_eq!(idx(&p, "G_2_1+c1"), 2);
    }
    assert_eq!(idx(&params(-3, 1, 5), "C3+c1"), 3);
    assert_eq!(idx(&params(-3, 1, 7), "G_3_1r+c1"), 3);
    assert_eq!(idx(&params(-3, 1, 13), "G_3_1r+c-1"), 3);
}

#[test]
fn normalizer_index_four_over_j1728_image() {
    let p = params(-4, 1, 8);
    assert_eq!(idx(&p, "G_4_1+c'-1"), 4);
}

#[test]
fn index_stability_two_adic() {
    let groups_1728 = [
        "G_2_1+c1", "G_2_1+c'1", "G_2_2+c1", "G_2_2+c'1", "G_4_1+c1", "G_4_1+c-1", "G_4_1+c'1", "G_4_1+c'-1",
        "G_4_2+c-1", "G_4_2+c'-1", "G_4_3+c'1", "G_4_3+c-1", "G_4_4+c-1", "G_4_4+c'1",
    ];
    for s in groups_1728 {
        let i8 = idx(&params(-4, 1, 8), s);
        assert_eq!(i8, idx(&params(-4, 1, 16), s), "{s}");
        assert_eq!(i8, idx(&params(-4, 1, 32), s), "{s}");
    }
    for (dk, f) in [(-8, 2), (-4, 4)] {
        for t in 1..=4 {
            let s = alloc::format!("G_2_{t}+c1");
            let i8 = idx(&params(dk, f, 8), &s);
            assert_eq!(i8, idx(&params(dk, f, 32), &s));
        }
    }
}

#[test]
fn index_stability_three_adic() {
    for s in ["G_2_1+c1", "G_3_1+c1", "G_3_2+c1", "G_3_3+c1", "G_6_1+c1", "G_6_2+c1", "G_6_3+c-1"] {
        assert_eq!(idx(&params(-3, 1, 9), s), idx(&params(-3, 1, 27), s), "{s}");
    }
}

#[test]
fn zeta_three_matrix() {
    for m in [9u32, 27] {
        let p = params(-3, 1, m);
        let z = GL2Mod::from_rationals([(-1, 2), (1, 1), (-3, 4), (-1, 2)], m).unwrap();
        assert!(z.pow(3).is_identity());
        assert!(cartan_group(&p).contains(&z));
        assert_eq!(p.cartan_coords(&z).map(|(a, b)| (a as i64, b as i64)), Some((rat_mod(-1, 2, m).unwrap() as i64, 1)));
        let g61 = named(&p, "G_6_1");
        let mut gens: Vec<GL2Mod> = g61.generators().to_vec();
        gens.push(z);
        let joined = close_generators(&gens, m).unwrap();
        assert_eq!(joined.packed(), named(&p, "G_2_1").packed());
    }
}

#[test]
fn minus_identity_joins() {
    let p = params(-4, 1, 8);
    let minus = GL2Mod::scalar(-1, 8).unwrap();
    let a = named(&p, "G_4_1+c'-1").join(&[minus]).unwrap();
    assert_eq!(a.packed(), named(&p, "G_2_1+c'-1").packed());
    let b = named(&p, "G_4_3+c'1").join(&[minus]).unwrap();
    assert_eq!(b.packed(), named(&p, "G_2_2+c'1").packed());
    assert_eq!(named(&p, "G_2_2+c'1").packed(), named(&p, "G_2_2+c'-1").packed());
    assert_eq!(named(&p, "G_2_2+c1").packed(), named(&p, "G_2_2+c-1").packed());
}

#[test]
fn conjugacy_examples() {
    let p = params(-8, 1, 8);
    let n = normalizer_group(&p);
    let h = named(&p, "G_2_4+c1");
    assert!(conjugate_equal(&h, &h, &n));
    let c = cartan_group(&p);
    assert!(!conjugate_equal(&h, &c, &n));
    let p4 = params(-4, 1, 8);
    let n4 = normalizer_group(&p4);
    assert!(conjugate_equal(&named(&p4, "G_2_2+c'1"), &named(&p4, "G_2_2+c'-1"), &n4));
}

#[test]
fn unknown_names_and_gammas() {
    let p = params(-4, 1, 8);
    assert!(matches!(
        named_subgroup(&NamedGroup::parse("G_6_1").unwrap(), &p),
        Err(ModGroupError::UnknownGroup(_))
    ));
    let p3 = params(-3, 1, 9);
    assert!(matches!(
        named_subgroup(&NamedGroup::parse("G_2_1+c'1").unwrap(), &p3),
        Err(ModGroupError::GammaNotAllowed(..))
    ));
}

/// Levels of definition as defined (smallest preimage level), frozen.
#[test]
fn computed_levels() {
    let cases: Vec<(i64, u64, u32, &str, u64)> = vec![
        (-4, 1, 32, "N", 1),
        (-4, 1, 32, "G_2_1+c1", 2),
        (-4, 1, 32, "G_2_1+c'1", 4),
        (-4, 1, 32, "G_2_2+c1", 4),
        (-4, 1, 32, "G_4_1+c'-1", 4),
        (-4, 1, 32, "G_4_3+c'1", 8),
        (-16, 1, 32, "G_2_1+c1", 4),
        (-8, 1, 32, "G_2_3+c1", 8),
        (-3, 1, 27, "G_2_1+c1", 3),
        (-3, 1, 27, "G_3_1+c1", 3),
        (-3, 1, 27, "G_3_2+c1", 9),
        (-3, 1, 27, "G_6_1+c1", 3),
        (-3, 1, 27, "G_6_2+c1", 9),
    ];
    for (dk, f, m, s, lvl) in cases {
        let order = if dk == -16 { ord(-4, 2) } else { ord(dk, f) };
        let p = cartan_params(order, m).unwrap();
        let n = normalizer_group(&p);
        assert_eq!(level_of_definition(&named(&p, s), &n, p.ell).unwrap(), lvl, "{dk} {s}");
    }
}

/// Brute-force oracle for the level: compare each reduction's full preimage with H.
#[test]
fn level_matches_preimage_oracle() {
    let p = params(-4, 1, 16);
    let n = normalizer_group(&p);
    for s in ["G_2_1+c1", "G_2_2+c'1", "G_4_2+c-1", "G_4_4+c'1"] {
        let h = named(&p, s);
        let mut expected = 16u64;
        for q in [1u32, 2, 4, 8, 16] {
            let image = h.reduce(q).unwrap();
            let pre: Vec<u64> = n.elements().filter(|g| image.contains(&g.reduce(q).unwrap())).map(|g| g.pack()).collect();
            if pre == h.packed() {
                expected = q as u64;
                break;
            }
        }
        assert_eq!(level_of_definition(&h, &n, 2).unwrap(), expected, "{s}");
    }
}

fn label_of(order: CMOrder, m: u32, s: &str) -> alloc::string::String {
    let p = cartan_params(order, m).unwrap();
    let ell = p.ell;
    alloc::format!("{}", cm_label(&named(&p, s), &order, ell).unwrap())
}

#[test]
fn printed_labels() {
    assert_eq!(label_of(ord(-8, 1), 32, "N"), "2.3.ns7-1.1.1");
    assert_eq!(label_of(ord(-3, 1), 27, "N"), "3.1.ns-1.1.1");
    assert_eq!(label_of(ord(-3, 3), 27, "G_2_1+c1"), "3.3.ns-3.2.1");
    assert_eq!(label_of(ord(-4, 1), 32, "G_4_1+c'-1"), "2.2.ns7-4.4.2");
    assert_eq!(label_of(ord(-4, 1), 32, "G_4_2+c'-1"), "2.2.ns7-4.4.1");
    assert_eq!(label_of(ord(-4, 1), 32, "G_4_4+c-1"), "2.2.ns7-16.4.4");
    assert_eq!(label_of(ord(-3, 1), 27, "G_6_2+c1"), "3.1.ns-27.6.1");
    assert_eq!(label_of(ord(-7, 1), 7, "G_2_1+c1"), "7.1.ns-7.2.1");
    assert_eq!(label_of(ord(-3, 7), 7, "G_2_1+c-1"), "7.2.s-7.2.2");
    assert_eq!(label_of(ord(-3, 1), 2, "C3+c'1"), "2.0.ns5-2.3.1");
    assert_eq!(label_of(ord(-7, 1), 2, "N"), "2.0.s-1.1.1");
    assert_eq!(label_of(ord(-7, 2), 8, "N"), "2.2.s-1.1.1");
    assert_eq!(label_of(ord(-3, 2), 8, "N"), "2.2.ns5-1.1.1");
    assert_eq!(label_of(ord(-3, 1), 7, "G_3_1r+c1"), "7.0.s-7.3.1");
    assert_eq!(label_of(ord(-3, 1), 5, "C3+c1"), "5.0.ns-5.3.1");
}

#[test]
fn labels_are_conjugation_invariant() {
    let order = ord(-4, 1);
    let p = cartan_params(order, 16).unwrap();
    let n = normalizer_group(&p);
    let h = named(&p, "G_4_3+c-1");
    let base = cm_label(&h, &order, 2).unwrap();
    for g in n.elements().step_by(37) {
        assert_eq!(cm_label(&h.conjugate(&g), &order, 2).unwrap(), base);
    }
}

#[test]
fn uncalibrated_labels_are_flagged() {
    let order = ord(-4, 4);
    let p = cartan_params(order, 32).unwrap();
    let (l, src) = cm_label_detailed(&named(&p, "G_2_1+c1"), &order, 2).unwrap();
    assert_eq!(src, LabelSource::LevelPinned);
    assert_eq!((l.level, l.index), (8, 2));
    let (l4, src4) = cm_label_detailed(&named(&p, "G_2_4+c-1"), &order, 2).unwrap();
    assert_eq!(src4, LabelSource::LevelPinned);
    assert_eq!((l4.level, l4.index), (16, 2));
}

#[test]
fn label_strings_round_trip() {
    for s in ["2.2.ns7-16.4.4", "3.1.ns-27.6.1", "7.2.s-7.2.2", "2.0.ns5-1.1.1"] {
        let l: CMLabel = s.parse().unwrap();
        assert_eq!(alloc::format!("{l}"), s);
    }
    assert!("2.2.ns-1.1.1".parse::<CMLabel>().is_err());
}

fn arb_gl2(m: u32) -> impl Strategy<Value = GL2Mod> {
    (0..m, 0..m, 0..m, 0..m)
        .prop_map(move |(a, b, c, d)| GL2Mod { e: [a, b, c, d], modulus: m })
        .prop_filter("invertible", |g| g.is_invertible())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn reduction_commutes_with_closure(gens in proptest::collection::vec(arb_gl2(16), 1..3)) {
        let h = close_generators(&gens, 16).unwrap();
        let reduced_gens: Vec<GL2Mod> = gens.iter().map(|g| g.reduce(4).unwrap()).collect();
        let a = h.reduce(4).unwrap();
        let b = close_generators(&reduced_gens, 4).unwrap();
        prop_assert_eq!(a.packed(), b.packed());
    }

    #[test]
    fn closure_is_idempotent(gens in proptest::collection::vec(arb_gl2(9), 1..3)) {
        let h = close_generators(&gens, 9).unwrap();
        let els: Vec<GL2Mod> = h.elements().collect();
        let again = close_generators(&els, 9).unwrap();
        prop_assert_eq!(h.packed(), again.packed());
        for g in h.elements() {
            prop_assert!(h.contains(&g.inv()));
        }
    }

    #[test]
    fn matrix_arithmetic(a in arb_gl2(27), b in arb_gl2(27), c in arb_gl2(27)) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.mul(&a.inv()).is_identity());
        prop_assert_eq!(a.mul(&b).reduce(3).unwrap(), a.reduce(3).unwrap().mul(&b.reduce(3).unwrap()));
        prop_assert_eq!(GL2Mod::unpack(a.pack(), 27), a);
    }

    #[test]
    fn cm_label_ignores_conjugation(k in 0usize..200) {
        let order = CMOrder::new(-3, 1).unwrap();
        let p = cartan_params(order, 9).unwrap();
        let n = normalizer_group(&p);
        let g = n.elements().nth(k % n.order()).unwrap();
        let h = named_subgroup(&NamedGroup::parse("G_2_1+c-1").unwrap(), &p).unwrap();
        let l1 = cm_label(&h, &order, 3).unwrap();
        let l2 = cm_label(&h.conjugate(&g), &order, 3).unwrap();
        prop_assert_eq!(l1, l2);
    }
}

#[test]
fn generators_regenerate_groups() {
    let p = params(-3, 1, 27);
    for s in ["G_2_1", "G_6_1", "G_3_1", "C", "C3"] {
        let h = named(&p, s);
        let again = close_generators(h.generators(), 27).unwrap();
        assert_eq!(again.packed(), h.packed(), "{s}");
    }
    let _ = vec![0u8];
}

use std::collections::BTreeMap;

use cmik::data::{load_classification, load_registry, read_json, write_json, ClassificationFile, RegistryFile};
use cmik::regen::cells;
use cmik_core::classify::{builtin_rows, ClassificationRow, Condition, Provenance};
use cmik_core::ecmodel::registry;
use cmik_core::quadfield::BaseField;
use proptest::prelude::*;

fn dir() -> std::path::PathBuf {
    std::path::PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data"))
}

#[test]
fn registry_file_matches_builtin() {
    let stored = load_registry(&dir()).unwrap();
    assert_eq!(stored, RegistryFile::builtin());
    assert_eq!(stored.rows.len(), 42);
    for (rec, e) in stored.rows.iter().zip(registry()) {
        let back = rec.to_entry().unwrap();
        assert_eq!(back.curve, e.curve);
        assert_eq!(back.j, e.j);
    }
}

#[test]
fn json_round_trip() {
    let tmp = std::env::temp_dir().join(format!("cmik-roundtrip-{}.json", std::process::id()));
    let reg = RegistryFile::builtin();
    write_json(&tmp, &reg).unwrap();
    let back: RegistryFile = read_json(&tmp).unwrap();
    assert_eq!(back, reg);
    let cls = load_classification(&dir()).unwrap();
    write_json(&tmp, &cls).unwrap();
    let back: ClassificationFile = read_json(&tmp).unwrap();
    assert_eq!(back, cls);
    let rows = back.rows().unwrap();
    let again: Vec<_> = rows.iter().map(cmik::data::ClassificationRecord::from).collect();
    assert_eq!(again, cls.rows);
    std::fs::remove_file(&tmp).unwrap();
}

fn stored_by_cell() -> BTreeMap<(i64, u32), Vec<ClassificationRow>> {
    let mut m: BTreeMap<(i64, u32), Vec<ClassificationRow>> = BTreeMap::new();
    for r in load_classification(&dir()).unwrap().rows().unwrap() {
        m.entry((r.order.disc(), r.ell)).or_default().push(r);
    }
    m
}

#[test]
fn every_cell_is_stored_once() {
    let m = stored_by_cell();
    let cs = cells();
    assert_eq!(m.len(), cs.len());
    for c in &cs {
        let rows = &m[&(c.order.disc(), c.ell)];
        assert_eq!(rows.last().unwrap().condition, Condition::Otherwise, "{} {}", c.order, c.ell);
        assert_eq!(rows.iter().filter(|r| r.condition == Condition::Otherwise).count(), 1);
    }
}

#[test]
fn stored_printed_rows_equal_builtin() {
    for ((disc, ell), rows) in stored_by_cell() {
        if rows[0].provenance == Provenance::Printed {
            let order = rows[0].order;
            assert_eq!(rows, builtin_rows(&order, ell).unwrap(), "{disc} {ell}");
        }
    }
}

#[test]
fn derived_rows_are_distinct_square_classes() {
    for ((disc, ell), rows) in stored_by_cell() {
        let field = registry().into_iter().find(|e| e.order.disc() == disc).unwrap().curve.field;
        let alphas: Vec<_> = rows
            .iter()
            .filter_map(|r| match &r.condition {
                Condition::Alpha(a) => Some(a.clone()),
                _ => None,
            })
            .collect();
        for (i, a) in alphas.iter().enumerate() {
            for b in &alphas[i + 1..] {
                assert!(!field.same_square_class(a, b), "{disc} {ell}: {a} ~ {b}");
            }
        }
        for r in &rows {
            assert_eq!(r.provenance == Provenance::Ambiguous, r.label.contains('|'), "{disc} {ell}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Random rational twists over Q land in exactly one non-"otherwise" row or none.
    #[test]
    fn stored_rows_partition_rational_twists(d in -500i64..500, k in 0usize..1000) {
        prop_assume!(d != 0);
        let m = stored_by_cell();
        let cell = m.keys().nth(k % m.len()).copied().unwrap();
        let rows = &m[&cell];
        let e = registry().into_iter().find(|e| e.order.disc() == cell.0).unwrap();
        prop_assume!(e.curve.field == BaseField::Rational && cell.0 != -4 && cell.0 != -3);
        let curve = e.curve.quadratic_twist(&cmik_core::quadfield::QuadNum::from_ints(d, 0)).unwrap();
        let t = cmik_core::ecmodel::normalize_twist_parameter(&curve).unwrap();
        let hits = rows.iter().filter(|r| r.condition != Condition::Otherwise && r.condition.matches(&t, &e.curve.field)).count();
        prop_assert!(hits <= 1);
    }
}

mod common;

use std::collections::BTreeSet;

use common::*;
use pgq_core::tables::{parse_table, validate};

#[test]
fn a5_and_s5_classes_match_permutation_enumeration() {
    let a5 = table("a5");
    let sizes: Vec<u64> = a5.classes.iter().map(|c| c.size).collect();
    let orders: Vec<u64> = a5.classes.iter().map(|c| c.element_order).collect();
    assert_eq!(sizes, [1, 15, 20, 12, 12]);
    assert_eq!(orders, [1, 2, 3, 5, 5]);
    let s5 = table("s5");
    let orders: Vec<u64> = s5.classes.iter().map(|c| c.element_order).collect();
    assert_eq!(orders, [1, 2, 2, 3, 6, 4, 5]);

    for (name, t) in [("a5", &a5), ("s5", &s5)] {
        let oracle = conjugacy_classes(&group_for(name));
        assert_eq!(oracle.len(), t.num_classes());
        assert_eq!(
            signature_counts(oracle.iter().map(|c| (c.order, c.size))),
            signature_counts(t.classes.iter().map(|c| (c.element_order, c.size))),
            "{name}"
        );
    }
}

#[test]
fn every_fixture_matches_its_permutation_group() {
    for name in FIXTURES {
        let t = table(name);
        let group = group_for(name);
        assert_eq!(group.len() as u64, t.order, "{name}");
        let oracle = conjugacy_classes(&group);
        assert_eq!(
            signature_counts(oracle.iter().map(|c| (c.order, c.size))),
            signature_counts(t.classes.iter().map(|c| (c.element_order, c.size))),
            "{name}"
        );
        assert_eq!(t.classes[0].element_order, 1);
        assert_eq!(t.classes[0].size, 1);

        // power maps agree with actual powers up to the (order, size) label
        let oracle_sig = |p: &Perm| {
            let c = oracle.iter().find(|c| {
                c.order == perm_order(p) && {
                    let g = &c.representative;
                    group.iter().any(|h| compose(h, &compose(g, &inverse(h))) == *p)
                }
            });
            let c = c.unwrap();
            (c.order, c.size)
        };
        for (&r, map) in &t.power_maps {
            for (i, &img) in map.iter().enumerate() {
                let sig = (t.classes[i].element_order, t.classes[i].size);
                let source = oracle.iter().find(|c| (c.order, c.size) == sig).unwrap();
                let expected = oracle_sig(&power(&source.representative, r));
                assert_eq!(
                    (t.classes[img].element_order, t.classes[img].size),
                    expected,
                    "{name}: class {} to the {r}",
                    t.classes[i].name
                );
            }
        }
    }
}

#[test]
fn fixtures_validate() {
    for name in FIXTURES {
        let report = validate(&table(name));
        assert!(report.all_passed(), "{name}: {report:?}");
    }
}

#[test]
fn spectra_and_prime_graphs() {
    assert_eq!(table("a5").spectrum(), BTreeSet::from([1, 2, 3, 5]));
    let g = table("a5").prime_graph();
    assert_eq!(g.vertices, BTreeSet::from([2, 3, 5]));
    assert!(g.edges.is_empty());

    let s7 = table("s7").spectrum();
    assert!(s7.contains(&10));
    for n in [14, 21, 35] {
        assert!(!s7.contains(&n));
    }
    // spectra from the permutation groups themselves
    for name in FIXTURES {
        let orders: BTreeSet<u64> = group_for(name).iter().map(perm_order).collect();
        assert_eq!(table(name).spectrum(), orders, "{name}");
    }
    assert_eq!(table("s7").prime_graph().edges, BTreeSet::from([(2, 3), (2, 5)]));
    assert_eq!(table("a7").prime_graph().edges, BTreeSet::from([(2, 3)]));
}

#[test]
fn truncated_documents_are_rejected() {
    let text = std::fs::read_to_string(fixture_path("a5")).unwrap();
    assert!(parse_table(&text[..text.len() / 2]).is_err());
    assert!(parse_table(&text).is_ok());
}

#[test]
fn perturbed_value_fails_at_its_column() {
    let text = std::fs::read_to_string(fixture_path("a5")).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    // character 1, class 2: add 1 to the rational value
    let entry = &mut doc["irreducibles"][1][2];
    let old: i64 = entry["coeffs"][0].as_str().unwrap().parse().unwrap();
    entry["coeffs"][0] = serde_json::json!((old + 1).to_string());
    let t = parse_table(&doc.to_string()).unwrap();
    let report = validate(&t);
    let col = report.check("column orthogonality").unwrap();
    assert!(!col.passed);
    assert!(col.counterexample.as_ref().unwrap().contains("3a"), "{col:?}");
}

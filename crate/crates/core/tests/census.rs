use ctk_core::arquiver::build_cluster_category;
use ctk_core::classify::{classify_object, minimal_period, tau_image, verify_theorems, Census, Symmetry};
use ctk_core::diagram::{build_diagram, DynkinKind::*};
use ctk_core::homcalc::ExtTable;
use ctk_core::tilting::{enumerate_brute, exchange_graph, Compat};
use ctk_core::CtkError;

#[test]
fn a3_has_fourteen_objects_with_expected_periods() {
    let rep = verify_theorems(&build_diagram(A, 3).unwrap()).unwrap();
    assert!(rep.is_clean(), "{:?}", rep.violations);
    assert_eq!(rep.objects, 14);
    assert_eq!(rep.period_histogram.get(&2), Some(&2));
    assert_eq!(rep.period_histogram.get(&3), Some(&6));
    assert_eq!(rep.period_histogram.get(&6), Some(&6));
}

#[test]
fn a5_two_symmetric_objects_have_half_period() {
    let census = Census::new(&build_diagram(A, 5).unwrap()).unwrap();
    let mut halves = 0;
    for i in 0..census.objects.len() {
        let (rec, _) = classify_object(&census, i);
        if rec.min_period == 4 {
            halves += 1;
            assert_eq!(rec.symmetry, Symmetry::A2sym);
        }
    }
    assert_eq!(halves, 20);
}

#[test]
fn d4_objects_of_period_two_exist() {
    let rep = verify_theorems(&build_diagram(D, 4).unwrap()).unwrap();
    assert!(rep.is_clean(), "{:?}", rep.violations);
    assert_eq!(rep.objects, 50);
    assert!(rep.period_histogram.contains_key(&2));
}

#[test]
fn e6_periods_are_seven_or_fourteen() {
    let rep = verify_theorems(&build_diagram(E, 6).unwrap()).unwrap();
    assert!(rep.is_clean(), "{:?}", rep.violations);
    assert!(rep.period_histogram.keys().all(|s| [7, 14].contains(s)));
}

#[test]
fn three_cluster_category_of_a2() {
    let c = build_cluster_category(&build_diagram(A, 2).unwrap(), 3).unwrap();
    let ext = ExtTable::new(&c).unwrap();
    let brute = enumerate_brute(&c, &ext).unwrap();
    let mut bfs = exchange_graph(&c, &ext).unwrap().sorted_nodes();
    bfs.dedup();
    assert_eq!(brute, bfs);
    // Fuss-Catalan number C^{(3)}_2 = 12.
    assert_eq!(brute.len(), 12);
}

#[test]
fn tau_permutes_the_census() {
    let census = Census::new(&build_diagram(D, 5).unwrap()).unwrap();
    let c = &census.category;
    let compat = Compat::new(&census.ext);
    for t in &census.objects {
        let u = tau_image(c, t, 1);
        assert!(compat.is_cluster_tilting(&u.members));
        assert!(census.index_of(&u).is_some());
        assert_eq!(minimal_period(c, &u), minimal_period(c, t));
    }
}

#[test]
fn records_serialise_to_json() {
    let rep = verify_theorems(&build_diagram(A, 2).unwrap()).unwrap();
    let json = serde_json::to_string(&rep).unwrap();
    let back: ctk_core::classify::TheoremReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back.objects, rep.objects);
    assert_eq!(back.records.len(), 5);
}

#[test]
fn unsupported_ranks_are_rejected() {
    assert!(matches!(build_diagram(E, 9), Err(CtkError::InvalidDiagram(_))));
    assert!(build_diagram(D, 3).is_err());
    assert!(build_diagram(A, 0).is_err());
}

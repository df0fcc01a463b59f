use std::sync::Arc;

use ctk_core::arquiver::{build_orbit_category, build_window, default_width, FunctorSpec};
use ctk_core::catalog::{direct_search, periodic_in_c2, push_forward, shift_acts_as_tau, verify_catalog};
use ctk_core::classify::{minimal_period, Census};
use ctk_core::diagram::{build_diagram, DynkinKind::*};
use ctk_core::homcalc::ExtTable;
use ctk_core::tilting::Compat;

#[test]
fn a2_catalog_is_clean() {
    let census = Census::new(&build_diagram(A, 2).unwrap()).unwrap();
    let rep = verify_catalog(&census, 1..=10, &[0, 1]).unwrap();
    assert!(rep.is_clean(), "{:?}", rep.violations);
    assert_eq!(rep.entries.len(), 20);
}

#[test]
fn d4_has_cluster_tilting_exactly_for_even_powers() {
    let census = Census::new(&build_diagram(D, 4).unwrap()).unwrap();
    let rep = verify_catalog(&census, 1..=8, &[0]).unwrap();
    assert!(rep.is_clean(), "{:?}", rep.violations);
    for e in &rep.entries {
        assert_eq!(e.observed, Some(e.a % 2 == 0), "τ^{}", e.a);
    }
}

#[test]
fn e7_has_cluster_tilting_only_at_tau_ten() {
    let census = Census::new(&build_diagram(E, 7).unwrap()).unwrap();
    let rep = verify_catalog(&census, 1..=12, &[0]).unwrap();
    assert!(rep.is_clean(), "{:?}", rep.violations);
    let hits: Vec<i64> = rep.entries.iter().filter(|e| e.observed == Some(true)).map(|e| e.a).collect();
    assert_eq!(hits, vec![10]);
}

#[test]
fn a3_tau_three_image_has_three_summands() {
    let d = build_diagram(A, 3).unwrap();
    let census = Census::new(&d).unwrap();
    let c2 = &census.category;
    let o = build_orbit_category(&d, 3, 0).unwrap();
    let i = periodic_in_c2(&census, FunctorSpec::new(3, 0))[0];
    let img = push_forward(c2, &o, &census.objects[i]).unwrap();
    assert_eq!(img.len(), 3);
    let ext = ExtTable::new(&o).unwrap();
    assert!(Compat::new(&ext).is_cluster_tilting(&img.members));
}

#[test]
fn e8_period_four_objects_push_forward() {
    let d = build_diagram(E, 8).unwrap();
    let census = Census::new(&d).unwrap();
    let w = Arc::new(build_window(&d, default_width(&d)).unwrap());
    let f = FunctorSpec::new(4, 0);
    let periodic = periodic_in_c2(&census, f);
    assert!(!periodic.is_empty());
    assert!(periodic.iter().all(|&i| minimal_period(&census.category, &census.objects[i]) == 4));
    let direct = direct_search(&w, census.category.vertex_count(), f).unwrap();
    assert_eq!(direct.objects.len(), periodic.len());
    let img = push_forward(&census.category, &direct.category, &census.objects[periodic[0]]).unwrap();
    assert!(direct.objects.binary_search(&img).is_ok());
}

#[test]
fn non_periodic_objects_do_not_push_forward() {
    let d = build_diagram(A, 4).unwrap();
    let census = Census::new(&d).unwrap();
    let o = build_orbit_category(&d, 7, 0).unwrap();
    let t = &census.objects[0];
    assert!(push_forward(&census.category, &o, t).is_ok());
    let o3 = build_orbit_category(&d, 3, 0).unwrap();
    assert!(push_forward(&census.category, &o3, t).is_err());
}

#[test]
fn shift_is_tau_power_in_cluster_category() {
    let census = Census::new(&build_diagram(A, 3).unwrap()).unwrap();
    assert!(shift_acts_as_tau(&census.category, 2, 1));
}

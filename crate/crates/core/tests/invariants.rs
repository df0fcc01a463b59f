use std::sync::OnceLock;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use ctk_core::arquiver::{build_window, default_width, FunctorSpec, ZVertex};
use ctk_core::catalog::periodic_in_c2;
use ctk_core::classify::{minimal_period, quiver_canonical, quiver_iso, tau_image, Census};
use ctk_core::diagram::{build_diagram, DynkinKind, DynkinKind::*};
use ctk_core::tilting::{fz_mutate, mutate, AlgQuiver, Compat};

const SMALL: &[(DynkinKind, usize)] = &[(A, 2), (A, 3), (A, 4), (A, 5), (D, 4), (D, 5), (E, 6)];

fn census(i: usize) -> &'static Census {
    static CACHE: OnceLock<Vec<Census>> = OnceLock::new();
    let all = CACHE.get_or_init(|| SMALL.iter().map(|&(k, n)| Census::new(&build_diagram(k, n).unwrap()).unwrap()).collect());
    &all[i]
}

fn permuted(q: &AlgQuiver, perm: &[usize]) -> AlgQuiver {
    let n = q.len();
    let mut b = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            b[perm[i]][perm[j]] = q.b[i][j];
        }
    }
    let mut labels = vec![0; n];
    for i in 0..n {
        labels[perm[i]] = q.labels[i];
    }
    AlgQuiver { labels, b }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mutation_is_an_involution(c in 0..SMALL.len(), seed in any::<usize>(), k in any::<usize>()) {
        let census = census(c);
        let compat = Compat::new(&census.ext);
        let t = &census.objects[seed % census.objects.len()];
        let x = t.members[k % t.len()];
        let u = mutate(&compat, t, x).unwrap();
        prop_assert!(compat.is_cluster_tilting(&u.members));
        prop_assert_ne!(&u, t);
        let y = *u.members.iter().find(|m| !t.contains(**m)).unwrap();
        prop_assert_eq!(&mutate(&compat, &u, y).unwrap(), t);
    }

    #[test]
    fn quiver_mutation_tracks_object_mutation(c in 0..SMALL.len(), seed in any::<usize>(), k in any::<usize>()) {
        let census = census(c);
        let compat = Compat::new(&census.ext);
        let i = seed % census.objects.len();
        let t = &census.objects[i];
        let pos = k % t.len();
        let q = &census.quivers[i];
        let x = q.labels[pos];
        let u = mutate(&compat, t, x).unwrap();
        let j = census.index_of(&u).unwrap();
        let mut expected = fz_mutate(q, pos);
        expected.labels[pos] = *u.members.iter().find(|m| !t.contains(**m)).unwrap();
        prop_assert_eq!(expected.normalized(), census.quivers[j].normalized());
    }

    #[test]
    fn tau_preserves_quiver_class_and_period(c in 0..SMALL.len(), seed in any::<usize>(), s in -20i64..20) {
        let census = census(c);
        let cat = &census.category;
        let i = seed % census.objects.len();
        let t = &census.objects[i];
        let u = tau_image(cat, t, s);
        let j = census.index_of(&u).unwrap();
        prop_assert!(quiver_iso(&census.quivers[i], &census.quivers[j]));
        prop_assert_eq!(minimal_period(cat, t), minimal_period(cat, &u));
        let p = minimal_period(cat, t) as i64;
        prop_assert_eq!(&tau_image(cat, t, s * p), t);
    }

    #[test]
    fn canonical_form_ignores_vertex_order(c in 0..SMALL.len(), seed in any::<usize>(), perm_seed in any::<u64>()) {
        let census = census(c);
        let q = &census.quivers[seed % census.quivers.len()];
        let n = q.len();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut StdRng::seed_from_u64(perm_seed));
        let p = permuted(q, &perm);
        prop_assert_eq!(quiver_canonical(q), quiver_canonical(&p));
    }

    #[test]
    fn periodicity_in_c2_depends_on_a_plus_b(c in 0..SMALL.len(), a in -12i64..12, b in 0i64..3) {
        let census = census(c);
        prop_assert_eq!(periodic_in_c2(census, FunctorSpec::new(a, b)), periodic_in_c2(census, FunctorSpec::new(a + b, 0)));
    }

    #[test]
    fn mesh_automorphisms_form_a_group(c in 0..SMALL.len(), a in -6i64..6, b in -3i64..3, j in -4i64..4, k in -4i64..4) {
        let d = &census(c).category.diagram;
        let w = build_window(d, default_width(d)).unwrap();
        let f = w.functor(a, b);
        prop_assert_eq!(f.pow(j).compose(&f.pow(k)), f.pow(j + k));
        prop_assert_eq!(f.compose(&f.inverse()), ctk_core::arquiver::MeshAutomorphism::identity(d.rank));
        let v = ZVertex::new(0, 3);
        prop_assert_eq!(f.inverse().apply(f.apply(v)), v);
    }
}

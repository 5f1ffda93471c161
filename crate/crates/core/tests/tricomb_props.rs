mod common;

use std::collections::HashSet;

use hyperbound::tricomb::*;
use proptest::prelude::*;

use common::pairings::class_counts;

fn oriented() -> FilterSet {
    FilterSet {
        orientation: OrientationMode::Orientable,
        ..FilterSet::none()
    }
}

#[test]
fn enumeration_matches_brute_force_orbits() {
    for n in 1..=2 {
        let (all, orientable) = class_counts(n);
        let any = enumerate_pairings(n, &FilterSet::none()).unwrap();
        let ori = enumerate_pairings(n, &oriented()).unwrap();
        assert_eq!(any.len(), all, "n = {n}, any orientation");
        assert_eq!(ori.len(), orientable, "n = {n}, orientable");
        assert_eq!(
            any.iter().filter(|(_, p)| p.is_orientable()).count(),
            orientable
        );
    }
}

#[test]
fn one_tetrahedron_counts() {
    assert_eq!(class_counts(1), (11, 4));
    assert_eq!(common::pairings::labeled_pairings(1).len(), 108);
}

#[test]
fn census_filter_at_small_n() {
    assert!(enumerate_pairings(1, &FilterSet::census())
        .unwrap()
        .is_empty());
    let two = enumerate_pairings(2, &FilterSet::census()).unwrap();
    assert_eq!(two.len(), 8);
    for (_, p) in &two {
        let edges = edge_classes(p);
        assert_eq!(edges.len(), 1);
        assert_eq!(edges[0].valence, 12);
        assert_eq!(boundary_pattern(p).unwrap().label(), "S2");
    }
}

#[test]
fn no_duplicate_signatures() {
    for n in 1..=2 {
        let all = enumerate_pairings(n, &FilterSet::none()).unwrap();
        let sigs: HashSet<&String> = all.iter().map(|(s, _)| s).collect();
        assert_eq!(sigs.len(), all.len());
        for (s, p) in &all {
            assert_eq!(&isomorphism_signature(p).unwrap(), s);
            let q = Pairing::from_signature(s).unwrap();
            assert_eq!(&isomorphism_signature(&q).unwrap(), s);
        }
    }
}

#[test]
fn handlebody_bookkeeping() {
    for n in 1..=2 {
        for (_, p) in enumerate_pairings(n, &FilterSet::none()).unwrap() {
            let y = build_relative_handlebody(&p).unwrap();
            assert_eq!(y.genus, n + 1);
            assert_eq!(y.complexity, 10 * n);
            assert!((y.volume - n as f64 * 3.66386).abs() < 1e-5 * n as f64);
            assert_eq!(y.valences.iter().sum::<usize>(), 6 * n);
        }
    }
}

#[test]
fn text_round_trip() {
    for (_, p) in enumerate_pairings(2, &oriented()).unwrap() {
        assert_eq!(Pairing::from_text(&p.to_text()).unwrap(), p);
    }
}

fn pairing_strategy() -> impl Strategy<Value = Pairing> {
    let pool: Vec<Pairing> = enumerate_pairings(2, &FilterSet::none())
        .unwrap()
        .into_iter()
        .chain(enumerate_pairings(1, &FilterSet::none()).unwrap())
        .map(|(_, p)| p)
        .collect();
    proptest::sample::select(pool)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn signature_stable_under_relabeling(
        p in pairing_strategy(),
        swap in any::<bool>(),
        labels in proptest::collection::vec(0usize..24, 2),
    ) {
        let n = p.size();
        let tet_map: Vec<usize> = if n == 2 && swap { vec![1, 0] } else { (0..n).collect() };
        let vmaps: Vec<Perm4> = (0..n).map(|t| Perm4::all()[labels[t]]).collect();
        let q = p.relabel(&tet_map, &vmaps);
        prop_assert_eq!(isomorphism_signature(&q).unwrap(), isomorphism_signature(&p).unwrap());
        prop_assert_eq!(q.is_orientable(), p.is_orientable());
    }

    #[test]
    fn gluings_are_involutions(p in pairing_strategy()) {
        for t in 0..p.size() {
            for f in 0..4 {
                let g = p.gluing(t, f);
                let back = p.gluing(g.tet, g.perm.apply(f));
                prop_assert_eq!(back.tet, t);
                prop_assert_eq!(back.perm, g.perm.inverse());
            }
        }
    }

    #[test]
    fn euler_consistency(p in pairing_strategy()) {
        let edges = edge_classes(&p);
        prop_assert_eq!(edges.iter().map(|e| e.valence).sum::<usize>(), 6 * p.size());
        if is_manifold(&p).manifold {
            // the link Euler characteristics add up to 2χ(M) = 2(e − n)
            let links: i64 = vertex_classes(&p).iter().map(|v| v.link_euler).sum();
            prop_assert_eq!(links, 2 * (edges.len() as i64 - p.size() as i64));
        }
    }

    #[test]
    fn oriented_relabeling_is_odd(p in pairing_strategy()) {
        match p.oriented() {
            Some((q, _)) => {
                prop_assert!(q.all_gluings_odd());
                prop_assert_eq!(isomorphism_signature(&q).unwrap(), isomorphism_signature(&p).unwrap());
            }
            None => prop_assert!(!p.is_orientable()),
        }
    }
}

#[test]
fn moves_round_trip_on_every_oriented_pair() {
    for (sig, p) in enumerate_pairings(2, &oriented()).unwrap() {
        for (t, f) in p.faces() {
            let Ok(up) = p.move_2_3(t, f) else { continue };
            assert_eq!(up.pairing.size(), 3);
            let back = up
                .pairing
                .valence_three_edges()
                .iter()
                .filter_map(|e| up.pairing.move_3_2(e).ok())
                .any(|r| isomorphism_signature(&r.pairing).unwrap() == sig);
            assert!(back, "{sig} face {t}.{f}");
        }
    }
}

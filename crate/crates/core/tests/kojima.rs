use std::f64::consts::PI;

use hyperbound::geosolve::*;
use hyperbound::kojima::*;
use hyperbound::tetshape::edge_index;
use hyperbound::tricomb::*;
use nalgebra::Matrix4;
use proptest::prelude::*;

fn minimal() -> Vec<(String, GeometricSolution)> {
    enumerate_pairings(2, &FilterSet::census())
        .unwrap()
        .into_iter()
        .map(|(sig, p)| {
            let s = solve(&p, &CuspMarks::none(), &SolverConfig::default()).unwrap();
            (sig, s)
        })
        .collect()
}

fn three_tet_solutions() -> Vec<GeometricSolution> {
    enumerate_pairings(3, &FilterSet::census())
        .unwrap()
        .into_iter()
        .filter(|(_, p)| boundary_pattern(p).unwrap().label() == "S2")
        .filter_map(|(_, p)| solve(&p, &CuspMarks::none(), &SolverConfig::default()).ok())
        .collect()
}

/// A 2-3 move on the face `tet.face` (between distinct tetrahedra),
/// re-solved on the new triangulation.
fn subdivided(sol: &GeometricSolution, tet: usize, face: usize) -> GeometricSolution {
    let mv = sol.pairing.move_2_3(tet, face).unwrap();
    solve(&mv.pairing, &CuspMarks::none(), &SolverConfig::default()).unwrap()
}

fn inner_faces(p: &Pairing) -> Vec<(usize, usize)> {
    p.faces()
        .into_iter()
        .filter(|&(t, f)| p.gluing(t, f).tet != t)
        .collect()
}

#[test]
fn two_tetrahedron_manifolds_are_canonical() {
    for (sig, s) in minimal() {
        let report = tilt_report(&s, EPS_TILT).unwrap();
        assert!(report.is_canonical());
        assert_eq!(report.faces.len(), 4);
        let d = canonize(&s).unwrap();
        assert_eq!(d.moves, 0);
        assert_eq!(d.certification, Certification::Tilts);
        assert_eq!(d.signature, format!("T T | {sig}"));
    }
}

#[test]
fn dual_routes_agree_in_sign() {
    let mut solutions: Vec<GeometricSolution> = minimal().into_iter().map(|(_, s)| s).collect();
    solutions.extend(three_tet_solutions());
    let (sig, s) = minimal().remove(0);
    let (t, f) = inner_faces(&s.pairing)[0];
    solutions.push(subdivided(&s, t, f));
    let mut checked = 0;
    let mut concave = 0;
    for s in &solutions {
        for (tet, face) in s.pairing.faces() {
            let sum = tilt_sum(s, tet, face).unwrap();
            let gap = developed_gap(s, tet, face).unwrap();
            if sum.abs() > 1e-6 {
                assert_eq!(
                    sum < 0.0,
                    gap > 0.0,
                    "{sig} {tet}.{face}: tilt {sum}, gap {gap}"
                );
                checked += 1;
                concave += usize::from(sum > 0.0);
            }
        }
    }
    assert!(checked > 100);
    assert!(concave > 0, "no concave face exercised");
}

#[test]
fn tilt_sum_is_symmetric() {
    for s in three_tet_solutions().iter().take(30) {
        for (tet, face) in s.pairing.faces() {
            let g = s.pairing.gluing(tet, face);
            let a = tilt_sum(s, tet, face).unwrap();
            let b = tilt_sum(s, g.tet, g.perm.apply(face)).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn gap_is_lorentz_invariant() {
    let (_, s) = minimal().remove(0);
    let (first, second) = develop_pair(&s, 0, 0).unwrap();
    let g = s.pairing.gluing(0, 0);
    let (c, sh) = (0.7_f64.cosh(), 0.7_f64.sinh());
    let boost = Matrix4::new(
        c, 0.0, 0.0, sh, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, sh, 0.0, 0.0, c,
    );
    let gap = |a: &MinkowskiFrame, b: &MinkowskiFrame| {
        lorentz(&b.duals[g.perm.apply(0)], &a.support().unwrap()) - 1.0
    };
    let before = gap(&first, &second);
    let after = gap(&first.transformed(&boost), &second.transformed(&boost));
    assert!((before - after).abs() < 1e-9);
    assert!((before - developed_gap(&s, 0, 0).unwrap()).abs() < 1e-12);
    // duals of truncated vertices are unit spacelike
    for p in &first.duals {
        assert!((lorentz(p, p) - 1.0).abs() < 1e-10);
    }
}

#[test]
fn perturbed_angles_do_not_glue() {
    let (_, mut s) = minimal().remove(0);
    s.assignment.angles[0][0] += 1e-3;
    let errs: Vec<_> = (0..4)
        .filter_map(|f| developed_gap(&s, 0, f).err())
        .collect();
    assert!(!errs.is_empty());
    assert!(errs
        .iter()
        .all(|e| matches!(e, KojimaError::NonMatchingFace { .. })));
}

#[test]
fn subdivision_is_undone() {
    for (sig, s) in minimal() {
        let mut signatures = Vec::new();
        for (t, f) in inner_faces(&s.pairing).into_iter().take(2) {
            let fine = subdivided(&s, t, f);
            assert_eq!(fine.pairing.size(), 3);
            assert!((fine.volume - s.volume).abs() < 1e-8);
            let report = tilt_report(&fine, EPS_TILT).unwrap();
            assert!(!report.is_canonical());
            let d = canonize(&fine).unwrap();
            assert!(d.moves >= 1);
            assert_eq!(d.certification, Certification::Tilts);
            signatures.push(d.signature);
        }
        assert_eq!(signatures.len(), 2);
        assert!(signatures.iter().all(|x| *x == format!("T T | {sig}")));
    }
}

#[test]
fn octahedral_structure_gives_octahedra() {
    for (_, p) in enumerate_pairings(2, &FilterSet::census()).unwrap() {
        let s = solve(&p, &CuspMarks::all_zero(&p), &SolverConfig::default()).unwrap();
        let d = canonize(&s).unwrap();
        assert_eq!(d.cells, vec![Cell::Octahedron; 2]);
        assert!(d.signature.starts_with("O O | "));
        assert!(d
            .report
            .unwrap()
            .faces
            .iter()
            .all(|f| (f.sum + 2.0).abs() < 1e-12));
    }
}

#[test]
fn cusped_structures_are_assumed() {
    let p = Pairing::from_signature("3.090i10202129002d111a1i00").unwrap();
    let s = solve_mgk_ansatz(&p, &SolverConfig::default()).unwrap();
    assert!(matches!(
        tilt_report(&s, EPS_TILT),
        Err(KojimaError::CuspedVertex(_))
    ));
    let d = canonize(&s).unwrap();
    assert_eq!(d.certification, Certification::CuspedAssumed);
    assert_eq!(d.moves, 0);
}

#[test]
fn regular_frame_has_expected_gram() {
    let a = [PI / 6.0; 6];
    let frame = MinkowskiFrame::from_angles(&a).unwrap();
    assert!((frame.gram() - raw_gram(&a)).amax() < 1e-12);
    // regular tilts are equal; two of them make a convex face
    let t = tilt(&a, 0).unwrap();
    assert!((0..4).all(|k| (tilt(&a, k).unwrap() - t).abs() < 1e-12));
    assert!(2.0 * t < 0.0);
}

fn permuted(angles: &[f64; 6], sigma: &Perm4) -> [f64; 6] {
    let mut out = [0.0; 6];
    for i in 0..4 {
        for k in i + 1..4 {
            out[edge_index(sigma.apply(i), sigma.apply(k))] = angles[edge_index(i, k)];
        }
    }
    out
}

proptest! {
    #[test]
    fn tilt_invariant_under_relabeling(
        angles in proptest::array::uniform6(0.1f64..0.9),
        index in 0usize..24,
        k in 0usize..4,
    ) {
        let sigma = Perm4::all()[index];
        let b = permuted(&angles, &sigma);
        let (x, y) = (tilt(&angles, k), tilt(&b, sigma.apply(k)));
        prop_assume!(x.is_ok());
        prop_assert!((x.unwrap() - y.unwrap()).abs() < 1e-10);
    }

    #[test]
    fn frame_round_trips(angles in proptest::array::uniform6(0.1f64..0.9)) {
        if let Ok(frame) = MinkowskiFrame::from_angles(&angles) {
            prop_assert!((frame.gram() - raw_gram(&angles)).amax() < 1e-9);
            for p in &frame.duals {
                prop_assert!((lorentz(p, p) - 1.0).abs() < 1e-8);
            }
        }
    }
}

use std::collections::HashMap;

use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use super::{
    develop_across, embed, lorentz, tilt_report, FaceKind, KojimaError, TiltReport, EPS_TILT,
};
use crate::geosolve::{
    build_equations, solve, solve_from, CuspMarks, GeometricSolution, SolverConfig,
};
use crate::tetshape::{edge_between_faces, edge_index};
use crate::tricomb::{isomorphism_signature, EdgeClass, MoveResult, VertexOrigin};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CanonizeConfig {
    pub epsilon_tilt: f64,
    /// The move budget is this many moves per tetrahedron of the input.
    pub moves_per_tet: usize,
    pub solver: SolverConfig,
}

impl Default for CanonizeConfig {
    fn default() -> Self {
        Self {
            epsilon_tilt: EPS_TILT,
            moves_per_tet: 50,
            solver: SolverConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Cell {
    Tetrahedron,
    /// A tetrahedron with all angles 0, which is a regular ideal octahedron.
    Octahedron,
}

impl Cell {
    pub fn tag(self) -> &'static str {
        match self {
            Cell::Tetrahedron => "T",
            Cell::Octahedron => "O",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certification {
    /// Every internal face has a negative tilt sum.
    Tilts,
    /// The structure has toric cusps, whose duals are not handled; the
    /// triangulation is taken as given.
    CuspedAssumed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalDecomposition {
    pub cells: Vec<Cell>,
    /// `"<cell tags> | <isomorphism signature>"`, e.g. `"T T | 2.0f1g..."`.
    pub signature: String,
    pub solution: GeometricSolution,
    pub moves: usize,
    pub certification: Certification,
    pub report: Option<TiltReport>,
}

pub fn canonize(sol: &GeometricSolution) -> Result<CanonicalDecomposition, KojimaError> {
    canonize_with(sol, &CanonizeConfig::default())
}

/// Moves the triangulation toward the canonical decomposition: while some
/// face is concave, applies a 3-2 move on a valence-3 edge of the most
/// concave face if there is one, otherwise a 2-3 move across it, and
/// re-solves.
pub fn canonize_with(
    sol: &GeometricSolution,
    config: &CanonizeConfig,
) -> Result<CanonicalDecomposition, KojimaError> {
    if !sol.marks.ideal_vertices.is_empty() {
        return finish(sol.clone(), 0, Certification::CuspedAssumed, None);
    }
    let budget = config.moves_per_tet * sol.pairing.size();
    let mut current = sol.clone();
    let mut moves = 0;
    loop {
        let report = tilt_report(&current, config.epsilon_tilt)?;
        if report.is_canonical() {
            return finish(current, moves, Certification::Tilts, Some(report));
        }
        let mut concave: Vec<_> = report
            .faces
            .iter()
            .filter(|f| f.kind == FaceKind::Concave)
            .collect();
        if concave.is_empty() {
            return Err(KojimaError::MixedDegenerate {
                flat: report.count(FaceKind::Flat),
                convex: report.count(FaceKind::Convex),
            });
        }
        if moves == budget {
            return Err(KojimaError::MoveBudgetExhausted {
                budget,
                max_tilt: report.max_sum(),
            });
        }
        concave.sort_by(|a, b| {
            b.sum
                .total_cmp(&a.sum)
                .then((a.tet, a.face).cmp(&(b.tet, b.face)))
        });
        let next = concave
            .iter()
            .find_map(|f| move_at(&current, f.tet, f.face, &config.solver));
        match next {
            Some(s) => {
                current = s;
                moves += 1;
            }
            None => {
                return Err(KojimaError::Stuck {
                    max_tilt: report.max_sum(),
                })
            }
        }
    }
}

fn finish(
    solution: GeometricSolution,
    moves: usize,
    certification: Certification,
    report: Option<TiltReport>,
) -> Result<CanonicalDecomposition, KojimaError> {
    let cells: Vec<Cell> = solution
        .assignment
        .angles
        .iter()
        .map(|a| {
            if a.iter().all(|&x| x == 0.0) {
                Cell::Octahedron
            } else {
                Cell::Tetrahedron
            }
        })
        .collect();
    let mut tags: Vec<&str> = cells.iter().map(|c| c.tag()).collect();
    tags.sort_unstable();
    let signature = format!(
        "{} | {}",
        tags.join(" "),
        isomorphism_signature(&solution.pairing)?
    );
    Ok(CanonicalDecomposition {
        cells,
        signature,
        solution,
        moves,
        certification,
        report,
    })
}

/// The first move removing the concave face `tet.face` whose result
/// re-solves.
fn move_at(
    sol: &GeometricSolution,
    tet: usize,
    face: usize,
    config: &SolverConfig,
) -> Option<GeometricSolution> {
    let p = &sol.pairing;
    let face_edges: Vec<usize> = (0..4)
        .filter(|&v| v != face)
        .flat_map(|a| {
            (0..4)
                .filter(move |&b| b != face && b > a)
                .map(move |b| edge_index(a, b))
        })
        .collect();
    for edge in p.valence_three_edges() {
        if !edge
            .cycle
            .iter()
            .any(|s| s.tet == tet && face_edges.contains(&s.edge()))
        {
            continue;
        }
        if let Some(s) = three_two(sol, &edge, config) {
            return Some(s);
        }
    }
    two_three(sol, tet, face, config)
}

fn three_two(
    sol: &GeometricSolution,
    edge: &EdgeClass,
    config: &SolverConfig,
) -> Option<GeometricSolution> {
    let mv = sol.pairing.move_3_2(edge).ok()?;
    let mut positions = HashMap::new();
    let s = &edge.cycle;
    let mut frame = embed(sol, s[0].tet).ok()?;
    for k in 0..3 {
        for v in 0..4 {
            positions.insert((s[k].tet, v), frame.duals[v]);
        }
        if k < 2 {
            let (next, f) = develop_across(sol, s[k].tet, s[k].c, &frame).ok()?;
            debug_assert_eq!(next, s[k + 1].tet);
            frame = f;
        }
    }
    resolve(sol, &mv, &positions, config)
}

fn two_three(
    sol: &GeometricSolution,
    tet: usize,
    face: usize,
    config: &SolverConfig,
) -> Option<GeometricSolution> {
    let mv = sol.pairing.move_2_3(tet, face).ok()?;
    let first = embed(sol, tet).ok()?;
    let (other, second) = develop_across(sol, tet, face, &first).ok()?;
    let mut positions = HashMap::new();
    for v in 0..4 {
        positions.insert((other, v), second.duals[v]);
        positions.insert((tet, v), first.duals[v]);
    }
    resolve(sol, &mv, &positions, config)
}

/// Angles of the tetrahedron with the given vertex duals.
fn angles_from_duals(p: [Vector4<f64>; 4]) -> Option<[f64; 6]> {
    let m = Matrix4::from_columns(&p).try_inverse()?;
    let normals: Vec<Vector4<f64>> = (0..4)
        .map(|i| {
            let r = m.row(i);
            Vector4::new(-r[0], -r[1], -r[2], r[3])
        })
        .collect();
    let mut angles = [0.0; 6];
    for i in 0..4 {
        for k in i + 1..4 {
            let (ni, nk) = (&normals[i], &normals[k]);
            let (a, b) = (lorentz(ni, ni), lorentz(nk, nk));
            if a <= 0.0 || b <= 0.0 {
                return None;
            }
            let c = -lorentz(ni, nk) / (a * b).sqrt();
            if !(c > -1.0 && c < 1.0) {
                return None;
            }
            angles[edge_between_faces(i, k)] = c.acos();
        }
    }
    Some(angles)
}

fn resolve(
    sol: &GeometricSolution,
    mv: &MoveResult,
    positions: &HashMap<(usize, usize), Vector4<f64>>,
    config: &SolverConfig,
) -> Option<GeometricSolution> {
    let mut angles = Vec::with_capacity(mv.origins.len());
    let mut geometric = true;
    for o in &mv.origins {
        let kept =
            o.iter().all(|x| x.tet == o[0].tet) && o.iter().enumerate().all(|(v, x)| x.vertex == v);
        if kept && !positions.contains_key(&(o[0].tet, 0)) {
            angles.push(sol.assignment.angles[o[0].tet]);
            continue;
        }
        let duals = o.map(|VertexOrigin { tet, vertex }| positions[&(tet, vertex)]);
        match angles_from_duals(duals) {
            Some(a) => angles.push(a),
            None => {
                geometric = false;
                angles.push([0.0; 6]);
            }
        }
    }
    let system = build_equations(&mv.pairing, &CuspMarks::none()).ok()?;
    if geometric {
        let x = system.unknowns_from(&angles);
        if system.admissible(&x) {
            if let Ok(s) = solve_from(&system, &x, config) {
                return Some(s);
            }
        }
    }
    solve(&mv.pairing, &CuspMarks::none(), config).ok()
}

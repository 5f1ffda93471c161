//! Two-parameter ansatz for triangulations in which each tetrahedron has at
//! most one ideal vertex.
//!
//! A tetrahedron with an ideal vertex gets angle π/3 on the three edges at
//! that vertex and a common angle α on the opposite triangle; the others are
//! regular with angle β. Symmetry makes all finite edges of each kind equally
//! long, so the equations reduce to angle sums in (α, β) plus one length
//! match when both kinds share an edge.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use super::{build_equations, CuspMarks, GeoError, GeometricSolution, SolverConfig};
use crate::tetshape::{edge_lengths_with_gradient, DihedralAngles, VERTEX_EDGES};
use crate::tricomb::{edge_classes, vertex_classes, Pairing};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    /// Ideal vertex at the given index.
    Cusped(usize),
    Regular,
}

fn tet_angles(kind: Kind, alpha: f64, beta: f64) -> [f64; 6] {
    match kind {
        Kind::Regular => [beta; 6],
        Kind::Cusped(v) => {
            let mut a = [alpha; 6];
            for e in VERTEX_EDGES[v] {
                a[e] = PI / 3.0;
            }
            a
        }
    }
}

/// Length of a finite edge and its derivative in the free angle.
fn length(kind: Kind, t: f64) -> Result<(f64, f64), GeoError> {
    let angles = tet_angles(kind, t, t);
    let (l, g) = edge_lengths_with_gradient(&DihedralAngles::new(angles)?)?;
    let (e, free): (usize, Vec<usize>) = match kind {
        Kind::Regular => (0, (0..6).collect()),
        Kind::Cusped(v) => {
            let free: Vec<usize> = (0..6).filter(|e| !VERTEX_EDGES[v].contains(e)).collect();
            (free[0], free)
        }
    };
    Ok((l[e], free.iter().map(|&f| g[e][f]).sum()))
}

/// Solves the toric-cusp hyperbolicity equations of `p` with the ansatz
/// above, by Gauss-Newton in (α, β), and checks the result against the full
/// system.
pub fn solve_mgk_ansatz(p: &Pairing, config: &SolverConfig) -> Result<GeometricSolution, GeoError> {
    let marks = CuspMarks::toric_cusps(p)?;
    let system = build_equations(p, &marks)?;
    let n = p.size();
    let mut kinds = vec![Kind::Regular; n];
    for v in vertex_classes(p)
        .iter()
        .filter(|v| marks.ideal_vertices.contains(&v.id))
    {
        for &(t, x) in &v.slots {
            if kinds[t] != Kind::Regular {
                return Err(GeoError::AnsatzInapplicable(format!(
                    "tetrahedron {t} has two ideal vertices"
                )));
            }
            kinds[t] = Kind::Cusped(x);
        }
    }
    let has_cusped = kinds.iter().any(|k| *k != Kind::Regular);
    let has_regular = kinds.contains(&Kind::Regular);

    // Per edge class: (count of π/3, count of α, count of β), and whether
    // its length ties α to β.
    let edges = edge_classes(p);
    let mut counts = Vec::with_capacity(edges.len());
    let mut ties = false;
    for e in &edges {
        let (mut third, mut a, mut b) = (0.0, 0.0, 0.0);
        for s in &e.cycle {
            match kinds[s.tet] {
                Kind::Regular => b += 1.0,
                Kind::Cusped(v) if VERTEX_EDGES[v].contains(&s.edge()) => third += 1.0,
                Kind::Cusped(_) => a += 1.0,
            }
        }
        let finite = !e.ends.iter().any(|v| marks.ideal_vertices.contains(v));
        ties |= finite && a > 0.0 && b > 0.0;
        counts.push((third, a, b));
    }

    // Unknown layout: α first if present, then β.
    let ia = has_cusped.then_some(0);
    let ib = has_regular.then_some(usize::from(has_cusped));
    let dim = usize::from(has_cusped) + usize::from(has_regular);
    let unpack = |x: &DVector<f64>| (ia.map_or(0.0, |i| x[i]), ib.map_or(0.0, |i| x[i]));

    // The angle sums are linear; their least-squares solution starts the
    // iteration.
    let rows = edges.len() + usize::from(ties);
    let mut lin = DMatrix::zeros(edges.len(), dim);
    let mut rhs = DVector::zeros(edges.len());
    for (r, &(third, a, b)) in counts.iter().enumerate() {
        if let Some(i) = ia {
            lin[(r, i)] = a;
        }
        if let Some(i) = ib {
            lin[(r, i)] = b;
        }
        rhs[r] = 2.0 * PI - third * PI / 3.0;
    }
    let mut x = lin
        .clone()
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|e| GeoError::AnsatzFailed(e.to_string()))?;

    let in_domain = |x: &DVector<f64>| {
        let (a, b) = unpack(x);
        ia.is_none_or(|_| a > 0.0 && a < PI / 3.0) && ib.is_none_or(|_| b > 0.0 && b < PI / 3.0)
    };
    let eval = |x: &DVector<f64>| -> Result<(DVector<f64>, DMatrix<f64>), GeoError> {
        let mut f = &lin * x - &rhs;
        let mut j = lin.clone();
        if ties {
            let (a, b) = unpack(x);
            let (la, da) = length(Kind::Cusped(0), a)?;
            let (lb, db) = length(Kind::Regular, b)?;
            f = f.push(la - lb);
            j = j.insert_row(rows - 1, 0.0);
            j[(rows - 1, ia.unwrap())] = da;
            j[(rows - 1, ib.unwrap())] = -db;
        }
        Ok((f, j))
    };

    if !in_domain(&x) {
        return Err(GeoError::AnsatzFailed(format!(
            "starting point {:?} outside the domain",
            x.as_slice()
        )));
    }
    let mut residual = f64::INFINITY;
    for _ in 0..config.max_iterations {
        let (f, j) = eval(&x)?;
        residual = f.amax();
        if residual < config.tolerance {
            break;
        }
        let dx = j
            .svd(true, true)
            .solve(&(-&f), 1e-14)
            .map_err(|e| GeoError::AnsatzFailed(e.to_string()))?;
        let mut lambda = 1.0;
        loop {
            let y = &x + lambda * &dx;
            if in_domain(&y) && eval(&y)?.0.amax() < residual {
                x = y;
                break;
            }
            lambda *= config.damping;
            if lambda < 1e-12 {
                return Err(GeoError::AnsatzFailed(format!(
                    "stalled at residual {residual:e}"
                )));
            }
        }
    }

    let (a, b) = unpack(&x);
    let angles: Vec<[f64; 6]> = kinds.iter().map(|&k| tet_angles(k, a, b)).collect();
    let full = system.unknowns_from(&angles);
    let check = system.residual(&full)?.amax();
    if check >= config.tolerance.max(10.0 * residual) || residual >= config.tolerance {
        return Err(GeoError::AnsatzFailed(format!(
            "ansatz residual {residual:e}, full residual {check:e}"
        )));
    }
    Ok(GeometricSolution::assemble(&system, angles, check, 0)?)
}

//! Internal edge lengths from the Gram matrix cofactors.
//!
//! With `c = adj(G)`, the sign of `c_ii` matches the vertex class of vertex
//! `i` (positive finite, zero ideal, negative ultra-ideal). For the edge
//! joining vertices `i` and `j`:
//!
//! * both finite or both ultra-ideal: `cosh l = c_ij / √(c_ii c_jj)`;
//! * one finite, one ultra-ideal: `sinh l = c_ij / √(−c_ii c_jj)`;
//! * an ideal endpoint: `l = ∞`.

use nalgebra::Matrix4;

use super::{classify_vertices, DihedralAngles, TetError, VertexClass, EDGE_VERTICES};

pub type EdgeLengths = [f64; 6];

pub fn edge_lengths(angles: &DihedralAngles) -> Result<EdgeLengths, TetError> {
    Ok(edge_lengths_with_gradient(angles)?.0)
}

/// Lengths together with `∂l_e/∂θ_f` (row `e`, column `f`). Rows of
/// infinite edges are zero.
pub fn edge_lengths_with_gradient(
    angles: &DihedralAngles,
) -> Result<(EdgeLengths, [[f64; 6]; 6]), TetError> {
    angles.check_hyperbolic()?;
    let classes = classify_vertices(angles)?;
    let gram = angles.gram();
    let c = gram.cofactors();
    let det = gram.determinant();
    let ginv = c / det;
    let dc: Vec<Matrix4<f64>> = (0..6)
        .map(|f| cofactor_derivative(angles, &ginv, det, f))
        .collect();

    let mut lengths = [0.0; 6];
    let mut grad = [[0.0; 6]; 6];
    for (e, &(i, j)) in EDGE_VERTICES.iter().enumerate() {
        if classes[i] == VertexClass::Ideal || classes[j] == VertexClass::Ideal {
            lengths[e] = f64::INFINITY;
            continue;
        }
        let (cii, cjj, cij) = (c[(i, i)], c[(j, j)], c[(i, j)]);
        let mixed = (classes[i] == VertexClass::Finite) != (classes[j] == VertexClass::Finite);
        let root = if mixed {
            (-cii * cjj).sqrt()
        } else {
            (cii * cjj).sqrt()
        };
        let x = cij / root;
        // d(x) = dc_ij/root − x/2 (dc_ii/c_ii + dc_jj/c_jj), in both cases.
        let dx =
            |f: usize| dc[f][(i, j)] / root - 0.5 * x * (dc[f][(i, i)] / cii + dc[f][(j, j)] / cjj);
        if mixed {
            let l = x.asinh();
            lengths[e] = l;
            for f in 0..6 {
                grad[e][f] = dx(f) / l.cosh();
            }
        } else {
            let l = x.max(1.0).acosh();
            lengths[e] = l;
            let sh = l.sinh();
            if sh > 0.0 {
                for f in 0..6 {
                    grad[e][f] = dx(f) / sh;
                }
            }
        }
    }
    Ok((lengths, grad))
}

/// `∂ adj(G) / ∂θ_f = det·(tr(G⁻¹ dG) G⁻¹ − G⁻¹ dG G⁻¹)`, where `dG` has
/// `sin θ_f` at the two entries for the faces meeting along edge `f`.
fn cofactor_derivative(
    angles: &DihedralAngles,
    ginv: &Matrix4<f64>,
    det: f64,
    f: usize,
) -> Matrix4<f64> {
    let (a, b) = EDGE_VERTICES[f];
    let mut faces = (0..4).filter(|&v| v != a && v != b);
    let (k, l) = (faces.next().unwrap(), faces.next().unwrap());
    let s = angles[f].sin();
    let trace = 2.0 * s * ginv[(k, l)];
    Matrix4::from_fn(|i, j| {
        let middle = s * (ginv[(i, k)] * ginv[(l, j)] + ginv[(i, l)] * ginv[(k, j)]);
        det * (trace * ginv[(i, j)] - middle)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn regular_ideal_is_infinite() {
        let t = DihedralAngles::regular(PI / 3.0).unwrap();
        assert!(edge_lengths(&t).unwrap().iter().all(|l| l.is_infinite()));
    }

    #[test]
    fn regular_sixth_equal_lengths() {
        let t = DihedralAngles::regular(PI / 6.0).unwrap();
        let l = edge_lengths(&t).unwrap();
        assert!(l[0] > 0.0 && l[0].is_finite());
        assert!(l.iter().all(|x| (x - l[0]).abs() < 1e-13));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let tuples = [
            [0.25, 0.4, 0.3, 0.35, 0.5, 0.45],
            [1.1, 1.0, 1.2, 1.15, 1.05, 1.1],
            [1.2, 1.2, 1.2, 0.3, 0.3, 0.3],
        ];
        let h = 1e-6;
        for a in tuples {
            let t = DihedralAngles::new(a).unwrap();
            let (_, grad) = edge_lengths_with_gradient(&t).unwrap();
            for f in 0..6 {
                let mut p = a;
                let mut m = a;
                p[f] += h;
                m[f] -= h;
                let lp = edge_lengths(&DihedralAngles::new(p).unwrap()).unwrap();
                let lm = edge_lengths(&DihedralAngles::new(m).unwrap()).unwrap();
                for e in 0..6 {
                    let fd = (lp[e] - lm[e]) / (2.0 * h);
                    assert!(
                        (fd - grad[e][f]).abs() < 1e-6 * (1.0 + fd.abs()),
                        "{a:?} e={e} f={f}: {fd} vs {}",
                        grad[e][f]
                    );
                }
            }
        }
    }
}

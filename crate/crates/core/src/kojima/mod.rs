//! Canonical (Kojima) decompositions.
//!
//! Each truncation plane of a hyperbolic manifold with geodesic boundary has
//! a dual point of Lorentz norm 1 in `R^{3,1}`; the canonical decomposition
//! is the one induced by the convex hull of all lifts of these points. A
//! triangulation is canonical when across every internal face the two
//! neighbouring tetrahedra lie on distinct supporting hyperplanes bending
//! the right way, which is read off the sum of the two tilts at the face.
//!
//! Frames place one tetrahedron in `R^{3,1}`: the outward unit face normals
//! `n_i` satisfy `<n_i, n_j> = G_ij`, and the vertex duals are
//! `p_i = -u_i / |u_i|` with `u_i = Σ_k (G^{-1})_ik n_k`.

mod canonize;

use std::f64::consts::PI;

use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geosolve::{GeometricSolution, NoSolutionEvidence};
use crate::tetshape::{edge_between_faces, TetError, VertexClass, EPS_IDEAL, VERTEX_EDGES};
use crate::tricomb::TriError;

pub use canonize::{
    canonize, canonize_with, CanonicalDecomposition, CanonizeConfig, Cell, Certification,
};

pub const EPS_TILT: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KojimaError {
    #[error("degenerate embedding: {0}")]
    DegenerateEmbedding(String),
    #[error("face {tet}.{face} does not match its neighbour (mismatch {mismatch:e})")]
    NonMatchingFace {
        tet: usize,
        face: usize,
        mismatch: f64,
    },
    #[error("tetrahedron {0} has an ideal vertex; tilts need truncation duals")]
    CuspedVertex(usize),
    #[error("move budget of {budget} exhausted (largest tilt sum {max_tilt:e})")]
    MoveBudgetExhausted { budget: usize, max_tilt: f64 },
    #[error("{flat} flat and {convex} convex faces: merged cells are not certified")]
    MixedDegenerate { flat: usize, convex: usize },
    #[error("no move applies to the concave faces (largest tilt sum {max_tilt:e})")]
    Stuck { max_tilt: f64 },
    #[error("re-solving after a move failed: {0}")]
    Solver(NoSolutionEvidence),
    #[error(transparent)]
    Combinatorics(#[from] TriError),
    #[error(transparent)]
    Tetrahedron(#[from] TetError),
}

/// Lorentz product with signature `(+,+,+,-)`.
pub fn lorentz(a: &Vector4<f64>, b: &Vector4<f64>) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] - a[3] * b[3]
}

fn j() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(1.0, 1.0, 1.0, -1.0))
}

/// Gram matrix from raw angles; unlike [`crate::tetshape::GramMatrix`] it
/// accepts the all-zero tuple.
pub fn raw_gram(angles: &[f64; 6]) -> Matrix4<f64> {
    Matrix4::from_fn(|k, l| {
        if k == l {
            1.0
        } else {
            -angles[edge_between_faces(k, l)].cos()
        }
    })
}

/// One tetrahedron placed in `R^{3,1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MinkowskiFrame {
    /// Outward unit normal of the face opposite vertex `i`.
    pub normals: [Vector4<f64>; 4],
    /// Dual of vertex `i`: norm 1 for truncated vertices, lightlike for
    /// ideal ones, norm −1 for finite ones.
    pub duals: [Vector4<f64>; 4],
    pub classes: [VertexClass; 4],
}

impl MinkowskiFrame {
    pub fn from_angles(angles: &[f64; 6]) -> Result<Self, KojimaError> {
        let g = raw_gram(angles);
        let eig = g.symmetric_eigen();
        let negative: Vec<usize> = (0..4).filter(|&i| eig.eigenvalues[i] < 0.0).collect();
        if negative.len() != 1 || eig.eigenvalues.iter().any(|l| l.abs() < 1e-12) {
            return Err(KojimaError::DegenerateEmbedding(format!(
                "Gram eigenvalues {:?} do not have signature (3,1)",
                eig.eigenvalues.as_slice()
            )));
        }
        // rows of the normal matrix: positive eigen-directions first, the
        // negative one last
        let order: Vec<usize> = (0..4)
            .filter(|&i| i != negative[0])
            .chain([negative[0]])
            .collect();
        let mut nmat = Matrix4::zeros();
        for (row, &i) in order.iter().enumerate() {
            let scale = eig.eigenvalues[i].abs().sqrt();
            for c in 0..4 {
                nmat[(row, c)] = scale * eig.eigenvectors[(c, i)];
            }
        }
        let normals: [Vector4<f64>; 4] = std::array::from_fn(|i| nmat.column(i).into_owned());
        let ginv = g
            .try_inverse()
            .ok_or_else(|| KojimaError::DegenerateEmbedding("singular Gram matrix".into()))?;
        let mut duals = [Vector4::zeros(); 4];
        let mut classes = [VertexClass::UltraIdeal; 4];
        for i in 0..4 {
            let u: Vector4<f64> = (0..4).map(|k| ginv[(i, k)] * normals[k]).sum();
            let norm = ginv[(i, i)];
            let vsum: f64 = VERTEX_EDGES[i].iter().map(|&e| angles[e]).sum();
            classes[i] = if (vsum - PI).abs() <= EPS_IDEAL {
                VertexClass::Ideal
            } else if vsum > PI {
                VertexClass::Finite
            } else {
                VertexClass::UltraIdeal
            };
            duals[i] = match classes[i] {
                VertexClass::Ideal => -u,
                _ => -u / norm.abs().sqrt(),
            };
        }
        Ok(Self {
            normals,
            duals,
            classes,
        })
    }

    /// Gram matrix of the normals.
    pub fn gram(&self) -> Matrix4<f64> {
        Matrix4::from_fn(|i, k| lorentz(&self.normals[i], &self.normals[k]))
    }

    pub fn transformed(&self, a: &Matrix4<f64>) -> Self {
        Self {
            normals: self.normals.map(|n| a * n),
            duals: self.duals.map(|p| a * p),
            classes: self.classes,
        }
    }

    /// The linear functional `N` with `<N, p_i> = 1` on all four duals, as
    /// a Lorentz vector.
    pub fn support(&self) -> Option<Vector4<f64>> {
        let rows = Matrix4::from_rows(&self.duals.map(|p| (j() * p).transpose()));
        rows.lu().solve(&Vector4::repeat(1.0))
    }
}

pub fn embed(sol: &GeometricSolution, tet: usize) -> Result<MinkowskiFrame, KojimaError> {
    let frame = MinkowskiFrame::from_angles(&sol.assignment.angles[tet])?;
    let err = (frame.gram() - raw_gram(&sol.assignment.angles[tet])).amax();
    if err > 1e-9 {
        return Err(KojimaError::DegenerateEmbedding(format!(
            "Gram round trip off by {err:e}"
        )));
    }
    Ok(frame)
}

/// Places the neighbour of `tet` across `face` next to `frame`: the
/// unique Lorentz map sending the neighbour's three shared duals and its
/// face normal onto those of `frame`. Returns the neighbour's index and
/// its placed frame.
pub fn develop_across(
    sol: &GeometricSolution,
    tet: usize,
    face: usize,
    frame: &MinkowskiFrame,
) -> Result<(usize, MinkowskiFrame), KojimaError> {
    let g = sol.pairing.gluing(tet, face);
    let other = embed(sol, g.tet)?;
    if frame.classes.contains(&VertexClass::Ideal) {
        return Err(KojimaError::CuspedVertex(tet));
    }
    if other.classes.contains(&VertexClass::Ideal) {
        return Err(KojimaError::CuspedVertex(g.tet));
    }
    let mut src = Matrix4::zeros();
    let mut dst = Matrix4::zeros();
    for (col, v) in (0..4).filter(|&v| v != face).enumerate() {
        src.set_column(col, &other.duals[g.perm.apply(v)]);
        dst.set_column(col, &frame.duals[v]);
    }
    src.set_column(3, &other.normals[g.perm.apply(face)]);
    dst.set_column(3, &(-frame.normals[face]));
    let inv = src.try_inverse().ok_or_else(|| {
        KojimaError::DegenerateEmbedding("shared face duals are dependent".into())
    })?;
    let a = dst * inv;
    let mismatch = (a.transpose() * j() * a - j()).amax();
    if mismatch > 1e-8 {
        return Err(KojimaError::NonMatchingFace {
            tet,
            face,
            mismatch,
        });
    }
    Ok((g.tet, other.transformed(&a)))
}

/// Frames of `tet` and of its neighbour across `face`, sharing that face.
pub fn develop_pair(
    sol: &GeometricSolution,
    tet: usize,
    face: usize,
) -> Result<(MinkowskiFrame, MinkowskiFrame), KojimaError> {
    let first = embed(sol, tet)?;
    let (_, second) = develop_across(sol, tet, face, &first)?;
    Ok((first, second))
}

/// Tilt of face `k` of a tetrahedron: `Σ_j s_j G_jk`, with `s_j` the
/// length of the unnormalized vertex dual `u_j`.
pub fn tilt(angles: &[f64; 6], k: usize) -> Result<f64, KojimaError> {
    let g = raw_gram(angles);
    let ginv = g
        .try_inverse()
        .ok_or_else(|| KojimaError::DegenerateEmbedding("singular Gram matrix".into()))?;
    let mut t = 0.0;
    for j in 0..4 {
        let d = ginv[(j, j)];
        if d <= 0.0 {
            return Err(KojimaError::DegenerateEmbedding(format!(
                "vertex {j} is not truncated"
            )));
        }
        t += d.sqrt() * g[(j, k)];
    }
    Ok(t)
}

/// Sum of the two tilts at the face `face` of `tet`. Negative means the
/// two tetrahedra are strictly convex across the face.
pub fn tilt_sum(sol: &GeometricSolution, tet: usize, face: usize) -> Result<f64, KojimaError> {
    let g = sol.pairing.gluing(tet, face);
    for t in [tet, g.tet] {
        if has_ideal_vertex(&sol.assignment.angles[t]) {
            return Err(KojimaError::CuspedVertex(t));
        }
    }
    Ok(tilt(&sol.assignment.angles[tet], face)?
        + tilt(&sol.assignment.angles[g.tet], g.perm.apply(face))?)
}

fn has_ideal_vertex(angles: &[f64; 6]) -> bool {
    VERTEX_EDGES
        .iter()
        .any(|es| (es.iter().map(|&e| angles[e]).sum::<f64>() - PI).abs() <= EPS_IDEAL)
}

/// How far the far vertex of the neighbour sits beyond the supporting
/// hyperplane of `tet`, computed from developed frames: positive means
/// strictly convex across the face. Its sign must agree with the negated
/// [`tilt_sum`].
pub fn developed_gap(sol: &GeometricSolution, tet: usize, face: usize) -> Result<f64, KojimaError> {
    let (first, second) = develop_pair(sol, tet, face)?;
    let g = sol.pairing.gluing(tet, face);
    let n = first
        .support()
        .ok_or_else(|| KojimaError::DegenerateEmbedding("duals are affinely dependent".into()))?;
    Ok(lorentz(&second.duals[g.perm.apply(face)], &n) - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FaceKind {
    Convex,
    Flat,
    Concave,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceTilt {
    pub tet: usize,
    pub face: usize,
    pub sum: f64,
    pub kind: FaceKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TiltReport {
    pub faces: Vec<FaceTilt>,
}

impl TiltReport {
    pub fn count(&self, kind: FaceKind) -> usize {
        self.faces.iter().filter(|f| f.kind == kind).count()
    }

    pub fn max_sum(&self) -> f64 {
        self.faces
            .iter()
            .map(|f| f.sum)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_canonical(&self) -> bool {
        self.faces.iter().all(|f| f.kind == FaceKind::Convex)
    }
}

/// Tilt sums of every internal face, one entry per glued face pair.
pub fn tilt_report(sol: &GeometricSolution, eps: f64) -> Result<TiltReport, KojimaError> {
    let faces = sol
        .pairing
        .faces()
        .into_iter()
        .map(|(tet, face)| {
            let sum = tilt_sum(sol, tet, face)?;
            let kind = if sum < -eps {
                FaceKind::Convex
            } else if sum > eps {
                FaceKind::Concave
            } else {
                FaceKind::Flat
            };
            Ok(FaceTilt {
                tet,
                face,
                sum,
                kind,
            })
        })
        .collect::<Result<_, KojimaError>>()?;
    Ok(TiltReport { faces })
}

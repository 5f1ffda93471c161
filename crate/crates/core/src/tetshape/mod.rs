//! Hyperbolic tetrahedra parameterized by their six dihedral angles.
//!
//! Vertices are numbered `0..4`. The six edges are stored in the order
//!
//! | index | angle | edge |
//! |-------|-------|------|
//! | 0     | A     | 01   |
//! | 1     | B     | 02   |
//! | 2     | C     | 03   |
//! | 3     | D     | 23   |
//! | 4     | E     | 13   |
//! | 5     | F     | 12   |
//!
//! so edge `e` is opposite edge `(e + 3) % 6`, and the vertex triples are
//! `V₁ = A+B+C` (vertex 0), `V₂ = A+E+F` (1), `V₃ = B+D+F` (2) and
//! `V₄ = C+D+E` (3). Face `k` is the face opposite vertex `k`.
//!
//! A vertex whose triple sums to more than π is finite, exactly π ideal, and
//! less than π ultra-ideal (the tetrahedron is truncated there).

mod lengths;
mod volume;

use std::f64::consts::PI;

use nalgebra::Matrix4;
use thiserror::Error;

use crate::specfun::QuadratureError;

pub use lengths::{edge_lengths, edge_lengths_with_gradient, EdgeLengths};
pub use volume::{
    symmetric_theta, volume, volume_dilog, volume_ideal, volume_integral, volume_integral_with,
    volume_params, volume_symmetric, VolumeParams,
};

/// Tolerance on `|vertex sum − π|` below which a vertex counts as ideal.
pub const EPS_IDEAL: f64 = 1e-9;

/// Endpoints of each edge, indexed as in the module table.
pub const EDGE_VERTICES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (2, 3), (1, 3), (1, 2)];

/// Edges incident to each vertex.
pub const VERTEX_EDGES: [[usize; 3]; 4] = [[0, 1, 2], [0, 4, 5], [1, 3, 5], [2, 3, 4]];

/// Edge slots making up the three Hamiltonian cycles `H₁, H₂, H₃`.
pub const HAMILTONIAN_EDGES: [[usize; 4]; 3] = [[0, 1, 3, 4], [0, 2, 3, 5], [1, 2, 4, 5]];

/// Index of the edge joining vertices `i` and `j`.
pub fn edge_index(i: usize, j: usize) -> usize {
    match (i.min(j), i.max(j)) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (2, 3) => 3,
        (1, 3) => 4,
        (1, 2) => 5,
        _ => panic!("no edge between vertices {i} and {j}"),
    }
}

/// Edge shared by faces `k` and `l`: it joins the two remaining vertices.
pub fn edge_between_faces(k: usize, l: usize) -> usize {
    assert!(k != l && k < 4 && l < 4);
    let mut rest = (0..4).filter(|&v| v != k && v != l);
    let (a, b) = (rest.next().unwrap(), rest.next().unwrap());
    edge_index(a, b)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TetError {
    #[error("degenerate tetrahedron: {0}")]
    DegenerateTetrahedron(String),
    #[error("arctan branch undefined (k1 = k2 = 0)")]
    BranchUndefined,
    #[error("not an ideal tetrahedron: angle sum {sum} differs from pi")]
    NotIdeal { sum: f64 },
    #[error("not a finite symmetric tetrahedron: {0}")]
    NotFiniteSymmetric(String),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

fn degenerate(msg: impl Into<String>) -> TetError {
    TetError::DegenerateTetrahedron(msg.into())
}

/// The six dihedral angles `(A, B, C, D, E, F)` in radians.
///
/// Construction checks that every angle lies in `[0, π)` and that every
/// vertex triple has positive sum. It does not check that a hyperbolic
/// tetrahedron with these angles exists; see [`DihedralAngles::check_hyperbolic`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DihedralAngles([f64; 6]);

impl DihedralAngles {
    pub fn new(angles: [f64; 6]) -> Result<Self, TetError> {
        for (e, &a) in angles.iter().enumerate() {
            if !a.is_finite() {
                return Err(degenerate(format!("angle {e} is not finite")));
            }
            if !(0.0..PI).contains(&a) {
                return Err(degenerate(format!("angle {e} = {a} outside [0, pi)")));
            }
        }
        let out = Self(angles);
        for (v, s) in out.vertex_sums().iter().enumerate() {
            if *s <= 0.0 {
                return Err(degenerate(format!("vertex {v} has angle sum {s} <= 0")));
            }
        }
        Ok(out)
    }

    /// `T(A, B, C)` with `D = A`, `E = B`, `F = C`.
    pub fn symmetric(a: f64, b: f64, c: f64) -> Result<Self, TetError> {
        Self::new([a, b, c, a, b, c])
    }

    pub fn regular(theta: f64) -> Result<Self, TetError> {
        Self::new([theta; 6])
    }

    pub fn as_array(&self) -> [f64; 6] {
        self.0
    }

    pub fn vertex_sums(&self) -> [f64; 4] {
        VERTEX_EDGES.map(|es| es.iter().map(|&e| self.0[e]).sum())
    }

    pub fn hamiltonian_sums(&self) -> [f64; 3] {
        HAMILTONIAN_EDGES.map(|es| es.iter().map(|&e| self.0[e]).sum())
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    /// The same tetrahedron with vertex `i` renamed `sigma[i]`.
    pub fn relabel(&self, sigma: [usize; 4]) -> Self {
        let mut out = [0.0; 6];
        for (e, &(i, j)) in EDGE_VERTICES.iter().enumerate() {
            out[edge_index(sigma[i], sigma[j])] = self.0[e];
        }
        Self(out)
    }

    pub fn gram(&self) -> GramMatrix {
        GramMatrix::from_angles(self)
    }

    /// Checks that the angles belong to an actual hyperbolic tetrahedron
    /// (possibly truncated): the Gram matrix has negative determinant and
    /// every off-diagonal cofactor is positive.
    pub fn check_hyperbolic(&self) -> Result<(), TetError> {
        let g = self.gram();
        let det = g.determinant();
        if !(det < -1e-12) {
            return Err(degenerate(format!(
                "Gram determinant {det:e} is not negative"
            )));
        }
        let c = g.cofactors();
        for (e, &(i, j)) in EDGE_VERTICES.iter().enumerate() {
            if !(c[(i, j)] > 0.0) {
                return Err(degenerate(format!(
                    "edge {e} has non-positive cofactor {:e}",
                    c[(i, j)]
                )));
            }
        }
        Ok(())
    }

    fn require_positive(&self) -> Result<(), TetError> {
        match self.0.iter().position(|&a| a <= 0.0) {
            Some(e) => Err(degenerate(format!("angle {e} is zero"))),
            None => Ok(()),
        }
    }
}

impl std::ops::Index<usize> for DihedralAngles {
    type Output = f64;
    fn index(&self, e: usize) -> &f64 {
        &self.0[e]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum VertexClass {
    Finite,
    Ideal,
    UltraIdeal,
}

pub fn classify_vertices(angles: &DihedralAngles) -> Result<[VertexClass; 4], TetError> {
    let sums = angles.vertex_sums();
    if let Some(v) = sums.iter().position(|&s| s <= 0.0) {
        return Err(degenerate(format!("vertex {v} has angle sum <= 0")));
    }
    Ok(sums.map(|s| {
        if (s - PI).abs() <= EPS_IDEAL {
            VertexClass::Ideal
        } else if s > PI {
            VertexClass::Finite
        } else {
            VertexClass::UltraIdeal
        }
    }))
}

/// Gram matrix of the four face planes: unit diagonal and
/// `G_kl = −cos(angle between faces k and l)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramMatrix(pub Matrix4<f64>);

impl GramMatrix {
    pub fn from_angles(angles: &DihedralAngles) -> Self {
        let mut g = Matrix4::identity();
        for k in 0..4 {
            for l in 0..4 {
                if k != l {
                    g[(k, l)] = -angles[edge_between_faces(k, l)].cos();
                }
            }
        }
        Self(g)
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    /// Adjugate `det(G)·G⁻¹`, computed by explicit 3×3 minors so it stays
    /// accurate when `G` is nearly singular.
    pub fn cofactors(&self) -> Matrix4<f64> {
        let g = &self.0;
        let mut c = Matrix4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                let rows: Vec<usize> = (0..4).filter(|&r| r != j).collect();
                let cols: Vec<usize> = (0..4).filter(|&s| s != i).collect();
                let m = nalgebra::Matrix3::from_fn(|r, s| g[(rows[r], cols[s])]);
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                c[(i, j)] = sign * m.determinant();
            }
        }
        c
    }
}

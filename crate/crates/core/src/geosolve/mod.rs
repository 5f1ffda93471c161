//! Hyperbolicity equations in dihedral-angle moduli and their solution.
//!
//! Unknowns are the six dihedral angles of every tetrahedron. Around each
//! edge class the angles must add up to 2π and the edge must have the same
//! length in every tetrahedron it meets. Vertices marked ideal (toric
//! cusps) instead carry angle triples summing to π, and edges marked as
//! annular cusps have angle 0.

mod ansatz;
mod equations;
mod newton;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::specfun::regular_ideal_octahedron_volume;
use crate::tetshape::{edge_lengths, volume, DihedralAngles, TetError};
use crate::tricomb::{boundary_pattern, vertex_classes, Pairing, TriError};

pub use ansatz::solve_mgk_ansatz;
pub use equations::{build_equations, Equation, EquationSystem};
pub use newton::{solve, solve_from};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeoError {
    #[error("inconsistent cusp marks: {0}")]
    InconsistentMarks(String),
    #[error("ansatz not applicable: {0}")]
    AnsatzInapplicable(String),
    #[error("ansatz did not converge: {0}")]
    AnsatzFailed(String),
    #[error(transparent)]
    Combinatorics(#[from] TriError),
    #[error(transparent)]
    Tetrahedron(#[from] TetError),
}

/// Which vertex classes are ideal (toric cusps) and which edge classes carry
/// angle 0 (annular cusps).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspMarks {
    pub ideal_vertices: Vec<usize>,
    pub zero_edges: Vec<usize>,
}

impl CuspMarks {
    pub fn none() -> Self {
        Self::default()
    }

    /// Marks every vertex class whose link is a torus.
    pub fn toric_cusps(p: &Pairing) -> Result<Self, TriError> {
        let pattern = boundary_pattern(p)?;
        let boundary: Vec<usize> = pattern.components.iter().map(|c| c.vertex_class).collect();
        let ideal_vertices = vertex_classes(p)
            .into_iter()
            .map(|v| v.id)
            .filter(|v| !boundary.contains(v))
            .collect();
        Ok(Self {
            ideal_vertices,
            zero_edges: Vec::new(),
        })
    }

    /// Marks every edge class with angle 0.
    pub fn all_zero(p: &Pairing) -> Self {
        Self {
            ideal_vertices: Vec::new(),
            zero_edges: (0..crate::tricomb::edge_classes(p).len()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Convergence threshold on the max-norm of the residual.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Step shrink factor used when backtracking.
    pub damping: f64,
    /// Seed for the perturbed restarts.
    pub seed: u64,
    /// Extra starts after the default one.
    pub restarts: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 200,
            damping: 0.5,
            seed: 0,
            restarts: 8,
        }
    }
}

/// Angles of every tetrahedron together with the slots of each edge class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleAssignment {
    pub angles: Vec<[f64; 6]>,
    /// `(tet, edge)` slots of each edge class, in cyclic order.
    pub edge_slots: Vec<Vec<(usize, usize)>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeometricSolution {
    pub pairing: Pairing,
    pub marks: CuspMarks,
    pub assignment: AngleAssignment,
    pub residual_norm: f64,
    pub volume: f64,
    /// Length of each edge class (infinite at cusps).
    pub edge_lengths: Vec<f64>,
    pub iterations: usize,
}

impl GeometricSolution {
    pub fn tetrahedron(&self, t: usize) -> Result<DihedralAngles, TetError> {
        DihedralAngles::new(self.assignment.angles[t])
    }

    /// Assembles a solution from angles, computing volume and lengths.
    pub(crate) fn assemble(
        system: &EquationSystem,
        angles: Vec<[f64; 6]>,
        residual_norm: f64,
        iterations: usize,
    ) -> Result<Self, TetError> {
        let mut total = 0.0;
        let mut lengths_by_tet = Vec::with_capacity(angles.len());
        for a in &angles {
            if a.iter().all(|&x| x == 0.0) {
                // a regular tetrahedron with all angles 0 is a regular ideal
                // octahedron; its edges are annular cusps
                total += regular_ideal_octahedron_volume();
                lengths_by_tet.push([f64::INFINITY; 6]);
            } else {
                let t = DihedralAngles::new(*a)?;
                total += volume(&t)?;
                lengths_by_tet.push(edge_lengths(&t)?);
            }
        }
        let edge_lengths = system
            .edge_slots
            .iter()
            .map(|slots| {
                let ls: Vec<f64> = slots.iter().map(|&(t, e)| lengths_by_tet[t][e]).collect();
                if ls.iter().any(|l| l.is_infinite()) {
                    f64::INFINITY
                } else {
                    ls.iter().sum::<f64>() / ls.len() as f64
                }
            })
            .collect();
        Ok(Self {
            pairing: system.pairing.clone(),
            marks: system.marks.clone(),
            assignment: AngleAssignment {
                angles,
                edge_slots: system.edge_slots.clone(),
            },
            residual_norm,
            volume: total,
            edge_lengths,
            iterations,
        })
    }
}

/// Why the solver stopped without a solution. This is never a proof of
/// non-hyperbolicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum NoSolutionEvidence {
    Diverged {
        iteration: usize,
        residual: f64,
    },
    LeftDomain {
        iteration: usize,
        residual: f64,
    },
    MaxIterations {
        residual: f64,
    },
    SingularJacobian {
        iteration: usize,
    },
    /// The system could not be set up.
    Setup(String),
}

impl std::fmt::Display for NoSolutionEvidence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Diverged {
                iteration,
                residual,
            } => write!(
                f,
                "diverged at iteration {iteration} (residual {residual:e})"
            ),
            Self::LeftDomain {
                iteration,
                residual,
            } => {
                write!(
                    f,
                    "left the admissible domain at iteration {iteration} (residual {residual:e})"
                )
            }
            Self::MaxIterations { residual } => {
                write!(f, "iteration limit reached (residual {residual:e})")
            }
            Self::SingularJacobian { iteration } => {
                write!(f, "singular Jacobian at iteration {iteration}")
            }
            Self::Setup(msg) => write!(f, "setup failed: {msg}"),
        }
    }
}

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    build_equations, CuspMarks, EquationSystem, GeometricSolution, NoSolutionEvidence, SolverConfig,
};
use crate::tricomb::Pairing;

/// Residuals beyond this are treated as divergence.
const DIVERGENCE: f64 = 1e6;
/// Relative size of the random perturbation used for restarts.
const RESTART_SPREAD: f64 = 0.15;

/// Solves the hyperbolicity equations of `p` under `marks` from each of
/// [`EquationSystem::starting_points`], then from seeded perturbations of
/// the first. Returns the evidence from the first start if all fail.
pub fn solve(
    p: &Pairing,
    marks: &CuspMarks,
    config: &SolverConfig,
) -> Result<GeometricSolution, NoSolutionEvidence> {
    let system = build_equations(p, marks).map_err(|e| NoSolutionEvidence::Setup(e.to_string()))?;
    let starts = system.starting_points();
    let mut first = None;
    for x in &starts {
        match solve_from(&system, x, config) {
            Ok(s) => return Ok(s),
            Err(e) => {
                first.get_or_insert(e);
            }
        }
    }
    let Some(x0) = starts.first() else {
        return Err(NoSolutionEvidence::LeftDomain {
            iteration: 0,
            residual: f64::NAN,
        });
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..config.restarts {
        let x = x0.map(|a| a * (1.0 + RESTART_SPREAD * rng.gen_range(-1.0..1.0)));
        if !system.admissible(&x) {
            continue;
        }
        if let Ok(s) = solve_from(&system, &x, config) {
            return Ok(s);
        }
    }
    let first = first.unwrap();
    Err(first)
}

/// Damped Newton iteration from `x0`. Steps are shrunk by `config.damping`
/// until the iterate stays admissible and the residual does not grow.
pub fn solve_from(
    system: &EquationSystem,
    x0: &DVector<f64>,
    config: &SolverConfig,
) -> Result<GeometricSolution, NoSolutionEvidence> {
    let mut x = x0.clone();
    if !system.admissible(&x) {
        return Err(NoSolutionEvidence::LeftDomain {
            iteration: 0,
            residual: f64::NAN,
        });
    }
    let setup = |e: crate::tetshape::TetError| NoSolutionEvidence::Setup(e.to_string());
    for iteration in 0..=config.max_iterations {
        let (f, jac) = system.evaluate(&x).map_err(setup)?;
        let r = if f.is_empty() { 0.0 } else { f.amax() };
        if !r.is_finite() || r > DIVERGENCE {
            return Err(NoSolutionEvidence::Diverged {
                iteration,
                residual: r,
            });
        }
        if r < config.tolerance {
            return GeometricSolution::assemble(system, system.angles(&x), r, iteration)
                .map_err(setup);
        }
        if iteration == config.max_iterations {
            return Err(NoSolutionEvidence::MaxIterations { residual: r });
        }
        let step = if jac.is_square() {
            jac.clone().lu().solve(&(-&f))
        } else {
            jac.clone().svd(true, true).solve(&(-&f), 1e-14).ok()
        };
        let Some(dx) = step.filter(|d| d.iter().all(|v| v.is_finite())) else {
            return Err(NoSolutionEvidence::SingularJacobian { iteration });
        };
        let mut lambda = 1.0;
        let mut fallback = None;
        loop {
            if lambda * dx.amax() < 1e-14 {
                match fallback {
                    Some(y) => {
                        x = y;
                        break;
                    }
                    None => {
                        return Err(NoSolutionEvidence::LeftDomain {
                            iteration,
                            residual: r,
                        })
                    }
                }
            }
            let y = &x + lambda * &dx;
            if system.admissible(&y) {
                let ry = system.residual(&y).map_err(setup)?.amax();
                if ry < r {
                    x = y;
                    break;
                }
                // keep the longest admissible step in case nothing decreases
                fallback.get_or_insert(y);
            }
            lambda *= config.damping;
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::regular_ideal_octahedron_volume;
    use crate::tetshape::{volume_integral, DihedralAngles};
    use crate::tricomb::{enumerate_pairings, FilterSet};
    use std::f64::consts::PI;

    #[test]
    fn minimal_manifolds() {
        let expected = 2.0 * volume_integral(&DihedralAngles::regular(PI / 6.0).unwrap()).unwrap();
        let all = enumerate_pairings(2, &FilterSet::census()).unwrap();
        assert_eq!(all.len(), 8);
        for (_, p) in all {
            let s = solve(&p, &CuspMarks::none(), &SolverConfig::default()).unwrap();
            assert!((s.volume - expected).abs() < 1e-9);
            assert!((s.volume - 6.452).abs() < 1e-3);
            assert_eq!(s.iterations, 0);
        }
    }

    #[test]
    fn octahedral_structure() {
        let (_, p) = enumerate_pairings(2, &FilterSet::census())
            .unwrap()
            .remove(0);
        let s = solve(&p, &CuspMarks::all_zero(&p), &SolverConfig::default()).unwrap();
        assert!((s.volume - 2.0 * regular_ideal_octahedron_volume()).abs() < 1e-12);
        assert!(s.edge_lengths.iter().all(|l| l.is_infinite()));
    }

    #[test]
    fn recovers_from_perturbed_start() {
        let (_, p) = enumerate_pairings(2, &FilterSet::census())
            .unwrap()
            .remove(0);
        let system = build_equations(&p, &CuspMarks::none()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x = system
            .initial_guess()
            .map(|a| a * (1.0 + 0.05 * rng.gen_range(-1.0..1.0)));
        let s = solve_from(&system, &x, &SolverConfig::default()).unwrap();
        for a in &s.assignment.angles {
            for &t in a {
                assert!((t - PI / 6.0).abs() < 1e-8);
            }
        }
    }
}

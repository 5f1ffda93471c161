//! Random admissible angle tuples for the property tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use hyperbound::tetshape::{volume_params, DihedralAngles};
use rand::Rng;

pub mod pairings;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    UltraIdeal,
    Ideal,
    Finite,
    Mixed,
}

pub const REGIMES: [Regime; 4] = [
    Regime::UltraIdeal,
    Regime::Ideal,
    Regime::Finite,
    Regime::Mixed,
];

fn admissible(a: [f64; 6]) -> Option<DihedralAngles> {
    let t = DihedralAngles::new(a).ok()?;
    volume_params(&t).ok()?;
    Some(t)
}

/// Rejection sampler for a tetrahedron of the given regime.
pub fn sample<R: Rng>(rng: &mut R, regime: Regime) -> DihedralAngles {
    loop {
        let candidate = match regime {
            Regime::UltraIdeal => {
                let a: [f64; 6] = std::array::from_fn(|_| rng.gen_range(0.05..1.0));
                Some(a)
            }
            Regime::Finite => {
                let a: [f64; 6] = std::array::from_fn(|_| rng.gen_range(0.6..1.7));
                let ok = DihedralAngles::new(a)
                    .map(|t| t.vertex_sums().iter().all(|&s| s > PI + 0.02))
                    .unwrap_or(false);
                ok.then_some(a)
            }
            Regime::Mixed => {
                let a: [f64; 6] = std::array::from_fn(|_| rng.gen_range(0.1..1.6));
                let ok = DihedralAngles::new(a)
                    .map(|t| {
                        let s = t.vertex_sums();
                        s.iter().any(|&x| x > PI + 0.02) && s.iter().any(|&x| x < PI - 0.02)
                    })
                    .unwrap_or(false);
                ok.then_some(a)
            }
            Regime::Ideal => {
                // one vertex ideal, or a fully ideal (symmetric) tetrahedron
                let a0 = rng.gen_range(0.1..2.0);
                let b0 = rng.gen_range(0.1..(PI - a0 - 0.05).max(0.11));
                let c0 = PI - a0 - b0;
                if c0 <= 0.05 {
                    None
                } else if rng.gen_bool(0.5) {
                    Some([a0, b0, c0, a0, b0, c0])
                } else {
                    let rest: [f64; 3] = std::array::from_fn(|_| rng.gen_range(0.1..1.4));
                    Some([a0, b0, c0, rest[0], rest[1], rest[2]])
                }
            }
        };
        if let Some(t) = candidate.and_then(admissible) {
            return t;
        }
    }
}

/// Finite symmetric tetrahedron `T(A,B,C)`.
pub fn sample_finite_symmetric<R: Rng>(rng: &mut R) -> (f64, f64, f64) {
    loop {
        let (a, b, c) = (
            rng.gen_range(0.7..1.6),
            rng.gen_range(0.7..1.6),
            rng.gen_range(0.7..1.6),
        );
        if a + b + c > PI + 0.02 && hyperbound::tetshape::symmetric_theta(a, b, c).is_ok() {
            return (a, b, c);
        }
    }
}

/// Interior tuple for derivative checks: no ideal vertex, every vertex sum
/// well away from π.
pub fn sample_interior<R: Rng>(rng: &mut R) -> DihedralAngles {
    let regimes = [Regime::UltraIdeal, Regime::Finite, Regime::Mixed];
    loop {
        let regime = regimes[rng.gen_range(0..3)];
        let t = sample(rng, regime);
        let a = t.as_array();
        if t.vertex_sums().iter().all(|s| (s - PI).abs() > 0.05)
            && a.iter().all(|&x| x > 0.05 && x < PI - 0.05)
        {
            return t;
        }
    }
}

/// All 24 permutations of `0..4`.
pub fn s4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|x| p.contains(&x)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Hand-picked pairings of the three ansatz manifolds: genus-2 boundary
/// with one cusp, genus-3 boundary, genus-2 boundary with two cusps.
pub const M21: &str = "3.090i10202129002d111a1i00";
pub const M30: &str = "3.090i1013200400231014292i";
pub const M22: &str = "4.10181c2000080c30383c3000282c2010";

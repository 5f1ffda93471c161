use std::f64::consts::{FRAC_PI_2, PI, TAU};

use super::{degenerate, DihedralAngles, TetError};
use crate::specfun::{integrate_with, lobachevsky, QuadratureSettings};

/// Parameters of the Derevnin–Mednykh volume integral.
///
/// `z1` and `z2` are the two roots of `k1 cos z + k2 sin z = k3` around
/// `φ = atan2(k2, k1)`. Using `atan2` instead of the principal `arctan(k2/k1)`
/// keeps `φ` continuous when `k1` changes sign with `k2 > 0`, which is where
/// truncated tetrahedra force a branch change.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeParams {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
    pub z1: f64,
    pub z2: f64,
}

pub fn volume_params(angles: &DihedralAngles) -> Result<VolumeParams, TetError> {
    angles.require_positive()?;
    angles.check_hyperbolic()?;
    let [a, b, c, d, e, f] = angles.as_array();
    let s = angles.total();
    let pairs = [
        s,
        a + d,
        b + e,
        c + f,
        d + e + f,
        d + b + c,
        a + e + c,
        a + b + f,
    ];
    let k1 = -pairs.iter().map(|x| x.cos()).sum::<f64>();
    let k2 = pairs.iter().map(|x| x.sin()).sum::<f64>();
    let k3 = 2.0 * (a.sin() * d.sin() + b.sin() * e.sin() + c.sin() * f.sin());
    let r2 = k1 * k1 + k2 * k2;
    if r2.sqrt() < 1e-14 {
        return Err(TetError::BranchUndefined);
    }
    let disc = r2 - k3 * k3;
    if disc < -1e-9 * r2.max(1.0) {
        return Err(degenerate(format!("k1^2 + k2^2 - k3^2 = {disc:e} < 0")));
    }
    let k4 = disc.max(0.0).sqrt();
    let phi = k2.atan2(k1);
    let psi = k4.atan2(k3);
    let params = VolumeParams {
        k1,
        k2,
        k3,
        k4,
        z1: phi - psi,
        z2: phi + psi,
    };
    for z in [params.z1, params.z2] {
        if let Some(v) = endpoint_value(angles, z) {
            if v.abs() > 1e-6 {
                return Err(degenerate(format!(
                    "integrand is {v:e} at endpoint z = {z}, not 0"
                )));
            }
        }
    }
    Ok(params)
}

/// Integrand value at an endpoint, or `None` if a factor is too close to
/// zero for the value to be meaningful (ideal vertices put a zero there).
fn endpoint_value(angles: &DihedralAngles, z: f64) -> Option<f64> {
    let (num, den) = factors(angles, z);
    if num.iter().chain(den.iter()).any(|x| x.abs() < 1e-6) {
        return None;
    }
    Some(log_ratio(&num, &den))
}

fn factors(angles: &DihedralAngles, z: f64) -> ([f64; 4], [f64; 4]) {
    let v = angles.vertex_sums();
    let h = angles.hamiltonian_sums();
    let num = v.map(|s| (0.5 * (s + z)).cos());
    let den = [
        (0.5 * (h[0] + z)).sin(),
        (0.5 * (h[1] + z)).sin(),
        (0.5 * (h[2] + z)).sin(),
        (0.5 * z).sin(),
    ];
    (num, den)
}

fn log_ratio(num: &[f64; 4], den: &[f64; 4]) -> f64 {
    num.iter().map(|x| x.abs().ln()).sum::<f64>() - den.iter().map(|x| x.abs().ln()).sum::<f64>()
}

/// Volume by direct quadrature of the Derevnin–Mednykh integral.
///
/// The integrand has logarithmic singularities wherever one of its eight
/// factors vanishes; the interval is split there so every panel sees at
/// most endpoint singularities.
pub fn volume_integral(angles: &DihedralAngles) -> Result<f64, TetError> {
    volume_integral_with(angles, &QuadratureSettings::default())
}

pub fn volume_integral_with(
    angles: &DihedralAngles,
    settings: &QuadratureSettings,
) -> Result<f64, TetError> {
    let p = volume_params(angles)?;
    let v = angles.vertex_sums();
    let h = angles.hamiltonian_sums();
    let mut bases: Vec<f64> = v.iter().map(|s| PI - s).collect();
    bases.extend(h.iter().map(|s| -s));
    bases.push(0.0);

    let margin = 1e-12 * (1.0 + p.z2.abs());
    let mut cuts = vec![p.z1];
    for b in bases {
        let lo = ((p.z1 - b) / TAU).ceil() as i64;
        let hi = ((p.z2 - b) / TAU).floor() as i64;
        for m in lo..=hi {
            let z = b + TAU * m as f64;
            if z > p.z1 + margin && z < p.z2 - margin {
                cuts.push(z);
            }
        }
    }
    cuts.push(p.z2);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|x, y| (*x - *y).abs() <= margin);

    let pieces = (cuts.len() - 1).max(1);
    let piece_settings = QuadratureSettings {
        tol: settings.tol / pieces as f64,
        max_evals: settings.max_evals / pieces,
    };
    let f = |z: f64| {
        let (num, den) = factors(angles, z);
        log_ratio(&num, &den)
    };
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += integrate_with(f, w[0], w[1], &piece_settings)?;
    }
    Ok(-0.25 * total)
}

/// `Im U(z, T)`, where `U` is the eight-term dilogarithm combination.
fn im_u(angles: &DihedralAngles, z: f64) -> f64 {
    let v = angles.vertex_sums();
    let h = angles.hamiltonian_sums();
    lobachevsky(0.5 * z) + h.iter().map(|s| lobachevsky(0.5 * (s + z))).sum::<f64>()
        - v.iter()
            .map(|s| lobachevsky(0.5 * (PI + s + z)))
            .sum::<f64>()
}

/// Volume as a signed sum of sixteen Lobachevsky functions.
pub fn volume_dilog(angles: &DihedralAngles) -> Result<f64, TetError> {
    let p = volume_params(angles)?;
    Ok(0.5 * (im_u(angles, p.z1) - im_u(angles, p.z2)))
}

/// Default volume routine (the dilogarithm form).
pub fn volume(angles: &DihedralAngles) -> Result<f64, TetError> {
    volume_dilog(angles)
}

/// Milnor's formula `Λ(A) + Λ(B) + Λ(C)` for the ideal tetrahedron with
/// angles `A, B, C` at the edges of one vertex.
pub fn volume_ideal(a: f64, b: f64, c: f64) -> Result<f64, TetError> {
    for x in [a, b, c] {
        if !(x > 0.0 && x < PI) {
            return Err(degenerate(format!("angle {x} outside (0, pi)")));
        }
    }
    let sum = a + b + c;
    if (sum - PI).abs() > 1e-9 {
        return Err(TetError::NotIdeal { sum });
    }
    Ok(lobachevsky(a) + lobachevsky(b) + lobachevsky(c))
}

/// The angle `θ ∈ (0, π/2)` of the finite symmetric tetrahedron `T(A,B,C)`,
/// with `tan θ = sin A / sinh l_A` (and likewise for B, C).
pub fn symmetric_theta(a: f64, b: f64, c: f64) -> Result<f64, TetError> {
    let bad = |msg: String| TetError::NotFiniteSymmetric(msg);
    for x in [a, b, c] {
        if !(x > 0.0 && x < PI) {
            return Err(bad(format!("angle {x} outside (0, pi)")));
        }
    }
    if a + b + c <= PI {
        return Err(bad(format!("angle sum {} <= pi", a + b + c)));
    }
    let tet = DihedralAngles::symmetric(a, b, c).map_err(|e| bad(e.to_string()))?;
    tet.check_hyperbolic().map_err(|e| bad(e.to_string()))?;
    let (ca, cb, cc) = (a.cos(), b.cos(), c.cos());
    let root =
        (1.0 - ca + cb + cc) * (1.0 + ca - cb + cc) * (1.0 + ca + cb - cc) * (-1.0 + ca + cb + cc);
    if !(root > 0.0) {
        return Err(bad(format!("square-root argument {root:e} <= 0")));
    }
    let num = 1.0 - ca * ca - cb * cb - cc * cc - 2.0 * ca * cb * cc;
    let theta = num.atan2(root.sqrt());
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(bad(format!("theta = {theta} outside (0, pi/2)")));
    }
    Ok(theta)
}

/// Volume of a symmetric tetrahedron `T(A,B,C)` with finite vertices, by
/// the one-dimensional arcsine integral.
pub fn volume_symmetric(a: f64, b: f64, c: f64) -> Result<f64, TetError> {
    let theta = symmetric_theta(a, b, c)?;
    let (ca, cb, cc) = (a.cos(), b.cos(), c.cos());
    // Substituting u = π/2 − t turns cos t into sin u and asin(cos t) into u,
    // which keeps the removable singularity at u = 0 free of cancellation.
    let g = |u: f64| {
        let s = u.sin();
        ((ca * s).asin() + (cb * s).asin() + (cc * s).asin() - u) / (2.0 * u).sin()
    };
    let integral = integrate_with(g, 0.0, FRAC_PI_2 - theta, &QuadratureSettings::default())?;
    Ok(2.0 * integral)
}

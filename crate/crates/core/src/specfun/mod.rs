//! Special functions shared by the volume formulas: the Lobachevsky
//! function, the dilogarithm restricted to the unit circle, and an
//! adaptive quadrature routine.
//!
//! The Lobachevsky function is evaluated through the Clausen function
//! `Cl₂(x) = 2 Λ(x/2)` using the expansion
//!
//! ```text
//! Cl₂(x) = x − x·ln|x| + Σ_{k≥1} ζ(2k) / (k (2k+1)) · x · (x / 2π)^{2k},   |x| ≤ π
//! ```
//!
//! after reducing the argument to `[−π, π)`. The ratio of successive terms is
//! at most 1/4, so 30 terms exhaust double precision.

mod quadrature;

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::sync::OnceLock;

use num_complex::Complex64;

pub use quadrature::{integrate, integrate_with, QuadratureError, QuadratureSettings};

const CLAUSEN_TERMS: usize = 30;

/// `ζ(2k) / (k (2k + 1))` for `k = 1..=CLAUSEN_TERMS`.
fn clausen_coefficients() -> &'static [f64; CLAUSEN_TERMS] {
    static COEFFS: OnceLock<[f64; CLAUSEN_TERMS]> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut out = [0.0; CLAUSEN_TERMS];
        for (i, slot) in out.iter_mut().enumerate() {
            let k = (i + 1) as f64;
            *slot = zeta_even(2 * (i + 1)) / (k * (2.0 * k + 1.0));
        }
        out
    })
}

/// Riemann zeta at an even integer `s ≥ 2`, by direct summation with an
/// Euler–Maclaurin tail.
fn zeta_even(s: usize) -> f64 {
    if s == 2 {
        return PI * PI / 6.0;
    }
    const N: usize = 1000;
    let sf = s as f64;
    // Sum the small terms first.
    let mut sum = 0.0;
    for m in (1..N).rev() {
        sum += (m as f64).powi(-(s as i32));
    }
    let nf = N as f64;
    let tail = nf.powf(1.0 - sf) / (sf - 1.0) + 0.5 * nf.powf(-sf) + sf / 12.0 * nf.powf(-sf - 1.0);
    sum + tail
}

/// Clausen function `Cl₂(x) = Σ sin(nx)/n²`.
pub fn clausen(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    // Reduce to [-π, π).
    let r = (x + PI).rem_euclid(TAU) - PI;
    if r == 0.0 {
        return 0.0;
    }
    let y2 = (r / TAU) * (r / TAU);
    let mut series = 0.0;
    let mut pow = 1.0;
    for c in clausen_coefficients() {
        pow *= y2;
        let term = c * pow;
        series += term;
        if term < 1e-18 * series.abs() {
            break;
        }
    }
    r - r * r.abs().ln() + r * series
}

/// Lobachevsky function `Λ(θ) = −∫₀^θ log|2 sin t| dt`.
///
/// Odd and π-periodic; `Λ(θ) = Cl₂(2θ)/2`.
pub fn lobachevsky(theta: f64) -> f64 {
    if !theta.is_finite() {
        return f64::NAN;
    }
    // Reduce to [-π/2, π/2) before doubling so that periodicity holds
    // without the rounding of 2θ leaking into the reduction.
    let r = (theta + FRAC_PI_2).rem_euclid(PI) - FRAC_PI_2;
    0.5 * clausen(2.0 * r)
}

/// `Li₂(e^{iz})` for real `z`, with the principal branch of the logarithm.
///
/// The real part is the Bernoulli polynomial `π²/6 − z(2π − z)/4` on
/// `[0, 2π]`; the imaginary part is `Cl₂(z) = 2Λ(z/2)`.
pub fn dilog_unit_circle(z: f64) -> Complex64 {
    let r = z.rem_euclid(TAU);
    let re = PI * PI / 6.0 - r * (TAU - r) / 4.0;
    let im = 2.0 * lobachevsky(0.5 * z);
    Complex64::new(re, im)
}

/// Volume of the regular ideal octahedron, `8Λ(π/4)`.
pub fn regular_ideal_octahedron_volume() -> f64 {
    8.0 * lobachevsky(PI / 4.0)
}

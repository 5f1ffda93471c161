use std::f64::consts::PI;

use hyperbound::specfun::*;
use proptest::prelude::*;

/// `Λ(θ) = ½ Σ sin(2nθ)/n²` truncated after `n_max` terms.
fn lobachevsky_series(theta: f64, n_max: u64) -> f64 {
    let mut s = 0.0;
    for n in 1..=n_max {
        let nf = n as f64;
        s += (2.0 * nf * theta).sin() / (nf * nf);
    }
    0.5 * s
}

#[test]
fn sixth_matches_fourier_series() {
    // sin(nπ/3) repeats with period 6 and zero sum, so the truncation error
    // after N terms is O(1/N²)
    let series = lobachevsky_series(PI / 6.0, 20_000_000);
    assert!((lobachevsky(PI / 6.0) - series).abs() < 1e-12, "{series}");
}

#[test]
fn quarter_is_octahedron_eighth() {
    assert!((8.0 * lobachevsky(PI / 4.0) - 3.66386).abs() < 1e-5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn periodic_and_odd(theta in -10.0f64..10.0) {
        prop_assert!((lobachevsky(theta + PI) - lobachevsky(theta)).abs() < 1e-12);
        prop_assert!((lobachevsky(-theta) + lobachevsky(theta)).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn dilog_imaginary_part(z in 0.0f64..(2.0 * PI)) {
        let l = dilog_unit_circle(z);
        prop_assert!((l.im - 2.0 * lobachevsky(z / 2.0)).abs() < 1e-11);
    }

    #[test]
    fn dilog_real_part_series(z in 0.01f64..(2.0 * PI - 0.01)) {
        // Re Li₂(e^{iz}) = Σ cos(nz)/n²; tail after N terms is below 1/N
        let n = 200_000;
        let s: f64 = (1..=n).map(|k| (k as f64 * z).cos() / (k as f64).powi(2)).sum();
        prop_assert!((dilog_unit_circle(z).re - s).abs() < 1e-5);
    }

    #[test]
    fn polynomial_quadrature(k in 0i32..12, b in 0.1f64..3.0) {
        let v = integrate(|x| x.powi(k), 0.0, b, 1e-10).unwrap();
        let exact = b.powi(k + 1) / (k as f64 + 1.0);
        prop_assert!((v - exact).abs() < 1e-10_f64.max(1e-13 * exact));
    }
}

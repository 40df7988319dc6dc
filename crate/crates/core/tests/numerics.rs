use std::f64::consts::PI;

use fig8_core::numerics::{differentiate1, differentiate2, extrapolate_to_zero, integrate_path, solve_cubic, ContourPath, QuadratureConfig, Segment};
use fig8_core::polylog::li2;
use fig8_core::{Complex64, Error};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn roots_of(coeffs: [f64; 4]) -> Vec<Complex64> {
    let [a, b, cc, d] = coeffs.map(|x| c(x, 0.0));
    solve_cubic(a, b, cc, d).unwrap().iter().map(|r| r.root).collect()
}

fn assert_same_roots(got: &[Complex64], want: &[Complex64]) {
    for w in want {
        let nearest = got.iter().map(|g| (g - w).norm()).fold(f64::INFINITY, f64::min);
        assert!(nearest < 1e-12, "missing root {w} in {got:?}");
    }
}

#[test]
fn cube_roots_of_unity() {
    let want = [c(1.0, 0.0), Complex64::from_polar(1.0, 2.0 * PI / 3.0), Complex64::from_polar(1.0, -2.0 * PI / 3.0)];
    assert_same_roots(&roots_of([1.0, 0.0, 0.0, -1.0]), &want);
}

#[test]
fn factored_cubics() {
    assert_same_roots(&roots_of([1.0, -6.0, 11.0, -6.0]), &[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
    assert_same_roots(&roots_of([1.0, -1.0, 1.0, -1.0]), &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)]);
}

#[test]
fn double_root_is_polished() {
    // (w - 1)^2 (w + 2)
    let rs = solve_cubic(c(1.0, 0.0), c(0.0, 0.0), c(-3.0, 0.0), c(2.0, 0.0)).unwrap();
    for r in rs {
        assert!(r.residual < 1e-10 * r.root.norm().powi(3).max(1.0));
        assert!(r.iterations <= 5);
    }
}

#[test]
fn zero_leading_coefficient() {
    let z = Complex64::default();
    assert!(matches!(solve_cubic(z, c(1.0, 0.0), z, z), Err(Error::DegenerateDegree)));
}

fn complex_strategy() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b)| c(a, b))
}

proptest! {
    #[test]
    fn vieta_relations(c3 in complex_strategy(), c2 in complex_strategy(), c1 in complex_strategy(), c0 in complex_strategy()) {
        prop_assume!(c3.norm() > 0.1);
        let rs = solve_cubic(c3, c2, c1, c0).unwrap();
        let [r1, r2, r3] = rs.map(|r| r.root);
        let scale = |x: Complex64| x.norm().max(1.0);
        let s1 = -c2 / c3;
        let s2 = c1 / c3;
        let s3 = -c0 / c3;
        prop_assert!((r1 + r2 + r3 - s1).norm() < 1e-9 * scale(s1));
        prop_assert!((r1 * r2 + r1 * r3 + r2 * r3 - s2).norm() < 1e-9 * scale(s2));
        prop_assert!((r1 * r2 * r3 - s3).norm() < 1e-9 * scale(s3));
        for r in rs {
            prop_assert!(r.residual < 1e-10 * (r.root.norm().powi(3) * c3.norm()).max(1.0));
        }
    }

    #[test]
    fn polynomial_second_derivatives(coeffs in prop::collection::vec(complex_strategy(), 7), z0 in complex_strategy()) {
        let p = |z: Complex64| coeffs.iter().rev().fold(Complex64::default(), |acc, a| acc * z + a);
        let exact: Complex64 = (2..7).map(|k| coeffs[k] * (k * (k - 1)) as f64 * z0.powu(k as u32 - 2)).sum();
        let d = differentiate2(p, z0, 0.1).unwrap();
        prop_assert!((d - exact).norm() <= 1e-9 * exact.norm().max(1.0), "{} vs {}", d, exact);
    }

    #[test]
    fn orientation_and_additivity(a in complex_strategy(), b in complex_strategy(), m in complex_strategy()) {
        prop_assume!((a - m).norm() > 0.1 && (m - b).norm() > 0.1);
        let f = |z: Complex64| (z * 0.7).sin() * z.exp();
        let cfg = QuadratureConfig::default();
        let first = ContourPath::polyline(&[a, m]).unwrap();
        let second = ContourPath::polyline(&[m, b]).unwrap();
        let whole = first.concat(&second).unwrap();
        let i1 = integrate_path(f, &first, &cfg).unwrap().value;
        let i2 = integrate_path(f, &second, &cfg).unwrap().value;
        let iw = integrate_path(f, &whole, &cfg).unwrap().value;
        let tol = |x: Complex64| 2.0 * cfg.abs_tol.max(cfg.rel_tol * x.norm());
        prop_assert!((iw - i1 - i2).norm() <= tol(iw));
        let back = integrate_path(f, &whole.reversed(), &cfg).unwrap().value;
        prop_assert!((back + iw).norm() <= tol(iw));
    }
}

#[test]
fn second_derivative_examples() {
    let d = differentiate2(|z: Complex64| z.exp(), c(0.0, 0.0), 0.1).unwrap();
    assert!((d - 1.0).norm() < 1e-8);
    let d = differentiate2(|z: Complex64| z * z * z, c(1.0, 0.0), 0.1).unwrap();
    assert!((d - 6.0).norm() < 1e-8);
}

#[test]
fn dilog_of_exponential_derivatives() {
    let f = |z: Complex64| li2(z.exp()).unwrap();
    let z0 = c(-1.0, 0.0);
    let e = (-1.0f64).exp();
    // first derivative -log(1 - e^z), second e^z/(1 - e^z)
    let d1 = differentiate1(f, z0, 0.1).unwrap();
    assert!((d1 + (1.0 - e).ln()).norm() < 1e-8);
    let d2 = differentiate2(f, z0, 0.1).unwrap();
    assert!((d2 - e / (1.0 - e)).norm() < 1e-8 * (e / (1.0 - e)));
}

#[test]
fn closed_contour_with_arc() {
    let r = 0.5;
    let path = ContourPath::new(vec![
        Segment::Line { from: c(-2.0, 0.0), to: c(-r, 0.0) },
        Segment::Arc { center: c(0.0, 0.0), radius: r, start: PI, end: 0.0 },
        Segment::Line { from: c(r, 0.0), to: c(2.0, 0.0) },
    ])
    .unwrap();
    // integrand analytic away from 0; the upper half-disk is avoided, so the pole contributes -pi i
    let v = integrate_path(|z| 1.0 / z, &path, &QuadratureConfig::default()).unwrap().value;
    assert!((v - c(0.0, -PI)).norm() < 1e-10, "{v}");
    assert!((path.length() - (3.0 + PI * r)).abs() < 1e-14);
}

#[test]
fn richardson_recovers_linear_limit() {
    let hs = [0.1, 0.05, 0.025];
    let vals: Vec<Complex64> = hs.iter().map(|h| c(2.0 + 3.0 * h + h * h, -1.0 + h)).collect();
    let v = extrapolate_to_zero(&hs, &vals).unwrap();
    assert!((v - c(2.0, -1.0)).norm() < 1e-13);
}

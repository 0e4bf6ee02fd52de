use std::f64::consts::PI;

use proptest::prelude::*;
use sphereheat_core::identity_lab::operators::*;
use sphereheat_core::orthopoly::legendre_eval;
use sphereheat_core::quadrature::*;

/// Even moments of `(1 - v²)^a` by `m_{2j} = m_{2j-2} (2j-1)/(2j+2a+1)`.
fn moments(a: f64, count: usize) -> Vec<f64> {
    let m0 = PI.sqrt() * libm::tgamma(a + 1.0) / libm::tgamma(a + 1.5);
    let mut out = vec![m0];
    for j in 1..count {
        let j = j as f64;
        out.push(out.last().unwrap() * (2.0 * j - 1.0) / (2.0 * j + 2.0 * a + 1.0));
    }
    out
}

fn check_exactness(n: usize, a: f64) {
    let rule = gauss_jacobi_rule(n, a).unwrap();
    let even = moments(a, n);
    for k in 0..2 * n {
        let got = rule.integrate(|v| v.powi(k as i32)).unwrap();
        if k % 2 == 1 {
            // pairs cancel up to the rounding of the running sum
            assert!(got.abs() <= 1e-14 * even[0], "n={n} a={a} k={k}");
        } else {
            let want = even[k / 2];
            assert!((got - want).abs() <= 1e-12 * want, "n={n} a={a} k={k}: {got} vs {want}");
        }
    }
}

#[test]
fn monomials_are_integrated_exactly() {
    for &a in &[-0.75, -0.5, -0.25, 0.0, 0.5, 1.5, 3.5, 7.5] {
        for n in [1, 2, 3, 5, 8, 13, 21, 40] {
            check_exactness(n, a);
        }
    }
    for n in [1, 4, 16, 40] {
        let rule = gauss_chebyshev_rule(n).unwrap();
        let even = moments(-0.5, n);
        for k in (0..2 * n).step_by(2) {
            let got = rule.integrate(|v| v.powi(k as i32)).unwrap();
            assert!((got - even[k / 2]).abs() <= 1e-12 * even[k / 2]);
        }
    }
}

#[test]
fn chebyshev_rule_closed_form() {
    let rule = gauss_chebyshev_rule(7).unwrap();
    assert_eq!(rule.weight_exponent(), -0.5);
    let mut nodes: Vec<f64> = (1..=7).map(|k| ((2 * k - 1) as f64 * PI / 14.0).cos()).collect();
    nodes.sort_by(f64::total_cmp);
    let mut got = rule.nodes().to_vec();
    got.sort_by(f64::total_cmp);
    for (a, b) in got.iter().zip(&nodes) {
        assert!((a - b).abs() < 1e-15);
    }
    assert!(rule.weights().iter().all(|&w| (w - PI / 7.0).abs() < 1e-15));
}

#[test]
fn large_rules_stay_accurate() {
    for &a in &[-0.5, 0.5, 3.5] {
        let rule = gauss_jacobi_rule(512, a).unwrap();
        let mass: f64 = rule.weights().iter().sum();
        assert!((mass - moments(a, 1)[0]).abs() <= 1e-12 * mass);
        assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
    }
}

type Named = (&'static str, fn(f64) -> f64);

/// Adaptive Simpson on `[lo, hi]`.
fn adaptive_simpson(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(lo), f(hi), f(0.5 * (lo + hi)));
    let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, lo, hi, fa, fm, fb, whole, tol, 50)
}

#[test]
fn half_range_folding_matches_adaptive_integration() {
    let integrands: [Named; 3] =
        [("cos", |v| (3.0 * v).cos()), ("gauss", |v| (v * v).exp()), ("rational", |v| 1.0 / (1.0 + 4.0 * v * v))];
    for &a in &[-0.5, -0.25, 0.0, 0.5, 2.5] {
        let rule = gauss_jacobi_rule(64, a).unwrap();
        for (name, f) in integrands {
            // v = sin φ removes the endpoint singularity of the weight
            let g = |phi: f64| f(phi.sin()) * phi.cos().powf(2.0 * a + 1.0);
            let oracle = adaptive_simpson(&g, 0.0, PI / 2.0, 1e-14);
            let folded = rule.integrate_half(f).unwrap();
            assert!((folded - oracle).abs() <= 1e-10, "{name} a={a}: {folded} vs {oracle}");
        }
    }
}

#[test]
fn mehler_substitution_reproduces_legendre() {
    for ell in 0..=50usize {
        let nodes = oscillation_nodes(ell);
        for k in 1..=15 {
            let theta = 0.1 * k as f64;
            let freq = 2.0 * ell as f64 + 1.0;
            let rhs = 2.0 / PI * mehler_integral(theta, nodes, |u| (freq * u).sin()).unwrap();
            let lhs = legendre_eval(ell, (2.0 * theta).cos()).unwrap();
            assert!((lhs - rhs).abs() <= 1e-8);
        }
    }
}

#[test]
fn mehler_substitution_near_zero_angle() {
    // ∫_θ^{π/2} sin u/√(cos²θ - cos²u) du = π/2 for every θ
    for theta in [1e-8, 1e-4, 0.05] {
        let v = mehler_integral(theta, 64, |u| u.sin()).unwrap();
        assert!((v - PI / 2.0).abs() < 1e-13, "theta={theta}");
    }
    assert!(mehler_integral(0.0, 64, |u| u.sin()).is_err());
}

#[test]
fn rule_construction_errors() {
    assert!(gauss_jacobi_rule(0, 0.0).is_err());
    assert!(gauss_jacobi_rule(4, -1.0).is_err());
    assert!(gauss_chebyshev_rule(0).is_err());
    let rule = gauss_jacobi_rule(8, 0.0).unwrap();
    assert!(rule.integrate(|v| 1.0 / v.abs().min(0.0)).is_err());
}

#[test]
fn sine_operator_identities() {
    for n in 1..=4 {
        for u in spot_check_angles() {
            assert!(idsin_residual(n, u).abs() <= 1e-4, "n={n} u={u}");
        }
    }
    for n in 1..=3 {
        for ell in 0..=3 {
            for u in spot_check_angles() {
                assert!(operator_collapse_residual(n, ell, u).abs() <= 1e-4, "n={n} ell={ell} u={u}");
            }
        }
    }
    for ell in 0..=30 {
        for z in 1..=6 {
            for k in 1..=57 {
                let u = 0.1 + 0.05 * k as f64;
                let diff = partial_cos_sum(ell, z as f64, u) - partial_cos_sum_closed(ell, z as f64, u);
                assert!(diff.abs() <= 1e-12, "ell={ell} z={z} u={u}");
            }
        }
    }
}

#[test]
fn derivative_transfer() {
    for n in 0..=4 {
        for m in 0..=n.min(2) {
            for ell in 0..=6 {
                for t in [0.3, 0.5, 0.8] {
                    assert!(derivative_transfer_residual(n, m, ell, t) <= 1e-5, "n={n} m={m} ell={ell} t={t}");
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn rules_are_symmetric_and_positive(n in 1usize..200, a in -0.95f64..10.0) {
        let rule = gauss_jacobi_rule(n, a).unwrap();
        let (x, w) = (rule.nodes(), rule.weights());
        prop_assert!(w.iter().all(|&w| w > 0.0));
        for i in 0..n {
            prop_assert_eq!(x[i], -x[n - 1 - i]);
            prop_assert_eq!(w[i], w[n - 1 - i]);
        }
        let mass: f64 = w.iter().sum();
        prop_assert!((mass - moments(a, 1)[0]).abs() <= 1e-12 * mass);
    }

    #[test]
    fn exactness_for_random_exponents(n in 1usize..30, a in -0.95f64..6.0) {
        check_exactness(n, a);
    }
}

//! Analytic results checked against independent numerical oracles.

mod common;

use approx::assert_relative_eq;
use lv_core::model::{
    continuous_jacobian, first_integral, fixed_points, vector_field, Matrix2, ModelParams, State,
};
use lv_core::scheme::{
    euler_step, mickens_step_with_phi, rk4_step, simulate, PhiFunction, SchemeId, StepSize,
};
use lv_core::stability::{
    characteristic_residual, classify_mickens, eig2, euler_jacobian, mickens_jacobian,
    Classification,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{fd_jacobian, random_interior_state, random_params};

fn max_rel_diff(a: &Matrix2, b: &Matrix2) -> f64 {
    a.max_abs_diff(b) / b.entries().iter().fold(1.0f64, |m, v| m.max(v.abs()))
}

#[test]
fn continuous_jacobian_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let p = random_params(&mut rng);
        let s = random_interior_state(&mut rng, &p);
        let field = |s: State| {
            let (dx, dy) = vector_field(&p, s);
            State { x: dx, y: dy }
        };
        let fd = fd_jacobian(field, s, 1e-6);
        assert!(max_rel_diff(&continuous_jacobian(&p, s), &fd) < 1e-6);
    }
}

#[test]
fn euler_jacobian_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..500 {
        let p = random_params(&mut rng);
        let h = StepSize::new(rng.random_range(1e-3..3.0)).unwrap();
        let s = random_interior_state(&mut rng, &p);
        let fd = fd_jacobian(|s| euler_step(&p, h, s), s, 1e-6);
        assert!(max_rel_diff(&euler_jacobian(&p, h, s), &fd) < 1e-6);
    }
}

#[test]
fn mickens_jacobian_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..500 {
        let p = random_params(&mut rng);
        let phi = rng.random_range(1e-3..3.0);
        let s = random_interior_state(&mut rng, &p);
        let fd = fd_jacobian(|s| mickens_step_with_phi(&p, phi, s).unwrap(), s, 1e-6);
        let j = mickens_jacobian(&p, phi, s);
        assert!(max_rel_diff(&j, &fd) < 1e-6, "{j:?} vs {fd:?}");
    }
}

/// Real roots of `lambda^2 - tr lambda + det` by bisection on brackets
/// separated by the vertex `tr / 2`.
fn bisect_roots(m: &Matrix2) -> (f64, f64) {
    let (tr, det) = (m.trace(), m.det());
    let f = |l: f64| l * l - tr * l + det;
    let vertex = tr / 2.0;
    let reach =
        1.0 + tr.abs() + det.abs().sqrt() + m.entries().iter().map(|v| v.abs()).sum::<f64>();
    let solve = |mut lo: f64, mut hi: f64| {
        let rising = f(hi) > f(lo);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (f(mid) > 0.0) == rising {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    };
    (solve(vertex - reach, vertex), solve(vertex, vertex + reach))
}

#[test]
fn eig2_matches_bisection_for_symmetric_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..1000 {
        let (a, b, d) = (
            rng.random_range(-10.0..10.0),
            rng.random_range(-10.0..10.0),
            rng.random_range(-10.0..10.0),
        );
        let m = Matrix2::new(a, b, b, d);
        let e = eig2(&m);
        assert!(!e.is_complex());
        let (lo, hi) = bisect_roots(&m);
        let mut got = [e.lambda1.re, e.lambda2.re];
        got.sort_by(f64::total_cmp);
        let scale = 1.0 + lo.abs().max(hi.abs());
        assert!((got[0] - lo).abs() < 1e-10 * scale, "{m:?}");
        assert!((got[1] - hi).abs() < 1e-10 * scale, "{m:?}");
    }
}

#[test]
fn eig2_residuals_for_general_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..5000 {
        let m = Matrix2::new(
            rng.random_range(-5.0..5.0),
            rng.random_range(-5.0..5.0),
            rng.random_range(-5.0..5.0),
            rng.random_range(-5.0..5.0),
        );
        let e = eig2(&m);
        for l in e.as_array() {
            assert!(characteristic_residual(&m, l) < 1e-10, "{m:?} {l}");
        }
        let (m1, m2) = e.moduli();
        assert!(m1 <= m2);
        assert!(
            (e.lambda1 + e.lambda2 - m.trace()).norm() < 1e-12 * (1.0 + m.trace().abs()) + 1e-12
        );
    }
}

/// Closed-form eigenvalues of the Mickens Jacobian at the coexistence point,
/// obtained by hand from the trace and determinant.
fn mickens_p2_eigenvalues(p: &ModelParams, phi: f64) -> (Complex64, Complex64) {
    let (a, d) = (p.alpha(), p.delta());
    let re = 7.0 * a * d * phi * phi + 4.0 * (a + d) * phi + 2.0;
    let im = phi
        * (15.0 * a * a * d * d * phi * phi + 4.0 * a * d + 8.0 * (a * a * d + a * d * d) * phi)
            .sqrt();
    let den = 2.0 * (4.0 * a * d * phi * phi + 2.0 * (a + d) * phi + 1.0);
    (
        Complex64::new(re / den, im / den),
        Complex64::new(re / den, -im / den),
    )
}

#[test]
fn mickens_coexistence_eigenvalues_match_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..1000 {
        let p = random_params(&mut rng);
        let phi = rng.random_range(1e-4..5.0);
        let r = classify_mickens(&p, phi, fixed_points(&p).coexistence).unwrap();
        assert_relative_eq!(r.jacobian.det(), 1.0, epsilon = 1e-12);
        let (l1, l2) = mickens_p2_eigenvalues(&p, phi);
        assert!(
            (r.eigen.lambda1 - l1).norm() < 1e-12,
            "{:?} vs {l1}",
            r.eigen
        );
        assert!((r.eigen.lambda2 - l2).norm() < 1e-12);
        assert!((l1.norm() - 1.0).abs() < 1e-12);
        assert_eq!(r.classification, Classification::LinearCenter);
    }
}

#[test]
fn rk4_error_ratio_is_fourth_order() {
    let p = ModelParams::reference();
    let s0 = State { x: 5.0, y: 5.0 };
    let run = |h: f64, n: usize| {
        simulate(
            SchemeId::ReferenceRK4,
            p,
            PhiFunction::Identity,
            StepSize::new(h).unwrap(),
            s0,
            n,
        )
        .unwrap()
        .last()
        .unwrap()
    };
    // t = 2 with h = 0.1, 0.05 and a much finer reference
    let exact = run(0.1 / 64.0, 1280);
    let e1 = run(0.1, 20).distance(&exact);
    let e2 = run(0.05, 40).distance(&exact);
    let ratio = e1 / e2;
    assert!((12.0..=20.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn rk4_conserves_first_integral() {
    let p = ModelParams::reference();
    let h = StepSize::new(1e-3).unwrap();
    let mut s = State { x: 5.0, y: 5.0 };
    let v0 = first_integral(&p, s).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..20_000 {
        s = rk4_step(&p, h, s);
        worst = worst.max(((first_integral(&p, s).unwrap() - v0) / v0).abs());
    }
    assert!(worst < 1e-6, "{worst}");
}

#[test]
fn first_integral_minimum_by_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..50 {
        let p = random_params(&mut rng);
        let vmin = first_integral(&p, fixed_points(&p).coexistence).unwrap();
        for _ in 0..200 {
            let s = State {
                x: rng.random_range(1e-3..50.0),
                y: rng.random_range(1e-3..50.0),
            };
            assert!(first_integral(&p, s).unwrap() >= vmin - 1e-12);
        }
    }
}

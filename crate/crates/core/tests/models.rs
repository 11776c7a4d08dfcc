use std::path::Path;

use abmd::models::lunar::{inertia_tensor, inertia_tensor_dot};
use abmd::models::{solve_kepler, LunarParams, ManufacturedDde};
use abmd::testkit::{fd_matrix_derivative, kepler_bisection, reference_solution};
use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn newton_kepler_matches_bisection() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..2000 {
        let m = rng.gen_range(-20.0..20.0);
        let e = rng.gen_range(0.0..0.95);
        let newton = solve_kepler(m, e).unwrap();
        let bisect = kepler_bisection(m, e);
        assert!((newton - bisect).abs() <= 1e-12 * bisect.abs().max(1.0), "M={m} e={e}");
    }
}

#[test]
fn inertia_rate_matches_finite_difference() {
    let p = LunarParams::default();
    let r = |t: f64| Vector3::new(384400.0 * (0.23 * t).cos(), 380000.0 * (0.23 * t).sin(), 2000.0 * t.sin());
    let rdot = |t: f64| {
        Vector3::new(-384400.0 * 0.23 * (0.23 * t).sin(), 380000.0 * 0.23 * (0.23 * t).cos(), 2000.0 * t.cos())
    };
    let w = |t: f64| Vector3::new(1e-4 * (3.0 * t).sin(), 2e-4 * t.cos(), 0.23 + 1e-3 * t.sin());
    let wdot = |t: f64| Vector3::new(3e-4 * (3.0 * t).cos(), -2e-4 * t.sin(), 1e-3 * t.cos());
    for t in [0.0, 1.3, 7.9] {
        let analytic = inertia_tensor_dot(&r(t), &rdot(t), &w(t), &wdot(t), &p).unwrap();
        let fd = fd_matrix_derivative(|s| inertia_tensor(&r(s), &w(s), &p).unwrap(), t, 1e-2);
        assert!((analytic - fd).norm() <= 1e-6 * analytic.norm(), "t={t}: {analytic} vs {fd}");
    }
}

#[test]
fn shipped_lunar_params_are_the_defaults() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/lunar.params");
    assert_eq!(LunarParams::from_file(path).unwrap(), LunarParams::default());
}

#[test]
fn shipped_short_delay_params_are_the_constructor() {
    use abmd::experiments::{Model, ModelKind};
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/manufactured_short_delay.params");
    let model = Model::load(ModelKind::Manufactured, Some(&path)).unwrap();
    assert_eq!(model.manufactured().unwrap(), &ManufacturedDde::short_delay());
}

#[test]
fn reference_solution_tracks_manufactured_exact() {
    let m = ManufacturedDde::default();
    let h = 1.0 / 16.0;
    let xs = reference_solution(&m, 0.0, h, 48).unwrap();
    for (i, x) in xs.iter().enumerate() {
        for (a, b) in x.iter().zip(m.exact(i as f64 * h)) {
            assert!((a - b).abs() <= 1e-13, "node {i}: {a} vs {b}");
        }
    }
}

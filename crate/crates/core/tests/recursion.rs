mod common;

use common::linspace;
use maxsat_core::potential::{minimize_potential, potential};
use maxsat_core::recursion::{
    coupled_fixed_point, coupled_step, enumerate_fixed_points, modified_coupled_fixed_point, uncoupled_fixed_point,
    uncoupled_step,
};
use maxsat_core::system::translate_system;
use maxsat_core::systems::examples::*;
use maxsat_core::thresholds::x_lower_star;
use maxsat_core::{CoupledProfile, CouplingSpec, Error, IterationConfig, ScalarSystem, Slice};
use proptest::prelude::*;

/// Dense `x ← Aᵀ f(A g(x))` with `A` built entry by entry.
fn dense_step<S: ScalarSystem>(s: &S, n: usize, w: usize, x: &[f64]) -> Vec<f64> {
    let m = n + w - 1;
    let a = |j: usize, k: usize| if k >= j && k < j + w { 1.0 / w as f64 } else { 0.0 };
    let y: Vec<f64> = (0..n).map(|j| (0..m).map(|k| a(j, k) * s.g(x[k])).sum::<f64>()).collect();
    let fy: Vec<f64> = y.iter().map(|&v| s.f(v.min(s.y_max()))).collect();
    (0..m).map(|i| (0..n).map(|j| a(j, i) * fy[j]).sum()).collect()
}

proptest! {
    #[test]
    fn coupled_step_matches_dense_matrices(n in 1usize..=4, w in 1usize..=3, seed in prop::collection::vec(0.0f64..=1.0, 6)) {
        let s = example1();
        let spec = CouplingSpec::new(n, w).unwrap();
        let x: Vec<f64> = seed[..spec.m()].to_vec();
        let got = coupled_step(&s, &CoupledProfile::new(spec, x.clone()).unwrap()).unwrap();
        let want = dense_step(&s, n, w, &x);
        for (a, b) in got.values.iter().zip(&want) {
            prop_assert!((a - b).abs() <= 1e-15, "{a} vs {b}");
        }
    }

    #[test]
    fn width_one_is_componentwise(seed in prop::collection::vec(0.0f64..=1.0, 7)) {
        let s = example1();
        let spec = CouplingSpec::new(7, 1).unwrap();
        let got = coupled_step(&s, &CoupledProfile::new(spec, seed.clone()).unwrap()).unwrap();
        for (a, &x) in got.values.iter().zip(&seed) {
            prop_assert_eq!(*a, uncoupled_step(&s, x).unwrap());
        }
    }
}

#[test]
fn example1_one_step_from_ones() {
    let s = example1();
    let spec = CouplingSpec::new(3, 2).unwrap();
    let got = coupled_step(&s, &CoupledProfile::constant(spec, 1.0)).unwrap();
    // g(1) = 1 everywhere, so A g = 1 and f = 0.97; Aᵀ gives half weight at the ends.
    let want = [0.485, 0.97, 0.97, 0.485];
    for (a, b) in got.values.iter().zip(want) {
        assert!((a - b).abs() <= 1e-15);
    }
    let zero = coupled_step(&s, &CoupledProfile::constant(spec, 0.0)).unwrap();
    assert!(zero.values.iter().all(|&v| v == 0.0));
}

#[test]
fn example1_fixed_points_against_a_fine_scan() {
    let s = example1();
    let fps = enumerate_fixed_points(&s, 10_000);
    let xs: Vec<f64> = fps.iter().map(|f| f.x).collect();
    let r = |x: f64| x - s.h(x);
    let scan = linspace(0.0, 1.0, 1_000_001);
    let mut oracle = vec![0.0];
    for w in scan.windows(2).skip(1) {
        if (r(w[0]) < 0.0) != (r(w[1]) < 0.0) {
            oracle.push(w[0]);
        }
    }
    assert_eq!(xs.len(), 3, "{xs:?}");
    for (a, b) in xs.iter().zip(&oracle) {
        assert!((a - b).abs() <= 2e-6, "{xs:?} vs {oracle:?}");
    }
    assert!(xs[0] == 0.0 && xs[1] < xs[2]);
}

#[test]
fn translation_moves_the_fixed_point_to_zero() {
    let s = example1();
    let top = enumerate_fixed_points(&s, 10_000).last().unwrap().x;
    let t = translate_system(&s, top).unwrap();
    assert!(t.h(0.0).abs() <= 1e-12);
    for x in linspace(0.0, t.x_max(), 50) {
        let want = potential(&s, x + top) - potential(&s, top);
        assert!((potential(&t, x) - want).abs() <= 1e-12, "x = {x}");
    }
    let id = translate_system(&s, 0.0).unwrap();
    for x in linspace(0.0, 1.0, 11) {
        assert_eq!(id.h(x), s.h(x));
    }
    assert!(matches!(translate_system(&s, 0.5), Err(Error::Precondition(_))));
}

fn cfg() -> IterationConfig {
    IterationConfig { tol: 1e-12, max_iters: 1_000_000, record_trajectory: false }
}

#[test]
fn example1_coupled_profiles() {
    let s = example1();
    let (xu, _) = uncoupled_fixed_point(&s, 1.0, &cfg()).unwrap();
    let run = coupled_fixed_point(&s, CouplingSpec::new(10, 1).unwrap(), &cfg()).unwrap();
    assert!(run.profile.values.iter().all(|&v| (v - xu).abs() <= 1e-10));
    let run = coupled_fixed_point(&s, CouplingSpec::new(64, 8).unwrap(), &cfg()).unwrap();
    assert!(run.profile.max() <= 1e-6, "max {}", run.profile.max());
    let spec = CouplingSpec::new(9, 2).unwrap();
    let plain = coupled_fixed_point(&s, spec, &cfg()).unwrap();
    let modified = modified_coupled_fixed_point(&s, spec, &cfg()).unwrap();
    assert!(modified.profile.values.iter().zip(&plain.profile.values).all(|(m, p)| *m >= p - 1e-12));
}

#[test]
fn sandwich_upper_bound_in_width() {
    let s = example1();
    let mut prev = f64::INFINITY;
    for w in [2, 4, 8, 16, 32] {
        let run = coupled_fixed_point(&s, CouplingSpec::new(64, w).unwrap(), &cfg()).unwrap();
        let m = run.profile.max();
        assert!(m <= prev + 1e-12, "w = {w}: {m} > {prev}");
        prev = m;
    }
    assert!(prev <= 1e-6);
}

#[test]
fn sandwich_lower_bound() {
    let s = Slice::new(example1_family(), 0.98);
    let lower = x_lower_star(s.family(), 0.98);
    // The upper fixed point still sits above U_s(0) = 0 at ε = 0.98.
    assert_eq!(lower, 0.0);
    let run = coupled_fixed_point(&s, CouplingSpec::new(200, 3).unwrap(), &cfg()).unwrap();
    assert!(run.profile.max() >= lower - 0.01, "{} vs {lower}", run.profile.max());
    assert_eq!(minimize_potential(&s).x_lower_star, lower);
}

#[test]
fn lower_bound_with_a_positive_minimizer() {
    let s = example2();
    let lower = minimize_potential(&s).x_lower_star;
    assert!(lower > 0.04);
    for w in [1, 3, 8] {
        let run = coupled_fixed_point(&s, CouplingSpec::new(200, w).unwrap(), &cfg()).unwrap();
        assert!(run.profile.max() >= lower - 0.01, "w = {w}: {} vs {lower}", run.profile.max());
    }
}

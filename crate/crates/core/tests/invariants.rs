mod common;

use common::simpson;
use maxsat_core::potential::{
    coupled_potential, coupled_potential_gradient, hessian_constant, minimize_potential, potential,
};
use maxsat_core::recursion::{coupled_iterate_from, is_symmetric, is_unimodal, shift_down};
use maxsat_core::systems::examples::*;
use maxsat_core::systems::{CsParams, CsSystem, DegreeDistribution, DicodeErasure, IsiSystem, Pathological, Prior};
use maxsat_core::thresholds::{
    eps_of_x, eps_prime_of_x, fixed_point_domain, psi, psi_integral, q_integral_check,
};
use maxsat_core::{CoupledProfile, CouplingSpec, IterationConfig, ParamSystem, ScalarSystem, Slice};
use proptest::prelude::*;

fn isi_36() -> IsiSystem<DicodeErasure> {
    let l = DegreeDistribution::from_node(vec![0.0, 0.0, 0.0, 1.0]).unwrap();
    let r = DegreeDistribution::from_node(vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
    IsiSystem::new(DicodeErasure, l, r).unwrap()
}

fn cs_gaussian() -> CsSystem {
    CsSystem::new(CsParams { prior: Prior::Gaussian { variance: 1.0 }, sigma2: 0.05, delta: 0.5 }).unwrap()
}

fn cs_two_point() -> CsSystem {
    CsSystem::new(CsParams { prior: Prior::TwoPoint { mass: 1.0, prob: 0.1 }, sigma2: 0.01, delta: 0.3 }).unwrap()
}

/// Every built-in system at representative parameters.
fn all_systems() -> Vec<(&'static str, Box<dyn ScalarSystem>)> {
    vec![
        ("example1", Box::new(example1())),
        ("example2", Box::new(example2())),
        ("example3", Box::new(Pathological)),
        ("example8@0.60", Box::new(Slice::new(example8(), 0.60))),
        ("example8@0.645", Box::new(Slice::new(example8(), 0.645))),
        ("example9@0.55", Box::new(Slice::new(example9(), 0.55))),
        ("gldpc31@0.3", Box::new(Slice::new(gldpc_31_4(), 0.3))),
        ("gldpc63@0.2", Box::new(Slice::new(gldpc_63_5(), 0.2))),
        ("isi@0.6", Box::new(Slice::new(isi_36(), 0.6))),
        ("cs-gauss", Box::new(cs_gaussian())),
        ("cs-two-point", Box::new(cs_two_point())),
    ]
}

/// Systems cheap enough to iterate in the coupled suites.
fn coupled_systems() -> Vec<(&'static str, Box<dyn ScalarSystem>)> {
    all_systems().into_iter().filter(|(n, _)| *n != "cs-two-point").collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn potential_descends_under_the_recursion(t in 0.0f64..=1.0) {
        for (name, s) in all_systems() {
            let x = t * s.x_max();
            let hx = s.h(x).clamp(0.0, s.x_max());
            let (u0, u1) = (potential(&*s, x), potential(&*s, hx));
            let scale = 1e-12 * (1.0 + u0.abs());
            prop_assert!(u1 <= u0 + scale, "{name}: U({hx}) = {u1} > U({x}) = {u0}");
            if (hx - x).abs() > 1e-9 {
                prop_assert!(u1 < u0 + scale, "{name}: descent not strict at {x}");
            }
        }
    }
}

#[test]
fn minimizers_are_fixed_points() {
    for (name, s) in all_systems().into_iter().filter(|(n, _)| *n != "cs-two-point") {
        for x in minimize_potential(&*s).minimizers {
            assert!((x - s.h(x)).abs() <= 1e-8, "{name}: minimizer {x}");
        }
    }
}

#[test]
fn coupled_iterates_are_symmetric_unimodal_and_monotone() {
    let cfg = IterationConfig { tol: 1e-12, max_iters: 200_000, record_trajectory: false };
    for (name, s) in coupled_systems() {
        for (n, w) in [(16, 3), (31, 4)] {
            let spec = CouplingSpec::new(n, w).unwrap();
            let start = CoupledProfile::constant(spec, s.x_max());
            let mut prev: Option<Vec<f64>> = None;
            let mut prev_u = f64::INFINITY;
            let mut ok = true;
            let run = coupled_iterate_from(&*s, start, false, &cfg, |it, v| {
                if it > 0 {
                    ok &= is_symmetric(v, 1e-12) && is_unimodal(v, 1e-12);
                }
                if let Some(p) = &prev {
                    ok &= v.iter().zip(p).all(|(a, b)| *a <= b + 1e-15);
                }
                let u = coupled_potential(&*s, &CoupledProfile::new(spec, v.to_vec()).unwrap()).unwrap();
                ok &= u <= prev_u + 1e-12 * (1.0 + u.abs());
                prev_u = u;
                prev = Some(v.to_vec());
            });
            assert!(run.is_ok(), "{name}: {run:?}");
            assert!(ok, "{name} N={n} w={w}");
        }
    }
}

#[test]
fn modified_iterates_dominate() {
    let cfg = IterationConfig { tol: 1e-12, max_iters: 200_000, record_trajectory: true };
    for (name, s) in coupled_systems() {
        let spec = CouplingSpec::new(21, 3).unwrap();
        let start = CoupledProfile::constant(spec, s.x_max());
        let plain = coupled_iterate_from(&*s, start.clone(), false, &cfg, |_, _| {}).unwrap();
        let modified = coupled_iterate_from(&*s, start, true, &cfg, |_, _| {}).unwrap();
        let (tp, tm) = (plain.trajectory.unwrap(), modified.trajectory.unwrap());
        for l in 0..tp.len().min(tm.len()) {
            assert!(tm[l].iter().zip(&tp[l]).all(|(m, p)| *m >= p - 1e-15), "{name}: iterate {l}");
            assert!(tm[l].windows(2).all(|w| w[1] >= w[0] - 1e-15), "{name}: iterate {l} decreases");
        }
        let last_p = tp.last().unwrap();
        let last_m = tm.last().unwrap();
        assert!(last_m.iter().zip(last_p).all(|(m, p)| *m >= p - 1e-12), "{name}");
    }
}

fn random_profile(seed: &[f64], x_max: f64) -> Vec<f64> {
    seed.iter().map(|t| t * x_max).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn coupled_potential_vector_bounds(t in 0.0f64..=1.0, seed in prop::collection::vec(0.0f64..=1.0, 20), w in 1usize..5) {
        for (name, s) in coupled_systems() {
            let spec = CouplingSpec::new(20 + 1 - w, w).unwrap();
            let x = t * s.x_max();
            let c = coupled_potential(&*s, &CoupledProfile::constant(spec, x)).unwrap();
            let m = spec.m() as f64;
            let expect = m * potential(&*s, x) + (w as f64 - 1.0) * s.f_integral(s.g(x));
            prop_assert!((c - expect).abs() <= 1e-10, "{name}: constant vector {c} vs {expect}");
            let v = random_profile(&seed, s.x_max());
            let p = CoupledProfile::new(spec, v.clone()).unwrap();
            let sum: f64 = v.iter().map(|&xi| potential(&*s, xi)).sum();
            prop_assert!(coupled_potential(&*s, &p).unwrap() >= sum - 1e-10, "{name}: sum bound");
        }
    }

    #[test]
    fn gradient_matches_differences(seed in prop::collection::vec(0.05f64..=0.95, 12), w in 1usize..4) {
        for (name, s) in coupled_systems() {
            let spec = CouplingSpec::new(12 + 1 - w, w).unwrap();
            let v = random_profile(&seed, s.x_max());
            let grad = coupled_potential_gradient(&*s, &CoupledProfile::new(spec, v.clone()).unwrap()).unwrap();
            let scale = grad.iter().fold(0.0f64, |a, g| a.max(g.abs())).max(1e-3);
            let h = 1e-5 * s.x_max();
            let u = |k: usize, d: f64| {
                let mut a = v.clone();
                a[k] += d;
                coupled_potential(&*s, &CoupledProfile::new(spec, a).unwrap()).unwrap()
            };
            for (k, gk) in grad.iter().enumerate() {
                // Fourth-order stencil: the GLDPC g has a large third derivative.
                let fd = (-u(k, 2.0 * h) + 8.0 * u(k, h) - 8.0 * u(k, -h) + u(k, -2.0 * h)) / (12.0 * h);
                prop_assert!((fd - gk).abs() <= 1e-6 * scale, "{name}[{k}]: {gk} vs {fd}");
            }
        }
    }

    #[test]
    fn hessian_respects_the_constant(seed in prop::collection::vec(0.01f64..=0.99, 10), w in 1usize..4) {
        for (name, s) in coupled_systems() {
            let spec = CouplingSpec::new(10 + 1 - w, w).unwrap();
            let v = random_profile(&seed, s.x_max());
            let k = hessian_constant(&*s);
            let h = 1e-6 * s.x_max();
            let mut norm = 0.0f64;
            let mut rows = vec![0.0; v.len()];
            for j in 0..v.len() {
                let mut a = v.clone();
                let mut b = v.clone();
                a[j] += h;
                b[j] -= h;
                let ga = coupled_potential_gradient(&*s, &CoupledProfile::new(spec, a).unwrap()).unwrap();
                let gb = coupled_potential_gradient(&*s, &CoupledProfile::new(spec, b).unwrap()).unwrap();
                for i in 0..v.len() {
                    rows[i] += ((ga[i] - gb[i]) / (2.0 * h)).abs();
                }
            }
            for r in rows {
                norm = norm.max(r);
            }
            prop_assert!(norm <= k * (1.0 + 1e-3), "{name}: {norm} > {k}");
        }
    }

    #[test]
    fn shift_changes_potential_by_at_most_the_end_values(seed in prop::collection::vec(0.0f64..=1.0, 15), top in 0.0f64..=1.0) {
        for (name, s) in coupled_systems() {
            let spec = CouplingSpec::new(13, 3).unwrap();
            let i0 = spec.center();
            let peak = top * s.x_max();
            let mut v: Vec<f64> = seed.iter().map(|t| t * peak).collect();
            for x in &mut v[i0..] {
                *x = peak;
            }
            let p = CoupledProfile::new(spec, v.clone()).unwrap();
            let sp = CoupledProfile::new(spec, shift_down(&v)).unwrap();
            let d = coupled_potential(&*s, &sp).unwrap() - coupled_potential(&*s, &p).unwrap();
            let bound = potential(&*s, 0.0) - potential(&*s, peak);
            prop_assert!(d <= bound + 1e-10, "{name}: {d} > {bound}");
        }
    }
}

#[test]
fn psi_is_the_integral_of_the_map_exit_functional() {
    let s = example8();
    let p0 = psi(&s, 0.0);
    for eps in [0.2, 0.5, 0.6, 0.62, 0.63, 0.66, 0.7, 0.85, 1.0] {
        let lhs = psi(&s, eps) - p0;
        let rhs = psi_integral(&s, eps, 400);
        assert!((lhs - rhs).abs() <= 1e-4, "eps {eps}: {lhs} vs {rhs}");
    }
}

fn check_q_integral<P: ParamSystem>(name: &str, s: &P) {
    let dom = fixed_point_domain(s, 2000);
    let (lo, hi) = dom.iter().copied().fold((f64::INFINITY, 0.0), |a, (l, h)| if h - l > a.1 - a.0 { (l, h) } else { a });
    assert!(hi > lo, "{name}: empty domain");
    let lo = lo.max(1e-3) + 0.02 * (hi - lo);
    let hi = hi - 0.02 * (hi - lo);
    let mid = 0.5 * (lo + hi);
    for (a, b) in [(lo, mid), (mid, hi)] {
        let (direct, integral) = q_integral_check(s, a, b).unwrap();
        assert!((direct - integral).abs() <= 1e-6, "{name} [{a}, {b}]: {direct} vs {integral}");
        // Independent quadrature of the same integrand.
        let oracle = simpson(
            |x| {
                let e = eps_of_x(s, x).unwrap();
                -(s.g_integral_eps(x, e) + s.f_integral_eps(s.g(x, e), e)) * eps_prime_of_x(s, x).unwrap()
            },
            a,
            b,
            2000,
        );
        assert!((oracle - direct).abs() <= 1e-6, "{name} oracle [{a}, {b}]: {oracle} vs {direct}");
    }
}

#[test]
fn q_difference_is_the_ebp_integral() {
    check_q_integral("example1", &example1_family());
    check_q_integral("example8", &example8());
    check_q_integral("example9", &example9());
    check_q_integral("gldpc31", &gldpc_31_4());
    check_q_integral("gldpc63", &gldpc_63_5());
    check_q_integral("isi", &isi_36());
}

use maxsat_core::systems::examples::*;
use maxsat_core::systems::{DegreeDistribution, LdpcSystem};
use maxsat_core::thresholds::{
    eps_c, eps_single, eps_stab, inverse_psi_threshold, maxwell_threshold, psi, psi_exit, threshold_report,
};
use maxsat_core::{Error, ParamSystem, ThresholdValue};

#[test]
fn tolerance_must_be_positive() {
    let s = example8();
    assert!(matches!(eps_single(&s, 0.0), Err(Error::Domain { .. })));
    assert!(matches!(eps_stab(&s, -1.0), Err(Error::Domain { .. })));
    assert!(matches!(eps_c(&s, f64::NAN), Err(Error::Domain { .. })));
}

#[test]
fn ldgm_has_no_zero_fixed_point() {
    let s = example9();
    assert!(matches!(eps_c(&s, 1e-9), Err(Error::Undefined(_))));
    assert!(matches!(eps_stab(&s, 1e-9), Err(Error::Undefined(_))));
    let r = threshold_report(&s);
    assert!(matches!(r.eps_c, ThresholdValue::Undefined(_)));
    assert!(matches!(r.eps_stab, ThresholdValue::Undefined(_)));
}

#[test]
fn maxwell_rejects_nonpositive_rate() {
    // (3,3)-regular: r = 1 − 3/3 = 0.
    let s = example1_family();
    assert_eq!(s.design_rate(), Some(0.0));
    assert!(matches!(maxwell_threshold(&s), Err(Error::Precondition(_))));
    assert!(example8().design_rate().unwrap() > 0.0);
}

#[test]
fn regular_ldpc_thresholds() {
    // (3,6)-regular: BP threshold ≈ 0.4294, MAP threshold ≈ 0.4881.
    let lam = DegreeDistribution::from_node(vec![0.0, 0.0, 0.0, 1.0]).unwrap();
    let rho = DegreeDistribution::from_node(vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
    let s = LdpcSystem::new(lam, rho);
    let bp = eps_single(&s, 1e-10).unwrap();
    assert!((bp - 0.4294).abs() <= 1e-4, "{bp}");
    let c = eps_c(&s, 1e-10).unwrap();
    assert!((c - 0.4881).abs() <= 1e-4, "{c}");
    assert!((maxwell_threshold(&s).unwrap() - c).abs() <= 1e-6);
    // λ'(0) = 0: zero is stable for every ε.
    assert_eq!(eps_stab(&s, 1e-9).unwrap(), 1.0);
}

#[test]
fn ldpc_psi_matches_the_exit_form() {
    let s = example8();
    let lp = s.lambda().mean_degree();
    for eps in [0.3, 0.64, 0.8] {
        let x = maxsat_core::thresholds::x_upper_star(&s, eps);
        let want = -s.lambda().node(1.0 - s.rho().edge(1.0 - x)) / lp;
        assert!((psi_exit(&s, eps) - want).abs() <= 1e-12);
    }
    assert_eq!(psi_exit(&s, 0.5), 0.0);
}

#[test]
fn inverse_psi_out_of_range() {
    let s = example9();
    // Q above Ψ(0) cannot be reached.
    let bad = (1..100).map(|i| i as f64 / 100.0).find(|&x| {
        maxsat_core::thresholds::q_of_x(&s, x).is_ok_and(|q| q > psi(&s, 0.0))
    });
    let x = bad.expect("Q exceeds Psi(0) somewhere on the curve");
    assert!(matches!(inverse_psi_threshold(&s, x), Err(Error::Domain { .. })));
}

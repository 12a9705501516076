//! Thresholds of parameterized families: single-system (BP), stability,
//! coupled (potential) and Maxwell, plus the curves behind them.

mod curve;
mod exit;

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use crate::potential::{minimize_potential, PotentialMinimum};
use crate::special::{bisect, bisect_predicate};
use crate::{Error, ParamSystem, Result, Slice};

pub use curve::{
    ebp_curve, eps_of_x, eps_of_x_bisect, eps_prime_of_x, fixed_point_domain, in_fixed_point_domain, potential_eps,
    q_integral_check, q_of_x, CurveSample, FixedPointCurve,
};
pub use exit::{
    inverse_psi_threshold, locate_jump, locate_jumps, map_exit_curve, psi_exit, psi_integral, MapCurve, MapPoint, JUMP_THRESHOLD,
};

/// Default width for every `ε` bisection.
pub const EPS_TOL: f64 = 1e-9;
/// Points in the scan behind the single-system threshold.
const SINGLE_GRID: usize = 10_000;
const SINGLE_X_TINY: f64 = 1e-9;
/// `Ψ ≥ −PSI_ZERO_TOL` counts as `Ψ = 0`.
pub const PSI_ZERO_TOL: f64 = 1e-12;
const STAB_DELTAS: [f64; 3] = [1e-3, 1e-6, 1e-9];
const STAB_GRID: usize = 1_000;

/// Minimizers of `U_s(·;ε)`.
pub fn minimum_at<P: ParamSystem + ?Sized>(psys: &P, eps: f64) -> PotentialMinimum {
    minimize_potential(&Slice::new(psys, eps))
}

/// `Ψ(ε) = min_x U_s(x;ε)`.
pub fn psi<P: ParamSystem + ?Sized>(psys: &P, eps: f64) -> f64 {
    minimum_at(psys, eps).min_value
}

/// `x̄*(ε)`, the largest minimizer.
pub fn x_upper_star<P: ParamSystem + ?Sized>(psys: &P, eps: f64) -> f64 {
    minimum_at(psys, eps).x_upper_star
}

/// `x̲*(ε)`, the smallest minimizer.
pub fn x_lower_star<P: ParamSystem + ?Sized>(psys: &P, eps: f64) -> f64 {
    minimum_at(psys, eps).x_lower_star
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0) {
        return Err(Error::Domain { what: "threshold tolerance", value: tol });
    }
    Ok(())
}

/// The recursion from `x_max` reaches 0: `h(x;ε) < x` on a grid of
/// `(10⁻⁹, x_max]`.
fn decodes<P: ParamSystem + ?Sized>(psys: &P, eps: f64) -> bool {
    let x_max = psys.x_max();
    (0..SINGLE_GRID).all(|i| {
        let x = SINGLE_X_TINY + (x_max - SINGLE_X_TINY) * i as f64 / (SINGLE_GRID - 1) as f64;
        psys.h(x, eps) < x
    })
}

/// Single-system (BP) threshold `ε_s* = sup{ε : h(x;ε) < x ∀x ∈ (0, x_max]}`.
pub fn eps_single<P: ParamSystem + ?Sized>(psys: &P, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    let eps_max = psys.eps_max();
    if !decodes(psys, 0.0) {
        return Err(Error::Undefined("the recursion does not reach 0 even at eps = 0"));
    }
    if decodes(psys, eps_max) {
        return Ok(eps_max);
    }
    let (t, f) = bisect_predicate(|e| decodes(psys, e), 0.0, eps_max, tol)?;
    Ok(0.5 * (t + f))
}

fn locally_stable<P: ParamSystem + ?Sized>(psys: &P, eps: f64) -> bool {
    STAB_DELTAS.iter().any(|&d| {
        (1..=STAB_GRID).all(|i| {
            let x = d * i as f64 / STAB_GRID as f64;
            psys.h(x, eps) < x
        })
    })
}

fn h_prime_zero_increasing<P: ParamSystem + ?Sized>(psys: &P) -> bool {
    let n = 100;
    let eps_max = psys.eps_max();
    let vals: Option<Vec<f64>> = (0..=n).map(|i| psys.h_prime_at_zero(eps_max * i as f64 / n as f64)).collect();
    match vals {
        Some(v) => v.windows(2).all(|w| w[1] > w[0]),
        None => false,
    }
}

/// Stability threshold `ε_stab*`: the largest `ε` at which 0 is a stable
/// fixed point.
pub fn eps_stab<P: ParamSystem + ?Sized>(psys: &P, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    if !psys.flags().zero_is_fixed_point {
        return Err(Error::Undefined("0 is not a fixed point of this family"));
    }
    let eps_max = psys.eps_max();
    if h_prime_zero_increasing(psys) {
        let hp = |e: f64| psys.h_prime_at_zero(e).unwrap_or(f64::NAN) - 1.0;
        if hp(0.0) >= 0.0 {
            return Err(Error::Undefined("0 is not stable at eps = 0"));
        }
        if hp(eps_max) < 0.0 {
            return Ok(eps_max);
        }
        return bisect(hp, 0.0, eps_max, tol);
    }
    if !locally_stable(psys, 0.0) {
        return Err(Error::Undefined("0 is not stable at eps = 0"));
    }
    if locally_stable(psys, eps_max) {
        return Ok(eps_max);
    }
    let (t, f) = bisect_predicate(|e| locally_stable(psys, e), 0.0, eps_max, tol)?;
    Ok(0.5 * (t + f))
}

/// Coupled threshold with the outcome of the `x̄*(ε) = 0` cross-check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledThreshold {
    pub value: f64,
    /// `x̄*(ε) = 0` agreed with `Ψ(ε) = 0` at every bisection probe.
    pub xbar_agrees: bool,
}

/// `ε_c* = sup{ε : Ψ(ε) = 0}` by bisection on `Ψ(ε) ≥ −10⁻¹²`.
pub fn eps_c<P: ParamSystem + ?Sized>(psys: &P, tol: f64) -> Result<f64> {
    eps_c_detailed(psys, tol).map(|c| c.value)
}

pub fn eps_c_detailed<P: ParamSystem + ?Sized>(psys: &P, tol: f64) -> Result<CoupledThreshold> {
    check_tol(tol)?;
    if !psys.flags().zero_is_fixed_point {
        return Err(Error::Undefined("coupled threshold needs 0 as a fixed point; use the inverse-Psi threshold"));
    }
    let eps_max = psys.eps_max();
    let mut agrees = true;
    let mut pred = |e: f64| {
        let m = minimum_at(psys, e);
        let by_psi = m.min_value >= -PSI_ZERO_TOL;
        agrees &= by_psi == (m.x_upper_star == 0.0);
        by_psi
    };
    if !pred(0.0) {
        return Err(Error::Undefined("Psi(0) is negative"));
    }
    if pred(eps_max) {
        return Ok(CoupledThreshold { value: eps_max, xbar_agrees: agrees });
    }
    let (t, f) = bisect_predicate(&mut pred, 0.0, eps_max, tol)?;
    Ok(CoupledThreshold { value: 0.5 * (t + f), xbar_agrees: agrees })
}

/// Roots of `Q` inside one `X_f` interval.
fn q_roots<P: ParamSystem + ?Sized>(psys: &P, lo: f64, hi: f64, grid_n: usize) -> Vec<f64> {
    let n = grid_n.max(2);
    // Stay off an open end at 0.
    let a = if lo <= 0.0 { hi * 1e-6 } else { lo };
    let xs: Vec<f64> = (0..n).map(|i| if i + 1 == n { hi } else { a + (hi - a) * i as f64 / (n - 1) as f64 }).collect();
    let qs: Vec<Option<f64>> = xs.iter().map(|&x| q_of_x(psys, x).ok()).collect();
    let mut roots = Vec::new();
    for i in 0..n {
        let Some(qi) = qs[i] else { continue };
        if qi == 0.0 {
            roots.push(xs[i]);
            continue;
        }
        if i + 1 < n {
            if let Some(qn) = qs[i + 1] {
                if qn != 0.0 && (qi < 0.0) != (qn < 0.0) {
                    let r = bisect(|x| q_of_x(psys, x).unwrap_or(f64::NAN), xs[i], xs[i + 1], 1e-13);
                    if let Ok(r) = r {
                        roots.push(r);
                    }
                }
            }
        }
    }
    roots
}

/// Maxwell threshold: the least `ε(x)` over the roots of `Q` in the closure
/// of `X_f`, with `ε(0) = ε_stab*` included when 0 is a limit point of
/// `X_f`.
pub fn maxwell_threshold<P: ParamSystem + ?Sized>(psys: &P) -> Result<f64> {
    maxwell_detailed(psys).map(|m| m.value)
}

/// Maxwell threshold together with the roots of `Q` it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxwellThreshold {
    pub value: f64,
    pub q_roots: Vec<f64>,
    /// The minimum came from the `x → 0` limit (`ε_stab*`).
    pub from_stability_limit: bool,
}

pub fn maxwell_detailed<P: ParamSystem + ?Sized>(psys: &P) -> Result<MaxwellThreshold> {
    let flags = psys.flags();
    if !flags.proper {
        return Err(Error::Precondition("Maxwell threshold needs a proper system"));
    }
    if psys.design_rate().is_some_and(|r| !(r > 0.0)) {
        return Err(Error::Precondition("Maxwell threshold needs a positive design rate"));
    }
    let domain = fixed_point_domain(psys, 10_000);
    let zero_limit = domain.first().is_some_and(|d| d.0 <= 0.0);
    if zero_limit && !flags.strict_stability {
        return Err(Error::Undefined("0 is a limit point of X_f but the stability threshold is not strict"));
    }
    let mut roots = Vec::new();
    for &(lo, hi) in &domain {
        roots.extend(q_roots(psys, lo, hi, 10_000));
    }
    let mut best: Option<(f64, bool)> = None;
    for &r in &roots {
        if let Ok(e) = eps_of_x(psys, r) {
            if best.is_none_or(|b| e < b.0) {
                best = Some((e, false));
            }
        }
    }
    if zero_limit {
        let s = eps_stab(psys, EPS_TOL)?;
        if best.is_none_or(|b| s < b.0) {
            best = Some((s, true));
        }
    }
    match best {
        Some((value, from_stability_limit)) => Ok(MaxwellThreshold { value, q_roots: roots, from_stability_limit }),
        None => Err(Error::Undefined("Q has no roots on X_f and 0 is not a limit point")),
    }
}

/// A threshold value or the reason it does not exist.
#[derive(Debug, Clone, PartialEq)]
pub enum ThresholdValue {
    Defined(f64),
    Undefined(String),
}

impl ThresholdValue {
    pub fn value(&self) -> Option<f64> {
        match self {
            ThresholdValue::Defined(v) => Some(*v),
            ThresholdValue::Undefined(_) => None,
        }
    }

    fn from_result(r: Result<f64>) -> Self {
        match r {
            Ok(v) => ThresholdValue::Defined(v),
            Err(e) => ThresholdValue::Undefined(format!("{e}")),
        }
    }
}

/// The four thresholds of a family with notes on how each was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdReport {
    pub eps_s: ThresholdValue,
    pub eps_stab: ThresholdValue,
    pub eps_c: ThresholdValue,
    pub eps_maxwell: ThresholdValue,
    pub method_notes: Vec<String>,
}

pub fn threshold_report<P: ParamSystem + ?Sized>(psys: &P) -> ThresholdReport {
    let mut notes = vec![String::from("eps_s: bisection on h(x;eps) < x over a 10^4-point grid of (1e-9, x_max]")];
    let stab_note = if psys.flags().zero_is_fixed_point && h_prime_zero_increasing(psys) {
        "eps_stab: root of h'(0;eps) = 1"
    } else {
        "eps_stab: bisection on local stability of 0 (delta scan 1e-3, 1e-6, 1e-9)"
    };
    notes.push(stab_note.into());
    let eps_s = ThresholdValue::from_result(eps_single(psys, EPS_TOL));
    let eps_stab_v = ThresholdValue::from_result(eps_stab(psys, EPS_TOL));
    let eps_c_v = match eps_c_detailed(psys, EPS_TOL) {
        Ok(c) => {
            notes.push(format!(
                "eps_c: bisection on Psi(eps) >= -1e-12; x_bar_star = 0 cross-check {}",
                if c.xbar_agrees { "agrees" } else { "disagrees" }
            ));
            ThresholdValue::Defined(c.value)
        }
        Err(e) => {
            notes.push(String::from("eps_c: undefined; use the inverse-Psi threshold"));
            ThresholdValue::Undefined(format!("{e}"))
        }
    };
    let eps_maxwell = match maxwell_detailed(psys) {
        Ok(m) => {
            notes.push(format!(
                "eps_maxwell: min eps(x) over {} root(s) of Q{}",
                m.q_roots.len(),
                if m.from_stability_limit { "; attained at the x -> 0 limit (eps_stab)" } else { "" }
            ));
            ThresholdValue::Defined(m.value)
        }
        Err(e) => ThresholdValue::Undefined(format!("{e}")),
    };
    if let (Some(c), Some(s)) = (eps_c_v.value(), eps_stab_v.value()) {
        let flags = psys.flags();
        if (flags.strict_stability || flags.unconditionally_stable) && c > s + EPS_TOL {
            notes.push(format!("warning: eps_c = {c} exceeds eps_stab = {s}"));
        }
    }
    ThresholdReport { eps_s, eps_stab: eps_stab_v, eps_c: eps_c_v, eps_maxwell, method_notes: notes }
}

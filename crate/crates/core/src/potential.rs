//! Single-system, half-iteration and coupled potentials and the constants
//! (`Δ`, `K_{f,g}`, `w₀`) that control the required coupling width.

use alloc::vec;
use alloc::vec::Vec;

use crate::recursion::{enumerate_fixed_points, CoupledProfile, Stepper};
use crate::special::golden_min;
use crate::{Error, Result, ScalarSystem};

/// Points in the minimization scan.
pub const MIN_GRID: usize = 10_000;
/// Points in the grid fallback for sup norms.
pub const SUP_GRID: usize = 100_000;
/// Safety factor on grid sup norms.
pub const SUP_INFLATION: f64 = 1.01;
/// Relative tolerance for ties between minimizers.
pub const TIE_TOL: f64 = 1e-10;
/// Residual `|x − h(x)|` a minimizer candidate must meet.
pub const MINIMIZER_RESIDUAL: f64 = 1e-8;

/// `F(y)` with a domain check.
pub fn f_of<S: ScalarSystem + ?Sized>(sys: &S, y: f64) -> Result<f64> {
    if !(0.0..=sys.y_max()).contains(&y) {
        return Err(Error::Domain { what: "argument of F", value: y });
    }
    Ok(sys.f_integral(y))
}

/// `G(x)` with a domain check.
pub fn g_of<S: ScalarSystem + ?Sized>(sys: &S, x: f64) -> Result<f64> {
    if !(0.0..=sys.x_max()).contains(&x) {
        return Err(Error::Domain { what: "argument of G", value: x });
    }
    Ok(sys.g_integral(x))
}

/// `U_s(x) = x g(x) − G(x) − F(g(x))`.
pub fn potential<S: ScalarSystem + ?Sized>(sys: &S, x: f64) -> f64 {
    sys.potential(x)
}

/// `U_s'(x) = (x − h(x)) g'(x)`.
pub fn potential_prime<S: ScalarSystem + ?Sized>(sys: &S, x: f64) -> f64 {
    (x - sys.h(x)) * sys.g_prime(x)
}

/// Half-iteration potential `V_s(y) = y f(y) − F(y) − G(f(y))`.
pub fn half_potential<S: ScalarSystem + ?Sized>(sys: &S, y: f64) -> Result<f64> {
    if !sys.f_strictly_increasing() {
        return Err(Error::Unsupported("half-iteration potential needs a strictly increasing f"));
    }
    if !(0.0..=sys.y_max()).contains(&y) {
        return Err(Error::Domain { what: "argument of V_s", value: y });
    }
    let fy = sys.f(y);
    Ok(y * fy - sys.f_integral(y) - sys.g_integral(fy))
}

/// Global minimizers of `U_s` over `[0, x_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialMinimum {
    pub x_lower_star: f64,
    pub x_upper_star: f64,
    pub min_value: f64,
    pub minimizers: Vec<f64>,
}

struct Candidate {
    x: f64,
    u: f64,
    resid: f64,
}

/// Minimize `U_s` over a grid seeded with every enumerated fixed point.
///
/// Candidates are grid local minima refined by golden section together with
/// the fixed points; only those with `|x − h(x)| ≤ 1e-8` survive, since
/// local minima of `U_s` occur at fixed points. Candidates tie when their
/// potentials differ by at most `TIE_TOL·|min|`, so an exact zero minimum is
/// never merged with nearby positive values.
pub fn minimize_potential<S: ScalarSystem + ?Sized>(sys: &S) -> PotentialMinimum {
    let x_max = sys.x_max();
    let n = MIN_GRID;
    let xs: Vec<f64> = (0..n).map(|i| if i + 1 == n { x_max } else { x_max * i as f64 / (n - 1) as f64 }).collect();
    let us: Vec<f64> = xs.iter().map(|&x| potential(sys, x)).collect();
    let mut cands: Vec<Candidate> = Vec::new();
    let mut push = |x: f64| {
        let resid = (x - sys.h(x)).abs();
        if resid <= MINIMIZER_RESIDUAL {
            cands.push(Candidate { x, u: potential(sys, x), resid });
        }
    };
    for fp in enumerate_fixed_points(sys, n) {
        push(fp.x);
    }
    push(0.0);
    push(x_max);
    for i in 0..n {
        let left = i == 0 || us[i] <= us[i - 1];
        let right = i + 1 == n || us[i] <= us[i + 1];
        if left && right {
            let a = xs[i.saturating_sub(1)];
            let b = xs[(i + 1).min(n - 1)];
            let x = golden_min(|x| potential(sys, x), a, b, 1e-12).unwrap_or(xs[i]);
            push(x);
        }
    }
    if cands.is_empty() {
        // Unreachable for a continuous h: a fixed point always exists. Fall
        // back to the raw grid minimum so the caller still gets a value.
        let (i, &u) = us.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap();
        return PotentialMinimum { x_lower_star: xs[i], x_upper_star: xs[i], min_value: u, minimizers: vec![xs[i]] };
    }
    // Merge candidates closer than 1e-6, keeping the smallest residual.
    cands.sort_by(|a, b| a.x.total_cmp(&b.x));
    let mut merged: Vec<Candidate> = Vec::new();
    for c in cands {
        match merged.last_mut() {
            Some(last) if c.x - last.x <= 1e-6 => {
                if c.resid < last.resid || (c.resid == last.resid && c.u < last.u) {
                    *last = c;
                }
            }
            _ => merged.push(c),
        }
    }
    let min_value = merged.iter().map(|c| c.u).fold(f64::INFINITY, f64::min);
    let tol = TIE_TOL * min_value.abs();
    let minimizers: Vec<f64> = merged.iter().filter(|c| c.u - min_value <= tol).map(|c| c.x).collect();
    PotentialMinimum {
        x_lower_star: minimizers[0],
        x_upper_star: *minimizers.last().unwrap(),
        min_value,
        minimizers,
    }
}

fn check_profile<S: ScalarSystem + ?Sized>(sys: &S, profile: &CoupledProfile) -> Result<()> {
    if profile.values.len() != profile.spec.m() {
        return Err(Error::Shape { expected: profile.spec.m(), found: profile.values.len() });
    }
    for &x in &profile.values {
        if !(0.0..=sys.x_max()).contains(&x) {
            return Err(Error::Domain { what: "profile entry", value: x });
        }
    }
    Ok(())
}

/// `U_c(x) = Σᵢ (g(xᵢ)xᵢ − G(xᵢ)) − Σⱼ F([A g(x)]ⱼ)`.
pub fn coupled_potential<S: ScalarSystem + ?Sized>(sys: &S, profile: &CoupledProfile) -> Result<f64> {
    check_profile(sys, profile)?;
    let mut stepper = Stepper::new(profile.spec);
    let ay = stepper.averaged_g(sys, &profile.values)?;
    let mut u = 0.0;
    for &x in &profile.values {
        u += sys.g(x) * x - sys.g_integral(x);
    }
    for &y in ay {
        u -= sys.f_integral(y);
    }
    Ok(u)
}

/// `∇U_c(x)_k = g'(x_k) (x_k − [Aᵀ f(A g(x))]_k)`.
pub fn coupled_potential_gradient<S: ScalarSystem + ?Sized>(sys: &S, profile: &CoupledProfile) -> Result<Vec<f64>> {
    check_profile(sys, profile)?;
    let mut hx = vec![0.0; profile.spec.m()];
    Stepper::new(profile.spec).step(sys, &profile.values, &mut hx)?;
    Ok(profile.values.iter().zip(&hx).map(|(&x, &h)| sys.g_prime(x) * (x - h)).collect())
}

fn grid_sup<F: Fn(f64) -> f64>(f: F, hi: f64) -> f64 {
    let n = SUP_GRID;
    let mut m = 0.0f64;
    for i in 0..n {
        let x = if i + 1 == n { hi } else { hi * i as f64 / (n - 1) as f64 };
        m = m.max(f(x).abs());
    }
    m * SUP_INFLATION
}

/// Sup norms from the system when declared, else from a grid scan.
pub fn sup_norms<S: ScalarSystem + ?Sized>(sys: &S) -> crate::SupNorms {
    sys.sup_norms().unwrap_or_else(|| crate::SupNorms {
        f_prime: grid_sup(|y| sys.f_prime(y), sys.y_max()),
        g_prime: grid_sup(|x| sys.g_prime(x), sys.x_max()),
        g_second: grid_sup(|x| sys.g_second(x), sys.x_max()),
    })
}

/// `K_{f,g} = ‖g''‖ x_max + ‖g'‖ + ‖f'‖ ‖g'‖²`.
pub fn hessian_constant<S: ScalarSystem + ?Sized>(sys: &S) -> f64 {
    let s = sup_norms(sys);
    s.g_second * sys.x_max() + s.g_prime + s.f_prime * s.g_prime * s.g_prime
}

/// Smallest potential excess over `x̄*` among fixed points above `x̄* + δ`.
pub fn energy_gap<S: ScalarSystem + ?Sized>(sys: &S, delta_offset: f64) -> f64 {
    let min = minimize_potential(sys);
    energy_gap_from(sys, &min, delta_offset)
}

pub(crate) fn energy_gap_from<S: ScalarSystem + ?Sized>(sys: &S, min: &PotentialMinimum, delta_offset: f64) -> f64 {
    let base = potential(sys, min.x_upper_star);
    enumerate_fixed_points(sys, MIN_GRID)
        .iter()
        .filter(|fp| fp.x > min.x_upper_star + delta_offset)
        .map(|fp| (potential(sys, fp.x) - base).max(0.0))
        .fold(f64::INFINITY, f64::min)
}

/// `w₀ = K x_max² / (2Δ)`; `0` when `Δ = ∞`, `∞` when `Δ = 0`.
pub fn w0_from(k: f64, x_max: f64, gap: f64) -> f64 {
    if gap == f64::INFINITY {
        0.0
    } else if gap <= 0.0 {
        f64::INFINITY
    } else {
        k * x_max * x_max / (2.0 * gap)
    }
}

pub fn w0_bound<S: ScalarSystem + ?Sized>(sys: &S, delta_offset: f64) -> f64 {
    w0_from(hessian_constant(sys), sys.x_max(), energy_gap(sys, delta_offset))
}

/// Which sufficient condition for a finite coupling width applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiniteWidthCondition {
    FiniteByGap,
    FiniteByStrictDescent,
    FiniteByStability,
    Unknown,
}

/// Outcome of each tested condition plus the reported verdict.
///
/// `by_strict_descent`: `h(x) < x` on `(x̄*, x̄* + 10⁻³]`.
/// `by_gap`: strict descent and a positive energy gap, so `x̄*` is isolated
/// from the fixed points above it.
/// `by_stability`: `f'(g(x̄*)) g'(x̄*) < 1 − 10⁻⁹`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteWidthEvidence {
    pub verdict: FiniteWidthCondition,
    pub by_gap: bool,
    pub by_strict_descent: bool,
    pub by_stability: bool,
}

const DESCENT_WINDOW: f64 = 1e-3;
const DESCENT_GRID: usize = 100_000;

/// Check the finite-width conditions at `x̄*`.
///
/// When `x̄* = 0` the stability of the zero fixed point is reported first;
/// otherwise the gap and strict-descent conditions take precedence.
pub fn check_finite_w_conditions<S: ScalarSystem + ?Sized>(sys: &S) -> FiniteWidthEvidence {
    let min = minimize_potential(sys);
    finite_w_from(sys, &min)
}

pub(crate) fn finite_w_from<S: ScalarSystem + ?Sized>(sys: &S, min: &PotentialMinimum) -> FiniteWidthEvidence {
    let xs = min.x_upper_star;
    let hi = (xs + DESCENT_WINDOW).min(sys.x_max());
    let by_strict_descent = hi > xs
        && (1..=DESCENT_GRID).all(|i| {
            let x = xs + (hi - xs) * i as f64 / DESCENT_GRID as f64;
            sys.h(x) < x
        });
    let by_gap = by_strict_descent && energy_gap_from(sys, min, 0.0) > 1e-9;
    let by_stability = sys.f_prime(sys.g(xs)) * sys.g_prime(xs) < 1.0 - 1e-9;
    let verdict = if xs == 0.0 && by_stability {
        FiniteWidthCondition::FiniteByStability
    } else if by_gap {
        FiniteWidthCondition::FiniteByGap
    } else if by_strict_descent {
        FiniteWidthCondition::FiniteByStrictDescent
    } else if by_stability {
        FiniteWidthCondition::FiniteByStability
    } else {
        FiniteWidthCondition::Unknown
    };
    FiniteWidthEvidence { verdict, by_gap, by_strict_descent, by_stability }
}

/// Minimizers and width constants at one system.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialReport {
    pub x_lower_star: f64,
    pub x_upper_star: f64,
    pub min_value: f64,
    pub minimizers: Vec<f64>,
    pub delta_gap: f64,
    pub k_fg: f64,
    pub w0: f64,
}

pub fn potential_report<S: ScalarSystem + ?Sized>(sys: &S, delta_offset: f64) -> PotentialReport {
    let min = minimize_potential(sys);
    let delta_gap = energy_gap_from(sys, &min, delta_offset);
    let k_fg = hessian_constant(sys);
    PotentialReport {
        x_lower_star: min.x_lower_star,
        x_upper_star: min.x_upper_star,
        min_value: min.min_value,
        minimizers: min.minimizers,
        delta_gap,
        k_fg,
        w0: w0_from(k_fg, sys.x_max(), delta_gap),
    }
}

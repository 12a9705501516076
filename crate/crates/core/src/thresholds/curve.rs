//! The fixed-point curve `x ↦ ε(x)` and the fixed-point potential `Q`.

use alloc::vec::Vec;

use crate::potential::potential;
use crate::special::{adaptive_simpson, bisect, bisect_predicate};
use crate::{Error, ParamSystem, Result, Slice};

/// Residual slack when testing `h(x;0) ≤ x ≤ h(x;ε_max)`.
const XF_SLACK: f64 = 1e-12;
/// Bisection width for `ε(x)`.
pub const EPS_OF_X_TOL: f64 = 1e-12;

/// One sample on the fixed-point curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub x: f64,
    pub eps: f64,
    pub q: f64,
    pub exit: f64,
}

/// Samples along `{(x, ε(x))}` with the intervals making up `X_f`.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointCurve {
    pub samples: Vec<CurveSample>,
    pub domain: Vec<(f64, f64)>,
}

/// Whether `x` supports a fixed point for some `ε ∈ [0, ε_max]`.
pub fn in_fixed_point_domain<P: ParamSystem + ?Sized>(psys: &P, x: f64) -> bool {
    x > 0.0
        && x <= psys.x_max()
        && psys.h(x, 0.0) <= x + XF_SLACK
        && x <= psys.h(x, psys.eps_max()) + XF_SLACK
}

/// The intervals of `X_f ⊂ (0, x_max]`, from a `grid_n`-point scan with
/// boundaries refined by bisection.
pub fn fixed_point_domain<P: ParamSystem + ?Sized>(psys: &P, grid_n: usize) -> Vec<(f64, f64)> {
    let n = grid_n.max(2);
    let x_max = psys.x_max();
    let xs: Vec<f64> = (1..=n).map(|i| if i == n { x_max } else { x_max * i as f64 / n as f64 }).collect();
    let inside: Vec<bool> = xs.iter().map(|&x| in_fixed_point_domain(psys, x)).collect();
    let refine = |a: f64, b: f64, a_in: bool| -> f64 {
        let pred = |x: f64| in_fixed_point_domain(psys, x) == a_in;
        match bisect_predicate(pred, a, b, 1e-13) {
            Ok((t, f)) => if a_in { t } else { f },
            Err(_) => if a_in { a } else { b },
        }
    };
    let mut out = Vec::new();
    let mut start: Option<f64> = None;
    for i in 0..n {
        if inside[i] && start.is_none() {
            start = Some(if i == 0 {
                // The domain reaches down to 0 when the smallest sample is
                // inside; 0 itself is only a limit point.
                0.0
            } else {
                refine(xs[i - 1], xs[i], false)
            });
        }
        if !inside[i] {
            if let Some(s) = start.take() {
                out.push((s, refine(xs[i - 1], xs[i], true)));
            }
        }
    }
    if let Some(s) = start {
        out.push((s, x_max));
    }
    out
}

/// `ε(x)`: the unique `ε` with `h(x;ε) = x`.
pub fn eps_of_x<P: ParamSystem + ?Sized>(psys: &P, x: f64) -> Result<f64> {
    if !in_fixed_point_domain(psys, x) {
        return Err(Error::Domain { what: "x outside the fixed-point domain", value: x });
    }
    let eps_max = psys.eps_max();
    if let Some(e) = psys.eps_of_x_closed(x) {
        if e.is_finite() && e >= -XF_SLACK && e <= eps_max + XF_SLACK {
            return Ok(e.clamp(0.0, eps_max));
        }
    }
    eps_of_x_bisect(psys, x)
}

/// `ε(x)` by bisection in `ε`, ignoring any closed form.
pub fn eps_of_x_bisect<P: ParamSystem + ?Sized>(psys: &P, x: f64) -> Result<f64> {
    if !in_fixed_point_domain(psys, x) {
        return Err(Error::Domain { what: "x outside the fixed-point domain", value: x });
    }
    let eps_max = psys.eps_max();
    let r0 = psys.h(x, 0.0) - x;
    if r0 >= 0.0 {
        return Ok(0.0);
    }
    let r1 = psys.h(x, eps_max) - x;
    if r1 <= 0.0 {
        return Ok(eps_max);
    }
    bisect(|e| psys.h(x, e) - x, 0.0, eps_max, EPS_OF_X_TOL)
}

/// `ε'(x) = (1 − h^(1,0)) / h^(0,1)` on the curve.
pub fn eps_prime_of_x<P: ParamSystem + ?Sized>(psys: &P, x: f64) -> Result<f64> {
    let e = eps_of_x(psys, x)?;
    let he = psys.h_eps(x, e);
    if !(he > 0.0) {
        return Err(Error::Precondition("h^(0,1) is not positive; the system is not proper here"));
    }
    Ok((1.0 - psys.h_x(x, e)) / he)
}

/// `Q(x) = U_s(x; ε(x))`.
pub fn q_of_x<P: ParamSystem + ?Sized>(psys: &P, x: f64) -> Result<f64> {
    let e = eps_of_x(psys, x)?;
    Ok(potential(&Slice::new(psys, e), x))
}

/// `U_s^(0,1)(x;ε) = (x − h) g^(0,1) − G^(0,1)(x) − F^(0,1)(g(x))`.
pub fn potential_eps<P: ParamSystem + ?Sized>(psys: &P, x: f64, eps: f64) -> f64 {
    let y = psys.g(x, eps);
    (x - psys.f(y, eps)) * psys.g_eps(x, eps) - psys.g_integral_eps(x, eps) - psys.f_integral_eps(y, eps)
}

/// Quadrature tolerance for [`q_integral_check`].
const Q_INTEGRAL_TOL: f64 = 1e-10;

/// `(Q(x₂) − Q(x₁), −∫_{x₁}^{x₂} (G^(0,1) + F^(0,1)∘g) ε' dx)` along the
/// curve. The two agree on any interval inside `X_f`.
pub fn q_integral_check<P: ParamSystem + ?Sized>(psys: &P, x1: f64, x2: f64) -> Result<(f64, f64)> {
    let direct = q_of_x(psys, x2)? - q_of_x(psys, x1)?;
    let mut failure: Option<Error> = None;
    let integrand = |x: f64| -> f64 {
        let r = eps_of_x(psys, x).and_then(|e| {
            let d = eps_prime_of_x(psys, x)?;
            let y = psys.g(x, e);
            Ok(-(psys.g_integral_eps(x, e) + psys.f_integral_eps(y, e)) * d)
        });
        match r {
            Ok(v) => v,
            Err(err) => {
                if failure.is_none() {
                    failure = Some(err);
                }
                0.0
            }
        }
    };
    let res = adaptive_simpson(integrand, x1, x2, Q_INTEGRAL_TOL);
    if let Some(err) = failure {
        return Err(err);
    }
    let integral = match res {
        Ok(r) => r.value,
        Err(Error::Numeric { partial, .. }) => partial,
        Err(e) => return Err(e),
    };
    Ok((direct, integral))
}

/// Sample the EBP curve on `x_grid`, skipping points outside `X_f`.
pub fn ebp_curve<P: ParamSystem + ?Sized>(psys: &P, x_grid: &[f64]) -> FixedPointCurve {
    let samples = x_grid
        .iter()
        .filter_map(|&x| {
            let eps = eps_of_x(psys, x).ok()?;
            let q = potential(&Slice::new(psys, eps), x);
            Some(CurveSample { x, eps, q, exit: psys.exit(x, eps) })
        })
        .collect();
    FixedPointCurve { samples, domain: fixed_point_domain(psys, 10_000) }
}

//! `ψ(ε)`, the MAP EXIT curve and the inverse-`Ψ` threshold.

use alloc::vec::Vec;

use super::{minimum_at, psi, q_of_x};
use crate::special::bisect_predicate;
use crate::{Error, ParamSystem, Result};

/// `|Δx̄*|` between neighbouring grid points that marks a jump.
pub const JUMP_THRESHOLD: f64 = 0.01;

/// `ψ(ε) = −G^(0,1)(x̄*;ε) − F^(0,1)(g(x̄*;ε);ε)`.
pub fn psi_exit<P: ParamSystem + ?Sized>(psys: &P, eps: f64) -> f64 {
    psi_at(psys, minimum_at(psys, eps).x_upper_star, eps)
}

fn psi_at<P: ParamSystem + ?Sized>(psys: &P, x: f64, eps: f64) -> f64 {
    -psys.g_integral_eps(x, eps) - psys.f_integral_eps(psys.g(x, eps), eps)
}

/// Locate a jump of `x̄*` inside `[lo, hi]` to width `tol`.
///
/// Returns the bracket `(ε⁻, ε⁺)` with the branch values `x̄*` on each side.
pub fn locate_jump<P: ParamSystem + ?Sized>(psys: &P, lo: f64, hi: f64, tol: f64) -> Result<((f64, f64), (f64, f64))> {
    let x_lo = minimum_at(psys, lo).x_upper_star;
    let x_hi = minimum_at(psys, hi).x_upper_star;
    if (x_hi - x_lo).abs() <= JUMP_THRESHOLD {
        return Err(Error::Precondition("no jump of x_bar_star in the interval"));
    }
    let mid = 0.5 * (x_lo + x_hi);
    let lower_branch = |e: f64| {
        let x = minimum_at(psys, e).x_upper_star;
        (x < mid) == (x_lo < mid)
    };
    let (t, f) = bisect_predicate(lower_branch, lo, hi, tol)?;
    Ok(((t, minimum_at(psys, t).x_upper_star), (f, minimum_at(psys, f).x_upper_star)))
}

/// `∫₀^ε ψ(t) dt` by the trapezoid rule on `n` points, split at every jump
/// of `x̄*` so each piece integrates a continuous branch.
pub fn psi_integral<P: ParamSystem + ?Sized>(psys: &P, eps: f64, n: usize) -> f64 {
    let n = n.max(2);
    let ts: Vec<f64> = (0..n).map(|i| if i + 1 == n { eps } else { eps * i as f64 / (n - 1) as f64 }).collect();
    let xs: Vec<f64> = ts.iter().map(|&t| minimum_at(psys, t).x_upper_star).collect();
    let mut total = 0.0;
    for i in 0..n - 1 {
        let (a, b) = (ts[i], ts[i + 1]);
        let pa = psi_at(psys, xs[i], a);
        let pb = psi_at(psys, xs[i + 1], b);
        if (xs[i + 1] - xs[i]).abs() > JUMP_THRESHOLD {
            if let Ok(((jl, xl), (jr, xr))) = locate_jump(psys, a, b, 1e-12) {
                total += 0.5 * (jl - a) * (pa + psi_at(psys, xl, jl));
                total += 0.5 * (b - jr) * (psi_at(psys, xr, jr) + pb);
                total += 0.5 * (jr - jl) * (psi_at(psys, xl, jl) + psi_at(psys, xr, jr));
                continue;
            }
        }
        total += 0.5 * (b - a) * (pa + pb);
    }
    total
}

/// One point of the MAP EXIT curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapPoint {
    pub eps: f64,
    pub x_upper_star: f64,
    pub exit: f64,
}

/// MAP EXIT curve and the located jumps of `x̄*`.
#[derive(Debug, Clone, PartialEq)]
pub struct MapCurve {
    pub points: Vec<MapPoint>,
    /// Midpoints of the jump brackets (width ≤ 10⁻⁶).
    pub jumps: Vec<f64>,
}

/// The EXIT functional at `x̄*(ε)` on `eps_grid`, with jumps between
/// neighbouring grid points located by bisection to 10⁻⁶.
pub fn map_exit_curve<P: ParamSystem + ?Sized>(psys: &P, eps_grid: &[f64]) -> MapCurve {
    let points: Vec<MapPoint> = eps_grid
        .iter()
        .map(|&eps| {
            let x = minimum_at(psys, eps).x_upper_star;
            MapPoint { eps, x_upper_star: x, exit: psys.exit(x, eps) }
        })
        .collect();
    let jumps = locate_jumps(psys, &points);
    MapCurve { points, jumps }
}

/// Jumps of `x̄*` between neighbouring points, each located to 10⁻⁶.
pub fn locate_jumps<P: ParamSystem + ?Sized>(psys: &P, points: &[MapPoint]) -> Vec<f64> {
    points
        .windows(2)
        .filter(|w| (w[1].x_upper_star - w[0].x_upper_star).abs() > JUMP_THRESHOLD)
        .filter_map(|w| locate_jump(psys, w[0].eps, w[1].eps, 1e-6).ok())
        .map(|((l, _), (r, _))| 0.5 * (l + r))
        .collect()
}

/// `Ψ⁻¹(Q(x))`: the `ε` at which the minimum potential reaches `Q(x)`.
pub fn inverse_psi_threshold<P: ParamSystem + ?Sized>(psys: &P, x: f64) -> Result<f64> {
    let target = q_of_x(psys, x)?;
    let eps_max = psys.eps_max();
    let p0 = psi(psys, 0.0);
    let p1 = psi(psys, eps_max);
    if target > p0 || target < p1 {
        return Err(Error::Domain { what: "Q(x) outside the range of Psi", value: target });
    }
    if target == p1 {
        return Ok(eps_max);
    }
    let (t, f) = bisect_predicate(|e| psi(psys, e) > target, 0.0, eps_max, super::EPS_TOL)?;
    Ok(0.5 * (t + f))
}

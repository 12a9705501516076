//! Uncoupled, coupled and modified coupled recursions.

use alloc::vec;
use alloc::vec::Vec;

use crate::special::{bisect, golden_min};
use crate::{Error, Result, ScalarSystem};

/// Overshoot of `A g(x)` past `y_max` absorbed by clamping.
const CLAMP_SLACK: f64 = 1e-9;
/// Above this width the window sums switch to prefix sums.
const PREFIX_SUM_WIDTH: usize = 64;

/// Convergence settings shared by all iterations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationConfig {
    pub tol: f64,
    pub max_iters: usize,
    pub record_trajectory: bool,
}

impl Default for IterationConfig {
    fn default() -> Self {
        IterationConfig { tol: 1e-12, max_iters: 1_000_000, record_trajectory: false }
    }
}

impl IterationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::Domain { what: "iteration tolerance", value: self.tol });
        }
        if self.max_iters == 0 {
            return Err(Error::Precondition("max_iters must be at least 1"));
        }
        Ok(())
    }
}

fn check_state<S: ScalarSystem + ?Sized>(sys: &S, x: f64) -> Result<()> {
    if !(x >= 0.0 && x <= sys.x_max()) {
        return Err(Error::Domain { what: "state", value: x });
    }
    Ok(())
}

/// One step of `x ← f(g(x))`.
pub fn uncoupled_step<S: ScalarSystem + ?Sized>(sys: &S, x: f64) -> Result<f64> {
    check_state(sys, x)?;
    Ok(sys.h(x))
}

/// Iterate `x ← f(g(x))` until the step is at most `cfg.tol`.
///
/// Returns the limit and the number of steps taken.
pub fn uncoupled_fixed_point<S: ScalarSystem + ?Sized>(sys: &S, x0: f64, cfg: &IterationConfig) -> Result<(f64, usize)> {
    cfg.validate()?;
    check_state(sys, x0)?;
    let mut x = x0;
    let mut step = f64::INFINITY;
    for it in 1..=cfg.max_iters {
        let next = sys.h(x);
        step = (next - x).abs();
        x = next;
        if step <= cfg.tol {
            return Ok((x, it));
        }
    }
    Err(Error::NonConvergence { iterations: cfg.max_iters, last_step: step, last: vec![x] })
}

/// Coupling geometry: `N` check positions, width `w`, `M = N + w − 1` states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CouplingSpec {
    n: usize,
    w: usize,
}

impl CouplingSpec {
    pub fn new(n: usize, w: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("N must be at least 1"));
        }
        if w == 0 {
            return Err(Error::Precondition("w must be at least 1"));
        }
        Ok(CouplingSpec { n, w })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn m(&self) -> usize {
        self.n + self.w - 1
    }

    /// Zero-based index of the centre entry `i₀ = ⌈M/2⌉`.
    pub fn center(&self) -> usize {
        self.m().div_ceil(2) - 1
    }
}

/// A length-`M` state vector tied to its coupling geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledProfile {
    pub values: Vec<f64>,
    pub spec: CouplingSpec,
}

impl CoupledProfile {
    pub fn new(spec: CouplingSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != spec.m() {
            return Err(Error::Shape { expected: spec.m(), found: values.len() });
        }
        Ok(CoupledProfile { values, spec })
    }

    pub fn constant(spec: CouplingSpec, x: f64) -> Self {
        CoupledProfile { values: vec![x; spec.m()], spec }
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn center_value(&self) -> f64 {
        self.values[self.spec.center()]
    }
}

fn window_sums(src: &[f64], out: &mut [f64], w: usize, prefix: &mut Vec<f64>) {
    let inv = 1.0 / w as f64;
    if w <= PREFIX_SUM_WIDTH {
        for (j, o) in out.iter_mut().enumerate() {
            let mut s = 0.0;
            for v in &src[j..j + w] {
                s += v;
            }
            *o = s * inv;
        }
    } else {
        prefix.clear();
        prefix.push(0.0);
        let mut acc = 0.0;
        for v in src {
            acc += v;
            prefix.push(acc);
        }
        for (j, o) in out.iter_mut().enumerate() {
            *o = (prefix[j + w] - prefix[j]) * inv;
        }
    }
}

fn transpose_sums(src: &[f64], out: &mut [f64], w: usize, prefix: &mut Vec<f64>) {
    let n = src.len();
    let inv = 1.0 / w as f64;
    if w <= PREFIX_SUM_WIDTH {
        for (i, o) in out.iter_mut().enumerate() {
            let lo = (i + 1).saturating_sub(w);
            let hi = i.min(n - 1);
            let mut s = 0.0;
            if lo <= hi {
                for u in &src[lo..=hi] {
                    s += u;
                }
            }
            *o = s * inv;
        }
    } else {
        prefix.clear();
        prefix.push(0.0);
        let mut acc = 0.0;
        for u in src {
            acc += u;
            prefix.push(acc);
        }
        for (i, o) in out.iter_mut().enumerate() {
            let lo = (i + 1).saturating_sub(w);
            let hi = (i + 1).min(n);
            *o = if lo < hi { (prefix[hi] - prefix[lo]) * inv } else { 0.0 };
        }
    }
}

/// `[A v]_j = (1/w) Σ_{k=j}^{j+w−1} v_k`.
pub fn apply_a(spec: &CouplingSpec, v: &[f64]) -> Result<Vec<f64>> {
    if v.len() != spec.m() {
        return Err(Error::Shape { expected: spec.m(), found: v.len() });
    }
    let mut out = vec![0.0; spec.n()];
    window_sums(v, &mut out, spec.w(), &mut Vec::new());
    Ok(out)
}

/// `[Aᵀ u]_i = (1/w) Σ_{j=i−w+1}^{i} u_j` with out-of-range terms zero.
pub fn apply_at(spec: &CouplingSpec, u: &[f64]) -> Result<Vec<f64>> {
    if u.len() != spec.n() {
        return Err(Error::Shape { expected: spec.n(), found: u.len() });
    }
    let mut out = vec![0.0; spec.m()];
    transpose_sums(u, &mut out, spec.w(), &mut Vec::new());
    Ok(out)
}

/// Scratch buffers for repeated coupled steps.
pub(crate) struct Stepper {
    spec: CouplingSpec,
    gx: Vec<f64>,
    ay: Vec<f64>,
    prefix: Vec<f64>,
}

impl Stepper {
    pub(crate) fn new(spec: CouplingSpec) -> Self {
        Stepper { spec, gx: vec![0.0; spec.m()], ay: vec![0.0; spec.n()], prefix: Vec::new() }
    }

    /// `A g(x)`, clamped into `[0, y_max]`.
    pub(crate) fn averaged_g<S: ScalarSystem + ?Sized>(&mut self, sys: &S, x: &[f64]) -> Result<&[f64]> {
        for (o, &xi) in self.gx.iter_mut().zip(x) {
            *o = sys.g(xi);
        }
        window_sums(&self.gx, &mut self.ay, self.spec.w(), &mut self.prefix);
        let y_max = sys.y_max();
        for y in self.ay.iter_mut() {
            if *y > y_max {
                if *y - y_max > CLAMP_SLACK {
                    return Err(Error::Domain { what: "averaged g above y_max", value: *y });
                }
                *y = y_max;
            } else if *y < 0.0 {
                if *y < -CLAMP_SLACK {
                    return Err(Error::Domain { what: "averaged g below zero", value: *y });
                }
                *y = 0.0;
            }
        }
        Ok(&self.ay)
    }

    /// `Aᵀ f(A g(x))` written into `out`.
    pub(crate) fn step<S: ScalarSystem + ?Sized>(&mut self, sys: &S, x: &[f64], out: &mut [f64]) -> Result<()> {
        self.averaged_g(sys, x)?;
        for y in self.ay.iter_mut() {
            *y = sys.f(*y);
        }
        transpose_sums(&self.ay, out, self.spec.w(), &mut self.prefix);
        Ok(())
    }
}

fn check_profile<S: ScalarSystem + ?Sized>(sys: &S, profile: &CoupledProfile) -> Result<()> {
    if profile.values.len() != profile.spec.m() {
        return Err(Error::Shape { expected: profile.spec.m(), found: profile.values.len() });
    }
    for &x in &profile.values {
        check_state(sys, x)?;
    }
    Ok(())
}

/// One coupled step `x ← Aᵀ f(A g(x))`.
pub fn coupled_step<S: ScalarSystem + ?Sized>(sys: &S, profile: &CoupledProfile) -> Result<CoupledProfile> {
    check_profile(sys, profile)?;
    let mut out = vec![0.0; profile.spec.m()];
    Stepper::new(profile.spec).step(sys, &profile.values, &mut out)?;
    Ok(CoupledProfile { values: out, spec: profile.spec })
}

/// The operator `q`: copy entry `i₀` into every later position.
pub fn apply_q(values: &mut [f64]) {
    if values.is_empty() {
        return;
    }
    let i0 = values.len().div_ceil(2) - 1;
    let v = values[i0];
    for x in &mut values[i0 + 1..] {
        *x = v;
    }
}

/// Result of a coupled iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledRun {
    pub profile: CoupledProfile,
    pub iterations: usize,
    pub last_step: f64,
    /// Every iterate including the start, when recording was requested.
    pub trajectory: Option<Vec<Vec<f64>>>,
}

/// Iterate from `start`, optionally applying `q` after each step. The
/// observer sees every iterate (index 0 is the start).
pub fn coupled_iterate_from<S, O>(
    sys: &S,
    start: CoupledProfile,
    modified: bool,
    cfg: &IterationConfig,
    mut observer: O,
) -> Result<CoupledRun>
where
    S: ScalarSystem + ?Sized,
    O: FnMut(usize, &[f64]),
{
    cfg.validate()?;
    check_profile(sys, &start)?;
    let spec = start.spec;
    let mut stepper = Stepper::new(spec);
    let mut cur = start.values;
    let mut next = vec![0.0; spec.m()];
    let mut trajectory = cfg.record_trajectory.then(|| vec![cur.clone()]);
    observer(0, &cur);
    let mut step = f64::INFINITY;
    for it in 1..=cfg.max_iters {
        stepper.step(sys, &cur, &mut next)?;
        if modified {
            apply_q(&mut next);
        }
        step = cur.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        core::mem::swap(&mut cur, &mut next);
        observer(it, &cur);
        if let Some(t) = trajectory.as_mut() {
            t.push(cur.clone());
        }
        if step <= cfg.tol {
            return Ok(CoupledRun { profile: CoupledProfile { values: cur, spec }, iterations: it, last_step: step, trajectory });
        }
    }
    Err(Error::NonConvergence { iterations: cfg.max_iters, last_step: step, last: cur })
}

/// Coupled fixed point reached from the all-`x_max` start.
pub fn coupled_fixed_point<S: ScalarSystem + ?Sized>(sys: &S, spec: CouplingSpec, cfg: &IterationConfig) -> Result<CoupledRun> {
    coupled_iterate_from(sys, CoupledProfile::constant(spec, sys.x_max()), false, cfg, |_, _| {})
}

/// Modified coupled fixed point (with `q` applied after each step).
pub fn modified_coupled_fixed_point<S: ScalarSystem + ?Sized>(
    sys: &S,
    spec: CouplingSpec,
    cfg: &IterationConfig,
) -> Result<CoupledRun> {
    coupled_iterate_from(sys, CoupledProfile::constant(spec, sys.x_max()), true, cfg, |_, _| {})
}

/// The shift operator `S`: `(Sx)_1 = 0`, `(Sx)_i = x_{i−1}`.
pub fn shift_down(values: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    if !values.is_empty() {
        out.push(0.0);
        out.extend_from_slice(&values[..values.len() - 1]);
    }
    out
}

/// `x_i = x_{M−i+1}` to `tol`.
pub fn is_symmetric(values: &[f64], tol: f64) -> bool {
    let m = values.len();
    (0..m / 2).all(|i| (values[i] - values[m - 1 - i]).abs() <= tol)
}

/// Non-decreasing up to the centre and non-increasing after it, to `tol`.
pub fn is_unimodal(values: &[f64], tol: f64) -> bool {
    let m = values.len();
    if m < 2 {
        return true;
    }
    let c = m.div_ceil(2) - 1;
    (0..c).all(|i| values[i + 1] >= values[i] - tol) && (c..m - 1).all(|i| values[i + 1] <= values[i] + tol)
}

/// A fixed point of the uncoupled recursion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    pub x: f64,
    /// Double root located by minimizing `|x − h(x)|`, not by bracketing.
    pub tangential: bool,
}

/// Residual below which a local minimum of `|x − h(x)|` is a tangential root.
pub const TANGENTIAL_TOL: f64 = 1e-9;
/// Bisection width for bracketed fixed points.
pub const FIXED_POINT_TOL: f64 = 1e-12;

/// Fixed points of `h` on `[0, x_max]` from a `grid_n`-point scan.
pub fn enumerate_fixed_points<S: ScalarSystem + ?Sized>(sys: &S, grid_n: usize) -> Vec<FixedPoint> {
    enumerate_fixed_points_in(sys, 0.0, sys.x_max(), grid_n)
}

/// Fixed points of `h` on `[lo, hi]`, sorted ascending.
///
/// Sign changes of `x − h(x)` are refined by bisection; exact zeros on the
/// grid are kept as is; local minima of `|x − h(x)|` below
/// [`TANGENTIAL_TOL`] without a neighbouring sign change are refined by
/// golden section and flagged tangential. A system with `h ≡ id` would
/// report every grid point and is outside the intended use.
pub fn enumerate_fixed_points_in<S: ScalarSystem + ?Sized>(sys: &S, lo: f64, hi: f64, grid_n: usize) -> Vec<FixedPoint> {
    let n = grid_n.max(2);
    let xs: Vec<f64> = (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
        .collect();
    let r: Vec<f64> = xs.iter().map(|&x| x - sys.h(x)).collect();
    let resid = |x: f64| x - sys.h(x);
    let mut out: Vec<FixedPoint> = Vec::new();
    for i in 0..n {
        if r[i] == 0.0 {
            out.push(FixedPoint { x: xs[i], tangential: false });
        }
        if i + 1 < n && r[i] != 0.0 && r[i + 1] != 0.0 && (r[i] < 0.0) != (r[i + 1] < 0.0) {
            if let Ok(x) = bisect(resid, xs[i], xs[i + 1], FIXED_POINT_TOL) {
                out.push(FixedPoint { x, tangential: false });
            }
        }
    }
    for i in 0..n {
        let a = r[i].abs();
        if a == 0.0 || a >= TANGENTIAL_TOL {
            continue;
        }
        let left_ok = i == 0 || a < r[i - 1].abs();
        let right_ok = i + 1 == n || a <= r[i + 1].abs();
        let crossing = (i > 0 && (r[i - 1] < 0.0) != (r[i] < 0.0)) || (i + 1 < n && (r[i] < 0.0) != (r[i + 1] < 0.0));
        if !(left_ok && right_ok) || crossing {
            continue;
        }
        let a0 = if i == 0 { xs[0] } else { xs[i - 1] };
        let b0 = if i + 1 == n { xs[n - 1] } else { xs[i + 1] };
        let x = golden_min(|x| resid(x).abs(), a0, b0, FIXED_POINT_TOL).unwrap_or(xs[i]);
        if resid(x).abs() < TANGENTIAL_TOL {
            out.push(FixedPoint { x, tangential: true });
        }
    }
    out.sort_by(|a, b| a.x.total_cmp(&b.x));
    out.dedup_by(|b, a| {
        if (b.x - a.x).abs() <= 1e-9 {
            a.tangential &= b.tangential;
            true
        } else {
            false
        }
    });
    out
}

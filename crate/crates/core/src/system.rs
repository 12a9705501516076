//! Scalar systems `(f, g)` and parameterized families `(f(·;ε), g(·;ε))`.

use alloc::format;

use crate::special::integrate;
use crate::{Error, Result};

/// Closed-form suprema of |f'|, |g'| and |g''| over the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupNorms {
    pub f_prime: f64,
    pub g_prime: f64,
    pub g_second: f64,
}

/// A scalar system: `f: [0, y_max] → [0, x_max]` non-decreasing and
/// `g: [0, x_max] → [0, y_max]` strictly increasing.
///
/// `f_integral` and `g_integral` are the antiderivatives `F`, `G` vanishing
/// at zero; the defaults integrate numerically, implementors override them
/// with closed forms where available.
pub trait ScalarSystem {
    fn x_max(&self) -> f64;

    fn y_max(&self) -> f64 {
        self.g(self.x_max())
    }

    fn f(&self, y: f64) -> f64;
    fn g(&self, x: f64) -> f64;
    fn f_prime(&self, y: f64) -> f64;
    fn g_prime(&self, x: f64) -> f64;
    fn g_second(&self, x: f64) -> f64;

    fn f_integral(&self, y: f64) -> f64 {
        integrate(|z| self.f(z), 0.0, y)
    }

    fn g_integral(&self, x: f64) -> f64 {
        integrate(|z| self.g(z), 0.0, x)
    }

    /// Gates the half-iteration potential `V_s`.
    fn f_strictly_increasing(&self) -> bool {
        false
    }

    fn sup_norms(&self) -> Option<SupNorms> {
        None
    }

    /// The uncoupled update `h(x) = f(g(x))`.
    fn h(&self, x: f64) -> f64 {
        self.f(self.g(x))
    }

    /// `U_s(x) = x g(x) − G(x) − F(g(x))`. Override when a closed form
    /// avoids the cancellation between the three terms.
    fn potential(&self, x: f64) -> f64 {
        let gx = self.g(x);
        x * gx - self.g_integral(x) - self.f_integral(gx)
    }
}

impl<S: ScalarSystem + ?Sized> ScalarSystem for &S {
    fn x_max(&self) -> f64 {
        (**self).x_max()
    }
    fn y_max(&self) -> f64 {
        (**self).y_max()
    }
    fn f(&self, y: f64) -> f64 {
        (**self).f(y)
    }
    fn g(&self, x: f64) -> f64 {
        (**self).g(x)
    }
    fn f_prime(&self, y: f64) -> f64 {
        (**self).f_prime(y)
    }
    fn g_prime(&self, x: f64) -> f64 {
        (**self).g_prime(x)
    }
    fn g_second(&self, x: f64) -> f64 {
        (**self).g_second(x)
    }
    fn f_integral(&self, y: f64) -> f64 {
        (**self).f_integral(y)
    }
    fn g_integral(&self, x: f64) -> f64 {
        (**self).g_integral(x)
    }
    fn f_strictly_increasing(&self) -> bool {
        (**self).f_strictly_increasing()
    }
    fn sup_norms(&self) -> Option<SupNorms> {
        (**self).sup_norms()
    }
    fn h(&self, x: f64) -> f64 {
        (**self).h(x)
    }
    fn potential(&self, x: f64) -> f64 {
        (**self).potential(x)
    }
}

/// Structural properties a family declares about itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SystemFlags {
    /// `h^(0,1)(x;ε) > 0` on `(0, x_max] × E`.
    pub proper: bool,
    /// For every `ε` above the stability threshold, `h(x;ε) > x` near 0.
    pub strict_stability: bool,
    /// Zero is a stable fixed point for every `ε`.
    pub unconditionally_stable: bool,
    /// `f(g(0;ε);ε) = 0` for every `ε`.
    pub zero_is_fixed_point: bool,
}

/// A family of scalar systems indexed by `ε ∈ [0, eps_max]`.
///
/// Derivatives follow the `(1,0)` / `(0,1)` convention: `f_prime` is the
/// partial in the state argument, `f_eps` the partial in `ε`.
pub trait ParamSystem {
    fn eps_max(&self) -> f64;
    fn x_max(&self) -> f64;

    fn y_max(&self, eps: f64) -> f64 {
        self.g(self.x_max(), eps)
    }

    fn f(&self, y: f64, eps: f64) -> f64;
    fn g(&self, x: f64, eps: f64) -> f64;
    fn f_prime(&self, y: f64, eps: f64) -> f64;
    fn g_prime(&self, x: f64, eps: f64) -> f64;
    fn g_second(&self, x: f64, eps: f64) -> f64;
    fn f_eps(&self, y: f64, eps: f64) -> f64;
    fn g_eps(&self, x: f64, eps: f64) -> f64;

    fn f_integral(&self, y: f64, eps: f64) -> f64 {
        integrate(|z| self.f(z, eps), 0.0, y)
    }

    fn g_integral(&self, x: f64, eps: f64) -> f64 {
        integrate(|z| self.g(z, eps), 0.0, x)
    }

    /// `F^(0,1)(y;ε)`.
    fn f_integral_eps(&self, y: f64, eps: f64) -> f64 {
        integrate(|z| self.f_eps(z, eps), 0.0, y)
    }

    /// `G^(0,1)(x;ε)`.
    fn g_integral_eps(&self, x: f64, eps: f64) -> f64 {
        integrate(|z| self.g_eps(z, eps), 0.0, x)
    }

    fn flags(&self) -> SystemFlags;

    /// Closed-form `ε(x)` if the family has one.
    fn eps_of_x_closed(&self, _x: f64) -> Option<f64> {
        None
    }

    /// The EXIT functional plotted against `ε`. Defaults to
    /// `F^(0,1)(g(x;ε);ε) + G^(0,1)(x;ε)`, i.e. `-U_s^(0,1)`.
    fn exit(&self, x: f64, eps: f64) -> f64 {
        self.f_integral_eps(self.g(x, eps), eps) + self.g_integral_eps(x, eps)
    }

    /// `h^(1,0)(0;ε)` when known in closed form.
    /// Design rate of the underlying code ensemble, where one applies.
    fn design_rate(&self) -> Option<f64> {
        None
    }

    fn h_prime_at_zero(&self, _eps: f64) -> Option<f64> {
        None
    }

    fn sup_norms(&self, _eps: f64) -> Option<SupNorms> {
        None
    }

    fn f_strictly_increasing(&self, _eps: f64) -> bool {
        false
    }

    fn h(&self, x: f64, eps: f64) -> f64 {
        self.f(self.g(x, eps), eps)
    }

    /// `h^(1,0)(x;ε) = f'(g) g'`.
    fn h_x(&self, x: f64, eps: f64) -> f64 {
        self.f_prime(self.g(x, eps), eps) * self.g_prime(x, eps)
    }

    /// `h^(0,1)(x;ε) = f^(0,1)(g) + f'(g) g^(0,1)`.
    fn h_eps(&self, x: f64, eps: f64) -> f64 {
        let y = self.g(x, eps);
        self.f_eps(y, eps) + self.f_prime(y, eps) * self.g_eps(x, eps)
    }
}

impl<P: ParamSystem + ?Sized> ParamSystem for &P {
    fn eps_max(&self) -> f64 {
        (**self).eps_max()
    }
    fn x_max(&self) -> f64 {
        (**self).x_max()
    }
    fn y_max(&self, eps: f64) -> f64 {
        (**self).y_max(eps)
    }
    fn f(&self, y: f64, eps: f64) -> f64 {
        (**self).f(y, eps)
    }
    fn g(&self, x: f64, eps: f64) -> f64 {
        (**self).g(x, eps)
    }
    fn f_prime(&self, y: f64, eps: f64) -> f64 {
        (**self).f_prime(y, eps)
    }
    fn g_prime(&self, x: f64, eps: f64) -> f64 {
        (**self).g_prime(x, eps)
    }
    fn g_second(&self, x: f64, eps: f64) -> f64 {
        (**self).g_second(x, eps)
    }
    fn f_eps(&self, y: f64, eps: f64) -> f64 {
        (**self).f_eps(y, eps)
    }
    fn g_eps(&self, x: f64, eps: f64) -> f64 {
        (**self).g_eps(x, eps)
    }
    fn f_integral(&self, y: f64, eps: f64) -> f64 {
        (**self).f_integral(y, eps)
    }
    fn g_integral(&self, x: f64, eps: f64) -> f64 {
        (**self).g_integral(x, eps)
    }
    fn f_integral_eps(&self, y: f64, eps: f64) -> f64 {
        (**self).f_integral_eps(y, eps)
    }
    fn g_integral_eps(&self, x: f64, eps: f64) -> f64 {
        (**self).g_integral_eps(x, eps)
    }
    fn flags(&self) -> SystemFlags {
        (**self).flags()
    }
    fn eps_of_x_closed(&self, x: f64) -> Option<f64> {
        (**self).eps_of_x_closed(x)
    }
    fn exit(&self, x: f64, eps: f64) -> f64 {
        (**self).exit(x, eps)
    }
    fn h_prime_at_zero(&self, eps: f64) -> Option<f64> {
        (**self).h_prime_at_zero(eps)
    }
    fn design_rate(&self) -> Option<f64> {
        (**self).design_rate()
    }
    fn sup_norms(&self, eps: f64) -> Option<SupNorms> {
        (**self).sup_norms(eps)
    }
    fn f_strictly_increasing(&self, eps: f64) -> bool {
        (**self).f_strictly_increasing(eps)
    }
}

/// A family frozen at one `ε`. Holds the family by value; pass `&family`
/// to borrow.
#[derive(Debug, Clone, Copy)]
pub struct Slice<P> {
    sys: P,
    eps: f64,
}

impl<P: ParamSystem> Slice<P> {
    pub fn new(sys: P, eps: f64) -> Self {
        Slice { sys, eps }
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn family(&self) -> &P {
        &self.sys
    }
}

impl<P: ParamSystem> ScalarSystem for Slice<P> {
    fn x_max(&self) -> f64 {
        self.sys.x_max()
    }
    fn y_max(&self) -> f64 {
        self.sys.y_max(self.eps)
    }
    fn f(&self, y: f64) -> f64 {
        self.sys.f(y, self.eps)
    }
    fn g(&self, x: f64) -> f64 {
        self.sys.g(x, self.eps)
    }
    fn f_prime(&self, y: f64) -> f64 {
        self.sys.f_prime(y, self.eps)
    }
    fn g_prime(&self, x: f64) -> f64 {
        self.sys.g_prime(x, self.eps)
    }
    fn g_second(&self, x: f64) -> f64 {
        self.sys.g_second(x, self.eps)
    }
    fn f_integral(&self, y: f64) -> f64 {
        self.sys.f_integral(y, self.eps)
    }
    fn g_integral(&self, x: f64) -> f64 {
        self.sys.g_integral(x, self.eps)
    }
    fn f_strictly_increasing(&self) -> bool {
        self.sys.f_strictly_increasing(self.eps)
    }
    fn sup_norms(&self) -> Option<SupNorms> {
        self.sys.sup_norms(self.eps)
    }
}

/// The system translated so that the fixed point `x̃` moves to 0:
/// `f̃(y) = f(y + g(x̃)) − x̃`, `g̃(x) = g(x + x̃) − g(x̃)`.
#[derive(Debug, Clone, Copy)]
pub struct Translated<S> {
    base: S,
    shift: f64,
    g_shift: f64,
    f_at_shift: f64,
    g_int_at_shift: f64,
}

/// Fixed-point residual tolerated by [`translate_system`].
pub const TRANSLATE_TOL: f64 = 1e-10;

/// Translate `sys` by one of its fixed points.
pub fn translate_system<S: ScalarSystem>(sys: S, x_tilde: f64) -> Result<Translated<S>> {
    if !(0.0..=sys.x_max()).contains(&x_tilde) {
        return Err(Error::Domain { what: "translation point", value: x_tilde });
    }
    if (x_tilde - sys.h(x_tilde)).abs() > TRANSLATE_TOL {
        return Err(Error::Precondition("translation point is not a fixed point"));
    }
    let g_shift = sys.g(x_tilde);
    let f_at_shift = sys.f_integral(g_shift);
    let g_int_at_shift = sys.g_integral(x_tilde);
    Ok(Translated { base: sys, shift: x_tilde, g_shift, f_at_shift, g_int_at_shift })
}

impl<S: ScalarSystem> Translated<S> {
    pub fn shift(&self) -> f64 {
        self.shift
    }

    fn base_y(&self, y: f64) -> f64 {
        (y + self.g_shift).min(self.base.y_max())
    }

    fn base_x(&self, x: f64) -> f64 {
        (x + self.shift).min(self.base.x_max())
    }
}

impl<S: ScalarSystem> ScalarSystem for Translated<S> {
    fn x_max(&self) -> f64 {
        self.base.x_max() - self.shift
    }
    fn y_max(&self) -> f64 {
        self.base.y_max() - self.g_shift
    }
    fn f(&self, y: f64) -> f64 {
        self.base.f(self.base_y(y)) - self.shift
    }
    fn g(&self, x: f64) -> f64 {
        self.base.g(self.base_x(x)) - self.g_shift
    }
    fn f_prime(&self, y: f64) -> f64 {
        self.base.f_prime(self.base_y(y))
    }
    fn g_prime(&self, x: f64) -> f64 {
        self.base.g_prime(self.base_x(x))
    }
    fn g_second(&self, x: f64) -> f64 {
        self.base.g_second(self.base_x(x))
    }
    fn f_integral(&self, y: f64) -> f64 {
        self.base.f_integral(self.base_y(y)) - y * self.shift - self.f_at_shift
    }
    fn g_integral(&self, x: f64) -> f64 {
        self.base.g_integral(self.base_x(x)) - x * self.g_shift - self.g_int_at_shift
    }
    fn f_strictly_increasing(&self) -> bool {
        self.base.f_strictly_increasing()
    }
    // Suprema over a sub-domain are bounded by the full-domain ones.
    fn sup_norms(&self) -> Option<SupNorms> {
        self.base.sup_norms()
    }
}

fn grid(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }
}

/// Grid check of the scalar-system invariants: ranges, monotonicity of `f`,
/// strict monotonicity of `g`, `y_max = g(x_max)`, and `F' = f`, `G' = g`.
pub fn check_scalar<S: ScalarSystem + ?Sized>(sys: &S, grid_n: usize) -> Result<()> {
    let n = grid_n.max(3);
    let x_max = sys.x_max();
    let y_max = sys.y_max();
    if !(x_max > 0.0 && x_max.is_finite()) {
        return Err(Error::Construction(format!("x_max must be positive and finite, got {x_max}")));
    }
    if !(y_max >= 0.0 && y_max.is_finite()) {
        return Err(Error::Construction(format!("y_max must be non-negative and finite, got {y_max}")));
    }
    if (y_max - sys.g(x_max)).abs() > 1e-12 * y_max.max(1.0) {
        return Err(Error::Construction(format!("y_max = {y_max} differs from g(x_max) = {}", sys.g(x_max))));
    }
    let mut prev_f = sys.f(0.0);
    let mut prev_g = sys.g(0.0);
    for i in 1..n {
        let y = grid(0.0, y_max, n, i);
        let x = grid(0.0, x_max, n, i);
        let fy = sys.f(y);
        let gx = sys.g(x);
        if !(fy >= -1e-12 && fy <= x_max * (1.0 + 1e-12)) {
            return Err(Error::Construction(format!("f({y}) = {fy} leaves [0, x_max]")));
        }
        if !(gx >= -1e-12 && gx <= y_max * (1.0 + 1e-12) + 1e-15) {
            return Err(Error::Construction(format!("g({x}) = {gx} leaves [0, y_max]")));
        }
        let dy = y_max / (n - 1) as f64;
        if dy > 0.0 && (fy - prev_f) / dy < -1e-9 {
            return Err(Error::Construction(format!("f decreases near y = {y}")));
        }
        let dx = x_max / (n - 1) as f64;
        if (gx - prev_g) / dx < -1e-9 {
            return Err(Error::Construction(format!("g decreases near x = {x}")));
        }
        if i + 1 < n && !(sys.g_prime(x) > 0.0) {
            return Err(Error::Construction(format!("g'({x}) = {} is not positive", sys.g_prime(x))));
        }
        prev_f = fy;
        prev_g = gx;
    }
    // Antiderivatives at a handful of interior points.
    let scale_f = sys.f(y_max).abs().max(1e-300);
    let scale_g = sys.g(x_max).abs().max(1e-300);
    for k in 1..10 {
        let t = k as f64 / 10.0;
        let y = t * y_max;
        let x = t * x_max;
        let hy = 1e-4 * y_max;
        let hx = 1e-4 * x_max;
        if hy > 0.0 {
            let fd = (sys.f_integral(y + hy) - sys.f_integral(y - hy)) / (2.0 * hy);
            if (fd - sys.f(y)).abs() > 1e-6 * sys.f(y).abs().max(scale_f) {
                return Err(Error::Construction(format!("F' differs from f at y = {y}")));
            }
        }
        let fd = (sys.g_integral(x + hx) - sys.g_integral(x - hx)) / (2.0 * hx);
        if (fd - sys.g(x)).abs() > 1e-6 * sys.g(x).abs().max(scale_g) {
            return Err(Error::Construction(format!("G' differs from g at x = {x}")));
        }
    }
    if sys.f_integral(0.0) != 0.0 || sys.g_integral(0.0) != 0.0 {
        return Err(Error::Construction("antiderivatives must vanish at zero".into()));
    }
    Ok(())
}

/// Grid check of the family invariants: monotonicity in both arguments,
/// strict monotonicity of `g` in `x` below `eps_max`, properness when
/// declared (on `ε > 0`), and `F^(0,1)`, `G^(0,1)` non-negative and
/// non-decreasing in the state argument.
pub fn check_param<P: ParamSystem + ?Sized>(sys: &P, nx: usize, neps: usize) -> Result<()> {
    let nx = nx.max(3);
    let neps = neps.max(3);
    let x_max = sys.x_max();
    let eps_max = sys.eps_max();
    if !(eps_max > 0.0 && eps_max.is_finite()) {
        return Err(Error::Construction(format!("eps_max must be positive and finite, got {eps_max}")));
    }
    let flags = sys.flags();
    let tol = 1e-9;
    for j in 0..neps {
        let eps = grid(0.0, eps_max, neps, j);
        let slice = Slice::new(sys, eps);
        let y_max = slice.y_max();
        let mut prev: Option<(f64, f64, f64, f64)> = None;
        for i in 0..nx {
            let x = grid(0.0, x_max, nx, i);
            let y = grid(0.0, y_max, nx, i);
            let cur = (sys.f(y, eps), sys.g(x, eps), sys.f_integral_eps(y, eps), sys.g_integral_eps(x, eps));
            if cur.2 < -tol || cur.3 < -tol {
                return Err(Error::Construction(format!("negative F^(0,1) or G^(0,1) at ({x}, {eps})")));
            }
            if let Some(p) = prev {
                if cur.0 < p.0 - tol || cur.1 < p.1 - tol {
                    return Err(Error::Construction(format!("f or g decreases in the state at eps = {eps}")));
                }
                if cur.2 < p.2 - tol || cur.3 < p.3 - tol {
                    return Err(Error::Construction(format!("F^(0,1) or G^(0,1) decreases at eps = {eps}")));
                }
            }
            if i > 0 && i + 1 < nx && j + 1 < neps && !(sys.g_prime(x, eps) > 0.0) {
                return Err(Error::Construction(format!("g is not strictly increasing at ({x}, {eps})")));
            }
            if sys.f_eps(y, eps) < -tol || sys.g_eps(x, eps) < -tol {
                return Err(Error::Construction(format!("f or g decreases in eps at ({x}, {eps})")));
            }
            if flags.proper && i > 0 && j > 0 && !(sys.h_eps(x, eps) > 0.0) {
                return Err(Error::Construction(format!("declared proper but h^(0,1)({x}; {eps}) <= 0")));
            }
            prev = Some(cur);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Lin;
    impl ScalarSystem for Lin {
        fn x_max(&self) -> f64 {
            1.0
        }
        fn f(&self, y: f64) -> f64 {
            0.5 * y
        }
        fn g(&self, x: f64) -> f64 {
            x
        }
        fn f_prime(&self, _: f64) -> f64 {
            0.5
        }
        fn g_prime(&self, _: f64) -> f64 {
            1.0
        }
        fn g_second(&self, _: f64) -> f64 {
            0.0
        }
    }

    #[test]
    fn quadrature_defaults() {
        assert!((Lin.f_integral(1.0) - 0.25).abs() < 1e-14);
        assert!((Lin.g_integral(0.5) - 0.125).abs() < 1e-14);
        assert_eq!(Lin.y_max(), 1.0);
        check_scalar(&Lin, 200).unwrap();
    }

    #[test]
    fn translation_by_zero_is_identity() {
        let t = translate_system(&Lin, 0.0).unwrap();
        for i in 0..=10 {
            let x = i as f64 / 10.0;
            assert_eq!(t.f(x), Lin.f(x));
            assert_eq!(t.g(x), Lin.g(x));
            assert!((t.f_integral(x) - Lin.f_integral(x)).abs() < 1e-15);
        }
    }

    #[test]
    fn translation_requires_fixed_point() {
        assert!(matches!(translate_system(&Lin, 0.5), Err(Error::Precondition(_))));
    }

    struct Decreasing;
    impl ScalarSystem for Decreasing {
        fn x_max(&self) -> f64 {
            1.0
        }
        fn f(&self, y: f64) -> f64 {
            1.0 - y
        }
        fn g(&self, x: f64) -> f64 {
            x
        }
        fn f_prime(&self, _: f64) -> f64 {
            -1.0
        }
        fn g_prime(&self, _: f64) -> f64 {
            1.0
        }
        fn g_second(&self, _: f64) -> f64 {
            0.0
        }
    }

    #[test]
    fn check_rejects_decreasing_f() {
        assert!(matches!(check_scalar(&Decreasing, 100), Err(Error::Construction(_))));
    }
}

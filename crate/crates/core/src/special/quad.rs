use crate::{Error, Result};

const MAX_DEPTH: u32 = 60;

/// Absolute tolerance used for quadrature-backed antiderivatives.
pub const DEFAULT_QUAD_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub est_error: f64,
    pub evaluations: usize,
}

struct State<F> {
    f: F,
    evaluations: usize,
    est_error: f64,
    depth_hit: bool,
}

impl<F: FnMut(f64) -> f64> State<F> {
    fn eval(&mut self, x: f64) -> f64 {
        self.evaluations += 1;
        (self.f)(x)
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse(&mut self, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = self.eval(lm);
        let frm = self.eval(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let diff = left + right - whole;
        // Below this the comparison is pure rounding noise.
        let floor = 64.0 * f64::EPSILON * (left.abs() + right.abs());
        if diff.abs() <= 15.0 * tol || diff.abs() <= floor || m <= a || m >= b {
            self.est_error += diff.abs() / 15.0;
            return left + right + diff / 15.0;
        }
        if depth >= MAX_DEPTH {
            self.depth_hit = true;
            self.est_error += diff.abs() / 15.0;
            return left + right + diff / 15.0;
        }
        self.recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)
            + self.recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)
    }
}

/// Adaptive Simpson quadrature with Richardson correction.
///
/// Fails with [`Error::Numeric`] (carrying the partial value) when a panel
/// cannot reach its share of `tol` within 60 bisections.
pub fn adaptive_simpson<F: FnMut(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<QuadratureResult> {
    if !(tol > 0.0) {
        return Err(Error::Domain { what: "quadrature tolerance", value: tol });
    }
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidBracket { lo, hi });
    }
    if lo == hi {
        return Ok(QuadratureResult { value: 0.0, est_error: 0.0, evaluations: 0 });
    }
    let (a, b, sign) = if lo < hi { (lo, hi, 1.0) } else { (hi, lo, -1.0) };
    let mut st = State { f, evaluations: 0, est_error: 0.0, depth_hit: false };
    let fa = st.eval(a);
    let fb = st.eval(b);
    let m = 0.5 * (a + b);
    let fm = st.eval(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let value = sign * st.recurse(a, b, fa, fm, fb, whole, tol, 0);
    if st.depth_hit || !value.is_finite() {
        return Err(Error::Numeric { what: "adaptive Simpson quadrature", partial: value });
    }
    Ok(QuadratureResult { value, est_error: st.est_error, evaluations: st.evaluations })
}

/// Integral value with the default tolerance; a depth overrun yields the
/// partial estimate rather than an error.
pub fn integrate<F: FnMut(f64) -> f64>(f: F, lo: f64, hi: f64) -> f64 {
    match adaptive_simpson(f, lo, hi, DEFAULT_QUAD_TOL) {
        Ok(r) => r.value,
        Err(Error::Numeric { partial, .. }) => partial,
        Err(_) => f64::NAN,
    }
}

use crate::{Error, Result};

/// Bisection on a sign change of `f` over `[lo, hi]`, down to width `tol`.
///
/// Returns the midpoint of the final bracket, or an endpoint that evaluates
/// to exactly zero.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain { what: "bisection tolerance", value: tol });
    }
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.is_nan() || fb.is_nan() || fa.signum() == fb.signum() {
        return Err(Error::InvalidBracket { lo, hi });
    }
    while b - a > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Bisection on a predicate that holds at `lo` and fails at `hi`.
///
/// Returns the final `(last_true, first_false)` bracket with width ≤ `tol`.
pub fn bisect_predicate<P: FnMut(f64) -> bool>(mut pred: P, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)> {
    if !(tol > 0.0) {
        return Err(Error::Domain { what: "bisection tolerance", value: tol });
    }
    if !pred(lo) || pred(hi) {
        return Err(Error::InvalidBracket { lo, hi });
    }
    let (mut t, mut f) = (lo, hi);
    while (f - t).abs() > tol {
        let m = 0.5 * (t + f);
        if m == t || m == f {
            break;
        }
        if pred(m) {
            t = m;
        } else {
            f = m;
        }
    }
    Ok((t, f))
}

/// Golden-section search for a minimizer of a unimodal `f` on `[lo, hi]`.
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain { what: "golden-section tolerance", value: tol });
    }
    if !(lo <= hi) {
        return Err(Error::InvalidBracket { lo, hi });
    }
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if c >= d {
            break;
        }
    }
    let m = 0.5 * (a + b);
    let fm = f(m);
    // Return whichever probed point is lowest; ties go to the midpoint.
    let mut best = (m, fm);
    for (x, v) in [(c, fc), (d, fd)] {
        if v < best.1 {
            best = (x, v);
        }
    }
    Ok(best.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_two() {
        let r = bisect(|x| x * x - 2.0, 1.0, 2.0, 1e-12).unwrap();
        assert!((r - core::f64::consts::SQRT_2).abs() < 1e-9);
    }

    #[test]
    fn no_sign_change_is_an_error() {
        assert!(matches!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-9), Err(Error::InvalidBracket { .. })));
    }

    #[test]
    fn predicate_bracket() {
        let (t, f) = bisect_predicate(|x| x < 0.694, 0.0, 1.0, 1e-10).unwrap();
        assert!(t < 0.694 && f >= 0.694 && f - t <= 1e-10);
        assert!(bisect_predicate(|_| true, 0.0, 1.0, 1e-9).is_err());
    }

    #[test]
    fn golden_parabola() {
        let x = golden_min(|x| (x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-12).unwrap();
        assert!((x - 0.3).abs() < 1e-7);
    }

    #[test]
    fn golden_boundary_minimum() {
        let x = golden_min(|x| x, 0.0, 1.0, 1e-12).unwrap();
        assert!(x < 1e-11);
    }

    #[test]
    fn deterministic() {
        let f = |x: f64| libm::cos(x) - x;
        let a = bisect(f, 0.0, 1.0, 1e-9).unwrap();
        let b = bisect(f, 0.0, 1.0, 1e-9).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}

use core::f64::consts::PI;

use crate::ScalarSystem;

/// A system whose potential `U_s(x) = x⁵ sin⁴(π/x)/25 + x⁶/30` has
/// infinitely many local minima accumulating at 0: `g(x) = x` and
/// `F(x) = x²/2 − x⁵ sin⁴(π/x)/25 − x⁶/30`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Pathological;

impl Pathological {
    /// The displayed closed form of the potential.
    pub fn potential_closed(x: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        let s = libm::sin(PI / x);
        libm::pow(x, 5.0) * s * s * s * s / 25.0 + libm::pow(x, 6.0) / 30.0
    }
}

impl ScalarSystem for Pathological {
    fn x_max(&self) -> f64 {
        1.0
    }
    fn f(&self, y: f64) -> f64 {
        if y == 0.0 {
            return 0.0;
        }
        let s = libm::sin(PI / y);
        let c = libm::cos(PI / y);
        let y3 = y * y * y;
        y - (5.0 * y3 * y * s * s * s * s - 4.0 * PI * y3 * s * s * s * c) / 25.0 - y3 * y * y / 5.0
    }
    fn g(&self, x: f64) -> f64 {
        x
    }
    fn f_prime(&self, y: f64) -> f64 {
        if y == 0.0 {
            return 1.0;
        }
        let s = libm::sin(PI / y);
        let c = libm::cos(PI / y);
        let (s2, y2) = (s * s, y * y);
        let bracket = 20.0 * y2 * y * s2 * s2 - 32.0 * PI * y2 * s2 * s * c + 12.0 * PI * PI * y * s2 * c * c
            - 4.0 * PI * PI * y * s2 * s2;
        1.0 - bracket / 25.0 - y2 * y2
    }
    fn g_prime(&self, _x: f64) -> f64 {
        1.0
    }
    fn g_second(&self, _x: f64) -> f64 {
        0.0
    }
    fn f_integral(&self, y: f64) -> f64 {
        0.5 * y * y - Self::potential_closed(y)
    }
    fn g_integral(&self, x: f64) -> f64 {
        0.5 * x * x
    }
    fn potential(&self, x: f64) -> f64 {
        Self::potential_closed(x)
    }
}

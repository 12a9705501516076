use alloc::format;

use crate::special::{inc_beta_density, inc_beta_density_prime, ln_beta, reg_inc_beta};
use crate::{Error, ParamSystem, Result, SystemFlags};

/// Generalized LDPC ensemble with bounded-distance decoding of a
/// `t`-error-correcting BCH code of length `n` at the checks:
/// `f(y;ε) = εy`, `g(x) = I_x(t, n − t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GldpcSystem {
    n: u32,
    t: u32,
    ln_b: f64,
}

impl GldpcSystem {
    pub fn new(n: u32, t: u32) -> Result<Self> {
        if n < 5 || t < 2 || t > (n - 1) / 2 {
            return Err(Error::Construction(format!("GLDPC needs 2 <= t <= (n-1)/2, got n = {n}, t = {t}")));
        }
        Ok(GldpcSystem { n, t, ln_b: ln_beta(t as f64, (n - t) as f64) })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    fn ab(&self) -> (f64, f64) {
        (self.t as f64, (self.n - self.t) as f64)
    }

    fn ix(&self, x: f64) -> f64 {
        let (a, b) = self.ab();
        reg_inc_beta(x.clamp(0.0, 1.0), a, b).unwrap_or(f64::NAN)
    }

    /// Design rate on the BSC, `1 − 2t log₂(n+1)/n`.
    pub fn rate_bsc(&self) -> f64 {
        1.0 - 2.0 * self.t as f64 * libm::log2(self.n as f64 + 1.0) / self.n as f64
    }

    /// Design rate on the BEC, `1 − t log₂(n+1)/n`.
    pub fn rate_bec(&self) -> f64 {
        1.0 - self.t as f64 * libm::log2(self.n as f64 + 1.0) / self.n as f64
    }

    /// `x^t (1−x)^{n−t} / (n B(t, n−t))`.
    fn boundary_term(&self, x: f64) -> f64 {
        let (a, b) = self.ab();
        if x <= 0.0 || x >= 1.0 {
            return 0.0;
        }
        libm::exp(a * libm::log(x) + b * libm::log1p(-x) - self.ln_b) / self.n as f64
    }

    /// Closed-form fixed-point potential
    /// `Q(x) = ½(2t/n − x) I_x(t, n−t) − x^t(1−x)^{n−t}/(n B(t, n−t))`.
    pub fn q_closed(&self, x: f64) -> f64 {
        0.5 * (2.0 * self.t as f64 / self.n as f64 - x) * self.ix(x) - self.boundary_term(x)
    }

    /// `P(x) = −2Q(x)`.
    pub fn p(&self, x: f64) -> f64 {
        -2.0 * self.q_closed(x)
    }

    /// `P'(x) = g(x) − x g'(x)`.
    pub fn p_prime(&self, x: f64) -> f64 {
        self.ix(x) - x * self.density(x)
    }

    /// `P''(x) = −x g''(x)`.
    pub fn p_second(&self, x: f64) -> f64 {
        -x * self.density_prime(x)
    }

    /// Turning point `(t − 1)/(n − 2)` of `P'`.
    pub fn p_turning_point(&self) -> f64 {
        (self.t as f64 - 1.0) / (self.n as f64 - 2.0)
    }

    fn density(&self, x: f64) -> f64 {
        let (a, b) = self.ab();
        inc_beta_density(x.clamp(0.0, 1.0), a, b).unwrap_or(f64::NAN)
    }

    fn density_prime(&self, x: f64) -> f64 {
        let (a, b) = self.ab();
        inc_beta_density_prime(x.clamp(0.0, 1.0), a, b).unwrap_or(f64::NAN)
    }
}

impl ParamSystem for GldpcSystem {
    fn eps_max(&self) -> f64 {
        1.0
    }
    fn x_max(&self) -> f64 {
        1.0
    }
    fn f(&self, y: f64, eps: f64) -> f64 {
        eps * y
    }
    fn g(&self, x: f64, _eps: f64) -> f64 {
        self.ix(x)
    }
    fn f_prime(&self, _y: f64, eps: f64) -> f64 {
        eps
    }
    fn g_prime(&self, x: f64, _eps: f64) -> f64 {
        self.density(x)
    }
    fn g_second(&self, x: f64, _eps: f64) -> f64 {
        self.density_prime(x)
    }
    fn f_eps(&self, y: f64, _eps: f64) -> f64 {
        y
    }
    fn g_eps(&self, _x: f64, _eps: f64) -> f64 {
        0.0
    }
    fn f_integral(&self, y: f64, eps: f64) -> f64 {
        0.5 * eps * y * y
    }
    /// `G(x) = x I_x(t, n−t) − (t/n) I_x(t+1, n−t)`.
    fn g_integral(&self, x: f64, _eps: f64) -> f64 {
        let (a, b) = self.ab();
        let upper = reg_inc_beta(x.clamp(0.0, 1.0), a + 1.0, b).unwrap_or(f64::NAN);
        x * self.ix(x) - a / self.n as f64 * upper
    }
    fn f_integral_eps(&self, y: f64, _eps: f64) -> f64 {
        0.5 * y * y
    }
    fn g_integral_eps(&self, _x: f64, _eps: f64) -> f64 {
        0.0
    }
    fn flags(&self) -> SystemFlags {
        SystemFlags { proper: true, strict_stability: false, unconditionally_stable: true, zero_is_fixed_point: true }
    }
    fn eps_of_x_closed(&self, x: f64) -> Option<f64> {
        let g = self.ix(x);
        (g > 0.0).then(|| x / g)
    }
    /// EBP EXIT functional `g(x)²`.
    fn exit(&self, x: f64, _eps: f64) -> f64 {
        let g = self.ix(x);
        g * g
    }
    fn h_prime_at_zero(&self, eps: f64) -> Option<f64> {
        Some(eps * self.density(0.0))
    }
    fn f_strictly_increasing(&self, eps: f64) -> bool {
        eps > 0.0
    }
}

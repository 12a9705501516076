use alloc::format;

use super::DegreeDistribution;
use crate::special::integrate;
use crate::{Error, ParamSystem, Result, SystemFlags};

/// Erasure transfer function `φ(x;ε)` of a channel with memory: the
/// extrinsic erasure rate out of the channel detector given a priori
/// erasure rate `x`.
pub trait ErasureTransfer {
    fn phi(&self, x: f64, eps: f64) -> f64;
    fn phi_x(&self, x: f64, eps: f64) -> f64;
    fn phi_eps(&self, x: f64, eps: f64) -> f64;

    /// `Φ(x;ε) = ∫₀ˣ φ(z;ε) dz`.
    fn big_phi(&self, x: f64, eps: f64) -> f64 {
        integrate(|z| self.phi(z, eps), 0.0, x)
    }

    /// `Φ^(0,1)(x;ε)`.
    fn big_phi_eps(&self, x: f64, eps: f64) -> f64 {
        integrate(|z| self.phi_eps(z, eps), 0.0, x)
    }
}

/// Dicode erasure channel with BCJR detection,
/// `φ(x;ε) = 4ε² / (2 − (1−ε)x)²`.
///
/// Shipped as a stand-in transfer function; its thresholds carry no
/// published reference values.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DicodeErasure;

impl DicodeErasure {
    fn d(x: f64, eps: f64) -> f64 {
        2.0 - (1.0 - eps) * x
    }
}

impl ErasureTransfer for DicodeErasure {
    fn phi(&self, x: f64, eps: f64) -> f64 {
        let d = Self::d(x, eps);
        4.0 * eps * eps / (d * d)
    }
    fn phi_x(&self, x: f64, eps: f64) -> f64 {
        let d = Self::d(x, eps);
        8.0 * eps * eps * (1.0 - eps) / (d * d * d)
    }
    fn phi_eps(&self, x: f64, eps: f64) -> f64 {
        let d = Self::d(x, eps);
        8.0 * eps * (2.0 - x) / (d * d * d)
    }
    fn big_phi(&self, x: f64, eps: f64) -> f64 {
        2.0 * eps * eps * x / Self::d(x, eps)
    }
    fn big_phi_eps(&self, x: f64, eps: f64) -> f64 {
        let d = Self::d(x, eps);
        2.0 * eps * x * (2.0 * d - eps * x) / (d * d)
    }
}

/// LDPC code over an erasure channel with memory:
/// `f(y;ε) = φ(L(y);ε) λ(y)`, `g(x) = 1 − ρ(1 − x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsiSystem<T> {
    phi: T,
    lambda: DegreeDistribution,
    rho: DegreeDistribution,
}

const PHI_CHECK_GRID: usize = 65;

impl<T: ErasureTransfer> IsiSystem<T> {
    /// Checks that `φ` is non-decreasing in both arguments, maps into
    /// `[0, 1]`, and satisfies `φ(1;1) = 1`.
    pub fn new(phi: T, lambda: DegreeDistribution, rho: DegreeDistribution) -> Result<Self> {
        let one = phi.phi(1.0, 1.0);
        if (one - 1.0).abs() > 1e-12 {
            return Err(Error::Construction(format!("transfer function: phi(1;1) = {one}, expected 1")));
        }
        let n = PHI_CHECK_GRID;
        for i in 0..n {
            for j in 0..n {
                let x = i as f64 / (n - 1) as f64;
                let e = j as f64 / (n - 1) as f64;
                let v = phi.phi(x, e);
                if !(-1e-12..=1.0 + 1e-12).contains(&v) {
                    return Err(Error::Construction(format!("transfer function: phi({x};{e}) = {v} outside [0, 1]")));
                }
                if phi.phi_x(x, e) < -1e-12 {
                    return Err(Error::Construction(format!("transfer function: decreasing in x at ({x};{e})")));
                }
                if phi.phi_eps(x, e) < -1e-12 {
                    return Err(Error::Construction(format!("transfer function: decreasing in eps at ({x};{e})")));
                }
            }
        }
        Ok(IsiSystem { phi, lambda, rho })
    }

    pub fn transfer(&self) -> &T {
        &self.phi
    }

    pub fn lambda(&self) -> &DegreeDistribution {
        &self.lambda
    }

    pub fn rho(&self) -> &DegreeDistribution {
        &self.rho
    }

    /// Design rate `1 − L'(1)/R'(1)`.
    pub fn rate(&self) -> f64 {
        1.0 - self.lambda.mean_degree() / self.rho.mean_degree()
    }
}

impl<T: ErasureTransfer> ParamSystem for IsiSystem<T> {
    fn eps_max(&self) -> f64 {
        1.0
    }
    fn x_max(&self) -> f64 {
        1.0
    }
    fn f(&self, y: f64, eps: f64) -> f64 {
        self.phi.phi(self.lambda.node(y), eps) * self.lambda.edge(y)
    }
    fn g(&self, x: f64, _eps: f64) -> f64 {
        1.0 - self.rho.edge(1.0 - x)
    }
    fn f_prime(&self, y: f64, eps: f64) -> f64 {
        let l = self.lambda.node(y);
        let lam = self.lambda.edge(y);
        self.phi.phi_x(l, eps) * self.lambda.mean_degree() * lam * lam + self.phi.phi(l, eps) * self.lambda.edge_prime(y)
    }
    fn g_prime(&self, x: f64, _eps: f64) -> f64 {
        self.rho.edge_prime(1.0 - x)
    }
    fn g_second(&self, x: f64, _eps: f64) -> f64 {
        -self.rho.edge_second(1.0 - x)
    }
    fn f_eps(&self, y: f64, eps: f64) -> f64 {
        self.phi.phi_eps(self.lambda.node(y), eps) * self.lambda.edge(y)
    }
    fn g_eps(&self, _x: f64, _eps: f64) -> f64 {
        0.0
    }
    fn f_integral(&self, y: f64, eps: f64) -> f64 {
        self.phi.big_phi(self.lambda.node(y), eps) / self.lambda.mean_degree()
    }
    fn g_integral(&self, x: f64, _eps: f64) -> f64 {
        x - (1.0 - self.rho.node(1.0 - x)) / self.rho.mean_degree()
    }
    fn f_integral_eps(&self, y: f64, eps: f64) -> f64 {
        self.phi.big_phi_eps(self.lambda.node(y), eps) / self.lambda.mean_degree()
    }
    fn g_integral_eps(&self, _x: f64, _eps: f64) -> f64 {
        0.0
    }
    fn flags(&self) -> SystemFlags {
        let s = self.h_prime_at_zero(self.eps_max()).unwrap_or(0.0);
        SystemFlags {
            proper: true,
            strict_stability: s > 1.0,
            unconditionally_stable: s < 1.0,
            zero_is_fixed_point: self.lambda.edge(0.0) == 0.0,
        }
    }
    /// EXIT functional `Φ^(0,1)(L(1 − ρ(1 − x));ε)`.
    fn exit(&self, x: f64, eps: f64) -> f64 {
        self.phi.big_phi_eps(self.lambda.node(self.g(x, eps)), eps)
    }
    fn design_rate(&self) -> Option<f64> {
        Some(self.rate())
    }
    fn h_prime_at_zero(&self, eps: f64) -> Option<f64> {
        Some(self.phi.phi(0.0, eps) * self.lambda.edge_prime(0.0) * self.rho.edge_prime(1.0))
    }
    fn f_strictly_increasing(&self, eps: f64) -> bool {
        eps > 0.0 && self.lambda.edge_is_strictly_increasing()
    }
}

/// `φ(x;ε)` of the shipped dicode erasure channel.
pub fn dec_phi(x: f64, eps: f64) -> f64 {
    DicodeErasure.phi(x, eps)
}

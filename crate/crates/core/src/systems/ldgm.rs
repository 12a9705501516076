use super::DegreeDistribution;
use crate::{Error, ParamSystem, Result, SupNorms, SystemFlags};

/// LDGM ensemble (an LDPC code with a degree-one variable node on each
/// check): `f(y) = λ(y)`, `g(x;ε) = 1 − (1 − ε)ρ(1 − x)`.
///
/// Zero is not a fixed point, so the coupled threshold is undefined and the
/// family is analysed through the MAP curve and `Ψ⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct LdgmSystem {
    lambda: DegreeDistribution,
    rho: DegreeDistribution,
}

impl LdgmSystem {
    pub fn new(lambda: DegreeDistribution, rho: DegreeDistribution) -> Result<Self> {
        if !lambda.edge_is_strictly_increasing() {
            return Err(Error::Construction("LDGM needs a strictly increasing λ to solve for ε(x)".into()));
        }
        Ok(LdgmSystem { lambda, rho })
    }

    pub fn lambda(&self) -> &DegreeDistribution {
        &self.lambda
    }

    pub fn rho(&self) -> &DegreeDistribution {
        &self.rho
    }
}

impl ParamSystem for LdgmSystem {
    fn eps_max(&self) -> f64 {
        1.0
    }
    fn x_max(&self) -> f64 {
        1.0
    }
    fn f(&self, y: f64, _eps: f64) -> f64 {
        self.lambda.edge(y)
    }
    fn g(&self, x: f64, eps: f64) -> f64 {
        1.0 - (1.0 - eps) * self.rho.edge(1.0 - x)
    }
    fn f_prime(&self, y: f64, _eps: f64) -> f64 {
        self.lambda.edge_prime(y)
    }
    fn g_prime(&self, x: f64, eps: f64) -> f64 {
        (1.0 - eps) * self.rho.edge_prime(1.0 - x)
    }
    fn g_second(&self, x: f64, eps: f64) -> f64 {
        -(1.0 - eps) * self.rho.edge_second(1.0 - x)
    }
    fn f_eps(&self, _y: f64, _eps: f64) -> f64 {
        0.0
    }
    fn g_eps(&self, x: f64, _eps: f64) -> f64 {
        self.rho.edge(1.0 - x)
    }
    fn f_integral(&self, y: f64, _eps: f64) -> f64 {
        self.lambda.node(y) / self.lambda.mean_degree()
    }
    fn g_integral(&self, x: f64, eps: f64) -> f64 {
        x - (1.0 - eps) * (1.0 - self.rho.node(1.0 - x)) / self.rho.mean_degree()
    }
    fn f_integral_eps(&self, _y: f64, _eps: f64) -> f64 {
        0.0
    }
    fn g_integral_eps(&self, x: f64, _eps: f64) -> f64 {
        (1.0 - self.rho.node(1.0 - x)) / self.rho.mean_degree()
    }
    fn flags(&self) -> SystemFlags {
        SystemFlags {
            proper: self.rho.edge(0.0) > 0.0,
            strict_stability: false,
            unconditionally_stable: false,
            zero_is_fixed_point: false,
        }
    }
    /// `ε(x) = 1 − (1 − λ⁻¹(x)) / ρ(1 − x)`.
    fn eps_of_x_closed(&self, x: f64) -> Option<f64> {
        let r = self.rho.edge(1.0 - x);
        let li = self.lambda.edge_inverse(x).ok()?;
        (r > 0.0).then(|| 1.0 - (1.0 - li) / r)
    }
    /// EXIT functional `1 − R(1 − x)`.
    fn exit(&self, x: f64, _eps: f64) -> f64 {
        1.0 - self.rho.node(1.0 - x)
    }
    fn sup_norms(&self, eps: f64) -> Option<SupNorms> {
        let y_max = self.y_max(eps);
        Some(SupNorms {
            f_prime: self.lambda.edge_prime(y_max),
            g_prime: (1.0 - eps) * self.rho.edge_prime(1.0),
            g_second: (1.0 - eps) * self.rho.edge_second(1.0),
        })
    }
    fn f_strictly_increasing(&self, _eps: f64) -> bool {
        true
    }
}

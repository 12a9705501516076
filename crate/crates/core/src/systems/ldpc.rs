use super::DegreeDistribution;
use crate::{ParamSystem, SupNorms, SystemFlags};

/// Irregular LDPC ensemble on the erasure channel:
/// `f(y;ε) = ελ(y)`, `g(x) = 1 − ρ(1 − x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LdpcSystem {
    lambda: DegreeDistribution,
    rho: DegreeDistribution,
}

impl LdpcSystem {
    /// `lambda` holds the variable-node side, `rho` the check-node side.
    pub fn new(lambda: DegreeDistribution, rho: DegreeDistribution) -> Self {
        LdpcSystem { lambda, rho }
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

    /// `λ'(0) ρ'(1)`; zero is stable iff `ε` times this is below one.
    pub fn stability_product(&self) -> f64 {
        self.lambda.edge_prime(0.0) * self.rho.edge_prime(1.0)
    }
}

impl ParamSystem for LdpcSystem {
    fn eps_max(&self) -> f64 {
        1.0
    }
    fn x_max(&self) -> f64 {
        1.0
    }
    fn f(&self, y: f64, eps: f64) -> f64 {
        eps * self.lambda.edge(y)
    }
    fn g(&self, x: f64, _eps: f64) -> f64 {
        1.0 - self.rho.edge(1.0 - x)
    }
    fn f_prime(&self, y: f64, eps: f64) -> f64 {
        eps * self.lambda.edge_prime(y)
    }
    fn g_prime(&self, x: f64, _eps: f64) -> f64 {
        self.rho.edge_prime(1.0 - x)
    }
    fn g_second(&self, x: f64, _eps: f64) -> f64 {
        -self.rho.edge_second(1.0 - x)
    }
    fn f_eps(&self, y: f64, _eps: f64) -> f64 {
        self.lambda.edge(y)
    }
    fn g_eps(&self, _x: f64, _eps: f64) -> f64 {
        0.0
    }
    fn f_integral(&self, y: f64, eps: f64) -> f64 {
        eps * self.lambda.node(y) / self.lambda.mean_degree()
    }
    fn g_integral(&self, x: f64, _eps: f64) -> f64 {
        x - (1.0 - self.rho.node(1.0 - x)) / self.rho.mean_degree()
    }
    fn f_integral_eps(&self, y: f64, _eps: f64) -> f64 {
        self.lambda.node(y) / self.lambda.mean_degree()
    }
    fn g_integral_eps(&self, _x: f64, _eps: f64) -> f64 {
        0.0
    }
    fn flags(&self) -> SystemFlags {
        let s = self.stability_product();
        SystemFlags {
            proper: true,
            strict_stability: s > 1.0,
            unconditionally_stable: s < 1.0,
            zero_is_fixed_point: self.lambda.edge(0.0) == 0.0,
        }
    }
    /// `ε(x) = x / λ(1 − ρ(1 − x))`.
    fn eps_of_x_closed(&self, x: f64) -> Option<f64> {
        let d = self.lambda.edge(1.0 - self.rho.edge(1.0 - x));
        (d > 0.0).then(|| x / d)
    }
    /// BP EXIT functional `L(1 − ρ(1 − x))`.
    fn exit(&self, x: f64, _eps: f64) -> f64 {
        self.lambda.node(1.0 - self.rho.edge(1.0 - x))
    }
    fn design_rate(&self) -> Option<f64> {
        Some(self.rate())
    }
    fn h_prime_at_zero(&self, eps: f64) -> Option<f64> {
        Some(eps * self.stability_product())
    }
    // λ', ρ', ρ'' have non-negative coefficients, so each sup sits at the
    // right end of its domain.
    fn sup_norms(&self, eps: f64) -> Option<SupNorms> {
        let y_max = self.y_max(eps);
        Some(SupNorms {
            f_prime: eps * self.lambda.edge_prime(y_max),
            g_prime: self.rho.edge_prime(1.0),
            g_second: self.rho.edge_second(1.0),
        })
    }
    fn f_strictly_increasing(&self, eps: f64) -> bool {
        eps > 0.0 && self.lambda.edge_is_strictly_increasing()
    }
}

use alloc::format;
use alloc::vec::Vec;

use crate::special::{bisect, Polynomial};
use crate::{Error, Result};

const NORMALIZATION_TOL: f64 = 1e-12;

/// A degree distribution in node form `L(x) = Σ Lᵢ xⁱ` together with the
/// edge-perspective polynomial `λ(x) = L'(x)/L'(1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeDistribution {
    node: Polynomial,
    edge: Polynomial,
    edge_d1: Polynomial,
    edge_d2: Polynomial,
    mean_degree: f64,
}

fn validate(coeffs: &[f64], what: &str) -> Result<()> {
    if coeffs.is_empty() {
        return Err(Error::Construction(format!("{what}: no coefficients")));
    }
    if let Some(c) = coeffs.iter().find(|c| !(c.is_finite() && **c >= 0.0)) {
        return Err(Error::Construction(format!("{what}: coefficient {c} is negative or not finite")));
    }
    let sum: f64 = coeffs.iter().sum();
    if (sum - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::Construction(format!("{what}: coefficients sum to {sum}, not 1")));
    }
    Ok(())
}

impl DegreeDistribution {
    /// From node-perspective coefficients; `coeffs[i]` is the fraction of
    /// nodes of degree `i`.
    pub fn from_node(coeffs: Vec<f64>) -> Result<Self> {
        validate(&coeffs, "node degree distribution")?;
        if coeffs[0] != 0.0 {
            return Err(Error::Construction("node degree distribution: degree-0 nodes are not allowed".into()));
        }
        let node = Polynomial::new(coeffs);
        let d = node.derivative();
        let mean_degree = d.eval(1.0);
        let edge = Polynomial::new(d.coeffs().iter().map(|c| c / mean_degree).collect());
        Ok(Self::assemble(node, edge, mean_degree))
    }

    /// From edge-perspective coefficients; `coeffs[k]` multiplies `x^k`, i.e.
    /// the fraction of edges attached to nodes of degree `k + 1`.
    pub fn from_edge(coeffs: Vec<f64>) -> Result<Self> {
        validate(&coeffs, "edge degree distribution")?;
        let edge = Polynomial::new(coeffs);
        let anti = edge.antiderivative();
        let area = anti.eval(1.0);
        let node = Polynomial::new(anti.coeffs().iter().map(|c| c / area).collect());
        Ok(Self::assemble(node, edge, 1.0 / area))
    }

    pub fn from_edge_poly(p: &Polynomial) -> Result<Self> {
        Self::from_edge(p.coeffs().to_vec())
    }

    pub fn from_node_poly(p: &Polynomial) -> Result<Self> {
        Self::from_node(p.coeffs().to_vec())
    }

    fn assemble(node: Polynomial, edge: Polynomial, mean_degree: f64) -> Self {
        let edge_d1 = edge.derivative();
        let edge_d2 = edge_d1.derivative();
        DegreeDistribution { node, edge, edge_d1, edge_d2, mean_degree }
    }

    /// `L(x)`.
    pub fn node(&self, x: f64) -> f64 {
        self.node.eval(x)
    }

    /// `λ(x)`.
    pub fn edge(&self, x: f64) -> f64 {
        self.edge.eval(x)
    }

    /// `λ'(x)`.
    pub fn edge_prime(&self, x: f64) -> f64 {
        self.edge_d1.eval(x)
    }

    /// `λ''(x)`.
    pub fn edge_second(&self, x: f64) -> f64 {
        self.edge_d2.eval(x)
    }

    /// `L'(1)`.
    pub fn mean_degree(&self) -> f64 {
        self.mean_degree
    }

    pub fn node_poly(&self) -> &Polynomial {
        &self.node
    }

    pub fn edge_poly(&self) -> &Polynomial {
        &self.edge
    }

    /// `λ` is strictly increasing on `[0, 1]` iff some edge goes to a node of
    /// degree at least 2.
    pub fn edge_is_strictly_increasing(&self) -> bool {
        self.edge.coeffs().iter().skip(1).any(|&c| c > 0.0)
    }

    /// `λ⁻¹(y)` by bisection on `[0, 1]`.
    pub fn edge_inverse(&self, y: f64) -> Result<f64> {
        let lo = self.edge(0.0);
        let hi = self.edge(1.0);
        if !(y >= lo && y <= hi) {
            return Err(Error::Domain { what: "argument of the inverse edge distribution", value: y });
        }
        if !self.edge_is_strictly_increasing() {
            return Err(Error::Precondition("edge distribution is not strictly increasing"));
        }
        if y == lo {
            return Ok(0.0);
        }
        if y == hi {
            return Ok(1.0);
        }
        bisect(|x| self.edge(x) - y, 0.0, 1.0, 1e-15)
    }
}

//! Numeric kernels shared by the rest of the crate.

mod beta;
mod hermite;
mod poly;
mod quad;
mod roots;

pub use beta::{inc_beta_density, inc_beta_density_prime, ln_beta, reg_inc_beta};
pub use hermite::{gauss_hermite, GaussHermite, GH_ORDER};
pub use poly::{ParsePolynomialError, Polynomial};
pub use quad::{adaptive_simpson, integrate, QuadratureResult, DEFAULT_QUAD_TOL};
pub use roots::{bisect, bisect_predicate, golden_min};

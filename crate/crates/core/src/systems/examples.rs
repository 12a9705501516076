//! The worked examples: fixed instances used throughout the tests and the
//! command-line `builtin` systems.

use alloc::vec;

use super::{DegreeDistribution, GldpcSystem, LdgmSystem, LdpcSystem, Pathological};
use crate::Slice;

fn node(coeffs: &[f64]) -> DegreeDistribution {
    DegreeDistribution::from_node(coeffs.to_vec()).expect("built-in distribution is normalized")
}

fn edge(coeffs: &[(usize, f64)]) -> DegreeDistribution {
    let deg = coeffs.iter().map(|c| c.0).max().unwrap_or(0);
    let mut c = vec![0.0; deg + 1];
    for &(k, v) in coeffs {
        c[k] = v;
    }
    DegreeDistribution::from_edge(c).expect("built-in distribution is normalized")
}

/// The (3,3)-regular LDPC family.
pub fn example1_family() -> LdpcSystem {
    LdpcSystem::new(node(&[0.0, 0.0, 0.0, 1.0]), node(&[0.0, 0.0, 0.0, 1.0]))
}

/// `f(x) = 0.97x²`, `g(x) = 1 − (1 − x)²`.
pub fn example1() -> Slice<LdpcSystem> {
    Slice::new(example1_family(), 0.97)
}

/// LDGM family with `λ(x) = x⁵` and
/// `R(x) = 2/15 x + 1/15 x² + 7/15 x³ + 1/3 x⁴`.
pub fn example2_family() -> LdgmSystem {
    LdgmSystem::new(
        node(&[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]),
        node(&[0.0, 2.0 / 15.0, 1.0 / 15.0, 7.0 / 15.0, 1.0 / 3.0]),
    )
    .expect("λ(x) = x⁵ is strictly increasing")
}

/// The LDGM family at `ε = 1/2`.
pub fn example2() -> Slice<LdgmSystem> {
    Slice::new(example2_family(), 0.5)
}

pub fn example3() -> Pathological {
    Pathological
}

/// Irregular LDPC with
/// `λ(x) = 4/20 x + 5/20 x² + 2/20 x⁶ + 9/20 x²⁰` and
/// `ρ(x) = 6/10 x⁴ + 4/10 x¹²`.
pub fn example8() -> LdpcSystem {
    LdpcSystem::new(
        edge(&[(1, 4.0 / 20.0), (2, 5.0 / 20.0), (6, 2.0 / 20.0), (20, 9.0 / 20.0)]),
        edge(&[(4, 6.0 / 10.0), (12, 4.0 / 10.0)]),
    )
}

/// The LDGM family analysed through its MAP EXIT curve (same instance as
/// [`example2_family`]).
pub fn example9() -> LdgmSystem {
    example2_family()
}

pub fn gldpc_31_4() -> GldpcSystem {
    GldpcSystem::new(31, 4).expect("valid parameters")
}

pub fn gldpc_63_5() -> GldpcSystem {
    GldpcSystem::new(63, 5).expect("valid parameters")
}

use alloc::vec::Vec;

/// Fixed Gauss–Hermite order for expectations over a standard Gaussian.
pub const GH_ORDER: usize = 61;

/// Nodes and weights for ∫ e^{-t²} φ(t) dt ≈ Σ wᵢ φ(tᵢ).
#[derive(Debug, Clone)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussHermite {
    /// E[φ(Z)] for Z ~ N(0, 1).
    pub fn expect<F: FnMut(f64) -> f64>(&self, mut phi: F) -> f64 {
        let s = core::f64::consts::SQRT_2;
        let mut acc = 0.0;
        for (t, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * phi(s * t);
        }
        acc / libm::sqrt(core::f64::consts::PI)
    }
}

/// Newton iteration on the orthonormal Hermite recurrence.
pub fn gauss_hermite(n: usize) -> GaussHermite {
    let pim4 = libm::pow(core::f64::consts::PI, -0.25);
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    let mut z = 0.0;
    for i in 0..m {
        z = match i {
            0 => libm::sqrt(2.0 * nf + 1.0) - 1.85575 * libm::pow(2.0 * nf + 1.0, -0.166_67),
            1 => z - 1.14 * libm::pow(nf, 0.426) / z,
            2 => 1.86 * z - 0.86 * nodes[0],
            3 => 1.91 * z - 0.91 * nodes[1],
            _ => 2.0 * z - nodes[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * libm::sqrt(2.0 / (jf + 1.0)) * p2 - libm::sqrt(jf / (jf + 1.0)) * p3;
            }
            pp = libm::sqrt(2.0 * nf) * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        nodes[i] = z;
        nodes[n - 1 - i] = -z;
        weights[i] = 2.0 / (pp * pp);
        weights[n - 1 - i] = weights[i];
    }
    // Ascending order.
    nodes.reverse();
    weights.reverse();
    GaussHermite { nodes, weights }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_moments() {
        let gh = gauss_hermite(GH_ORDER);
        assert!((gh.expect(|_| 1.0) - 1.0).abs() < 1e-13);
        assert!(gh.expect(|z| z).abs() < 1e-13);
        assert!((gh.expect(|z| z * z) - 1.0).abs() < 1e-13);
        assert!((gh.expect(|z| z.powi(4)) - 3.0).abs() < 1e-12);
        assert!((gh.expect(|z| z.powi(8)) - 105.0).abs() < 1e-9);
    }

    #[test]
    fn nodes_sorted_and_symmetric() {
        let gh = gauss_hermite(GH_ORDER);
        assert!(gh.nodes.windows(2).all(|w| w[0] < w[1]));
        for i in 0..GH_ORDER {
            assert!((gh.nodes[i] + gh.nodes[GH_ORDER - 1 - i]).abs() < 1e-12);
        }
        assert!(gh.nodes[GH_ORDER / 2].abs() < 1e-13);
        assert!(gh.weights.iter().all(|&w| w > 0.0));
    }

    #[test]
    fn smooth_expectation() {
        // E[cos Z] = e^{-1/2}
        let gh = gauss_hermite(GH_ORDER);
        assert!((gh.expect(libm::cos) - libm::exp(-0.5)).abs() < 1e-14);
    }
}

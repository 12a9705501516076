use alloc::format;

use crate::special::{gauss_hermite, GaussHermite, GH_ORDER};
use crate::{Error, Result, ScalarSystem, SupNorms};

/// Signal prior for the scalar estimation problem `Y = √snr X + Z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Prior {
    Gaussian { variance: f64 },
    /// `X = mass` with probability `prob`, else `X = 0`.
    TwoPoint { mass: f64, prob: f64 },
}

impl Prior {
    pub fn second_moment(&self) -> f64 {
        match *self {
            Prior::Gaussian { variance } => variance,
            Prior::TwoPoint { mass, prob } => prob * mass * mass,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            Prior::Gaussian { variance } => variance,
            Prior::TwoPoint { mass, prob } => prob * (1.0 - prob) * mass * mass,
        }
    }
}

/// Scalar-estimation parameters of the compressed-sensing recursion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsParams {
    pub prior: Prior,
    pub sigma2: f64,
    pub delta: f64,
}

/// Stable `π(1−π)` for posterior log-odds `l`.
fn logistic_var(l: f64) -> f64 {
    let e = libm::exp(-l.abs());
    e / ((1.0 + e) * (1.0 + e))
}

struct TwoPointSums {
    var: f64,
    var_sq: f64,
}

fn two_point_sums(gh: &GaussHermite, mass: f64, prob: f64, snr: f64) -> TwoPointSums {
    if prob <= 0.0 || prob >= 1.0 || mass == 0.0 {
        return TwoPointSums { var: 0.0, var_sq: 0.0 };
    }
    let m = libm::sqrt(snr) * mass;
    let prior_llr = libm::log(prob / (1.0 - prob));
    // Log-odds of X = mass given Y = y is prior_llr + m y − m²/2.
    let mut v0 = 0.0;
    let mut q0 = 0.0;
    let mut v1 = 0.0;
    let mut q1 = 0.0;
    let s = core::f64::consts::SQRT_2;
    for (t, w) in gh.nodes.iter().zip(&gh.weights) {
        let z = s * t;
        let a = logistic_var(prior_llr + m * z - 0.5 * m * m);
        let b = logistic_var(prior_llr + m * z + 0.5 * m * m);
        v0 += w * a;
        q0 += w * a * a;
        v1 += w * b;
        q1 += w * b * b;
    }
    let norm = 1.0 / libm::sqrt(core::f64::consts::PI);
    let m2 = mass * mass;
    TwoPointSums {
        var: m2 * norm * ((1.0 - prob) * v0 + prob * v1),
        var_sq: m2 * m2 * norm * ((1.0 - prob) * q0 + prob * q1),
    }
}

/// MMSE of a two-point prior at `snr`, computed as `E[Var(X|Y)]` with
/// order-61 Gauss–Hermite quadrature over the noise, conditioned on `X`.
pub fn mmse_two_point(params: &CsParams, snr: f64) -> Result<f64> {
    let Prior::TwoPoint { mass, prob } = params.prior else {
        return Err(Error::Precondition("mmse_two_point needs a two-point prior"));
    };
    if !(snr >= 0.0) {
        return Err(Error::Domain { what: "snr", value: snr });
    }
    Ok(two_point_sums(&gauss_hermite(GH_ORDER), mass, prob, snr).var)
}

/// Compressed sensing with a scalar prior under AMP state evolution:
/// `f(y) = mmse(1/σ² − y)`, `g(x) = 1/σ² − 1/(σ² + x/δ)`, `x_max = mmse(0)`.
#[derive(Debug, Clone)]
pub struct CsSystem {
    params: CsParams,
    x_max: f64,
    gh: GaussHermite,
}

impl CsSystem {
    pub fn new(params: CsParams) -> Result<Self> {
        if !(params.sigma2 > 0.0 && params.sigma2.is_finite()) {
            return Err(Error::Construction(format!("noise variance must be positive, got {}", params.sigma2)));
        }
        if !(params.delta > 0.0 && params.delta.is_finite()) {
            return Err(Error::Construction(format!("measurement rate must be positive, got {}", params.delta)));
        }
        match params.prior {
            Prior::Gaussian { variance } if !(variance > 0.0 && variance.is_finite()) => {
                return Err(Error::Construction(format!("prior variance must be positive, got {variance}")));
            }
            Prior::TwoPoint { mass, prob } if !(mass.is_finite() && mass != 0.0 && prob > 0.0 && prob < 1.0) => {
                return Err(Error::Construction(format!(
                    "two-point prior needs a nonzero mass and 0 < prob < 1, got mass {mass}, prob {prob}"
                )));
            }
            _ => {}
        }
        let x_max = params.prior.variance();
        Ok(CsSystem { params, x_max, gh: gauss_hermite(GH_ORDER) })
    }

    pub fn params(&self) -> &CsParams {
        &self.params
    }

    pub fn mmse(&self, snr: f64) -> f64 {
        match self.params.prior {
            Prior::Gaussian { variance } => variance / (1.0 + variance * snr),
            Prior::TwoPoint { mass, prob } => two_point_sums(&self.gh, mass, prob, snr).var,
        }
    }

    /// `d mmse / d snr = −E[Var(X|Y)²]`.
    pub fn mmse_prime(&self, snr: f64) -> f64 {
        match self.params.prior {
            Prior::Gaussian { variance } => {
                let d = 1.0 + variance * snr;
                -variance * variance / (d * d)
            }
            Prior::TwoPoint { mass, prob } => -two_point_sums(&self.gh, mass, prob, snr).var_sq,
        }
    }

    fn inv_sigma2(&self) -> f64 {
        1.0 / self.params.sigma2
    }

    /// Mutual-information form of `F` for a Gaussian prior:
    /// `ln(1 + v/σ²) − ln(1 + v(1/σ² − y))`.
    pub fn f_integral_mutual_information(&self, y: f64) -> Result<f64> {
        let Prior::Gaussian { variance } = self.params.prior else {
            return Err(Error::Unsupported("closed-form mutual information needs a Gaussian prior"));
        };
        Ok(libm::log1p(variance * self.inv_sigma2()) - libm::log1p(variance * (self.inv_sigma2() - y)))
    }

    /// Uncoupled fixed point for a unit-variance Gaussian prior: the positive
    /// root of `x²/δ + x(σ² + 1 − 1/δ) − σ² = 0`.
    pub fn gaussian_fixed_point(&self) -> Result<f64> {
        let Prior::Gaussian { variance } = self.params.prior else {
            return Err(Error::Unsupported("closed-form fixed point needs a Gaussian prior"));
        };
        // General v: x = v(σ² + x/δ)/(σ² + x/δ + v).
        let (s, d) = (self.params.sigma2, self.params.delta);
        let a = 1.0 / d;
        let b = s + variance - variance / d;
        let c = -variance * s;
        let disc = libm::sqrt(b * b - 4.0 * a * c);
        // Cancellation-free positive root.
        Ok(if b >= 0.0 { 2.0 * c / (-b - disc) } else { (-b + disc) / (2.0 * a) })
    }
}

impl ScalarSystem for CsSystem {
    fn x_max(&self) -> f64 {
        self.x_max
    }
    fn f(&self, y: f64) -> f64 {
        self.mmse(self.inv_sigma2() - y)
    }
    fn g(&self, x: f64) -> f64 {
        self.inv_sigma2() - 1.0 / (self.params.sigma2 + x / self.params.delta)
    }
    fn f_prime(&self, y: f64) -> f64 {
        -self.mmse_prime(self.inv_sigma2() - y)
    }
    fn g_prime(&self, x: f64) -> f64 {
        let d = self.params.sigma2 + x / self.params.delta;
        1.0 / (self.params.delta * d * d)
    }
    fn g_second(&self, x: f64) -> f64 {
        let d = self.params.sigma2 + x / self.params.delta;
        -2.0 / (self.params.delta * self.params.delta * d * d * d)
    }
    fn g_integral(&self, x: f64) -> f64 {
        x * self.inv_sigma2() - self.params.delta * libm::log1p(x / (self.params.delta * self.params.sigma2))
    }
    fn f_strictly_increasing(&self) -> bool {
        true
    }
    fn sup_norms(&self) -> Option<SupNorms> {
        let Prior::Gaussian { variance } = self.params.prior else {
            return None;
        };
        let (s, d) = (self.params.sigma2, self.params.delta);
        // −mmse' decreases in snr, so its sup is at the smallest snr reached.
        let snr_min = self.inv_sigma2() - self.y_max();
        let den = 1.0 + variance * snr_min;
        Some(SupNorms {
            f_prime: variance * variance / (den * den),
            g_prime: 1.0 / (d * s * s),
            g_second: 2.0 / (d * d * s * s * s),
        })
    }
}

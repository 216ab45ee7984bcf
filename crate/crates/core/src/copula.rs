//! Bivariate copulas: independence and Clayton.
//!
//! Clayton forms are evaluated in log-space through
//! `S = u1^{-θ} + u2^{-θ} - 1`, written as `ln S = M + ln(1 + e^{-M} expm1(m))`
//! with `M, m` the larger and smaller of `-θ ln u_i`. This stays finite for
//! tiny `u` at large `θ`.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CopulaError {
    #[error("Clayton parameter must be finite and positive, got {0}")]
    BadTheta(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DependenceModel {
    Independent,
    Clayton { theta: f64 },
}

impl DependenceModel {
    pub fn clayton(theta: f64) -> Result<Self, CopulaError> {
        if theta.is_finite() && theta > 0.0 {
            Ok(Self::Clayton { theta })
        } else {
            Err(CopulaError::BadTheta(theta))
        }
    }

    pub fn is_independent(&self) -> bool {
        matches!(self, Self::Independent)
    }

    /// `C(u1, u2)`.
    pub fn cdf(&self, u1: f64, u2: f64) -> f64 {
        let (u1, u2) = (u1.clamp(0.0, 1.0), u2.clamp(0.0, 1.0));
        match *self {
            Self::Independent => u1 * u2,
            Self::Clayton { theta } => {
                if u1 == 0.0 || u2 == 0.0 {
                    return 0.0;
                }
                if u2 == 1.0 {
                    return u1;
                }
                if u1 == 1.0 {
                    return u2;
                }
                let ls = ln_s(theta, u1.ln(), u2.ln());
                (-ls / theta).exp().min(u1.min(u2))
            }
        }
    }

    /// `∂C/∂u1`, the conditional CDF of `U2` given `U1 = u1`.
    pub fn partial_u1(&self, u1: f64, u2: f64) -> f64 {
        let u2 = u2.clamp(0.0, 1.0);
        match *self {
            Self::Independent => u2,
            Self::Clayton { theta } => {
                if u2 == 0.0 {
                    return 0.0;
                }
                if u2 == 1.0 {
                    return 1.0;
                }
                if u1 <= 0.0 {
                    // Limit as u1 → 0 is 1 for any fixed u2 > 0.
                    return 1.0;
                }
                let l1 = u1.min(1.0).ln();
                let ls = ln_s(theta, l1, u2.ln());
                ((-theta - 1.0) * l1 + (-1.0 / theta - 1.0) * ls).exp().clamp(0.0, 1.0)
            }
        }
    }

    /// Copula density `c(u1, u2)`.
    pub fn density(&self, u1: f64, u2: f64) -> f64 {
        match *self {
            Self::Independent => 1.0,
            Self::Clayton { theta } => self.ln_density_clayton(theta, u1, u2).exp(),
        }
    }

    pub fn ln_density(&self, u1: f64, u2: f64) -> f64 {
        match *self {
            Self::Independent => 0.0,
            Self::Clayton { theta } => self.ln_density_clayton(theta, u1, u2),
        }
    }

    fn ln_density_clayton(&self, theta: f64, u1: f64, u2: f64) -> f64 {
        if !(u1 > 0.0 && u2 > 0.0) {
            return f64::NEG_INFINITY;
        }
        let (l1, l2) = (u1.min(1.0).ln(), u2.min(1.0).ln());
        let ls = ln_s(theta, l1, l2);
        theta.ln_1p() + (-1.0 - theta) * (l1 + l2) + (-2.0 - 1.0 / theta) * ls
    }

    /// Inverse of `partial_u1` in `u2`: the `u2` with `∂C/∂u1(u1, u2) = w`.
    pub fn conditional_quantile(&self, u1: f64, w: f64) -> f64 {
        match *self {
            Self::Independent => w,
            Self::Clayton { theta } => {
                if w <= 0.0 {
                    return 0.0;
                }
                if w >= 1.0 {
                    return 1.0;
                }
                if u1 <= 0.0 {
                    return 0.0;
                }
                // u2^{-θ} = 1 + (w^{-θ/(1+θ)} - 1) u1^{-θ}
                let a = (-(theta / (1.0 + theta)) * w.ln()).exp_m1();
                let b = -theta * u1.min(1.0).ln();
                let ln_term = a.ln() + b;
                let ln_sum = if ln_term > 0.0 {
                    ln_term + (-ln_term).exp().ln_1p()
                } else {
                    ln_term.exp().ln_1p()
                };
                (-ln_sum / theta).exp()
            }
        }
    }

    /// Pair `(u1, u2)` with joint law `C`, by conditional inversion.
    pub fn sample_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let u1 = open_unit(rng);
        let w = open_unit(rng);
        (u1, self.conditional_quantile(u1, w))
    }

    /// Kendall's tau.
    pub fn kendall_tau(&self) -> f64 {
        match *self {
            Self::Independent => 0.0,
            Self::Clayton { theta } => theta / (theta + 2.0),
        }
    }
}

/// Uniform on the open interval (0, 1).
pub(crate) fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

/// `ln(e^{a} + e^{b} - 1)` with `a = -θ ln u1`, `b = -θ ln u2`, both `≥ 0`.
fn ln_s(theta: f64, ln_u1: f64, ln_u2: f64) -> f64 {
    let a = -theta * ln_u1;
    let b = -theta * ln_u2;
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    // e^{-hi}(e^{lo} - 1), regrouped once e^{lo} would overflow.
    let r = if lo < 700.0 { (-hi).exp() * lo.exp_m1() } else { (lo - hi).exp() - (-hi).exp() };
    hi + r.ln_1p()
}

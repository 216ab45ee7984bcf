//! Fisher-Snedecor F distributed SNR.
//!
//! With `λ = m / (m_s γ̄)`, the variate `λγ` is beta-prime distributed with
//! shapes `(m, m_s)`, so `λγ / (1 + λγ) ~ Beta(m, m_s)`. Every routine here
//! goes through that map.
//!
//! `γ̄` enters only through `λ`. Under this parameterization
//! `E[γ] = m_s γ̄ / (m_s - 1)` for `m_s > 1`; the reading `E[γ] = γ̄` instead
//! corresponds to rescaling `γ̄` by `(m_s - 1)/m_s` before construction.

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::specfun::{ln_gamma, BetaDist};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FadingError {
    #[error("fading parameter {name} must be finite and positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FadingParams {
    m: f64,
    ms: f64,
    mean_snr: f64,
}

impl FadingParams {
    pub fn new(m: f64, ms: f64, mean_snr: f64) -> Result<Self, FadingError> {
        for (name, value) in [("m", m), ("m_s", ms), ("mean_snr", mean_snr)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(FadingError::NonPositive { name, value });
            }
        }
        Ok(Self { m, ms, mean_snr })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn ms(&self) -> f64 {
        self.ms
    }

    pub fn mean_snr(&self) -> f64 {
        self.mean_snr
    }

    pub fn with_mean_snr(&self, mean_snr: f64) -> Result<Self, FadingError> {
        Self::new(self.m, self.ms, mean_snr)
    }

    pub fn lambda(&self) -> f64 {
        self.m / (self.ms * self.mean_snr)
    }

    /// `E[γ]`, infinite when `m_s ≤ 1`.
    pub fn mean(&self) -> f64 {
        if self.ms > 1.0 {
            self.ms * self.mean_snr / (self.ms - 1.0)
        } else {
            f64::INFINITY
        }
    }

    fn beta(&self) -> BetaDist {
        BetaDist::new(self.m, self.ms)
    }

    /// Beta variable and its complement for `λγ`, without cancellation.
    fn beta_pair(&self, gamma: f64) -> (f64, f64) {
        let t = self.lambda() * gamma;
        if t.is_infinite() {
            return (1.0, 0.0);
        }
        (t / (1.0 + t), 1.0 / (1.0 + t))
    }

    pub fn cdf(&self, gamma: f64) -> f64 {
        if gamma.is_nan() {
            return f64::NAN;
        }
        if gamma <= 0.0 {
            return 0.0;
        }
        let (x, y) = self.beta_pair(gamma);
        self.beta().cdf(x, y)
    }

    pub fn sf(&self, gamma: f64) -> f64 {
        if gamma.is_nan() {
            return f64::NAN;
        }
        if gamma <= 0.0 {
            return 1.0;
        }
        let (x, y) = self.beta_pair(gamma);
        self.beta().sf(x, y)
    }

    pub fn ln_pdf(&self, gamma: f64) -> f64 {
        if gamma < 0.0 {
            return f64::NEG_INFINITY;
        }
        let lambda = self.lambda();
        let t = lambda * gamma;
        let norm = ln_gamma(self.m + self.ms) - ln_gamma(self.m) - ln_gamma(self.ms);
        let power = if gamma == 0.0 {
            match self.m.partial_cmp(&1.0) {
                Some(std::cmp::Ordering::Less) => f64::INFINITY,
                Some(std::cmp::Ordering::Equal) => 0.0,
                _ => f64::NEG_INFINITY,
            }
        } else {
            (self.m - 1.0) * t.ln()
        };
        lambda.ln() + norm + power - (self.m + self.ms) * t.ln_1p()
    }

    pub fn pdf(&self, gamma: f64) -> f64 {
        if gamma < 0.0 {
            return 0.0;
        }
        self.ln_pdf(gamma).exp()
    }

    /// Inverse CDF; `u = 1` maps to `+∞`.
    pub fn quantile(&self, u: f64) -> f64 {
        if u.is_nan() || !(0.0..=1.0).contains(&u) {
            return f64::NAN;
        }
        if u == 0.0 {
            return 0.0;
        }
        if u == 1.0 {
            return f64::INFINITY;
        }
        let (x, y) = self.beta().inverse(u, 1.0 - u);
        self.from_beta_pair(x, y)
    }

    /// Inverse survival function, accurate for small `q`.
    pub fn quantile_sf(&self, q: f64) -> f64 {
        if q.is_nan() || !(0.0..=1.0).contains(&q) {
            return f64::NAN;
        }
        if q == 0.0 {
            return f64::INFINITY;
        }
        if q == 1.0 {
            return 0.0;
        }
        let (x, y) = self.beta().inverse(1.0 - q, q);
        self.from_beta_pair(x, y)
    }

    fn from_beta_pair(&self, x: f64, y: f64) -> f64 {
        if y <= 0.0 {
            return f64::INFINITY;
        }
        (x / y) / self.lambda()
    }

    /// `F₂(s − F₁⁻¹(u₁))`, zero once the quantile reaches `s`.
    pub fn tau_transform(p1: &FadingParams, p2: &FadingParams, s: f64, u1: f64) -> f64 {
        let g1 = p1.quantile(u1);
        if g1 >= s {
            return 0.0;
        }
        p2.cdf(s - g1)
    }

    pub fn sampler(&self) -> FadingSampler {
        FadingSampler::new(self)
    }
}

/// Direct sampler using `λγ = X/Y` with `X ~ Gamma(m, 1)`, `Y ~ Gamma(m_s, 1)`.
#[derive(Debug, Clone)]
pub struct FadingSampler {
    num: Gamma<f64>,
    den: Gamma<f64>,
    inv_lambda: f64,
}

impl FadingSampler {
    pub fn new(p: &FadingParams) -> Self {
        Self {
            num: Gamma::new(p.m, 1.0).expect("positive shape"),
            den: Gamma::new(p.ms, 1.0).expect("positive shape"),
            inv_lambda: 1.0 / p.lambda(),
        }
    }
}

impl Distribution<f64> for FadingSampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let x = self.num.sample(rng);
        let y = self.den.sample(rng);
        self.inv_lambda * x / y
    }
}

//! Seeded Monte Carlo estimates of outage probability, average capacity and
//! SNR correlation.
//!
//! Samples are drawn in blocks of `batch`. Block `b` uses ChaCha8 seeded with
//! `seed_from_u64(seed)` on stream `b`, so every block is reproducible on its
//! own and results do not depend on how blocks are scheduled across threads.
//! Per-block moments are merged in block order. [`SEED_SCHEMA`] versions this
//! layout.
//!
//! Independent links are sampled as `γ = X / (λ Y)` with `X ~ Gamma(m)`,
//! `Y ~ Gamma(m_s)`. Clayton-coupled links are sampled by conditional
//! inversion of the copula followed by the marginal quantiles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::copula::DependenceModel;
use crate::fading::{FadingParams, FadingSampler};
use crate::metrics::{capacity, effective_snr, Estimate, MacScenario, Method};

/// Version of the block/stream layout. Bump when sampled streams change.
pub const SEED_SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum McError {
    #[error("n_samples must be at least {min}, got {got}")]
    TooFewSamples { min: u64, got: u64 },
    #[error("batch must be positive")]
    ZeroBatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub n_samples: u64,
    pub seed: u64,
    pub batch: u64,
}

impl McConfig {
    pub const DEFAULT_BATCH: u64 = 65_536;

    pub fn new(n_samples: u64, seed: u64) -> Result<Self, McError> {
        Self::with_batch(n_samples, seed, Self::DEFAULT_BATCH)
    }

    pub fn with_batch(n_samples: u64, seed: u64, batch: u64) -> Result<Self, McError> {
        if n_samples < 1 {
            return Err(McError::TooFewSamples { min: 1, got: n_samples });
        }
        if batch == 0 {
            return Err(McError::ZeroBatch);
        }
        Ok(Self { n_samples, seed, batch })
    }

    /// Configuration for the `index`-th point of a sweep, on its own seed.
    pub fn for_point(&self, index: u64) -> Self {
        Self {
            seed: splitmix64(self.seed ^ splitmix64(index.wrapping_add(0x5EED))),
            ..*self
        }
    }

    fn blocks(&self) -> impl IndexedParallelIterator<Item = (u64, u64)> + '_ {
        let count = self.n_samples.div_ceil(self.batch) as usize;
        (0..count).into_par_iter().map(move |b| {
            let b = b as u64;
            let start = b * self.batch;
            (b, self.batch.min(self.n_samples - start))
        })
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

pub fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Draws `(γ1, γ2)` for fixed links and dependence.
#[derive(Debug, Clone)]
pub enum PairSampler {
    Independent(FadingSampler, FadingSampler),
    Copula {
        model: DependenceModel,
        link1: FadingParams,
        link2: FadingParams,
    },
}

impl PairSampler {
    pub fn new(link1: &FadingParams, link2: &FadingParams, model: DependenceModel) -> Self {
        match model {
            DependenceModel::Independent => Self::Independent(link1.sampler(), link2.sampler()),
            _ => Self::Copula {
                model,
                link1: *link1,
                link2: *link2,
            },
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        match self {
            Self::Independent(a, b) => (a.sample(rng), b.sample(rng)),
            Self::Copula { model, link1, link2 } => {
                let (u1, u2) = model.sample_pair(rng);
                (link1.quantile(u1), link2.quantile(u2))
            }
        }
    }
}

/// One `(γ1, γ2)` draw by copula sampling and marginal inversion.
pub fn sample_snr_pair<R: Rng + ?Sized>(s: &MacScenario, rng: &mut R) -> (f64, f64) {
    let (u1, u2) = s.dependence.sample_pair(rng);
    (s.link1.quantile(u1), s.link2.quantile(u2))
}

/// Welford mean and variance, mergeable with Chan's update.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub n: u64,
    pub mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&mut self, o: &Self) {
        if o.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *o;
            return;
        }
        let n = (self.n + o.n) as f64;
        let d = o.mean - self.mean;
        self.mean += d * o.n as f64 / n;
        self.m2 += o.m2 + d * d * self.n as f64 * o.n as f64 / n;
        self.n += o.n;
    }

    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    pub fn std_error(&self) -> f64 {
        (self.variance() / self.n.max(1) as f64).sqrt()
    }
}

/// Streaming co-moments for a Pearson correlation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CoMoments {
    pub n: u64,
    mx: f64,
    my: f64,
    sxx: f64,
    syy: f64,
    sxy: f64,
}

impl CoMoments {
    pub fn push(&mut self, x: f64, y: f64) {
        self.n += 1;
        let n = self.n as f64;
        let dx = x - self.mx;
        let dy = y - self.my;
        self.mx += dx / n;
        self.my += dy / n;
        self.sxx += dx * (x - self.mx);
        self.syy += dy * (y - self.my);
        self.sxy += dx * (y - self.my);
    }

    pub fn merge(&mut self, o: &Self) {
        if o.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *o;
            return;
        }
        let (na, nb) = (self.n as f64, o.n as f64);
        let n = na + nb;
        let dx = o.mx - self.mx;
        let dy = o.my - self.my;
        let f = na * nb / n;
        self.sxx += o.sxx + dx * dx * f;
        self.syy += o.syy + dy * dy * f;
        self.sxy += o.sxy + dx * dy * f;
        self.mx += dx * nb / n;
        self.my += dy * nb / n;
        self.n += o.n;
    }

    pub fn pearson(&self) -> f64 {
        let den = (self.sxx * self.syy).sqrt();
        if den > 0.0 {
            (self.sxy / den).clamp(-1.0, 1.0)
        } else {
            0.0
        }
    }
}

fn failure(s: &MacScenario, g1: f64, g2: f64) -> bool {
    effective_snr(s.scenario, g1, g2) <= s.gamma_t()
}

/// Fraction of draws in outage, with a binomial standard error.
///
/// The SE uses `p̃ = (k+1)/(n+2)` so that an empty or full count still
/// reports a nonzero uncertainty.
pub fn estimate_op(s: &MacScenario, cfg: &McConfig) -> Estimate {
    let sampler = PairSampler::new(&s.link1, &s.link2, s.dependence);
    let counts: Vec<u64> = cfg
        .blocks()
        .map(|(b, size)| {
            let mut rng = block_rng(cfg.seed, b);
            let mut k = 0;
            for _ in 0..size {
                let (g1, g2) = sampler.sample(&mut rng);
                k += failure(s, g1, g2) as u64;
            }
            k
        })
        .collect();
    let k: u64 = counts.iter().sum();
    let n = cfg.n_samples as f64;
    let smoothed = (k as f64 + 1.0) / (n + 2.0);
    Estimate::new(k as f64 / n, (smoothed * (1.0 - smoothed) / n).sqrt(), Method::MonteCarlo)
}

/// Sample mean of the instantaneous sum-rate bound.
pub fn estimate_ac(s: &MacScenario, cfg: &McConfig) -> Estimate {
    let sampler = PairSampler::new(&s.link1, &s.link2, s.dependence);
    let blocks: Vec<Moments> = cfg
        .blocks()
        .map(|(b, size)| {
            let mut rng = block_rng(cfg.seed, b);
            let mut m = Moments::default();
            for _ in 0..size {
                let (g1, g2) = sampler.sample(&mut rng);
                m.push(capacity(s.scenario, g1, g2));
            }
            m
        })
        .collect();
    let mut total = Moments::default();
    for m in &blocks {
        total.merge(m);
    }
    Estimate::new(total.mean, total.std_error(), Method::MonteCarlo)
}

/// Pearson correlation of coupled SNR pairs; SE from the Fisher-z interval.
pub fn estimate_rho(link1: &FadingParams, link2: &FadingParams, model: DependenceModel, cfg: &McConfig) -> Estimate {
    let sampler = PairSampler::new(link1, link2, model);
    let blocks: Vec<CoMoments> = cfg
        .blocks()
        .map(|(b, size)| {
            let mut rng = block_rng(cfg.seed, b);
            let mut m = CoMoments::default();
            for _ in 0..size {
                let (g1, g2) = sampler.sample(&mut rng);
                m.push(g1, g2);
            }
            m
        })
        .collect();
    let mut total = CoMoments::default();
    for m in &blocks {
        total.merge(m);
    }
    let r = total.pearson();
    let normal = (1.0 - r * r) / ((total.n as f64 - 3.0).max(1.0)).sqrt();
    // Heavy tails make the normal-theory SE optimistic; the spread of
    // per-block estimates does not assume finite fourth moments.
    let mut spread = Moments::default();
    for m in blocks.iter().filter(|m| m.n == cfg.batch) {
        spread.push(m.pearson());
    }
    let batch = if spread.n >= 8 { spread.std_error() } else { 0.0 };
    Estimate::new(r, normal.max(batch), Method::MonteCarlo)
}

/// Scatter of `n` coupled pairs from a single stream.
pub fn scatter(link1: &FadingParams, link2: &FadingParams, model: DependenceModel, n: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = block_rng(seed, 0);
    let sampler = PairSampler::Copula {
        model,
        link1: *link1,
        link2: *link2,
    };
    (0..n).map(|_| sampler.sample(&mut rng)).collect()
}

//! Outage probability and average capacity of two-user multiple access
//! channels under Fisher-Snedecor F fading, with independent or
//! Clayton-copula-coupled links.
//!
//! Two scenarios are covered: the clean MAC, whose sum rate is limited by
//! `½ log₂(1 + γ₁ + γ₂)`, and the doubly dirty MAC in the strong-interference
//! limit, limited by `½ log₂(1 + min(γ₁, γ₂))`. Every metric has at least two
//! evaluation routes (closed form through Meijer G-functions, deterministic
//! quadrature, seeded Monte Carlo) so they can be checked against each other.
//!
//! Module map:
//! - [`specfun`]: log-gamma, regularized incomplete beta and its inverse
//! - [`quad`]: adaptive Gauss–Kronrod, tanh-sinh, semi-infinite and 2-D rules
//! - [`meijer`]: Mellin–Barnes evaluation of univariate and bivariate G
//! - [`copula`]: independence and Clayton copulas
//! - [`fading`]: the F-distributed SNR law
//! - [`metrics`]: outage probability, average capacity, correlation
//! - [`mcsim`]: reproducible Monte Carlo oracle

pub mod copula;
pub mod fading;
pub mod mcsim;
pub mod meijer;
pub mod metrics;
pub mod quad;
pub mod specfun;

pub use copula::DependenceModel;
pub use fading::FadingParams;
pub use mcsim::McConfig;
pub use metrics::{Estimate, MacScenario, Method, Scenario};

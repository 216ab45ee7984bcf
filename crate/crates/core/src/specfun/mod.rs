//! Gamma and beta special functions.

mod beta;
mod gamma;

pub use beta::{
    beta_regularized, beta_regularized_inverse, generalized_beta_inverse_paper_convention,
    BetaDist, BetaRegularizedQuery,
};
pub use gamma::{gamma, ln_beta, ln_gamma, log_gamma};
#[allow(unused_imports)]
pub(crate) use gamma::log_gamma_unchecked;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecFunError {
    #[error("gamma pole at {0}")]
    Pole(f64),
    #[error("domain error: {0}")]
    Domain(String),
}
